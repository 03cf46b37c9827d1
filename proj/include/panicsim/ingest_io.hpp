#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "panicsim/cross_section.hpp"
#include "panicsim/panel.hpp"

namespace panicsim {

struct LoadReport {
    std::size_t parsed_rows = 0;
    std::size_t dropped_rows = 0;
    std::size_t assets = 0;
};

struct LoadResult {
    ReturnsPanel panel;
    LoadReport report;
};

/// Wide CSV: header "date,TICKER1,TICKER2,...", one row per date.
///
/// Rows with an empty (or NA / NaN) cell are dropped and counted. Columns are
/// reordered by ticker name so permuted files load identically. Throws
/// DataError on a malformed header, non-numeric cell (row/col reported,
/// 1-based file line and column), duplicate or decreasing dates, or when
/// fewer than 2 rows or 2 assets survive.
LoadResult load_panel(std::istream& source);

enum class ReturnKind { Log, Simple };

/// T price rows -> T-1 return rows. Throws DataError on a non-positive price.
ReturnsPanel prices_to_returns(const ReturnsPanel& prices, ReturnKind kind);

struct NamedSeries {
    std::string name;
    std::vector<double> values;
};

/// Shortest round-trip decimal rendering; "nan"/"inf" never appear.
std::string format_double(double v);

/// CSV "t,<name>,...", LF endings. Non-finite cells are written empty and a
/// trailing "flag" column marks such rows. Returns the number of bytes written.
std::size_t write_series(std::span<const NamedSeries> columns, std::ostream& sink);

/// Inverse of write_series; empty cells come back as NaN, the flag column is dropped.
std::vector<NamedSeries> read_series(std::istream& source);

/// Panel in the load_panel layout.
std::size_t write_panel(const ReturnsPanel& panel, std::ostream& sink);

/// [{mean, dispersion, skew, excess_kurtosis, s, n_up, n_down, n_zero}, ...]; undefined moments are null.
nlohmann::json summaries_to_json(std::span<const CrossSectionSummary> rows);

}  // namespace panicsim
