#include "panicsim/ingest_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "panicsim/errors.hpp"

namespace panicsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return cells;
}

bool is_missing(std::string_view cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan";
}

bool parse_double(std::string_view cell, double& out) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc{} && ptr == cell.data() + cell.size() && std::isfinite(out);
}

bool parse_integer(std::string_view s, long long& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

// Integer labels compare numerically, anything else (ISO-8601) lexically.
bool date_less(const std::string& a, const std::string& b) {
    long long ia = 0, ib = 0;
    if (parse_integer(a, ia) && parse_integer(b, ib)) return ia < ib;
    return a < b;
}

bool content_line(const std::string& line) {
    return !trim(line).empty();
}

}  // namespace

LoadResult load_panel(std::istream& source) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (content_line(line)) break;
    }
    if (line_no == 0 || !content_line(line)) throw DataError("load_panel: missing header row");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM

    const auto header = split(line);
    if (header.size() < 2 || header[0].empty()) throw DataError("load_panel: malformed header", line_no);
    std::vector<std::string> tickers;
    std::unordered_set<std::string> seen;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].empty()) throw DataError("load_panel: empty ticker name in header", line_no, c + 1);
        std::string name(header[c]);
        if (!seen.insert(name).second) throw DataError("load_panel: duplicate ticker '" + name + "'", line_no, c + 1);
        tickers.push_back(std::move(name));
    }
    const std::size_t n = tickers.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return tickers[a] < tickers[b]; });

    LoadResult result;
    std::vector<double> flat;
    std::vector<double> row(n);
    std::unordered_set<std::string> dates_seen;
    while (std::getline(source, line)) {
        ++line_no;
        if (!content_line(line)) continue;
        const auto cells = split(line);
        if (cells.size() != n + 1) {
            throw DataError("load_panel: expected " + std::to_string(n + 1) + " cells, found " +
                                std::to_string(cells.size()) + " on line " + std::to_string(line_no),
                            line_no);
        }
        std::string date(cells[0]);
        if (date.empty()) throw DataError("load_panel: empty date on line " + std::to_string(line_no), line_no, 1);
        if (!dates_seen.insert(date).second) {
            throw DataError("load_panel: duplicate date '" + date + "'", line_no, 1);
        }
        bool missing = false;
        for (std::size_t c = 0; c < n; ++c) {
            const auto cell = cells[c + 1];
            if (is_missing(cell)) {
                missing = true;
                continue;
            }
            if (!parse_double(cell, row[c])) {
                throw DataError("load_panel: non-numeric cell '" + std::string(cell) + "' at line " +
                                    std::to_string(line_no) + ", column " + std::to_string(c + 2),
                                line_no, c + 2);
            }
        }
        if (missing) {
            ++result.report.dropped_rows;
            continue;
        }
        if (!result.panel.dates.empty() && !date_less(result.panel.dates.back(), date)) {
            throw DataError("load_panel: dates not strictly increasing at '" + date + "'", line_no, 1);
        }
        result.panel.dates.push_back(std::move(date));
        for (std::size_t c = 0; c < n; ++c) flat.push_back(row[order[c]]);
    }

    const std::size_t t = result.panel.dates.size();
    if (n < 2) throw DataError("load_panel: need at least 2 assets");
    if (t < 2) throw DataError("load_panel: fewer than 2 complete rows");
    result.panel.values = Eigen::Map<const Matrix>(flat.data(), static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(n));
    for (std::size_t c = 0; c < n; ++c) result.panel.tickers.push_back(tickers[order[c]]);
    result.report.parsed_rows = t;
    result.report.assets = n;
    return result;
}

ReturnsPanel prices_to_returns(const ReturnsPanel& prices, ReturnKind kind) {
    if (prices.n_times() < 2) throw DataError("prices_to_returns: need at least 2 rows");
    for (Eigen::Index i = 0; i < prices.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < prices.values.cols(); ++j) {
            const double p = prices.values(i, j);
            if (!(p > 0.0) || !std::isfinite(p)) {
                throw DataError("prices_to_returns: non-positive price at row " + std::to_string(i) + ", column " +
                                    std::to_string(j),
                                static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
        }
    }
    const Eigen::Index t = prices.values.rows();
    ReturnsPanel out;
    out.tickers = prices.tickers;
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    const auto ratio = prices.values.bottomRows(t - 1).array() / prices.values.topRows(t - 1).array();
    out.values = kind == ReturnKind::Log ? Matrix(ratio.log().matrix()) : Matrix((ratio - 1.0).matrix());
    return out;
}

std::string format_double(double v) {
    if (!std::isfinite(v)) return {};
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::size_t write_series(std::span<const NamedSeries> columns, std::ostream& sink) {
    std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
    for (const auto& c : columns) {
        if (c.values.size() != rows) throw DomainError("write_series: columns differ in length");
    }
    bool any_missing = false;
    for (const auto& c : columns) {
        any_missing = any_missing || std::any_of(c.values.begin(), c.values.end(), [](double v) { return !std::isfinite(v); });
    }
    std::ostringstream out;
    out << 't';
    for (const auto& c : columns) out << ',' << c.name;
    if (any_missing) out << ",flag";
    out << '\n';
    for (std::size_t t = 0; t < rows; ++t) {
        out << t;
        bool flagged = false;
        for (const auto& c : columns) {
            out << ',' << format_double(c.values[t]);
            flagged = flagged || !std::isfinite(c.values[t]);
        }
        if (any_missing) out << ',' << (flagged ? 1 : 0);
        out << '\n';
    }
    const std::string text = out.str();
    sink.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!sink) throw std::runtime_error("write_series: sink write failed");
    return text.size();
}

std::vector<NamedSeries> read_series(std::istream& source) {
    std::string line;
    if (!std::getline(source, line)) throw DataError("read_series: missing header");
    const auto header = split(line);
    if (header.empty() || header[0] != "t") throw DataError("read_series: header must start with 't'");
    std::size_t n = header.size() - 1;
    const bool has_flag = n > 0 && header.back() == "flag";
    if (has_flag) --n;
    std::vector<NamedSeries> cols(n);
    for (std::size_t c = 0; c < n; ++c) cols[c].name = std::string(header[c + 1]);
    std::size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        if (!content_line(line)) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) throw DataError("read_series: ragged row", line_no);
        for (std::size_t c = 0; c < n; ++c) {
            double v = std::numeric_limits<double>::quiet_NaN();
            if (!cells[c + 1].empty() && !parse_double(cells[c + 1], v)) {
                throw DataError("read_series: non-numeric cell", line_no, c + 2);
            }
            cols[c].values.push_back(v);
        }
    }
    return cols;
}

std::size_t write_panel(const ReturnsPanel& panel, std::ostream& sink) {
    std::ostringstream out;
    out << "date";
    for (const auto& t : panel.tickers) out << ',' << t;
    out << '\n';
    for (std::size_t i = 0; i < panel.n_times(); ++i) {
        out << panel.dates.at(i);
        for (double v : panel.row(i)) out << ',' << format_double(v);
        out << '\n';
    }
    const std::string text = out.str();
    sink.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!sink) throw std::runtime_error("write_panel: sink write failed");
    return text.size();
}

nlohmann::json summaries_to_json(std::span<const CrossSectionSummary> rows) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        out.push_back({{"mean", r.mean},
                       {"dispersion", r.dispersion},
                       {"skew", opt(r.skew)},
                       {"excess_kurtosis", opt(r.excess_kurtosis)},
                       {"s", r.s},
                       {"n_up", r.n_up},
                       {"n_down", r.n_down},
                       {"n_zero", r.n_zero}});
    }
    return out;
}

}  // namespace panicsim
