#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "panicsim/cross_section.hpp"
#include "panicsim/panel.hpp"
#include "panicsim/scenario_engine.hpp"

namespace panicsim {

/// Inclusive row range [first, last].
struct RowWindow {
    std::size_t first = 0;
    std::size_t last = 0;

    bool contains(std::size_t t) const noexcept { return t >= first && t <= last; }
};

struct AnalysisWindows {
    std::optional<RowWindow> normal;
    std::optional<RowWindow> panic;
    RowWindow correlation;  // range for the dispersion/kurtosis correlation
};

/// Windows derived from the first shock of the schedule:
/// normal = [burn_in, start - 10], panic = [start + 20, end - 10],
/// correlation = [burn_in, min(end + 100, n_steps - 1)]. Without shocks only
/// the correlation range [burn_in, n_steps - 1] is set.
AnalysisWindows default_windows(const ScenarioConfig& config);

struct WindowStats {
    RowWindow window;
    double median_dispersion = 0.0;
    std::optional<double> median_kurtosis;
    std::optional<double> s_bimodality;
    std::optional<double> mean_rho;
};

struct PanelStatistics {
    std::vector<CrossSectionSummary> rows;
    std::optional<double> dispersion_kurtosis_corr;
    std::optional<WindowStats> normal;
    std::optional<WindowStats> panic;
};

double median(std::vector<double> values);

/// Cross-sectional summaries for every row plus window aggregates. `rho` is optional
/// (simulated data) and, when non-empty, must have one entry per row.
PanelStatistics analyze_panel(const ReturnsPanel& panel, const AnalysisWindows& windows,
                              const std::vector<double>& rho = {});

nlohmann::json to_json(const PanelStatistics& stats);

}  // namespace panicsim
