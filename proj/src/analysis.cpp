#include "panicsim/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "panicsim/errors.hpp"

namespace panicsim {

AnalysisWindows default_windows(const ScenarioConfig& config) {
    AnalysisWindows w;
    const std::size_t last = config.n_steps - 1;
    w.correlation = {std::min(config.burn_in, last), last};
    if (config.schedule.shocks.empty()) return w;
    const Shock first = *std::min_element(config.schedule.shocks.begin(), config.schedule.shocks.end(),
                                          [](const Shock& a, const Shock& b) { return a.start < b.start; });
    if (first.start >= config.burn_in + 10) {
        w.normal = RowWindow{config.burn_in, std::min(first.start - 10, last)};
    }
    if (first.end >= first.start + 30 && first.start + 20 <= last) {
        w.panic = RowWindow{first.start + 20, std::min(first.end - 10, last)};
    }
    w.correlation.last = std::min(first.end + 100, last);
    return w;
}

double median(std::vector<double> values) {
    if (values.empty()) throw DomainError("median of an empty set");
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double upper = *mid;
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

namespace {

WindowStats window_stats(const PanelStatistics& stats, RowWindow w, const std::vector<double>& rho) {
    WindowStats out;
    out.window = w;
    std::vector<double> disp, kurt, s;
    double rho_sum = 0.0;
    for (std::size_t t = w.first; t <= w.last; ++t) {
        const auto& r = stats.rows[t];
        disp.push_back(r.dispersion);
        if (r.excess_kurtosis) kurt.push_back(*r.excess_kurtosis);
        s.push_back(r.s);
        if (!rho.empty()) rho_sum += rho[t];
    }
    out.median_dispersion = median(disp);
    if (!kurt.empty()) out.median_kurtosis = median(kurt);
    if (s.size() >= 20) out.s_bimodality = bimodality_coefficient(s);
    if (!rho.empty()) out.mean_rho = rho_sum / static_cast<double>(w.last - w.first + 1);
    return out;
}

}  // namespace

PanelStatistics analyze_panel(const ReturnsPanel& panel, const AnalysisWindows& windows,
                              const std::vector<double>& rho) {
    const std::size_t t_count = panel.n_times();
    if (!rho.empty() && rho.size() != t_count) throw DomainError("analyze_panel: rho length differs from panel");
    auto check = [&](const RowWindow& w, const char* name) {
        if (w.first > w.last || w.last >= t_count) {
            throw DomainError(std::string("analyze_panel: ") + name + " window outside the panel");
        }
    };
    PanelStatistics stats;
    stats.rows.reserve(t_count);
    for (std::size_t t = 0; t < t_count; ++t) stats.rows.push_back(cross_moments(panel.row(t)));

    if (t_count > 0) {
        check(windows.correlation, "correlation");
        std::vector<double> disp, kurt;
        for (std::size_t t = windows.correlation.first; t <= windows.correlation.last; ++t) {
            const auto& r = stats.rows[t];
            if (!r.excess_kurtosis) continue;
            disp.push_back(r.dispersion);
            kurt.push_back(*r.excess_kurtosis);
        }
        stats.dispersion_kurtosis_corr = series_correlation(disp, kurt);
    }
    if (windows.normal) {
        check(*windows.normal, "normal");
        stats.normal = window_stats(stats, *windows.normal, rho);
    }
    if (windows.panic) {
        check(*windows.panic, "panic");
        stats.panic = window_stats(stats, *windows.panic, rho);
    }
    return stats;
}

nlohmann::json to_json(const PanelStatistics& stats) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    auto window = [&](const std::optional<WindowStats>& w) -> nlohmann::json {
        if (!w) return nullptr;
        return {{"first", w->window.first},
                {"last", w->window.last},
                {"median_dispersion", w->median_dispersion},
                {"median_excess_kurtosis", opt(w->median_kurtosis)},
                {"s_bimodality", opt(w->s_bimodality)},
                {"mean_rho", opt(w->mean_rho)}};
    };
    return {{"rows", stats.rows.size()},
            {"dispersion_kurtosis_correlation", opt(stats.dispersion_kurtosis_corr)},
            {"normal", window(stats.normal)},
            {"panic", window(stats.panic)}};
}

}  // namespace panicsim
