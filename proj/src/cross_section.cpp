#include "panicsim/cross_section.hpp"

#include <algorithm>
#include <cmath>

#include "panicsim/errors.hpp"

namespace panicsim {

namespace {

struct Moments {
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
};

Moments central_moments(std::span<const double> x) {
    Moments m;
    if (x.empty()) return m;
    const double n = static_cast<double>(x.size());
    for (double v : x) m.mean += v;
    m.mean /= n;
    for (double v : x) {
        const double d = v - m.mean;
        const double d2 = d * d;
        m.m2 += d2;
        m.m3 += d2 * d;
        m.m4 += d2 * d2;
    }
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    return m;
}

void require_finite(std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw DataError("cross-section: non-finite entry at index " + std::to_string(i), i);
        }
    }
}

// Relative to the squared mean so that constant rows with rounding noise count as degenerate.
bool zero_variance(const Moments& m) {
    return !(m.m2 > 1e-28 * std::max(1.0, m.mean * m.mean));
}

}  // namespace

CrossSectionSummary cross_moments(std::span<const double> row) {
    require_finite(row);
    CrossSectionSummary out;
    const Moments m = central_moments(row);
    out.mean = m.mean;
    out.dispersion = std::sqrt(m.m2);
    if (!row.empty() && !zero_variance(m)) {
        out.skew = m.m3 / std::pow(m.m2, 1.5);
        if (row.size() >= 4) {
            out.excess_kurtosis = m.m4 / (m.m2 * m.m2) - 3.0;
        }
    } else {
        out.dispersion = 0.0;
    }
    const SignCount sc = sign_statistic(row);
    out.s = sc.s;
    out.n_up = sc.n_up;
    out.n_down = sc.n_down;
    out.n_zero = sc.n_zero;
    return out;
}

SignCount sign_statistic(std::span<const double> row) {
    SignCount sc;
    for (double v : row) {
        if (v > 0.0) {
            ++sc.n_up;
        } else if (v < 0.0) {
            ++sc.n_down;
        } else {
            ++sc.n_zero;
        }
    }
    const std::size_t moved = sc.n_up + sc.n_down;
    if (moved == 0) {
        sc.degenerate = true;
        return sc;
    }
    sc.s = (static_cast<double>(sc.n_up) - static_cast<double>(sc.n_down)) / static_cast<double>(moved);
    return sc;
}

std::optional<double> vol_dispersion_ratio(std::span<const double> vols) {
    if (vols.empty()) return std::nullopt;
    require_finite(vols);
    for (double v : vols) {
        if (v < 0.0) throw DomainError("vol_dispersion_ratio: volatilities must be >= 0");
    }
    const Moments m = central_moments(vols);
    if (!(m.mean > 0.0)) return std::nullopt;
    return std::sqrt(m.m2) / m.mean;
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    if (window < 1) throw DomainError("moving_average: window must be >= 1");
    std::vector<double> out(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        const std::size_t count = std::min(window, t + 1);
        double sum = 0.0;
        for (std::size_t k = t + 1 - count; k <= t; ++k) sum += series[k];
        out[t] = sum / static_cast<double>(count);
    }
    return out;
}

Histogram histogram(std::span<const double> samples, std::size_t n_bins, std::optional<HistRange> range) {
    if (n_bins < 2) throw DomainError("histogram: n_bins must be >= 2");
    if (samples.empty()) throw DomainError("histogram: samples must be non-empty");
    require_finite(samples);
    double lo, hi;
    if (range) {
        lo = range->lo;
        hi = range->hi;
    } else {
        const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
        lo = *mn;
        hi = *mx;
    }
    if (!(hi > lo)) {
        // All samples identical: centre a unit-width range on the value.
        if (range) throw DomainError("histogram: range must satisfy lo < hi");
        lo -= 0.5;
        hi += 0.5;
    }
    Histogram h;
    h.edges.resize(n_bins + 1);
    const double width = (hi - lo) / static_cast<double>(n_bins);
    for (std::size_t k = 0; k <= n_bins; ++k) h.edges[k] = lo + width * static_cast<double>(k);
    h.edges.back() = hi;
    h.counts.assign(n_bins, 0);
    for (double v : samples) {
        if (v < lo || v > hi) continue;
        auto bin = static_cast<std::size_t>((v - lo) / width);
        if (bin >= n_bins) bin = n_bins - 1;
        // Guard against rounding placing v on the wrong side of an edge.
        while (bin > 0 && v < h.edges[bin]) --bin;
        while (bin + 1 < n_bins && v >= h.edges[bin + 1]) ++bin;
        ++h.counts[bin];
        ++h.n;
    }
    return h;
}

std::optional<double> bimodality_coefficient(std::span<const double> samples) {
    if (samples.size() < 20) throw DomainError("bimodality_coefficient: needs at least 20 samples");
    require_finite(samples);
    const Moments m = central_moments(samples);
    if (zero_variance(m)) return std::nullopt;
    const double skew = m.m3 / std::pow(m.m2, 1.5);
    const double kurt = m.m4 / (m.m2 * m.m2);  // raw kurtosis = excess + 3
    return (skew * skew + 1.0) / kurt;
}

std::optional<double> series_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) return std::nullopt;
    require_finite(x);
    require_finite(y);
    const Moments mx = central_moments(x);
    const Moments my = central_moments(y);
    if (zero_variance(mx) || zero_variance(my)) return std::nullopt;
    double cov = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) cov += (x[i] - mx.mean) * (y[i] - my.mean);
    cov /= static_cast<double>(x.size());
    return std::clamp(cov / std::sqrt(mx.m2 * my.m2), -1.0, 1.0);
}

StudentTFit fit_student_t(std::span<const double> samples) {
    if (samples.size() < 100) throw DomainError("fit_student_t: needs at least 100 samples");
    require_finite(samples);
    const Moments m = central_moments(samples);
    StudentTFit fit;
    if (zero_variance(m)) return fit;
    fit.excess_kurtosis = m.m4 / (m.m2 * m.m2) - 3.0;
    // Require excess kurtosis beyond 3 standard errors of the Gaussian value (sqrt(24/N)).
    const double gaussian_band = 3.0 * std::sqrt(24.0 / static_cast<double>(samples.size()));
    if (!(fit.excess_kurtosis > gaussian_band)) return fit;
    fit.applicable = true;
    fit.dof = 6.0 / fit.excess_kurtosis + 4.0;
    fit.scale = std::sqrt(m.m2 * (fit.dof - 2.0) / fit.dof);
    return fit;
}

}  // namespace panicsim
