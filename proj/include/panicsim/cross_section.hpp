#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace panicsim {

/// Population moments of one cross-section plus the sign statistic.
/// skew / excess_kurtosis are empty when the variance is zero (or N < 4 for kurtosis).
struct CrossSectionSummary {
    double mean = 0.0;
    double dispersion = 0.0;
    std::optional<double> skew;
    std::optional<double> excess_kurtosis;
    double s = 0.0;
    std::size_t n_up = 0;
    std::size_t n_down = 0;
    std::size_t n_zero = 0;
};

struct SignCount {
    double s = 0.0;
    std::size_t n_up = 0;
    std::size_t n_down = 0;
    std::size_t n_zero = 0;
    bool degenerate = false;  // no non-zero entries
};

/// Throws DataError (with the offending index as row()) on a non-finite entry.
CrossSectionSummary cross_moments(std::span<const double> row);

/// s = (n_up - n_down) / (n_up + n_down); zeros are excluded from both counts.
SignCount sign_statistic(std::span<const double> row);

/// std/mean of per-asset volatilities; empty when the mean is zero.
std::optional<double> vol_dispersion_ratio(std::span<const double> vols);

/// Trailing mean over min(window, t + 1) points.
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

struct Histogram {
    std::vector<double> edges;  // n_bins + 1, uniform
    std::vector<std::size_t> counts;
    std::size_t n = 0;  // samples that fell inside the range
};

struct HistRange {
    double lo;
    double hi;
};

/// Uniform bins over `range` (default [min, max]); right-open except the last bin.
/// Samples outside an explicit range are not counted.
Histogram histogram(std::span<const double> samples, std::size_t n_bins, std::optional<HistRange> range = {});

/// Sarle's coefficient (skew^2 + 1) / (excess_kurtosis + 3); > 5/9 suggests bimodality.
std::optional<double> bimodality_coefficient(std::span<const double> samples);

/// Pearson correlation; empty for mismatched/short (< 3) or zero-variance input.
std::optional<double> series_correlation(std::span<const double> x, std::span<const double> y);

struct StudentTFit {
    bool applicable = false;
    double dof = 0.0;
    double scale = 0.0;
    double excess_kurtosis = 0.0;
};

/// Moment-matched Student-t: excess kurtosis 6/(nu - 4) inverted for nu, scale from the variance.
/// Not applicable unless the excess kurtosis exceeds 3 sqrt(24/N), i.e. the sample is
/// distinguishable from a Gaussian.
StudentTFit fit_student_t(std::span<const double> samples);

}  // namespace panicsim
