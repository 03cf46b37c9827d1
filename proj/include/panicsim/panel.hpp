#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace panicsim {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// T x N matrix of per-period returns with time labels and asset identifiers.
/// Rows are time points, columns assets; storage is row-major so a row is a
/// contiguous cross-section.
struct ReturnsPanel {
    std::vector<std::string> dates;
    std::vector<std::string> tickers;
    Matrix values;

    std::size_t n_times() const noexcept { return static_cast<std::size_t>(values.rows()); }
    std::size_t n_assets() const noexcept { return static_cast<std::size_t>(values.cols()); }

    std::span<const double> row(std::size_t t) const {
        return {values.data() + t * n_assets(), n_assets()};
    }

    /// Panel with integer step labels "0".."T-1" and tickers "A0".."A{N-1}".
    static ReturnsPanel with_step_labels(Matrix values);
};

}  // namespace panicsim
