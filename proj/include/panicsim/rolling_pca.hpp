#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "panicsim/panel.hpp"

namespace panicsim {

enum class VolTransform { Returns, AbsReturns, DiffAbsReturns };

/// RETURNS: identity. ABS: |r|. DIFF_ABS: |r_t| - |r_{t-1}| (one row shorter).
ReturnsPanel vol_transform(const ReturnsPanel& panel, VolTransform mode);

/// Column-demeaned covariance of a W x n window, normalised by W.
Eigen::MatrixXd window_covariance(const Eigen::Ref<const Matrix>& window);

/// lambda_max / trace for a symmetric PSD matrix; empty when the trace is zero.
/// Throws DomainError when asymmetric or indefinite beyond 1e-10 (relative).
std::optional<double> first_share(const Eigen::MatrixXd& cov);

struct PcaOptions {
    std::size_t window = 100;
    VolTransform mode = VolTransform::Returns;
    bool use_correlation = false;
};

struct PcaSeries {
    VolTransform transform = VolTransform::Returns;
    std::vector<std::size_t> times;  // right edge (row index of the transformed panel)
    std::vector<double> share1;      // NaN where the window is degenerate
    std::vector<bool> degenerate;
};

PcaSeries rolling_first_pc_share(const ReturnsPanel& panel, const PcaOptions& options = {});

}  // namespace panicsim
