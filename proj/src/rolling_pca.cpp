#include "panicsim/rolling_pca.hpp"

#include <cmath>
#include <limits>

#include "panicsim/errors.hpp"

namespace panicsim {

ReturnsPanel vol_transform(const ReturnsPanel& panel, VolTransform mode) {
    if (panel.n_times() == 0 || panel.n_assets() == 0) {
        throw DomainError("vol_transform: panel must be non-empty");
    }
    switch (mode) {
        case VolTransform::Returns:
            return panel;
        case VolTransform::AbsReturns: {
            ReturnsPanel out = panel;
            out.values = panel.values.cwiseAbs();
            return out;
        }
        case VolTransform::DiffAbsReturns: {
            if (panel.n_times() < 2) throw DomainError("vol_transform: DIFF_ABS needs at least 2 rows");
            const Eigen::Index t = panel.values.rows();
            ReturnsPanel out;
            out.tickers = panel.tickers;
            out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
            out.values = panel.values.bottomRows(t - 1).cwiseAbs() - panel.values.topRows(t - 1).cwiseAbs();
            return out;
        }
    }
    throw DomainError("vol_transform: unknown mode");
}

Eigen::MatrixXd window_covariance(const Eigen::Ref<const Matrix>& window) {
    if (window.rows() < 2) throw DomainError("window_covariance: window must have at least 2 rows");
    const Eigen::RowVectorXd mean = window.colwise().mean();
    const Eigen::MatrixXd centred = window.rowwise() - mean;
    Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(window.rows());
    // Exact symmetry for the eigen-solve.
    return 0.5 * (cov + cov.transpose());
}

std::optional<double> first_share(const Eigen::MatrixXd& cov) {
    if (cov.rows() != cov.cols() || cov.rows() == 0) throw DomainError("first_share: matrix must be square");
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw DomainError("first_share: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw DomainError("first_share: eigen-solve failed");
    const Eigen::VectorXd& lambda = solver.eigenvalues();  // ascending
    if (lambda(0) < -1e-10 * scale) throw DomainError("first_share: matrix is not positive semi-definite");
    const double total = lambda.cwiseMax(0.0).sum();
    if (!(total > 0.0)) return std::nullopt;
    return std::clamp(lambda(lambda.size() - 1) / total, 0.0, 1.0);
}

PcaSeries rolling_first_pc_share(const ReturnsPanel& panel, const PcaOptions& options) {
    const ReturnsPanel data = vol_transform(panel, options.mode);
    if (options.window < 2) throw DomainError("rolling_first_pc_share: window must be >= 2");
    if (data.n_times() < options.window) {
        throw DomainError("rolling_first_pc_share: window larger than panel");
    }
    PcaSeries out;
    out.transform = options.mode;
    const auto w = static_cast<Eigen::Index>(options.window);
    for (std::size_t t = options.window - 1; t < data.n_times(); ++t) {
        const auto start = static_cast<Eigen::Index>(t) - w + 1;
        const auto block = data.values.middleRows(start, w);
        Eigen::MatrixXd cov = window_covariance(block);
        // Constant windows leave only rounding residue in the covariance.
        bool degenerate = !(cov.trace() > 1e-24 * block.squaredNorm() / static_cast<double>(w));
        if (!degenerate && options.use_correlation) {
            const Eigen::VectorXd sd = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
            if ((sd.array() <= 0.0).any()) {
                degenerate = true;
            } else {
                cov = sd.cwiseInverse().asDiagonal() * cov * sd.cwiseInverse().asDiagonal();
                cov = 0.5 * (cov + cov.transpose());
            }
        }
        std::optional<double> share;
        if (!degenerate) share = first_share(cov);
        out.times.push_back(t);
        out.degenerate.push_back(!share.has_value());
        out.share1.push_back(share.value_or(std::numeric_limits<double>::quiet_NaN()));
    }
    return out;
}

}  // namespace panicsim
