#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace panicsim {

inline constexpr double kRhoCap = 1.0 - 1e-9;
inline constexpr double kRebuildTolerance = 1e-4;

/// Lower-triangular Cholesky factor of the n x n equicorrelation matrix
/// C = (1 - rho) I + rho 11^T, stored in O(n).
///
/// Every column of L is constant below the diagonal, so the factor is fully
/// described by the diagonal d_j and the sub-diagonal column value c_j:
///
///   d_j^2 = (1 - rho)(1 + j rho) / (1 + (j - 1) rho)
///   c_j   = rho (1 - rho) / ((1 + (j - 1) rho) d_j)
class EquicorrFactor {
public:
    /// Throws DomainError for n == 0 or rho outside [0, 1). rho is capped at kRhoCap.
    EquicorrFactor(std::size_t n, double rho);

    std::size_t size() const noexcept { return diag_.size(); }
    /// Correlation the factor was built for (after capping).
    double rho() const noexcept { return rho_; }

    double diagonal(std::size_t j) const { return diag_.at(j); }
    double below_diagonal(std::size_t j) const { return sub_.at(j); }
    /// Entry L(i, j).
    double entry(std::size_t i, std::size_t j) const;

    /// out = L z. Throws DomainError on size mismatch or non-finite draws.
    void sample(std::span<const double> z, std::span<double> out) const;
    std::vector<double> sample(std::span<const double> z) const;

private:
    double rho_;
    std::vector<double> diag_;
    std::vector<double> sub_;
};

using FactorPtr = std::shared_ptr<const EquicorrFactor>;

FactorPtr build_factor(std::size_t n, double rho);

/// Returns `factor` itself when |rho_new - rho| <= tolerance, otherwise a new factor.
FactorPtr refresh_factor(const FactorPtr& factor, double rho_new, double tolerance = kRebuildTolerance);

}  // namespace panicsim
