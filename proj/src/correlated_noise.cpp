#include "panicsim/correlated_noise.hpp"

#include <algorithm>
#include <cmath>

#include "panicsim/errors.hpp"

namespace panicsim {

namespace {

void check_rho(double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw DomainError("equicorrelation: rho must lie in [0, 1)");
    }
}

}  // namespace

EquicorrFactor::EquicorrFactor(std::size_t n, double rho) {
    if (n == 0) {
        throw DomainError("equicorrelation: n must be >= 1");
    }
    check_rho(rho);
    rho_ = std::min(rho, kRhoCap);
    diag_.resize(n);
    sub_.resize(n);
    const double q = 1.0 - rho_;
    for (std::size_t j = 0; j < n; ++j) {
        const double jd = static_cast<double>(j);
        const double prev = 1.0 + (jd - 1.0) * rho_;  // 1 + (j-1) rho, equals q at j = 0
        const double d = std::sqrt(q * (1.0 + jd * rho_) / prev);
        diag_[j] = d;
        sub_[j] = rho_ * q / (prev * d);
    }
}

double EquicorrFactor::entry(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) {
        throw DomainError("equicorrelation: index out of range");
    }
    if (j > i) return 0.0;
    return i == j ? diag_[i] : sub_[j];
}

void EquicorrFactor::sample(std::span<const double> z, std::span<double> out) const {
    if (z.size() != size() || out.size() != size()) {
        throw DomainError("equicorrelation: draw vector has wrong dimension");
    }
    double prefix = 0.0;  // sum_{j<i} c_j z_j
    for (std::size_t i = 0; i < size(); ++i) {
        if (!std::isfinite(z[i])) {
            throw DomainError("equicorrelation: non-finite draw");
        }
        const double zi = z[i];
        out[i] = prefix + diag_[i] * zi;
        prefix += sub_[i] * zi;
    }
}

std::vector<double> EquicorrFactor::sample(std::span<const double> z) const {
    std::vector<double> out(z.size());
    sample(z, out);
    return out;
}

FactorPtr build_factor(std::size_t n, double rho) {
    return std::make_shared<const EquicorrFactor>(n, rho);
}

FactorPtr refresh_factor(const FactorPtr& factor, double rho_new, double tolerance) {
    if (!factor) {
        throw DomainError("equicorrelation: refresh of an empty factor");
    }
    check_rho(rho_new);
    if (std::abs(std::min(rho_new, kRhoCap) - factor->rho()) <= tolerance) {
        return factor;
    }
    return build_factor(factor->size(), rho_new);
}

}  // namespace panicsim
