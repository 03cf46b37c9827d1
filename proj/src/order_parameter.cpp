#include "panicsim/order_parameter.hpp"

#include <cmath>

#include "panicsim/errors.hpp"

namespace panicsim {

void OrderParamCoeffs::validate() const {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw DomainError("order parameter: b must be finite and > 0");
    }
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw DomainError("order parameter: noise_sd must be finite and >= 0");
    }
    if (!std::isfinite(a)) {
        throw DomainError("order parameter: a must be finite");
    }
}

OrderParamState OrderParamState::from_latent(double s_hat) {
    return {s_hat, std::abs(std::tanh(s_hat)), false};
}

double control_coefficient(double sigma0_now, double sigma_c) {
    return sigma_c - sigma0_now;
}

double drift(double s_hat, const OrderParamCoeffs& coeffs) {
    const double cube = s_hat * s_hat * s_hat;
    switch (coeffs.form) {
        case DriftForm::Halved:
            return -0.5 * coeffs.a * s_hat - 0.25 * coeffs.b * cube;
        case DriftForm::Plain:
        default:
            return -coeffs.a * s_hat - coeffs.b * cube;
    }
}

double potential(double m, const OrderParamCoeffs& coeffs) {
    const double m2 = m * m;
    switch (coeffs.form) {
        case DriftForm::Halved:
            return 0.25 * coeffs.a * m2 + coeffs.b / 16.0 * m2 * m2;
        case DriftForm::Plain:
        default:
            return 0.5 * coeffs.a * m2 + 0.25 * coeffs.b * m2 * m2;
    }
}

OrderParamState step_order_parameter(const OrderParamState& state, const OrderParamCoeffs& coeffs, double z) {
    if (!std::isfinite(z) || !std::isfinite(state.s_hat)) {
        throw DomainError("step_order_parameter: non-finite state or draw");
    }
    double next = state.s_hat + drift(state.s_hat, coeffs) + coeffs.noise_sd * z;
    bool clamped = false;
    if (std::abs(next) > kLatentClamp) {
        next = std::copysign(kLatentClamp, next);
        clamped = true;
    }
    OrderParamState out = OrderParamState::from_latent(next);
    out.clamped = clamped;
    return out;
}

}  // namespace panicsim
