#pragma once

namespace panicsim {

/// HALVED: -(a/2) s - (b/4) s^3.  PLAIN: -a s - b s^3 (the simulation protocol form).
enum class DriftForm { Plain, Halved };

struct OrderParamCoeffs {
    double a = 0.0;
    double b = 0.01;
    double noise_sd = 0.1;
    DriftForm form = DriftForm::Plain;

    /// Throws DomainError unless b > 0 and noise_sd >= 0.
    void validate() const;
};

/// Latent order parameter and the correlation it induces.
struct OrderParamState {
    double s_hat = 0.0;
    double rho = 0.0;      // |tanh(s_hat)|
    bool clamped = false;  // last update hit the overflow guard

    static OrderParamState from_latent(double s_hat);
};

inline constexpr double kLatentClamp = 50.0;

/// a = sigma_c - sigma0: positive favours the disordered phase, negative the ordered one.
double control_coefficient(double sigma0_now, double sigma_c);

double drift(double s_hat, const OrderParamCoeffs& coeffs);

/// Double-well whose negative gradient is drift() for the same form. Diagnostic only.
double potential(double m, const OrderParamCoeffs& coeffs);

/// One Euler-Maruyama step with unit time step; |s_hat| is clamped at kLatentClamp.
OrderParamState step_order_parameter(const OrderParamState& state, const OrderParamCoeffs& coeffs, double z);

}  // namespace panicsim
