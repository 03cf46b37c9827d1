#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "panicsim/feedback_process.hpp"
#include "panicsim/order_parameter.hpp"
#include "panicsim/panel.hpp"

namespace panicsim {

/// Additive volatility shock active on the half-open step interval [start, end).
struct Shock {
    std::size_t start = 0;
    std::size_t end = 0;
    double magnitude = 0.0;
};

struct ShockSchedule {
    double base = 0.2;
    std::vector<Shock> shocks;

    /// Throws ConfigError for base <= 0, start >= end, negative magnitude or overlapping shocks.
    void validate() const;
};

/// base + sum of magnitudes of shocks whose [start, end) contains t.
double sigma0_at(const ShockSchedule& schedule, std::size_t t);

enum class ControlMode {
    Volatility,  // a = sigma_c - sigma_0(t)
    Return,      // a = r_market(t-1) - r_c; shocks act as a common negative return
};

struct ScenarioConfig {
    std::size_t n_assets = 200;
    std::size_t n_steps = 500;
    /// sigma0 is ignored: each step uses sigma0_at(schedule, t) as the baseline.
    FeedbackParams feedback{};
    /// a is recomputed every step.
    OrderParamCoeffs order{0.0, 0.01, 0.1, DriftForm::Plain};
    double s_hat0 = 0.0;
    double sigma_c = 0.4;
    ShockSchedule schedule{0.2, {{250, 350, 0.6}}};
    std::uint64_t seed = 1;
    ControlMode control_mode = ControlMode::Volatility;
    double r_c = 0.0;
    bool allow_unstable = false;
    std::size_t burn_in = 50;

    /// Throws ConfigError on invalid values or (without allow_unstable) an unstable feedback.
    void validate() const;
};

struct ScenarioOutput {
    ReturnsPanel panel;  // n_steps x n_assets
    std::vector<double> rho_path;
    std::vector<double> s_hat_path;
    std::vector<double> sigma0_path;
    std::vector<double> market;  // row means of panel
    std::size_t clamp_events = 0;
};

/// Deterministic given config.seed. Throws SimulationError on non-finite state.
ScenarioOutput run_scenario(const ScenarioConfig& config);

struct VolVolPoint {
    double ratio = 0.0;
    double mean_excess_kurtosis = 0.0;
};

/// For each ratio r: lognormal per-asset volatilities with sd/mean = r and mean 1,
/// one Gaussian return per asset, cross-sectional excess kurtosis averaged over trials.
std::vector<VolVolPoint> volvol_experiment(const std::vector<double>& ratios, std::size_t n_assets,
                                           std::size_t n_trials, std::uint64_t seed);

}  // namespace panicsim
