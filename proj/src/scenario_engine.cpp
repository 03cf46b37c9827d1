#include "panicsim/scenario_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "panicsim/correlated_noise.hpp"
#include "panicsim/cross_section.hpp"
#include "panicsim/errors.hpp"

namespace panicsim {

void ShockSchedule::validate() const {
    if (!(base > 0.0) || !std::isfinite(base)) throw ConfigError("schedule.base must be finite and > 0");
    std::vector<Shock> sorted = shocks;
    std::sort(sorted.begin(), sorted.end(), [](const Shock& a, const Shock& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const Shock& s = sorted[i];
        if (s.start >= s.end) throw ConfigError("schedule.shocks: start must be < end");
        if (!(s.magnitude >= 0.0) || !std::isfinite(s.magnitude)) {
            throw ConfigError("schedule.shocks: magnitude must be finite and >= 0");
        }
        if (i > 0 && sorted[i - 1].end > s.start) throw ConfigError("schedule.shocks: intervals overlap");
    }
}

double sigma0_at(const ShockSchedule& schedule, std::size_t t) {
    double sigma = schedule.base;
    for (const Shock& s : schedule.shocks) {
        if (t >= s.start && t < s.end) sigma += s.magnitude;
    }
    return sigma;
}

namespace {

double shock_at(const ShockSchedule& schedule, std::size_t t) {
    return sigma0_at(schedule, t) - schedule.base;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (n_assets < 2) throw ConfigError("n_assets must be >= 2");
    if (n_steps < 1) throw ConfigError("n_steps must be >= 1");
    if (!(sigma_c >= 0.0) || !std::isfinite(sigma_c)) throw ConfigError("sigma_c must be finite and >= 0");
    if (!std::isfinite(r_c)) throw ConfigError("r_c must be finite");
    if (!std::isfinite(s_hat0)) throw ConfigError("order.s_hat0 must be finite");
    schedule.validate();
    FeedbackParams fb = feedback;
    fb.sigma0 = schedule.base;
    try {
        fb.validate();
        OrderParamCoeffs oc = order;
        oc.a = 0.0;
        oc.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!allow_unstable) {
        const StabilityReport report = check_stability(fb);
        if (!report.stable) {
            throw ConfigError("feedback parameters fail the stability check (" + report.reason +
                              "); set allow_unstable to override");
        }
    }
}

ScenarioOutput run_scenario(const ScenarioConfig& config) {
    config.validate();
    const std::size_t n = config.n_assets;
    const std::size_t steps = config.n_steps;

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    ScenarioOutput out;
    out.rho_path.reserve(steps);
    out.s_hat_path.reserve(steps);
    out.sigma0_path.reserve(steps);
    out.market.reserve(steps);
    Matrix values(static_cast<Eigen::Index>(steps), static_cast<Eigen::Index>(n));

    std::vector<PathState> paths(n);
    OrderParamState order = OrderParamState::from_latent(config.s_hat0);
    OrderParamCoeffs coeffs = config.order;
    FeedbackParams feedback = config.feedback;
    FactorPtr factor = build_factor(n, 0.0);
    std::vector<double> draws(n);
    std::vector<double> noise(n);
    double market_prev = 0.0;

    for (std::size_t t = 0; t < steps; ++t) {
        const bool volatility_mode = config.control_mode == ControlMode::Volatility;
        const double sigma0 = volatility_mode ? sigma0_at(config.schedule, t) : config.schedule.base;
        coeffs.a = volatility_mode ? control_coefficient(sigma0, config.sigma_c) : market_prev - config.r_c;

        order = step_order_parameter(order, coeffs, normal(rng));
        if (order.clamped) ++out.clamp_events;
        const double rho = std::min(order.rho, kRhoCap);

        factor = refresh_factor(factor, rho);
        for (double& z : draws) z = normal(rng);
        factor->sample(draws, noise);

        feedback.sigma0 = sigma0;
        const double impulse = volatility_mode ? 0.0 : shock_at(config.schedule, t);
        double sum = 0.0;
        auto row = values.row(static_cast<Eigen::Index>(t));
        for (std::size_t k = 0; k < n; ++k) {
            double r = 0.0;
            try {
                r = local_volatility(paths[k], feedback) * noise[k] - impulse;
            } catch (const DataError&) {
                throw SimulationError("non-finite level for asset " + std::to_string(k), t);
            }
            if (!std::isfinite(r)) throw SimulationError("non-finite return for asset " + std::to_string(k), t);
            paths[k].push(paths[k].current() + r, feedback.memory);
            row(static_cast<Eigen::Index>(k)) = r;
            sum += r;
        }
        const double market = sum / static_cast<double>(n);
        if (!std::isfinite(market)) throw SimulationError("non-finite market return", t);

        out.rho_path.push_back(order.rho);
        out.s_hat_path.push_back(order.s_hat);
        out.sigma0_path.push_back(sigma0);
        out.market.push_back(market);
        market_prev = market;
    }
    out.panel = ReturnsPanel::with_step_labels(std::move(values));
    return out;
}

std::vector<VolVolPoint> volvol_experiment(const std::vector<double>& ratios, std::size_t n_assets,
                                           std::size_t n_trials, std::uint64_t seed) {
    if (n_assets < 100) throw DomainError("volvol_experiment: n_assets must be >= 100");
    if (n_trials < 1) throw DomainError("volvol_experiment: n_trials must be >= 1");
    for (double r : ratios) {
        if (!(r > 0.0 && r <= 1.0)) throw DomainError("volvol_experiment: ratios must lie in (0, 1]");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<VolVolPoint> out;
    std::vector<double> row(n_assets);
    for (double ratio : ratios) {
        // Lognormal with mean 1: sd/mean = sqrt(exp(s^2) - 1).
        const double log_var = std::log1p(ratio * ratio);
        const double log_sd = std::sqrt(log_var);
        const double log_mean = -0.5 * log_var;
        double total = 0.0;
        for (std::size_t trial = 0; trial < n_trials; ++trial) {
            for (double& r : row) {
                const double vol = std::exp(log_mean + log_sd * normal(rng));
                r = vol * normal(rng);
            }
            total += cross_moments(row).excess_kurtosis.value_or(0.0);
        }
        out.push_back({ratio, total / static_cast<double>(n_trials)});
    }
    return out;
}

}  // namespace panicsim
