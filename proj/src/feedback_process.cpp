#include "panicsim/feedback_process.hpp"

#include <cmath>
#include <sstream>

#include "panicsim/errors.hpp"

namespace panicsim {

void FeedbackParams::validate() const {
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
        throw DomainError("feedback: sigma0 must be finite and > 0");
    }
    if (!(g >= 0.0) || !std::isfinite(g)) {
        throw DomainError("feedback: g must be finite and >= 0");
    }
    if (!std::isfinite(gamma)) {
        throw DomainError("feedback: gamma must be finite");
    }
    if (memory < 1) {
        throw DomainError("feedback: memory must be >= 1");
    }
}

PathState::PathState(std::vector<double> levels, std::size_t clock)
    : levels_(std::move(levels)), clock_(clock) {
    if (levels_.empty()) {
        throw DomainError("PathState: levels must be non-empty");
    }
}

void PathState::push(double level, std::size_t memory) {
    levels_.push_back(level);
    if (levels_.size() > memory + 1) {
        levels_.erase(levels_.begin(), levels_.end() - static_cast<std::ptrdiff_t>(memory + 1));
    }
    ++clock_;
}

double local_volatility(const PathState& state, const FeedbackParams& params) {
    const auto& y = state.levels();
    const double now = y.back();
    if (!std::isfinite(now)) {
        throw DataError("feedback: non-finite current level (data corruption)", y.size() - 1);
    }
    const std::size_t available = std::min(y.size() - 1, params.memory);
    double sum = 0.0;
    for (std::size_t lag = 1; lag <= available; ++lag) {
        const double past = y[y.size() - 1 - lag];
        if (!std::isfinite(past)) {
            throw DataError("feedback: non-finite level in history (data corruption)", y.size() - 1 - lag);
        }
        const double diff = now - past;
        sum += std::pow(static_cast<double>(lag), -params.gamma) * diff * diff;
    }
    return params.sigma0 * std::sqrt(1.0 + params.g * sum);
}

double advance(PathState& state, const FeedbackParams& params, double z) {
    const double r = local_volatility(state, params) * z;
    state.push(state.current() + r, params.memory);
    return r;
}

std::pair<double, PathState> step_return(const PathState& state, const FeedbackParams& params, double z) {
    if (!std::isfinite(z)) {
        throw DomainError("step_return: draw must be finite");
    }
    PathState next = state;
    const double r = advance(next, params, z);
    return {r, std::move(next)};
}

StabilityReport check_stability(const FeedbackParams& params) {
    StabilityReport report;
    if (!(params.gamma > 1.0)) {
        std::ostringstream msg;
        msg << "gamma = " << params.gamma << " <= 1: memory kernel is not summable";
        report.reason = msg.str();
        return report;
    }
    const double ratio = params.g / (params.gamma - 1.0);
    report.margin = 1.0 - ratio;
    report.stable = ratio < 1.0;
    std::ostringstream msg;
    msg << "g/(gamma-1) = " << params.g << "/" << (params.gamma - 1.0) << " = " << ratio
        << (report.stable ? " < 1" : " >= 1");
    report.reason = msg.str();
    return report;
}

}  // namespace panicsim
