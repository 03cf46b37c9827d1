#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace panicsim {

/// Parameters of the truncated multi-timescale feedback volatility.
///
///   sigma_i = sigma0 * sqrt(1 + g * sum_{j=i-M}^{i-1} (i-j)^-gamma * (y_i - y_j)^2)
struct FeedbackParams {
    double sigma0 = 0.2;
    double g = 0.12;
    double gamma = 1.15;
    std::size_t memory = 30;

    /// Throws DomainError unless sigma0 > 0, g >= 0 and memory >= 1.
    void validate() const;
};

/// Cumulative log-levels of one stock, oldest first, at most memory + 1 entries.
class PathState {
public:
    PathState() : levels_{0.0} {}
    PathState(std::vector<double> levels, std::size_t clock);

    const std::vector<double>& levels() const noexcept { return levels_; }
    std::size_t clock() const noexcept { return clock_; }
    double current() const noexcept { return levels_.back(); }

    /// Appends a new level and keeps only the newest memory + 1 entries.
    void push(double level, std::size_t memory);

private:
    std::vector<double> levels_;
    std::size_t clock_ = 0;
};

/// Per-step volatility given the available history. Result is >= sigma0.
/// Throws DataError when the history holds a non-finite level.
double local_volatility(const PathState& state, const FeedbackParams& params);

/// In-place variant of step_return used by the simulation loop.
double advance(PathState& state, const FeedbackParams& params, double z);

/// Draws one return for standard-normal z and returns it with the successor state.
std::pair<double, PathState> step_return(const PathState& state, const FeedbackParams& params, double z);

struct StabilityReport {
    bool stable = false;
    std::optional<double> margin;  // 1 - g/(gamma-1); empty when gamma <= 1
    std::string reason;
};

StabilityReport check_stability(const FeedbackParams& params);

}  // namespace panicsim
