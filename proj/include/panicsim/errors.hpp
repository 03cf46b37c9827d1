#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace panicsim {

/// Argument outside the mathematical domain of an operation (bad rho, n = 0, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Corrupt or malformed data: non-finite entries, unparsable cells, duplicate dates.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, std::size_t row = npos, std::size_t col = npos)
        : std::runtime_error(what), row_(row), col_(col) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

/// Invalid or inconsistent configuration (unknown key, unstable feedback without override).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Simulation produced a non-finite state.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace panicsim
