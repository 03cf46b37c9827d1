#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "panicsim/rolling_pca.hpp"
#include "panicsim/scenario_engine.hpp"

namespace panicsim::cli {

enum class Verb { Simulate, Analyze, Pca, Shist, Volvol, Report };

struct Command {
    Verb verb = Verb::Simulate;
    std::optional<std::filesystem::path> config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> window;
    std::optional<std::size_t> bins;
    std::optional<std::filesystem::path> input;
    std::optional<std::string> prices;  // "log" | "simple"
    std::optional<std::size_t> panic_start, panic_end;
    std::optional<std::size_t> normal_start, normal_end;
};

/// Bad command line; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `--help`: carries the help text, maps to exit code 0.
class HelpRequested : public UsageError {
public:
    using UsageError::UsageError;
};

/// argv[0] is the program name.
Command parse_args(const std::vector<std::string>& argv);

/// Flat key/value configuration: built-in defaults, then --config, then --set, then --seed.
nlohmann::json effective_config(const Command& cmd);

ScenarioConfig scenario_from_config(const nlohmann::json& config);

/// 0 on success, 1 on runtime error, 2 on usage/configuration error.
int run_command(const Command& cmd, std::ostream& log, std::ostream& err);

/// parse_args + run_command with the exit-code contract.
int main_entry(const std::vector<std::string>& argv, std::ostream& log, std::ostream& err);

}  // namespace panicsim::cli
