#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace h1s2s {

struct CommandRequest {
  /// line, rect-pulse, power-scan, scenario-matrix, doppler-study,
  /// frozen-nozzle or budget.
  std::string command;
  std::filesystem::path config_path;  // empty: defaults
  std::filesystem::path output_dir = ".";
  std::optional<std::uint64_t> seed_override;
  std::vector<std::string> overrides;  // key=value
  std::vector<std::string> arguments;  // positional values (budget)
};

[[nodiscard]] const std::vector<std::string>& known_commands();

/// Runs one command. Prints a summary per result to `out` followed by one
/// line of compact JSON, and diagnostics to `err`. Returns the exit status.
int run(const CommandRequest& request, std::ostream& out, std::ostream& err);

}  // namespace h1s2s
