#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace kpp::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

/// Shared state handed to every subcommand.
struct Context {
  nlohmann::json config;
  std::filesystem::path output_dir;
  std::uint64_t seed = 20240601;
  bool quiet = false;
  std::ostream* log = nullptr;       // progress and check lines; silenced by quiet
  std::vector<std::string> outputs;  // files written, relative to output_dir

  void info(const std::string& line) const;
  void write_file(const std::string& name, const std::string& content);
};

/// Outcome of a named tolerance check.
struct Check {
  std::string name;
  double value = 0.0;
  std::string requirement;
  bool pass = false;
};

nlohmann::json to_json(const Check& check);

std::vector<std::string> command_names();

/// Default configuration of a subcommand. Throws ConfigError for an unknown name.
nlohmann::json default_config(std::string_view command);

/// Runs a subcommand against a fully resolved config and returns its exit code.
/// Throws ConfigError (and std::invalid_argument) for bad input.
int run_command(std::string_view command, Context& context);

int cmd_verify_exact(Context& context);
int cmd_speed(Context& context);
int cmd_large_l(Context& context);
int cmd_simulate(Context& context);
int cmd_eigen(Context& context);
int cmd_sweep(Context& context);

struct Invocation {
  std::string command;
  std::string config_path;  // empty: defaults only
  std::vector<std::string> overrides;
  std::filesystem::path output_dir;  // empty: "out/<command>"
  std::uint64_t seed = 20240601;
  bool quiet = false;
};

/**
 * Resolves the config, runs the command, and writes manifest.json last.
 * Maps ConfigError / std::invalid_argument to exit code 2 and other failures
 * to exit code 1, reporting the message on `err`.
 */
int execute(const Invocation& invocation, std::ostream& out, std::ostream& err);

}  // namespace kpp::cli
