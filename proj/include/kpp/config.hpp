#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "kpp/media.hpp"
#include "kpp/pde_sim.hpp"

namespace kpp {

/// Reads a JSON file. Throws ConfigError when it is missing or malformed.
nlohmann::json load_config_file(const std::string& path);

/**
 * Applies a `--set` override "dotted.key=value" in place. The value is parsed
 * as JSON when possible ("0.3", "true", "[1,2]") and kept as a string
 * otherwise. Intermediate objects are created as needed.
 */
void apply_override(nlohmann::json& config, std::string_view assignment);

/// Recursively merges `patch` into `base`; objects merge, everything else is replaced.
void merge_config(nlohmann::json& base, const nlohmann::json& patch);

struct MediumSpec {
  PeriodicMedium medium;
  int n_quad = 4096;
};

/**
 * Builds a medium from
 *   {"type": "cosine", "L", "eps", "r0", "b0", "tuned", "n_quad"}
 *   {"type": "custom-table", "L", "x": [...], "a": [...], "r0", "b0", "tuned", "n_quad"}
 *   {"type": "fourier", "L", "a": {"mean", "cos", "sin"}, "r": {...}, "b0", "n_quad"}
 * Throws ConfigError for missing keys or values the media constructors reject.
 */
MediumSpec medium_from_config(const nlohmann::json& medium);

/// {"x_min", "x_max", "n_cells"}; alternatively "dx" in place of "n_cells".
SimGrid grid_from_config(const nlohmann::json& grid);

/**
 * {"type": "bump", "center", "width", "height"} (height defaults to 0.5 min p)
 * {"type": "exact-front", "t0", "xi0"} (tuned media only)
 */
InitialCondition init_from_config(const nlohmann::json& init, const MediumSpec& medium);

/// {dt, t_end, record_every, theta, integrator: "imex"|"explicit", margin_periods, discard_fraction}.
RunOptions run_options_from_config(const nlohmann::json& config);

}  // namespace kpp
