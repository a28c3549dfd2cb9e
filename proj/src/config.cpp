#include "kpp/config.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <fmt/format.h>

#include "kpp/errors.hpp"
#include "kpp/exact_front.hpp"

namespace kpp {

namespace {

using nlohmann::json;

const json& require(const json& object, const char* key, std::string_view where) {
  if (!object.is_object() || !object.contains(key)) {
    throw ConfigError(fmt::format("{}: missing key '{}'", where, key));
  }
  return object.at(key);
}

double number(const json& object, const char* key, std::string_view where) {
  const json& value = require(object, key, where);
  if (!value.is_number()) {
    throw ConfigError(fmt::format("{}.{} must be a number (got {})", where, key, value.dump()));
  }
  return value.get<double>();
}

double number_or(const json& object, const char* key, double fallback, std::string_view where) {
  return object.contains(key) ? number(object, key, where) : fallback;
}

std::vector<double> numbers(const json& value, std::string_view where) {
  if (!value.is_array()) throw ConfigError(fmt::format("{} must be an array of numbers", where));
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_number()) throw ConfigError(fmt::format("{} must contain only numbers", where));
    out.push_back(item.get<double>());
  }
  return out;
}

FourierSeries series_from_config(const json& spec, double L, std::string_view where) {
  FourierSeries s;
  s.period = L;
  s.mean = number(spec, "mean", where);
  if (spec.contains("cos")) s.cos_coef = numbers(spec.at("cos"), fmt::format("{}.cos", where));
  if (spec.contains("sin")) s.sin_coef = numbers(spec.at("sin"), fmt::format("{}.sin", where));
  return s;
}

void positive(double value, std::string_view name) {
  if (!(value > 0.0)) throw ConfigError(fmt::format("{} must be positive (got {})", name, value));
}

}  // namespace

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config file '{}' is not valid JSON: {}", path, e.what()));
  }
}

void apply_override(nlohmann::json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(fmt::format("override '{}' is not of the form key=value", assignment));
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }

  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(fmt::format("override key '{}' has an empty component", key));
    if (!node->is_object()) {
      if (!node->is_null()) {
        throw ConfigError(fmt::format("override '{}' descends into a non-object", key));
      }
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

void merge_config(nlohmann::json& base, const nlohmann::json& patch) {
  if (!patch.is_object() || !base.is_object()) {
    base = patch;
    return;
  }
  for (const auto& [key, value] : patch.items()) {
    if (base.contains(key) && base[key].is_object() && value.is_object()) {
      merge_config(base[key], value);
    } else {
      base[key] = value;
    }
  }
}

MediumSpec medium_from_config(const nlohmann::json& medium) {
  constexpr std::string_view where = "medium";
  if (!medium.is_object()) throw ConfigError("medium must be a JSON object");
  const json& type_value = require(medium, "type", where);
  if (!type_value.is_string()) throw ConfigError("medium.type must be a string");
  const auto type = type_value.get<std::string>();

  MediumSpec spec;
  spec.n_quad = static_cast<int>(number_or(medium, "n_quad", 4096, where));
  if (spec.n_quad < 64) throw ConfigError(fmt::format("medium.n_quad must be >= 64 (got {})", spec.n_quad));
  const double L = number_or(medium, "L", 1.0, where);
  positive(L, "medium.L");

  try {
    if (type == "cosine") {
      const double r0 = number_or(medium, "r0", 1.0, where);
      const double b0 = number_or(medium, "b0", 1.0, where);
      positive(r0, "medium.r0");
      positive(b0, "medium.b0");
      const bool tuned = medium.value("tuned", true);
      spec.medium = make_cosine_medium(L, number_or(medium, "eps", 0.0, where), r0, b0, tuned);
    } else if (type == "custom-table") {
      const double r0 = number_or(medium, "r0", 1.0, where);
      const double b0 = number_or(medium, "b0", 1.0, where);
      positive(r0, "medium.r0");
      positive(b0, "medium.b0");
      const auto a = numbers(require(medium, "a", where), "medium.a");
      std::vector<double> x;
      if (medium.contains("x")) {
        x = numbers(medium.at("x"), "medium.x");
      } else {
        for (std::size_t i = 0; i < a.size(); ++i) x.push_back(L * i / a.size());
      }
      spec.medium = make_table_medium(L, x, a, r0, b0, medium.value("tuned", true));
    } else if (type == "fourier") {
      const double b0 = number_or(medium, "b0", 1.0, where);
      positive(b0, "medium.b0");
      spec.medium = make_fourier_medium(series_from_config(require(medium, "a", where), L, "medium.a"),
                                        series_from_config(require(medium, "r", where), L, "medium.r"),
                                        b0);
    } else {
      throw ConfigError(fmt::format(
          "unknown medium type '{}' (expected cosine, custom-table or fourier)", type));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("invalid medium: {}", e.what()));
  }
  if (medium.contains("label") && medium.at("label").is_string()) {
    spec.medium.label = medium.at("label").get<std::string>();
  }
  return spec;
}

SimGrid grid_from_config(const nlohmann::json& grid) {
  constexpr std::string_view where = "grid";
  SimGrid g;
  g.x_min = number(grid, "x_min", where);
  g.x_max = number(grid, "x_max", where);
  if (!(g.x_max > g.x_min)) throw ConfigError("grid.x_max must exceed grid.x_min");
  if (grid.contains("n_cells")) {
    g.n_cells = static_cast<int>(number(grid, "n_cells", where));
  } else {
    const double dx = number(grid, "dx", where);
    positive(dx, "grid.dx");
    g.n_cells = static_cast<int>(std::lround((g.x_max - g.x_min) / dx));
  }
  if (g.n_cells < 2) throw ConfigError("grid.n_cells must be at least 2");
  return g;
}

InitialCondition init_from_config(const nlohmann::json& init, const MediumSpec& medium) {
  constexpr std::string_view where = "init";
  const auto type = init.value("type", std::string("bump"));
  if (type == "bump") {
    CompactBump bump;
    bump.center = number_or(init, "center", 0.0, where);
    bump.width = number_or(init, "width", 2.0 * medium.medium.period, where);
    bump.height = init.contains("height") ? number(init, "height", where)
                                          : 0.5 * min_stationary_state(medium.medium);
    if (!(bump.height > 0.0)) throw ConfigError("init.height must be positive (u(0) must not vanish)");
    positive(bump.width, "init.width");
    return bump;
  }
  if (type == "exact-front") {
    if (!medium.medium.tuned()) {
      throw ConfigError(
          "exact-front initial data need a tuned medium (r = r0 + w, b = b0 a^{1/4}); set "
          "medium.tuned = true");
    }
    ExactFrontSnapshot snap;
    snap.t0 = number_or(init, "t0", 0.0, where);
    snap.front = std::make_shared<const ExplicitFront>(
        make_explicit_front(medium.medium, number_or(init, "xi0", 0.0, where), medium.n_quad));
    return snap;
  }
  throw ConfigError(fmt::format("unknown init type '{}' (expected bump or exact-front)", type));
}

RunOptions run_options_from_config(const nlohmann::json& config) {
  constexpr std::string_view where = "config";
  RunOptions options;
  options.dt = number(config, "dt", where);
  options.t_end = number(config, "t_end", where);
  positive(options.dt, "dt");
  positive(options.t_end, "t_end");
  options.record_every = static_cast<int>(number_or(config, "record_every", 10, where));
  if (options.record_every < 1) throw ConfigError("record_every must be at least 1");
  if (config.contains("theta") && !config.at("theta").is_null()) {
    options.theta = number(config, "theta", where);
    positive(*options.theta, "theta");
  }
  if (config.contains("discard_fraction") && !config.at("discard_fraction").is_null()) {
    options.discard_fraction = number(config, "discard_fraction", where);
  }
  options.margin_periods = number_or(config, "margin_periods", 10.0, where);
  const auto integrator = config.value("integrator", std::string("imex"));
  if (integrator == "imex") {
    options.integrator = Integrator::Imex;
  } else if (integrator == "explicit") {
    options.integrator = Integrator::Explicit;
  } else {
    throw ConfigError(fmt::format("integrator must be \"imex\" or \"explicit\" (got \"{}\")", integrator));
  }
  return options;
}

}  // namespace kpp
