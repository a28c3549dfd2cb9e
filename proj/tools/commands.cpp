#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "kpp/config.hpp"
#include "kpp/coordinate_map.hpp"
#include "kpp/errors.hpp"
#include "kpp/exact_front.hpp"
#include "kpp/media.hpp"
#include "kpp/pde_sim.hpp"
#include "kpp/report.hpp"
#include "kpp/spectral.hpp"
#include "kpp/speed.hpp"

#ifndef KPPLAB_VERSION
#define KPPLAB_VERSION "0.0.0"
#endif

namespace kpp::cli {

namespace {

using nlohmann::json;

const json kReferenceMedium = {{"type", "cosine"}, {"L", 1.0}, {"eps", 0.5},
                            {"r0", 1.0},        {"b0", 1.0}, {"tuned", true}};

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return out;
}

const json& section(const json& config, const char* key) {
  if (!config.contains(key)) throw ConfigError(fmt::format("config is missing '{}'", key));
  return config.at(key);
}

double get_number(const json& config, const char* key) {
  const json& value = section(config, key);
  if (!value.is_number()) throw ConfigError(fmt::format("'{}' must be a number", key));
  return value.get<double>();
}

std::vector<double> get_numbers(const json& config, const char* key) {
  const json& value = section(config, key);
  if (!value.is_array()) throw ConfigError(fmt::format("'{}' must be an array", key));
  std::vector<double> out;
  for (const auto& item : value) {
    if (!item.is_number()) throw ConfigError(fmt::format("'{}' must contain numbers", key));
    out.push_back(item.get<double>());
  }
  return out;
}

int get_int(const json& config, const char* key, int minimum) {
  const double value = get_number(config, key);
  if (value != std::floor(value) || value < minimum) {
    throw ConfigError(fmt::format("'{}' must be an integer >= {} (got {})", key, minimum, value));
  }
  return static_cast<int>(value);
}

double max_p(const PeriodicMedium& m) {
  double hi = 0.0;
  for (int i = 0; i < 1024; ++i) {
    hi = std::max(hi, *m.r0 / *m.b0 * std::pow(m.a(m.period * i / 1024.0), -0.25));
  }
  return hi;
}

// Resolves "dt": "auto" to 90% of the stability cap.
json with_resolved_dt(const json& config, const PeriodicMedium& medium, const SimGrid& grid) {
  json out = config;
  const json& dt = section(config, "dt");
  if (dt.is_string() && dt.get<std::string>() == "auto") {
    const auto integrator = config.value("integrator", std::string("imex")) == "explicit"
                                ? Integrator::Explicit
                                : Integrator::Imex;
    out["dt"] = 0.9 * max_stable_dt(medium, grid, integrator);
  }
  return out;
}

Check make_check(std::string name, double value, std::string requirement, bool pass) {
  return Check{std::move(name), value, std::move(requirement), pass};
}

int finish(Context& context, const std::vector<Check>& checks, json report,
           const std::string& report_name) {
  bool all = true;
  json list = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    list.push_back(to_json(c));
    context.info(fmt::format("{} {}: {} ({})", c.pass ? "PASS" : "FAIL", c.name,
                             format_number(c.value), c.requirement));
  }
  report["checks"] = list;
  report["pass"] = all;
  context.write_file(report_name, report.dump(2) + "\n");
  return all ? kExitPass : kExitCheckFailed;
}

struct NamedMedium {
  std::string id;
  double eps = std::numeric_limits<double>::quiet_NaN();
  MediumSpec spec;
};

struct SpeedRow {
  SpeedResult fg;
  SandwichBounds bounds;
  double closed_form = std::numeric_limits<double>::quiet_NaN();
  double az_speed = std::numeric_limits<double>::quiet_NaN();
};

SpeedRow speed_row(const PeriodicMedium& m, int n) {
  SpeedRow row;
  row.fg = freidlin_gartner_speed(m, n);
  row.bounds = sandwich_bounds(m);
  if (m.tuned()) {
    row.closed_form = closed_form_speed(*m.r0, row.bounds.mean_inv_sqrt_a);
    row.az_speed = az_front_speed(*m.r0, row.bounds.mean_inv_sqrt_a);
  }
  return row;
}

}  // namespace

void Context::info(const std::string& line) const {
  if (!quiet && log) *log << line << '\n';
}

void Context::write_file(const std::string& name, const std::string& content) {
  write_text_atomic(output_dir / name, content);
  if (std::find(outputs.begin(), outputs.end(), name) == outputs.end()) outputs.push_back(name);
}

nlohmann::json to_json(const Check& check) {
  return json{{"name", check.name},
              {"value", std::isfinite(check.value) ? json(check.value) : json(nullptr)},
              {"requirement", check.requirement},
              {"pass", check.pass}};
}

std::vector<std::string> command_names() {
  return {"verify-exact", "speed", "large-l", "simulate", "eigen", "sweep"};
}

nlohmann::json default_config(std::string_view command) {
  if (command == "verify-exact") {
    return json{{"medium", kReferenceMedium},
                {"xi0", 0.0},
                {"ns", {256, 512, 1024}},
                {"residual_time", 0.0},
                {"periods", 8},
                {"pulsating", {{"t_min", -3.0}, {"t_max", 3.0}, {"x_min", -3.0}, {"x_max", 3.0}, {"points", 20}}},
                {"figure", {{"times", {-2.0, 0.0, 2.0, 4.0}}, {"x_min", -6.0}, {"x_max", 10.0}, {"points", 801}}},
                {"simulation",
                 {{"enabled", true},
                  {"grid", {{"x_min", -20.0}, {"x_max", 120.0}, {"dx", 1.0 / 64}}},
                  {"dt", "auto"},
                  {"t_end", 40.0},
                  {"record_every", 20}}},
                {"tolerances",
                 {{"pulsating", 1e-10},
                  {"order_min", 1.8},
                  {"order_max", 2.2},
                  {"residual_factor", 1e-3},
                  {"speed_rel", 0.02}}}};
  }
  if (command == "speed") {
    return json{{"medium", kReferenceMedium},
                {"eps", {0.0, 0.3, 0.5, 0.9}},
                {"media", json::array()},
                {"random_media", 0},
                {"n", 2048},
                {"containment_slack", 1e-3},
                {"closed_form_rtol", 2e-3}};
  }
  if (command == "large-l") {
    json base = kReferenceMedium;
    base["tuned"] = false;
    return json{{"medium", base},
                {"L", {4.0, 8.0, 16.0}},
                {"nodes_per_period", 256},
                {"slope_target", -2.0},
                {"slope_tolerance", 0.3}};
  }
  if (command == "simulate") {
    return json{{"medium", kReferenceMedium},
                {"grid", {{"x_min", -20.0}, {"x_max", 200.0}, {"dx", 1.0 / 64}}},
                {"init", {{"type", "bump"}, {"center", 0.0}, {"width", 2.0}}},
                {"dt", "auto"},
                {"t_end", 100.0},
                {"record_every", 20},
                {"theta", nullptr},
                {"integrator", "imex"},
                {"expected_speed", "auto"},
                {"speed_tolerance", nullptr},
                {"snapshots", 40},
                {"snapshot_stride", 16}};
  }
  if (command == "eigen") {
    json untuned = kReferenceMedium;
    untuned["tuned"] = false;
    return json{{"medium", untuned}, {"lambda", {0.5, 1.0, 2.0}}, {"n", 1024}, {"include_phi", true}};
  }
  if (command == "sweep") {
    return json{{"medium", kReferenceMedium},
                {"parameter", "eps"},
                {"values", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}},
                {"n", 1024},
                {"containment_slack", 1e-3}};
  }
  throw ConfigError(fmt::format("unknown command '{}'", command));
}

int run_command(std::string_view command, Context& context) {
  if (command == "verify-exact") return cmd_verify_exact(context);
  if (command == "speed") return cmd_speed(context);
  if (command == "large-l") return cmd_large_l(context);
  if (command == "simulate") return cmd_simulate(context);
  if (command == "eigen") return cmd_eigen(context);
  if (command == "sweep") return cmd_sweep(context);
  throw ConfigError(fmt::format("unknown command '{}'", command));
}

int cmd_verify_exact(Context& context) {
  const json& cfg = context.config;
  const MediumSpec spec = medium_from_config(section(cfg, "medium"));
  const PeriodicMedium& m = spec.medium;
  if (!m.tuned()) {
    throw ConfigError(
        "verify-exact needs a tuned medium: the explicit front exists only when r = r0 + w and "
        "b = b0 a^{1/4}; set medium.tuned = true");
  }
  const json& tol = section(cfg, "tolerances");
  const auto front = std::make_shared<const ExplicitFront>(
      make_explicit_front(m, cfg.value("xi0", 0.0), spec.n_quad));
  std::vector<Check> checks;
  json report;

  const json& pul = section(cfg, "pulsating");
  const int points = get_int(pul, "points", 1);
  const auto ts = linspace(get_number(pul, "t_min"), get_number(pul, "t_max"), points);
  const auto xs = linspace(get_number(pul, "x_min"), get_number(pul, "x_max"), points);
  const double pulsating = pulsating_identity_residual(*front, ts, xs);
  report["pulsating_residual"] = pulsating;
  checks.push_back(make_check("pulsating identity u(t+T,x) = u(t,x-L)", pulsating,
                              fmt::format("<= {}", get_number(tol, "pulsating")),
                              pulsating <= get_number(tol, "pulsating")));

  const auto ns = get_numbers(cfg, "ns");
  if (ns.size() < 2) throw ConfigError("'ns' needs at least two grid sizes");
  const double t_res = get_number(cfg, "residual_time");
  const int periods = get_int(cfg, "periods", 1);
  std::vector<double> residuals;
  json by_n = json::object();
  for (double n : ns) {
    residuals.push_back(pde_residual(*front, t_res, static_cast<int>(n), periods));
    by_n[fmt::format("{}", static_cast<int>(n))] = residuals.back();
    context.info(fmt::format("pde residual n = {}: {:.4e}", static_cast<int>(n), residuals.back()));
  }
  json orders = json::array();
  const double order_min = get_number(tol, "order_min");
  const double order_max = get_number(tol, "order_max");
  bool orders_ok = true;
  double last_order = 0.0;
  for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
    last_order = std::log(residuals[i] / residuals[i + 1]) / std::log(ns[i + 1] / ns[i]);
    orders.push_back(last_order);
    orders_ok = orders_ok && last_order >= order_min && last_order <= order_max;
  }
  report["pde_residual_by_n"] = by_n;
  report["convergence_orders"] = orders;
  report["convergence_order"] = last_order;
  checks.push_back(make_check("pde residual convergence order", last_order,
                              fmt::format("every doubling in [{}, {}]", order_min, order_max),
                              orders_ok));
  const double bound = get_number(tol, "residual_factor") * *m.r0 * max_p(m);
  checks.push_back(make_check(fmt::format("pde residual at n = {}", static_cast<int>(ns.back())),
                              residuals.back(), fmt::format("<= {:.6g}", bound),
                              residuals.back() <= bound));

  const double mean = front->map().mean_inv_sqrt_a();
  const double c_star = closed_form_speed(*m.r0, mean);
  report["speeds"] = {{"c_az", front->c_az()}, {"c", front->speed()}, {"c_star", c_star}};
  report["period_T"] = front->period_T();
  checks.push_back(make_check("explicit front faster than minimal speed", front->speed() - c_star,
                              "c - c* > 0", front->speed() > c_star));

  // Profiles of u(t, .) at several times.
  const json& fig = section(cfg, "figure");
  const auto fig_x = linspace(get_number(fig, "x_min"), get_number(fig, "x_max"),
                              get_int(fig, "points", 2));
  std::vector<PlotSeries> series;
  std::vector<std::string> header{"x", "p"};
  std::vector<double> p_values;
  for (double x : fig_x) p_values.push_back(front->stationary_state(x));
  series.push_back({"p(x)", fig_x, p_values});
  const auto fig_t = get_numbers(fig, "times");
  for (double t : fig_t) {
    std::vector<double> u;
    for (double x : fig_x) u.push_back(front->evaluate(t, x));
    series.push_back({fmt::format("t = {}", format_number(t)), fig_x, std::move(u)});
    header.push_back(fmt::format("u(t={})", format_number(t)));
  }
  CsvTable profiles(header);
  for (std::size_t i = 0; i < fig_x.size(); ++i) {
    std::vector<CsvCell> row{fig_x[i]};
    for (const auto& s : series) row.emplace_back(s.y[i]);
    profiles.add_row(std::move(row));
  }
  context.write_file("exact_front_profiles.csv", profiles.str());
  context.write_file(
      "exact_front.svg",
      line_plot_svg(series, {fmt::format("Explicit pulsating front, eps = {}, L = {}",
                                         format_number(section(cfg, "medium").value("eps", 0.0)),
                                         format_number(m.period)),
                             "x", "u(t, x)"}));

  const json& sim = section(cfg, "simulation");
  if (sim.value("enabled", true)) {
    const SimGrid grid = grid_from_config(section(sim, "grid"));
    const RunOptions options = run_options_from_config(with_resolved_dt(sim, m, grid));
    const auto result = run(m, grid, ExactFrontSnapshot{front, 0.0}, options);
    const double rel = std::abs(result.fit.slope - front->speed()) / front->speed();
    double gap = 0.0;
    const double x_front = front->front_location(result.final_state.t);
    for (int i = 0; i < grid.n_cells; ++i) {
      const double x = grid.center(i);
      if (std::abs(x - x_front) <= 5.0 * m.period) {
        gap = std::max(gap, std::abs(result.final_state.u[i] -
                                     front->evaluate(result.final_state.t, x)));
      }
    }
    report["simulation"] = {{"fitted_speed", result.fit.slope},
                            {"r2", result.fit.r2},
                            {"relative_error", rel},
                            {"dt", options.dt},
                            {"final_sup_gap_near_front", gap}};
    CsvTable trace({"t", "x_front"});
    for (const auto& [t, x] : result.trace.samples) trace.add_row({t, x});
    context.write_file("exact_front_trace.csv", trace.str());
    const double speed_tol = get_number(tol, "speed_rel");
    checks.push_back(make_check("snapshot run speed vs L/T", rel,
                                fmt::format("relative error <= {} with r2 >= 0.999", speed_tol),
                                rel <= speed_tol && result.fit.reliable));
  }
  return finish(context, checks, report, "verify_exact.json");
}

int cmd_speed(Context& context) {
  const json& cfg = context.config;
  const int n = get_int(cfg, "n", 32);
  std::vector<NamedMedium> media;

  const json& base = section(cfg, "medium");
  const auto eps_list = cfg.contains("eps") ? get_numbers(cfg, "eps") : std::vector<double>{};
  if (!eps_list.empty()) {
    if (base.value("type", std::string()) != "cosine") {
      throw ConfigError("an 'eps' list needs a cosine base medium");
    }
    for (double eps : eps_list) {
      json item = base;
      item["eps"] = eps;
      media.push_back({fmt::format("cosine-eps{}", format_number(eps)), eps, medium_from_config(item)});
    }
  } else {
    media.push_back({base.value("label", std::string("medium")), base.value("eps", std::nan("")),
                     medium_from_config(base)});
  }
  if (cfg.contains("media")) {
    int k = 0;
    for (const auto& item : cfg.at("media")) {
      media.push_back({item.value("label", fmt::format("medium-{}", k++)),
                       item.value("eps", std::nan("")), medium_from_config(item)});
    }
  }
  std::mt19937_64 rng(context.seed);
  const int random_count = cfg.contains("random_media") ? get_int(cfg, "random_media", 0) : 0;
  for (int k = 0; k < random_count; ++k) {
    media.push_back({fmt::format("random-{}", k), std::nan(""),
                     MediumSpec{make_random_fourier_medium(rng, 1.0), 4096}});
  }

  const double slack = get_number(cfg, "containment_slack");
  const double rtol = get_number(cfg, "closed_form_rtol");
  CsvTable table({"medium-id", "eps", "L", "n", "lambda_star", "c_star", "lower_bound",
                  "upper_bound", "closed_form", "az_speed"});
  std::vector<Check> checks;
  json rows = json::array();
  for (const auto& item : media) {
    const SpeedRow row = speed_row(item.spec.medium, n);
    table.add_row({item.id, item.eps, item.spec.medium.period, static_cast<long long>(row.fg.n),
                   row.fg.lambda_star, row.fg.c_star, row.bounds.lower, row.bounds.upper,
                   row.closed_form, row.az_speed});
    context.info(fmt::format("{}: c* = {:.8f}, bounds [{:.6f}, {:.6f}]", item.id, row.fg.c_star,
                             row.bounds.lower, row.bounds.upper));
    const double margin = std::min(row.fg.c_star - row.bounds.lower, row.bounds.upper - row.fg.c_star);
    checks.push_back(make_check(fmt::format("{} sandwich containment", item.id), margin,
                                fmt::format(">= -{}", slack), margin >= -slack));
    if (item.spec.medium.tuned()) {
      const double rel = std::abs(row.fg.c_star - row.closed_form) / row.closed_form;
      checks.push_back(make_check(fmt::format("{} closed-form agreement", item.id), rel,
                                  fmt::format("relative error <= {}", rtol), rel <= rtol));
    }
    rows.push_back({{"id", item.id},
                    {"c_star", row.fg.c_star},
                    {"lambda_star", row.fg.lambda_star},
                    {"locally_optimal", row.fg.locally_optimal},
                    {"k0", row.fg.k0},
                    {"lower_degenerate", row.bounds.lower_degenerate}});
  }
  context.write_file("speed.csv", table.str());
  return finish(context, checks, json{{"media", rows}}, "speed.json");
}

int cmd_large_l(Context& context) {
  const json& cfg = context.config;
  const MediumSpec spec = medium_from_config(section(cfg, "medium"));
  const auto sweep =
      large_period_sweep(spec.medium, get_numbers(cfg, "L"), get_int(cfg, "nodes_per_period", 32));
  CsvTable table({"L", "n", "lambda_star", "c_star", "c_limit", "deviation", "mean_inv_sqrt_a"});
  PlotSeries dev{"|c*(L) - c_inf|", {}, {}};
  PlotSeries ref{"slope -2 reference", {}, {}};
  for (const auto& row : sweep.rows) {
    table.add_row({row.L, static_cast<long long>(row.n), row.lambda_star, row.c_star,
                   sweep.c_limit, row.deviation, row.mean_inv_sqrt_a});
    context.info(fmt::format("L = {}: c* = {:.10f}, deviation {:.4e}", format_number(row.L),
                             row.c_star, row.deviation));
    dev.x.push_back(std::log10(row.L));
    dev.y.push_back(std::log10(std::abs(row.deviation)));
  }
  for (const auto& w : sweep.warnings) context.info("warning: " + w);
  if (!dev.x.empty()) {
    for (double lx : dev.x) {
      ref.x.push_back(lx);
      ref.y.push_back(dev.y.back() - 2.0 * (lx - dev.x.back()));
    }
  }
  context.write_file("large_l.csv", table.str());
  context.write_file("large_l.svg",
                     line_plot_svg({dev, ref}, {"Large-period deviation", "log10 L",
                                                "log10 |c*(L) - c_inf|"}));
  const double target = get_number(cfg, "slope_target");
  const double tol = get_number(cfg, "slope_tolerance");
  const bool ok = std::isfinite(sweep.fitted_slope) && std::abs(sweep.fitted_slope - target) <= tol;
  std::vector<Check> checks{make_check("log-log slope of |c*(L) - c_inf|", sweep.fitted_slope,
                                       fmt::format("{} +/- {}", target, tol), ok)};
  return finish(context, checks,
                json{{"c_limit", sweep.c_limit},
                     {"fitted_slope", sweep.fitted_slope},
                     {"warnings", sweep.warnings}},
                "large_l.json");
}

int cmd_simulate(Context& context) {
  const json& cfg = context.config;
  const MediumSpec spec = medium_from_config(section(cfg, "medium"));
  const PeriodicMedium& m = spec.medium;
  const SimGrid grid = grid_from_config(section(cfg, "grid"));
  validate_grid(grid, m);
  const InitialCondition init = init_from_config(section(cfg, "init"), spec);
  RunOptions options = run_options_from_config(with_resolved_dt(cfg, m, grid));
  const bool snapshot_init = std::holds_alternative<ExactFrontSnapshot>(init);

  const int snapshot_count = cfg.contains("snapshots") ? get_int(cfg, "snapshots", 0) : 0;
  const int stride = cfg.contains("snapshot_stride") ? get_int(cfg, "snapshot_stride", 1) : 1;
  const double t_begin = snapshot_init ? std::get<ExactFrontSnapshot>(init).t0 : 0.0;
  std::vector<double> snap_t;
  std::vector<std::vector<double>> snap_u;
  std::vector<double> snap_x;
  for (int i = 0; i < grid.n_cells; i += stride) snap_x.push_back(grid.center(i));
  double next_snapshot = t_begin;
  const double snapshot_gap = snapshot_count > 1 ? options.t_end / (snapshot_count - 1) : 0.0;
  if (snapshot_count > 0) {
    options.observer = [&](const SimState& state) {
      if (state.t + 1e-9 < next_snapshot) return;
      snap_t.push_back(state.t);
      std::vector<double> row;
      for (int i = 0; i < grid.n_cells; i += stride) row.push_back(state.u[i]);
      snap_u.push_back(std::move(row));
      next_snapshot += snapshot_gap > 0.0 ? snapshot_gap : std::numeric_limits<double>::infinity();
    };
  }

  context.info(fmt::format("simulate: {} cells, dt = {:.6g}, t_end = {}", grid.n_cells, options.dt,
                           format_number(options.t_end)));
  const auto result = run(m, grid, init, options);

  CsvTable trace({"t", "x_front"});
  for (const auto& [t, x] : result.trace.samples) trace.add_row({t, x});
  context.write_file("trace.csv", trace.str());
  if (!snap_t.empty()) {
    CsvTable snaps({"t", "x", "u"});
    for (std::size_t k = 0; k < snap_t.size(); ++k) {
      for (std::size_t j = 0; j < snap_x.size(); ++j) snaps.add_row({snap_t[k], snap_x[j], snap_u[k][j]});
    }
    context.write_file("snapshots.csv", snaps.str());
    context.write_file("spacetime.svg",
                       space_time_svg(snap_t, snap_x, snap_u, {"u(t, x)", "x", "t"}));
  }

  double expected = std::nan("");
  const json& exp = section(cfg, "expected_speed");
  if (exp.is_number()) {
    expected = exp.get<double>();
  } else if (exp.is_string() && exp.get<std::string>() == "auto") {
    if (snapshot_init) {
      expected = std::get<ExactFrontSnapshot>(init).front->speed();
    } else if (m.tuned()) {
      expected = closed_form_speed(*m.r0, build_coordinate_map(m, spec.n_quad).mean_inv_sqrt_a());
    } else {
      expected = freidlin_gartner_speed(m, 1024).c_star;
    }
  } else if (!exp.is_null()) {
    throw ConfigError("expected_speed must be a number, \"auto\" or null");
  }
  double tol = snapshot_init ? 0.02 : 0.05;
  if (cfg.contains("speed_tolerance") && cfg.at("speed_tolerance").is_number()) {
    tol = cfg.at("speed_tolerance").get<double>();
  }

  std::vector<Check> checks;
  checks.push_back(make_check("front fit quality r2", result.fit.r2,
                              ">= 0.999 and x_front nondecreasing", result.fit.reliable));
  json report{{"fitted_speed", result.fit.slope},
              {"intercept", result.fit.intercept},
              {"r2", result.fit.r2},
              {"fit_window", {result.fit.t_lo, result.fit.t_hi}},
              {"samples", result.fit.samples},
              {"level", result.trace.level},
              {"dt", options.dt},
              {"dx", grid.dx()}};
  if (std::isfinite(expected)) {
    const double rel = std::abs(result.fit.slope - expected) / expected;
    report["expected_speed"] = expected;
    report["relative_error"] = rel;
    checks.push_back(make_check("fitted speed vs expected", rel,
                                fmt::format("relative error <= {}", tol), rel <= tol));
  }
  context.info(fmt::format("fitted speed {:.6f} (r2 = {:.6f})", result.fit.slope, result.fit.r2));
  return finish(context, checks, report, "simulate.json");
}

int cmd_eigen(Context& context) {
  const json& cfg = context.config;
  const MediumSpec spec = medium_from_config(section(cfg, "medium"));
  const int n = get_int(cfg, "n", 32);
  const json& lambda = section(cfg, "lambda");
  const auto lambdas = lambda.is_array() ? get_numbers(cfg, "lambda")
                                         : std::vector<double>{get_number(cfg, "lambda")};
  const bool include_phi = cfg.value("include_phi", true);
  json results = json::array();
  CsvTable table({"lambda", "n", "k", "residual"});
  for (double l : lambdas) {
    const auto result = principal_eigenpair(assemble(spec.medium, l, n));
    json item = to_json(result);
    if (!include_phi) item.erase("phi");
    results.push_back(item);
    table.add_row({l, static_cast<long long>(result.n), result.k, result.residual});
    context.info(fmt::format("lambda = {}: k = {:.12f} (residual {:.2e})", format_number(l),
                             result.k, result.residual));
  }
  context.write_file("eigen.csv", table.str());
  context.write_file("eigen.json", json{{"results", results}}.dump(2) + "\n");
  return kExitPass;
}

int cmd_sweep(Context& context) {
  const json& cfg = context.config;
  const json& base = section(cfg, "medium");
  const json& parameter = section(cfg, "parameter");
  if (!parameter.is_string()) throw ConfigError("'parameter' must name a medium key");
  const auto key = parameter.get<std::string>();
  const auto values = get_numbers(cfg, "values");
  const int n = get_int(cfg, "n", 32);
  const double slack = get_number(cfg, "containment_slack");

  CsvTable table({key, "c_star", "lambda_star", "lower_bound", "upper_bound", "closed_form",
                  "az_speed"});
  PlotSeries fg{"c* (eigenvalue)", {}, {}}, lo{"lower bound", {}, {}}, hi{"upper bound", {}, {}},
      az{"explicit front speed", {}, {}};
  std::vector<Check> checks;
  for (double v : values) {
    json item = base;
    item[key] = v;
    const MediumSpec spec = medium_from_config(item);
    const SpeedRow row = speed_row(spec.medium, n);
    table.add_row({v, row.fg.c_star, row.fg.lambda_star, row.bounds.lower, row.bounds.upper,
                   row.closed_form, row.az_speed});
    fg.x.push_back(v);
    fg.y.push_back(row.fg.c_star);
    lo.x.push_back(v);
    lo.y.push_back(row.bounds.lower);
    hi.x.push_back(v);
    hi.y.push_back(row.bounds.upper);
    if (std::isfinite(row.az_speed)) {
      az.x.push_back(v);
      az.y.push_back(row.az_speed);
    }
    const double margin = std::min(row.fg.c_star - row.bounds.lower, row.bounds.upper - row.fg.c_star);
    checks.push_back(make_check(fmt::format("{} = {} containment", key, format_number(v)), margin,
                                fmt::format(">= -{}", slack), margin >= -slack));
    context.info(fmt::format("{} = {}: c* = {:.8f}", key, format_number(v), row.fg.c_star));
  }
  context.write_file("sweep.csv", table.str());
  std::vector<PlotSeries> series{fg, lo, hi};
  if (!az.x.empty()) series.push_back(az);
  context.write_file("sweep.svg", line_plot_svg(series, {"Spreading speed sweep", key, "speed"}));
  return finish(context, checks, json{{"parameter", key}}, "sweep.json");
}

int execute(const Invocation& invocation, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    Context context;
    context.config = default_config(invocation.command);
    if (!invocation.config_path.empty()) {
      merge_config(context.config, load_config_file(invocation.config_path));
    }
    for (const auto& o : invocation.overrides) apply_override(context.config, o);
    context.output_dir = invocation.output_dir.empty()
                             ? std::filesystem::path("out") / invocation.command
                             : invocation.output_dir;
    std::filesystem::create_directories(context.output_dir);
    context.seed = invocation.seed;
    context.quiet = invocation.quiet;
    context.log = &out;

    const int code = run_command(invocation.command, context);

    RunManifest manifest;
    manifest.command = invocation.command;
    manifest.config = context.config;
    manifest.config["seed"] = invocation.seed;
    manifest.version = KPPLAB_VERSION;
    manifest.timestamp = utc_timestamp();
    manifest.outputs = context.outputs;
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(context.output_dir, manifest);
    if (code != kExitPass) err << invocation.command << ": one or more checks failed\n";
    return code;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace kpp::cli
