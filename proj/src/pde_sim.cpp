#include "kpp/pde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>

#include <fmt/format.h>

#include "kpp/errors.hpp"

namespace kpp {

namespace {

constexpr double kSilentUndershoot = 1e-13;

double max_stationary_state(const PeriodicMedium& m) {
  if (m.tuned()) {
    double hi = 0.0;
    for (int i = 0; i < 1024; ++i) {
      hi = std::max(hi, *m.r0 / *m.b0 * std::pow(m.a(m.period * i / 1024.0), -0.25));
    }
    return hi;
  }
  return stationary_upper_bound(m);
}

double rate_bound_for(const PeriodicMedium& m, std::span<const double> x, double u_cap) {
  double bound = 0.0;
  const int levels = m.mode == Nonlinearity::Logistic ? 1 : 16;
  for (double xi : x) {
    for (int j = 0; j <= levels; ++j) {
      bound = std::max(bound, std::abs(m.reaction_du(xi, u_cap * j / levels)));
    }
  }
  return bound;
}

}  // namespace

void validate_grid(const SimGrid& grid, const PeriodicMedium& medium) {
  if (grid.n_cells < 2 || !(grid.x_max > grid.x_min)) {
    throw std::invalid_argument("simulation grid needs x_max > x_min and at least 2 cells");
  }
  const double periods = (grid.x_max - grid.x_min) / medium.period;
  if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods)) {
    throw std::invalid_argument(fmt::format(
        "domain length {} is not a whole number of periods L = {}", grid.x_max - grid.x_min,
        medium.period));
  }
  if (grid.dx() > medium.period / 64.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument(fmt::format(
        "cell width {} does not resolve the medium; need dx <= L/64 = {}", grid.dx(),
        medium.period / 64.0));
  }
}

SimState initialize(const SimGrid& grid, const InitialCondition& init) {
  SimState state;
  state.u.assign(grid.n_cells, 0.0);
  if (const auto* bump = std::get_if<CompactBump>(&init)) {
    if (!(bump->height > 0.0)) {
      throw std::invalid_argument("initial bump must have positive height (u(0) must not vanish)");
    }
    if (!(bump->width > 0.0) || bump->center - 0.5 * bump->width < grid.x_min ||
        bump->center + 0.5 * bump->width > grid.x_max) {
      throw std::invalid_argument("initial bump support must lie inside the domain");
    }
    for (int i = 0; i < grid.n_cells; ++i) {
      const double z = grid.center(i) - bump->center;
      if (std::abs(z) < 0.5 * bump->width) {
        const double c = std::cos(std::numbers::pi * z / bump->width);
        state.u[i] = bump->height * c * c;
      }
    }
  } else {
    const auto& snap = std::get<ExactFrontSnapshot>(init);
    if (!snap.front) throw std::invalid_argument("front snapshot needs a front");
    state.t = snap.t0;
    for (int i = 0; i < grid.n_cells; ++i) state.u[i] = snap.front->evaluate(snap.t0, grid.center(i));
  }
  if (*std::max_element(state.u.begin(), state.u.end()) <= 0.0) {
    throw std::invalid_argument("initial data vanish on the grid");
  }
  return state;
}

KppStepper::KppStepper(const PeriodicMedium& medium, const SimGrid& grid, double dt,
                       Integrator integrator)
    : medium_(medium), grid_(grid), dt_(dt), integrator_(integrator) {
  validate_grid(grid, medium);
  if (!(dt > 0.0)) throw StabilityViolation("time step must be positive");
  const int n = grid.n_cells;
  const double dx = grid.dx();

  x_.resize(n);
  r_.resize(n);
  b_.resize(n);
  for (int i = 0; i < n; ++i) {
    x_[i] = grid.center(i);
    r_[i] = medium.r(x_[i]);
    b_[i] = medium.mode == Nonlinearity::Logistic ? medium.b(x_[i]) : 0.0;
  }
  face_.assign(n + 1, 0.0);
  double a_max = 0.0;
  for (int i = 1; i < n; ++i) {
    face_[i] = medium.a(grid.x_min + i * dx);
    a_max = std::max(a_max, face_[i]);
  }

  u_cap_ = 2.0 * max_stationary_state(medium);
  rate_bound_ = rate_bound_for(medium, x_, u_cap_);
  if (rate_bound_ > 0.0 && dt > 0.1 / rate_bound_) {
    throw StabilityViolation(fmt::format(
        "dt = {} exceeds the reaction cap 0.1 / max|d_u f| = {:.6g}", dt, 0.1 / rate_bound_));
  }
  if (integrator == Integrator::Explicit && dt > 0.4 * dx * dx / a_max) {
    throw StabilityViolation(fmt::format(
        "dt = {} exceeds the explicit diffusion limit 0.4 dx^2 / max a = {:.6g}", dt,
        0.4 * dx * dx / a_max));
  }

  if (integrator == Integrator::Imex) {
    const double c = dt / (dx * dx);
    std::vector<double> sub(n), diag(n), sup(n);
    for (int i = 0; i < n; ++i) {
      sub[i] = -c * face_[i];
      sup[i] = -c * face_[i + 1];
      diag[i] = 1.0 + c * (face_[i] + face_[i + 1]);
    }
    implicit_ = TridiagonalFactor(sub, diag, sup);
  }
  work_.resize(n);
}

void KppStepper::advance(std::vector<double>& u) const {
  const int n = grid_.n_cells;
  const double dx = grid_.dx();
  const bool logistic = medium_.mode == Nonlinearity::Logistic;
  auto reaction = [&](int i) {
    return logistic ? (r_[i] - b_[i] * u[i]) * u[i] : medium_.f(x_[i], u[i]);
  };

  if (integrator_ == Integrator::Imex) {
    for (int i = 0; i < n; ++i) work_[i] = u[i] + dt_ * reaction(i);
    implicit_.solve_in_place(work_);
  } else {
    const double c = dt_ / (dx * dx);
    for (int i = 0; i < n; ++i) {
      const double right = i + 1 < n ? face_[i + 1] * (u[i + 1] - u[i]) : 0.0;
      const double left = i > 0 ? face_[i] * (u[i] - u[i - 1]) : 0.0;
      work_[i] = u[i] + c * (right - left) + dt_ * reaction(i);
    }
  }

  for (int i = 0; i < n; ++i) {
    double value = work_[i];
    if (value < 0.0) {
      if (value < -kSilentUndershoot) {
        throw NegativityBreach(fmt::format(
            "u = {:.3g} < 0 at x = {:.6g}; the time step is too large or the scheme is broken",
            value, x_[i]));
      }
      value = 0.0;
    }
    u[i] = value;
  }
}

SimState KppStepper::step(const SimState& state) const {
  SimState next = state;
  advance(next.u);
  next.t += dt_;
  return next;
}

double max_stable_dt(const PeriodicMedium& medium, const SimGrid& grid, Integrator integrator) {
  validate_grid(grid, medium);
  std::vector<double> x(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) x[i] = grid.center(i);
  const double rate = rate_bound_for(medium, x, 2.0 * max_stationary_state(medium));
  double dt = rate > 0.0 ? 0.1 / rate : std::numeric_limits<double>::infinity();
  if (integrator == Integrator::Explicit) {
    double a_max = 0.0;
    for (int i = 1; i < grid.n_cells; ++i) a_max = std::max(a_max, medium.a(grid.x_min + i * grid.dx()));
    dt = std::min(dt, 0.4 * grid.dx() * grid.dx() / a_max);
  }
  return dt;
}

SimState step(const SimState& state, const PeriodicMedium& medium, const SimGrid& grid,
              double dt, Integrator integrator) {
  return KppStepper(medium, grid, dt, integrator).step(state);
}

std::optional<double> front_position(const SimState& state, const SimGrid& grid, double level) {
  const int n = grid.n_cells;
  for (int i = n - 1; i >= 0; --i) {
    if (state.u[i] >= level) {
      if (i == n - 1) return grid.x_max;
      const double frac = (state.u[i] - level) / (state.u[i] - state.u[i + 1]);
      return grid.center(i) + frac * grid.dx();
    }
  }
  return std::nullopt;
}

SpeedFit measure_speed(const FrontTrace& trace, double discard_fraction) {
  if (!(discard_fraction >= 0.0 && discard_fraction < 1.0)) {
    throw std::invalid_argument("discard fraction must lie in [0, 1)");
  }
  const auto total = trace.samples.size();
  const auto first = static_cast<std::size_t>(std::floor(discard_fraction * total));
  const auto kept = total - first;
  if (kept < 20) {
    throw InsufficientSamples(
        fmt::format("speed fit needs at least 20 samples after discard, have {}", kept));
  }
  double st = 0, sx = 0;
  for (std::size_t i = first; i < total; ++i) {
    st += trace.samples[i].first;
    sx += trace.samples[i].second;
  }
  const double mt = st / kept;
  const double mx = sx / kept;
  double stt = 0, stx = 0, sxx = 0;
  bool monotone = true;
  for (std::size_t i = first; i < total; ++i) {
    const double dt = trace.samples[i].first - mt;
    const double dxv = trace.samples[i].second - mx;
    stt += dt * dt;
    stx += dt * dxv;
    sxx += dxv * dxv;
    if (i > first && trace.samples[i].second < trace.samples[i - 1].second) monotone = false;
  }
  SpeedFit fit;
  fit.slope = stx / stt;
  fit.intercept = mx - fit.slope * mt;
  fit.r2 = sxx > 0.0 ? (stx * stx) / (stt * sxx) : 1.0;
  fit.t_lo = trace.samples[first].first;
  fit.t_hi = trace.samples.back().first;
  fit.samples = static_cast<int>(kept);
  fit.monotone = monotone;
  fit.reliable = fit.r2 >= 0.999 && monotone;
  return fit;
}

std::vector<double> periodic_stationary_state(const PeriodicMedium& medium, int n) {
  if (n < 32) throw std::invalid_argument("stationary state needs n >= 32");
  const double L = medium.period;
  const double dx = L / n;
  const double cap = stationary_upper_bound(medium);

  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i * dx;
  const double rate = rate_bound_for(medium, x, cap);
  const double dt = 0.5 / std::max(rate, 1e-3);

  const double c = dt / (dx * dx);
  std::vector<double> sub(n), diag(n), sup(n);
  for (int i = 0; i < n; ++i) {
    const double a_minus = medium.a(x[i] - 0.5 * dx);
    const double a_plus = medium.a(x[i] + 0.5 * dx);
    sub[i] = -c * a_minus;
    sup[i] = -c * a_plus;
    diag[i] = 1.0 + c * (a_minus + a_plus);
  }
  const CyclicTridiagonalFactor implicit(sub, diag, sup);

  std::vector<double> u(n, cap);
  std::vector<double> next(n);
  for (int iter = 0; iter < 1000000; ++iter) {
    for (int i = 0; i < n; ++i) next[i] = u[i] + dt * medium.reaction(x[i], u[i]);
    implicit.solve_in_place(next);
    double change = 0.0;
    for (int i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - u[i]));
    u.swap(next);
    if (change < 1e-12 * dt) {
      if (*std::min_element(u.begin(), u.end()) <= 0.0) {
        throw HypothesisViolated("pseudo-time iteration decayed to zero; k_0 <= 0 for this medium");
      }
      return u;
    }
  }
  throw NonConvergence("stationary state iteration did not settle");
}

double min_stationary_state(const PeriodicMedium& medium) {
  if (medium.tuned()) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1024; ++i) {
      lo = std::min(lo, *medium.r0 / *medium.b0 * std::pow(medium.a(medium.period * i / 1024.0), -0.25));
    }
    return lo;
  }
  const auto p = periodic_stationary_state(medium, 256);
  return *std::min_element(p.begin(), p.end());
}

RunResult run(const PeriodicMedium& medium, const SimGrid& grid, const InitialCondition& init,
              const RunOptions& options) {
  if (!(options.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (options.record_every < 1) throw std::invalid_argument("record_every must be at least 1");
  RunResult result;
  SimState state = initialize(grid, init);
  const double t_start = state.t;

  const auto steps = static_cast<long>(std::ceil(options.t_end / options.dt - 1e-9));
  const double dt = options.t_end / static_cast<double>(steps);
  const KppStepper stepper(medium, grid, dt, options.integrator);

  const double level = options.theta ? *options.theta : 0.5 * min_stationary_state(medium);
  const double u_bound =
      std::max(stepper.u_cap(), *std::max_element(state.u.begin(), state.u.end())) * (1.0 + 1e-9);
  const double x_limit = grid.x_max - options.margin_periods * medium.period;
  result.trace.level = level;

  auto record = [&](long index) {
    const double u_max = *std::max_element(state.u.begin(), state.u.end());
    if (u_max > u_bound) {
      throw NegativityBreach(fmt::format(
          "u = {:.6g} exceeds the a priori bound {:.6g}; the scheme lost its maximum principle",
          u_max, u_bound));
    }
    if (const auto xf = front_position(state, grid, level)) {
      if (*xf > x_limit) {
        throw FrontReachedBoundary(fmt::format(
            "front at x = {:.6g} (t = {:.6g}) is within {} periods of x_max = {}; enlarge the "
            "domain or shorten t_end",
            *xf, state.t, options.margin_periods, grid.x_max));
      }
      result.trace.samples.emplace_back(state.t, *xf);
    }
    if (options.observer) options.observer(state);
    (void)index;
  };

  record(0);
  for (long s = 1; s <= steps; ++s) {
    stepper.advance(state.u);
    state.t = t_start + dt * static_cast<double>(s);
    if (s % options.record_every == 0 || s == steps) record(s);
  }

  const double discard = options.discard_fraction
                             ? *options.discard_fraction
                             : (std::holds_alternative<CompactBump>(init) ? 0.5 : 0.1);
  result.fit = measure_speed(result.trace, discard);
  result.trace.fitted_speed = result.fit.slope;
  result.trace.fit_window = {result.fit.t_lo, result.fit.t_hi};
  result.trace.fit_r2 = result.fit.r2;
  result.final_state = std::move(state);
  return result;
}

}  // namespace kpp
