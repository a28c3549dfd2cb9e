#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "kpp/errors.hpp"
#include "kpp/exact_front.hpp"
#include "kpp/media.hpp"
#include "kpp/pde_sim.hpp"

using namespace kpp;

namespace {

SimGrid grid_of(double lo, double hi, double dx) {
  return SimGrid{lo, hi, static_cast<int>(std::lround((hi - lo) / dx))};
}

double mass(const std::vector<double>& u, double dx) {
  return std::accumulate(u.begin(), u.end(), 0.0) * dx;
}

}  // namespace

TEST_CASE("initial conditions") {
  const auto grid = grid_of(-10.0, 10.0, 1.0 / 64);
  const auto bump = initialize(grid, CompactBump{0.0, 2.0, 0.5});
  CHECK(bump.u.size() == static_cast<std::size_t>(grid.n_cells));
  CHECK(*std::max_element(bump.u.begin(), bump.u.end()) == doctest::Approx(0.5).epsilon(1e-3));
  for (int i = 0; i < grid.n_cells; ++i) {
    if (std::abs(grid.center(i)) >= 1.0) CHECK(bump.u[i] == 0.0);
  }
  CHECK_THROWS_AS(initialize(grid, CompactBump{0.0, 2.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(initialize(grid, CompactBump{9.5, 2.0, 0.5}), std::invalid_argument);

  auto front = std::make_shared<const ExplicitFront>(
      make_explicit_front(make_cosine_medium(1.0, 0.5, 1.0, 1.0, true)));
  const auto snap = initialize(grid, ExactFrontSnapshot{front, 1.5});
  CHECK(snap.t == 1.5);
  for (int i = 0; i < grid.n_cells; i += 97) {
    CHECK(snap.u[i] == front->evaluate(1.5, grid.center(i)));
  }
}

TEST_CASE("grid validation") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, true);
  CHECK_NOTHROW(validate_grid(grid_of(0.0, 10.0, 1.0 / 64), m));
  CHECK_THROWS_AS(validate_grid(SimGrid{0.0, 10.5, 672}, m), std::invalid_argument);
  CHECK_THROWS_AS(validate_grid(grid_of(0.0, 10.0, 1.0 / 32), m), std::invalid_argument);
}

TEST_CASE("zero stays zero and the stationary state is nearly stationary") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, true);
  const auto grid = grid_of(0.0, 4.0, 1.0 / 128);
  const KppStepper stepper(m, grid, 1e-3);
  std::vector<double> zero(grid.n_cells, 0.0);
  for (int k = 0; k < 10; ++k) stepper.advance(zero);
  for (double v : zero) CHECK(v == 0.0);

  // p sampled at cell centers is a stationary state of the scheme up to O(dx^2).
  const auto front = make_explicit_front(m);
  std::vector<double> p(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) p[i] = front.stationary_state(grid.center(i));
  auto u = p;
  for (int k = 0; k < 1000; ++k) stepper.advance(u);
  double drift = 0.0;
  for (int i = 0; i < grid.n_cells; ++i) drift = std::max(drift, std::abs(u[i] - p[i]) / p[i]);
  CHECK(drift < 1e-3);
}

TEST_CASE("small data grow at the principal rate") {
  // Tuned medium: the linearization has k_0 = r0 with eigenfunction a^{-1/4}.
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, true);
  const auto grid = grid_of(0.0, 1.0, 1.0 / 256);
  const auto front = make_explicit_front(m);
  std::vector<double> u(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) u[i] = 1e-6 * front.stationary_state(grid.center(i));
  const double dt = 1e-4;
  const KppStepper stepper(m, grid, dt);
  const double m0 = mass(u, grid.dx());
  for (int k = 0; k < 10000; ++k) stepper.advance(u);
  CHECK(std::log(mass(u, grid.dx()) / m0) == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("time step limits") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  const auto grid = grid_of(0.0, 4.0, 1.0 / 64);
  const double imex = max_stable_dt(m, grid);
  const double expl = max_stable_dt(m, grid, Integrator::Explicit);
  CHECK(expl <= imex);
  CHECK(expl == doctest::Approx(0.4 * grid.dx() * grid.dx() / 2.25).epsilon(1e-2));
  CHECK_NOTHROW(KppStepper(m, grid, imex));
  CHECK_THROWS_AS(KppStepper(m, grid, 1.01 * imex), StabilityViolation);
  CHECK_NOTHROW(KppStepper(m, grid, expl, Integrator::Explicit));
  CHECK_THROWS_AS(KppStepper(m, grid, 2.0 * expl, Integrator::Explicit), StabilityViolation);
  CHECK_THROWS_AS(KppStepper(m, grid, -1.0), std::invalid_argument);
}

TEST_CASE("comparison principle and positivity") {
  const auto m = make_cosine_medium(1.0, 0.7, 1.0, 1.0, true);
  const auto grid = grid_of(-8.0, 8.0, 1.0 / 64);
  const KppStepper stepper(m, grid, 0.9 * max_stable_dt(m, grid));
  auto lo = initialize(grid, CompactBump{0.0, 2.0, 0.3}).u;
  auto hi = initialize(grid, CompactBump{0.0, 3.0, 0.6}).u;
  for (int k = 0; k < 400; ++k) {
    stepper.advance(lo);
    stepper.advance(hi);
  }
  for (int i = 0; i < grid.n_cells; ++i) {
    CHECK(lo[i] >= 0.0);
    CHECK(lo[i] <= hi[i] + 1e-14);
  }
}

TEST_CASE("explicit and implicit integrators agree") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, true);
  const auto grid = grid_of(-4.0, 4.0, 1.0 / 64);
  const double dt = max_stable_dt(m, grid, Integrator::Explicit);
  const KppStepper imex(m, grid, dt);
  const KppStepper expl(m, grid, dt, Integrator::Explicit);
  auto a = initialize(grid, CompactBump{0.0, 2.0, 0.5}).u;
  auto b = a;
  const int steps = static_cast<int>(std::ceil(0.5 / dt));
  for (int k = 0; k < steps; ++k) {
    imex.advance(a);
    expl.advance(b);
  }
  double diff = 0.0;
  for (int i = 0; i < grid.n_cells; ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  CHECK(diff < 1e-3);
}

TEST_CASE("front position and speed fit") {
  SimGrid grid{0.0, 4.0, 4};
  SimState s{0.0, {1.0, 0.8, 0.2, 0.0}};
  // Centers 0.5, 1.5, 2.5, 3.5: crossing of 0.5 between 1.5 and 2.5.
  CHECK(*front_position(s, grid, 0.5) == doctest::Approx(2.0));
  CHECK_FALSE(front_position(s, grid, 2.0).has_value());
  s.u = {0.0, 0.0, 0.0, 1.0};
  CHECK(*front_position(s, grid, 0.5) == grid.x_max);

  FrontTrace trace;
  for (int i = 0; i < 40; ++i) trace.samples.emplace_back(i * 0.5, 3.0 + 1.5 * i * 0.5);
  const auto fit = measure_speed(trace, 0.5);
  CHECK(fit.slope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(fit.samples == 20);
  CHECK(fit.reliable);

  trace.samples[35].second -= 5.0;
  const auto bad = measure_speed(trace, 0.5);
  CHECK_FALSE(bad.monotone);
  CHECK_FALSE(bad.reliable);

  trace.samples.resize(30);
  CHECK_THROWS_AS(measure_speed(trace, 0.5), InsufficientSamples);
}

TEST_CASE("front reaching the boundary is reported") {
  const auto m = make_cosine_medium(1.0, 0.0, 1.0, 1.0, true);
  const auto grid = grid_of(-10.0, 20.0, 1.0 / 64);
  RunOptions options;
  options.t_end = 20.0;
  options.dt = max_stable_dt(m, grid);
  options.margin_periods = 5.0;
  CHECK_THROWS_AS(run(m, grid, CompactBump{0.0, 2.0, 0.5}, options), FrontReachedBoundary);
}

TEST_CASE("periodic stationary states") {
  const auto untuned = make_cosine_medium(1.0, 0.5, 2.0, 0.5, false);
  for (double v : periodic_stationary_state(untuned, 128)) CHECK(v == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(min_stationary_state(untuned) == doctest::Approx(4.0).epsilon(1e-8));

  const auto tuned = make_cosine_medium(1.0, 0.5, 1.0, 1.0, true);
  const auto front = make_explicit_front(tuned);
  const auto p = periodic_stationary_state(tuned, 256);
  for (int i = 0; i < 256; i += 16) {
    CHECK(p[i] == doctest::Approx(front.stationary_state(i / 256.0)).epsilon(2e-3));
  }
  CHECK(min_stationary_state(tuned) == doctest::Approx(std::pow(2.25, -0.25)).epsilon(1e-12));
}

TEST_CASE("homogeneous medium spreads at speed 2") {
  const auto m = make_cosine_medium(1.0, 0.0, 1.0, 1.0, false);
  const auto grid = grid_of(-50.0, 350.0, 1.0 / 64);
  RunOptions options;
  options.t_end = 120.0;
  options.dt = 0.9 * max_stable_dt(m, grid);
  options.record_every = 20;
  const auto result = run(m, grid, CompactBump{0.0, 2.0, 0.5}, options);
  CHECK(result.fit.reliable);
  // The log correction slows the front by 3 / (2 lambda* t), about 1% here.
  CHECK(result.fit.slope == doctest::Approx(2.0).epsilon(0.05));
  CHECK(result.fit.slope < 2.0);
}

TEST_CASE("the exact front is reproduced by the simulation") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, true);
  auto front = std::make_shared<const ExplicitFront>(make_explicit_front(m));
  const auto grid = grid_of(-20.0, 60.0, 1.0 / 64);
  RunOptions options;
  options.t_end = 15.0;
  auto max_error = [&](double dt) {
    options.dt = dt;
    const auto result = run(m, grid, ExactFrontSnapshot{front, 0.0}, options);
    CHECK(result.fit.slope == doctest::Approx(front->speed()).epsilon(0.02));
    double err = 0.0;
    for (int i = 0; i < grid.n_cells; ++i) {
      err = std::max(err, std::abs(result.final_state.u[i] -
                                   front->evaluate(result.final_state.t, grid.center(i))));
    }
    return err;
  };
  // The splitting error is first order in dt and dominates at this dx.
  const double dt = 0.5 * max_stable_dt(m, grid);
  const double e1 = max_error(dt);
  const double e2 = max_error(dt / 2);
  CHECK(e1 < 5e-2);
  CHECK(e1 / e2 > 1.6);
}
