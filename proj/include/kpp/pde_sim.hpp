#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "kpp/exact_front.hpp"
#include "kpp/media.hpp"
#include "kpp/tridiagonal.hpp"

namespace kpp {

enum class Boundary { NeumannZeroFlux };

/// Cell-centered grid on [x_min, x_max]; cell i has center x_min + (i + 1/2) dx.
struct SimGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_cells = 0;
  Boundary boundary = Boundary::NeumannZeroFlux;

  double dx() const { return (x_max - x_min) / n_cells; }
  double center(int i) const { return x_min + (i + 0.5) * dx(); }
};

/// Requires x_max - x_min to be a whole number of periods and dx <= L / 64.
void validate_grid(const SimGrid& grid, const PeriodicMedium& medium);

struct SimState {
  double t = 0.0;
  std::vector<double> u;
};

/// height * cos^2(pi (x - center) / width) on |x - center| < width / 2.
struct CompactBump {
  double center = 0.0;
  double width = 1.0;
  double height = 1.0;
};

struct ExactFrontSnapshot {
  std::shared_ptr<const ExplicitFront> front;
  double t0 = 0.0;
};

using InitialCondition = std::variant<CompactBump, ExactFrontSnapshot>;

/// Throws std::invalid_argument for identically zero data or a bump that does
/// not fit in the domain.
SimState initialize(const SimGrid& grid, const InitialCondition& init);

enum class Integrator {
  Imex,      // implicit diffusion, explicit reaction
  Explicit,  // forward Euler
};

/**
 * One-step map for d_t u = d_x(a d_x u) + f(x,u) on a SimGrid.
 *
 * Diffusion uses the conservative half-node flux stencil with zero flux at
 * both ends. The IMEX step solves (I - dt D) u+ = u + dt f(u) with a
 * prefactored tridiagonal matrix. Construction checks the time step:
 * dt <= 0.1 / max|d_u f| always, and dt <= 0.4 dx^2 / max a for Explicit.
 */
class KppStepper {
 public:
  KppStepper(const PeriodicMedium& medium, const SimGrid& grid, double dt,
             Integrator integrator = Integrator::Imex);

  /// Advances u in place by one step; throws NegativityBreach.
  void advance(std::vector<double>& u) const;
  SimState step(const SimState& state) const;

  double dt() const { return dt_; }
  double u_cap() const { return u_cap_; }
  double reaction_rate_bound() const { return rate_bound_; }
  Integrator integrator() const { return integrator_; }

 private:
  PeriodicMedium medium_;
  SimGrid grid_;
  double dt_;
  Integrator integrator_;
  double u_cap_ = 0.0;
  double rate_bound_ = 0.0;
  std::vector<double> x_;
  std::vector<double> face_;  // a at faces, face_[i] between cells i-1 and i; 0 at the ends
  std::vector<double> r_;
  std::vector<double> b_;
  TridiagonalFactor implicit_;
  mutable std::vector<double> work_;
};

/// Largest dt the KppStepper constructor accepts for this medium, grid and integrator.
double max_stable_dt(const PeriodicMedium& medium, const SimGrid& grid,
                     Integrator integrator = Integrator::Imex);

SimState step(const SimState& state, const PeriodicMedium& medium, const SimGrid& grid,
              double dt, Integrator integrator = Integrator::Imex);

struct FrontTrace {
  std::vector<std::pair<double, double>> samples;  // (t, x_front)
  double level = 0.0;
  double fitted_speed = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  double fit_r2 = 0.0;
};

struct SpeedFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  int samples = 0;
  bool monotone = false;  // x_front nondecreasing over the window
  bool reliable = false;  // r2 >= 0.999 and monotone
};

/// Least-squares slope of x_front against t after dropping the first
/// discard_fraction of samples. Throws InsufficientSamples below 20 samples.
SpeedFit measure_speed(const FrontTrace& trace, double discard_fraction);

/// Largest x with u >= level, interpolated linearly between cell centers;
/// x_max when the last cell is at or above the level.
std::optional<double> front_position(const SimState& state, const SimGrid& grid, double level);

struct RunOptions {
  double t_end = 0.0;
  double dt = 0.0;
  int record_every = 10;
  std::optional<double> theta;  // default 0.5 min p
  Integrator integrator = Integrator::Imex;
  double margin_periods = 10.0;
  std::optional<double> discard_fraction;  // default 0.5 for bumps, 0.1 for snapshots
  std::function<void(const SimState&)> observer;  // called at every record
};

struct RunResult {
  SimState final_state;
  FrontTrace trace;
  SpeedFit fit;
};

/// Integrates to t_end, tracking the rightmost crossing of the level theta.
/// Throws FrontReachedBoundary when the front comes within margin_periods
/// periods of x_max.
RunResult run(const PeriodicMedium& medium, const SimGrid& grid, const InitialCondition& init,
              const RunOptions& options);

/// Positive periodic stationary state on n nodes x_i = i L / n, by pseudo-time
/// stepping down from a supersolution.
std::vector<double> periodic_stationary_state(const PeriodicMedium& medium, int n);

/// min_x p(x): closed form for tuned media, numerical otherwise.
double min_stationary_state(const PeriodicMedium& medium);

}  // namespace kpp
