#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kpp/media.hpp"

namespace kpp {

struct SpeedResult {
  double c_star = 0.0;
  double lambda_star = 0.0;
  int n = 0;  // grid size used at lambda_star
  std::pair<double, double> bracket;
  int evaluations = 0;
  double k0 = 0.0;
  /// k(l*)/l* <= k(l)/l + 1e-8 at l = 0.9 l* and 1.1 l*.
  bool locally_optimal = false;
};

struct SpeedOptions {
  double lambda_max_hint = 0.0;  // <= 0 selects 3 sqrt(max r)
  double lambda_rel_tol = 1e-8;
  double lambda_min = 1e-3;
};

/**
 * c* = inf_{lambda > 0} k_lambda / lambda.
 *
 * Expands the bracket [lambda_min, hint] by doubling its upper end until
 * k/lambda turns upward, then runs golden-section search. Each evaluation uses
 * the requested n, doubled as often as needed to keep the cell Peclet
 * condition. Throws HypothesisViolated if k_0 <= 0 and BracketFailure if no
 * upturn is found.
 */
SpeedResult freidlin_gartner_speed(const PeriodicMedium& medium, int n,
                                   const SpeedOptions& options = {});

/// 2 sqrt(r0) / <a^{-1/2}>.
double closed_form_speed(double r0, double mean_inv_sqrt_a);

/// Speed of the explicit pulsating front, 5 sqrt(r0/6) / <a^{-1/2}>.
double az_front_speed(double r0, double mean_inv_sqrt_a);

struct SandwichBounds {
  double lower = 0.0;
  double upper = 0.0;
  double min_r_minus_w = 0.0;
  double max_r_minus_w = 0.0;
  double mean_inv_sqrt_a = 0.0;
  /// min(r - w) <= 0: the lower bound is reported as 0.
  bool lower_degenerate = false;
};

/// 2 sqrt(min(r - w)) / <a^{-1/2}> <= c* <= 2 sqrt(max(r - w)) / <a^{-1/2}>,
/// with the extrema taken over n_sample uniform points of [0, L].
SandwichBounds sandwich_bounds(const PeriodicMedium& medium, int n_sample = 4096);

struct LargePeriodRow {
  double L = 0.0;
  int n = 0;
  double c_star = 0.0;
  double lambda_star = 0.0;
  double deviation = 0.0;  // c*(L) - c_inf
  double mean_inv_sqrt_a = 0.0;
};

struct LargePeriodSweep {
  std::vector<LargePeriodRow> rows;
  double c_limit = 0.0;
  double fitted_slope = 0.0;  // of log|c*(L) - c_inf| against log L, largest three L
  double fit_intercept = 0.0;
  std::vector<std::string> warnings;
};

/**
 * Rescales a medium with constant growth to each period in L_list and
 * computes c*(L). `nodes_per_period` is the grid density of the base period,
 * so the grid at period L has nodes_per_period * L / base_period nodes.
 */
LargePeriodSweep large_period_sweep(const PeriodicMedium& base, const std::vector<double>& L_list,
                                    int nodes_per_period);

}  // namespace kpp
