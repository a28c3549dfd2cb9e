#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kpp/coordinate_map.hpp"
#include "kpp/media.hpp"

namespace kpp {

/**
 * The explicit pulsating front of a tuned medium (r = r0 + w, b = b0 a^{1/4}):
 *
 *   u(t,x) = p(x) (1 + exp(kappa [h(x) - c_az t - xi0]))^{-2},
 *   p(x)   = (r0 / b0) a(x)^{-1/4},  kappa = sqrt(r0/6),  c_az = 5 kappa.
 *
 * u(t + T, x) = u(t, x - L) with T = Lambda / c_az, so the front moves right
 * with speed L / T = c_az / <a^{-1/2}>. At fixed x, u increases from 0
 * (t -> -inf) to p(x) (t -> +inf).
 */
class ExplicitFront {
 public:
  /// Throws std::invalid_argument unless the medium is tuned.
  ExplicitFront(PeriodicMedium medium, CoordinateMap map, double xi0 = 0.0);

  const PeriodicMedium& medium() const { return medium_; }
  const CoordinateMap& map() const { return map_; }
  double xi0() const { return xi0_; }
  double kappa() const { return kappa_; }
  double c_az() const { return c_az_; }
  /// T = Lambda / c_az.
  double period_T() const { return period_T_; }
  /// L / T.
  double speed() const { return medium_.period / period_T_; }

  double stationary_state(double x) const;
  double evaluate(double t, double x) const;
  /// Closed-form d_t u.
  double time_derivative(double t, double x) const;
  /// Position where h(x) = c_az t + xi0, i.e. where u = p / 4.
  double front_location(double t) const;

 private:
  PeriodicMedium medium_;
  CoordinateMap map_;
  double xi0_;
  double r0_;
  double b0_;
  double kappa_;
  double c_az_;
  double period_T_;

  double logistic_weight(double t, double x) const;  // 1 / (1 + e^E)
};

/// Builds the front with a coordinate map of n_quad subintervals.
ExplicitFront make_explicit_front(const PeriodicMedium& medium, double xi0 = 0.0,
                                  int n_quad = 4096);

/// sup over the samples of |u(t + T, x) - u(t, x - L)|.
double pulsating_identity_residual(const ExplicitFront& front, std::span<const double> t_samples,
                                   std::span<const double> x_samples);

/**
 * sup over interior nodes of |d_t u - (d_x(a d_x u) + r u - b u^2)|, with d_t u
 * exact and the spatial operator discretized by the conservative half-node
 * stencil. The grid has `nodes_per_period` nodes per period and spans
 * `periods` periods centered on front_location(t).
 */
double pde_residual(const ExplicitFront& front, double t, int nodes_per_period, int periods = 8);

/// Discrete stationarity residual of p on the periodic grid with n nodes.
double stationary_residual(const ExplicitFront& front, int n);

/// A smooth test field v(t, y) with its time derivative.
struct SmoothField {
  std::function<double(double, double)> v;
  std::function<double(double, double)> v_t;
};

/**
 * Two-sided check of the change of variables u = a^{-1/4} v(t, h(x)):
 *   LHS = d_t u - d_x(a d_x u) - r u + b u^2               (stencil in x)
 *   RHS = a^{-1/4}(d_t v - d_yy v - (r - w) v + b a^{-1/4} v^2)  (stencil in y)
 * on the nodes x_lo + j dx of [x_lo, x_hi]. Returns sup |LHS - RHS|, which is
 * O(dx^2). Holds for any r and b.
 */
double change_of_variables_gap(const PeriodicMedium& medium, const CoordinateMap& map,
                               const SmoothField& field, double t, double x_lo, double x_hi,
                               int nodes);

}  // namespace kpp
