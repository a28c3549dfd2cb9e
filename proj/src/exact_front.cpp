#include "kpp/exact_front.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace kpp {

namespace {

constexpr double kExponentCap = 700.0;

}  // namespace

ExplicitFront::ExplicitFront(PeriodicMedium medium, CoordinateMap map, double xi0)
    : medium_(std::move(medium)), map_(std::move(map)), xi0_(xi0) {
  if (!medium_.tuned() || medium_.mode != Nonlinearity::Logistic) {
    throw std::invalid_argument(
        "the explicit front needs a tuned logistic medium with r = r0 + w and b = b0 a^{1/4}");
  }
  if (std::abs(map_.period() - medium_.period) > 1e-12 * medium_.period) {
    throw std::invalid_argument("coordinate map and medium have different periods");
  }
  r0_ = *medium_.r0;
  b0_ = *medium_.b0;
  kappa_ = std::sqrt(r0_ / 6.0);
  c_az_ = 5.0 * kappa_;
  period_T_ = map_.big_lambda() / c_az_;
}

double ExplicitFront::stationary_state(double x) const {
  return r0_ / b0_ * std::pow(medium_.a(x), -0.25);
}

double ExplicitFront::logistic_weight(double t, double x) const {
  const double e = kappa_ * (map_.h(x) - c_az_ * t - xi0_);
  if (e > kExponentCap) return 0.0;
  return 1.0 / (1.0 + std::exp(e));
}

double ExplicitFront::evaluate(double t, double x) const {
  const double s = logistic_weight(t, x);
  return stationary_state(x) * s * s;
}

double ExplicitFront::time_derivative(double t, double x) const {
  const double e = kappa_ * (map_.h(x) - c_az_ * t - xi0_);
  if (e > kExponentCap) return 0.0;
  const double s = 1.0 / (1.0 + std::exp(e));
  const double one_minus_s = 1.0 / (1.0 + std::exp(-e));
  return 2.0 * kappa_ * c_az_ * stationary_state(x) * s * s * one_minus_s;
}

double ExplicitFront::front_location(double t) const {
  return map_.inverse(c_az_ * t + xi0_);
}

ExplicitFront make_explicit_front(const PeriodicMedium& medium, double xi0, int n_quad) {
  return ExplicitFront(medium, build_coordinate_map(medium, n_quad), xi0);
}

double pulsating_identity_residual(const ExplicitFront& front, std::span<const double> t_samples,
                                   std::span<const double> x_samples) {
  const double T = front.period_T();
  const double L = front.medium().period;
  double worst = 0.0;
  for (double t : t_samples) {
    for (double x : x_samples) {
      worst = std::max(worst, std::abs(front.evaluate(t + T, x) - front.evaluate(t, x - L)));
    }
  }
  return worst;
}

double pde_residual(const ExplicitFront& front, double t, int nodes_per_period, int periods) {
  if (nodes_per_period < 64 || nodes_per_period % 2 != 0) {
    throw std::invalid_argument(
        fmt::format("pde residual needs an even grid of at least 64 nodes (got {})", nodes_per_period));
  }
  if (periods < 1) throw std::invalid_argument("pde residual needs at least one period");
  const auto& m = front.medium();
  const double L = m.period;
  const double dx = L / nodes_per_period;
  const int count = nodes_per_period * periods;
  const double x0 = front.front_location(t) - 0.5 * periods * L;

  std::vector<double> u(count);
  for (int j = 0; j < count; ++j) u[j] = front.evaluate(t, x0 + j * dx);

  double worst = 0.0;
  for (int j = 1; j + 1 < count; ++j) {
    const double x = x0 + j * dx;
    const double flux_right = m.a(x + 0.5 * dx) * (u[j + 1] - u[j]);
    const double flux_left = m.a(x - 0.5 * dx) * (u[j] - u[j - 1]);
    const double spatial = (flux_right - flux_left) / (dx * dx) + m.reaction(x, u[j]);
    worst = std::max(worst, std::abs(front.time_derivative(t, x) - spatial));
  }
  return worst;
}

double stationary_residual(const ExplicitFront& front, int n) {
  if (n < 32) throw std::invalid_argument("stationary residual needs n >= 32");
  const auto& m = front.medium();
  const double dx = m.period / n;
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = front.stationary_state(i * dx);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = i * dx;
    const double left = p[(i + n - 1) % n];
    const double right = p[(i + 1) % n];
    const double diffusion =
        (m.a(x + 0.5 * dx) * (right - p[i]) - m.a(x - 0.5 * dx) * (p[i] - left)) / (dx * dx);
    worst = std::max(worst, std::abs(diffusion + m.reaction(x, p[i])));
  }
  return worst;
}

double change_of_variables_gap(const PeriodicMedium& medium, const CoordinateMap& map,
                               const SmoothField& field, double t, double x_lo, double x_hi,
                               int nodes) {
  if (nodes < 4 || !(x_hi > x_lo)) {
    throw std::invalid_argument("change-of-variables check needs an interval and >= 4 nodes");
  }
  const double dx = (x_hi - x_lo) / nodes;
  std::vector<double> u(nodes + 1);
  for (int j = 0; j <= nodes; ++j) {
    const double x = x_lo + j * dx;
    u[j] = std::pow(medium.a(x), -0.25) * field.v(t, map.h(x));
  }

  const double dy = dx;
  double worst = 0.0;
  for (int j = 1; j < nodes; ++j) {
    const double x = x_lo + j * dx;
    const double weight = std::pow(medium.a(x), -0.25);
    const double r = medium.r(x);
    const double b = medium.mode == Nonlinearity::Logistic ? medium.b(x) : 0.0;
    const double y = map.h(x);
    const double v = field.v(t, y);
    const double v_t = field.v_t(t, y);

    const double diffusion = (medium.a(x + 0.5 * dx) * (u[j + 1] - u[j]) -
                              medium.a(x - 0.5 * dx) * (u[j] - u[j - 1])) /
                             (dx * dx);
    const double lhs = weight * v_t - diffusion - r * u[j] + b * u[j] * u[j];

    const double v_yy = (field.v(t, y + dy) - 2.0 * v + field.v(t, y - dy)) / (dy * dy);
    const double rhs =
        weight * (v_t - v_yy - (r - correction_w(medium, x)) * v + b * weight * v * v);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace kpp
