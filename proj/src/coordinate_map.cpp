#include "kpp/coordinate_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace kpp {

namespace {

// Cubic Hermite basis on [0, 1].
double hermite(double y0, double y1, double m0, double m1, double width, double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * width * m0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * width * m1;
}

double hermite_dt(double y0, double y1, double m0, double m1, double width, double t) {
  const double t2 = t * t;
  return (6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * width * m0 + (-6 * t2 + 6 * t) * y1 +
         (3 * t2 - 2 * t) * width * m1;
}

}  // namespace

CoordinateMap::CoordinateMap(double period, std::vector<double> nodes_h, std::vector<double> slopes)
    : period_(period), h_(std::move(nodes_h)), slope_(std::move(slopes)) {
  if (h_.size() < 2 || h_.size() != slope_.size()) {
    throw std::invalid_argument("coordinate table needs matching node values and slopes");
  }
  dx_ = period_ / static_cast<double>(h_.size() - 1);
  big_lambda_ = h_.back();
  for (std::size_t i = 0; i + 1 < h_.size(); ++i) {
    const double secant = (h_[i + 1] - h_[i]) / dx_;
    if (!(secant > 0.0)) throw std::invalid_argument("diffusive coordinate must be increasing");
    // Fritsch-Carlson sufficient condition for a monotone Hermite segment.
    const double alpha = slope_[i] / secant;
    const double beta = slope_[i + 1] / secant;
    if (alpha * alpha + beta * beta > 9.0) {
      throw std::invalid_argument(
          "diffusive coordinate table is not monotone between nodes; raise n_quad");
    }
  }
}

double CoordinateMap::segment_value(std::size_t i, double t) const {
  return hermite(h_[i], h_[i + 1], slope_[i], slope_[i + 1], dx_, t);
}

double CoordinateMap::h_reduced(double x) const {
  const std::size_t segments = h_.size() - 1;
  const double s = std::clamp(x / dx_, 0.0, static_cast<double>(segments));
  auto i = std::min(static_cast<std::size_t>(s), segments - 1);
  return segment_value(i, s - static_cast<double>(i));
}

double CoordinateMap::h(double x) const {
  const double k = std::floor(x / period_);
  return k * big_lambda_ + h_reduced(x - k * period_);
}

double CoordinateMap::inverse(double y) const {
  const double k = std::floor(y / big_lambda_);
  const double target = y - k * big_lambda_;

  auto it = std::upper_bound(h_.begin(), h_.end(), target);
  std::size_t i = (it == h_.begin()) ? 0 : static_cast<std::size_t>(it - h_.begin()) - 1;
  i = std::min(i, h_.size() - 2);

  const double y0 = h_[i];
  const double y1 = h_[i + 1];
  double lo = 0.0;
  double hi = 1.0;
  double t = std::clamp((target - y0) / (y1 - y0), 0.0, 1.0);
  for (int iter = 0; iter < 60; ++iter) {
    const double g = segment_value(i, t) - target;
    if (g > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    const double dg = hermite_dt(y0, y1, slope_[i], slope_[i + 1], dx_, t);
    double next = t - g / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-16) {
      t = next;
      break;
    }
    t = next;
  }
  return k * period_ + (static_cast<double>(i) + t) * dx_;
}

CoordinateMap build_coordinate_map(const PeriodicMedium& medium, int n_quad) {
  if (n_quad < 64) {
    throw std::invalid_argument(fmt::format("n_quad must be at least 64 (got {})", n_quad));
  }
  const double L = medium.period;
  const double dx = L / n_quad;
  auto integrand = [&](double x) { return 1.0 / std::sqrt(medium.a(x)); };

  std::vector<double> h(n_quad + 1);
  std::vector<double> slope(n_quad + 1);
  h[0] = 0.0;
  slope[0] = integrand(0.0);
  for (int i = 0; i < n_quad; ++i) {
    const double x0 = dx * i;
    const double x1 = (i + 1 == n_quad) ? L : dx * (i + 1);
    slope[i + 1] = integrand(x1);
    const double mid = integrand(0.5 * (x0 + x1));
    h[i + 1] = h[i] + (x1 - x0) / 6.0 * (slope[i] + 4.0 * mid + slope[i + 1]);
  }
  return CoordinateMap(L, std::move(h), std::move(slope));
}

}  // namespace kpp
