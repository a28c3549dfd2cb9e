#pragma once

#include <vector>

#include "kpp/media.hpp"

namespace kpp {

/**
 * The diffusive coordinate y = h(x) = int_0^x a^{-1/2}.
 *
 * h is tabulated on n_quad + 1 nodes over [0, L] by composite Simpson
 * quadrature (one panel per subinterval, O(n_quad^-4)) and interpolated by
 * cubic Hermite segments that use the exact slopes h' = a^{-1/2}. Outside
 * [0, L) the map extends by h(x + L) = h(x) + Lambda.
 */
class CoordinateMap {
 public:
  CoordinateMap(double period, std::vector<double> nodes_h, std::vector<double> slopes);

  double operator()(double x) const { return h(x); }
  double h(double x) const;
  /// h^{-1}(y); the Hermite segment is inverted by safeguarded Newton.
  double inverse(double y) const;

  double period() const { return period_; }
  /// Lambda = h(L).
  double big_lambda() const { return big_lambda_; }
  /// <a^{-1/2}> = Lambda / L.
  double mean_inv_sqrt_a() const { return big_lambda_ / period_; }
  int n_quad() const { return static_cast<int>(h_.size()) - 1; }
  const std::vector<double>& table() const { return h_; }

 private:
  double period_;
  double dx_;
  double big_lambda_;
  std::vector<double> h_;
  std::vector<double> slope_;

  double segment_value(std::size_t i, double t) const;
  double h_reduced(double x) const;  // x in [0, L]
};

/// Throws std::invalid_argument for n_quad < 64.
CoordinateMap build_coordinate_map(const PeriodicMedium& medium, int n_quad = 4096);

inline double invert_coordinate(const CoordinateMap& map, double y) { return map.inverse(y); }

}  // namespace kpp
