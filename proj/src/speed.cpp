#include "kpp/speed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "kpp/coordinate_map.hpp"
#include "kpp/errors.hpp"
#include "kpp/spectral.hpp"

namespace kpp {

namespace {

constexpr double kGolden = 0.38196601125010515;  // (3 - sqrt 5) / 2

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(fmt::format("{} must be positive (got {})", name, value));
  }
}

// k_lambda / lambda with the grid refined for the Peclet condition.
class SpeedObjective {
 public:
  SpeedObjective(const PeriodicMedium& medium, int n) : medium_(medium), n_(n) {}

  double operator()(double lambda) {
    ++evaluations_;
    const int n = grid_for(lambda);
    return principal_eigenpair(assemble(medium_, lambda, n)).k / lambda;
  }

  int grid_for(double lambda) const {
    const int needed = min_nodes_for_peclet(medium_, lambda, n_);
    int n = n_;
    while (n < needed) n *= 2;
    return n;
  }

  int evaluations() const { return evaluations_; }

 private:
  const PeriodicMedium& medium_;
  int n_;
  int evaluations_ = 0;
};

}  // namespace

SpeedResult freidlin_gartner_speed(const PeriodicMedium& medium, int n,
                                   const SpeedOptions& options) {
  SpeedResult result;
  result.k0 = k_lambda(medium, 0.0, n);
  if (!(result.k0 > 0.0)) {
    throw HypothesisViolated(fmt::format(
        "principal eigenvalue k_0 = {:.6g} is not positive; the medium has no positive "
        "spreading speed",
        result.k0));
  }

  double hint = options.lambda_max_hint;
  if (hint <= 0.0) {
    double r_max = 0.0;
    for (int i = 0; i < 1024; ++i) r_max = std::max(r_max, medium.r(medium.period * i / 1024.0));
    hint = 3.0 * std::sqrt(r_max);
  }

  SpeedObjective g(medium, n);
  double lo = options.lambda_min;
  double hi = std::max(hint, 4.0 * lo);
  double mid = lo + kGolden * (hi - lo);
  const double g_lo = g(lo);
  double g_mid = g(mid);
  double g_hi = g(hi);

  int guard = 0;
  while (g_hi <= g_mid) {
    if (++guard > 60 || !std::isfinite(g_hi)) {
      throw BracketFailure(fmt::format(
          "k_lambda / lambda is still decreasing at lambda = {:.6g}; no finite minimizer found", hi));
    }
    lo = mid;
    mid = hi;
    g_mid = g_hi;
    hi *= 2.0;
    g_hi = g(hi);
  }
  guard = 0;
  while (g_mid >= g_lo && lo == options.lambda_min) {
    if (++guard > 60) {
      throw BracketFailure("k_lambda / lambda has no interior minimum above lambda_min");
    }
    hi = mid;
    g_hi = g_mid;
    mid = lo + kGolden * (hi - lo);
    g_mid = g(mid);
  }

  // Golden-section search on [lo, hi] with interior points x1 < x2.
  double x1 = lo + kGolden * (hi - lo);
  double x2 = hi - kGolden * (hi - lo);
  double g1 = g(x1);
  double g2 = g(x2);
  while (hi - lo > options.lambda_rel_tol * 0.5 * (hi + lo)) {
    if (g1 <= g2) {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = lo + kGolden * (hi - lo);
      g1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = hi - kGolden * (hi - lo);
      g2 = g(x2);
    }
  }
  if (g1 <= g2) {
    result.lambda_star = x1;
    result.c_star = g1;
  } else {
    result.lambda_star = x2;
    result.c_star = g2;
  }
  result.bracket = {lo, hi};
  result.n = g.grid_for(result.lambda_star);

  const double below = g(0.9 * result.lambda_star);
  const double above = g(1.1 * result.lambda_star);
  result.locally_optimal = result.c_star <= below + 1e-8 && result.c_star <= above + 1e-8;
  result.evaluations = g.evaluations();
  return result;
}

double closed_form_speed(double r0, double mean_inv_sqrt_a) {
  require_positive(r0, "r0");
  require_positive(mean_inv_sqrt_a, "<a^{-1/2}>");
  return 2.0 * std::sqrt(r0) / mean_inv_sqrt_a;
}

double az_front_speed(double r0, double mean_inv_sqrt_a) {
  require_positive(r0, "r0");
  require_positive(mean_inv_sqrt_a, "<a^{-1/2}>");
  return 5.0 * std::sqrt(r0 / 6.0) / mean_inv_sqrt_a;
}

SandwichBounds sandwich_bounds(const PeriodicMedium& medium, int n_sample) {
  if (n_sample < 2) throw std::invalid_argument("sandwich bounds need at least 2 samples");
  SandwichBounds out;
  out.mean_inv_sqrt_a = build_coordinate_map(medium, 4096).mean_inv_sqrt_a();
  out.min_r_minus_w = std::numeric_limits<double>::infinity();
  out.max_r_minus_w = -out.min_r_minus_w;
  for (int i = 0; i <= n_sample; ++i) {
    const double x = medium.period * i / n_sample;
    const double q = medium.r(x) - correction_w(medium, x);
    out.min_r_minus_w = std::min(out.min_r_minus_w, q);
    out.max_r_minus_w = std::max(out.max_r_minus_w, q);
  }
  if (out.min_r_minus_w > 0.0) {
    out.lower = closed_form_speed(out.min_r_minus_w, out.mean_inv_sqrt_a);
  } else {
    out.lower = 0.0;
    out.lower_degenerate = true;
  }
  out.upper = out.max_r_minus_w > 0.0 ? closed_form_speed(out.max_r_minus_w, out.mean_inv_sqrt_a)
                                      : 0.0;
  return out;
}

LargePeriodSweep large_period_sweep(const PeriodicMedium& base, const std::vector<double>& L_list,
                                    int nodes_per_period) {
  if (!base.constant_growth || !(*base.constant_growth > 0.0)) {
    throw std::invalid_argument("large-period sweep needs a base medium with constant growth r0 > 0");
  }
  if (L_list.empty()) throw std::invalid_argument("large-period sweep needs at least one period");
  const double r0 = *base.constant_growth;

  LargePeriodSweep sweep;
  sweep.c_limit = closed_form_speed(r0, build_coordinate_map(base, 4096).mean_inv_sqrt_a());

  std::vector<double> periods = L_list;
  std::sort(periods.begin(), periods.end());
  for (double L : periods) {
    const PeriodicMedium medium = rescale_period(base, L);
    int n = static_cast<int>(std::lround(nodes_per_period * L / base.period));
    n = std::max(32, n + (n % 2));
    const SpeedResult s = freidlin_gartner_speed(medium, n);
    LargePeriodRow row;
    row.L = L;
    row.n = s.n;
    row.c_star = s.c_star;
    row.lambda_star = s.lambda_star;
    row.deviation = s.c_star - sweep.c_limit;
    row.mean_inv_sqrt_a = build_coordinate_map(medium, 4096).mean_inv_sqrt_a();
    if (std::abs(row.deviation) < 1e-6 * sweep.c_limit) {
      sweep.warnings.push_back(fmt::format(
          "|c*(L) - c_inf| = {:.3g} at L = {} is below eigen-solve accuracy; the rate fit is "
          "unreliable",
          std::abs(row.deviation), L));
    }
    sweep.rows.push_back(row);
  }

  // Least squares over the three largest periods.
  const std::size_t first = periods.size() > 3 ? periods.size() - 3 : 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = first; i < sweep.rows.size(); ++i) {
    const double dev = std::abs(sweep.rows[i].deviation);
    if (!(dev > 0.0)) continue;
    const double lx = std::log(sweep.rows[i].L);
    const double ly = std::log(dev);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count >= 2) {
    const double denom = count * sxx - sx * sx;
    sweep.fitted_slope = (count * sxy - sx * sy) / denom;
    sweep.fit_intercept = (sy - sweep.fitted_slope * sx) / count;
  } else {
    sweep.fitted_slope = std::numeric_limits<double>::quiet_NaN();
    sweep.fit_intercept = std::numeric_limits<double>::quiet_NaN();
    sweep.warnings.push_back("fewer than two nonzero deviations; no rate fitted");
  }
  return sweep;
}

}  // namespace kpp
