#pragma once

#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace kpp {

using ScalarFn = std::function<double(double)>;
using ReactionFn = std::function<double(double, double)>;

enum class Nonlinearity {
  Logistic,    // f(x,u) = r(x) u - b(x) u^2
  GeneralKpp,  // f supplied as a callable with d_u f(x,0) = r(x)
};

/**
 * An L-periodic medium for d_t u = d_x(a d_x u) + f(x,u).
 *
 * Holds the diffusion a(x) together with a'(x) and a''(x), the linear growth
 * rate r(x) = d_u f(x,0), the logistic saturation b(x), and, for media built
 * with r = r0 + w and b = b0 a^{1/4}, the constants r0 and b0.
 *
 * Instances are immutable after construction and safe to share across
 * threads; all callables are pure.
 */
struct PeriodicMedium {
  double period = 1.0;
  ScalarFn a;
  ScalarFn da;
  ScalarFn d2a;
  ScalarFn r;
  ScalarFn b;
  Nonlinearity mode = Nonlinearity::Logistic;
  ReactionFn f;  // GeneralKpp only

  std::optional<double> r0;  // set together with b0 for tuned media
  std::optional<double> b0;
  std::optional<double> constant_growth;  // set when r(x) is identically constant

  std::string label;

  bool tuned() const { return r0.has_value() && b0.has_value(); }

  double reaction(double x, double u) const;
  /// d_u f(x,u).
  double reaction_du(double x, double u) const;
};

/// w(x) = 1/4 (a'' - a'^2 / (4a)) = 1/3 a^{1/4} (a^{3/4})''.
double correction_w(const PeriodicMedium& medium, double x);

/// a(x) = (1 + eps cos(2 pi x / L))^2. Tuned media take r = r0 + w and
/// b = b0 a^{1/4}; otherwise r = r0 and b = b0 are constant.
PeriodicMedium make_cosine_medium(double L, double eps, double r0, double b0, bool tuned);

/// Truncated real Fourier series on a period L:
/// mean + sum_k cos_k cos(2 pi k x / L) + sin_k sin(2 pi k x / L).
struct FourierSeries {
  double period = 1.0;
  double mean = 0.0;
  std::vector<double> cos_coef;
  std::vector<double> sin_coef;

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  double min_sampled(int samples) const;
  double max_sampled(int samples) const;
};

/// Logistic medium with Fourier-series a and r and constant saturation b0.
PeriodicMedium make_fourier_medium(const FourierSeries& a, const FourierSeries& r, double b0);

/**
 * Random smooth logistic medium on period L: a and r are Fourier series with
 * `modes` harmonics and decaying coefficients, a >= 0.6, and r shifted so that
 * min (r - w) >= 0.2. Deterministic for a given generator state.
 */
PeriodicMedium make_random_fourier_medium(std::mt19937_64& rng, double L, int modes = 3);

/// Periodic C^2 cubic spline through equally spaced samples on [0, L).
class PeriodicSpline {
 public:
  PeriodicSpline(double period, std::vector<double> values);

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;

 private:
  double period_;
  double h_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots

  std::size_t locate(double x, double& t) const;
};

/// Medium from tabulated diffusion samples a(x_i), x_i = i L / N. The samples
/// must be equally spaced over one period with x_0 = 0.
PeriodicMedium make_table_medium(double L, std::span<const double> x, std::span<const double> a,
                                 double r0, double b0, bool tuned);

/// User-supplied logistic medium. Missing derivative callables are replaced by
/// centered finite differences with step 1e-5 L.
PeriodicMedium make_custom_medium(double L, ScalarFn a, ScalarFn r, ScalarFn b,
                                  ScalarFn da = {}, ScalarFn d2a = {});

/// General KPP nonlinearity. Logs a warning to std::clog when sampled
/// f(x,u)/u fails to be nonincreasing in u.
PeriodicMedium make_general_kpp_medium(double L, ScalarFn a, ScalarFn da, ScalarFn d2a,
                                       ScalarFn r, ReactionFn f);

/// Returns a copy of `medium` with r = r0 + w and b = b0 a^{1/4}.
PeriodicMedium tune(const PeriodicMedium& medium, double r0, double b0);

/// Rescales a medium of period P to period L: a_L(x) = a(x P / L), same for
/// r and b. Tuning is not preserved (w changes under rescaling).
PeriodicMedium rescale_period(const PeriodicMedium& base, double L);

/// Throws std::invalid_argument unless a > 0, the coefficients are periodic
/// at 1024 sample points, and b > 0 in logistic mode.
void validate_medium(const PeriodicMedium& medium);

/// Samples f(x,u)/u on a grid and reports violations of monotone decrease.
std::vector<std::string> check_kpp_structure(const PeriodicMedium& medium, int nx = 32,
                                             int nu = 32, double u_max = 0.0);

/// Observed order of the max error between (a', a'') and centered finite
/// differences of a, as the step is halved from `step`.
double derivative_consistency_order(const PeriodicMedium& medium, double step);

/// Upper bound on the positive periodic stationary state (max r/b for logistic
/// media, the first u with f(x,u) <= 0 otherwise).
double stationary_upper_bound(const PeriodicMedium& medium);

}  // namespace kpp
