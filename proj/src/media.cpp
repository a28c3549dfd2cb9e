#include "kpp/media.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "kpp/tridiagonal.hpp"

namespace kpp {

namespace {

constexpr int kPeriodicitySamples = 1024;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(fmt::format("{} must be positive and finite (got {})", name, value));
  }
}

bool periodic_at(const ScalarFn& g, double x, double L) {
  const double gx = g(x);
  return std::abs(g(x + L) - gx) <= 1e-12 * (1.0 + std::abs(gx));
}

}  // namespace

double PeriodicMedium::reaction(double x, double u) const {
  if (mode == Nonlinearity::Logistic) return r(x) * u - b(x) * u * u;
  return f(x, u);
}

double PeriodicMedium::reaction_du(double x, double u) const {
  if (mode == Nonlinearity::Logistic) return r(x) - 2.0 * b(x) * u;
  const double step = 1e-6 * (1.0 + std::abs(u));
  return (f(x, u + step) - f(x, u - step)) / (2.0 * step);
}

double correction_w(const PeriodicMedium& medium, double x) {
  const double a = medium.a(x);
  const double da = medium.da(x);
  return 0.25 * (medium.d2a(x) - da * da / (4.0 * a));
}

PeriodicMedium make_cosine_medium(double L, double eps, double r0, double b0, bool tuned) {
  require_positive(L, "period L");
  require_positive(r0, "r0");
  require_positive(b0, "b0");
  if (!(std::abs(eps) < 1.0)) {
    throw std::invalid_argument(
        fmt::format("cosine medium needs |eps| < 1 so that a stays positive (got eps = {})", eps));
  }
  const double k = 2.0 * std::numbers::pi / L;

  PeriodicMedium m;
  m.period = L;
  m.a = [=](double x) {
    const double s = 1.0 + eps * std::cos(k * x);
    return s * s;
  };
  m.da = [=](double x) {
    const double s = 1.0 + eps * std::cos(k * x);
    return -2.0 * s * eps * k * std::sin(k * x);
  };
  m.d2a = [=](double x) {
    const double c = std::cos(k * x);
    const double sn = std::sin(k * x);
    const double s = 1.0 + eps * c;
    const double ds = -eps * k * sn;
    const double d2s = -eps * k * k * c;
    return 2.0 * ds * ds + 2.0 * s * d2s;
  };
  m.r = [=](double) { return r0; };
  m.b = [=](double) { return b0; };
  m.constant_growth = r0;
  m.label = fmt::format("cosine(L={},eps={})", L, eps);
  if (tuned) m = tune(m, r0, b0);
  validate_medium(m);
  return m;
}

// --- Fourier series -------------------------------------------------------

double FourierSeries::value(double x) const {
  const double k = 2.0 * std::numbers::pi / period;
  double s = mean;
  for (std::size_t j = 0; j < cos_coef.size(); ++j) s += cos_coef[j] * std::cos(k * (j + 1) * x);
  for (std::size_t j = 0; j < sin_coef.size(); ++j) s += sin_coef[j] * std::sin(k * (j + 1) * x);
  return s;
}

double FourierSeries::d1(double x) const {
  const double k = 2.0 * std::numbers::pi / period;
  double s = 0.0;
  for (std::size_t j = 0; j < cos_coef.size(); ++j) {
    const double kj = k * (j + 1);
    s -= cos_coef[j] * kj * std::sin(kj * x);
  }
  for (std::size_t j = 0; j < sin_coef.size(); ++j) {
    const double kj = k * (j + 1);
    s += sin_coef[j] * kj * std::cos(kj * x);
  }
  return s;
}

double FourierSeries::d2(double x) const {
  const double k = 2.0 * std::numbers::pi / period;
  double s = 0.0;
  for (std::size_t j = 0; j < cos_coef.size(); ++j) {
    const double kj = k * (j + 1);
    s -= cos_coef[j] * kj * kj * std::cos(kj * x);
  }
  for (std::size_t j = 0; j < sin_coef.size(); ++j) {
    const double kj = k * (j + 1);
    s -= sin_coef[j] * kj * kj * std::sin(kj * x);
  }
  return s;
}

double FourierSeries::min_sampled(int samples) const {
  double lo = value(0.0);
  for (int i = 1; i < samples; ++i) lo = std::min(lo, value(period * i / samples));
  return lo;
}

double FourierSeries::max_sampled(int samples) const {
  double hi = value(0.0);
  for (int i = 1; i < samples; ++i) hi = std::max(hi, value(period * i / samples));
  return hi;
}

PeriodicMedium make_fourier_medium(const FourierSeries& a, const FourierSeries& r, double b0) {
  require_positive(a.period, "period L");
  require_positive(b0, "b0");
  if (std::abs(a.period - r.period) > 1e-14 * a.period) {
    throw std::invalid_argument("diffusion and growth series must share the same period");
  }
  PeriodicMedium m;
  m.period = a.period;
  m.a = [a](double x) { return a.value(x); };
  m.da = [a](double x) { return a.d1(x); };
  m.d2a = [a](double x) { return a.d2(x); };
  m.r = [r](double x) { return r.value(x); };
  m.b = [b0](double) { return b0; };
  if (r.cos_coef.empty() && r.sin_coef.empty()) m.constant_growth = r.mean;
  m.label = "fourier";
  validate_medium(m);
  return m;
}

PeriodicMedium make_random_fourier_medium(std::mt19937_64& rng, double L, int modes) {
  require_positive(L, "period L");
  if (modes < 1) throw std::invalid_argument("random medium needs at least one mode");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  FourierSeries a{L, 1.0, {}, {}};
  FourierSeries r{L, 1.0, {}, {}};
  double a_budget = 0.0;
  for (int k = 1; k <= modes; ++k) {
    const double ka = 0.15 / (k * k);
    a.cos_coef.push_back(ka * unit(rng));
    a.sin_coef.push_back(ka * unit(rng));
    a_budget += std::hypot(a.cos_coef.back(), a.sin_coef.back());
    r.cos_coef.push_back(0.3 / k * unit(rng));
    r.sin_coef.push_back(0.3 / k * unit(rng));
  }
  // Keep a >= 0.6 whatever the draw.
  if (a_budget > 0.4) {
    for (auto* c : {&a.cos_coef, &a.sin_coef}) {
      for (double& v : *c) v *= 0.4 / a_budget;
    }
  }
  const auto trial = make_fourier_medium(a, r, 1.0);
  double lowest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4096; ++i) {
    const double x = L * i / 4096.0;
    lowest = std::min(lowest, trial.r(x) - correction_w(trial, x));
  }
  if (lowest < 0.2) r.mean += 0.2 - lowest;
  auto m = make_fourier_medium(a, r, 1.0);
  m.label = "random-fourier";
  return m;
}

// --- periodic spline ------------------------------------------------------

PeriodicSpline::PeriodicSpline(double period, std::vector<double> values)
    : period_(period), y_(std::move(values)) {
  const std::size_t n = y_.size();
  if (n < 4) throw std::invalid_argument("periodic spline needs at least 4 samples");
  require_positive(period, "spline period");
  h_ = period_ / static_cast<double>(n);
  std::vector<double> sub(n, 1.0), diag(n, 4.0), sup(n, 1.0), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = y_[(i + n - 1) % n];
    const double next = y_[(i + 1) % n];
    rhs[i] = 6.0 * (next - 2.0 * y_[i] + prev) / (h_ * h_);
  }
  CyclicTridiagonalFactor(sub, diag, sup).solve_in_place(rhs);
  m_ = std::move(rhs);
}

std::size_t PeriodicSpline::locate(double x, double& t) const {
  double xr = std::fmod(x, period_);
  if (xr < 0.0) xr += period_;
  const double s = xr / h_;
  auto i = static_cast<std::size_t>(s);
  if (i >= y_.size()) i = y_.size() - 1;
  t = s - static_cast<double>(i);
  return i;
}

double PeriodicSpline::value(double x) const {
  double t = 0.0;
  const std::size_t i = locate(x, t);
  const std::size_t j = (i + 1) % y_.size();
  const double u = 1.0 - t;
  return u * y_[i] + t * y_[j] +
         h_ * h_ / 6.0 * ((u * u * u - u) * m_[i] + (t * t * t - t) * m_[j]);
}

double PeriodicSpline::d1(double x) const {
  double t = 0.0;
  const std::size_t i = locate(x, t);
  const std::size_t j = (i + 1) % y_.size();
  const double u = 1.0 - t;
  return (y_[j] - y_[i]) / h_ +
         h_ / 6.0 * (-(3.0 * u * u - 1.0) * m_[i] + (3.0 * t * t - 1.0) * m_[j]);
}

double PeriodicSpline::d2(double x) const {
  double t = 0.0;
  const std::size_t i = locate(x, t);
  const std::size_t j = (i + 1) % y_.size();
  return (1.0 - t) * m_[i] + t * m_[j];
}

PeriodicMedium make_table_medium(double L, std::span<const double> x, std::span<const double> a,
                                 double r0, double b0, bool tuned) {
  require_positive(L, "period L");
  require_positive(r0, "r0");
  require_positive(b0, "b0");
  if (x.size() != a.size()) throw std::invalid_argument("table x and a must have equal length");
  if (x.size() < 8) throw std::invalid_argument("table medium needs at least 8 samples");
  const double h = L / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - h * static_cast<double>(i)) > 1e-9 * L) {
      throw std::invalid_argument(
          fmt::format("table samples must be x_i = i L / N over [0, L); sample {} is at {}", i, x[i]));
    }
    if (!(a[i] > 0.0)) throw std::invalid_argument("table diffusion samples must be positive");
  }
  auto spline = std::make_shared<PeriodicSpline>(L, std::vector<double>(a.begin(), a.end()));

  PeriodicMedium m;
  m.period = L;
  m.a = [spline](double xx) { return spline->value(xx); };
  m.da = [spline](double xx) { return spline->d1(xx); };
  m.d2a = [spline](double xx) { return spline->d2(xx); };
  m.r = [r0](double) { return r0; };
  m.b = [b0](double) { return b0; };
  m.constant_growth = r0;
  m.label = fmt::format("table(N={})", x.size());
  if (tuned) m = tune(m, r0, b0);
  validate_medium(m);
  return m;
}

PeriodicMedium make_custom_medium(double L, ScalarFn a, ScalarFn r, ScalarFn b, ScalarFn da,
                                  ScalarFn d2a) {
  require_positive(L, "period L");
  const double step = 1e-5 * L;
  if (!da) {
    da = [a, step](double x) { return (a(x + step) - a(x - step)) / (2.0 * step); };
  }
  if (!d2a) {
    d2a = [a, step](double x) { return (a(x + step) - 2.0 * a(x) + a(x - step)) / (step * step); };
  }
  PeriodicMedium m;
  m.period = L;
  m.a = std::move(a);
  m.da = std::move(da);
  m.d2a = std::move(d2a);
  m.r = std::move(r);
  m.b = std::move(b);
  m.label = "custom";
  validate_medium(m);
  return m;
}

PeriodicMedium make_general_kpp_medium(double L, ScalarFn a, ScalarFn da, ScalarFn d2a,
                                       ScalarFn r, ReactionFn f) {
  require_positive(L, "period L");
  PeriodicMedium m;
  m.period = L;
  m.a = std::move(a);
  m.da = std::move(da);
  m.d2a = std::move(d2a);
  m.r = std::move(r);
  m.mode = Nonlinearity::GeneralKpp;
  m.f = std::move(f);
  m.label = "general-kpp";
  validate_medium(m);
  for (const auto& warning : check_kpp_structure(m)) std::clog << "warning: " << warning << '\n';
  return m;
}

PeriodicMedium tune(const PeriodicMedium& medium, double r0, double b0) {
  require_positive(r0, "r0");
  require_positive(b0, "b0");
  PeriodicMedium m = medium;
  m.r = [a = medium.a, da = medium.da, d2a = medium.d2a, r0](double x) {
    const double ax = a(x);
    const double dax = da(x);
    return r0 + 0.25 * (d2a(x) - dax * dax / (4.0 * ax));
  };
  m.b = [a = medium.a, b0](double x) { return b0 * std::pow(a(x), 0.25); };
  m.mode = Nonlinearity::Logistic;
  m.f = {};
  m.r0 = r0;
  m.b0 = b0;
  m.constant_growth.reset();
  m.label = medium.label + "+tuned";
  return m;
}

PeriodicMedium rescale_period(const PeriodicMedium& base, double L) {
  require_positive(L, "period L");
  const double s = base.period / L;  // x_base = s x
  PeriodicMedium m;
  m.period = L;
  m.a = [g = base.a, s](double x) { return g(s * x); };
  m.da = [g = base.da, s](double x) { return s * g(s * x); };
  m.d2a = [g = base.d2a, s](double x) { return s * s * g(s * x); };
  m.r = [g = base.r, s](double x) { return g(s * x); };
  if (base.b) m.b = [g = base.b, s](double x) { return g(s * x); };
  if (base.f) m.f = [g = base.f, s](double x, double u) { return g(s * x, u); };
  m.mode = base.mode;
  m.constant_growth = base.constant_growth;
  m.label = fmt::format("{}@L={}", base.label, L);
  validate_medium(m);
  return m;
}

void validate_medium(const PeriodicMedium& m) {
  require_positive(m.period, "period L");
  if (!m.a || !m.da || !m.d2a || !m.r) {
    throw std::invalid_argument("medium needs a, a', a'' and r callables");
  }
  if (m.mode == Nonlinearity::Logistic && !m.b) {
    throw std::invalid_argument("logistic medium needs a saturation callable b");
  }
  if (m.mode == Nonlinearity::GeneralKpp && !m.f) {
    throw std::invalid_argument("general KPP medium needs a reaction callable f");
  }
  const double L = m.period;
  for (int i = 0; i < kPeriodicitySamples; ++i) {
    const double x = L * i / kPeriodicitySamples;
    const double ax = m.a(x);
    if (!(ax > 0.0) || !std::isfinite(ax)) {
      throw std::invalid_argument(fmt::format("diffusion must be positive: a({}) = {}", x, ax));
    }
    if (!periodic_at(m.a, x, L)) {
      throw std::invalid_argument(fmt::format("diffusion is not {}-periodic near x = {}", L, x));
    }
    if (!periodic_at(m.r, x, L)) {
      throw std::invalid_argument(fmt::format("growth rate is not {}-periodic near x = {}", L, x));
    }
    if (m.mode == Nonlinearity::Logistic) {
      const double bx = m.b(x);
      if (!(bx > 0.0)) {
        throw std::invalid_argument(fmt::format("saturation must be positive: b({}) = {}", x, bx));
      }
      if (!periodic_at(m.b, x, L)) {
        throw std::invalid_argument(fmt::format("saturation is not {}-periodic near x = {}", L, x));
      }
    }
  }
}

std::vector<std::string> check_kpp_structure(const PeriodicMedium& m, int nx, int nu,
                                             double u_max) {
  std::vector<std::string> violations;
  if (u_max <= 0.0) u_max = 2.0 * stationary_upper_bound(m);
  for (int i = 0; i < nx; ++i) {
    const double x = m.period * i / nx;
    double prev = m.r(x);  // limit of f/u as u -> 0
    for (int j = 1; j <= nu; ++j) {
      const double u = u_max * j / nu;
      const double ratio = m.reaction(x, u) / u;
      if (ratio > prev + 1e-10 * (1.0 + std::abs(prev))) {
        violations.push_back(
            fmt::format("f(x,u)/u increases in u at x = {:.6g}, u = {:.6g}", x, u));
        break;
      }
      prev = ratio;
    }
  }
  return violations;
}

double derivative_consistency_order(const PeriodicMedium& m, double step) {
  auto max_error = [&](double h) {
    double err = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double x = m.period * (i + 0.37) / 64.0;
      const double fd1 = (m.a(x + h) - m.a(x - h)) / (2.0 * h);
      const double fd2 = (m.a(x + h) - 2.0 * m.a(x) + m.a(x - h)) / (h * h);
      err = std::max({err, std::abs(fd1 - m.da(x)), std::abs(fd2 - m.d2a(x))});
    }
    return err;
  };
  return std::log2(max_error(step) / max_error(0.5 * step));
}

double stationary_upper_bound(const PeriodicMedium& m) {
  double bound = 0.0;
  if (m.mode == Nonlinearity::Logistic) {
    for (int i = 0; i < kPeriodicitySamples; ++i) {
      const double x = m.period * i / kPeriodicitySamples;
      bound = std::max(bound, m.r(x) / m.b(x));
    }
    return bound;
  }
  for (int i = 0; i < 64; ++i) {
    const double x = m.period * i / 64.0;
    double u = 1.0;
    int guard = 0;
    while (m.f(x, u) > 0.0 && guard++ < 200) u *= 2.0;
    if (guard >= 200) throw std::invalid_argument("reaction never becomes nonpositive for large u");
    bound = std::max(bound, u);
  }
  return bound;
}

}  // namespace kpp
