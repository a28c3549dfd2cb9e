#pragma once

// Fourier-Galerkin reference for the principal eigenvalue of
//   L_lambda psi = (a psi')' - 2 lambda a psi' + (lambda^2 a - lambda a' + r) psi
// on an L-periodic domain. Shares no code with the finite-difference solver.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Coeffs = std::vector<std::complex<double>>;  // index m + M for m in [-M, M]

// Fourier coefficients of an L-periodic function from `samples` equispaced values.
inline Coeffs fourier_coefficients(const std::function<double(double)>& g, double L, int M,
                                   int samples = 1024) {
  Coeffs c(2 * M + 1);
  for (int m = -M; m <= M; ++m) {
    std::complex<double> sum = 0.0;
    for (int j = 0; j < samples; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / samples;
      sum += g(L * j / samples) * std::exp(std::complex<double>(0.0, -m * theta));
    }
    c[m + M] = sum / static_cast<double>(samples);
  }
  return c;
}

// Largest-real-part eigenvalue of the Galerkin matrix on modes |k| <= K.
inline double principal_eigenvalue(const Coeffs& a, const Coeffs& r, int M, double L, double lambda,
                                   int K) {
  const double w = 2.0 * std::numbers::pi / L;
  const std::complex<double> I(0.0, 1.0);
  const int size = 2 * K + 1;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(size, size);
  for (int k = -K; k <= K; ++k) {
    for (int m = -M; m <= M; ++m) {
      const int j = k + m;
      if (j < -K || j > K) continue;
      const auto am = a[m + M];
      A(j + K, k + K) += am * (-m * k * w * w - k * k * w * w - 2.0 * I * lambda * (k * w) +
                               lambda * lambda - I * lambda * (m * w)) +
                         r[m + M];
    }
  }
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A, false);
  double best = -1e300;
  for (int i = 0; i < size; ++i) best = std::max(best, solver.eigenvalues()[i].real());
  return best;
}

// a(x) = (1 + eps cos(2 pi x / L))^2 with r = r0 (untuned) or r0 + w (tuned).
struct Cosine {
  double L = 1.0, eps = 0.5, r0 = 1.0;
  bool tuned = false;

  double a(double x) const {
    const double q = 1.0 + eps * std::cos(2.0 * std::numbers::pi * x / L);
    return q * q;
  }
  double r(double x) const {
    if (!tuned) return r0;
    const double w = 2.0 * std::numbers::pi / L;
    const double c = std::cos(w * x), s = std::sin(w * x);
    const double q = 1.0 + eps * c;
    const double da = -2.0 * q * eps * w * s;
    const double d2a = 2.0 * eps * eps * w * w * s * s - 2.0 * q * eps * w * w * c;
    return r0 + 0.25 * (d2a - da * da / (4.0 * a(x)));
  }

  double k(double lambda, int M = 24, int K = 48) const {
    const auto ac = fourier_coefficients([this](double x) { return a(x); }, L, M);
    const auto rc = fourier_coefficients([this](double x) { return r(x); }, L, M);
    return principal_eigenvalue(ac, rc, M, L, lambda, K);
  }

  // inf over lambda > 0 of k / lambda by golden-section search on [lo, hi].
  double speed(double lo = 0.05, double hi = 5.0, double* arg = nullptr) const {
    const double g = 0.5 * (3.0 - std::sqrt(5.0));
    double x1 = lo + g * (hi - lo), x2 = hi - g * (hi - lo);
    double f1 = k(x1) / x1, f2 = k(x2) / x2;
    while (hi - lo > 1e-9) {
      if (f1 <= f2) {
        hi = x2; x2 = x1; f2 = f1; x1 = lo + g * (hi - lo); f1 = k(x1) / x1;
      } else {
        lo = x1; x1 = x2; f1 = f2; x2 = hi - g * (hi - lo); f2 = k(x2) / x2;
      }
    }
    if (arg) *arg = 0.5 * (lo + hi);
    return std::min(f1, f2);
  }
};

}  // namespace oracle
