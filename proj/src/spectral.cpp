#include "kpp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "kpp/errors.hpp"
#include "kpp/tridiagonal.hpp"

namespace kpp {

namespace {

void check_grid(int n) {
  if (n < 32 || n % 2 != 0) {
    throw std::invalid_argument(fmt::format("grid size must be even and at least 32 (got {})", n));
  }
}

struct PecletCheck {
  bool ok;
  double lhs;  // |lambda| max(a) dx
  double rhs;  // min a_{i+1/2}
};

PecletCheck peclet(const PeriodicMedium& medium, double lambda, int n) {
  const double dx = medium.period / n;
  double a_max = 0.0;
  double a_half_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    a_max = std::max(a_max, medium.a(i * dx));
    a_half_min = std::min(a_half_min, medium.a((i + 0.5) * dx));
  }
  const double lhs = std::abs(lambda) * a_max * dx;
  return {lhs <= a_half_min, lhs, a_half_min};
}

}  // namespace

void DiscreteOperator::apply(std::span<const double> psi, std::span<double> out) const {
  const auto m = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < m; ++i) {
    const double left = psi[(i + m - 1) % m];
    const double right = psi[(i + 1) % m];
    out[i] = sub[i] * (left - psi[i]) + sup[i] * (right - psi[i]) + zero_order[i] * psi[i];
  }
}

std::vector<double> DiscreteOperator::apply(std::span<const double> psi) const {
  std::vector<double> out(psi.size());
  apply(psi, out);
  return out;
}

DiscreteOperator assemble(const PeriodicMedium& medium, double lambda, int n) {
  check_grid(n);
  const auto pe = peclet(medium, lambda, n);
  if (!pe.ok) {
    throw GridTooCoarse(fmt::format(
        "cell Peclet condition fails for lambda = {} at n = {}: |lambda| max(a) dx = {:.4g} > "
        "min a_half = {:.4g}; raise n to at least {}",
        lambda, n, pe.lhs, pe.rhs, min_nodes_for_peclet(medium, lambda, n)));
  }
  DiscreteOperator op;
  op.n = n;
  op.period = medium.period;
  op.dx = medium.period / n;
  op.lambda = lambda;
  op.frame = Frame::Physical;
  op.sub.resize(n);
  op.diag.resize(n);
  op.sup.resize(n);
  op.zero_order.resize(n);

  const double dx = op.dx;
  const double dx2 = dx * dx;
  for (int i = 0; i < n; ++i) {
    const double x = i * dx;
    const double a = medium.a(x);
    const double a_plus = medium.a(x + 0.5 * dx);
    const double a_minus = medium.a(x - 0.5 * dx);
    op.sub[i] = a_minus / dx2 + lambda * a / dx;
    op.sup[i] = a_plus / dx2 - lambda * a / dx;
    op.zero_order[i] = lambda * lambda * a - lambda * medium.da(x) + medium.r(x);
    op.diag[i] = op.zero_order[i] - op.sub[i] - op.sup[i];
  }
  return op;
}

DiscreteOperator assemble_constant_diffusion(double period, double mu,
                                             std::span<const double> potential) {
  const int n = static_cast<int>(potential.size());
  check_grid(n);
  DiscreteOperator op;
  op.n = n;
  op.period = period;
  op.dx = period / n;
  op.lambda = mu;
  op.frame = Frame::Diffusive;
  if (std::abs(mu) * op.dx > 1.0) {
    throw GridTooCoarse(fmt::format(
        "cell Peclet condition fails in the diffusive frame: |mu| dy = {:.4g} > 1; raise n",
        std::abs(mu) * op.dx));
  }
  const double dx2 = op.dx * op.dx;
  op.sub.assign(n, 1.0 / dx2 + mu / op.dx);
  op.sup.assign(n, 1.0 / dx2 - mu / op.dx);
  op.zero_order.resize(n);
  op.diag.resize(n);
  for (int i = 0; i < n; ++i) {
    op.zero_order[i] = mu * mu + potential[i];
    op.diag[i] = op.zero_order[i] - op.sub[i] - op.sup[i];
  }
  return op;
}

DiscreteOperator assemble_diffusive(const PeriodicMedium& medium, const CoordinateMap& map,
                                    double lambda, int n) {
  check_grid(n);
  const double big_lambda = map.big_lambda();
  const double mu = lambda / map.mean_inv_sqrt_a();
  const double dy = big_lambda / n;
  std::vector<double> potential(n);
  for (int j = 0; j < n; ++j) {
    const double x = map.inverse(j * dy);
    potential[j] = medium.r(x) - correction_w(medium, x);
  }
  auto op = assemble_constant_diffusion(big_lambda, mu, potential);
  op.lambda = mu;
  return op;
}

int min_nodes_for_peclet(const PeriodicMedium& medium, double lambda, int n_min) {
  int n = std::max(32, n_min + (n_min % 2));
  if (peclet(medium, lambda, n).ok) return n;
  // Geometric search for an upper bound, then bisection on even n.
  int lo = n;
  int hi = n;
  while (!peclet(medium, lambda, hi).ok) {
    lo = hi;
    if (hi > (1 << 28)) throw GridTooCoarse("no feasible grid size below 2^28 nodes");
    hi *= 2;
  }
  while (hi - lo > 2) {
    int mid = lo + (hi - lo) / 2;
    mid += mid % 2;
    if (peclet(medium, lambda, mid).ok) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

EigenResult dense_principal_eigenpair(const DiscreteOperator& op) {
  const int n = op.n;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    dense(i, i) += op.diag[i];
    dense(i, (i + n - 1) % n) += op.sub[i];
    dense(i, (i + 1) % n) += op.sup[i];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, true);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence(fmt::format("dense eigendecomposition failed at n = {}", n));
  }
  const auto& values = solver.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < values.size(); ++j) {
    if (values[j].real() > values[best].real()) best = j;
  }
  Eigen::VectorXd vec = solver.eigenvectors().col(best).real();
  Eigen::Index arg = 0;
  vec.cwiseAbs().maxCoeff(&arg);
  vec /= vec[arg];

  EigenResult result;
  result.k = values[best].real();
  result.lambda = op.lambda;
  result.n = n;
  result.dense_fallback_used = true;
  result.phi.assign(vec.data(), vec.data() + n);
  const double min_entry = *std::min_element(result.phi.begin(), result.phi.end());
  if (!(min_entry > 0.0)) {
    throw NegativeEigenvectorEntry(fmt::format(
        "principal eigenvector has a nonpositive entry ({:.3g}) at n = {}; raise n", min_entry, n));
  }
  const double phi0 = result.phi[0];
  for (double& v : result.phi) v /= phi0;

  const auto image = op.apply(result.phi);
  double res = 0.0;
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    res = std::max(res, std::abs(image[i] - result.k * result.phi[i]));
    scale = std::max(scale, result.phi[i]);
  }
  result.residual = res / scale;
  return result;
}

EigenResult principal_eigenpair(const DiscreteOperator& op, const EigenOptions& options) {
  const int n = op.n;
  const auto m = static_cast<std::size_t>(n);
  const double sigma_max = *std::max_element(op.zero_order.begin(), op.zero_order.end()) + 1.0;

  std::vector<double> v(m, 1.0);
  std::vector<double> y(m);
  std::vector<double> image(m);
  std::vector<double> bsub(m), bdiag(m), bsup(m);
  for (std::size_t i = 0; i < m; ++i) {
    bsub[i] = -op.sub[i];
    bsup[i] = -op.sup[i];
  }

  double sigma = sigma_max;
  double lo = 0.0;
  double hi = 0.0;
  double best_width = std::numeric_limits<double>::infinity();
  int stalled = 0;
  bool converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    for (std::size_t i = 0; i < m; ++i) {
      bdiag[i] = (sigma - op.zero_order[i]) + op.sub[i] + op.sup[i];
    }
    y = v;
    bool positive = true;
    try {
      CyclicTridiagonalFactor(bsub, bdiag, bsup).solve_in_place(y);
    } catch (const std::runtime_error&) {
      positive = false;
    }
    double y_max = 0.0;
    for (double value : y) {
      if (!(value > 0.0) || !std::isfinite(value)) positive = false;
      y_max = std::max(y_max, value);
    }
    if (!positive) {
      if (sigma < sigma_max) {
        sigma = sigma_max;  // shift got too close; restart from the safe shift
        continue;
      }
      throw NegativeEigenvectorEntry(fmt::format(
          "resolvent iterate lost positivity at n = {}; the discretization violates the "
          "maximum principle, raise n",
          n));
    }

    double change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      y[i] /= y_max;
      change = std::max(change, std::abs(y[i] - v[i]));
    }
    v.swap(y);

    op.apply(v, image);
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    double rounding = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double q = image[i] / v[i];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
      const double row = std::abs(op.sub[i]) + std::abs(op.diag[i]) + std::abs(op.sup[i]);
      rounding = std::max(rounding, row / v[i]);
    }
    rounding *= 16.0 * std::numeric_limits<double>::epsilon();
    const double width = hi - lo;
    // Rounding keeps the update from reaching the tolerance on fine grids, so a
    // tight bracket that has stopped shrinking is accepted too. On very fine
    // grids the bracket itself bottoms out at the stencil's rounding level.
    if (width < 0.5 * best_width) {
      best_width = width;
      stalled = 0;
    } else {
      ++stalled;
    }
    const bool tight = width <= std::max(1e-8 * (1.0 + std::abs(hi)), rounding);
    const bool settled = tight && (change < options.vector_tolerance || stalled >= 5);
    if (settled || width <= 1e-14 * (1.0 + std::abs(hi))) {
      converged = true;
      ++iter;
      break;
    }
    sigma = std::min(sigma_max, hi + std::max(width, 1e-12 * (1.0 + std::abs(hi))));
  }

  if (!converged) {
    if (options.dense_fallback && n <= options.dense_limit) return dense_principal_eigenpair(op);
    throw NonConvergence(fmt::format(
        "resolvent power iteration stalled after {} iterations at n = {} (bracket [{}, {}])",
        iter, n, lo, hi));
  }

  EigenResult result;
  result.k = 0.5 * (lo + hi);
  result.lambda = op.lambda;
  result.n = n;
  result.iterations = iter;
  const double v0 = v[0];
  result.phi.resize(m);
  for (std::size_t i = 0; i < m; ++i) result.phi[i] = v[i] / v0;

  op.apply(result.phi, image);
  double res = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    res = std::max(res, std::abs(image[i] - result.k * result.phi[i]));
    scale = std::max(scale, result.phi[i]);
  }
  result.residual = res / scale;
  return result;
}

double k_lambda(const PeriodicMedium& medium, double lambda, int n) {
  return principal_eigenpair(assemble(medium, lambda, n)).k;
}

double transformed_eigenvalue(const PeriodicMedium& medium, const CoordinateMap& map,
                              double lambda, int n) {
  return principal_eigenpair(assemble_diffusive(medium, map, lambda, n)).k;
}

double transformed_eigenvalue(const PeriodicMedium& medium, double lambda, int n) {
  return transformed_eigenvalue(medium, build_coordinate_map(medium, 4096), lambda, n);
}

nlohmann::json to_json(const EigenResult& result) {
  return nlohmann::json{{"lambda", result.lambda},   {"n", result.n},
                        {"k", result.k},             {"residual", result.residual},
                        {"iterations", result.iterations},
                        {"dense_fallback", result.dense_fallback_used},
                        {"phi", result.phi}};
}

}  // namespace kpp
