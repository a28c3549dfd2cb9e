#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "kpp/coordinate_map.hpp"
#include "kpp/media.hpp"

namespace kpp {

enum class Frame {
  Physical,   // L_lambda[a; r] on [0, L)
  Diffusive,  // L_mu[1; R - W] on [0, Lambda)
};

/**
 * Cyclic tridiagonal discretization of
 *   psi -> (a psi')' - 2 lambda a psi' + (lambda^2 a - lambda a' + r) psi
 * on n periodic nodes. Row i reads
 *   sub[i] psi[i-1] + diag[i] psi[i] + sup[i] psi[i+1]
 * with indices taken mod n. The zero-order coefficient (the row sum) is kept
 * separately so that apply() works in flux form.
 */
struct DiscreteOperator {
  int n = 0;
  double dx = 0.0;
  double period = 0.0;
  double lambda = 0.0;
  Frame frame = Frame::Physical;
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> sup;
  std::vector<double> zero_order;

  void apply(std::span<const double> psi, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> psi) const;
};

/// Conservative second-order assembly with a evaluated at half-nodes. Requires
/// n >= 32, n even and |lambda| max(a) dx <= min(a_{i+1/2}); throws
/// GridTooCoarse otherwise.
DiscreteOperator assemble(const PeriodicMedium& medium, double lambda, int n);

/// L_mu[1; q] on [0, period) for potential samples q at the n nodes.
DiscreteOperator assemble_constant_diffusion(double period, double mu,
                                             std::span<const double> potential);

/// L_mu[1; R - W] with mu = lambda / <a^{-1/2}> and R - W = (r - w) o h^{-1}.
DiscreteOperator assemble_diffusive(const PeriodicMedium& medium, const CoordinateMap& map,
                                    double lambda, int n);

/// Smallest even n >= n_min for which assemble() accepts lambda.
int min_nodes_for_peclet(const PeriodicMedium& medium, double lambda, int n_min = 32);

struct EigenOptions {
  int max_iterations = 50000;
  double vector_tolerance = 1e-12;
  bool dense_fallback = true;
  int dense_limit = 4096;
};

struct EigenResult {
  double k = 0.0;
  std::vector<double> phi;  // phi[0] = 1
  double lambda = 0.0;
  int n = 0;
  double residual = 0.0;  // sup |L phi - k phi| / sup |phi|
  int iterations = 0;
  bool dense_fallback_used = false;
};

/**
 * Principal eigenpair (eigenvalue of largest real part, positive eigenvector).
 *
 * Runs power iteration on the resolvent (sigma I - Op)^{-1}. Off-diagonals of
 * Op are nonnegative, so for sigma above the Perron root the resolvent is
 * entrywise positive and its dominant eigenvector is the principal one. After
 * each step the Collatz-Wielandt quotients (Op v)_i / v_i bracket k, and
 * sigma is moved to just above the upper bracket, which accelerates the
 * iteration the way a Rayleigh-quotient shift does. If the iteration stalls,
 * a dense eigendecomposition is used for n <= dense_limit.
 *
 * Throws NonConvergence or NegativeEigenvectorEntry.
 */
EigenResult principal_eigenpair(const DiscreteOperator& op, const EigenOptions& options = {});

/// Dense-path eigenpair only (also the stalled-iteration fallback).
EigenResult dense_principal_eigenpair(const DiscreteOperator& op);

/// k_lambda^L[a; r] from the physical-frame discretization.
double k_lambda(const PeriodicMedium& medium, double lambda, int n);

/// k_mu^Lambda[1; R - W] from the diffusive-frame discretization.
double transformed_eigenvalue(const PeriodicMedium& medium, const CoordinateMap& map,
                              double lambda, int n);
double transformed_eigenvalue(const PeriodicMedium& medium, double lambda, int n);

nlohmann::json to_json(const EigenResult& result);

}  // namespace kpp
