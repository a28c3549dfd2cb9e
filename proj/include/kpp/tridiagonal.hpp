#pragma once

#include <span>
#include <vector>

namespace kpp {

/**
 * LU factorization of a tridiagonal matrix without pivoting. Row i reads
 *   sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i],
 * with sub[0] and sup[n-1] ignored. Stable for diagonally dominant matrices
 * and nonsingular M-matrices.
 */
class TridiagonalFactor {
 public:
  TridiagonalFactor() = default;
  TridiagonalFactor(std::span<const double> sub, std::span<const double> diag,
                    std::span<const double> sup);

  std::size_t size() const { return pivot_.size(); }
  void solve_in_place(std::span<double> rhs) const;

 private:
  std::vector<double> sub_;
  std::vector<double> pivot_;
  std::vector<double> upper_;  // sup[i] / pivot[i]
};

/**
 * Cyclic tridiagonal system with the periodic corners sub[0] (couples x[n-1]
 * into row 0) and sup[n-1] (couples x[0] into row n-1).
 *
 * Solved by bordering: the leading (n-1)x(n-1) block is factored once and the
 * last unknown comes from a scalar Schur complement. For a nonsingular
 * M-matrix the leading block and the Schur complement are again M-matrices,
 * so no pivoting is needed.
 */
class CyclicTridiagonalFactor {
 public:
  CyclicTridiagonalFactor() = default;
  CyclicTridiagonalFactor(std::span<const double> sub, std::span<const double> diag,
                          std::span<const double> sup);

  std::size_t size() const { return n_; }
  void solve_in_place(std::span<double> rhs) const;

 private:
  std::size_t n_ = 0;
  TridiagonalFactor block_;
  std::vector<double> border_solution_;  // block^{-1} * border column
  double corner_sub_ = 0.0;              // sub[n-1]
  double corner_sup_ = 0.0;              // sup[n-1]
  double schur_ = 0.0;
};

}  // namespace kpp
