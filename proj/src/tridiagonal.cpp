#include "kpp/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

namespace kpp {

TridiagonalFactor::TridiagonalFactor(std::span<const double> sub, std::span<const double> diag,
                                     std::span<const double> sup) {
  const std::size_t n = diag.size();
  if (n == 0 || sub.size() != n || sup.size() != n) {
    throw std::invalid_argument("tridiagonal bands must have equal nonzero length");
  }
  sub_.assign(sub.begin(), sub.end());
  pivot_.resize(n);
  upper_.resize(n);
  pivot_[0] = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot_[i] = diag[i] - sub[i] * upper_[i - 1];
    if (pivot_[i] == 0.0 || !std::isfinite(pivot_[i])) {
      throw std::runtime_error("tridiagonal factorization hit a zero pivot");
    }
    upper_[i] = (i + 1 < n) ? sup[i] / pivot_[i] : 0.0;
  }
}

void TridiagonalFactor::solve_in_place(std::span<double> rhs) const {
  const std::size_t n = pivot_.size();
  rhs[0] /= pivot_[0];
  for (std::size_t i = 1; i < n; ++i) {
    rhs[i] = (rhs[i] - sub_[i] * rhs[i - 1]) / pivot_[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] -= upper_[i] * rhs[i + 1];
  }
}

CyclicTridiagonalFactor::CyclicTridiagonalFactor(std::span<const double> sub,
                                                 std::span<const double> diag,
                                                 std::span<const double> sup)
    : n_(diag.size()) {
  if (n_ < 3 || sub.size() != n_ || sup.size() != n_) {
    throw std::invalid_argument("cyclic tridiagonal system needs n >= 3 and equal band lengths");
  }
  const std::size_t m = n_ - 1;
  block_ = TridiagonalFactor(sub.first(m), diag.first(m), sup.first(m));

  border_solution_.assign(m, 0.0);
  border_solution_[0] = sub[0];
  border_solution_[m - 1] += sup[m - 1];
  block_.solve_in_place(border_solution_);

  corner_sub_ = sub[m];
  corner_sup_ = sup[m];
  schur_ = diag[m] - corner_sub_ * border_solution_[m - 1] - corner_sup_ * border_solution_[0];
  if (schur_ == 0.0 || !std::isfinite(schur_)) {
    throw std::runtime_error("cyclic tridiagonal system is singular");
  }
}

void CyclicTridiagonalFactor::solve_in_place(std::span<double> rhs) const {
  const std::size_t m = n_ - 1;
  auto head = rhs.first(m);
  block_.solve_in_place(head);
  const double last =
      (rhs[m] - corner_sub_ * head[m - 1] - corner_sup_ * head[0]) / schur_;
  for (std::size_t i = 0; i < m; ++i) head[i] -= border_solution_[i] * last;
  rhs[m] = last;
}

}  // namespace kpp
