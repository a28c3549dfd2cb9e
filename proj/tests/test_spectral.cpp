#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "kpp/coordinate_map.hpp"
#include "kpp/errors.hpp"
#include "kpp/media.hpp"
#include "kpp/spectral.hpp"
#include "oracles/fourier_oracle.hpp"

using namespace kpp;

// Reference eigenvalues of the untuned cosine medium (r = 1, b = 1) from the
// Fourier-Galerkin oracle in oracles/fourier_oracle.hpp (print_oracles).
namespace frozen {
constexpr double k_eps05_l05 = 1.162904387456092;
constexpr double k_eps05_l07 = 1.320242469960114;
constexpr double k_eps05_l1 = 1.657445052700478;
constexpr double k_eps05_l2 = 3.701444435278312;
constexpr double k_eps03_l05 = 1.217266091161088;
}  // namespace frozen

TEST_CASE("constant coefficients give k = lambda^2 a + r") {
  const auto m = make_cosine_medium(1.0, 0.0, 1.3, 1.0, false);
  for (double lambda : {0.0, 0.5, 2.0, -1.0}) {
    const auto result = principal_eigenpair(assemble(m, lambda, 64));
    CHECK(result.k == doctest::Approx(lambda * lambda + 1.3).epsilon(1e-12));
    for (double v : result.phi) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("principal eigenvalue matches the Fourier-Galerkin reference") {
  const auto m5 = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  const auto m3 = make_cosine_medium(1.0, 0.3, 1.0, 1.0, false);
  // O(dx^2) discretization error: about 5e-8 at n = 4096.
  CHECK(k_lambda(m5, 0.7, 4096) == doctest::Approx(frozen::k_eps05_l07).epsilon(1e-6));
  CHECK(k_lambda(m3, 0.5, 4096) == doctest::Approx(frozen::k_eps03_l05).epsilon(1e-6));
  CHECK(k_lambda(m5, 0.5, 2048) == doctest::Approx(frozen::k_eps05_l05).epsilon(1e-5));
  CHECK(k_lambda(m5, 1.0, 2048) == doctest::Approx(frozen::k_eps05_l1).epsilon(1e-5));
  CHECK(k_lambda(m5, 2.0, 2048) == doctest::Approx(frozen::k_eps05_l2).epsilon(1e-5));

  // The oracle itself, recomputed, agrees with the frozen value.
  CHECK(oracle::Cosine{1.0, 0.5, 1.0, false}.k(0.7) ==
        doctest::Approx(frozen::k_eps05_l07).epsilon(1e-12));
}

TEST_CASE("discretization error is second order") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  const double e1 = std::abs(k_lambda(m, 0.7, 256) - frozen::k_eps05_l07);
  const double e2 = std::abs(k_lambda(m, 0.7, 512) - frozen::k_eps05_l07);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("eigenpair diagnostics") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  const auto result = principal_eigenpair(assemble(m, 1.0, 512));
  CHECK(result.phi.size() == 512);
  CHECK(result.phi[0] == 1.0);
  for (double v : result.phi) CHECK(v > 0.0);
  CHECK(result.residual < 1e-6);
  CHECK(result.lambda == 1.0);
  CHECK_FALSE(result.dense_fallback_used);

  const auto dense = dense_principal_eigenpair(assemble(m, 1.0, 512));
  CHECK(dense.dense_fallback_used);
  CHECK(dense.k == doctest::Approx(result.k).epsilon(1e-9));
  for (std::size_t i = 0; i < 512; i += 37) {
    CHECK(dense.phi[i] == doctest::Approx(result.phi[i]).epsilon(1e-6));
  }

  const auto j = to_json(result);
  CHECK(j.at("lambda") == 1.0);
  CHECK(j.at("n") == 512);
  CHECK(j.at("phi").size() == 512);
  CHECK(j.contains("k"));
  CHECK(j.contains("residual"));
}

TEST_CASE("assembly preconditions") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  CHECK_THROWS_AS(assemble(m, 0.5, 16), std::invalid_argument);
  CHECK_THROWS_AS(assemble(m, 0.5, 65), std::invalid_argument);
  // |lambda| max a dx = 200 * 2.25 / 64 exceeds min a = 0.25.
  CHECK_THROWS_AS(assemble(m, 200.0, 64), GridTooCoarse);
  const int n = min_nodes_for_peclet(m, 200.0);
  CHECK(n % 2 == 0);
  CHECK_NOTHROW(assemble(m, 200.0, n));
  CHECK_THROWS_AS(assemble(m, 200.0, n - 2), GridTooCoarse);
}

TEST_CASE("off-diagonals are nonnegative and rows sum to the zero-order term") {
  const auto m = make_cosine_medium(1.0, 0.7, 1.0, 1.0, true);
  const auto op = assemble(m, 1.5, 256);
  for (int i = 0; i < op.n; ++i) {
    CHECK(op.sub[i] >= 0.0);
    CHECK(op.sup[i] >= 0.0);
    CHECK(op.sub[i] + op.diag[i] + op.sup[i] == doctest::Approx(op.zero_order[i]).epsilon(1e-9));
  }
}

TEST_CASE("tuned media have k = lambda^2 / <a^-1/2>^2 + r0") {
  for (double eps : {0.3, 0.5, 0.9}) {
    const auto m = make_cosine_medium(1.0, eps, 1.0, 1.0, true);
    const double mean = build_coordinate_map(m).mean_inv_sqrt_a();
    for (double lambda : {0.5, 1.0, 2.0}) {
      CHECK(k_lambda(m, lambda, 1024) ==
            doctest::Approx(lambda * lambda / (mean * mean) + 1.0).epsilon(5e-4));
    }
  }
}

TEST_CASE("eigenvalue is invariant under the change to the diffusive frame") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  const auto map = build_coordinate_map(m);
  for (double lambda : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double d512 = std::abs(k_lambda(m, lambda, 512) - transformed_eigenvalue(m, map, lambda, 512));
    const double d1024 = std::abs(k_lambda(m, lambda, 1024) - transformed_eigenvalue(m, map, lambda, 1024));
    CHECK(d1024 < 5e-3);
    CHECK(std::log2(d512 / d1024) >= 1.8);
  }
  // Transformed operator on its own: constant diffusion, so sub + sup is 2 / dy^2.
  const auto op = assemble_diffusive(m, map, 1.0, 256);
  CHECK(op.frame == Frame::Diffusive);
  CHECK(op.period == doctest::Approx(map.big_lambda()));
  CHECK(op.sub[5] + op.sup[5] == doctest::Approx(2.0 / (op.dx * op.dx)));
}

TEST_CASE("the eigenvalue is independent of the transform's potential sampling") {
  std::mt19937_64 rng(99);
  const auto m = make_random_fourier_medium(rng, 1.0);
  const double direct = k_lambda(m, 0.8, 2048);
  CHECK(transformed_eigenvalue(m, 0.8, 2048) == doctest::Approx(direct).epsilon(1e-5));
}
