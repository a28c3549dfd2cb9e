#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "kpp/coordinate_map.hpp"
#include "kpp/errors.hpp"
#include "kpp/media.hpp"
#include "kpp/speed.hpp"

using namespace kpp;

// Fourier-Galerkin reference values (oracles/print_oracles).
namespace frozen {
constexpr double c_star_eps05 = 1.625932317444961;  // untuned cosine, r = b = 1, L = 1
constexpr double lambda_star_eps05 = 1.211908087201;
constexpr double c_star_L4 = 1.691720770153197;
constexpr double c_star_L8 = 1.718425169665418;
constexpr double c_star_L16 = 1.728308112015504;
}  // namespace frozen

TEST_CASE("closed-form speeds") {
  CHECK(closed_form_speed(1.0, 1.0) == 2.0);
  CHECK(closed_form_speed(4.0, 2.0) == 2.0);
  CHECK(az_front_speed(6.0, 1.0) == doctest::Approx(5.0));
  CHECK(az_front_speed(1.0, 1.0) / closed_form_speed(1.0, 1.0) ==
        doctest::Approx(5.0 / (2.0 * std::sqrt(6.0))).epsilon(1e-14));
  CHECK_THROWS_AS(closed_form_speed(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_speed(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(az_front_speed(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("minimal speed of tuned cosine media is 2 sqrt(r0 (1 - eps^2))") {
  for (double eps : {0.0, 0.3, 0.5, 0.9}) {
    const auto m = make_cosine_medium(1.0, eps, 1.0, 1.0, true);
    const auto s = freidlin_gartner_speed(m, 1024);
    const double expected = 2.0 * std::sqrt(1.0 - eps * eps);
    CHECK(s.c_star == doctest::Approx(expected).epsilon(2e-3));
    // k = lambda^2 / <a^-1/2>^2 + r0 is minimized over k / lambda at lambda = sqrt(r0) <a^-1/2>.
    CHECK(s.lambda_star == doctest::Approx(1.0 / std::sqrt(1.0 - eps * eps)).epsilon(1e-3));
    CHECK(s.locally_optimal);
    CHECK(s.k0 == doctest::Approx(1.0).epsilon(1e-4));
  }
  const auto scaled = make_cosine_medium(2.0, 0.5, 3.0, 1.0, true);
  CHECK(freidlin_gartner_speed(scaled, 2048).c_star ==
        doctest::Approx(2.0 * std::sqrt(3.0 * 0.75)).epsilon(2e-3));
}

TEST_CASE("minimal speed of an untuned medium matches the reference") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  const auto s = freidlin_gartner_speed(m, 2048);
  CHECK(s.c_star == doctest::Approx(frozen::c_star_eps05).epsilon(1e-5));
  CHECK(s.lambda_star == doctest::Approx(frozen::lambda_star_eps05).epsilon(1e-3));
  CHECK(s.bracket.first <= s.lambda_star);
  CHECK(s.bracket.second >= s.lambda_star);
  CHECK(s.evaluations > 10);
}

TEST_CASE("no spreading without positive growth") {
  const auto m = make_custom_medium(
      1.0, [](double) { return 1.0; }, [](double) { return -0.5; }, [](double) { return 1.0; });
  CHECK_THROWS_AS(freidlin_gartner_speed(m, 256), HypothesisViolated);
}

TEST_CASE("sandwich bounds") {
  const auto tuned = make_cosine_medium(1.0, 0.5, 1.0, 1.0, true);
  const auto b = sandwich_bounds(tuned);
  // r - w = r0, so both bounds collapse to the closed form.
  CHECK(b.lower == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
  CHECK(b.upper == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
  CHECK_FALSE(b.lower_degenerate);

  const auto untuned = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  const auto u = sandwich_bounds(untuned);
  CHECK(u.lower_degenerate);  // r - w = 1 - w dips below 0
  CHECK(u.lower == 0.0);
  CHECK(u.upper >= frozen::c_star_eps05);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 3; ++k) {
    const auto m = make_random_fourier_medium(rng, 1.0);
    const auto bounds = sandwich_bounds(m);
    const double c = freidlin_gartner_speed(m, 1024).c_star;
    CHECK(bounds.lower <= c + 1e-3);
    CHECK(c <= bounds.upper + 1e-3);
  }
}

TEST_CASE("large-period limit") {
  const auto base = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  const auto sweep = large_period_sweep(base, {16.0, 4.0, 8.0}, 256);
  REQUIRE(sweep.rows.size() == 3);
  CHECK(sweep.rows[0].L == 4.0);  // sorted
  CHECK(sweep.c_limit == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
  CHECK(sweep.rows[0].c_star == doctest::Approx(frozen::c_star_L4).epsilon(1e-5));
  CHECK(sweep.rows[1].c_star == doctest::Approx(frozen::c_star_L8).epsilon(1e-5));
  CHECK(sweep.rows[2].c_star == doctest::Approx(frozen::c_star_L16).epsilon(1e-5));
  for (const auto& row : sweep.rows) CHECK(row.deviation < 0.0);
  CHECK(sweep.fitted_slope == doctest::Approx(-2.0).epsilon(0.15));
  CHECK(sweep.warnings.empty());

  CHECK_THROWS_AS(large_period_sweep(make_cosine_medium(1.0, 0.5, 1.0, 1.0, true), {4.0}, 64),
                  std::invalid_argument);
}
