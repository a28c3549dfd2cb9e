#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "kpp/coordinate_map.hpp"
#include "kpp/media.hpp"

using namespace kpp;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("cosine medium coefficients") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  CHECK(m.a(0.0) == doctest::Approx(2.25));
  CHECK(m.a(0.5) == doctest::Approx(0.25));
  CHECK(m.r(0.3) == 1.0);
  CHECK(m.b(0.7) == 1.0);
  CHECK_FALSE(m.tuned());
  CHECK(m.constant_growth.has_value());
  CHECK(m.reaction(0.2, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("correction term of the cosine medium at a quarter period") {
  // a = (1 + cos(2 pi x)/2)^2: at x = 1/4, a = 1, a' = -2 pi, a'' = 2 pi^2,
  // so w = (2 pi^2 - pi^2) / 4.
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  CHECK(correction_w(m, 0.25) == doctest::Approx(pi * pi / 4.0).epsilon(1e-13));
  // Equivalent form w = 1/3 a^{1/4} (a^{3/4})'' via finite differences.
  const double d = 1e-4;
  auto g = [&](double x) { return std::pow(m.a(x), 0.75); };
  const double x = 0.13;
  const double alt = std::pow(m.a(x), 0.25) * (g(x + d) - 2 * g(x) + g(x - d)) / (d * d) / 3.0;
  CHECK(correction_w(m, x) == doctest::Approx(alt).epsilon(1e-6));
}

TEST_CASE("tuned media satisfy r = r0 + w and b = b0 a^(1/4)") {
  const auto m = make_cosine_medium(2.0, 0.3, 1.5, 0.5, true);
  REQUIRE(m.tuned());
  CHECK(*m.r0 == 1.5);
  CHECK(*m.b0 == 0.5);
  for (double x : {0.0, 0.37, 1.1, 1.9}) {
    CHECK(m.r(x) == doctest::Approx(1.5 + correction_w(m, x)).epsilon(1e-14));
    CHECK(m.b(x) == doctest::Approx(0.5 * std::pow(m.a(x), 0.25)).epsilon(1e-14));
  }
  // eps = 0 is the homogeneous medium.
  const auto flat = make_cosine_medium(1.0, 0.0, 1.0, 1.0, true);
  CHECK(flat.a(0.3) == 1.0);
  CHECK(flat.r(0.3) == doctest::Approx(1.0));
}

TEST_CASE("invalid media are rejected") {
  CHECK_THROWS_AS(make_cosine_medium(1.0, 1.0, 1.0, 1.0, true), std::invalid_argument);
  CHECK_THROWS_AS(make_cosine_medium(-1.0, 0.5, 1.0, 1.0, true), std::invalid_argument);
  CHECK_THROWS_AS(make_cosine_medium(1.0, 0.5, 0.0, 1.0, true), std::invalid_argument);
  CHECK_THROWS_AS(make_cosine_medium(1.0, 0.5, 1.0, -2.0, false), std::invalid_argument);
  // Not periodic with the declared period.
  CHECK_THROWS_AS(make_custom_medium(
                      1.0, [](double x) { return 1.0 + 0.1 * std::sin(pi * x); },
                      [](double) { return 1.0; }, [](double) { return 1.0; }),
                  std::invalid_argument);
  // a must stay positive.
  CHECK_THROWS_AS(make_custom_medium(
                      1.0, [](double x) { return std::cos(2 * pi * x); }, [](double) { return 1.0; },
                      [](double) { return 1.0; }),
                  std::invalid_argument);
}

TEST_CASE("derivatives are consistent with finite differences to second order") {
  const auto m = make_cosine_medium(1.0, 0.5, 1.0, 1.0, true);
  CHECK(derivative_consistency_order(m, 1e-2) == doctest::Approx(2.0).epsilon(0.05));

  const auto custom = make_custom_medium(
      1.0, [](double x) { return 2.0 + std::sin(2 * pi * x); }, [](double) { return 1.0; },
      [](double) { return 1.0; });
  CHECK(custom.da(0.1) == doctest::Approx(2 * pi * std::cos(2 * pi * 0.1)).epsilon(1e-8));
  CHECK(custom.d2a(0.1) == doctest::Approx(-4 * pi * pi * std::sin(2 * pi * 0.1)).epsilon(1e-5));
}

TEST_CASE("table medium interpolates tabulated diffusion") {
  const int N = 128;
  std::vector<double> x(N), a(N);
  for (int i = 0; i < N; ++i) {
    x[i] = static_cast<double>(i) / N;
    const double q = 1.0 + 0.4 * std::cos(2 * pi * x[i]);
    a[i] = q * q;
  }
  const auto table = make_table_medium(1.0, x, a, 1.0, 1.0, true);
  const auto exact = make_cosine_medium(1.0, 0.4, 1.0, 1.0, true);
  for (double s : {0.013, 0.25, 0.61, 0.999}) {
    CHECK(table.a(s) == doctest::Approx(exact.a(s)).epsilon(1e-6));
    CHECK(table.da(s) == doctest::Approx(exact.da(s)).epsilon(1e-3));
  }
  CHECK(build_coordinate_map(table).mean_inv_sqrt_a() ==
        doctest::Approx(1.0 / std::sqrt(1.0 - 0.16)).epsilon(1e-7));

  std::vector<double> uneven = x;
  uneven[3] += 1e-3;
  CHECK_THROWS_AS(make_table_medium(1.0, uneven, a, 1.0, 1.0, true), std::invalid_argument);
}

TEST_CASE("fourier and random media") {
  const FourierSeries a{2.0, 1.0, {0.2, 0.05}, {0.1}};
  const FourierSeries r{2.0, 0.8, {}, {0.3}};
  const auto m = make_fourier_medium(a, r, 2.0);
  CHECK(m.a(0.0) == doctest::Approx(1.25));
  CHECK(m.da(0.5) == doctest::Approx(a.d1(0.5)));
  CHECK(m.r(0.5) == doctest::Approx(0.8 + 0.3));
  CHECK_FALSE(m.constant_growth.has_value());

  std::mt19937_64 rng(7);
  for (int k = 0; k < 5; ++k) {
    const auto rm = make_random_fourier_medium(rng, 1.0);
    double a_min = 1e9, q_min = 1e9;
    for (int i = 0; i < 1000; ++i) {
      const double s = i / 1000.0;
      a_min = std::min(a_min, rm.a(s));
      q_min = std::min(q_min, rm.r(s) - correction_w(rm, s));
    }
    CHECK(a_min >= 0.6 - 1e-12);
    CHECK(q_min >= 0.2 - 1e-6);
  }
  std::mt19937_64 first(11), second(11);
  const auto m1 = make_random_fourier_medium(first, 1.0);
  const auto m2 = make_random_fourier_medium(second, 1.0);
  CHECK(m1.a(0.3) == m2.a(0.3));
  CHECK(m1.r(0.7) == m2.r(0.7));
}

TEST_CASE("rescaling the period") {
  const auto base = make_cosine_medium(1.0, 0.5, 1.0, 1.0, false);
  const auto big = rescale_period(base, 4.0);
  CHECK(big.period == 4.0);
  CHECK(big.a(2.0) == doctest::Approx(base.a(0.5)));
  CHECK(big.da(1.0) == doctest::Approx(base.da(0.25) / 4.0));
  CHECK(big.d2a(1.0) == doctest::Approx(base.d2a(0.25) / 16.0));
  CHECK(big.constant_growth.has_value());
}

TEST_CASE("general KPP nonlinearities and structure checks") {
  auto a = [](double) { return 1.0; };
  auto zero = [](double) { return 0.0; };
  const auto good = make_general_kpp_medium(1.0, a, zero, zero, [](double) { return 1.0; },
                                            [](double, double u) { return u * (1.0 - u * u); });
  CHECK(check_kpp_structure(good).empty());
  CHECK(stationary_upper_bound(good) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(good.reaction_du(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-6));

  // f/u = u (1 - u) increases near 0: not KPP.
  const auto bad = make_general_kpp_medium(1.0, a, zero, zero, [](double) { return 0.0; },
                                           [](double, double u) { return u * u * (1.0 - u); });
  CHECK_FALSE(check_kpp_structure(bad, 8, 16, 1.0).empty());

  const auto logistic = make_cosine_medium(1.0, 0.5, 2.0, 0.5, false);
  CHECK(stationary_upper_bound(logistic) == doctest::Approx(4.0));
}

TEST_CASE("diffusive coordinate of the cosine medium") {
  for (double eps : {0.0, 0.3, 0.5, 0.9}) {
    const auto m = make_cosine_medium(2.0, eps, 1.0, 1.0, true);
    const auto map = build_coordinate_map(m);
    // <a^{-1/2}> = 1 / sqrt(1 - eps^2).
    CHECK(map.mean_inv_sqrt_a() == doctest::Approx(1.0 / std::sqrt(1.0 - eps * eps)).epsilon(1e-10));
    CHECK(map.big_lambda() == doctest::Approx(2.0 / std::sqrt(1.0 - eps * eps)).epsilon(1e-10));
    CHECK(map.h(0.0) == 0.0);
    CHECK(map.h(2.0 + 0.3) == doctest::Approx(map.h(0.3) + map.big_lambda()).epsilon(1e-14));
    CHECK(map.h(-0.7) == doctest::Approx(map.h(1.3) - map.big_lambda()).epsilon(1e-14));
  }
  const auto flat = build_coordinate_map(make_cosine_medium(1.0, 0.0, 1.0, 1.0, false));
  CHECK(flat.h(0.37) == doctest::Approx(0.37).epsilon(1e-14));
  CHECK_THROWS_AS(build_coordinate_map(make_cosine_medium(1.0, 0.5, 1.0, 1.0, false), 32),
                  std::invalid_argument);
}

TEST_CASE("diffusive coordinate round trip (randomized)") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pick(-30.0, 30.0);
  const auto map = build_coordinate_map(make_cosine_medium(1.5, 0.8, 1.0, 1.0, true));
  for (int i = 0; i < 500; ++i) {
    const double x = pick(rng);
    CHECK(map.inverse(map.h(x)) == doctest::Approx(x).epsilon(1e-12).scale(1.0));
    const double y = pick(rng);
    CHECK(map.h(invert_coordinate(map, y)) == doctest::Approx(y).epsilon(1e-12).scale(1.0));
  }
}
