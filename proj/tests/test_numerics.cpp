#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "oracles.hpp"
#include "pinsker/numerics.hpp"

using namespace pinsker;

TEST_CASE("log_gamma agrees with libm lgamma over [1e-3, 1e3]") {
  for (double x = 1e-3; x <= 1e3; x *= 1.07) {
    const double ref = std::lgamma(x);
    CHECK(std::abs(log_gamma(x) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("log_gamma special values") {
  CHECK(std::exp(log_gamma(0.5)) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  double fact = 1.0;
  for (int n = 1; n <= 20; ++n) {
    CHECK(std::exp(log_gamma(n)) == doctest::Approx(fact).epsilon(1e-13));
    fact *= n;
  }
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
  CHECK_THROWS_AS(log_gamma(NAN), std::domain_error);
}

TEST_CASE("beta function against reflection and quadrature") {
  CHECK(beta(2.0 / 3.0, 1.0 / 3.0) ==
        doctest::Approx(std::numbers::pi / std::sin(std::numbers::pi / 3.0)).epsilon(1e-13));
  CHECK(beta(1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
  for (auto [x, y] : {std::pair{2.5, 1.5}, {0.7, 3.2}, {1.0, 1.5}, {4.0, 0.5}, {0.6, 0.6}}) {
    CHECK(beta(x, y) == doctest::Approx(oracle::beta_quadrature(x, y)).epsilon(1e-11));
  }
  CHECK(log_beta(220.0, 0.5) == doctest::Approx(std::lgamma(220.0) + std::lgamma(0.5) -
                                                std::lgamma(220.5))
                                    .epsilon(1e-12));
}

TEST_CASE("compensated sum keeps small terms") {
  CompensatedSum s;
  s += 1.0;
  for (int i = 0; i < 1000; ++i) s += 1e-16;
  s += -1.0;
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
}

TEST_CASE("bracketed root finding") {
  auto f = [](double x) { return x * x - 2.0; };
  CHECK(solve_bracketed(f, make_bracket(f, 0.0, 2.0), 0.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  auto step = [](double x) { return x < 0.3 ? -1.0 : 1.0; };
  CHECK(solve_bracketed(step, make_bracket(step, 0.0, 1.0), 1e-12) ==
        doctest::Approx(0.3).epsilon(1e-11));
  auto flat = [](double x) { return std::pow(x - 0.7, 3); };
  CHECK(solve_bracketed(flat, make_bracket(flat, 0.0, 1.0), 1e-14) ==
        doctest::Approx(0.7).epsilon(1e-12));
  CHECK_THROWS_AS(make_bracket(f, 2.0, 3.0), NoSignChange);
}

TEST_CASE("golden-section minimisation") {
  auto f = [](double x) { return (x - 1.3) * (x - 1.3) + 2.0; };
  CHECK(minimize_golden(f, -5.0, 5.0, 1e-12) == doctest::Approx(1.3).epsilon(1e-8));
}

TEST_CASE("projection onto the simplex") {
  const std::vector<double> y{0.5, 2.0, -1.0, 0.1};
  const auto x = project_to_simplex(y, 1.0);
  CHECK(std::accumulate(x.begin(), x.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double v : x) CHECK(v >= 0.0);
  CHECK(x[1] == doctest::Approx(1.0));
  const std::vector<double> inside{0.2, 0.3, 0.5};
  const auto same = project_to_simplex(inside, 1.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(same[i] == doctest::Approx(inside[i]).epsilon(1e-15));
}

TEST_CASE("Nelder-Mead on the simplex finds interior and boundary optima") {
  const std::vector<double> c{0.5, 0.3, 0.2};
  auto quad = [&](std::span<const double> x) {
    double r = 0.0;
    for (std::size_t i = 0; i < 3; ++i) r += (x[i] - c[i]) * (x[i] - c[i]);
    return r;
  };
  const std::vector<double> start{1.0 / 3, 1.0 / 3, 1.0 / 3};
  auto res = minimize_simplex(quad, 3, 1.0, start, 1e-14);
  for (std::size_t i = 0; i < 3; ++i) CHECK(res.x[i] == doctest::Approx(c[i]).epsilon(1e-6));

  // Optimum on a face: target outside the simplex.
  auto lin = [](std::span<const double> x) { return x[0] + 2.0 * x[1] + 3.0 * x[2]; };
  const std::vector<double> start2{2.0 / 3, 2.0 / 3, 2.0 / 3};
  res = minimize_simplex(lin, 3, 2.0, start2, 1e-14);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(res.value <= lin(start2));
}

TEST_CASE("series summation") {
  auto inv_sq = [](std::size_t i) { return 1.0 / (static_cast<double>(i) * i); };
  auto s = sum_series(inv_sq, 1, TailPolicy::power(2.0), 1e-12);
  CHECK(s.value == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-12));
  CHECK(s.tail_bound <= 1e-12);

  auto p3 = [](std::size_t i) { return std::pow(static_cast<double>(i), -3.0); };
  CHECK(sum_series(p3, 1, TailPolicy::power(3.0), 1e-13).value ==
        doctest::Approx(1.2020569031595942).epsilon(1e-12));

  auto geo = [](std::size_t i) { return std::ldexp(1.0, -static_cast<int>(i)); };
  CHECK(sum_series(geo, 1, TailPolicy::cutoff(), 1e-15).value == doctest::Approx(1.0).epsilon(1e-14));

  auto harmonic = [](std::size_t i) { return 1.0 / static_cast<double>(i); };
  CHECK_THROWS_AS(sum_series(harmonic, 1, TailPolicy::power(1.0), 1e-8), std::domain_error);
  CHECK_THROWS_AS(sum_series(harmonic, 1, TailPolicy::cutoff(), 1e-8, 1 << 12), SeriesDivergence);
  auto growing = [](std::size_t i) { return static_cast<double>(i); };
  CHECK_THROWS_AS(sum_series(growing, 1, TailPolicy::power(2.0), 1e-8), SeriesDivergence);
}
