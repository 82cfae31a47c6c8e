#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pinsker/asymptotics.hpp"
#include "pinsker/ellipsoid.hpp"
#include "pinsker/hyperrect.hpp"

using namespace pinsker;

TEST_CASE("beta-sum asymptotics") {
  CHECK(beta_sum_asymptotic(1.0, 0.0, 1.0, 1e6) == doctest::Approx(5e5).epsilon(1e-13));
  CHECK(beta_sum_asymptotic(1.0, 0.0, 1.0, 1e6) ==
        doctest::Approx(oracle::beta_sum_direct(1.0, 0.0, 1.0, 1e6)).epsilon(1e-4));
  CHECK(beta_sum_asymptotic(1.0, 0.0, 0.0, 1e4) == doctest::Approx(1e4).epsilon(1e-13));
  CHECK(beta_sum_asymptotic(2.0, 1.0, 0.5, 1e6) ==
        doctest::Approx(oracle::beta_sum_direct(2.0, 1.0, 0.5, 1e6)).epsilon(1e-3));

  double previous = INFINITY;
  for (double M : {1e3, 1e4, 1e5, 1e6}) {
    const double rel = std::abs(beta_sum_asymptotic(1.0, 0.0, 1.0, M) /
                                    oracle::beta_sum_direct(1.0, 0.0, 1.0, M) -
                                1.0);
    CHECK(rel < previous);
    previous = rel;
  }
  // Lattice effects at the cutoff make the error oscillate for kappa < 1.
  for (double M : {1e3, 3e3, 1e4, 3e4, 1e5}) {
    CHECK(std::abs(beta_sum_asymptotic(2.0, 1.0, 0.5, M) / oracle::beta_sum_direct(2.0, 1.0, 0.5, M) - 1.0) <
          2e-3);
  }
  CHECK(std::abs(beta_sum_asymptotic(2.0, 1.0, 0.5, 1e7) / oracle::beta_sum_direct(2.0, 1.0, 0.5, 1e7) - 1.0) <
        1e-5);
  CHECK_THROWS_AS(beta_sum_asymptotic(0.0, 0.0, 1.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(beta_sum_asymptotic(1.0, -1.0, 1.0, 10.0), std::domain_error);
}

TEST_CASE("constants at (1, 0)") {
  CHECK(constant(Constant::Bbar_E, {1, 0}) ==
        doctest::Approx(std::cbrt(3.0) * std::pow(0.5, 2.0 / 3.0)).epsilon(1e-13));
  CHECK(constant(Constant::Bbar_H, {1, 0}) ==
        doctest::Approx(std::numbers::pi / std::sin(std::numbers::pi / 3.0) / 3.0).epsilon(1e-13));
  CHECK(constant(Constant::rho_H, {1, 0}) == doctest::Approx(1.31).epsilon(0.005 / 1.31));
  // B_E(1, 0): B(1, 3/2) = 2/3.
  CHECK(constant(Constant::B_E, {1, 0}) ==
        doctest::Approx(std::pow(4.0 / 9.0, 0.5) * std::pow(5.0 / 2.0, 0.5)).epsilon(1e-13));
  CHECK(constant(Constant::B_H, {1, 0}) == doctest::Approx(1.5 * std::sqrt(0.75)).epsilon(1e-13));
  for (const auto& c : constants({0.3, 2.5})) {
    CHECK(std::isfinite(c.value));
    CHECK(c.value > 0.0);
  }
  CHECK(constants({1, 0}).size() == 10);
  CHECK_THROWS_AS(constant(Constant::rho_E, {0.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(constant(Constant::rho_E, {1.0, -0.5}), std::domain_error);
}

TEST_CASE("closed forms at the table corners stay finite") {
  for (double a : kTableAlphas) {
    for (double b : kTableBetas) {
      for (Constant c : kAllConstants) CHECK(std::isfinite(constant(c, {a, b})));
    }
  }
}

TEST_CASE("composed and expanded ratios agree on a 50x50 grid") {
  for (int i = 0; i < 50; ++i) {
    const double a = 0.05 * std::pow(1000.0, i / 49.0);
    for (int j = 0; j < 50; ++j) {
      const double b = -0.45 + 10.45 * j / 49.0;
      CHECK(rho_ellipsoid(SobolevParams{a, b}) ==
            doctest::Approx(rho_ellipsoid_composed(SobolevParams{a, b})).epsilon(1e-10));
      CHECK(rho_hyperrect(SobolevParams{a, b}) ==
            doctest::Approx(rho_hyperrect_composed(SobolevParams{a, b})).epsilon(1e-10));
      const double bprime = (a + b + 1.0) / a *
                            std::pow(2.0 * a * constant(Constant::Bbar_H, {a, b}) / (2 * a + 2 * b + 1),
                                     (2 * a + 2 * b + 1) / (2 * a + 2 * b + 2));
      CHECK(constant(Constant::Bprime_H, {a, b}) == doctest::Approx(bprime).epsilon(1e-12));
    }
  }
}

TEST_CASE("reference values of the ratios") {
  CHECK(std::round(rho_ellipsoid({1, 0}) * 100) / 100 == doctest::Approx(1.16));
  CHECK(std::round(rho_ellipsoid({0.5, 0}) * 100) / 100 == doctest::Approx(1.15));
  CHECK(std::round(rho_ellipsoid({2, 0}) * 100) / 100 == doctest::Approx(1.13));
  CHECK(rho_ellipsoid({0.149, 1.079}) == doctest::Approx(0.998477).epsilon(5e-7));
  CHECK(std::round(rho_hyperrect({0.5, 0}) * 100) / 100 == doctest::Approx(1.46));
  CHECK(std::round(rho_hyperrect({1, 1}) * 100) / 100 == doctest::Approx(1.43));
  CHECK(std::round(rho_hyperrect({48, 10}) * 100) / 100 == doctest::Approx(3.91));
}

TEST_CASE("ratio tables") {
  const auto t1 = ratio_table(1);
  REQUIRE(t1.size() == 40);
  CHECK(t1[0].printed == doctest::Approx(1.15));
  const auto& cell = t1[2 * 8 + 0];  // beta = 1, alpha = 0.5
  CHECK(cell.decimals == 3);
  CHECK(cell.printed == doctest::Approx(1.004));
  for (const auto& c : t1) CHECK(c.value > 1.0);
  const auto t2 = ratio_table(2);
  CHECK(t2[3 * 8 + 7].printed == doctest::Approx(2.12));
  CHECK_THROWS_AS(ratio_table(3), std::invalid_argument);
}

TEST_CASE("contour study") {
  const auto res = contour_grid({.alpha_points = 120, .beta_points = 120});
  CHECK(res.grid.size() == 120 * 120);
  CHECK(res.minimum.value == doctest::Approx(0.998477).epsilon(1e-4));
  CHECK(std::abs(res.minimum.alpha - 0.149) <= 0.02);
  CHECK(std::abs(res.minimum.beta - 1.079) <= 0.02);
  CHECK(res.minimum.value <= res.grid_minimum.value);
  CHECK_FALSE(res.s_empty);
  CHECK(res.s_box.alpha_hi <= 0.3205);
  CHECK(res.s_box.beta_lo >= 0.7);
  CHECK(res.s_box.beta_hi <= 1.823);

  // Independent dense scan around the refined minimum.
  double best = INFINITY;
  for (int i = -200; i <= 200; ++i) {
    for (int j = -200; j <= 200; ++j) {
      best = std::min(best, rho_ellipsoid({res.minimum.alpha + i * 1e-4, res.minimum.beta + j * 1e-4}));
    }
  }
  CHECK(res.minimum.value <= best + 1e-12);
}

TEST_CASE("beta inequalities") {
  const auto e = beta_inequality_ellipsoid({1, 0});
  CHECK(e.lhs == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(e.holds);
  const auto tight = beta_inequality_ellipsoid({0.149, 1.079});
  CHECK(std::abs(tight.lhs / tight.rhs - 1.0) < 1e-2);

  const auto h = beta_inequality_hyperrect({1, 0});
  CHECK(h.lhs == doctest::Approx(2.0 * std::numbers::pi / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(h.rhs == doctest::Approx(2.53125).epsilon(1e-14));
  CHECK(h.holds);
  const auto big = beta_inequality_hyperrect({1e3, 0});
  CHECK(big.lhs / big.rhs > 1.0);

  // lhs <= rhs exactly when rho_E >= rho_o.
  for (double a : {0.1, 0.5, 2.0, 10.0}) {
    for (double b : {-0.3, 0.0, 1.0, 5.0}) {
      const auto c = beta_inequality_ellipsoid({a, b}, 1.05);
      CHECK(c.holds == (rho_ellipsoid({a, b}) >= 1.05));
      CHECK(beta_inequality_hyperrect({a, b}).holds == (rho_hyperrect({a, b}) >= 1.0));
    }
  }
}

TEST_CASE("inequality sweeps") {
  const auto h = sweep_beta_inequality_hyperrect();
  CHECK(h.points == 40000);
  CHECK(h.violations.empty());
  CHECK(h.worst_margin > 0.0);
  const auto e = sweep_beta_inequality_ellipsoid();
  CHECK(e.points == 40000);
  // A violation here would be a counterexample to a conjecture, not a defect.
  if (!e.violations.empty()) MESSAGE("ellipsoid beta conjecture violated at " << e.violations.size() << " points");
  const auto strict = sweep_beta_inequality_ellipsoid({}, 1.2);
  CHECK_FALSE(strict.violations.empty());
}

TEST_CASE("rho_H >= 1 over the sweep grid") {
  for (int i = 0; i < 200; ++i) {
    const double a = 0.05 * std::pow(1000.0, i / 199.0);
    for (int j = 0; j < 200; ++j) {
      const double b = -0.45 + 10.45 * j / 199.0;
      CHECK(rho_hyperrect({a, b}) >= 1.0);
    }
  }
}

TEST_CASE("finite-n risks drift toward the constants") {
  const SobolevParams p{1, 0};
  const auto E = SequenceSpec::sobolev_ellipsoid(1.0, 0.0, 20000);
  const auto H = SequenceSpec::sobolev_hyperrect(1.0, 0.0, 0);
  double prev[4] = {INFINITY, INFINITY, INFINITY, INFINITY};
  for (double n : {1e3, 1e4, 1e5, 1e6}) {
    const double gaps[4] = {
        std::abs(std::pow(n, 2.0 / 3.0) * ellipsoid::risk(E, UniformAllocation{n}.expand(E.dim())).risk /
                     constant(Constant::Bbar_E, p) - 1.0),
        std::abs(std::sqrt(n) * ellipsoid::suboptimal_allocation(E, n).risk / constant(Constant::B_E, p) - 1.0),
        std::abs(std::sqrt(n) * hyperrect::optimal_allocation(H, n).risk / constant(Constant::B_H, p) - 1.0),
        std::abs(std::pow(n, 2.0 / 3.0) * hyperrect::uniform_risk(H, n) / constant(Constant::Bbar_H, p) - 1.0)};
    for (int k = 0; k < 4; ++k) {
      CHECK(gaps[k] < prev[k]);
      prev[k] = gaps[k];
    }
  }
  for (double g : prev) CHECK(g <= 0.05);
}

namespace {

// Limit of n^(1/2) inf_{kd <= n} R(n_ut(k, d), H) for alpha = 1, beta = 0:
// with d = x n^(1/4), the scaled risk tends to x^2 int_0^1 du / (1 + x^4 u^3) + 1 / (2 x^2).
double truncated_uniform_limit_1_0() {
  auto f = [](double x) {
    const int m = 4000;
    const double lam = std::pow(x, 4);
    double s = 0.0;
    for (int j = 0; j <= m; ++j) {
      const double u = double(j) / m;
      const double w = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      s += w / (1.0 + lam * u * u * u);
    }
    return x * x * s / (3.0 * m) + 0.5 / (x * x);
  };
  double lo = 0.2, hi = 5.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (f(m1) < f(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return f(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("hyperrect truncated uniform: exact limit and the B'_H relaxation") {
  const auto H = SequenceSpec::sobolev_hyperrect(1.0, 0.0, 0);
  const double bprime = constant(Constant::Bprime_H, {1, 0});
  const double exact = truncated_uniform_limit_1_0();
  // B'_H bounds the truncated risk by R(n_u(k), H) plus the tail beyond d,
  // which double-counts sum_{i>d} a_i^2 sigma_i^2 / (k a_i^2 + sigma_i^2).
  CHECK(exact < bprime);

  double prev = INFINITY;
  for (double n : {1e3, 1e4, 1e5, 1e6}) {
    const double g = std::abs(std::sqrt(n) * hyperrect::truncated_uniform_best(H, n).risk / exact - 1.0);
    CHECK(g < prev);
    prev = g;
  }
  CHECK(prev < 0.03);

  const double n = 1e6;
  double relaxed = INFINITY;
  for (std::size_t d = 1; d <= 130; ++d) {
    relaxed = std::min(relaxed, hyperrect::uniform_risk(H, n / double(d)) + H.a_sq_tail(d).value);
  }
  CHECK(std::sqrt(n) * relaxed == doctest::Approx(bprime).epsilon(0.03));
}

TEST_CASE("sparse conjecture") {
  const std::vector<double> ones{1.0, 1.0, 1.0};
  const auto c = sparse_conjecture(ones, 3, 100, 6.0);
  CHECK(c.alloc.size() == 100);
  CHECK(c.alloc[0] == doctest::Approx(2.0));
  CHECK(c.alloc[2] == doctest::Approx(2.0));
  CHECK(c.alloc[3] == 0.0);
  CHECK(c.risk == doctest::Approx(2.0 * std::log(100.0) * 9.0 / 6.0));
  CHECK(SparseConjecture::conjecture);

  const std::vector<double> two{2.0, 1.0};
  const auto d = sparse_conjecture(two, 2, 10, 3.0);
  CHECK(d.alloc[0] == doctest::Approx(2.0));
  CHECK(d.alloc[1] == doctest::Approx(1.0));
  CHECK(d.risk == doctest::Approx(2.0 * std::log(10.0) * 9.0 / 3.0));
  CHECK(sparse_conjectured_risk(two, 2, 10, d.alloc) == doctest::Approx(d.risk));
  // Any other split of the budget is worse.
  for (double x = 0.1; x < 3.0; x += 0.1) {
    CHECK(sparse_conjectured_risk(two, 2, 10, Allocation({x, 3.0 - x})) >= d.risk - 1e-12);
  }
  CHECK_THROWS_AS(sparse_conjecture(two, 2, 2, 3.0), std::domain_error);
  CHECK_THROWS_AS(sparse_conjecture(std::vector<double>{1.0, 2.0}, 2, 10, 3.0), std::domain_error);
}
