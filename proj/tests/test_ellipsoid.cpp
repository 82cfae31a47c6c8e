#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pinsker/ellipsoid.hpp"
#include "pinsker/montecarlo.hpp"

using namespace pinsker;

namespace {

struct Instance {
  std::vector<double> a, s2, n;
};

Instance random_instance(std::mt19937_64& gen, std::size_t D) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Instance in;
  for (std::size_t i = 0; i < D; ++i) {
    in.a.push_back(u(gen) * 3.0);
    in.s2.push_back(u(gen) * 4.0);
    in.n.push_back(u(gen) * 10.0);
  }
  std::sort(in.a.rbegin(), in.a.rend());
  return in;
}

double oracle_risk_or_inf(const Instance& in, const std::vector<double>& n) {
  const double t = oracle::ellipsoid_t(in.a, in.s2, n);
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0.0 && in.a[i] > t) return std::numeric_limits<double>::infinity();
  }
  return oracle::ellipsoid_risk(in.a, in.s2, n);
}

}  // namespace

TEST_CASE("two-coordinate example") {
  const auto spec = SequenceSpec::from_lists({1.0, 0.5}, {1.0, 1.0});
  const auto sol = ellipsoid::risk(spec, Allocation({1.0, 1.0}));
  CHECK(sol.t == doctest::Approx(0.5));
  CHECK(sol.risk == doctest::Approx(0.5));
  CHECK(sol.active_dim == 1);
  CHECK(sol.lambda[0] == doctest::Approx(0.5));
  CHECK(sol.lambda[1] == 0.0);
  CHECK(sol.theta_sq[0] == doctest::Approx(1.0));
  CHECK(sol.theta_sq[1] == 0.0);
  CHECK(sol.effective_budget == doctest::Approx(1.0));
  CHECK(ellipsoid::solve_t_bisection(spec, Allocation({1.0, 1.0})) == doctest::Approx(0.5));
}

TEST_CASE("single coordinate closed form") {
  // t = s2 (1 - t/a) / (n a)  =>  t = s2 a / (n a^2 + s2)
  const auto spec = SequenceSpec::from_lists({2.0}, {3.0});
  const auto sol = ellipsoid::risk(spec, Allocation({5.0}));
  CHECK(sol.t == doctest::Approx(3.0 * 2.0 / (5.0 * 4.0 + 3.0)));
  CHECK(sol.risk == doctest::Approx(4.0 * 3.0 / (5.0 * 4.0 + 3.0)));
}

TEST_CASE("errors: empty and unobserved coordinates") {
  const auto spec = SequenceSpec::from_lists({1.0, 0.9}, {1.0, 1.0});
  CHECK_THROWS_AS(ellipsoid::risk(spec, Allocation({0.0, 0.0})), EmptyAllocation);
  CHECK_THROWS_AS(ellipsoid::risk(spec, Allocation({1.0, 0.0})), InfiniteRisk);
  // a_2 = t exactly: the coordinate is inactive and the risk is finite.
  const auto edge = SequenceSpec::from_lists({1.0, 0.5}, {1.0, 1.0});
  CHECK(ellipsoid::risk(edge, Allocation({1.0, 0.0})).risk == doctest::Approx(0.5));
  CHECK_THROWS_AS(ellipsoid::suboptimal_allocation(edge, 0.0), std::invalid_argument);
}

TEST_CASE("random instances: exact t, bisection, oracle and saddle point") {
  std::mt19937_64 gen(7);
  for (int rep = 0; rep < 40; ++rep) {
    const Instance in = random_instance(gen, 1 + rep % 5);
    const auto spec = SequenceSpec::from_lists(in.a, in.s2);
    const Allocation alloc(in.n);
    const auto sol = ellipsoid::risk(spec, alloc);
    CHECK(sol.t == doctest::Approx(ellipsoid::solve_t_bisection(spec, alloc)).epsilon(1e-10));
    CHECK(sol.t == doctest::Approx(oracle::ellipsoid_t(in.a, in.s2, in.n)).epsilon(1e-10));
    CHECK(sol.risk == doctest::Approx(oracle::ellipsoid_risk(in.a, in.s2, in.n)).epsilon(1e-10));

    // Least favourable theta lies on the boundary and attains the risk.
    double q = 0.0;
    for (std::size_t i = 0; i < in.a.size(); ++i) q += sol.theta_sq[i] / (in.a[i] * in.a[i]);
    CHECK(q == doctest::Approx(1.0).epsilon(1e-10));
    const std::size_t steps = in.a.size() <= 3 ? 200 : 20;
    CHECK(oracle::ellipsoid_sup(in.a, in.s2, in.n, steps) ==
          doctest::Approx(sol.risk).epsilon(1e-9));

    // lambda_o is the Bayes weight at theta_o.
    for (std::size_t i = 0; i < in.a.size(); ++i) {
      if (sol.theta_sq[i] > 0.0) {
        const double bayes = in.n[i] * sol.theta_sq[i] / (in.n[i] * sol.theta_sq[i] + in.s2[i]);
        CHECK(sol.lambda[i] == doctest::Approx(bayes).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("sub-optimal allocation") {
  const auto spec = SequenceSpec::from_lists({1.0, 0.5}, {1.0, 1.0});
  const auto sub = ellipsoid::suboptimal_allocation(spec, 2.0);
  CHECK(sub.t_s == doctest::Approx(15.0 / 31.0));
  CHECK(sub.alloc[0] == doctest::Approx(1.6));
  CHECK(sub.alloc[1] == doctest::Approx(0.4));
  CHECK(sub.risk == doctest::Approx(25.0 / 62.0));
  CHECK(sub.active_dim == 2);

  const auto narrow = SequenceSpec::from_lists({1.0, 0.1}, {1.0, 1.0});
  const auto s1 = ellipsoid::suboptimal_allocation(narrow, 1.0);
  CHECK(s1.alloc[0] == doctest::Approx(1.0));
  CHECK(s1.alloc[1] == 0.0);
  CHECK(s1.risk == doctest::Approx(0.5));
}

TEST_CASE("sub-optimal risk bounds the exact risk of its allocation") {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 30; ++rep) {
    const Instance in = random_instance(gen, 2 + rep % 4);
    const auto spec = SequenceSpec::from_lists(in.a, in.s2);
    const double n = 0.5 + rep;
    const auto sub = ellipsoid::suboptimal_allocation(spec, n);
    CHECK(sub.alloc.budget() == doctest::Approx(n).epsilon(1e-12));
    CHECK(ellipsoid::risk(spec, sub.alloc).risk <= sub.risk * (1.0 + 1e-12));
  }
}

TEST_CASE("numeric optimum: two-coordinate boundary case") {
  const auto spec = SequenceSpec::from_lists({1.0, 0.5}, {1.0, 1.0});
  const auto num = ellipsoid::optimal_allocation(spec, 2.0);
  CHECK(num.risk == doctest::Approx(0.375).epsilon(1e-6));
  CHECK(num.risk <= num.suboptimal_risk);
  CHECK(num.alloc.budget() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("numeric optimum agrees with a simplex grid oracle") {
  std::mt19937_64 gen(23);
  for (int rep = 0; rep < 12; ++rep) {
    const Instance in = random_instance(gen, 2 + rep % 2);
    const auto spec = SequenceSpec::from_lists(in.a, in.s2);
    const double n = 1.0 + 2.0 * rep;
    const auto num = ellipsoid::optimal_allocation(spec, n, {1, in.a.size()});
    const auto ref = oracle::simplex_grid_minimize(
        [&](const std::vector<double>& x) { return oracle_risk_or_inf(in, x); }, in.a.size(), n,
        in.a.size() == 2 ? 1000 : 200);
    CHECK(num.risk <= num.suboptimal_risk + 1e-12);
    CHECK(num.risk == doctest::Approx(ref.value).epsilon(1e-6));
  }
}

TEST_CASE("stationary allocation never beats the numeric optimum") {
  const auto spec = SequenceSpec::sobolev_ellipsoid(1.0, 0.0, 200);
  const double n = 500.0;
  const Allocation st = ellipsoid::stationary_allocation(spec, n);
  CHECK(st.budget() == doctest::Approx(n).epsilon(1e-12));
  const auto num = ellipsoid::optimal_allocation(spec, n);
  double st_risk = std::numeric_limits<double>::infinity();
  try {
    st_risk = ellipsoid::risk(spec, st).risk;
  } catch (const InfiniteRisk&) {
  }
  CHECK(num.risk <= st_risk + 1e-12);
}

TEST_CASE("effective budget of the uniform allocation") {
  const auto spec = SequenceSpec::sobolev_ellipsoid(1.0, 0.0, 2000);
  const double k = 1000.0;
  const auto sol = ellipsoid::risk(spec, UniformAllocation{k}.expand(spec.dim()));
  const auto [eb, d] = ellipsoid::effective_budget(spec, UniformAllocation{k}.expand(spec.dim()));
  CHECK(d == sol.active_dim);
  CHECK(eb == doctest::Approx(k * static_cast<double>(d)));
  CHECK(spec.a_at(d) > sol.t);
  CHECK(spec.a_at(d + 1) <= sol.t);
  // Zeroing the inactive coordinates leaves the risk unchanged.
  const auto trimmed = ellipsoid::risk(spec, UniformAllocation{k, d}.expand(spec.dim()));
  CHECK(trimmed.risk == doctest::Approx(sol.risk).epsilon(1e-12));
  CHECK(sol.truncation_exact);
}

TEST_CASE("truncation flag") {
  const auto small = SequenceSpec::sobolev_ellipsoid(1.0, 0.0, 3);
  const auto sol = ellipsoid::risk(small, UniformAllocation{1e6}.expand(3));
  CHECK_FALSE(sol.truncation_exact);
}

TEST_CASE("adversarial check on the two-coordinate example") {
  const auto spec = SequenceSpec::from_lists({1.0, 0.5}, {1.0, 1.0});
  const auto rep = adversarial_check(spec, Allocation({1.0, 1.0}), 2000, 3);
  CHECK(rep.max_gap <= 1e-12);
  CHECK(rep.max_gap > -1e-3);
  CHECK(rep.saddle_value == doctest::Approx(0.5));
}
