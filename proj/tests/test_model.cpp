#include <doctest.h>

#include <cmath>

#include "pinsker/ellipsoid.hpp"
#include "pinsker/model.hpp"

using namespace pinsker;

TEST_CASE("budgets") {
  CHECK(budget(Allocation({1.0, 1.0, 0.0})) == 2.0);
  CHECK(budget(UniformAllocation{3.0, 4}, 10) == 12.0);
  CHECK(budget(Allocation({0.5, 0.5})) == 1.0);
  CHECK(budget(UniformAllocation{2.0, std::nullopt}, 5) == 10.0);
  CHECK_THROWS_AS(Allocation({1.0, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(Allocation({INFINITY}), std::invalid_argument);
}

TEST_CASE("patterns") {
  const Allocation n({2.0, 2.0, 2.0});
  const Allocation p = apply_pattern(n, Pattern{{1, 0, 1}});
  CHECK(p[0] == 2.0);
  CHECK(p[1] == 0.0);
  CHECK(p[2] == 2.0);
  const Allocation same = apply_pattern(n, Pattern::ones(3));
  for (std::size_t i = 0; i < 3; ++i) CHECK(same[i] == n[i]);
  CHECK(apply_pattern(n, Pattern::zeros(3)).budget() == 0.0);
  CHECK(apply_pattern(n, Pattern{{1}}).budget() == 2.0);  // shorter pattern is zero-padded
  CHECK_THROWS_AS(apply_pattern(n, Pattern{{1, 2, 0}}), std::invalid_argument);

  const Allocation trunc = UniformAllocation{3.0, 2}.expand(5);
  const Allocation via_pattern = apply_pattern(UniformAllocation{3.0}.expand(5), Pattern::truncation(2, 5));
  for (std::size_t i = 0; i < 5; ++i) CHECK(trunc[i] == via_pattern[i]);
}

TEST_CASE("patterns never increase the budget") {
  const Allocation n({0.3, 1.7, 2.2, 0.0, 5.1});
  for (unsigned mask = 0; mask < 32; ++mask) {
    Pattern p = Pattern::zeros(5);
    for (unsigned i = 0; i < 5; ++i) p.delta[i] = (mask >> i) & 1u;
    CHECK(budget(apply_pattern(n, p)) <= budget(n));
  }
}

TEST_CASE("spec construction and validation") {
  const auto s = SequenceSpec::sobolev_ellipsoid(1.0, 0.5, 10, 4.0, 2.0);
  CHECK(s.dim() == 10);
  CHECK(s.a_at(3) == doctest::Approx(2.0 / 3.0));
  CHECK(s.sigma2_at(4) == doctest::Approx(8.0));
  CHECK(s.has_tail());
  CHECK(s.a_at(11) == doctest::Approx(2.0 / 11.0));

  CHECK_THROWS_AS(SequenceSpec::from_lists({1.0, 0.5}, {1.0}), InvalidSpec);
  CHECK_THROWS_AS(SequenceSpec::from_lists({1.0, 0.0}, {1.0, 1.0}), InvalidSpec);
  CHECK_THROWS_AS(SequenceSpec::from_lists({1.0}, {-1.0}), InvalidSpec);
  CHECK_THROWS_AS(SequenceSpec(ExplicitList{{1.0, 0.5}}, ExplicitList{{1.0, 1.0}}, 3), InvalidSpec);
  CHECK_THROWS_AS(SequenceSpec::sobolev_ellipsoid(0.0, 0.0, 5), InvalidSpec);
  CHECK_THROWS_AS(SequenceSpec::sobolev_ellipsoid(1.0, -0.5, 5), InvalidSpec);

  const auto up = SequenceSpec::from_lists({0.5, 1.0}, {1.0, 1.0});
  CHECK_FALSE(up.is_nonincreasing());
  CHECK_THROWS_AS(up.validate_monotone(), InvalidSpec);
  CHECK_THROWS_AS(ellipsoid::risk(up, Allocation({1.0, 1.0})), InvalidSpec);
}

TEST_CASE("default dimension meets the tail tolerance") {
  const SequenceSpec s(PowerLaw{1.0, 4.0}, PowerLaw{1.0, 0.0}, 0, 1e-9);
  double tail = 0.0;
  for (std::size_t i = s.dim() + 1; i < 50 * s.dim(); ++i) tail += std::pow(double(i), -4.0);
  CHECK(tail <= 1e-9);
  const SequenceSpec e(ExponentialLaw{1.0, 0.5}, PowerLaw{1.0, 0.0}, 0, 1e-10);
  CHECK(std::exp(-0.5 * double(e.dim() + 1)) / (1.0 - std::exp(-0.5)) <= 1e-10);
}

TEST_CASE("a_sq_tail matches direct summation") {
  const auto s = SequenceSpec::sobolev_hyperrect(1.0, 0.0, 50);
  double direct = 0.0;
  for (std::size_t i = 2000000; i > 20; --i) direct += std::pow(double(i), -3.0);
  const double tail_after_2e6 = 0.5 / (2e6 * 2e6);
  CHECK(s.a_sq_tail(20).value == doctest::Approx(direct + tail_after_2e6).epsilon(1e-10));
  const auto finite = SequenceSpec::from_lists({1.0, 0.5, 0.25}, {1.0, 1.0, 1.0});
  CHECK(finite.a_sq_tail(1).value == doctest::Approx(0.3125));
  CHECK(finite.a_sq_tail(3).value == 0.0);
}

TEST_CASE("normalize_spec") {
  const SequenceSpec s(PowerLaw{4.0, 2.0}, PowerLaw{1.0, 0.0}, 5);
  const auto norm = normalize_spec(s);
  CHECK(norm.scale_a == 4.0);
  CHECK(norm.scale_noise == 1.0);
  CHECK(norm.unit.a_at(1) == doctest::Approx(1.0));

  const auto id = normalize_spec(SequenceSpec(PowerLaw{1.0, 2.0}, PowerLaw{1.0, 1.0}, 5));
  CHECK(id.scale_a == 1.0);
  CHECK(id.scale_noise == 1.0);

  // R(n, C, c) = C R(n C / c, 1, 1)
  const SequenceSpec s23(PowerLaw{2.0, 2.0}, PowerLaw{3.0, 0.5}, 5);
  const auto n23 = normalize_spec(s23);
  CHECK(n23.scale_a == 2.0);
  CHECK(n23.scale_noise == 3.0);
  const std::vector<double> counts{3.0, 2.0, 1.5, 1.0, 0.5};
  std::vector<double> scaled(counts);
  for (double& v : scaled) v *= n23.scale_a / n23.scale_noise;
  const double lhs = ellipsoid::risk(s23, Allocation(counts)).risk;
  const double rhs = n23.scale_a * ellipsoid::risk(n23.unit, Allocation(scaled)).risk;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

  const auto lists = normalize_spec(SequenceSpec::from_lists({2.0, 1.0}, {3.0, 6.0}));
  CHECK(lists.scale_a == 4.0);
  CHECK(lists.unit.a_at(1) == doctest::Approx(1.0));
  CHECK(lists.unit.sigma2_at(2) == doctest::Approx(2.0));
}
