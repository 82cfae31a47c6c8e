#include <algorithm>
#include <cmath>
#include <numbers>

#include "commands.hpp"
#include "pinsker/asymptotics.hpp"
#include "pinsker/ellipsoid.hpp"
#include "pinsker/hyperrect.hpp"
#include "pinsker/io.hpp"
#include "pinsker/montecarlo.hpp"

namespace pinsker::cli {

namespace {

using json = nlohmann::json;

enum class Kind { invariant, conjecture, statistical };

struct Report {
  json checks = json::array();
  bool hard_failure = false;

  // passed = value <= tolerance
  void add(const std::string& name, Kind kind, double value, double tolerance, json extra = {}) {
    const bool passed = value <= tolerance;
    json c = {{"name", name},
              {"kind", kind == Kind::invariant     ? "invariant"
                       : kind == Kind::conjecture ? "conjecture"
                                                  : "statistical"},
              {"value", std::isfinite(value) ? json(value) : json(nullptr)},
              {"tolerance", tolerance},
              {"passed", passed}};
    if (!extra.is_null()) c["details"] = std::move(extra);
    checks.push_back(std::move(c));
    if (!passed && kind != Kind::conjecture) hard_failure = true;
  }
};

double rel(double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }

std::vector<double> sweep_alphas(std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(0.05 * std::pow(1000.0, double(i) / double(n - 1)));
  return out;
}

std::vector<double> sweep_betas(std::size_t n) {
  std::vector<double> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(-0.45 + 10.45 * double(j) / double(n - 1));
  return out;
}

void identities(Report& r, std::uint64_t seed) {
  double rho_e = 0.0, rho_h = 0.0, bprime = 0.0;
  for (double a : sweep_alphas(50)) {
    for (double b : sweep_betas(50)) {
      const SobolevParams p{a, b};
      rho_e = std::max(rho_e, rel(rho_ellipsoid_composed(p), rho_ellipsoid(p)));
      rho_h = std::max(rho_h, rel(rho_hyperrect_composed(p), rho_hyperrect(p)));
      const double s = 2 * a + 2 * b + 1;
      const double direct = (a + b + 1) / a *
                            std::pow(2 * a * constant(Constant::Bbar_H, p) / s, s / (2 * a + 2 * b + 2));
      bprime = std::max(bprime, rel(constant(Constant::Bprime_H, p), direct));
    }
  }
  r.add("rho_E composed vs expanded (50x50, max rel)", Kind::invariant, rho_e, 1e-10);
  r.add("rho_H composed vs expanded (50x50, max rel)", Kind::invariant, rho_h, 1e-10);
  r.add("B'_H in terms of Bbar_H (50x50, max rel)", Kind::invariant, bprime, 1e-12);
  r.add("B(2/3,1/3) = 2 pi / sqrt 3 (rel)", Kind::invariant,
        rel(beta(2.0 / 3.0, 1.0 / 3.0), 2.0 * std::numbers::pi / std::sqrt(3.0)), 1e-13);

  double t_gap = 0.0, kkt = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    Xoshiro256pp rng(seed, k);
    const std::size_t D = 1 + k % 5;
    std::vector<double> a, s2, n;
    for (std::size_t i = 0; i < D; ++i) {
      a.push_back(0.05 + 3.0 * rng.uniform());
      s2.push_back(0.1 + 4.0 * rng.uniform());
      n.push_back(0.1 + 10.0 * rng.uniform());
    }
    std::sort(a.rbegin(), a.rend());
    const auto spec = SequenceSpec::from_lists(a, s2);
    t_gap = std::max(t_gap, rel(ellipsoid::solve_t(spec, Allocation(n)),
                                ellipsoid::solve_t_bisection(spec, Allocation(n))));

    const auto h = hyperrect::optimal_allocation_general(spec, 0.5 + 5.0 * rng.uniform());
    for (std::size_t i = 0; i < D; ++i) {
      const double c = s2[i] / (a[i] * a[i]);
      const double m = s2[i] / ((h.alloc[i] + c) * (h.alloc[i] + c));
      if (h.alloc[i] > 0.0) {
        kkt = std::max(kkt, rel(m, h.lagrange_mu));
      } else {
        kkt = std::max(kkt, std::max(0.0, m / h.lagrange_mu - 1.0));
      }
    }
  }
  r.add("ellipsoid t: enumeration vs bisection (50 instances, max rel)", Kind::invariant, t_gap, 1e-10);
  r.add("hyperrect KKT marginals (50 instances, max rel)", Kind::invariant, kkt, 1e-8);
}

void inequalities(Report& r) {
  const auto h = sweep_beta_inequality_hyperrect();
  r.add("hyperrect beta inequality, 200x200 sweep (violations)", Kind::invariant,
        static_cast<double>(h.violations.size()), 0.0,
        {{"points", h.points}, {"worst_margin", h.worst_margin}});
  const auto e = sweep_beta_inequality_ellipsoid();
  r.add("ellipsoid beta inequality with rho_o = 0.998477, 200x200 sweep (violations)",
        Kind::conjecture, static_cast<double>(e.violations.size()), 0.0, io::to_json(e));
}

void monte_carlo(Report& r, std::uint64_t seed) {
  const auto spec = SequenceSpec::from_lists({1.0, 0.5}, {1.0, 1.0});
  const Allocation n({1.0, 1.0});
  const auto sol = ellipsoid::risk(spec, n);
  std::vector<double> theta;
  for (double t2 : sol.theta_sq) theta.push_back(std::sqrt(t2));
  const SimConfig cfg{spec, n, theta, 100000, seed, Membership::ellipsoid};
  const auto rep = simulate(cfg, sol.lambda);
  r.add("saddle point simulation |z| (1e5 replications)", Kind::statistical, std::abs(rep.z_score), 3.5,
        io::to_json(rep));

  double gap = -INFINITY;
  for (std::uint64_t k = 0; k < 10; ++k) {
    Xoshiro256pp rng(seed ^ 0xA5A5A5A5ULL, k);
    std::vector<double> a, s2, m;
    for (int i = 0; i < 5; ++i) {
      a.push_back(0.1 + rng.uniform());
      s2.push_back(0.1 + rng.uniform());
      m.push_back(0.1 + 10.0 * rng.uniform());
    }
    std::sort(a.rbegin(), a.rend());
    gap = std::max(gap, adversarial_check(SequenceSpec::from_lists(a, s2), Allocation(m), 10000, seed + k).max_gap);
  }
  r.add("adversarial sup check, 10 random 5-d instances x 1e4 draws (max gap)", Kind::invariant, gap, 1e-9);
}

void convergence(Report& r) {
  const SobolevParams p{1.0, 0.0};
  const auto E = SequenceSpec::sobolev_ellipsoid(1.0, 0.0, 20000);
  const auto H = SequenceSpec::sobolev_hyperrect(1.0, 0.0, 0);
  const double ns[] = {1e3, 1e4, 1e5, 1e6};
  struct Series {
    const char* name;
    double target;
    std::vector<double> gaps;
  } series[] = {{"n^(2/3) R(uniform, E) -> Bbar_E", constant(Constant::Bbar_E, p), {}},
                {"n^(1/2) R(suboptimal, E) -> B_E", constant(Constant::B_E, p), {}},
                {"n^(1/2) R(optimal, H) -> B_H", constant(Constant::B_H, p), {}},
                {"n^(2/3) R(uniform, H) -> Bbar_H", constant(Constant::Bbar_H, p), {}}};
  for (double n : ns) {
    const double vals[] = {
        std::pow(n, 2.0 / 3.0) * ellipsoid::risk(E, UniformAllocation{n}.expand(E.dim())).risk,
        std::sqrt(n) * ellipsoid::suboptimal_allocation(E, n).risk,
        std::sqrt(n) * hyperrect::optimal_allocation(H, n).risk,
        std::pow(n, 2.0 / 3.0) * hyperrect::uniform_risk(H, n)};
    for (int k = 0; k < 4; ++k) series[k].gaps.push_back(vals[k] / series[k].target - 1.0);
  }
  for (const auto& s : series) {
    bool monotone = true;
    for (std::size_t i = 1; i < s.gaps.size(); ++i) monotone &= std::abs(s.gaps[i]) < std::abs(s.gaps[i - 1]);
    r.add(std::string(s.name) + ": drift decreasing", Kind::invariant, monotone ? 0.0 : 1.0, 0.0,
          {{"n", ns}, {"relative_gap", s.gaps}, {"target", s.target}});
    r.add(std::string(s.name) + ": final relative gap", Kind::invariant, std::abs(s.gaps.back()), 0.05);
  }
}

}  // namespace

SuiteResult run_suite(const std::string& suite, std::uint64_t seed) {
  Report r;
  const bool all = suite == "all";
  if (all || suite == "identities") identities(r, seed);
  if (all || suite == "beta-inequalities") inequalities(r);
  if (all || suite == "mc") monte_carlo(r, seed);
  if (all || suite == "convergence") convergence(r);
  if (r.checks.empty()) throw std::invalid_argument("unknown suite \"" + suite + "\"");
  SuiteResult res;
  res.hard_failure = r.hard_failure;
  res.report = {{"suite", suite}, {"seed", seed}, {"passed", !r.hard_failure}, {"checks", std::move(r.checks)}};
  return res;
}

}  // namespace pinsker::cli
