#include "pinsker/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pinsker::ellipsoid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> padded_counts(const SequenceSpec& spec, const Allocation& alloc) {
  const Allocation n = alloc.padded(spec.dim());
  return {n.counts().begin(), n.counts().end()};
}

void require_nonempty(std::span<const double> n) {
  if (std::none_of(n.begin(), n.end(), [](double v) { return v > 0.0; })) {
    throw EmptyAllocation("allocation has no positive entries");
  }
}

void check_unobserved(const SequenceSpec& spec, std::span<const double> n, double t) {
  const auto a = spec.a();
  for (std::size_t i = 0; i < n.size() && a[i] > t; ++i) {
    if (n[i] == 0.0) {
      throw InfiniteRisk("coordinate " + std::to_string(i + 1) + " has a_i > t but n_i = 0");
    }
  }
}

struct FixedPoint {
  double t = 0.0;
  // gap[i] = (1 - t/a_i)_+ for i < gap.size(); zero beyond.
  std::vector<double> gap;
};

// On [a_{d+1}, a_d) the equation is linear: A_d - B_d t = t, with
// A_d = sum_{k<=d} w_k, B_d = sum_{k<=d} w_k / a_k, w_k = sigma_k^2 / (n_k a_k).
FixedPoint solve_counts(const SequenceSpec& spec, std::span<const double> n) {
  const auto a = spec.a();
  const auto s2 = spec.sigma2();
  const std::size_t D = spec.dim();
  require_nonempty(n);

  std::vector<double> w(D, 0.0);
  for (std::size_t i = 0; i < D; ++i) {
    if (n[i] > 0.0) w[i] = s2[i] / (n[i] * a[i]);
  }

  CompensatedSum A, B;
  FixedPoint fp;
  std::size_t best_d = 0;
  double best_violation = kInf;
  for (std::size_t d = 1; d <= D; ++d) {
    const std::size_t i = d - 1;
    A += w[i];
    B += w[i] / a[i];
    const double t = A.value() / (1.0 + B.value());
    const double next = d < D ? a[d] : 0.0;
    const double violation = std::max({next - t, t - a[i], 0.0});
    if (violation < best_violation) {
      best_violation = violation;
      best_d = d;
      fp.t = t;
      if (violation == 0.0 && t < a[i]) break;
    }
  }
  check_unobserved(spec, n, fp.t);

  // 1 - t/a_i = (a_i + sum_{k != i} w_k (a_i/a_k - 1)) / (a_i (1 + B_d)). Leaving
  // out k = i avoids the cancellation when w_i dominates (n_i -> 0).
  const std::size_t d = best_d;
  CompensatedSum b_total;
  for (std::size_t k = 0; k < d; ++k) b_total += w[k] / a[k];
  const double denom_b = 1.0 + b_total.value();
  std::vector<double> pre_w(d + 1, 0.0), pre_r(d + 1, 0.0);
  {
    CompensatedSum sw, sr;
    for (std::size_t k = 0; k < d; ++k) {
      sw += w[k];
      sr += w[k] / a[k];
      pre_w[k + 1] = sw.value();
      pre_r[k + 1] = sr.value();
    }
  }
  std::vector<double> suf_w(d + 1, 0.0), suf_r(d + 1, 0.0);
  {
    CompensatedSum sw, sr;
    for (std::size_t k = d; k-- > 0;) {
      sw += w[k];
      sr += w[k] / a[k];
      suf_w[k] = sw.value();
      suf_r[k] = sr.value();
    }
  }
  fp.gap.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const double others_w = pre_w[i] + suf_w[i + 1];
    const double others_r = pre_r[i] + suf_r[i + 1];
    const double num = a[i] * (1.0 + others_r) - others_w;
    fp.gap[i] = std::max(num / (a[i] * denom_b), 0.0);
  }
  return fp;
}

double solve_t_counts(const SequenceSpec& spec, std::span<const double> n) {
  return solve_counts(spec, n).t;
}

// Risk value only; +inf instead of throwing.
double risk_value(const SequenceSpec& spec, std::span<const double> n) {
  try {
    const FixedPoint fp = solve_counts(spec, n);
    const auto s2 = spec.sigma2();
    CompensatedSum r;
    for (std::size_t i = 0; i < fp.gap.size(); ++i) {
      if (fp.gap[i] > 0.0) r += s2[i] / n[i] * fp.gap[i];
    }
    return r.value();
  } catch (const InfiniteRisk&) {
    return kInf;
  } catch (const EmptyAllocation&) {
    return kInf;
  }
}

struct Sums {
  double s1 = 0.0;
  double s2 = 0.0;
};

// S1 = sum sigma_k w_k, S2 = sum sigma_i / a_i w_i, with w = (1 - t/a)_+^power.
Sums weighted_sums(const SequenceSpec& spec, double t, bool square_root) {
  const auto a = spec.a();
  const auto s2 = spec.sigma2();
  CompensatedSum s1, s2sum;
  for (std::size_t i = 0; i < a.size() && a[i] > t; ++i) {
    const double gap = 1.0 - t / a[i];
    const double sigma = std::sqrt(s2[i]);
    const double w = square_root ? std::sqrt(gap) : gap;
    s1 += sigma * w;
    s2sum += square_root ? sigma / a[i] * w : sigma / a[i];
  }
  return {s1.value(), s2sum.value()};
}

void require_budget(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("budget n must be positive and finite");
  }
}

Allocation renormalized_prefix(std::span<const double> n, std::size_t d, double budget) {
  std::vector<double> out(n.begin(), n.begin() + static_cast<std::ptrdiff_t>(d));
  double total = 0.0;
  for (double v : out) total += v;
  if (total > 0.0) {
    for (double& v : out) v *= budget / total;
  } else {
    std::fill(out.begin(), out.end(), budget / static_cast<double>(d));
  }
  return Allocation(std::move(out));
}

}  // namespace

double solve_t(const SequenceSpec& spec, const Allocation& alloc) {
  spec.validate_monotone();
  return solve_t_counts(spec, padded_counts(spec, alloc));
}

double solve_t_bisection(const SequenceSpec& spec, const Allocation& alloc) {
  spec.validate_monotone();
  const auto n = padded_counts(spec, alloc);
  require_nonempty(n);
  const auto a = spec.a();
  const auto s2 = spec.sigma2();
  auto f = [&](double t) {
    CompensatedSum lhs;
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (n[i] > 0.0 && a[i] > t) lhs += s2[i] * (1.0 - t / a[i]) / (n[i] * a[i]);
    }
    return lhs.value() - t;
  };
  const double t = solve_bracketed(f, make_bracket(f, 0.0, a[0]), 0.0);
  check_unobserved(spec, n, t);
  return t;
}

EllipsoidSolution risk(const SequenceSpec& spec, const Allocation& alloc) {
  spec.validate_monotone();
  const auto n = padded_counts(spec, alloc);
  const auto a = spec.a();
  const auto s2 = spec.sigma2();

  const FixedPoint fp = solve_counts(spec, n);
  EllipsoidSolution sol;
  sol.t = fp.t;
  sol.lambda.assign(n.size(), 0.0);
  sol.theta_sq.assign(n.size(), 0.0);
  CompensatedSum r, eb;
  for (std::size_t i = 0; i < fp.gap.size(); ++i) {
    const double gap = fp.gap[i];
    if (!(gap > 0.0)) continue;
    sol.lambda[i] = gap;
    sol.theta_sq[i] = s2[i] * a[i] * gap / (n[i] * sol.t);
    r += s2[i] / n[i] * gap;
    eb += n[i];
    sol.active_dim = i + 1;
  }
  sol.risk = r.value();
  sol.effective_budget = eb.value();
  if (spec.has_tail()) sol.truncation_exact = spec.a_at(spec.dim() + 1) <= sol.t;
  return sol;
}

SubOptimalSolution suboptimal_allocation(const SequenceSpec& spec, double n) {
  spec.validate_monotone();
  require_budget(n);
  auto f = [&](double t) {
    const Sums s = weighted_sums(spec, t, true);
    return s.s1 * s.s2 - n * t;
  };
  const double a1 = spec.a()[0];
  const double t_s = solve_bracketed(f, make_bracket(f, 0.0, a1), 0.0);

  const auto a = spec.a();
  const auto s2 = spec.sigma2();
  const double s1 = weighted_sums(spec, t_s, true).s1;
  std::vector<double> counts(spec.dim(), 0.0);
  SubOptimalSolution sol;
  sol.t_s = t_s;
  for (std::size_t i = 0; i < counts.size() && a[i] > t_s; ++i) {
    counts[i] = n * std::sqrt(s2[i]) * std::sqrt(1.0 - t_s / a[i]) / s1;
    sol.active_dim = i + 1;
  }
  sol.alloc = Allocation(std::move(counts));
  sol.risk = s1 * s1 / n;
  return sol;
}

Allocation stationary_allocation(const SequenceSpec& spec, double n) {
  spec.validate_monotone();
  require_budget(n);
  auto f = [&](double t) {
    const Sums s = weighted_sums(spec, t, false);
    return s.s1 * s.s2 - n * t;
  };
  const double t = solve_bracketed(f, make_bracket(f, 0.0, spec.a()[0]), 0.0);
  const auto a = spec.a();
  const auto s2 = spec.sigma2();
  const double w = weighted_sums(spec, t, false).s1;
  std::vector<double> counts(spec.dim(), 0.0);
  for (std::size_t i = 0; i < counts.size() && a[i] > t; ++i) {
    counts[i] = n * std::sqrt(s2[i]) * (1.0 - t / a[i]) / w;
  }
  return Allocation(std::move(counts));
}

NumericAllocation optimal_allocation(const SequenceSpec& spec, double n, DimRange dims,
                                     double tol) {
  const SubOptimalSolution sub = suboptimal_allocation(spec, n);
  NumericAllocation best;
  best.alloc = sub.alloc;
  best.risk = sub.risk;
  best.support = sub.active_dim;
  best.suboptimal_risk = sub.risk;

  const Allocation stationary = stationary_allocation(spec, n);
  std::size_t stationary_support = 0;
  for (std::size_t i = 0; i < stationary.size(); ++i) {
    if (stationary[i] > 0.0) stationary_support = i + 1;
  }
  const double stationary_risk = risk_value(spec, stationary.counts());
  if (stationary_risk < best.risk) {
    best.alloc = stationary;
    best.risk = stationary_risk;
    best.support = stationary_support;
  }

  const std::size_t D = spec.dim();
  std::size_t lo = dims.lo;
  std::size_t hi = dims.hi;
  if (lo == 0) lo = sub.active_dim > 2 ? sub.active_dim - 2 : 1;
  if (hi == 0) hi = std::max(sub.active_dim, stationary_support) + 2;
  lo = std::clamp<std::size_t>(lo, 1, D);
  hi = std::clamp<std::size_t>(hi, lo, D);

  for (std::size_t d = lo; d <= hi; ++d) {
    auto objective = [&](std::span<const double> x) {
      std::vector<double> full(D, 0.0);
      std::copy(x.begin(), x.end(), full.begin());
      return risk_value(spec, full);
    };
    Allocation start = renormalized_prefix(sub.alloc.counts(), d, n);
    double start_value = objective(start.counts());
    const Allocation alt = renormalized_prefix(stationary.counts(), d, n);
    if (const double v = objective(alt.counts()); v < start_value) {
      start = alt;
      start_value = v;
    }
    if (!std::isfinite(start_value)) continue;

    SimplexOptions options;
    options.max_evaluations = 4000 * (d + 1);
    const SimplexResult res = minimize_simplex(objective, d, n, start.counts(), tol, options);
    best.evaluations += res.evaluations;
    if (res.value < best.risk) {
      best.risk = res.value;
      std::vector<double> full(D, 0.0);
      std::copy(res.x.begin(), res.x.end(), full.begin());
      best.alloc = Allocation(std::move(full));
      best.support = d;
    }
  }
  return best;
}

std::pair<double, std::size_t> effective_budget(const SequenceSpec& spec, const Allocation& alloc) {
  const EllipsoidSolution sol = risk(spec, alloc);
  return {sol.effective_budget, sol.active_dim};
}

}  // namespace pinsker::ellipsoid
