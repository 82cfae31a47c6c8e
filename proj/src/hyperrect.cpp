#include "pinsker/hyperrect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace pinsker::hyperrect {

namespace {

void require_budget(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("budget n must be positive and finite");
  }
}

// sigma_i a_i^-2 at 1-based index i (reaches past D for generator specs).
double level_at(const SequenceSpec& spec, std::size_t i) {
  return std::sqrt(spec.sigma2_at(i)) / spec.a_sq_at(i);
}

double tail_beyond_dim(const SequenceSpec& spec) {
  return spec.has_tail() ? spec.a_sq_tail(spec.dim()).value : 0.0;
}

// Water-filling on a given active set (0-based indices).
HyperrectSolution fill(const SequenceSpec& spec, std::vector<std::size_t> active, double n) {
  const auto a = spec.a();
  const auto s2 = spec.sigma2();
  CompensatedSum sum_sigma, sum_floor;
  for (std::size_t i : active) {
    const double sigma = std::sqrt(s2[i]);
    sum_sigma += sigma;
    sum_floor += s2[i] / (a[i] * a[i]);
  }
  const double level = (n + sum_floor.value()) / sum_sigma.value();

  HyperrectSolution sol;
  std::vector<double> counts(spec.dim(), 0.0);
  std::vector<std::uint8_t> is_active(spec.dim(), 0);
  for (std::size_t i : active) {
    const double sigma = std::sqrt(s2[i]);
    counts[i] = std::max(0.0, sigma * level - s2[i] / (a[i] * a[i]));
    is_active[i] = 1;
  }
  CompensatedSum tail;
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    if (!is_active[i]) tail += a[i] * a[i];
  }
  tail += tail_beyond_dim(spec);

  std::sort(active.begin(), active.end());
  sol.alloc = Allocation(std::move(counts));
  sol.active_count = active.size();
  sol.prefix = active.empty() || active.back() + 1 == active.size();
  sol.active.reserve(active.size());
  for (std::size_t i : active) sol.active.push_back(i + 1);
  sol.risk_tail = tail.value();
  sol.risk = sum_sigma.value() * sum_sigma.value() / (n + sum_floor.value()) + sol.risk_tail;
  sol.lagrange_mu = 1.0 / (level * level);
  return sol;
}

// Largest prefix of `order` satisfying sum_{j<=k} sigma_j (s_k - s_j) <= n.
// `order` must list indices by nondecreasing s.
std::size_t prefix_count(const SequenceSpec& spec, const std::vector<std::size_t>& order,
                         double n, double& sum_sigma, double& sum_sigma_level) {
  CompensatedSum ss, ssl;
  std::size_t count = 0;
  for (std::size_t i : order) {
    const double sigma = std::sqrt(spec.sigma2()[i]);
    const double s = level_at(spec, i + 1);
    const double g = s * (ss.value() + sigma) - (ssl.value() + sigma * s);
    if (count > 0 && g > n) break;
    ss += sigma;
    ssl += sigma * s;
    ++count;
  }
  sum_sigma = ss.value();
  sum_sigma_level = ssl.value();
  return count;
}

void check_truncation(const SequenceSpec& spec, std::size_t count, double n, double sum_sigma,
                      double sum_sigma_level) {
  if (count < spec.dim() || !spec.has_tail()) return;
  const double s = level_at(spec, spec.dim() + 1);
  if (s * sum_sigma - sum_sigma_level <= n) {
    throw TruncationError("optimal active set reaches past D = " + std::to_string(spec.dim()) +
                          "; increase the truncation dimension");
  }
}

}  // namespace

double risk(const SequenceSpec& spec, const Allocation& alloc) {
  const Allocation n = alloc.padded(spec.dim());
  const auto a = spec.a();
  const auto s2 = spec.sigma2();
  CompensatedSum r;
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    const double a_sq = a[i] * a[i];
    r += n[i] == 0.0 ? a_sq : 1.0 / (n[i] / s2[i] + 1.0 / a_sq);
  }
  r += tail_beyond_dim(spec);
  return r.value();
}

HyperrectSolution optimal_allocation(const SequenceSpec& spec, double n) {
  require_budget(n);
  for (std::size_t i = 2; i <= spec.dim(); ++i) {
    if (level_at(spec, i) < level_at(spec, i - 1)) {
      throw std::invalid_argument("sigma_i a_i^-2 is not nondecreasing at i = " +
                                  std::to_string(i) + "; use optimal_allocation_general");
    }
  }
  std::vector<std::size_t> order(spec.dim());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double ss = 0.0, ssl = 0.0;
  const std::size_t d_o = prefix_count(spec, order, n, ss, ssl);
  check_truncation(spec, d_o, n, ss, ssl);
  order.resize(d_o);
  return fill(spec, std::move(order), n);
}

HyperrectSolution optimal_allocation_general(const SequenceSpec& spec, double n) {
  require_budget(n);
  std::vector<double> levels(spec.dim());
  for (std::size_t i = 0; i < spec.dim(); ++i) levels[i] = level_at(spec, i + 1);
  std::vector<std::size_t> order(spec.dim());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return levels[x] < levels[y]; });
  double ss = 0.0, ssl = 0.0;
  const std::size_t count = prefix_count(spec, order, n, ss, ssl);
  check_truncation(spec, count, n, ss, ssl);
  order.resize(count);

  // Defining property of the active set.
  for (std::size_t i : order) {
    const double g = levels[i] * ss - ssl;
    if (g > n * (1.0 + 1e-12) + 1e-12) {
      throw std::logic_error("active set violates the water-filling property");
    }
  }
  return fill(spec, std::move(order), n);
}

TruncatedUniform truncated_uniform_best(const SequenceSpec& spec, double n) {
  require_budget(n);
  const std::size_t D = spec.dim();
  const auto a = spec.a();
  const auto s2 = spec.sigma2();

  // after[d] = sum_{i > d} a_i^2, d = 0..D.
  std::vector<double> after(D + 1, 0.0);
  {
    CompensatedSum acc;
    acc += tail_beyond_dim(spec);
    after[D] = acc.value();
    for (std::size_t d = D; d-- > 0;) {
      acc += a[d] * a[d];
      after[d] = acc.value();
    }
  }

  TruncatedUniform best{0, 0.0, std::numeric_limits<double>::infinity()};
  bool stopped = false;
  for (std::size_t d = 1; d <= D; ++d) {
    const double k = n / static_cast<double>(d);
    CompensatedSum head;
    for (std::size_t i = 0; i < d; ++i) head += 1.0 / (k / s2[i] + 1.0 / (a[i] * a[i]));
    const double r = head.value() + after[d];
    if (r < best.risk) best = {d, k, r};
    // The head part only grows with d, so no larger d can win.
    if (head.value() >= best.risk) {
      stopped = true;
      break;
    }
  }
  if (!stopped && spec.has_tail()) {
    throw TruncationError("truncated-uniform scan reached D = " + std::to_string(D) +
                          " without settling; increase the truncation dimension");
  }
  return best;
}

double uniform_risk(const SequenceSpec& spec, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("uniform level k must be positive and finite");
  }
  const auto a = spec.a();
  const auto s2 = spec.sigma2();
  CompensatedSum r;
  for (std::size_t i = 0; i < spec.dim(); ++i) r += 1.0 / (k / s2[i] + 1.0 / (a[i] * a[i]));
  if (spec.has_tail()) {
    const auto tail = sum_series(
        [&](std::size_t i) { return 1.0 / (k / spec.sigma2_at(i) + 1.0 / spec.a_sq_at(i)); },
        spec.dim() + 1, spec.a_sq_tail_policy(), spec.tail_tol());
    r += tail.value;
  }
  return r.value();
}

}  // namespace pinsker::hyperrect
