#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pinsker/model.hpp"

namespace pinsker {

/// A coordinate with a_i > t receives no measurements, so the linear
/// minimax risk over the ellipsoid is infinite.
class InfiniteRisk : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyAllocation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Minimax linear risk over E(a) together with its saddle point.
struct EllipsoidSolution {
  double t = 0.0;              // root of sum_i sigma_i^2 (1 - t/a_i)_+ / (n_i a_i) = t
  double risk = 0.0;           // sum_i sigma_i^2 / n_i (1 - t/a_i)_+
  std::size_t active_dim = 0;  // max{k : a_k > t}
  std::vector<double> lambda;    // (1 - t/a_i)_+
  std::vector<double> theta_sq;  // sigma_i^2 a_i (1 - t/a_i)_+ / (n_i t)
  double effective_budget = 0.0;  // sum_{i <= active_dim} n_i
  // False when the sequence continues past D with a_{D+1} > t, i.e. the
  // truncated problem differs from the infinite one.
  bool truncation_exact = true;
};

struct SubOptimalSolution {
  double t_s = 0.0;
  Allocation alloc;
  double risk = 0.0;
  std::size_t active_dim = 0;
};

struct NumericAllocation {
  Allocation alloc;
  double risk = 0.0;
  std::size_t support = 0;         // active-dimension candidate that won
  double suboptimal_risk = 0.0;    // certified upper bound the search started from
  std::size_t evaluations = 0;
};

/// Inclusive range of candidate support sizes; zeros mean "choose around d_s".
struct DimRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

namespace ellipsoid {

/// Exact root of the fixed-point equation by active-set enumeration over the
/// piecewise-linear left-hand side. Coordinates with n_i = 0 contribute
/// nothing while a_i <= t; if one ends up with a_i > t, InfiniteRisk.
double solve_t(const SequenceSpec& spec, const Allocation& alloc);

/// Independent route to t: bisection on the defining equation directly.
double solve_t_bisection(const SequenceSpec& spec, const Allocation& alloc);

EllipsoidSolution risk(const SequenceSpec& spec, const Allocation& alloc);

/// Closed-form allocation n_s,i proportional to sigma_i (1 - t_s/a_i)_+^(1/2),
/// with t_s solving S1(t) S2(t) = n t.
SubOptimalSolution suboptimal_allocation(const SequenceSpec& spec, double n);

/// Stationary allocation n_i proportional to sigma_i (1 - t/a_i)_+ with the
/// same fixed point t. Used as an extra start for the numeric search; its
/// risk can be infinite when the stationary point sits on a breakpoint.
Allocation stationary_allocation(const SequenceSpec& spec, double n);

/// Numerical infimum of the risk over allocations with budget n: for each
/// support size d, Nelder-Mead over the d-simplex started from the
/// sub-optimal allocation restricted to {1..d}. Never returns a risk above
/// the sub-optimal one.
NumericAllocation optimal_allocation(const SequenceSpec& spec, double n, DimRange dims = {},
                                     double tol = 1e-13);

/// (sum_{i <= d} n_i, d) with d = max{k : a_k > t(n)}.
std::pair<double, std::size_t> effective_budget(const SequenceSpec& spec, const Allocation& alloc);

}  // namespace ellipsoid
}  // namespace pinsker
