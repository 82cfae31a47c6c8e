#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pinsker/model.hpp"

namespace pinsker {

/// The optimum would activate coordinates beyond the truncation dimension D.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HyperrectSolution {
  Allocation alloc;
  // Active coordinates, 1-based and ascending. For the monotone path this is
  // {1..active_count}.
  std::vector<std::size_t> active;
  std::size_t active_count = 0;
  bool prefix = true;
  double risk = 0.0;
  double risk_tail = 0.0;    // sum of a_i^2 over inactive coordinates, including i > D
  double lagrange_mu = 0.0;  // common marginal sigma_i^2 / (n_i + sigma_i^2 a_i^-2)^2
};

struct TruncatedUniform {
  std::size_t d = 0;
  double k = 0.0;
  double risk = 0.0;
};

namespace hyperrect {

/// sum_i sigma_i^2 / (n_i + sigma_i^2 a_i^-2); coordinates past the
/// allocation (including the infinite tail) contribute a_i^2.
double risk(const SequenceSpec& spec, const Allocation& alloc);

/// Water-filling optimum for nondecreasing sigma_i a_i^-2. Throws
/// std::invalid_argument if that order condition fails, and TruncationError
/// if the active set would extend past D.
HyperrectSolution optimal_allocation(const SequenceSpec& spec, double n);

/// Same optimum for an arbitrary ordering of sigma_i a_i^-2; the active set
/// is grown in ascending order of sigma_i a_i^-2.
HyperrectSolution optimal_allocation_general(const SequenceSpec& spec, double n);

/// min over d of the risk of (k, ..., k, 0, ...) with k = n / d.
TruncatedUniform truncated_uniform_best(const SequenceSpec& spec, double n);

/// Risk of the untruncated uniform allocation n_i = k for all i.
double uniform_risk(const SequenceSpec& spec, double k);

}  // namespace hyperrect

}  // namespace pinsker
