#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "pinsker/numerics.hpp"

namespace pinsker {

class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Generators for the two coordinate sequences. For semi-axes the laws
// describe a_i^2; for noise they describe sigma_i^2. Explicit lists hold
// a_i (not squared) and sigma_i^2 respectively.

/// a_i^2 = scale * i^(-exponent)   or   sigma_i^2 = scale * i^(exponent)
struct PowerLaw {
  double scale = 1.0;
  double exponent = 0.0;
};

/// a_i^2 = scale * exp(-rate * i)   or   sigma_i^2 = scale * exp(rate * i)
struct ExponentialLaw {
  double scale = 1.0;
  double rate = 0.0;
};

struct ExplicitList {
  std::vector<double> values;
};

using SequenceLaw = std::variant<PowerLaw, ExponentialLaw, ExplicitList>;

/// Semi-axes a_i and noise variances sigma_i^2 of the heteroscedastic
/// sequence model, truncated to dimension D for computation. Generator laws
/// describe an infinite sequence; coordinates beyond D remain reachable
/// through a_sq()/sigma2() for tail sums.
///
/// Construction validates positivity and finiteness. Monotonicity of a_i is
/// a per-operation precondition (see validate_monotone()) because the
/// general hyperrectangle allocator accepts arbitrary orderings.
class SequenceSpec {
 public:
  /// dim == 0 picks a default: the list length for explicit laws, otherwise
  /// the smallest D whose analytic tail sum_{i>D} a_i^2 is below tail_tol
  /// (capped at max_default_dim).
  SequenceSpec(SequenceLaw a, SequenceLaw sigma2, std::size_t dim = 0, double tail_tol = 1e-12);

  /// a_i^2 = Q i^(-2 alpha), sigma_i^2 = s2 i^(2 beta).
  static SequenceSpec sobolev_ellipsoid(double alpha, double beta, std::size_t dim,
                                        double Q = 1.0, double s2 = 1.0);
  /// a_i^2 = Q i^(-(2 alpha + 1)), sigma_i^2 = s2 i^(2 beta).
  static SequenceSpec sobolev_hyperrect(double alpha, double beta, std::size_t dim,
                                        double Q = 1.0, double s2 = 1.0,
                                        double tail_tol = 1e-12);
  /// Finite problem from explicit semi-axes and variances of equal length.
  static SequenceSpec from_lists(std::vector<double> a, std::vector<double> sigma2);

  static constexpr std::size_t max_default_dim = 100000;

  std::size_t dim() const noexcept { return a_.size(); }
  double tail_tol() const noexcept { return tail_tol_; }
  const SequenceLaw& a_law() const noexcept { return a_law_; }
  const SequenceLaw& sigma2_law() const noexcept { return sigma2_law_; }

  /// Materialised a_1..a_D and sigma_1^2..sigma_D^2 (0-based storage).
  std::span<const double> a() const noexcept { return a_; }
  std::span<const double> sigma2() const noexcept { return sigma2_; }

  // 1-based accessors; valid beyond D only when has_tail().
  double a_at(std::size_t i) const;
  double a_sq_at(std::size_t i) const;
  double sigma2_at(std::size_t i) const;

  /// True when both laws are generators, i.e. the sequence continues past D.
  bool has_tail() const noexcept;

  /// Tail policy for sums of a_i^2 beyond D.
  TailPolicy a_sq_tail_policy() const;

  /// sum_{i > from} a_i^2 (zero for finite specs).
  SumResult a_sq_tail(std::size_t from) const;

  bool is_nonincreasing() const noexcept;
  /// Throws InvalidSpec unless a_1 >= a_2 >= ... >= a_D.
  void validate_monotone() const;

 private:
  SequenceLaw a_law_;
  SequenceLaw sigma2_law_;
  double tail_tol_;
  std::vector<double> a_;
  std::vector<double> sigma2_;
};

/// Real-valued measurement counts n_1..n_m, m <= D; missing entries are 0.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<double> counts);

  static Allocation zeros(std::size_t dim) { return Allocation(std::vector<double>(dim, 0.0)); }

  std::span<const double> counts() const noexcept { return n_; }
  std::size_t size() const noexcept { return n_.size(); }
  double operator[](std::size_t i) const noexcept { return n_[i]; }
  /// 0-based; returns 0 past the end.
  double at_or_zero(std::size_t i) const noexcept { return i < n_.size() ? n_[i] : 0.0; }

  double budget() const;

  /// Zero-padded copy of length dim (throws if the allocation is longer).
  Allocation padded(std::size_t dim) const;

 private:
  std::vector<double> n_;
};

struct Pattern {
  std::vector<std::uint8_t> delta;

  static Pattern ones(std::size_t dim) { return {std::vector<std::uint8_t>(dim, 1)}; }
  static Pattern zeros(std::size_t dim) { return {std::vector<std::uint8_t>(dim, 0)}; }
  /// Truncation pattern 1_d of length dim.
  static Pattern truncation(std::size_t d, std::size_t dim);
};

/// n_i = level for i <= truncation (or every i <= D when unset).
struct UniformAllocation {
  double level = 0.0;
  std::optional<std::size_t> truncation;

  Allocation expand(std::size_t dim) const;
};

double budget(const Allocation& alloc);
double budget(const UniformAllocation& uniform, std::size_t dim);

/// Entrywise product; the shorter operand is zero-padded.
Allocation apply_pattern(const Allocation& alloc, const Pattern& pattern);

struct NormalizedSpec {
  SequenceSpec unit;
  double scale_a;      // C: a_i^2 = C * unit a_i^2
  double scale_noise;  // c: sigma_i^2 = c * unit sigma_i^2
};

/// Splits off the leading scale factors. With R_E(n, C, c) the ellipsoid
/// risk under (C a~^2, c sigma~^2): R_E(n, C, c) = C * R_E(n C / c, 1, 1).
NormalizedSpec normalize_spec(const SequenceSpec& spec);

}  // namespace pinsker
