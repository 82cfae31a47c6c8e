#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pinsker {

// Root finding requires f(lo) and f(hi) of opposite sign.
class NoSignChange : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonFiniteValue : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SeriesDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// ln Gamma(x) for x > 0 (Lanczos approximation, g = 607/128, 15 terms).
/// Throws std::domain_error for x <= 0 or non-finite x.
double log_gamma(double x);

/// ln B(x, y) = ln Gamma(x) + ln Gamma(y) - ln Gamma(x + y).
double log_beta(double x, double y);

/// Euler beta function B(x, y), x, y > 0.
double beta(double x, double y);

// ---------------------------------------------------------------------------
// Scalar root finding
// ---------------------------------------------------------------------------

struct Bracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
};

/// Evaluates f at both ends and validates the sign change.
Bracket make_bracket(const std::function<double(double)>& f, double lo, double hi);

/// Bisection with interleaved secant steps. Each pair of iterations at least
/// halves the bracket, so the method terminates for any continuous f (and for
/// monotone f with jumps, where it converges to the crossing point).
///
/// Returns a point inside the final bracket whose width is <= abs_tol, or the
/// exact zero if one is hit. abs_tol <= 0 means "to machine precision".
double solve_bracketed(const std::function<double(double)>& f, Bracket bracket, double abs_tol);

/// Golden-section minimisation of a unimodal f on [lo, hi]; returns the argmin.
double minimize_golden(const std::function<double(double)>& f, double lo, double hi, double abs_tol);

// ---------------------------------------------------------------------------
// Derivative-free minimisation over the scaled simplex {x >= 0, sum x = budget}
// ---------------------------------------------------------------------------

struct SimplexOptions {
  std::size_t max_evaluations = 200000;
  // Initial edge lengths of the Nelder-Mead simplex, as fractions of the budget.
  std::vector<double> restart_scales{0.25, 0.05, 0.01, 1e-3};
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Euclidean projection of y onto {x >= 0, sum x = budget}.
std::vector<double> project_to_simplex(std::span<const double> y, double budget);

/// Nelder-Mead in dim-1 free coordinates; the last coordinate is eliminated
/// by the budget equality and the resulting point is projected onto the
/// simplex before f is evaluated. Infinite or NaN objective values are
/// treated as +inf. The returned point never scores worse than start.
SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& f,
                               std::size_t dim, double budget, std::span<const double> start,
                               double tol, const SimplexOptions& options = {});

// ---------------------------------------------------------------------------
// Series summation
// ---------------------------------------------------------------------------

enum class TailKind {
  // Terms behave like C * i^(-exponent), exponent > 1; the tail is closed by a
  // first-order Euler-Maclaurin integral estimate.
  power,
  // Terms eventually decay at least geometrically; summation stops once the
  // geometric tail bound drops below tolerance.
  cutoff,
};

struct TailPolicy {
  TailKind kind = TailKind::cutoff;
  double exponent = 0.0;

  static TailPolicy power(double exponent) { return {TailKind::power, exponent}; }
  static TailPolicy cutoff() { return {TailKind::cutoff, 0.0}; }
};

struct SumResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  double tail_bound = 0.0;
};

/// Sums term(i) for i = first, first + 1, ... to infinity.
/// Throws SeriesDivergence if the tail bound cannot be brought below tol
/// within max_terms terms, or if the terms stop decreasing.
SumResult sum_series(const std::function<double(std::size_t)>& term, std::size_t first,
                     TailPolicy policy, double tol, std::size_t max_terms = std::size_t{1} << 26);

}  // namespace pinsker
