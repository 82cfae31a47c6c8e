#include "pinsker/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace pinsker {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Godfrey's coefficients for g = 607/128.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos{
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5,
};
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

double lanczos_series(double x) {
  double sum = 0.0;
  for (std::size_t i = kLanczos.size() - 1; i > 0; --i) {
    sum += kLanczos[i] / (x + static_cast<double>(i));
  }
  return sum + kLanczos[0];
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw NonFiniteValue(std::string(what) + ": function returned a non-finite value");
  }
  return v;
}

}  // namespace

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

// ---------------------------------------------------------------------------

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("log_gamma: argument must be positive and finite");
  }
  if (x < 0.5) {
    // Gamma(x) = Gamma(x + 1) / x keeps the series away from its pole region.
    return log_gamma(x + 1.0) - std::log(x);
  }
  const double tmp = x + kLanczosG + 0.5;
  return (x + 0.5) * std::log(tmp) - tmp + kHalfLog2Pi + std::log(lanczos_series(x) / x);
}

double log_beta(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    throw std::domain_error("beta: arguments must be positive");
  }
  return log_gamma(x) + log_gamma(y) - log_gamma(x + y);
}

double beta(double x, double y) { return std::exp(log_beta(x, y)); }

// ---------------------------------------------------------------------------

Bracket make_bracket(const std::function<double(double)>& f, double lo, double hi) {
  if (!(lo < hi)) {
    throw std::invalid_argument("make_bracket: requires lo < hi");
  }
  Bracket b{lo, hi, checked(f(lo), "make_bracket"), checked(f(hi), "make_bracket")};
  if (b.f_lo * b.f_hi > 0.0) {
    throw NoSignChange("make_bracket: f has the same sign at both ends");
  }
  return b;
}

double solve_bracketed(const std::function<double(double)>& f, Bracket b, double abs_tol) {
  if (!(b.lo < b.hi)) {
    throw std::invalid_argument("solve_bracketed: requires lo < hi");
  }
  if (!std::isfinite(b.f_lo) || !std::isfinite(b.f_hi)) {
    throw NonFiniteValue("solve_bracketed: non-finite value at bracket end");
  }
  if (b.f_lo == 0.0) return b.lo;
  if (b.f_hi == 0.0) return b.hi;
  if (b.f_lo * b.f_hi > 0.0) {
    throw NoSignChange("solve_bracketed: no sign change across bracket");
  }

  for (int iter = 0; iter < 4096; ++iter) {
    const double width = b.hi - b.lo;
    const double mid = b.lo + 0.5 * width;
    if (width <= abs_tol || mid <= b.lo || mid >= b.hi) break;

    double x = mid;
    if (iter % 2 == 0) {
      const double secant = b.lo - b.f_lo * width / (b.f_hi - b.f_lo);
      // Only accept secant points safely inside the bracket.
      if (secant > b.lo + 0.01 * width && secant < b.hi - 0.01 * width) x = secant;
    }
    const double fx = checked(f(x), "solve_bracketed");
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (b.f_lo < 0.0)) {
      b.lo = x;
      b.f_lo = fx;
    } else {
      b.hi = x;
      b.f_hi = fx;
    }
  }
  return b.lo + 0.5 * (b.hi - b.lo);
}

double minimize_golden(const std::function<double(double)>& f, double lo, double hi,
                       double abs_tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > abs_tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
    if (x1 <= lo || x2 >= hi) break;
  }
  return f1 <= f2 ? x1 : x2;
}

// ---------------------------------------------------------------------------

std::vector<double> project_to_simplex(std::span<const double> y, double budget) {
  std::vector<double> u(y.begin(), y.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - budget) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) shift = candidate;
  }
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::max(y[i] - shift, 0.0);
  return x;
}

namespace {

class SimplexSearch {
 public:
  SimplexSearch(const std::function<double(std::span<const double>)>& f, std::size_t dim,
                double budget, double penalty_weight, std::size_t max_evals)
      : f_(f), dim_(dim), budget_(budget), weight_(penalty_weight), max_evals_(max_evals) {}

  // Objective in the free coordinates z (length dim - 1).
  double operator()(const std::vector<double>& z) {
    ++evaluations_;
    const std::vector<double> x = embed(z);
    std::vector<double> y(z);
    y.push_back(budget_ - std::accumulate(z.begin(), z.end(), 0.0));
    double distance = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) distance += std::abs(y[i] - x[i]);
    const double v = f_(x);
    if (!(v < kInf)) return kInf;  // also catches NaN
    return v + weight_ * distance;
  }

  std::vector<double> embed(const std::vector<double>& z) const {
    std::vector<double> y(z);
    y.push_back(budget_ - std::accumulate(z.begin(), z.end(), 0.0));
    return project_to_simplex(y, budget_);
  }

  bool exhausted() const { return evaluations_ >= max_evals_; }
  std::size_t evaluations() const { return evaluations_; }

  // One Nelder-Mead run from z0 with axis steps h. Updates z0/f0 in place.
  void run(std::vector<double>& z0, double& f0, double h, double tol) {
    const std::size_t m = z0.size();
    std::vector<std::vector<double>> pts(m + 1, z0);
    std::vector<double> vals(m + 1, f0);
    for (std::size_t j = 0; j < m; ++j) {
      pts[j + 1][j] += h;
      vals[j + 1] = (*this)(pts[j + 1]);
    }
    std::vector<std::size_t> order(m + 1);
    std::vector<double> centroid(m), trial(m), trial2(m);

    while (!exhausted()) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const std::size_t best = order.front();
      const std::size_t worst = order.back();
      const std::size_t second = order[m - 1];

      const double spread = vals[worst] - vals[best];
      double diameter = 0.0;
      for (std::size_t j = 0; j <= m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
          diameter = std::max(diameter, std::abs(pts[j][k] - pts[best][k]));
        }
      }
      if (spread <= tol * (std::abs(vals[best]) + tol) && diameter <= 1e-6 * budget_) break;
      if (diameter <= 8.0 * kEps * budget_) break;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t j = 0; j <= m; ++j) {
        if (j == worst) continue;
        for (std::size_t k = 0; k < m; ++k) centroid[k] += pts[j][k];
      }
      for (double& c : centroid) c /= static_cast<double>(m);

      for (std::size_t k = 0; k < m; ++k) trial[k] = 2.0 * centroid[k] - pts[worst][k];
      const double f_reflect = (*this)(trial);

      if (f_reflect < vals[best]) {
        for (std::size_t k = 0; k < m; ++k) trial2[k] = 3.0 * centroid[k] - 2.0 * pts[worst][k];
        const double f_expand = (*this)(trial2);
        if (f_expand < f_reflect) {
          pts[worst] = trial2;
          vals[worst] = f_expand;
        } else {
          pts[worst] = trial;
          vals[worst] = f_reflect;
        }
        continue;
      }
      if (f_reflect < vals[second]) {
        pts[worst] = trial;
        vals[worst] = f_reflect;
        continue;
      }
      const bool outside = f_reflect < vals[worst];
      for (std::size_t k = 0; k < m; ++k) {
        trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                            : centroid[k] + 0.5 * (pts[worst][k] - centroid[k]);
      }
      const double f_contract = (*this)(trial2);
      if (f_contract < std::min(f_reflect, vals[worst])) {
        pts[worst] = trial2;
        vals[worst] = f_contract;
        continue;
      }
      // Shrink toward the best vertex.
      for (std::size_t j = 0; j <= m; ++j) {
        if (j == best) continue;
        for (std::size_t k = 0; k < m; ++k) {
          pts[j][k] = pts[best][k] + 0.5 * (pts[j][k] - pts[best][k]);
        }
        vals[j] = (*this)(pts[j]);
      }
    }

    const auto it = std::min_element(vals.begin(), vals.end());
    if (*it < f0) {
      f0 = *it;
      z0 = pts[static_cast<std::size_t>(it - vals.begin())];
    }
  }

 private:
  const std::function<double(std::span<const double>)>& f_;
  std::size_t dim_;
  double budget_;
  double weight_;
  std::size_t max_evals_;
  std::size_t evaluations_ = 0;
};

}  // namespace

SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& f,
                               std::size_t dim, double budget, std::span<const double> start,
                               double tol, const SimplexOptions& options) {
  if (dim == 0 || start.size() != dim) {
    throw std::invalid_argument("minimize_simplex: start must have length dim >= 1");
  }
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw std::invalid_argument("minimize_simplex: budget must be finite and nonnegative");
  }
  SimplexResult result;
  result.x = project_to_simplex(start, budget);
  result.value = f(result.x);
  result.evaluations = 1;
  if (!std::isfinite(result.value)) {
    throw NonFiniteValue("minimize_simplex: objective is not finite at the start point");
  }
  if (dim == 1 || budget == 0.0) return result;

  const double weight = (1.0 + std::abs(result.value)) / budget;
  SimplexSearch search(f, dim, budget, weight, options.max_evaluations);

  std::vector<double> z(result.x.begin(), result.x.end() - 1);
  double fz = result.value;
  for (int pass = 0; pass < 8 && !search.exhausted(); ++pass) {
    const double before = fz;
    for (double scale : options.restart_scales) {
      if (search.exhausted()) break;
      search.run(z, fz, scale * budget, tol);
    }
    if (before - fz <= tol * (std::abs(fz) + tol)) break;
  }

  std::vector<double> x = search.embed(z);
  const double value = f(x);
  result.evaluations += search.evaluations() + 1;
  if (value <= result.value) {
    result.x = std::move(x);
    result.value = value;
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

// Euler-Maclaurin estimate of sum_{i > n} f(i) for f(x) = f(n) (x / n)^-p.
double power_tail_estimate(double f_n, double n, double p) {
  return f_n * (n / (p - 1.0) - 0.5 + p / (12.0 * n));
}

SumResult sum_power_tail(const std::function<double(std::size_t)>& term, std::size_t first,
                         double p, double tol, std::size_t max_terms) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::domain_error("sum_series: power tail requires exponent > 1");
  }
  CompensatedSum head;
  std::size_t next = first;
  std::size_t last = std::max<std::size_t>(first, 16);
  while (true) {
    double f_last = 0.0;
    for (; next <= last; ++next) {
      f_last = checked(term(next), "sum_series");
      head += f_last;
    }
    const double n = static_cast<double>(last);
    const double estimate = power_tail_estimate(f_last, n, p);
    // Remainder after the f' correction: next Euler-Maclaurin term, doubled.
    double bound = 2.0 * std::abs(f_last) * p * (p + 1.0) * (p + 2.0) / (720.0 * n * n * n);
    // Model error: discrepancy against the locally observed decay rate.
    const std::size_t half = std::max(first, last / 2);
    double f_half = f_last;
    if (half < last) {
      f_half = checked(term(half), "sum_series");
      if (f_half != 0.0 && f_last != 0.0) {
        const double p_local = std::log(f_half / f_last) / std::log(n / static_cast<double>(half));
        if (std::isfinite(p_local) && p_local > 1.0) {
          bound += std::abs(estimate - power_tail_estimate(f_last, n, p_local));
        } else {
          bound = kInf;
        }
      }
      if (last >= 1024 && std::abs(f_last) > std::abs(f_half)) {
        throw SeriesDivergence("sum_series: terms are not decreasing");
      }
    }
    if (f_last == 0.0 && f_half == 0.0) bound = 0.0;
    if (bound <= tol) {
      SumResult r;
      r.value = head.value() + estimate;
      r.terms_used = last - first + 1;
      r.tail_bound = bound;
      return r;
    }
    if (last - first + 1 >= max_terms) {
      throw SeriesDivergence("sum_series: tail bound above tolerance at the term limit");
    }
    last = std::min(2 * last, first + max_terms - 1);
  }
}

SumResult sum_cutoff(const std::function<double(std::size_t)>& term, std::size_t first,
                     double tol, std::size_t max_terms) {
  CompensatedSum acc;
  double previous = checked(term(first), "sum_series");
  acc += previous;
  for (std::size_t k = 1; k < max_terms; ++k) {
    const double current = checked(term(first + k), "sum_series");
    acc += current;
    double bound = kInf;
    if (current == 0.0 && previous == 0.0) {
      bound = 0.0;
    } else if (previous != 0.0) {
      const double ratio = std::abs(current / previous);
      if (ratio < 1.0) bound = std::abs(current) * ratio / (1.0 - ratio);
    }
    if (bound <= tol) return {acc.value(), k + 1, bound};
    previous = current;
  }
  throw SeriesDivergence("sum_series: no geometric decay detected within the term limit");
}

}  // namespace

SumResult sum_series(const std::function<double(std::size_t)>& term, std::size_t first,
                     TailPolicy policy, double tol, std::size_t max_terms) {
  if (!(tol > 0.0)) throw std::invalid_argument("sum_series: tol must be positive");
  if (max_terms < 2) throw std::invalid_argument("sum_series: max_terms must be >= 2");
  if (policy.kind == TailKind::power) {
    return sum_power_tail(term, first, policy.exponent, tol, max_terms);
  }
  return sum_cutoff(term, first, tol, max_terms);
}

}  // namespace pinsker
