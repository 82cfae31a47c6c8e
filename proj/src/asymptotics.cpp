#include "pinsker/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace pinsker {

namespace {

void require_domain(bool ok, const char* message) {
  if (!ok) throw std::domain_error(message);
}

// Shorthands shared by all constants.
struct Terms {
  double a, b, r, s;  // alpha, beta, a + b + 1, 2a + 2b + 1
  explicit Terms(SobolevParams p)
      : a(p.alpha), b(p.beta), r(p.alpha + p.beta + 1.0), s(2.0 * p.alpha + 2.0 * p.beta + 1.0) {
    p.validate();
  }
  double log_b32() const { return log_beta((b + 1.0) / a, 1.5); }
  double log_bh() const { return log_beta(2.0 * a / s, (2.0 * b + 1.0) / s); }
};

double log_B_E(const Terms& t) {
  return t.a / t.r * (2.0 * t.log_b32() - 2.0 * std::log(t.a)) +
         (t.b + 1.0) / t.r * std::log((3.0 * t.a + 2.0 * t.b + 2.0) / (2.0 * (t.b + 1.0)));
}

double log_Bbar_E(const Terms& t) {
  return (2.0 * t.b + 1.0) / t.s * std::log(t.s) - std::log(2.0 * t.b + 1.0) +
         2.0 * t.a / t.s * std::log(t.a / (t.a + 2.0 * t.b + 1.0));
}

double log_D_E(const Terms& t) {
  return std::log(t.s * (t.a + 2.0 * t.b + 1.0) / t.a) / t.s;
}

double log_d_s_coef(const Terms& t) {
  return (2.0 * std::log(t.a) + std::log(3.0 * t.a + 2.0 * t.b + 2.0) -
          std::log(2.0 * (t.b + 1.0)) - 2.0 * t.log_b32()) /
         (2.0 * t.r);
}

double log_B_o(const Terms& t) {
  return std::log(2.0 * (t.b + 1.0) * t.r / (2.0 * t.a + t.b + 1.0)) / (2.0 * t.r);
}

double log_B_H(const Terms& t) {
  const double c = 2.0 * t.a + t.b + 1.0;
  return std::log(c / (2.0 * t.a * (t.b + 1.0))) +
         t.a / t.r * std::log(c / (2.0 * (t.b + 1.0) * t.r));
}

double log_Bbar_H(const Terms& t) { return t.log_bh() - std::log(t.s); }

double log_Bprime_H(const Terms& t) {
  return std::log(t.r / t.a) +
         t.s / (2.0 * t.r) * (std::log(2.0 * t.a / t.s) + log_Bbar_H(t));
}

double log_rho_E(const Terms& t) {
  return -std::log(2.0 * t.b + 1.0) +
         (t.b + 1.0) / t.r *
             std::log(2.0 * (t.b + 1.0) * t.s / (3.0 * t.a + 2.0 * t.b + 2.0)) +
         t.a / t.r * (3.0 * std::log(t.a) - 2.0 * t.log_b32() - std::log(t.a + 2.0 * t.b + 1.0));
}

double log_rho_H(const Terms& t) {
  const double c = 2.0 * t.a + t.b + 1.0;
  return c / t.r * std::log(2.0 * (t.b + 1.0) * t.r / c) +
         t.s / (2.0 * t.r) * (std::log(2.0 * t.a) + t.log_bh() - 2.0 * std::log(t.s));
}

std::vector<double> axis(double lo, double hi, std::size_t points, bool logarithmic) {
  if (points == 0) throw std::invalid_argument("grid axis needs at least one point");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(points - 1);
    out[i] = logarithmic ? std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)))
                         : lo + u * (hi - lo);
  }
  out.back() = hi;
  return out;
}

template <class Check>
SweepResult sweep(const SweepOptions& o, Check check) {
  require_domain(o.alpha_lo > 0.0 && o.alpha_hi >= o.alpha_lo, "sweep: invalid alpha range");
  require_domain(o.beta_lo > -0.5 && o.beta_hi >= o.beta_lo, "sweep: invalid beta range");
  const auto alphas = axis(o.alpha_lo, o.alpha_hi, o.alpha_points, o.log_alpha);
  const auto betas = axis(o.beta_lo, o.beta_hi, o.beta_points, false);
  SweepResult res;
  res.worst_margin = std::numeric_limits<double>::infinity();
  for (double b : betas) {
    for (double a : alphas) {
      const auto [margin, ratio, holds] = check(SobolevParams{a, b});
      ++res.points;
      res.worst_margin = std::min(res.worst_margin, margin);
      if (!holds) res.violations.push_back({a, b, ratio});
    }
  }
  return res;
}

struct LogCheck {
  double log_lhs;
  double log_rhs;
};

LogCheck ellipsoid_sides(SobolevParams p, double rho_o) {
  const double a = p.alpha, b = p.beta, s = 2.0 * a + 2.0 * b + 1.0;
  const double log_lhs = 2.0 * log_beta((b + 1.0) / a, 0.5);
  const double log_rhs =
      -std::log(rho_o) + std::log(a) + 2.0 * std::log(a + 2.0 * b + 2.0) -
      std::log(2.0 * b + 1.0) - std::log(a + 2.0 * b + 1.0) +
      (b + 1.0) / a *
          (-std::log(rho_o) + std::log(2.0 * (b + 1.0) * s) - std::log(2.0 * b + 1.0) -
           std::log(3.0 * a + 2.0 * b + 2.0));
  return {log_lhs, log_rhs};
}

LogCheck hyperrect_sides(SobolevParams p) {
  const double a = p.alpha, b = p.beta, s = 2.0 * a + 2.0 * b + 1.0, r = a + b + 1.0;
  const double log_lhs = log_beta(2.0 * a / s, (2.0 * b + 1.0) / s);
  const double log_rhs = -std::log(2.0 * a) +
                         2.0 * std::log(s * (2.0 * a + b + 1.0) / (2.0 * (b + 1.0) * r));
  return {log_lhs, log_rhs};
}

}  // namespace

void SobolevParams::validate() const {
  require_domain(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive and finite");
  require_domain(beta > -0.5 && std::isfinite(beta), "beta must exceed -1/2 and be finite");
}

std::string_view constant_name(Constant c) {
  switch (c) {
    case Constant::B_E: return "B_E";
    case Constant::Bbar_E: return "Bbar_E";
    case Constant::D_E: return "D_E";
    case Constant::rho_E: return "rho_E";
    case Constant::d_s_coef: return "d_s_coef";
    case Constant::B_o: return "B_o";
    case Constant::B_H: return "B_H";
    case Constant::Bbar_H: return "Bbar_H";
    case Constant::Bprime_H: return "Bprime_H";
    case Constant::rho_H: return "rho_H";
  }
  return "?";
}

double constant(Constant c, SobolevParams p) {
  const Terms t(p);
  switch (c) {
    case Constant::B_E: return std::exp(log_B_E(t));
    case Constant::Bbar_E: return std::exp(log_Bbar_E(t));
    case Constant::D_E: return std::exp(log_D_E(t));
    case Constant::rho_E: return std::exp(log_rho_E(t));
    case Constant::d_s_coef: return std::exp(log_d_s_coef(t));
    case Constant::B_o: return std::exp(log_B_o(t));
    case Constant::B_H: return std::exp(log_B_H(t));
    case Constant::Bbar_H: return std::exp(log_Bbar_H(t));
    case Constant::Bprime_H: return std::exp(log_Bprime_H(t));
    case Constant::rho_H: return std::exp(log_rho_H(t));
  }
  throw std::invalid_argument("unknown constant");
}

std::vector<ConstantValue> constants(SobolevParams p) {
  std::vector<ConstantValue> out;
  for (Constant c : kAllConstants) out.push_back({c, p, constant(c, p)});
  return out;
}

double beta_sum_asymptotic(double alpha, double beta, double kappa, double M) {
  require_domain(alpha > 0.0, "beta_sum_asymptotic: alpha must be positive");
  require_domain(beta > -1.0, "beta_sum_asymptotic: beta must exceed -1");
  require_domain(kappa > -1.0, "beta_sum_asymptotic: kappa must exceed -1");
  require_domain(M > 0.0 && std::isfinite(M), "beta_sum_asymptotic: M must be positive");
  return std::exp(-std::log(alpha) + log_beta((beta + 1.0) / alpha, kappa + 1.0) +
                  (beta + 1.0) / alpha * std::log(M));
}

double rho_ellipsoid(SobolevParams p) { return std::exp(log_rho_E(Terms(p))); }

double rho_ellipsoid_composed(SobolevParams p) {
  const Terms t(p);
  return std::exp(log_Bbar_E(t) + t.a / t.r * log_D_E(t) - log_B_E(t));
}

double rho_hyperrect(SobolevParams p) { return std::exp(log_rho_H(Terms(p))); }

double rho_hyperrect_composed(SobolevParams p) {
  const Terms t(p);
  return std::exp(log_Bprime_H(t) - log_B_H(t));
}

std::vector<TableCell> ratio_table(int which) {
  if (which != 1 && which != 2) throw std::invalid_argument("table must be 1 or 2");
  std::vector<TableCell> cells;
  for (double b : kTableBetas) {
    for (double a : kTableAlphas) {
      const SobolevParams p{a, b};
      const double v = which == 1 ? rho_ellipsoid(p) : rho_hyperrect(p);
      const int decimals = (which == 1 && b == 1.0 && a == 0.5) ? 3 : 2;
      const double scale = std::pow(10.0, decimals);
      cells.push_back({a, b, v, decimals, std::round(v * scale) / scale});
    }
  }
  return cells;
}

ContourResult contour_grid(const ContourOptions& o) {
  require_domain(o.alpha_lo > 0.0 && o.alpha_hi > o.alpha_lo, "contour: invalid alpha range");
  require_domain(o.beta_lo > -0.5 && o.beta_hi > o.beta_lo, "contour: invalid beta range");
  require_domain(o.alpha_points >= 2 && o.beta_points >= 2, "contour: grid must be at least 2x2");

  const auto alphas = axis(o.alpha_lo, o.alpha_hi, o.alpha_points, o.log_alpha);
  const auto betas = axis(o.beta_lo, o.beta_hi, o.beta_points, false);

  ContourResult res;
  res.grid.reserve(alphas.size() * betas.size());
  std::size_t best = 0;
  for (double b : betas) {
    for (double a : alphas) {
      const double v = rho_ellipsoid({a, b});
      if (res.grid.empty() || v < res.grid[best].value) best = res.grid.size();
      res.grid.push_back({a, b, v});
      if (v < 1.0) res.sub_unit.push_back({a, b, v});
    }
  }
  res.grid_minimum = res.grid[best];

  // Alternating golden-section refinement in a window of two grid cells.
  const std::size_t ia = best % alphas.size();
  const std::size_t ib = best / alphas.size();
  const double a_lo = alphas[ia > 0 ? ia - 1 : 0];
  const double a_hi = alphas[std::min(ia + 1, alphas.size() - 1)];
  const double b_lo = betas[ib > 0 ? ib - 1 : 0];
  const double b_hi = betas[std::min(ib + 1, betas.size() - 1)];
  double a = res.grid_minimum.alpha;
  double b = res.grid_minimum.beta;
  for (int sweep = 0; sweep < 200; ++sweep) {
    const double a_new = minimize_golden([&](double x) { return rho_ellipsoid({x, b}); }, a_lo,
                                         a_hi, 1e-13);
    const double b_new = minimize_golden([&](double y) { return rho_ellipsoid({a_new, y}); },
                                         b_lo, b_hi, 1e-13);
    const bool settled = std::abs(a_new - a) < 1e-12 && std::abs(b_new - b) < 1e-12;
    a = a_new;
    b = b_new;
    if (settled) break;
  }
  const double v = rho_ellipsoid({a, b});
  res.minimum = v < res.grid_minimum.value ? GridValue{a, b, v} : res.grid_minimum;

  std::vector<GridValue> s_points = res.sub_unit;
  if (res.minimum.value < 1.0) s_points.push_back(res.minimum);
  res.s_empty = s_points.empty();
  if (!res.s_empty) {
    Box box{s_points[0].alpha, s_points[0].alpha, s_points[0].beta, s_points[0].beta};
    for (const auto& g : s_points) {
      box.alpha_lo = std::min(box.alpha_lo, g.alpha);
      box.alpha_hi = std::max(box.alpha_hi, g.alpha);
      box.beta_lo = std::min(box.beta_lo, g.beta);
      box.beta_hi = std::max(box.beta_hi, g.beta);
    }
    res.s_box = box;
  }
  return res;
}

InequalityCheck beta_inequality_ellipsoid(SobolevParams p, double rho_o) {
  p.validate();
  require_domain(rho_o > 0.0 && std::isfinite(rho_o), "rho_o must be positive");
  const LogCheck c = ellipsoid_sides(p, rho_o);
  return {std::exp(c.log_lhs), std::exp(c.log_rhs), c.log_lhs <= c.log_rhs};
}

InequalityCheck beta_inequality_hyperrect(SobolevParams p) {
  p.validate();
  const LogCheck c = hyperrect_sides(p);
  return {std::exp(c.log_lhs), std::exp(c.log_rhs), c.log_lhs >= c.log_rhs};
}

SweepResult sweep_beta_inequality_ellipsoid(const SweepOptions& options, double rho_o) {
  return sweep(options, [rho_o](SobolevParams p) {
    const LogCheck c = ellipsoid_sides(p, rho_o);
    const double ratio = std::exp(c.log_lhs - c.log_rhs);
    return std::tuple{1.0 - ratio, ratio, c.log_lhs <= c.log_rhs};
  });
}

SweepResult sweep_beta_inequality_hyperrect(const SweepOptions& options) {
  return sweep(options, [](SobolevParams p) {
    const LogCheck c = hyperrect_sides(p);
    const double ratio = std::exp(c.log_lhs - c.log_rhs);
    return std::tuple{ratio - 1.0, ratio, c.log_lhs >= c.log_rhs};
  });
}

SparseConjecture sparse_conjecture(std::span<const double> sigma, std::size_t p, std::size_t N,
                                   double n) {
  require_domain(p > 0 && p < N, "sparse_conjecture: need 0 < p < N");
  require_domain(n > 0.0 && std::isfinite(n), "sparse_conjecture: n must be positive");
  require_domain(sigma.size() >= p, "sparse_conjecture: sigma shorter than p");
  CompensatedSum total;
  for (std::size_t i = 0; i < p; ++i) {
    require_domain(sigma[i] > 0.0 && std::isfinite(sigma[i]),
                   "sparse_conjecture: sigma must be positive");
    require_domain(i == 0 || sigma[i] <= sigma[i - 1],
                   "sparse_conjecture: sigma must be nonincreasing");
    total += sigma[i];
  }
  const double S = total.value();
  std::vector<double> counts(N, 0.0);
  for (std::size_t i = 0; i < p; ++i) counts[i] = n * sigma[i] / S;
  return {Allocation(std::move(counts)), 2.0 * std::log(static_cast<double>(N)) * S * S / n};
}

double sparse_conjectured_risk(std::span<const double> sigma, std::size_t p, std::size_t N,
                               const Allocation& alloc) {
  require_domain(p > 0 && p < N && sigma.size() >= p, "sparse_conjectured_risk: bad sizes");
  CompensatedSum r;
  for (std::size_t i = 0; i < p; ++i) {
    const double ni = alloc.at_or_zero(i);
    if (ni <= 0.0) return std::numeric_limits<double>::infinity();
    r += sigma[i] * sigma[i] / ni;
  }
  return 2.0 * std::log(static_cast<double>(N)) * r.value();
}

}  // namespace pinsker
