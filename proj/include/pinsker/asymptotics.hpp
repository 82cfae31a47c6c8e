#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pinsker/model.hpp"

namespace pinsker {

/// Smoothness alpha > 0 and ill-posedness beta > -1/2 of the Sobolev classes
/// a_i^2 = Q i^(-2 alpha) (ellipsoid), a_i^2 = Q i^(-(2 alpha + 1))
/// (hyperrectangle), sigma_i^2 = sigma^2 i^(2 beta).
struct SobolevParams {
  double alpha = 1.0;
  double beta = 0.0;

  /// Throws std::domain_error outside the domain.
  void validate() const;
};

enum class Constant {
  B_E,        // n^(a/(a+b+1)) R(n_s(n), E) limit
  Bbar_E,     // n^(2a/(2a+2b+1)) R(n_u(n), E) limit (Pinsker constant at b = 0)
  D_E,        // d(n_u(n)) / n^(1/(2a+2b+1)) limit
  rho_E,      // limit risk ratio, ellipsoid
  d_s_coef,   // d_s / n^(1/(2(a+b+1))) limit
  B_o,        // d_o / n^(1/(2a+2b+2)) limit
  B_H,        // n^(a/(a+b+1)) R(n_o(n), H) limit
  Bbar_H,     // n^(2a/(2a+2b+1)) R(n_u(n), H) limit
  Bprime_H,   // best truncated uniform allocation, hyperrectangle
  rho_H,      // limit risk ratio, hyperrectangle
};

inline constexpr Constant kAllConstants[] = {
    Constant::B_E, Constant::Bbar_E, Constant::D_E,      Constant::rho_E, Constant::d_s_coef,
    Constant::B_o, Constant::B_H,    Constant::Bbar_H, Constant::Bprime_H, Constant::rho_H};

std::string_view constant_name(Constant c);

struct ConstantValue {
  Constant id;
  SobolevParams params;
  double value;
};

double constant(Constant c, SobolevParams p);
std::vector<ConstantValue> constants(SobolevParams p);

/// alpha^-1 B((beta+1)/alpha, kappa+1) M^((beta+1)/alpha), the large-M
/// equivalent of sum_k k^beta (1 - k^alpha / M)_+^kappa.
double beta_sum_asymptotic(double alpha, double beta, double kappa, double M);

/// Limit ellipsoid risk ratio in expanded closed form.
double rho_ellipsoid(SobolevParams p);
/// Same ratio composed as Bbar_E * D_E^(a/(a+b+1)) / B_E.
double rho_ellipsoid_composed(SobolevParams p);
/// Limit hyperrectangle risk ratio in expanded closed form.
double rho_hyperrect(SobolevParams p);
/// Same ratio composed as B'_H / B_H.
double rho_hyperrect_composed(SobolevParams p);

// ---------------------------------------------------------------------------
// Ratio tables

inline constexpr double kTableAlphas[] = {0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 20.0, 48.0};
inline constexpr double kTableBetas[] = {0.0, 0.5, 1.0, 3.0, 10.0};

struct TableCell {
  double alpha;
  double beta;
  double value;
  int decimals;    // printed precision
  double printed;  // value rounded to `decimals`
};

/// rho_E grid (which == 1) or rho_H grid (which == 2), row-major by
/// beta then alpha.
std::vector<TableCell> ratio_table(int which);

// ---------------------------------------------------------------------------
// Contour study of rho_E

struct ContourOptions {
  double alpha_lo = 0.02;
  double alpha_hi = 3.0;
  double beta_lo = 0.5;
  double beta_hi = 2.2;
  std::size_t alpha_points = 400;
  std::size_t beta_points = 400;
  bool log_alpha = true;
};

struct GridValue {
  double alpha;
  double beta;
  double value;
};

struct Box {
  double alpha_lo, alpha_hi, beta_lo, beta_hi;
};

struct ContourResult {
  std::vector<GridValue> grid;  // alpha fastest
  std::vector<GridValue> sub_unit;  // grid points with rho_E < 1
  GridValue grid_minimum{};
  GridValue minimum{};  // after local refinement
  bool s_empty = true;
  Box s_box{};
};

ContourResult contour_grid(const ContourOptions& options = {});

// ---------------------------------------------------------------------------
// Beta-function inequalities

struct InequalityCheck {
  double lhs;
  double rhs;
  bool holds;
};

inline constexpr double kRhoMinimum = 0.998477;

/// B^2((b+1)/a, 1/2) <= rhs(a, b, rho_o); equivalent to rho_E(a, b) >= rho_o.
InequalityCheck beta_inequality_ellipsoid(SobolevParams p, double rho_o = kRhoMinimum);

/// B(2a/(2a+2b+1), (2b+1)/(2a+2b+1)) >= rhs(a, b); equivalent to rho_H >= 1.
InequalityCheck beta_inequality_hyperrect(SobolevParams p);

struct SweepOptions {
  double alpha_lo = 0.05;
  double alpha_hi = 50.0;
  double beta_lo = -0.45;
  double beta_hi = 10.0;
  std::size_t alpha_points = 200;
  std::size_t beta_points = 200;
  bool log_alpha = true;
};

struct SweepResult {
  std::size_t points = 0;
  std::vector<GridValue> violations;  // value = lhs / rhs
  double worst_margin = 0.0;  // min over the grid of (rhs - lhs)/rhs for the ellipsoid
                              // form, (lhs - rhs)/rhs for the hyperrectangle form
};

SweepResult sweep_beta_inequality_ellipsoid(const SweepOptions& options = {},
                                            double rho_o = kRhoMinimum);
SweepResult sweep_beta_inequality_hyperrect(const SweepOptions& options = {});

// ---------------------------------------------------------------------------
// Nearly black vectors (conjectured risk, no minimax claim attached)

struct SparseConjecture {
  Allocation alloc;  // length N
  double risk;       // 2 log N (sum_{i<=p} sigma_i)^2 / n
  static constexpr bool conjecture = true;
};

/// sigma holds standard deviations sigma_1 >= ... >= sigma_p (> 0).
SparseConjecture sparse_conjecture(std::span<const double> sigma, std::size_t p, std::size_t N,
                                   double n);

/// 2 log N sum_{i<=p} sigma_i^2 / n_i for a given allocation.
double sparse_conjectured_risk(std::span<const double> sigma, std::size_t p, std::size_t N,
                               const Allocation& alloc);

}  // namespace pinsker
