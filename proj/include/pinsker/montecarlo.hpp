#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pinsker/model.hpp"

namespace pinsker {

/// SplitMix64; used to seed and split xoshiro streams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept;

 private:
  std::uint64_t state_;
};

/// xoshiro256++ 1.0. Streams are derived from (seed, stream index) through
/// SplitMix64, so replication r draws the same numbers whatever order the
/// replications run in.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t next() noexcept;
  std::uint64_t operator()() noexcept { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  /// Uniform on (0, 1): the top 53 bits, offset by half an ulp.
  double uniform() noexcept;
  /// Standard normal by the Marsaglia polar method (the spare variate is kept).
  double normal() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class Membership {
  none,
  ellipsoid,  // sum theta_i^2 / a_i^2 <= 1
  hyperrect,  // |theta_i| <= a_i
};

struct SimConfig {
  SequenceSpec spec;
  Allocation alloc;
  std::vector<double> theta;
  std::size_t replications = 10000;
  std::uint64_t seed = 0;
  Membership membership = Membership::none;
};

struct SimReport {
  double empirical_risk = 0.0;
  double std_error = 0.0;
  double formula_risk = 0.0;
  double z_score = 0.0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
};

/// sum_i [sigma_i^2 lambda_i^2 / n_i + (1 - lambda_i)^2 theta_i^2] over the
/// coordinates of theta. Requires n_i > 0 wherever lambda_i != 0.
double linear_risk(const SequenceSpec& spec, const Allocation& alloc,
                   std::span<const double> lambda, std::span<const double> theta);

/// Draws X_i ~ N(theta_i, sigma_i^2 / n_i), forms lambda_i X_i and averages
/// the squared error over the replications.
SimReport simulate(const SimConfig& config, std::span<const double> lambda);

struct AdversarialReport {
  double max_gap = 0.0;       // max over draws of inf_lambda R(theta) minus the computed sup
  double sup_risk = 0.0;      // minimax linear risk from the ellipsoid module
  double saddle_value = 0.0;  // inf_lambda R at the least favourable theta_o
  std::vector<double> worst_theta;
  std::size_t samples = 0;
};

/// inf over lambda of the linear risk at theta:
/// sum_i theta_i^2 sigma_i^2 / (n_i theta_i^2 + sigma_i^2).
double inner_infimum(const SequenceSpec& spec, const Allocation& alloc,
                     std::span<const double> theta);

/// Random points on the boundary of E(a) (Gaussian direction rescaled in the
/// theta_i / a_i metric); reports how far the best of them exceeds the
/// computed sup.
AdversarialReport adversarial_check(const SequenceSpec& spec, const Allocation& alloc,
                                    std::size_t samples, std::uint64_t seed);

}  // namespace pinsker
