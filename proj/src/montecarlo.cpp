#include "pinsker/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pinsker/ellipsoid.hpp"

namespace pinsker {

std::uint64_t SplitMix64::next() noexcept {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) noexcept {
  SplitMix64 outer(seed);
  SplitMix64 sm(outer.next() ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
  for (auto& w : s_) w = sm.next();
}

std::uint64_t Xoshiro256pp::next() noexcept {
  const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double Xoshiro256pp::uniform() noexcept {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Xoshiro256pp::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

namespace {

void check_lambda(const SequenceSpec& spec, const Allocation& alloc,
                  std::span<const double> lambda, std::span<const double> theta) {
  if (theta.size() > spec.dim()) throw std::invalid_argument("theta is longer than D");
  if (lambda.size() != theta.size()) {
    throw std::invalid_argument("lambda and theta must have equal length");
  }
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!std::isfinite(lambda[i]) || !std::isfinite(theta[i])) {
      throw std::invalid_argument("lambda and theta must be finite");
    }
    if (lambda[i] != 0.0 && !(alloc.at_or_zero(i) > 0.0)) {
      throw std::invalid_argument("lambda_" + std::to_string(i + 1) +
                                  " is nonzero but the coordinate has no measurements");
    }
  }
}

void check_membership(const SequenceSpec& spec, std::span<const double> theta, Membership m) {
  const auto a = spec.a();
  if (m == Membership::ellipsoid) {
    CompensatedSum q;
    for (std::size_t i = 0; i < theta.size(); ++i) q += theta[i] * theta[i] / (a[i] * a[i]);
    if (q.value() > 1.0 + 1e-12) throw std::invalid_argument("theta lies outside the ellipsoid");
  } else if (m == Membership::hyperrect) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (std::abs(theta[i]) > a[i] * (1.0 + 1e-12)) {
        throw std::invalid_argument("theta lies outside the hyperrectangle");
      }
    }
  }
}

}  // namespace

double linear_risk(const SequenceSpec& spec, const Allocation& alloc,
                   std::span<const double> lambda, std::span<const double> theta) {
  check_lambda(spec, alloc, lambda, theta);
  const auto s2 = spec.sigma2();
  CompensatedSum r;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double bias = (1.0 - lambda[i]) * theta[i];
    r += bias * bias;
    if (lambda[i] != 0.0) r += s2[i] * lambda[i] * lambda[i] / alloc[i];
  }
  return r.value();
}

SimReport simulate(const SimConfig& config, std::span<const double> lambda) {
  if (config.replications == 0) throw std::invalid_argument("replications must be at least 1");
  const auto& spec = config.spec;
  const std::span<const double> theta = config.theta;
  check_lambda(spec, config.alloc, lambda, theta);
  check_membership(spec, theta, config.membership);

  const auto s2 = spec.sigma2();
  std::vector<double> sd(theta.size(), 0.0);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (lambda[i] != 0.0) sd[i] = std::sqrt(s2[i] / config.alloc[i]);
  }

  const std::size_t R = config.replications;
  std::vector<double> losses(R);
  for (std::size_t r = 0; r < R; ++r) {
    Xoshiro256pp rng(config.seed, r);
    CompensatedSum loss;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      double err;
      if (lambda[i] == 0.0) {
        err = theta[i];
      } else {
        const double x = theta[i] + sd[i] * rng.normal();
        err = lambda[i] * x - theta[i];
      }
      loss += err * err;
    }
    losses[r] = loss.value();
  }

  CompensatedSum total;
  for (double l : losses) total += l;
  const double mean = total.value() / static_cast<double>(R);
  CompensatedSum dev;
  for (double l : losses) dev += (l - mean) * (l - mean);

  SimReport rep;
  rep.replications = R;
  rep.seed = config.seed;
  rep.empirical_risk = mean;
  rep.std_error = R > 1 ? std::sqrt(dev.value() / static_cast<double>(R - 1) / static_cast<double>(R))
                        : 0.0;
  rep.formula_risk = linear_risk(spec, config.alloc, lambda, theta);
  const double diff = rep.empirical_risk - rep.formula_risk;
  if (rep.std_error > 0.0) {
    rep.z_score = diff / rep.std_error;
  } else {
    rep.z_score = std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(rep.formula_risk))
                      ? 0.0
                      : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return rep;
}

double inner_infimum(const SequenceSpec& spec, const Allocation& alloc,
                     std::span<const double> theta) {
  if (theta.size() > spec.dim()) throw std::invalid_argument("theta is longer than D");
  const auto s2 = spec.sigma2();
  CompensatedSum r;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double th2 = theta[i] * theta[i];
    const double n = alloc.at_or_zero(i);
    r += n > 0.0 ? th2 * s2[i] / (n * th2 + s2[i]) : th2;
  }
  return r.value();
}

AdversarialReport adversarial_check(const SequenceSpec& spec, const Allocation& alloc,
                                    std::size_t samples, std::uint64_t seed) {
  const EllipsoidSolution sol = ellipsoid::risk(spec, alloc);
  const auto a = spec.a();
  const std::size_t D = spec.dim();

  AdversarialReport rep;
  rep.sup_risk = sol.risk;
  rep.samples = samples;
  std::vector<double> theta_o(D);
  for (std::size_t i = 0; i < D; ++i) theta_o[i] = std::sqrt(sol.theta_sq[i]);
  rep.saddle_value = inner_infimum(spec, alloc, theta_o);

  rep.max_gap = -std::numeric_limits<double>::infinity();
  std::vector<double> theta(D);
  for (std::size_t k = 0; k < samples; ++k) {
    Xoshiro256pp rng(seed, k);
    double norm = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const double g = rng.normal();
      theta[i] = g;
      norm += g * g;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (std::size_t i = 0; i < D; ++i) theta[i] = a[i] * theta[i] / norm;
    const double gap = inner_infimum(spec, alloc, theta) - sol.risk;
    if (gap > rep.max_gap) {
      rep.max_gap = gap;
      rep.worst_theta = theta;
    }
  }
  if (samples == 0) rep.max_gap = 0.0;
  return rep;
}

}  // namespace pinsker
