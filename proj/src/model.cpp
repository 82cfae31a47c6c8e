#include "pinsker/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pinsker {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidSpec(message);
}

void validate_law(const SequenceLaw& law, const char* which) {
  std::visit(overloaded{
                 [&](const PowerLaw& p) {
                   require(p.scale > 0.0 && std::isfinite(p.scale),
                           std::string(which) + ": power scale must be positive");
                   require(std::isfinite(p.exponent),
                           std::string(which) + ": power exponent must be finite");
                 },
                 [&](const ExponentialLaw& e) {
                   require(e.scale > 0.0 && std::isfinite(e.scale),
                           std::string(which) + ": exponential scale must be positive");
                   require(std::isfinite(e.rate),
                           std::string(which) + ": exponential rate must be finite");
                 },
                 [&](const ExplicitList& l) {
                   require(!l.values.empty(), std::string(which) + ": explicit list is empty");
                   for (double v : l.values) {
                     require(v > 0.0 && std::isfinite(v),
                             std::string(which) + ": explicit values must be positive and finite");
                   }
                 },
             },
             law);
}

const ExplicitList* as_list(const SequenceLaw& law) { return std::get_if<ExplicitList>(&law); }

// Generated law value at 1-based index i: a_i^2 (decaying) or sigma_i^2 (growing).
double generate(const SequenceLaw& law, std::size_t i, bool decaying) {
  const double x = static_cast<double>(i);
  return std::visit(overloaded{
                        [&](const PowerLaw& p) {
                          return p.scale * std::pow(x, decaying ? -p.exponent : p.exponent);
                        },
                        [&](const ExponentialLaw& e) {
                          return e.scale * std::exp(decaying ? -e.rate * x : e.rate * x);
                        },
                        [&](const ExplicitList& l) {
                          if (i == 0 || i > l.values.size()) {
                            throw std::out_of_range("explicit sequence index out of range");
                          }
                          const double v = l.values[i - 1];
                          return decaying ? v * v : v;
                        },
                    },
                    law);
}

std::size_t default_dim(const SequenceLaw& a_law, double tail_tol) {
  constexpr auto cap = SequenceSpec::max_default_dim;
  if (const auto* p = std::get_if<PowerLaw>(&a_law)) {
    const double q = p->exponent;
    if (!(q > 1.0)) return cap;
    const double d = std::ceil(std::pow(p->scale / ((q - 1.0) * tail_tol), 1.0 / (q - 1.0)));
    return static_cast<std::size_t>(std::clamp(d, 1.0, static_cast<double>(cap)));
  }
  if (const auto* e = std::get_if<ExponentialLaw>(&a_law)) {
    if (!(e->rate > 0.0)) return cap;
    const double d =
        std::ceil(std::log(e->scale / (tail_tol * (1.0 - std::exp(-e->rate)))) / e->rate);
    return static_cast<std::size_t>(std::clamp(d, 1.0, static_cast<double>(cap)));
  }
  return cap;
}

double leading_scale(const SequenceLaw& law, bool decaying) {
  return std::visit(overloaded{
                        [](const PowerLaw& p) { return p.scale; },
                        [](const ExponentialLaw& e) { return e.scale; },
                        [&](const ExplicitList& l) {
                          return decaying ? l.values.front() * l.values.front()
                                          : l.values.front();
                        },
                    },
                    law);
}

SequenceLaw rescaled(const SequenceLaw& law, double factor, bool decaying) {
  return std::visit(overloaded{
                        [&](const PowerLaw& p) -> SequenceLaw {
                          return PowerLaw{p.scale / factor, p.exponent};
                        },
                        [&](const ExponentialLaw& e) -> SequenceLaw {
                          return ExponentialLaw{e.scale / factor, e.rate};
                        },
                        [&](const ExplicitList& l) -> SequenceLaw {
                          // Explicit semi-axes are stored unsquared.
                          const double f = decaying ? std::sqrt(factor) : factor;
                          ExplicitList out{l.values};
                          for (double& v : out.values) v /= f;
                          return out;
                        },
                    },
                    law);
}

}  // namespace

SequenceSpec::SequenceSpec(SequenceLaw a, SequenceLaw sigma2, std::size_t dim, double tail_tol)
    : a_law_(std::move(a)), sigma2_law_(std::move(sigma2)), tail_tol_(tail_tol) {
  validate_law(a_law_, "a");
  validate_law(sigma2_law_, "sigma2");
  require(tail_tol_ > 0.0 && std::isfinite(tail_tol_), "tail_tol must be positive");

  const auto* a_list = as_list(a_law_);
  const auto* s_list = as_list(sigma2_law_);
  std::size_t d = dim;
  if (a_list && s_list) {
    require(a_list->values.size() == s_list->values.size(),
            "explicit a and sigma2 lists must have equal length");
  }
  if (a_list || s_list) {
    const std::size_t len = a_list ? a_list->values.size() : s_list->values.size();
    require(d == 0 || d == len, "D must match the explicit list length");
    d = len;
  } else if (d == 0) {
    d = default_dim(a_law_, tail_tol_);
  }

  a_.resize(d);
  sigma2_.resize(d);
  for (std::size_t i = 1; i <= d; ++i) {
    a_[i - 1] = std::sqrt(generate(a_law_, i, true));
    sigma2_[i - 1] = generate(sigma2_law_, i, false);
    require(a_[i - 1] > 0.0 && std::isfinite(a_[i - 1]),
            "a_" + std::to_string(i) + " is not strictly positive and finite");
    require(sigma2_[i - 1] > 0.0 && std::isfinite(sigma2_[i - 1]),
            "sigma2_" + std::to_string(i) + " is not strictly positive and finite");
  }
}

SequenceSpec SequenceSpec::sobolev_ellipsoid(double alpha, double beta, std::size_t dim, double Q,
                                             double s2) {
  require(alpha > 0.0, "sobolev_ellipsoid: alpha must be positive");
  require(beta > -0.5, "sobolev_ellipsoid: beta must exceed -1/2");
  require(dim > 0, "sobolev_ellipsoid: dim must be positive");
  return SequenceSpec(PowerLaw{Q, 2.0 * alpha}, PowerLaw{s2, 2.0 * beta}, dim);
}

SequenceSpec SequenceSpec::sobolev_hyperrect(double alpha, double beta, std::size_t dim, double Q,
                                             double s2, double tail_tol) {
  require(alpha > 0.0, "sobolev_hyperrect: alpha must be positive");
  require(beta > -0.5, "sobolev_hyperrect: beta must exceed -1/2");
  return SequenceSpec(PowerLaw{Q, 2.0 * alpha + 1.0}, PowerLaw{s2, 2.0 * beta}, dim, tail_tol);
}

SequenceSpec SequenceSpec::from_lists(std::vector<double> a, std::vector<double> sigma2) {
  return SequenceSpec(ExplicitList{std::move(a)}, ExplicitList{std::move(sigma2)});
}

double SequenceSpec::a_at(std::size_t i) const {
  if (i >= 1 && i <= a_.size()) return a_[i - 1];
  return std::sqrt(a_sq_at(i));
}

double SequenceSpec::a_sq_at(std::size_t i) const {
  if (i >= 1 && i <= a_.size()) return a_[i - 1] * a_[i - 1];
  if (i == 0 || !has_tail()) throw std::out_of_range("a index outside the finite sequence");
  return generate(a_law_, i, true);
}

double SequenceSpec::sigma2_at(std::size_t i) const {
  if (i >= 1 && i <= sigma2_.size()) return sigma2_[i - 1];
  if (i == 0 || !has_tail()) throw std::out_of_range("sigma2 index outside the finite sequence");
  return generate(sigma2_law_, i, false);
}

bool SequenceSpec::has_tail() const noexcept { return !as_list(a_law_) && !as_list(sigma2_law_); }

TailPolicy SequenceSpec::a_sq_tail_policy() const {
  if (const auto* p = std::get_if<PowerLaw>(&a_law_)) return TailPolicy::power(p->exponent);
  return TailPolicy::cutoff();
}

SumResult SequenceSpec::a_sq_tail(std::size_t from) const {
  if (!has_tail()) {
    if (from >= dim()) return {};
    CompensatedSum acc;
    for (std::size_t i = from; i < dim(); ++i) acc += a_[i] * a_[i];
    return {acc.value(), dim() - from, 0.0};
  }
  CompensatedSum head;
  for (std::size_t i = from; i < dim(); ++i) head += a_[i] * a_[i];
  const std::size_t start = std::max(from, dim()) + 1;
  const auto tail = sum_series([this](std::size_t i) { return generate(a_law_, i, true); }, start,
                               a_sq_tail_policy(), tail_tol_);
  return {head.value() + tail.value, (dim() > from ? dim() - from : 0) + tail.terms_used,
          tail.tail_bound};
}

bool SequenceSpec::is_nonincreasing() const noexcept {
  return std::adjacent_find(a_.begin(), a_.end(), std::less<>()) == a_.end();
}

void SequenceSpec::validate_monotone() const {
  const auto it = std::adjacent_find(a_.begin(), a_.end(), std::less<>());
  if (it != a_.end()) {
    throw InvalidSpec("a must be nonincreasing; a_" + std::to_string(it - a_.begin() + 1) +
                      " < a_" + std::to_string(it - a_.begin() + 2));
  }
}

// ---------------------------------------------------------------------------

Allocation::Allocation(std::vector<double> counts) : n_(std::move(counts)) {
  for (double v : n_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("allocation entries must be finite and nonnegative");
    }
  }
}

double Allocation::budget() const {
  CompensatedSum acc;
  for (double v : n_) acc += v;
  return acc.value();
}

Allocation Allocation::padded(std::size_t dim) const {
  if (n_.size() > dim) {
    throw std::invalid_argument("allocation is longer than the sequence dimension");
  }
  std::vector<double> out(n_);
  out.resize(dim, 0.0);
  return Allocation(std::move(out));
}

Pattern Pattern::truncation(std::size_t d, std::size_t dim) {
  Pattern p = zeros(dim);
  std::fill_n(p.delta.begin(), std::min(d, dim), std::uint8_t{1});
  return p;
}

Allocation UniformAllocation::expand(std::size_t dim) const {
  if (!(level >= 0.0) || !std::isfinite(level)) {
    throw std::invalid_argument("uniform level must be finite and nonnegative");
  }
  const std::size_t d = truncation ? std::min(*truncation, dim) : dim;
  std::vector<double> n(dim, 0.0);
  std::fill_n(n.begin(), d, level);
  return Allocation(std::move(n));
}

double budget(const Allocation& alloc) { return alloc.budget(); }

double budget(const UniformAllocation& uniform, std::size_t dim) {
  return uniform.expand(dim).budget();
}

Allocation apply_pattern(const Allocation& alloc, const Pattern& pattern) {
  std::vector<double> out(std::max(alloc.size(), pattern.delta.size()), 0.0);
  for (std::size_t i = 0; i < alloc.size() && i < pattern.delta.size(); ++i) {
    if (pattern.delta[i] > 1) throw std::invalid_argument("pattern entries must be 0 or 1");
    out[i] = pattern.delta[i] ? alloc[i] : 0.0;
  }
  return Allocation(std::move(out));
}

NormalizedSpec normalize_spec(const SequenceSpec& spec) {
  const double scale_a = leading_scale(spec.a_law(), true);
  const double scale_noise = leading_scale(spec.sigma2_law(), false);
  SequenceSpec unit(rescaled(spec.a_law(), scale_a, true),
                    rescaled(spec.sigma2_law(), scale_noise, false),
                    spec.has_tail() ? spec.dim() : 0, spec.tail_tol());
  return {std::move(unit), scale_a, scale_noise};
}

}  // namespace pinsker
