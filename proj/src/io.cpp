#include "pinsker/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pinsker::io {

namespace {

[[noreturn]] void fail(const std::string& message) { throw InvalidSpec("spec: " + message); }

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where + " is missing \"" + key + "\"");
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) fail(where + "." + key + " must be a number");
  return v.get<double>();
}

std::vector<double> number_list(const json& obj, const std::string& where) {
  const json& v = field(obj, "values", where);
  if (!v.is_array()) fail(where + ".values must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(where + ".values must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

SequenceLaw parse_law(const json& doc, bool decaying) {
  const std::string where = decaying ? "a" : "sigma2";
  if (!doc.is_object()) fail(where + " must be an object");
  const json& kind_node = field(doc, "kind", where);
  if (!kind_node.is_string()) fail(where + ".kind must be a string");
  const auto kind = kind_node.get<std::string>();
  const json& params = field(doc, "params", where);
  const std::string pw = where + ".params";
  const char* scale_key = decaying ? "Q" : "sigma2";
  if (kind == "power") return PowerLaw{number(params, scale_key, pw), number(params, "exponent", pw)};
  if (kind == (decaying ? "exp_decay" : "exp_growth")) {
    return ExponentialLaw{number(params, scale_key, pw), number(params, "rate", pw)};
  }
  if (kind == "explicit") return ExplicitList{number_list(params, pw)};
  fail(where + ".kind \"" + kind + "\" is not recognised");
}

json law_to_json(const SequenceLaw& law, bool decaying) {
  const char* scale_key = decaying ? "Q" : "sigma2";
  if (const auto* p = std::get_if<PowerLaw>(&law)) {
    return {{"kind", "power"}, {"params", {{scale_key, p->scale}, {"exponent", p->exponent}}}};
  }
  if (const auto* e = std::get_if<ExponentialLaw>(&law)) {
    return {{"kind", decaying ? "exp_decay" : "exp_growth"},
            {"params", {{scale_key, e->scale}, {"rate", e->rate}}}};
  }
  return {{"kind", "explicit"}, {"params", {{"values", std::get<ExplicitList>(law).values}}}};
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

}  // namespace

SequenceSpec spec_from_json(const json& doc) {
  if (!doc.is_object()) fail("document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "a" && key != "sigma2" && key != "D" && key != "tail_tol") {
      fail("unknown key \"" + key + "\"");
    }
  }
  SequenceLaw a = parse_law(field(doc, "a", "spec"), true);
  SequenceLaw s2 = parse_law(field(doc, "sigma2", "spec"), false);
  std::size_t D = 0;
  if (doc.contains("D")) {
    const json& d = doc.at("D");
    if (!d.is_number_integer() || d.get<long long>() < 1) fail("D must be a positive integer");
    D = d.get<std::size_t>();
  }
  double tail_tol = 1e-12;
  if (doc.contains("tail_tol")) tail_tol = number(doc, "tail_tol", "spec");
  return SequenceSpec(std::move(a), std::move(s2), D, tail_tol);
}

json spec_to_json(const SequenceSpec& spec) {
  return {{"a", law_to_json(spec.a_law(), true)},
          {"sigma2", law_to_json(spec.sigma2_law(), false)},
          {"D", spec.dim()},
          {"tail_tol", spec.tail_tol()}};
}

SequenceSpec load_spec(const std::string& path_or_inline) {
  std::string text;
  const auto first = path_or_inline.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && path_or_inline[first] == '{') {
    text = path_or_inline;
  } else {
    std::ifstream in(path_or_inline);
    if (!in) fail("cannot open \"" + path_or_inline + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  return spec_from_json(doc);
}

json to_json(const Allocation& alloc) { return vec(alloc.counts()); }

json to_json(const EllipsoidSolution& sol) {
  return {{"set", "ellipsoid"},
          {"risk", sol.risk},
          {"t", sol.t},
          {"active_dim", sol.active_dim},
          {"effective_budget", sol.effective_budget},
          {"truncation_exact", sol.truncation_exact},
          {"lambda", sol.lambda},
          {"theta_sq", sol.theta_sq}};
}

json to_json(const SubOptimalSolution& sol) {
  return {{"set", "ellipsoid"},
          {"method", "suboptimal"},
          {"risk", sol.risk},
          {"t_s", sol.t_s},
          {"active_dim", sol.active_dim},
          {"budget", sol.alloc.budget()},
          {"allocation", to_json(sol.alloc)}};
}

json to_json(const NumericAllocation& sol) {
  return {{"set", "ellipsoid"},
          {"method", "numeric"},
          {"risk", finite_or_null(sol.risk)},
          {"suboptimal_risk", sol.suboptimal_risk},
          {"bound_holds", sol.risk <= sol.suboptimal_risk},
          {"support", sol.support},
          {"evaluations", sol.evaluations},
          {"budget", sol.alloc.budget()},
          {"allocation", to_json(sol.alloc)}};
}

json to_json(const HyperrectSolution& sol) {
  return {{"set", "hyperrect"},
          {"method", "exact"},
          {"risk", sol.risk},
          {"risk_tail", sol.risk_tail},
          {"lagrange_mu", sol.lagrange_mu},
          {"active", sol.active},
          {"active_count", sol.active_count},
          {"prefix", sol.prefix},
          {"budget", sol.alloc.budget()},
          {"allocation", to_json(sol.alloc)}};
}

json to_json(const TruncatedUniform& tu) {
  return {{"d", tu.d}, {"k", tu.k}, {"risk", tu.risk}};
}

json to_json(const SimReport& rep) {
  return {{"empirical_risk", rep.empirical_risk},
          {"std_error", rep.std_error},
          {"formula_risk", rep.formula_risk},
          {"z_score", finite_or_null(rep.z_score)},
          {"replications", rep.replications},
          {"seed", rep.seed}};
}

json to_json(const AdversarialReport& rep) {
  return {{"max_gap", rep.max_gap},
          {"sup_risk", rep.sup_risk},
          {"saddle_value", rep.saddle_value},
          {"samples", rep.samples},
          {"worst_theta", rep.worst_theta}};
}

json to_json(const SobolevParams& p) { return {{"alpha", p.alpha}, {"beta", p.beta}}; }

json to_json(const std::vector<ConstantValue>& values) {
  json out = json::array();
  for (const auto& v : values) {
    out.push_back({{"name", std::string(constant_name(v.id))},
                   {"alpha", v.params.alpha},
                   {"beta", v.params.beta},
                   {"value", v.value}});
  }
  return out;
}

json to_json(const std::vector<TableCell>& cells) {
  json out = json::array();
  for (const auto& c : cells) {
    out.push_back({{"alpha", c.alpha},
                   {"beta", c.beta},
                   {"value", c.value},
                   {"decimals", c.decimals},
                   {"rounded", c.printed}});
  }
  return out;
}

json contour_summary(const ContourResult& res) {
  json out = {{"grid_points", res.grid.size()},
              {"sub_unit_points", res.sub_unit.size()},
              {"min_value", res.minimum.value},
              {"min_location", {res.minimum.alpha, res.minimum.beta}},
              {"grid_min_value", res.grid_minimum.value},
              {"grid_min_location", {res.grid_minimum.alpha, res.grid_minimum.beta}},
              {"S_empty", res.s_empty}};
  if (res.s_empty) {
    out["S_bounding_box"] = nullptr;
  } else {
    out["S_bounding_box"] = {{"alpha", {res.s_box.alpha_lo, res.s_box.alpha_hi}},
                             {"beta", {res.s_box.beta_lo, res.s_box.beta_hi}}};
  }
  return out;
}

json to_json(const SweepResult& res) {
  json violations = json::array();
  for (const auto& v : res.violations) {
    violations.push_back({{"alpha", v.alpha}, {"beta", v.beta}, {"lhs_over_rhs", v.value}});
  }
  return {{"points", res.points},
          {"worst_margin", res.worst_margin},
          {"violations", violations}};
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_real(row[j]);
    out << '\n';
  }
}

}  // namespace pinsker::io
