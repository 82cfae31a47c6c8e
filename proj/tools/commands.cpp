#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "pinsker/asymptotics.hpp"
#include "pinsker/ellipsoid.hpp"
#include "pinsker/hyperrect.hpp"
#include "pinsker/io.hpp"
#include "pinsker/montecarlo.hpp"

namespace pinsker::cli {

namespace {

using json = nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError(std::string(what) + ": cannot parse \"" + item + "\" as a number");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + " is empty");
  return out;
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError(std::string(what) + " must look like lo:hi");
  const auto lo = parse_list(text.substr(0, colon), what);
  const auto hi = parse_list(text.substr(colon + 1), what);
  if (lo.size() != 1 || hi.size() != 1 || !(lo[0] < hi[0])) {
    throw UsageError(std::string(what) + " must look like lo:hi with lo < hi");
  }
  return {lo[0], hi[0]};
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw UsageError("--grid must look like WxH");
  try {
    const long w = std::stol(text.substr(0, x));
    const long h = std::stol(text.substr(x + 1));
    if (w < 2 || h < 2) throw UsageError("--grid dimensions must be at least 2");
    return {static_cast<std::size_t>(w), static_cast<std::size_t>(h)};
  } catch (const std::logic_error&) {
    throw UsageError("--grid must look like WxH");
  }
}

// Output sink: --out path or the supplied stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open \"" + path + "\" for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void emit_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

void emit_key_values(std::ostream& out, const std::vector<std::pair<std::string, double>>& rows) {
  out << "quantity,value\n";
  for (const auto& [k, v] : rows) out << k << ',' << io::format_real(v) << '\n';
}

void emit_vector_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
  std::vector<std::vector<double>> rows;
  const std::size_t len = columns.empty() ? 0 : columns[0].size();
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<double> row{static_cast<double>(i + 1)};
    for (const auto& c : columns) row.push_back(c[i]);
    rows.push_back(std::move(row));
  }
  io::write_csv(out, header, rows);
}

struct Common {
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", c.out, "Write output to this path instead of stdout");
}

Allocation allocation_from(const SequenceSpec& spec, const std::string& alloc_text,
                           std::optional<double> uniform, std::optional<std::size_t> truncate) {
  if (!alloc_text.empty() && uniform) throw UsageError("give either --alloc or --uniform, not both");
  if (!alloc_text.empty()) {
    std::vector<double> n = parse_list(alloc_text, "--alloc");
    if (n.size() > spec.dim()) throw UsageError("--alloc is longer than the spec dimension");
    return Allocation(std::move(n));
  }
  if (uniform) return UniformAllocation{*uniform, truncate}.expand(spec.dim());
  throw UsageError("an allocation is required: --alloc n1,n2,... or --uniform k");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measurement allocation and minimax linear risk for Gaussian sequence models",
               "pinsker"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pinsker 0.1.0");

  // risk ---------------------------------------------------------------------
  struct {
    Common c;
    std::string spec, set = "ellipsoid", alloc;
    std::optional<double> uniform;
    std::optional<std::size_t> truncate;
  } risk;
  auto* risk_cmd = app.add_subcommand("risk", "Minimax linear risk of a given allocation");
  add_common(risk_cmd, risk.c);
  risk_cmd->add_option("--spec", risk.spec, "Spec JSON file or inline JSON")->required();
  risk_cmd->add_option("--set", risk.set)->check(CLI::IsMember({"ellipsoid", "hyperrect"}))->capture_default_str();
  risk_cmd->add_option("--alloc", risk.alloc, "Comma-separated counts n_1,n_2,...");
  risk_cmd->add_option("--uniform", risk.uniform, "Uniform level k");
  risk_cmd->add_option("--truncate", risk.truncate, "Truncation d for --uniform");

  // allocate -----------------------------------------------------------------
  struct {
    Common c;
    std::string spec, set = "ellipsoid", method;
    double budget = 0.0;
    std::string dims;
  } alloc;
  auto* alloc_cmd = app.add_subcommand("allocate", "Optimal or sub-optimal allocation of a budget");
  add_common(alloc_cmd, alloc.c);
  alloc_cmd->add_option("--spec", alloc.spec, "Spec JSON file or inline JSON")->required();
  alloc_cmd->add_option("--budget", alloc.budget, "Total budget n")->required();
  alloc_cmd->add_option("--set", alloc.set)->check(CLI::IsMember({"ellipsoid", "hyperrect"}))->capture_default_str();
  alloc_cmd->add_option("--method", alloc.method, "exact | suboptimal | numeric | truncated-uniform")
      ->check(CLI::IsMember({"exact", "suboptimal", "numeric", "truncated-uniform"}));
  alloc_cmd->add_option("--dims", alloc.dims, "Support sizes lo:hi searched by the numeric method");

  // table --------------------------------------------------------------------
  struct {
    Common c;
    int which = 1;
  } table;
  auto* table_cmd = app.add_subcommand("table", "Limit risk ratio tables");
  add_common(table_cmd, table.c);
  table.c.format = "csv";
  table_cmd->add_option("--which", table.which, "1 (ellipsoid) or 2 (hyperrectangle)")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();

  // contour ------------------------------------------------------------------
  struct {
    Common c;
    std::string alpha = "0.02:3", beta = "0.5:2.2", grid = "400x400", summary;
    bool linear_alpha = false;
  } contour;
  auto* contour_cmd = app.add_subcommand("contour", "Grid of rho_E and the region where it drops below 1");
  add_common(contour_cmd, contour.c);
  contour_cmd->add_option("--alpha", contour.alpha, "alpha range lo:hi")->capture_default_str();
  contour_cmd->add_option("--beta", contour.beta, "beta range lo:hi")->capture_default_str();
  contour_cmd->add_option("--grid", contour.grid, "Resolution WxH (alpha x beta)")->capture_default_str();
  contour_cmd->add_flag("--linear-alpha", contour.linear_alpha, "Space alpha linearly");
  contour_cmd->add_option("--summary", contour.summary, "With --format csv: also write the JSON summary here");

  // constants ----------------------------------------------------------------
  struct {
    Common c;
    double alpha = 1.0, beta = 0.0;
  } consts;
  auto* const_cmd = app.add_subcommand("constants", "Asymptotic constants for Sobolev classes");
  add_common(const_cmd, consts.c);
  const_cmd->add_option("--alpha", consts.alpha)->capture_default_str();
  const_cmd->add_option("--beta", consts.beta)->capture_default_str();

  // verify -------------------------------------------------------------------
  struct {
    Common c;
    std::string suite = "all";
    std::uint64_t seed = 42;
  } verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  add_common(verify_cmd, verify.c);
  verify_cmd->add_option("--suite", verify.suite)
      ->check(CLI::IsMember({"beta-inequalities", "mc", "identities", "convergence", "all"}))
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed)->capture_default_str();

  // simulate -----------------------------------------------------------------
  struct {
    Common c;
    std::string spec, alloc, theta, lambda, membership = "none";
    std::optional<double> uniform;
    std::optional<std::size_t> truncate;
    bool saddle = false;
    std::size_t reps = 10000, adversarial = 0;
    std::uint64_t seed = 42;
  } sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo risk of a linear estimator");
  add_common(sim_cmd, sim.c);
  sim_cmd->add_option("--spec", sim.spec, "Spec JSON file or inline JSON")->required();
  sim_cmd->add_option("--alloc", sim.alloc, "Comma-separated counts");
  sim_cmd->add_option("--uniform", sim.uniform, "Uniform level k");
  sim_cmd->add_option("--truncate", sim.truncate, "Truncation d for --uniform");
  sim_cmd->add_option("--theta", sim.theta, "Comma-separated theta");
  sim_cmd->add_option("--lambda", sim.lambda, "Comma-separated estimator weights");
  sim_cmd->add_flag("--saddle", sim.saddle, "Use the ellipsoid saddle point (lambda_o, theta_o)");
  sim_cmd->add_option("--membership", sim.membership)
      ->check(CLI::IsMember({"none", "ellipsoid", "hyperrect"}))
      ->capture_default_str();
  sim_cmd->add_option("--reps", sim.reps)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--adversarial", sim.adversarial, "Also draw this many boundary points of E(a)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "pinsker 0.1.0\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    if (risk_cmd->parsed()) {
      const SequenceSpec spec = io::load_spec(risk.spec);
      const Allocation n = allocation_from(spec, risk.alloc, risk.uniform, risk.truncate);
      Sink sink(risk.c.out, out);
      if (risk.set == "ellipsoid") {
        const auto sol = ellipsoid::risk(spec, n);
        json doc = io::to_json(sol);
        doc["budget"] = n.budget();
        if (risk.c.format == "json") {
          emit_json(*sink, doc);
        } else {
          emit_key_values(*sink, {{"risk", sol.risk},
                                  {"t", sol.t},
                                  {"active_dim", static_cast<double>(sol.active_dim)},
                                  {"effective_budget", sol.effective_budget},
                                  {"budget", n.budget()}});
        }
      } else {
        const double r = hyperrect::risk(spec, n);
        if (risk.c.format == "json") {
          emit_json(*sink, {{"set", "hyperrect"}, {"risk", r}, {"budget", n.budget()}});
        } else {
          emit_key_values(*sink, {{"risk", r}, {"budget", n.budget()}});
        }
      }
      return kOk;
    }

    if (alloc_cmd->parsed()) {
      const SequenceSpec spec = io::load_spec(alloc.spec);
      std::string method = alloc.method;
      if (method.empty()) method = alloc.set == "ellipsoid" ? "numeric" : "exact";
      json doc;
      Allocation n;
      if (alloc.set == "ellipsoid") {
        if (method == "exact" || method == "truncated-uniform") {
          throw UsageError("method \"" + method + "\" is available for --set hyperrect only");
        }
        if (method == "suboptimal") {
          const auto sol = ellipsoid::suboptimal_allocation(spec, alloc.budget);
          doc = io::to_json(sol);
          n = sol.alloc;
        } else {
          DimRange dims;
          if (!alloc.dims.empty()) {
            const auto [lo, hi] = parse_range(alloc.dims, "--dims");
            if (lo < 1) throw UsageError("--dims must start at 1 or above");
            dims = {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
          }
          const auto sol = ellipsoid::optimal_allocation(spec, alloc.budget, dims);
          doc = io::to_json(sol);
          n = sol.alloc;
        }
      } else {
        if (method == "suboptimal" || method == "numeric") {
          throw UsageError("method \"" + method + "\" is available for --set ellipsoid only");
        }
        if (method == "truncated-uniform") {
          const auto tu = hyperrect::truncated_uniform_best(spec, alloc.budget);
          doc = io::to_json(tu);
          doc["set"] = "hyperrect";
          doc["method"] = "truncated-uniform";
          n = UniformAllocation{tu.k, tu.d}.expand(std::max(tu.d, std::size_t{1}));
          doc["allocation"] = io::to_json(n);
        } else {
          HyperrectSolution sol;
          try {
            sol = hyperrect::optimal_allocation(spec, alloc.budget);
          } catch (const TruncationError&) {
            throw;
          } catch (const std::invalid_argument&) {
            sol = hyperrect::optimal_allocation_general(spec, alloc.budget);
          }
          doc = io::to_json(sol);
          n = sol.alloc;
        }
      }
      Sink sink(alloc.c.out, out);
      if (alloc.c.format == "json") {
        emit_json(*sink, doc);
      } else {
        std::vector<double> counts(n.counts().begin(), n.counts().end());
        emit_vector_csv(*sink, {"i", "n"}, {counts});
      }
      return kOk;
    }

    if (table_cmd->parsed()) {
      const auto cells = ratio_table(table.which);
      Sink sink(table.c.out, out);
      if (table.c.format == "json") {
        emit_json(*sink, {{"table", table.which},
                          {"ratio", table.which == 1 ? "rho_E" : "rho_H"},
                          {"cells", io::to_json(cells)}});
      } else {
        *sink << "beta,alpha,rounded,value\n";
        for (const auto& c : cells) {
          char rounded[32];
          std::snprintf(rounded, sizeof rounded, "%.*f", c.decimals, c.printed);
          *sink << io::format_real(c.beta) << ',' << io::format_real(c.alpha) << ',' << rounded << ','
                << io::format_real(c.value) << '\n';
        }
      }
      return kOk;
    }

    if (contour_cmd->parsed()) {
      ContourOptions o;
      std::tie(o.alpha_lo, o.alpha_hi) = parse_range(contour.alpha, "--alpha");
      std::tie(o.beta_lo, o.beta_hi) = parse_range(contour.beta, "--beta");
      std::tie(o.alpha_points, o.beta_points) = parse_grid(contour.grid);
      o.log_alpha = !contour.linear_alpha;
      const auto res = contour_grid(o);
      json summary = io::contour_summary(res);
      summary["alpha_range"] = {o.alpha_lo, o.alpha_hi};
      summary["beta_range"] = {o.beta_lo, o.beta_hi};
      summary["grid"] = {o.alpha_points, o.beta_points};
      summary["alpha_spacing"] = o.log_alpha ? "log" : "linear";
      Sink sink(contour.c.out, out);
      if (contour.c.format == "json") {
        emit_json(*sink, summary);
      } else {
        std::vector<std::vector<double>> rows;
        rows.reserve(res.grid.size());
        for (const auto& g : res.grid) rows.push_back({g.alpha, g.beta, g.value});
        io::write_csv(*sink, {"alpha", "beta", "value"}, rows);
        if (!contour.summary.empty()) {
          Sink s2(contour.summary, out);
          emit_json(*s2, summary);
        }
      }
      return kOk;
    }

    if (const_cmd->parsed()) {
      const auto values = constants({consts.alpha, consts.beta});
      Sink sink(consts.c.out, out);
      if (consts.c.format == "json") {
        emit_json(*sink, {{"alpha", consts.alpha}, {"beta", consts.beta}, {"constants", io::to_json(values)}});
      } else {
        std::vector<std::pair<std::string, double>> rows;
        for (const auto& v : values) rows.emplace_back(std::string(constant_name(v.id)), v.value);
        emit_key_values(*sink, rows);
      }
      return kOk;
    }

    if (verify_cmd->parsed()) {
      if (verify.c.format != "json") throw UsageError("verify reports are JSON only");
      const SuiteResult res = run_suite(verify.suite, verify.seed);
      Sink sink(verify.c.out, out);
      emit_json(*sink, res.report);
      return res.hard_failure ? kVerificationFailed : kOk;
    }

    if (sim_cmd->parsed()) {
      const SequenceSpec spec = io::load_spec(sim.spec);
      const Allocation n = allocation_from(spec, sim.alloc, sim.uniform, sim.truncate);
      std::vector<double> theta, lambda;
      Membership membership = sim.membership == "ellipsoid"   ? Membership::ellipsoid
                              : sim.membership == "hyperrect" ? Membership::hyperrect
                                                              : Membership::none;
      if (sim.saddle) {
        if (!sim.theta.empty() || !sim.lambda.empty()) {
          throw UsageError("--saddle replaces --theta and --lambda");
        }
        const auto sol = ellipsoid::risk(spec, n);
        for (double t2 : sol.theta_sq) theta.push_back(std::sqrt(t2));
        lambda = sol.lambda;
        if (membership == Membership::none) membership = Membership::ellipsoid;
      } else {
        if (sim.theta.empty() || sim.lambda.empty()) {
          throw UsageError("give --theta and --lambda, or --saddle");
        }
        theta = parse_list(sim.theta, "--theta");
        lambda = parse_list(sim.lambda, "--lambda");
      }
      SimConfig cfg{spec, n, theta, sim.reps, sim.seed, membership};
      const SimReport rep = simulate(cfg, lambda);
      json doc = io::to_json(rep);
      doc["theta"] = theta;
      doc["lambda"] = lambda;
      if (sim.adversarial > 0) doc["adversarial"] = io::to_json(adversarial_check(spec, n, sim.adversarial, sim.seed));
      Sink sink(sim.c.out, out);
      if (sim.c.format == "json") {
        emit_json(*sink, doc);
      } else {
        emit_key_values(*sink, {{"empirical_risk", rep.empirical_risk},
                                {"std_error", rep.std_error},
                                {"formula_risk", rep.formula_risk},
                                {"z_score", rep.z_score}});
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InvalidSpec& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InfiniteRisk& e) {
    err << "error: infinite risk: " << e.what() << '\n';
    return kComputationError;
  } catch (const EmptyAllocation& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const NoSignChange& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
  return kInvalidInput;
}

}  // namespace pinsker::cli
