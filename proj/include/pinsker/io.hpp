#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinsker/asymptotics.hpp"
#include "pinsker/ellipsoid.hpp"
#include "pinsker/hyperrect.hpp"
#include "pinsker/model.hpp"
#include "pinsker/montecarlo.hpp"

namespace pinsker::io {

using json = nlohmann::json;

/// Spec document:
///   {"a":      {"kind": "power" | "exp_decay" | "explicit", "params": {...}},
///    "sigma2": {"kind": "power" | "exp_growth" | "explicit", "params": {...}},
///    "D": <count, optional>, "tail_tol": <real, optional>}
/// a params: power {Q, exponent}, exp_decay {Q, rate}, explicit {values};
/// sigma2 params: power {sigma2, exponent}, exp_growth {sigma2, rate}, explicit {values}.
/// Throws InvalidSpec on any structural or value error.
SequenceSpec spec_from_json(const json& doc);
json spec_to_json(const SequenceSpec& spec);

/// Reads a spec from a path, or parses the argument itself when it starts with '{'.
SequenceSpec load_spec(const std::string& path_or_inline);

json to_json(const Allocation& alloc);
json to_json(const EllipsoidSolution& sol);
json to_json(const SubOptimalSolution& sol);
json to_json(const NumericAllocation& sol);
json to_json(const HyperrectSolution& sol);
json to_json(const TruncatedUniform& tu);
json to_json(const SimReport& rep);
json to_json(const AdversarialReport& rep);
json to_json(const SobolevParams& p);
json to_json(const std::vector<ConstantValue>& values);
json to_json(const std::vector<TableCell>& cells);
json contour_summary(const ContourResult& res);
json to_json(const SweepResult& res);

/// Formats with %.17g (round-trip precision).
std::string format_real(double x);

/// Comma-separated rows with a header line.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace pinsker::io
