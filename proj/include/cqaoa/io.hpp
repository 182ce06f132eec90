#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "cqaoa/instances.hpp"
#include "cqaoa/problem.hpp"
#include "cqaoa/qaoa.hpp"

namespace cqaoa {

using Json = nlohmann::ordered_json;

/// {"n_vars", "sense", "objective": {"constant", "terms": [[idx, coeff]]},
///  "one_hot_groups": [[idx...]], "inequalities": [objective-shaped]}
/// The objective is written in the caller's original sense.
Json to_json(const LinearFunction& f);
LinearFunction linear_from_json(const Json& j);
Json to_json(const ConstrainedProblem& p);
/// Throws std::invalid_argument on schema errors.
ConstrainedProblem problem_from_json(const Json& j);

Json to_json(const MksSpec& s);
MksSpec mks_spec_from_json(const Json& j);
Json to_json(const PpSpec& s);
PpSpec pp_spec_from_json(const Json& j);

/// Problem JSON plus "meta": {"family", "spec", "seed"}.
struct Instance {
  std::string name;
  std::string family;  // "mks" or "pp"
  Json spec;
  std::uint64_t seed = 0;
  ConstrainedProblem problem;
};

Json to_json(const Instance& inst);
Instance instance_from_json(const Json& j, std::string name = {});

void write_json_file(const std::filesystem::path& path, const Json& j);
Json read_json_file(const std::filesystem::path& path);
Instance read_instance(const std::filesystem::path& path);

Json to_json(const Schedule& s);
Json to_json(const RunReport& r, bool with_timing = true);

}  // namespace cqaoa
