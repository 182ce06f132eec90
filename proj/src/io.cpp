#include "cqaoa/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cqaoa {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw std::invalid_argument("bad JSON: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    schema_error(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const LinearFunction& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) terms.push_back(Json::array({t.var, t.coeff}));
  return Json{{"constant", f.constant()}, {"terms", std::move(terms)}};
}

LinearFunction linear_from_json(const Json& j) {
  LinearFunction f(get<double>(j, "constant"));
  const auto& terms = field(j, "terms");
  if (!terms.is_array()) schema_error("'terms' must be an array");
  for (const auto& t : terms) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_number_unsigned() || !t[1].is_number()) {
      schema_error("each term must be [index, coeff]");
    }
    f.add(t[0].get<std::size_t>(), t[1].get<double>());
  }
  return f;
}

Json to_json(const ConstrainedProblem& p) {
  Json groups = Json::array();
  for (const auto& g : p.groups()) groups.push_back(g.members);
  Json ineqs = Json::array();
  for (const auto& g : p.inequalities()) ineqs.push_back(to_json(g));
  return Json{{"n_vars", p.n_vars()},
              {"sense", p.sense() == Sense::minimize ? "minimize" : "maximize"},
              {"objective", to_json(p.original_objective())},
              {"one_hot_groups", std::move(groups)},
              {"inequalities", std::move(ineqs)}};
}

ConstrainedProblem problem_from_json(const Json& j) {
  const auto n = get<std::size_t>(j, "n_vars");
  const auto sense_name = get<std::string>(j, "sense");
  Sense sense;
  if (sense_name == "minimize") {
    sense = Sense::minimize;
  } else if (sense_name == "maximize") {
    sense = Sense::maximize;
  } else {
    schema_error("sense must be 'minimize' or 'maximize'");
  }
  std::vector<OneHotGroup> groups;
  for (const auto& g : field(j, "one_hot_groups")) {
    try {
      groups.push_back(OneHotGroup{g.get<std::vector<std::size_t>>()});
    } catch (const nlohmann::json::exception&) {
      schema_error("one_hot_groups must be arrays of indices");
    }
  }
  std::vector<LinearFunction> ineqs;
  for (const auto& g : field(j, "inequalities")) ineqs.push_back(linear_from_json(g));
  return ConstrainedProblem(n, linear_from_json(field(j, "objective")), sense, std::move(groups), std::move(ineqs));
}

Json to_json(const MksSpec& s) {
  return Json{{"values", s.values}, {"weights", s.weights}, {"capacities", s.capacities}};
}

MksSpec mks_spec_from_json(const Json& j) {
  MksSpec s;
  s.values = get<std::vector<std::int64_t>>(j, "values");
  s.weights = get<std::vector<std::vector<std::int64_t>>>(j, "weights");
  s.capacities = get<std::vector<std::int64_t>>(j, "capacities");
  check_spec(s);
  return s;
}

Json to_json(const PpSpec& s) {
  return Json{{"horizon", s.horizon}, {"loads", s.loads}, {"rates", s.rates}, {"capacity", s.capacity}};
}

PpSpec pp_spec_from_json(const Json& j) {
  PpSpec s;
  s.horizon = get<std::size_t>(j, "horizon");
  s.loads = get<std::vector<std::vector<std::int64_t>>>(j, "loads");
  s.rates = get<std::vector<double>>(j, "rates");
  s.capacity = get<std::int64_t>(j, "capacity");
  check_spec(s);
  return s;
}

Json to_json(const Instance& inst) {
  Json j = to_json(inst.problem);
  j["meta"] = Json{{"family", inst.family}, {"spec", inst.spec}, {"seed", inst.seed}};
  return j;
}

Instance instance_from_json(const Json& j, std::string name) {
  Instance inst;
  inst.name = std::move(name);
  inst.problem = problem_from_json(j);
  if (j.contains("meta")) {
    const auto& meta = j.at("meta");
    inst.family = get<std::string>(meta, "family");
    inst.spec = meta.value("spec", Json::object());
    inst.seed = meta.value("seed", std::uint64_t{0});
  }
  return inst;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

Instance read_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path), path.stem().string());
}

Json to_json(const Schedule& s) { return Json{{"gammas", s.gammas}, {"betas", s.betas}}; }

Json to_json(const RunReport& r, bool with_timing) {
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  Json j{{"p", r.p},
         {"expectation", r.expectation},
         {"raar", num(r.raar)},
         {"p_star", r.p_star},
         {"p90", r.p90},
         {"feasible_probability", r.feasible_probability},
         {"layers", r.layers},
         {"tts", num(r.tts)},
         {"iterations", r.iterations},
         {"evaluations", r.evaluations},
         {"schedule", to_json(r.schedule)}};
  if (with_timing) j["wall_ms"] = r.wall_ms;
  return j;
}

}  // namespace cqaoa
