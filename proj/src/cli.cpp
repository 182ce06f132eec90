#include "cqaoa/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "cqaoa/bitcost.hpp"
#include "cqaoa/metrics.hpp"
#include "cqaoa/qaoa.hpp"

namespace cqaoa {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols{"instance", "method", "p",     "expectation", "RAAR", "P*",
                                             "P90",      "L(p)",   "TTS_p", "TTS*",        "S",    "wall_ms"};
  return cols;
}

// ---------------------------------------------------------------- generate

namespace {

void check_name(const std::string& name) {
  if (name.empty() || name.find_first_of(",/\\\n\"") != std::string::npos) {
    throw std::invalid_argument("instance name '" + name + "' must be nonempty without , / \\ or quotes");
  }
}

std::vector<fs::path> generate_entry(const Json& e, const fs::path& out_dir) {
  const auto family = e.at("family").get<std::string>();
  const auto name = e.value("name", family);
  const auto seed = e.value("seed", std::uint64_t{0});
  check_name(name);
  std::vector<fs::path> files;

  if (family == "pp") {
    PpGeneratorSpec gen;
    gen.horizon = e.at("horizon").get<std::size_t>();
    gen.loads = e.at("loads").get<std::vector<std::vector<std::int64_t>>>();
    const auto range = e.at("capacity_range").get<std::vector<std::int64_t>>();
    if (range.size() != 2) throw std::invalid_argument("capacity_range must be [lo, hi]");
    gen.capacity_min = range[0];
    gen.capacity_max = range[1];
    gen.max_attempts = e.value("max_attempts", 100);
    if (e.contains("noise")) gen.prices.noise = e.at("noise").get<double>();
    std::vector<std::string> patterns{"increasing", "decreasing", "up-quadratic", "down-quadratic"};
    if (e.contains("patterns")) patterns = e.at("patterns").get<std::vector<std::string>>();
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      gen.prices.kind = parse_price_kind(patterns[k]);
      gen.prices.seed = k;
      const auto spec = generate_pp(gen, seed + k);
      Instance inst;
      inst.name = name + "_" + std::string(price_kind_name(gen.prices.kind));
      inst.family = "pp";
      inst.spec = to_json(spec);
      inst.spec["pattern"] = price_kind_name(gen.prices.kind);
      inst.seed = seed + k;
      inst.problem = build_pp(spec);
      const auto path = out_dir / (inst.name + ".json");
      write_json_file(path, to_json(inst));
      files.push_back(path);
    }
  } else if (family == "mks") {
    std::vector<std::pair<MksSpec, std::uint64_t>> specs;
    if (e.contains("values")) {
      specs.emplace_back(mks_spec_from_json(e), seed);
    } else {
      const auto items = e.at("items").get<std::size_t>();
      const auto knapsacks = e.at("knapsacks").get<std::size_t>();
      const int count = e.value("count", 1);
      for (int k = 0; k < count; ++k) specs.emplace_back(random_mks(items, knapsacks, seed + k), seed + k);
    }
    for (std::size_t k = 0; k < specs.size(); ++k) {
      Instance inst;
      inst.name = specs.size() == 1 ? name : name + "_" + std::to_string(k);
      inst.family = "mks";
      inst.spec = to_json(specs[k].first);
      inst.seed = specs[k].second;
      inst.problem = mks_formulation(specs[k].first);
      const auto path = out_dir / (inst.name + ".json");
      write_json_file(path, to_json(inst));
      files.push_back(path);
    }
  } else {
    throw std::invalid_argument("unknown family '" + family + "'");
  }
  return files;
}

}  // namespace

std::vector<fs::path> cmd_generate(const Json& spec, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<fs::path> files;
  try {
    if (spec.contains("instances")) {
      for (const auto& e : spec.at("instances")) {
        auto f = generate_entry(e, out_dir);
        files.insert(files.end(), f.begin(), f.end());
      }
    } else {
      files = generate_entry(spec, out_dir);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid generator spec: ") + e.what());
  }
  return files;
}

// ---------------------------------------------------------------- compile / run

EtaPolicy parse_eta(const std::string& s) {
  if (s == "optimal") return EtaPolicy{true, 1.0};
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !(v > 0.0)) {
    throw std::invalid_argument("--eta expects 'optimal' or a positive number");
  }
  return EtaPolicy{false, v};
}

namespace {

struct Job {
  std::size_t instance = 0;
  Method method = Method::indicator_xy;
};

struct JobResult {
  std::vector<RunReport> reports;
  std::uint64_t search_space = 0;
  std::string skip;
};

struct LoadedInstance {
  Instance inst;
  NormalizedProblem norm;
  std::optional<double> optimum;
  std::string error;
};

LoadedInstance load(const fs::path& path) {
  LoadedInstance li;
  try {
    li.inst = read_instance(path);
    li.norm = reduce_small_groups(li.inst.problem);
    const auto sol = solve_exhaustive(li.norm.problem);
    if (!sol) {
      li.error = "infeasible";
    } else {
      li.optimum = sol->optimum;
    }
  } catch (const std::exception& e) {
    li.error = e.what();
  }
  return li;
}

PipelineConfig make_config(Method method, const EtaPolicy& eta, std::optional<double> rho, double optimum,
                           std::uint64_t memory_cap) {
  PipelineConfig cfg;
  cfg.method = method;
  cfg.rho = rho;
  cfg.memory_cap = memory_cap;
  if (eta.optimal) {
    cfg.eta = std::max(1.0, std::abs(optimum));
    cfg.qubo_penalty = cfg.eta;
  } else {
    cfg.eta = eta.value;
  }
  return cfg;
}

JobResult run_job(const LoadedInstance& li, Method method, const RunOptions& opt) {
  JobResult r;
  if (!li.optimum) {
    r.skip = li.error;
    return r;
  }
  try {
    auto model = compile(li.norm.problem, make_config(method, opt.eta, opt.rho, *li.optimum, opt.memory_cap));
    r.search_space = model.search_space();
    PrepareOptions po;
    po.optimum = li.optimum;
    po.workers = 1;
    const auto pm = prepare(li.norm.problem, std::move(model), po);
    if (opt.tae) {
      for (int p = 1; p <= opt.p_max; ++p) {
        const auto t0 = std::chrono::steady_clock::now();
        auto rep = evaluate_schedule(pm, tae_schedule(p));
        rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        r.reports.push_back(std::move(rep));
      }
    } else {
      OptimizerSettings settings;
      settings.seed = opt.seed;
      r.reports = run_ladder(pm, opt.p_max, settings);
    }
  } catch (const MemoryCapExceeded&) {
    r.skip = "memory cap";
  } catch (const std::exception& e) {
    r.skip = e.what();
  }
  return r;
}

}  // namespace

CompileSummary cmd_compile(const fs::path& instance, Method method, const EtaPolicy& eta, std::optional<double> rho,
                           std::uint64_t memory_cap, const fs::path& out_dir) {
  const auto li = load(instance);
  if (!li.optimum && eta.optimal) throw std::runtime_error(instance.string() + ": " + li.error);
  const auto model = compile(li.norm.problem, make_config(method, eta, rho, li.optimum.value_or(0.0), memory_cap));
  const auto tensor = phase_cost(model);
  const auto layers = circuit_layers(model);
  const auto bits = model.layout.bits();
  const auto hash = layout_hash(bits);

  fs::create_directories(out_dir);
  CompileSummary s;
  s.tensor_file = out_dir / (li.inst.name + "." + std::string(method_name(method)) + ".cqt");
  {
    std::ofstream out(s.tensor_file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + s.tensor_file.string());
    write_tensor(out, tensor, hash);
  }
  Json shape = Json::array();
  for (auto d : model.layout.shape()) shape.push_back(d);
  s.info = Json{{"instance", li.inst.name},
                {"method", method_name(method)},
                {"shape", shape},
                {"entries", model.tensor_entries()},
                {"search_space", model.search_space()},
                {"slack_bits", model.slack_bits()},
                {"qudits", model.qudit_count()},
                {"rho", model.rho},
                {"qubo_penalty", model.qubo_penalty},
                {"eta", model.eta},
                {"cost_min", tensor.min()},
                {"cost_max", tensor.max()},
                {"layers", Json{{"init", layers.init}, {"cost", layers.cost}, {"mixer", layers.mixer},
                                {"indicator", layers.indicator}}},
                {"layout_hash", hash},
                {"tensor_file", s.tensor_file.filename().string()}};
  if (li.optimum) s.info["optimum"] = *li.optimum;
  return s;
}

RunSummary cmd_run(const RunOptions& opt, std::ostream& log) {
  if (opt.instances.empty() || opt.methods.empty()) throw std::invalid_argument("need at least one instance and method");
  if (opt.p_max < 1) throw std::invalid_argument("--pmax must be at least 1");
  fs::create_directories(opt.out);

  std::vector<LoadedInstance> loaded;
  for (const auto& p : opt.instances) loaded.push_back(load(p));

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    for (auto m : opt.methods) jobs.push_back({i, m});
  }
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
      results[k] = run_job(loaded[jobs[k].instance], jobs[k].method, opt);
    }
  };
  const unsigned n_workers = std::clamp<unsigned>(opt.workers, 1, static_cast<unsigned>(jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }

  RunSummary summary;
  summary.jobs = jobs.size();
  std::ofstream jsonl(opt.out / "reports.jsonl", std::ios::binary);
  std::ofstream csv(opt.out / "summary.csv", std::ios::binary);
  if (!jsonl || !csv) throw std::runtime_error("cannot write results to " + opt.out.string());
  const auto& cols = summary_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << cols[c];
  csv << '\n';

  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& li = loaded[jobs[k].instance];
    const auto name = li.inst.name.empty() ? opt.instances[jobs[k].instance].stem().string() : li.inst.name;
    std::string method(method_name(jobs[k].method));
    if (opt.tae) method += "-tae";
    const auto& res = results[k];
    if (!res.skip.empty()) {
      summary.skipped.push_back(name + " " + method + ": " + res.skip);
      log << "skip " << name << " " << method << ": " << res.skip << '\n';
      continue;
    }
    ++summary.completed;
    std::vector<double> tts_values;
    for (const auto& r : res.reports) tts_values.push_back(r.tts);
    const auto star = tts_star(tts_values);
    for (const auto& r : res.reports) {
      Json line{{"instance", name}, {"method", method}, {"search_space", res.search_space}};
      line.update(to_json(r, !opt.omit_timing));
      line["tts_star"] = star ? Json(*star) : Json(nullptr);
      jsonl << line.dump() << '\n';
      csv << name << ',' << method << ',' << r.p << ',' << format_number(r.expectation) << ','
          << format_number(r.raar) << ',' << format_number(r.p_star) << ',' << format_number(r.p90) << ','
          << r.layers << ',' << format_number(r.tts) << ',' << (star ? format_number(*star) : "") << ','
          << res.search_space << ',' << (opt.omit_timing ? "" : format_number(r.wall_ms)) << '\n';
      ++summary.report_lines;
    }
  }
  return summary;
}

// ---------------------------------------------------------------- report

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "inf") return kUnreachable;
  if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc()) throw std::invalid_argument("bad number '" + s + "' in summary.csv");
  return v;
}

}  // namespace

ReportSummary cmd_report(const ReportOptions& opt) {
  const auto out_dir = opt.out.empty() ? opt.results : opt.out;
  std::ifstream in(opt.results / "summary.csv");
  if (!in) throw std::runtime_error("cannot read " + (opt.results / "summary.csv").string());
  std::string line;
  std::getline(in, line);
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < header.size(); ++c) col[header[c]] = c;
  for (const auto& c : {"instance", "method", "TTS_p", "S"}) {
    if (!col.count(c)) throw std::invalid_argument(std::string("summary.csv lacks column ") + c);
  }

  struct Entry {
    double search_space = 0.0;
    std::optional<double> tts_star;
  };
  std::map<std::string, std::map<std::string, Entry>> table;  // method -> instance -> entry
  std::vector<std::string> instances;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) throw std::invalid_argument("malformed summary.csv row: " + line);
    const auto& inst = f[col["instance"]];
    if (std::find(instances.begin(), instances.end(), inst) == instances.end()) instances.push_back(inst);
    auto& e = table[f[col["method"]]][inst];
    e.search_space = parse_double(f[col["S"]]);
    const double t = parse_double(f[col["TTS_p"]]);
    if (std::isfinite(t) && (!e.tts_star || t < *e.tts_star)) e.tts_star = t;
  }

  ReportSummary summary;
  summary.fits = Json::object();
  for (const auto& [method, rows] : table) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [inst, e] : rows) {
      if (e.tts_star) pts.emplace_back(e.search_space, *e.tts_star);
    }
    try {
      const auto fit = scaling_fit(pts);
      summary.fits[method] = Json{{"slope", fit.slope},
                                  {"intercept", fit.intercept},
                                  {"r2", fit.r2},
                                  {"points", fit.points},
                                  {"base", std::exp2(fit.slope)}};
    } catch (const std::invalid_argument& e) {
      summary.warnings.push_back(method + ": " + e.what() + " (" + std::to_string(pts.size()) + " usable rows)");
    }
  }
  if (!table.count(opt.baseline)) summary.warnings.push_back("baseline method '" + opt.baseline + "' has no rows");

  fs::create_directories(out_dir);
  Json fit_doc{{"baseline", opt.baseline}, {"fits", summary.fits}, {"warnings", summary.warnings}};
  write_json_file(out_dir / "fit.json", fit_doc);

  std::ofstream cmp(out_dir / "comparison.csv", std::ios::binary);
  if (!cmp) throw std::runtime_error("cannot write comparison.csv");
  cmp << "instance,method,S,TTS*,r\n";
  for (const auto& inst : instances) {
    std::optional<double> base;
    if (auto it = table.find(opt.baseline); it != table.end()) {
      if (auto jt = it->second.find(inst); jt != it->second.end()) base = jt->second.tts_star;
    }
    for (const auto& [method, rows] : table) {
      const auto it = rows.find(inst);
      if (it == rows.end()) continue;
      const auto& e = it->second;
      cmp << inst << ',' << method << ',' << format_number(e.search_space) << ','
          << (e.tts_star ? format_number(*e.tts_star) : "") << ','
          << (base && e.tts_star ? format_number(*base / *e.tts_star) : "") << '\n';
    }
  }
  return summary;
}

}  // namespace cqaoa
