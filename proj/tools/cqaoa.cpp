#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cqaoa/cli.hpp"

namespace {

std::vector<cqaoa::Method> parse_methods(const std::string& list) {
  std::vector<cqaoa::Method> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item == "all") {
      out.insert(out.end(), {cqaoa::Method::qubo, cqaoa::Method::xy, cqaoa::Method::indicator,
                             cqaoa::Method::indicator_xy});
    } else {
      out.push_back(cqaoa::parse_method(item));
    }
  }
  return out;
}

unsigned env_workers() {
  if (const char* v = std::getenv("CQAOA_WORKERS")) {
    const int n = std::atoi(v);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-preserving QAOA simulator and benchmark driver"};
  app.require_subcommand(1);

  std::string spec_file, out_dir = ".";
  auto* gen = app.add_subcommand("generate", "Write instance files from a generator spec");
  gen->add_option("spec", spec_file, "Generator spec (JSON)")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", out_dir, "Output directory");

  std::string instance, method = "ifxy", eta = "1";
  std::optional<double> rho;
  std::uint64_t mem_cap = cqaoa::kDefaultMemoryCap;
  auto* comp = app.add_subcommand("compile", "Compile one instance and dump its phase tensor");
  comp->add_option("instance", instance, "Instance file")->required()->check(CLI::ExistingFile);
  comp->add_option("--method", method, "qubo | xy | if | ifxy");
  comp->add_option("--eta", eta, "Evaluation penalty, or 'optimal' (benchmark only: needs the exact optimum)");
  comp->add_option("--rho", rho, "Indicator penalty (default: heuristic)");
  comp->add_option("--mem-cap", mem_cap, "Maximum tensor entries");
  comp->add_option("--out", out_dir, "Output directory");

  cqaoa::RunOptions run_opt;
  std::vector<std::string> instances;
  std::string methods = "all";
  auto* run = app.add_subcommand("run", "Run depth ladders for instances x methods");
  run->add_option("instances", instances, "Instance files")->required()->check(CLI::ExistingFile);
  run->add_option("--method", methods, "Comma-separated methods or 'all'");
  run->add_option("--pmax", run_opt.p_max, "Largest circuit depth")->check(CLI::PositiveNumber);
  run->add_option("--eta", eta, "Evaluation penalty, or 'optimal' (benchmark only: needs the exact optimum)");
  run->add_option("--rho", run_opt.rho, "Indicator penalty (default: heuristic)");
  run->add_option("--seed", run_opt.seed, "Seed for the p=1 restart fallback");
  run->add_option("--mem-cap", run_opt.memory_cap, "Maximum tensor entries per job");
  run->add_option("--out", run_opt.out, "Results directory");
  run->add_flag("--omit-timing", run_opt.omit_timing, "Leave wall_ms empty so reruns are byte-identical");
  run->add_flag("--tae", run_opt.tae, "Use the fixed TAE schedule instead of optimizing");

  cqaoa::ReportOptions rep_opt;
  std::string rep_out;
  auto* rep = app.add_subcommand("report", "Fit TTS* scaling and compare methods");
  rep->add_option("results", rep_opt.results, "Results directory holding summary.csv")->required();
  rep->add_option("--baseline", rep_opt.baseline, "Method used for speedup ratios");
  rep->add_option("--out", rep_out, "Output directory (default: results directory)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto files = cqaoa::cmd_generate(cqaoa::read_json_file(spec_file), out_dir);
      for (const auto& f : files) std::cout << f.string() << '\n';
      return 0;
    }
    if (*comp) {
      const auto s = cqaoa::cmd_compile(instance, cqaoa::parse_method(method), cqaoa::parse_eta(eta), rho, mem_cap,
                                        out_dir);
      std::cout << s.info.dump(2) << '\n';
      return 0;
    }
    if (*run) {
      run_opt.instances.assign(instances.begin(), instances.end());
      run_opt.methods = parse_methods(methods);
      run_opt.eta = cqaoa::parse_eta(eta);
      run_opt.workers = env_workers();
      const auto s = cqaoa::cmd_run(run_opt, std::cerr);
      std::cerr << s.completed << "/" << s.jobs << " jobs completed, " << s.report_lines << " reports, "
                << s.skipped.size() << " skipped\n";
      return s.skipped.empty() ? 0 : 2;
    }
    if (*rep) {
      rep_opt.out = rep_out;
      const auto s = cqaoa::cmd_report(rep_opt);
      std::cout << s.fits.dump(2) << '\n';
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
      return s.warnings.empty() ? 0 : 2;
    }
  } catch (const cqaoa::MemoryCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
