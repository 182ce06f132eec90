#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqaoa/instances.hpp"
#include "cqaoa/io.hpp"
#include "cqaoa/metrics.hpp"
#include "cqaoa/pipeline.hpp"
#include "cqaoa/qaoa.hpp"

namespace py = pybind11;
using namespace cqaoa;

namespace {

py::array_t<double> to_array(const CostTensor& t) {
  std::vector<py::ssize_t> shape(t.shape().begin(), t.shape().end());
  py::array_t<double> a(shape);
  std::copy(t.values().begin(), t.values().end(), a.mutable_data());
  return a;
}

py::array_t<std::complex<double>> to_array(const StateTensor& s) {
  std::vector<py::ssize_t> shape(s.shape().begin(), s.shape().end());
  py::array_t<std::complex<double>> a(shape);
  const auto amps = s.amplitudes();
  std::copy(amps.begin(), amps.end(), a.mutable_data());
  return a;
}

py::dict report_dict(const RunReport& r) {
  py::dict d;
  d["p"] = r.p;
  d["expectation"] = r.expectation;
  d["raar"] = r.raar;
  d["p_star"] = r.p_star;
  d["p90"] = r.p90;
  d["feasible_probability"] = r.feasible_probability;
  d["layers"] = r.layers;
  d["tts"] = r.tts;
  d["gammas"] = r.schedule.gammas;
  d["betas"] = r.schedule.betas;
  d["iterations"] = r.iterations;
  d["evaluations"] = r.evaluations;
  return d;
}

// Benchmark-style preparation: eta = max(1, |f*|) unless given.
PreparedModel prepare_for(const ConstrainedProblem& problem, const std::string& method, std::optional<double> eta,
                          std::optional<double> rho, std::uint64_t memory_cap) {
  const auto norm = reduce_small_groups(problem);
  const auto sol = solve_exhaustive(norm.problem);
  if (!sol) throw std::runtime_error("instance has no feasible solution");
  PipelineConfig cfg;
  cfg.method = parse_method(method);
  cfg.rho = rho;
  cfg.memory_cap = memory_cap;
  if (eta) {
    cfg.eta = *eta;
  } else {
    cfg.eta = std::max(1.0, std::abs(sol->optimum));
    cfg.qubo_penalty = cfg.eta;
  }
  PrepareOptions po;
  po.optimum = sol->optimum;
  return prepare(norm.problem, compile(norm.problem, cfg), po);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constraint-preserving QAOA simulator core";

  py::register_exception<MemoryCapExceeded>(m, "MemoryCapExceeded", PyExc_MemoryError);

  py::class_<ConstrainedProblem>(m, "Problem")
      .def_property_readonly("n_vars", &ConstrainedProblem::n_vars)
      .def_property_readonly("groups",
                             [](const ConstrainedProblem& p) {
                               std::vector<std::vector<std::size_t>> g;
                               for (const auto& grp : p.groups()) g.push_back(grp.members);
                               return g;
                             })
      .def_property_readonly("n_inequalities", [](const ConstrainedProblem& p) { return p.inequalities().size(); })
      .def("to_json", [](const ConstrainedProblem& p) { return to_json(p).dump(); })
      .def("is_feasible",
           [](const ConstrainedProblem& p, const std::vector<int>& x) {
             return is_feasible(p, Bits(x.begin(), x.end()));
           })
      .def("objective", [](const ConstrainedProblem& p, const std::vector<int>& x) {
        return p.original_objective().evaluate(Bits(x.begin(), x.end()));
      });

  m.def("problem_from_json", [](const std::string& s) { return instance_from_json(Json::parse(s)).problem; },
        py::arg("text"));
  m.def("read_instance", [](const std::string& path) { return read_instance(path).problem; }, py::arg("path"));

  m.def(
      "prosumer",
      [](std::size_t horizon, std::vector<std::vector<std::int64_t>> loads, std::vector<double> rates,
         std::int64_t capacity) {
        return build_pp(PpSpec{horizon, std::move(loads), std::move(rates), capacity});
      },
      py::arg("horizon"), py::arg("loads"), py::arg("rates"), py::arg("capacity"));
  m.def(
      "multi_knapsack",
      [](std::vector<std::int64_t> values, std::vector<std::vector<std::int64_t>> weights,
         std::vector<std::int64_t> capacities) {
        return mks_formulation(MksSpec{std::move(values), std::move(weights), std::move(capacities)});
      },
      py::arg("values"), py::arg("weights"), py::arg("capacities"));

  m.def(
      "solve_exhaustive",
      [](const ConstrainedProblem& p) -> py::object {
        const auto sol = solve_exhaustive(p);
        if (!sol) return py::none();
        return py::make_tuple(sol->optimum, std::vector<int>(sol->argmin.begin(), sol->argmin.end()));
      },
      py::arg("problem"));

  py::class_<PreparedModel>(m, "Model")
      .def(py::init([](const ConstrainedProblem& p, const std::string& method, std::optional<double> eta,
                       std::optional<double> rho, std::uint64_t memory_cap) {
             return prepare_for(p, method, eta, rho, memory_cap);
           }),
           py::arg("problem"), py::arg("method") = "ifxy", py::arg("eta") = py::none(), py::arg("rho") = py::none(),
           py::arg("memory_cap") = kDefaultMemoryCap)
      .def_property_readonly("method", [](const PreparedModel& pm) { return std::string(method_name(pm.model.method)); })
      .def_property_readonly("shape", [](const PreparedModel& pm) { return pm.model.layout.shape(); })
      .def_property_readonly("search_space", [](const PreparedModel& pm) { return pm.search_space; })
      .def_property_readonly("rho", [](const PreparedModel& pm) { return pm.model.rho; })
      .def_property_readonly("eta", [](const PreparedModel& pm) { return pm.model.eta; })
      .def_property_readonly("optimum", [](const PreparedModel& pm) { return pm.optimum; })
      .def_property_readonly("random_average", [](const PreparedModel& pm) { return pm.random_avg; })
      .def_property_readonly("layers",
                             [](const PreparedModel& pm) {
                               py::dict d;
                               d["init"] = pm.layers.init;
                               d["cost"] = pm.layers.cost;
                               d["mixer"] = pm.layers.mixer;
                               d["indicator"] = pm.layers.indicator;
                               return d;
                             })
      .def("phase_tensor", [](const PreparedModel& pm) { return to_array(pm.phase); })
      .def("evaluation_tensor", [](const PreparedModel& pm) { return to_array(pm.evaluation); })
      .def(
          "evolve",
          [](const PreparedModel& pm, std::vector<double> gammas, std::vector<double> betas) {
            if (gammas.size() != betas.size()) throw std::invalid_argument("gammas and betas differ in length");
            return to_array(evolve(pm, Schedule{std::move(gammas), std::move(betas)}));
          },
          py::arg("gammas"), py::arg("betas"))
      .def(
          "energy",
          [](const PreparedModel& pm, std::vector<double> gammas, std::vector<double> betas) {
            if (gammas.size() != betas.size()) throw std::invalid_argument("gammas and betas differ in length");
            return qaoa_energy(pm, Schedule{std::move(gammas), std::move(betas)});
          },
          py::arg("gammas"), py::arg("betas"))
      .def(
          "evaluate",
          [](const PreparedModel& pm, std::vector<double> gammas, std::vector<double> betas) {
            if (gammas.size() != betas.size()) throw std::invalid_argument("gammas and betas differ in length");
            return report_dict(evaluate_schedule(pm, Schedule{std::move(gammas), std::move(betas)}));
          },
          py::arg("gammas"), py::arg("betas"))
      .def(
          "run_ladder",
          [](const PreparedModel& pm, int p_max, std::uint64_t seed) {
            OptimizerSettings settings;
            settings.seed = seed;
            std::vector<RunReport> reports;
            {
              py::gil_scoped_release release;
              reports = run_ladder(pm, p_max, settings);
            }
            py::list out;
            for (const auto& r : reports) out.append(report_dict(r));
            return out;
          },
          py::arg("p_max") = 12, py::arg("seed") = 0);

  m.def("raar", &raar, py::arg("expectation"), py::arg("random_average"), py::arg("optimum"));
  m.def("tts", &tts, py::arg("p_star"), py::arg("layers"));
  m.def(
      "tae_schedule",
      [](int p, double delta) {
        const auto s = tae_schedule(p, delta);
        return py::make_tuple(s.gammas, s.betas);
      },
      py::arg("p"), py::arg("delta") = 0.75);
  m.def("slack_weights", [](std::int64_t upper) { return make_slack(upper).weights(); }, py::arg("upper"));
  m.def("register_size", &register_size, py::arg("lower"), py::arg("upper"));
}
