#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cqaoa/bitcost.hpp"
#include "cqaoa/metrics.hpp"
#include "cqaoa/pipeline.hpp"
#include "cqaoa/problem.hpp"
#include "cqaoa/sim.hpp"

namespace cqaoa {

struct Schedule {
  std::vector<double> gammas;
  std::vector<double> betas;

  std::size_t depth() const { return gammas.size(); }
};

enum class GradientMethod { adjoint, central };

struct OptimizerSettings {
  int max_iterations = 100;
  double fd_step = 1e-6;
  double gradient_tolerance = 1e-6;  // on the normalized energy
  GradientMethod gradient = GradientMethod::adjoint;
  double armijo = 1e-4;
  int max_backtracks = 30;
  double start_gamma = 0.1;
  double start_beta = 0.4;
  int restarts = 8;                  // random p=1 starts tried when the start is flat
  std::uint64_t seed = 0;
};

/// How the phase tensor is scaled before exp(-i gamma f~). `spread` divides by
/// max f~ - min f~ so that one gamma range fits every instance; `none` uses
/// f~ as is.
enum class PhaseScaling { spread, none };

struct PrepareOptions {
  std::optional<double> optimum;     // f(x*); found by exhaustive search when unset
  PhaseScaling scaling = PhaseScaling::spread;
  unsigned workers = 0;
};

/// Everything a variational run needs, evaluated once per (problem, method).
struct PreparedModel {
  ConstrainedProblem problem;
  CompiledModel model;
  CostTensor phase;        // scaled f~
  double phase_scale = 1.0;
  CostTensor evaluation;   // F
  CostTensor objective;    // f per entry
  std::vector<std::uint32_t> violations;
  double optimum = 0.0;
  double random_avg = 0.0;
  double energy_scale = 1.0;  // max F - min F, used to normalize the optimizer objective
  LayerCounts layers;
  std::uint64_t search_space = 0;
};

PreparedModel prepare(const ConstrainedProblem& problem, CompiledModel model, const PrepareOptions& options = {});

/// Final state of the circuit for `schedule`.
StateTensor evolve(const PreparedModel& pm, const Schedule& schedule);

/// <F> after the circuit.
double qaoa_energy(const PreparedModel& pm, const Schedule& schedule);

/// Gradient of <F> ordered (dgamma_1..p, dbeta_1..p), by reverse-mode
/// differentiation through the circuit.
std::vector<double> adjoint_gradient(const PreparedModel& pm, const Schedule& schedule, double* energy = nullptr);

/// Same ordering, central differences with step h.
std::vector<double> central_gradient(const PreparedModel& pm, const Schedule& schedule, double h);

struct OptimizeResult {
  Schedule schedule;
  double energy = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

/// BFGS with Armijo backtracking. Returns the best point seen.
OptimizeResult optimize_at_depth(const PreparedModel& pm, const Schedule& start, const OptimizerSettings& settings);

/// Linear interpolation to depth p + 1 with zero padding at both ends.
Schedule interp_extend(const Schedule& s);

/// gamma_i = delta s_i, beta_i = delta (1 - s_i), s_i = sin^2[(pi/2) sin^2(pi i / 2p)].
Schedule tae_schedule(int p, double delta = 0.75);

struct RunReport {
  int p = 0;
  double expectation = 0.0;
  double raar = 0.0;
  double p_star = 0.0;
  double p90 = 0.0;
  double feasible_probability = 0.0;
  std::int64_t layers = 0;
  double tts = kUnreachable;
  Schedule schedule;
  double wall_ms = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

/// Measures `schedule` without optimizing it.
RunReport evaluate_schedule(const PreparedModel& pm, const Schedule& schedule);

/// Depth ladder p = 1..p_max: optimize, record, interpolate.
std::vector<RunReport> run_ladder(const PreparedModel& pm, int p_max, const OptimizerSettings& settings = {});

}  // namespace cqaoa
