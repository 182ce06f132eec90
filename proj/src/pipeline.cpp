#include "cqaoa/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace cqaoa {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::qubo: return "qubo";
    case Method::xy: return "xy";
    case Method::indicator: return "if";
    case Method::indicator_xy: return "ifxy";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string s;
  for (char c : name) {
    if (c != '+' && c != '_' && c != '-') s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s == "qubo") return Method::qubo;
  if (s == "xy") return Method::xy;
  if (s == "if") return Method::indicator;
  if (s == "ifxy") return Method::indicator_xy;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- slack

std::vector<std::int64_t> SlackEncoding::weights() const {
  std::vector<std::int64_t> w;
  for (int l = 0; l + 1 < bits; ++l) w.push_back(std::int64_t{1} << l);
  if (bits > 0) w.push_back(last_coeff);
  return w;
}

SlackEncoding make_slack(std::int64_t upper, std::size_t first_site) {
  SlackEncoding enc;
  enc.upper = upper;
  enc.first_site = first_site;
  if (upper <= 0) return enc;
  enc.bits = static_cast<int>(std::bit_width(static_cast<std::uint64_t>(upper)));
  enc.last_coeff = upper - (std::int64_t{1} << (enc.bits - 1)) + 1;
  return enc;
}

std::set<std::int64_t> slack_values(const SlackEncoding& enc) {
  const auto w = enc.weights();
  std::set<std::int64_t> out;
  const std::uint64_t n = std::uint64_t{1} << w.size();
  for (std::uint64_t y = 0; y < n; ++y) {
    std::int64_t v = 0;
    for (std::size_t l = 0; l < w.size(); ++l) {
      if ((y >> l) & 1u) v += w[l];
    }
    out.insert(v);
  }
  return out;
}

// ---------------------------------------------------------------- model

std::uint64_t CompiledModel::search_space() const {
  std::uint64_t s = 1;
  for (const auto& site : layout.sites) {
    if (site.kind != SiteKind::slack) s *= site.dim;
  }
  return s;
}

std::size_t CompiledModel::slack_bits() const {
  return static_cast<std::size_t>(std::count_if(layout.sites.begin(), layout.sites.end(),
                                                [](const Site& s) { return s.kind == SiteKind::slack; }));
}

std::size_t CompiledModel::qudit_count() const {
  return static_cast<std::size_t>(std::count_if(layout.sites.begin(), layout.sites.end(),
                                                [](const Site& s) { return s.kind == SiteKind::qudit; }));
}

// ---------------------------------------------------------------- heuristics

std::optional<Bits> greedy_feasible(const ConstrainedProblem& problem, std::uint64_t node_limit) {
  const auto n = problem.n_vars();
  const auto& ineqs = problem.inequalities();
  const auto& f = problem.objective();

  // A unit is either a group (choose one member) or a free variable (0/1).
  struct Unit {
    std::vector<std::size_t> vars;   // empty option means "leave at 0" for free vars
    std::vector<int> options;        // index into vars, or -1 for none
  };
  std::vector<Unit> units;
  for (const auto& g : problem.groups()) {
    Unit u;
    u.vars = g.members;
    for (std::size_t k = 0; k < g.size(); ++k) u.options.push_back(static_cast<int>(k));
    std::stable_sort(u.options.begin(), u.options.end(),
                     [&](int a, int b) { return f.coeff(u.vars[a]) < f.coeff(u.vars[b]); });
    units.push_back(std::move(u));
  }
  for (auto v : problem.free_vars()) {
    Unit u;
    u.vars = {v};
    u.options = f.coeff(v) < 0.0 ? std::vector<int>{0, -1} : std::vector<int>{-1, 0};
    units.push_back(std::move(u));
  }

  const auto m = ineqs.size();
  std::vector<std::vector<double>> coeff(m, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    for (const auto& t : ineqs[j].terms()) coeff[j][t.var] = t.coeff;
  }
  // suffix[u][j]: largest possible contribution of units u.. to constraint j.
  std::vector<std::vector<double>> suffix(units.size() + 1, std::vector<double>(m, 0.0));
  for (std::size_t u = units.size(); u-- > 0;) {
    for (std::size_t j = 0; j < m; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      for (int o : units[u].options) best = std::max(best, o < 0 ? 0.0 : coeff[j][units[u].vars[o]]);
      suffix[u][j] = suffix[u + 1][j] + best;
    }
  }

  Bits x(n, 0);
  std::vector<double> partial(m);
  for (std::size_t j = 0; j < m; ++j) partial[j] = ineqs[j].constant();
  std::uint64_t nodes = 0;

  std::function<bool(std::size_t)> search = [&](std::size_t u) -> bool {
    if (++nodes > node_limit) return false;
    for (std::size_t j = 0; j < m; ++j) {
      if (partial[j] + suffix[u][j] < 0.0) return false;
    }
    if (u == units.size()) return true;
    for (int o : units[u].options) {
      if (o >= 0) {
        const auto v = units[u].vars[o];
        x[v] = 1;
        for (std::size_t j = 0; j < m; ++j) partial[j] += coeff[j][v];
        if (search(u + 1)) return true;
        for (std::size_t j = 0; j < m; ++j) partial[j] -= coeff[j][v];
        x[v] = 0;
      } else if (search(u + 1)) {
        return true;
      }
      if (nodes > node_limit) return false;
    }
    return false;
  };

  if (!search(0)) return std::nullopt;
  return x;
}

double relaxed_minimum(const ConstrainedProblem& problem) {
  const auto& f = problem.objective();
  double value = f.constant();
  for (const auto& g : problem.groups()) {
    double best = std::numeric_limits<double>::infinity();
    for (auto v : g.members) best = std::min(best, f.coeff(v));
    value += best;
  }
  for (auto v : problem.free_vars()) value += std::min(0.0, f.coeff(v));
  return value;
}

double compute_rho(const ConstrainedProblem& problem) {
  const auto x1 = greedy_feasible(problem);
  if (!x1) throw std::runtime_error("instance infeasible for heuristic");
  const double rho = problem.objective().evaluate(*x1) - relaxed_minimum(problem);
  return std::max(rho, kMinimumRho);
}

// ---------------------------------------------------------------- compile

namespace {

void check_valid(const ConstrainedProblem& problem) {
  const auto issues = validate(problem);
  if (issues.empty()) return;
  std::string msg = "invalid problem:";
  for (const auto& s : issues) msg += " " + s + ";";
  throw std::invalid_argument(msg);
}

}  // namespace

CompiledModel compile(const ConstrainedProblem& problem, const PipelineConfig& config) {
  check_valid(problem);
  if (!(config.eta > 0.0)) throw std::invalid_argument("eta must be positive");

  CompiledModel model;
  model.method = config.method;
  model.eta = config.eta;
  const bool qudits = uses_qudits(config.method);
  const bool indicator = uses_indicator(config.method);

  std::vector<bool> qudit_group(problem.groups().size(), qudits);
  for (auto g : config.demote_groups) {
    if (g >= qudit_group.size()) throw std::invalid_argument("demoted group index out of range");
    qudit_group[g] = false;
  }

  // Layout: compute qubits, slack qubits, qudits.
  Layout& layout = model.layout;
  layout.var_literal.assign(problem.n_vars(), Literal{});
  for (std::size_t v = 0; v < problem.n_vars(); ++v) {
    const int g = problem.group_of()[v];
    if (g >= 0 && qudit_group[static_cast<std::size_t>(g)]) continue;
    layout.var_literal[v] = Literal{static_cast<std::uint32_t>(layout.sites.size()), 1};
    layout.sites.push_back(Site{SiteKind::qubit, 2, {v}});
  }
  if (!indicator) {
    for (std::size_t j = 0; j < problem.inequalities().size(); ++j) {
      const auto b = bounds(problem.inequalities()[j]);
      auto enc = make_slack(static_cast<std::int64_t>(std::llround(b.upper)), layout.sites.size());
      for (auto w : enc.weights()) {
        layout.sites.push_back(Site{SiteKind::slack, 2, {}, static_cast<int>(j), w});
      }
      model.slack.push_back(enc);
    }
  }
  for (std::size_t g = 0; g < problem.groups().size(); ++g) {
    if (!qudit_group[g]) continue;
    const auto& members = problem.groups()[g].members;
    const auto site = static_cast<std::uint32_t>(layout.sites.size());
    for (std::size_t l = 0; l < members.size(); ++l) layout.var_literal[members[l]] = Literal{site, static_cast<std::uint32_t>(l)};
    layout.sites.push_back(Site{SiteKind::qudit, members.size(), members});
  }

  const auto entries = layout.entries();
  if (entries > config.memory_cap) throw MemoryCapExceeded(entries, config.memory_cap);
  (void)layout.bits();  // enforces the 64-bit key limit

  const bool needs_rho = indicator || !config.qubo_penalty;
  double rho = config.rho.value_or(0.0);
  if (needs_rho && !config.rho) rho = compute_rho(problem);
  if (indicator && !(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  model.rho = rho;
  model.qubo_penalty = config.qubo_penalty.value_or(rho);

  auto& cost = model.effective_cost;
  const auto objective = layout.to_polynomial(problem.objective());
  for (const auto& [mono, v] : objective.terms()) cost.add(mono, v);

  for (std::size_t g = 0; g < problem.groups().size(); ++g) {
    if (qudit_group[g]) continue;
    std::vector<std::pair<Literal, double>> lin;
    for (auto v : problem.groups()[g].members) lin.emplace_back(layout.var_literal[v], 1.0);
    cost.add_square(lin, -1.0, model.qubo_penalty);
  }

  if (indicator) {
    model.if_constraints = problem.inequalities();
  } else {
    for (std::size_t j = 0; j < problem.inequalities().size(); ++j) {
      const auto& g = problem.inequalities()[j];
      std::vector<std::pair<Literal, double>> lin;
      for (const auto& t : g.terms()) lin.emplace_back(layout.var_literal[t.var], t.coeff);
      const auto& enc = model.slack[j];
      const auto w = enc.weights();
      for (std::size_t l = 0; l < w.size(); ++l) {
        lin.emplace_back(Literal{static_cast<std::uint32_t>(enc.first_site + l), 1}, -static_cast<double>(w[l]));
      }
      cost.add_square(lin, g.constant(), model.qubo_penalty);
    }
  }
  return model;
}

CostTensor phase_cost(const CompiledModel& model) {
  const auto bits = model.layout.bits();
  auto tensor = bruteforce(compile_terms(model.effective_cost, bits), bits);
  return apply_step_penalties(std::move(tensor), model.if_constraints, model.rho, model.layout);
}

}  // namespace cqaoa
