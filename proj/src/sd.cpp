#include "rsd/sd.hpp"

#include <cmath>
#include <ostream>
#include <unordered_map>

#include "rsd/rng.hpp"
#include "rsd/tolerances.hpp"

namespace rsd {

std::string to_string(DropRule rule) {
  switch (rule) {
    case DropRule::D0: return "d0";
    case DropRule::D1: return "d1";
    case DropRule::D2: return "d2";
  }
  return "d0";
}

DropRule drop_rule_from_string(const std::string& s) {
  if (s == "d0") return DropRule::D0;
  if (s == "d1") return DropRule::D1;
  if (s == "d2") return DropRule::D2;
  throw std::invalid_argument("unknown dropping rule \"" + s +
                              "\" (expected d0|d1|d2)");
}

std::string to_string(SdStatus status) {
  switch (status) {
    case SdStatus::Optimal: return "optimal";
    case SdStatus::Cutoff: return "cutoff";
    case SdStatus::IterLimit: return "iter_limit";
    case SdStatus::CycleDetected: return "cycle_detected";
  }
  return "iter_limit";
}

double lemma_lower_bound(double f_xk, std::span<const double> c_k,
                         std::span<const double> x_k,
                         std::span<const double> x_hat) {
  double shift = 0.0;
  for (std::size_t i = 0; i < c_k.size(); ++i)
    shift += c_k[i] * (x_hat[i] - x_k[i]);
  return f_xk + shift;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot_bits(std::span<const double> c, const Vertex& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (v.bits[i]) s += c[i];
  return s;
}

struct IncumbentTracker {
  const ScenarioSet* reference;
  std::optional<Vertex> best;
  double best_value = 1.0 / 0.0;

  void offer(const Vertex& v) {
    const double f = evaluate_f(v, *reference).value;
    if (!best || f < best_value) {
      best = v;
      best_value = f;
    }
  }
};

}  // namespace

SdResult run_sd(LinearOracle& oracle, const ScenarioSet& u,
                const std::vector<Vertex>& initial_v, const SdConfig& config) {
  if (oracle.dimension() != u.dimension())
    throw std::invalid_argument("run_sd: oracle/scenario dimension mismatch");
  if (config.max_iterations < 1)
    throw std::invalid_argument("run_sd: max_iterations must be positive");
  for (const Vertex& v : initial_v)
    if (v.bits.size() != u.dimension())
      throw std::invalid_argument("run_sd: initial vertex dimension mismatch");

  // Optional one-shot perturbation of the working scenarios; reported values
  // are always re-evaluated under the unperturbed set.
  std::optional<ScenarioSet> perturbed;
  if (config.perturbation_magnitude > 0.0) {
    Rng rng(config.rng_seed);
    perturbed = u.perturbed(config.perturbation_magnitude, rng);
  }
  const ScenarioSet& work = perturbed ? *perturbed : u;

  IncumbentTracker incumbent{&u, std::nullopt, 1.0 / 0.0};

  std::vector<Vertex> start = initial_v;
  if (start.empty()) {
    auto boot = oracle.minimize(work[0].costs, Fixings{});
    if (!boot)
      throw OracleInfeasible(
          "linear oracle reported an empty feasible set at bootstrap");
    start.push_back(std::move(*boot));
  }
  ActiveSet active(work, start);
  for (const Vertex& v : active.vertices()) incumbent.offer(v);

  SdResult result;
  MasterOptions master_opts;

  // set fingerprint -> master value when that set was formed
  std::unordered_map<std::uint64_t, double> seen_sets;

  const auto finish = [&](SdStatus status, const MasterSolution& ms) {
    result.status = status;
    result.x_star = ms.x;
    result.value = evaluate_f(ms.x, u).value;
    result.final_vertices = active.vertices();
    result.incumbent = incumbent.best;
    result.incumbent_value = incumbent.best_value;
    return result;
  };

  MasterSolution ms;
  for (long k = 1; k <= config.max_iterations; ++k) {
    result.iterations = k;
    master_opts.prefer_dual_scenario =
        config.dual_preference ? config.dual_preference(k) : std::nullopt;
    master_opts.prefer_alpha_vertex =
        config.alpha_preference ? config.alpha_preference(k) : std::nullopt;
    ms = solve_master(active, work, master_opts);

    auto minimizer = oracle.minimize(ms.subgradient, Fixings{});
    if (!minimizer)
      throw OracleInfeasible(
          "linear oracle reported infeasible on a set known to be nonempty");
    const Vertex x_hat = std::move(*minimizer);
    incumbent.offer(x_hat);

    const double oracle_value = dot_bits(ms.subgradient, x_hat);
    const double simplex_value = dot(ms.subgradient, ms.x);
    const double lb = ms.z + (oracle_value - simplex_value);
    result.lb_history.push_back(lb);
    result.best_lb = result.lb_history.size() == 1
                         ? lb
                         : std::max(result.best_lb, lb);
    if (config.lb_callback) config.lb_callback(k, lb);
    const auto trace_line = [&](std::size_t drops) {
      if (config.trace)
        *config.trace << "sd k=" << k << " z=" << ms.z << " lb=" << lb
                      << " |V|=" << active.size() << " drops=" << drops
                      << '\n';
    };

    if (config.cutoff && lb >= *config.cutoff) {
      trace_line(0);
      return finish(SdStatus::Cutoff, ms);
    }

    if (oracle_value >= simplex_value - config.stop_tol) {
      trace_line(0);
      return finish(SdStatus::Optimal, ms);
    }

    if (active.contains(x_hat)) {
      // The oracle returned a point already in V at a non-terminal
      // iteration: numerical stalling. One exact re-solve with Bland's rule
      // certifies the bound, then we stop.
      MasterOptions exact = master_opts;
      exact.blands_from_start = true;
      ms = solve_master(active, work, exact);
      auto recheck = oracle.minimize(ms.subgradient, Fixings{});
      if (recheck) {
        incumbent.offer(*recheck);
        const double lb2 = ms.z + dot_bits(ms.subgradient, *recheck) -
                           dot(ms.subgradient, ms.x);
        result.lb_history.push_back(lb2);
        result.best_lb = std::max(result.best_lb, lb2);
        if (config.lb_callback) config.lb_callback(k, lb2);
      }
      trace_line(0);
      return finish(SdStatus::Optimal, ms);
    }

    // Vertex update: D0 appends; D1 keeps the support; D2 drops zero-weight
    // vertices only when they provide a strict ascent direction.
    std::size_t drops = 0;
    if (config.drop_rule != DropRule::D0) {
      std::vector<char> keep(active.size(), 1);
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (ms.alpha[i] > tol::alpha_zero) continue;
        if (config.drop_rule == DropRule::D1) {
          keep[i] = 0;
        } else {
          const double ascent =
              dot_bits(ms.subgradient, active.vertex(i)) - simplex_value;
          if (ascent >= config.d2_epsilon) keep[i] = 0;
        }
      }
      for (char kflag : keep) drops += kflag ? 0 : 1;
      if (drops > 0) active.filter(keep);
    }
    active.add(x_hat);
    trace_line(drops);

    if (config.drop_rule != DropRule::D0) {
      const std::uint64_t fp = active.set_fingerprint();
      auto [it, inserted] = seen_sets.try_emplace(fp, ms.z);
      if (!inserted) {
        if (ms.z < it->second - tol::cycle_decrease) {
          it->second = ms.z;  // genuine progress since the last visit
        } else {
          result.status = SdStatus::CycleDetected;
          result.x_star = ms.x;
          result.value = evaluate_f(ms.x, u).value;
          result.final_vertices = active.vertices();
          result.repeated_set = active.vertices();
          result.incumbent = incumbent.best;
          result.incumbent_value = incumbent.best_value;
          return result;
        }
      }
    }
  }

  return finish(SdStatus::IterLimit, ms);
}

DemoProblem cycling_demo_problem() {
  ScenarioSet u({Scenario{0.0, {1.0, -1.0}}, Scenario{0.0, {-1.0, 1.0}}});
  std::vector<Vertex> x = {Vertex{{0, 0}}, Vertex{{0, 1}}, Vertex{{1, 0}}};
  return DemoProblem{std::move(u), std::move(x), Vertex{{0, 0}}};
}

DemoProblem stall_demo_problem() {
  ScenarioSet u({Scenario{0.0, {1.0, 0.0}}, Scenario{0.0, {0.0, 1.0}}});
  std::vector<Vertex> x = {Vertex{{1, 1}}, Vertex{{0, 1}}, Vertex{{1, 0}}};
  return DemoProblem{std::move(u), std::move(x), Vertex{{1, 1}}};
}

std::vector<SdTraceIteration> run_stall_demo(std::size_t prefer_dual_scenario,
                                             std::size_t prefer_alpha_vertex,
                                             long max_iterations) {
  DemoProblem demo = stall_demo_problem();
  EnumerationOracle oracle(2, demo.feasible_points);
  ActiveSet active(demo.scenarios, {demo.start});

  std::vector<SdTraceIteration> trace;
  for (long k = 1; k <= max_iterations; ++k) {
    SdTraceIteration it;
    it.k = k;
    it.vertices_before = active.vertices();

    MasterOptions opts;
    if (prefer_dual_scenario < demo.scenarios.size())
      opts.prefer_dual_scenario = prefer_dual_scenario;
    if (prefer_alpha_vertex < active.size())
      opts.prefer_alpha_vertex = prefer_alpha_vertex;
    it.master = solve_master(active, demo.scenarios, opts);

    auto x_hat = oracle.minimize(it.master.subgradient, Fixings{});
    it.x_hat = *x_hat;
    it.terminal = dot_bits(it.master.subgradient, it.x_hat) >=
                  dot(it.master.subgradient, it.master.x) - tol::reporting;

    std::vector<char> keep(active.size(), 1);
    for (std::size_t i = 0; i < active.size(); ++i)
      if (it.master.alpha[i] <= tol::alpha_zero) keep[i] = 0;
    for (std::size_t i = 0; i < active.size(); ++i)
      if (keep[i]) it.kept_after_drop.push_back(active.vertex(i));

    if (it.terminal) {
      it.vertices_after = active.vertices();
      trace.push_back(std::move(it));
      break;
    }
    active.filter(keep);
    active.add(it.x_hat);
    it.vertices_after = active.vertices();
    trace.push_back(std::move(it));
  }
  return trace;
}

}  // namespace rsd
