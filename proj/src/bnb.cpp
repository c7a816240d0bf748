#include "rsd/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "rsd/rng.hpp"
#include "rsd/tolerances.hpp"

namespace rsd {

std::string to_string(BnbStatus status) {
  return status == BnbStatus::Solved ? "solved" : "time_limit";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Node {
  Fixings fixings;
  std::vector<Vertex> inherited;
  int depth = 0;
  double parent_bound = -1.0 / 0.0;
  int branch_var = -1;  // the fixing this node was created with
  int branch_val = 0;
};

bool is_integral(const std::vector<double>& x) {
  for (double v : x) {
    const double r = v < 0.5 ? 0.0 : 1.0;
    if (std::abs(v - r) > tol::integrality) return false;
  }
  return true;
}

// Fractional coordinate with fractional part closest to one, ties to the
// lowest index; -1 when none qualifies.
int pick_branching_variable(const std::vector<double>& x) {
  int best = -1;
  double best_frac = -1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double frac = x[i] - std::floor(x[i]);
    if (frac < tol::integrality || frac > 1.0 - tol::integrality) continue;
    if (frac > best_frac) {
      best_frac = frac;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

BnbResult solve_bnb(const Instance& instance, LinearOracle& oracle,
                    const BnbConfig& config) {
  const auto start_time = Clock::now();
  const ScenarioSet& original = instance.scenarios;
  if (oracle.dimension() != original.dimension())
    throw std::invalid_argument("solve_bnb: oracle/instance dimension mismatch");

  // Perturbation, when requested, is applied once up front; the tree then
  // solves the perturbed problem exactly and only the reported incumbent
  // value is re-evaluated under the original scenarios.
  std::optional<ScenarioSet> perturbed;
  if (config.perturbation_magnitude > 0.0) {
    Rng rng(config.rng_seed);
    perturbed = original.perturbed(config.perturbation_magnitude, rng);
  }
  const ScenarioSet& work = perturbed ? *perturbed : original;

  BnbResult result;
  std::optional<Vertex> incumbent;
  double incumbent_value = 1.0 / 0.0;
  double min_closed_bound = 1.0 / 0.0;

  const auto offer_incumbent = [&](const std::optional<Vertex>& v, double val) {
    if (!v) return;
    if (!incumbent || val < incumbent_value) {
      incumbent = *v;
      incumbent_value = val;
    }
  };

  std::vector<Node> stack;
  stack.push_back(Node{});

  while (!stack.empty()) {
    if (seconds_since(start_time) > config.time_limit_seconds) {
      result.status = BnbStatus::TimeLimit;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    ++result.node_count;

    FixedOracle node_oracle(oracle, node.fixings);
    SdConfig sd_cfg;
    sd_cfg.drop_rule = config.drop_rule;
    sd_cfg.stop_tol = config.stop_tol;
    sd_cfg.max_iterations = config.max_sd_iterations;
    if (incumbent && !config.disable_early_pruning)
      sd_cfg.cutoff = incumbent_value;

    std::vector<Vertex> initial;
    if (config.warmstart) initial = std::move(node.inherited);
    // Cold start leaves initial empty; run_sd then takes a single fresh
    // oracle answer.

    SdResult rel;
    try {
      rel = run_sd(node_oracle, work, initial, sd_cfg);
    } catch (const OracleInfeasible& e) {
      if (node.depth == 0)
        throw OracleInfeasible(std::string("infeasible at the root: ") +
                               e.what());
      // Branching on fractional coordinates guarantees both children keep a
      // feasible vertex, so this indicates a broken oracle.
      throw OracleError(
          std::string("oracle inconsistency: node reported infeasible below "
                      "the root (") +
          e.what() + ")");
    }
    result.total_sd_iterations += rel.iterations;
    offer_incumbent(rel.incumbent, rel.incumbent_value);

    if (rel.status == SdStatus::CycleDetected ||
        rel.status == SdStatus::IterLimit) {
      // Re-solve without dropping: D0 cannot cycle, so the node bound is
      // always recoverable.
      SdConfig retry = sd_cfg;
      retry.drop_rule = DropRule::D0;
      rel = run_sd(node_oracle, work, rel.final_vertices, retry);
      result.total_sd_iterations += rel.iterations;
      offer_incumbent(rel.incumbent, rel.incumbent_value);
    }

    const char* prune_reason = nullptr;
    if (rel.status == SdStatus::Cutoff) {
      min_closed_bound = std::min(min_closed_bound, rel.best_lb);
      prune_reason = "cutoff";
    } else if (is_integral(rel.x_star)) {
      // A binary relaxation optimum is a feasible vertex of this node, and
      // every vertex behind it was already offered to the incumbent.
      min_closed_bound = std::min(min_closed_bound, rel.value);
      prune_reason = "integral";
    } else if (incumbent && rel.value >= incumbent_value - config.stop_tol) {
      min_closed_bound = std::min(min_closed_bound, rel.value);
      prune_reason = "bound";
    }

    if (config.node_trace) {
      *config.node_trace << "node depth=" << node.depth
                         << " fixed=" << node.fixings.size();
      if (node.branch_var >= 0)
        *config.node_trace << " branch=" << node.branch_var << ':'
                           << node.branch_val;
      *config.node_trace << " bound=" << rel.value
                         << " status=" << to_string(rel.status)
                         << " prune=" << (prune_reason ? prune_reason : "-")
                         << '\n';
    }
    if (prune_reason) continue;

    const int branch = pick_branching_variable(rel.x_star);
    if (branch < 0) {
      min_closed_bound = std::min(min_closed_bound, rel.value);
      continue;
    }

    Node zero_child, one_child;
    zero_child.fixings = node.fixings;
    zero_child.fixings.set(static_cast<std::size_t>(branch), 0);
    one_child.fixings = node.fixings;
    one_child.fixings.set(static_cast<std::size_t>(branch), 1);
    zero_child.depth = one_child.depth = node.depth + 1;
    zero_child.parent_bound = one_child.parent_bound = rel.value;
    zero_child.branch_var = one_child.branch_var = branch;
    zero_child.branch_val = 0;
    one_child.branch_val = 1;
    for (const Vertex& v : rel.final_vertices) {
      (v.bits[static_cast<std::size_t>(branch)] ? one_child : zero_child)
          .inherited.push_back(v);
    }
    // DFS explores the fixed-to-1 child first, so it is pushed last.
    stack.push_back(std::move(zero_child));
    stack.push_back(std::move(one_child));
  }

  result.wall_time_seconds = seconds_since(start_time);
  result.incumbent = incumbent;
  result.value = incumbent_value;
  if (incumbent && perturbed)
    result.value = evaluate_f(*incumbent, original).value;
  if (result.status == BnbStatus::TimeLimit) {
    double open_bound = min_closed_bound;
    for (const Node& n : stack)
      open_bound = std::min(open_bound, n.parent_bound);
    result.global_lb = std::min(incumbent_value, open_bound);
  } else {
    result.global_lb = std::min(incumbent_value, min_closed_bound);
  }
  return result;
}

RootResult evaluate_root(const Instance& instance, LinearOracle& oracle,
                         const SdConfig& config) {
  const auto start_time = Clock::now();
  const SdResult rel = run_sd(oracle, instance.scenarios, {}, config);
  RootResult out;
  out.status = rel.status;
  out.value = rel.value;
  out.iterations = rel.iterations;
  out.wall_time_seconds = seconds_since(start_time);
  return out;
}

}  // namespace rsd
