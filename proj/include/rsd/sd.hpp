#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rsd/master.hpp"
#include "rsd/model.hpp"
#include "rsd/oracles.hpp"

namespace rsd {

enum class DropRule { D0, D1, D2 };

std::string to_string(DropRule rule);
DropRule drop_rule_from_string(const std::string& s);

enum class SdStatus { Optimal, Cutoff, IterLimit, CycleDetected };

std::string to_string(SdStatus status);

struct SdConfig {
  DropRule drop_rule = DropRule::D0;
  /// A zero-weight vertex is dropped under D2 only when it provides a strict
  /// ascent direction: subgradient . (v - x) >= d2_epsilon.
  double d2_epsilon = 1e-6;
  double stop_tol = 1e-6;
  long max_iterations = 1000000;
  /// When positive, every scenario entry (offsets included) is shifted once
  /// at the start by uniform noise in [-eps, eps] drawn from rng_seed; the
  /// reported value is re-evaluated under the unperturbed scenarios.
  double perturbation_magnitude = 0.0;
  std::uint64_t rng_seed = 0;
  /// Observer for the per-iteration lower bound (fires every iteration).
  std::function<void(long iteration, double lb)> lb_callback;
  /// Stop with Cutoff as soon as a lower bound reaches this value.
  std::optional<double> cutoff;
  /// Test hooks forwarded to the master (iteration -> preferred index).
  std::function<std::optional<std::size_t>(long)> dual_preference;
  std::function<std::optional<std::size_t>(long)> alpha_preference;
  /// One line per iteration (k, z, lb, |V|, drops) when set.
  std::ostream* trace = nullptr;
};

struct SdResult {
  SdStatus status = SdStatus::IterLimit;
  std::vector<double> x_star;
  /// f(x_star) under the original (unperturbed) scenarios.
  double value = 0.0;
  double best_lb = 0.0;
  long iterations = 0;
  std::vector<Vertex> final_vertices;
  /// Best binary point seen (initial vertices and every oracle answer),
  /// valued under the unperturbed scenarios.
  std::optional<Vertex> incumbent;
  double incumbent_value = 0.0;
  std::vector<double> lb_history;
  /// The repeated active set, present when status == CycleDetected.
  std::optional<std::vector<Vertex>> repeated_set;
};

/// The f(x^k) + c^k.(x_hat - x^k) bound: valid for the whole relaxed problem
/// because c^k is a subgradient and x_hat a true linear minimizer.
double lemma_lower_bound(double f_xk, std::span<const double> c_k,
                         std::span<const double> x_k,
                         std::span<const double> x_hat);

/// The simplicial-decomposition loop: alternate master solves over conv(V)
/// with linear-oracle calls, growing (and under D1/D2 pruning) the vertex set
/// until the normal-cone certificate, a cutoff, a detected cycle, or the
/// iteration cap stops it. An empty initial_v is bootstrapped with one
/// oracle call on the first scenario's costs.
SdResult run_sd(LinearOracle& oracle, const ScenarioSet& u,
                const std::vector<Vertex>& initial_v, const SdConfig& config);

/// Fixed two-variable demo problems exercising the degenerate-dual corner
/// cases of the aggressive dropping rule. Both are tiny enough to verify by
/// hand and are used heavily in the tests.
struct DemoProblem {
  ScenarioSet scenarios;
  std::vector<Vertex> feasible_points;
  Vertex start;
};

/// f = max{x1 - x2, x2 - x1} over {(0,0),(0,1),(1,0)}: D1 with adversarial
/// dual choices revisits an earlier active set without improving.
DemoProblem cycling_demo_problem();

/// f = max{x1, x2} over {(1,1),(0,1),(1,0)}: nonnegative scenarios and a
/// suboptimal start still stall D1 after a single drop.
DemoProblem stall_demo_problem();

/// One recorded iteration of a demo run.
struct SdTraceIteration {
  long k = 0;
  std::vector<Vertex> vertices_before;
  MasterSolution master;
  Vertex x_hat;
  bool terminal = false;
  /// Vertices surviving the drop step, before x_hat is appended.
  std::vector<Vertex> kept_after_drop;
  std::vector<Vertex> vertices_after;
};

/// Runs the stall demo under D1 with the deterministic dual/alpha
/// preferences that trigger the stall (prefer scenario 0, prefer vertex 0)
/// and returns the per-iteration trace. The second iteration's
/// kept_after_drop collapses back to the starting singleton.
std::vector<SdTraceIteration> run_stall_demo(
    std::size_t prefer_dual_scenario = 0, std::size_t prefer_alpha_vertex = 0,
    long max_iterations = 4);

}  // namespace rsd
