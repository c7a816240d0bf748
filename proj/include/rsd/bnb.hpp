#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "rsd/sd.hpp"

namespace rsd {

enum class BnbStatus { Solved, TimeLimit };

std::string to_string(BnbStatus status);

struct BnbConfig {
  DropRule drop_rule = DropRule::D0;
  bool warmstart = true;
  double time_limit_seconds = 3600.0;
  double stop_tol = 1e-6;
  long max_sd_iterations = 1000000;
  /// When positive, the scenario set is perturbed once before the search and
  /// the tree solves the perturbed problem; the reported incumbent value is
  /// re-evaluated under the original scenarios.
  double perturbation_magnitude = 0.0;
  std::uint64_t rng_seed = 0;
  /// Disables the mid-relaxation cutoff so every node is solved to
  /// optimality before the bound test; exists for soundness spot-checks.
  bool disable_early_pruning = false;
  /// One line per node (depth, fixings, bound, prune reason) when set.
  std::ostream* node_trace = nullptr;
};

struct BnbResult {
  BnbStatus status = BnbStatus::Solved;
  std::optional<Vertex> incumbent;
  double value = 0.0;
  double global_lb = 0.0;
  long node_count = 0;
  long total_sd_iterations = 0;
  double wall_time_seconds = 0.0;
};

/// Depth-first branch and bound over fractional coordinates. Children are
/// seeded with the parent's vertices that survive the new fixing (warmstart)
/// or a single fresh oracle answer; per-iteration lower bounds prune a node
/// mid-solve as soon as they reach the incumbent. Branching picks the
/// fractional coordinate closest to one (ties to the lowest index) and
/// explores the fixed-to-1 child first.
BnbResult solve_bnb(const Instance& instance, LinearOracle& oracle,
                    const BnbConfig& config);

struct RootResult {
  SdStatus status = SdStatus::Optimal;
  double value = 0.0;
  long iterations = 0;
  double wall_time_seconds = 0.0;
};

/// One relaxation solve at the root, no fixings ever issued; works with
/// oracles that cannot restrict their feasible set.
RootResult evaluate_root(const Instance& instance, LinearOracle& oracle,
                         const SdConfig& config);

}  // namespace rsd
