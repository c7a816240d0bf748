#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rsd/bnb.hpp"
#include "rsd/model.hpp"

namespace rsd {

/// Recipe for one random instance: complete graph, nominal costs i.i.d.
/// uniform on [1,2], each scenario = nominal + beta * (random unit vector),
/// offsets zero. MST unit vectors are signed, TSP ones nonnegative so
/// distances stay positive.
struct GeneratorSpec {
  ProblemKind kind = ProblemKind::Mst;
  int nodes = 5;
  int scenario_count = 10;
  double beta = 1.0;
  std::uint64_t seed = 0;
  int replicate = 0;
};

Instance generate_instance(const GeneratorSpec& spec);

/// One solver configuration of the benchmark grid.
struct SolverConfig {
  std::string tag;  // e.g. "d0-ws", "d2-nows", "root-d0"
  DropRule drop_rule = DropRule::D0;
  bool warmstart = true;
  bool root_only = false;
  double perturbation = 0.0;
  double stop_tol = 1e-6;
};

/// One (instance, configuration) outcome; maps 1:1 onto a CSV row.
struct RunRecord {
  std::string instance;
  std::string solver;
  std::string status;  // solved | time_limit | iter_limit | cycle | error
  double time_seconds = 0.0;
  long iterations = 0;
  long nodes = 0;
  std::optional<double> bound;
  std::optional<double> value;
};

struct BenchOptions {
  double time_limit_seconds = 3600.0;
  int jobs = 1;
  std::ostream* progress = nullptr;
};

/// Runs every (instance, config) pair, up to `jobs` at a time; individual
/// failures become status "error" rows and never abort the batch. Records
/// come back sorted by (instance, solver) regardless of scheduling.
std::vector<RunRecord> run_benchmark(const std::vector<GeneratorSpec>& specs,
                                     const std::vector<SolverConfig>& configs,
                                     const BenchOptions& options);

/// Canonical CSV: header instance,solver,status,time_s,iterations,nodes,bound,value
std::string records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_csv(const std::string& text);

/// Per-(nodes, scenario-count, solver) aggregate over solved runs only.
struct SummaryCell {
  std::string solver;
  int solved = 0;
  int total = 0;
  double mean_time = 0.0;
  double mean_iterations = 0.0;
  double mean_nodes = 0.0;
};
struct SummaryRow {
  int nodes = 0;
  int edges = 0;
  int scenario_count = 0;
  std::vector<SummaryCell> cells;  // one per solver tag, tag order
};

/// Groups records by the n<N>_m<M> pattern embedded in generated instance
/// names; averages are taken over the runs solved within the time limit.
std::vector<SummaryRow> aggregate_records(
    const std::vector<RunRecord>& records,
    const std::vector<std::string>& solver_order);

/// Aligned text table of the aggregates (display only; the CSV is canonical).
std::string render_summary_table(const std::vector<SummaryRow>& rows);

/// Performance-profile curves: per solver s, rho_s(tau) = fraction of
/// instances whose time ratio to the per-instance best is <= tau. Failures
/// (NaN times) get ratio infinity; instances failed by every solver are
/// excluded (their count is reported via `all_failed`).
struct ProfilePoint {
  std::string solver;
  double tau = 1.0;
  double rho = 0.0;
};
struct ProfileResult {
  std::vector<ProfilePoint> points;  // step-function breakpoints per solver
  int instances_used = 0;
  int all_failed = 0;
};

/// `times[s][p]` is solver s's time on instance p; NaN marks a failure.
ProfileResult performance_profile(const std::vector<std::string>& solvers,
                                  const std::vector<std::vector<double>>& times);

/// Same computation from a results CSV (status != solved marks failure).
ProfileResult performance_profile_from_records(
    const std::vector<RunRecord>& records);

/// Profile CSV: header solver,tau,rho
std::string profile_to_csv(const ProfileResult& profile);

/// The command-line entry point (subcommands generate/solve/root/bench/
/// profile). Returns 0 on success, 1 on solver errors, 2 on usage errors.
int cli(int argc, const char* const* argv);

}  // namespace rsd
