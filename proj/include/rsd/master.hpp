#pragma once

#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rsd/lp.hpp"
#include "rsd/model.hpp"

namespace rsd {

/// Internal failure of the master solve (the LP is feasible and bounded by
/// construction, so anything else is a defect worth a loud diagnostic).
class MasterError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The current vertex set V with its scenario-value cache: column v holds
/// costs_j . v + offset_j for every scenario j. Columns are computed once
/// when a vertex enters and move with it on drops, so updates cost one
/// m-vector per added vertex.
class ActiveSet {
public:
  explicit ActiveSet(const ScenarioSet& u);
  ActiveSet(const ScenarioSet& u, const std::vector<Vertex>& vertices);

  const ScenarioSet& scenarios() const { return *u_; }
  std::size_t size() const { return vertices_.size(); }
  std::size_t dimension() const { return u_->dimension(); }
  const Vertex& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  /// Scenario values of vertex i, length m.
  const std::vector<double>& column(std::size_t i) const { return columns_[i]; }

  bool contains(const Vertex& v) const;
  /// Appends v (no-op returning existing index when already present).
  std::size_t add(const Vertex& v);
  /// Keeps exactly the vertices at positions with keep[i]==true, preserving
  /// order; columns move along, nothing is recomputed.
  void filter(const std::vector<char>& keep);

  /// Order-independent 64-bit fingerprint of the vertex set.
  std::uint64_t set_fingerprint() const;

private:
  const ScenarioSet* u_;
  std::vector<Vertex> vertices_;
  std::vector<std::vector<double>> columns_;
  std::unordered_map<Vertex, std::size_t, VertexHasher> index_;
};

/// Output of one master solve over conv(V): optimal point x = sum alpha_v v,
/// value z, scenario duals lambda, and the subgradient sum_j lambda_j costs_j
/// whose negation lies in the normal cone of conv(V) at x.
struct MasterSolution {
  std::vector<double> alpha;
  double z = 0.0;
  std::vector<double> lambda;
  std::vector<double> x;
  std::vector<double> subgradient;
};

struct MasterOptions {
  /// Among optimal duals, pick the one putting maximum weight on this
  /// scenario (secondary LP over the optimal dual face). Test hook for
  /// reproducing degenerate-dual runs deterministically.
  std::optional<std::size_t> prefer_dual_scenario;
  /// Same device on the primal side: maximize the weight of this vertex.
  std::optional<std::size_t> prefer_alpha_vertex;
  lp::PivotOrder pivot_order = lp::PivotOrder::Forward;
  bool blands_from_start = false;
};

/// Solves min_{alpha in simplex} max_j (column values) as the LP
///   min z  s.t.  sum_v cache[j][v] alpha_v <= z,  sum_v alpha_v = 1
/// and assembles x and the subgradient from the optimal alpha and duals.
/// `u` must be the scenario set the ActiveSet was built against.
MasterSolution solve_master(const ActiveSet& v, const ScenarioSet& u,
                            const MasterOptions& opts = {});

}  // namespace rsd
