#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rsd {

class Rng;

/// Raised on malformed instance files and schema violations.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One cost scenario: objective piece  costs . x + offset.
struct Scenario {
  double offset = 0.0;          // the uncertain constant term
  std::vector<double> costs;    // one entry per decision variable
};

/// Finite uncertainty set. Immutable after construction; the worst case
/// objective is f(x) = max_j costs_j . x + offset_j.
class ScenarioSet {
public:
  explicit ScenarioSet(std::vector<Scenario> scenarios);

  std::size_t size() const { return scenarios_.size(); }
  std::size_t dimension() const { return dim_; }
  const Scenario& operator[](std::size_t j) const { return scenarios_[j]; }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }

  /// Copy with every entry (offsets included) shifted by uniform noise in
  /// [-eps, eps] drawn from `rng`.
  ScenarioSet perturbed(double eps, Rng& rng) const;

private:
  std::vector<Scenario> scenarios_;
  std::size_t dim_ = 0;
};

enum class ProblemKind { Mst, Tsp, Generic };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& s);

/// Undirected graph; edges are kept sorted lexicographically by (u, v) with
/// u < v, and the position of an edge in `edges` is its decision-variable
/// index. That mapping is frozen at construction.
struct Graph {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;

  static Graph complete(int nodes);

  std::size_t edge_count() const { return edges.size(); }
  bool is_complete() const;
  /// Index of edge (u,v); order of u,v irrelevant. -1 when absent.
  int edge_index(int u, int v) const;
  /// Throws ParseError when edges are unsorted, duplicated or degenerate.
  void validate() const;
};

/// Binary feasible point (incidence vector of a tree / tour / generic point).
struct Vertex {
  std::vector<std::uint8_t> bits;

  bool operator==(const Vertex&) const = default;
  std::size_t ones() const;
};

std::uint64_t vertex_hash(const Vertex& v);

struct VertexHasher {
  std::size_t operator()(const Vertex& v) const {
    return static_cast<std::size_t>(vertex_hash(v));
  }
};

/// A problem instance: what to optimize over (graph + kind) and the scenario
/// set. `nominal`, `beta` and `seed` are generator provenance only.
struct Instance {
  ProblemKind kind = ProblemKind::Generic;
  std::string name;
  std::optional<Graph> graph;  // absent for Generic
  ScenarioSet scenarios;
  std::vector<double> nominal;  // may be empty
  std::optional<double> beta;
  std::optional<std::uint64_t> seed;

  std::size_t dimension() const { return scenarios.dimension(); }
};

struct FValue {
  double value = 0.0;
  std::size_t argmax = 0;  // smallest scenario index attaining the max
};

/// Worst-case objective f(x) = max_j costs_j . x + offset_j together with the
/// smallest attaining scenario index. x may be fractional.
FValue evaluate_f(std::span<const double> x, const ScenarioSet& u);
FValue evaluate_f(const Vertex& v, const ScenarioSet& u);

/// Kind-specific feasibility of a binary vector: spanning tree for Mst,
/// Hamiltonian cycle for Tsp, anything for Generic.
bool check_vertex(const Vertex& v, const Instance& instance);

Instance load_instance(const std::string& text);
std::string save_instance(const Instance& instance);
Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& instance, const std::string& path);

}  // namespace rsd
