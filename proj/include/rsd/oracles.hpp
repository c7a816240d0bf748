#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsd/model.hpp"

namespace rsd {

/// Oracle misbehavior (protocol violation, invalid vertex, timeout, or an
/// infeasibility that the search tree proves impossible).
class OracleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The oracle's restricted feasible set is empty where the caller cannot
/// tolerate it (e.g. the bootstrap call of a decomposition run).
class OracleInfeasible : public OracleError {
public:
  using OracleError::OracleError;
};

/// Variable fixings: a small sorted map index -> {0,1}.
class Fixings {
public:
  Fixings() = default;

  void set(std::size_t index, int value);
  std::optional<int> get(std::size_t index) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<std::size_t, int>>& entries() const {
    return entries_;
  }

  bool respected_by(const Vertex& v) const;
  /// This map plus `extra`; throws OracleError on conflicting values.
  Fixings merged_with(const Fixings& extra) const;

private:
  std::vector<std::pair<std::size_t, int>> entries_;  // sorted by index
};

/// The linear-optimization oracle: exact argmin of costs . x over the
/// feasible binary set, restricted by fixings. Returns nullopt when the
/// restricted set is empty. Implementations are exact, never heuristic:
/// the lower-bound machinery needs true minimizers.
class LinearOracle {
public:
  virtual ~LinearOracle() = default;
  virtual std::size_t dimension() const = 0;
  virtual bool supports_fixings() const { return true; }
  virtual std::optional<Vertex> minimize(std::span<const double> costs,
                                         const Fixings& fixings) = 0;
};

/// Kruskal on a complete graph. Forced edges are inserted first (a cycle
/// among them is INFEASIBLE), forbidden edges skipped, the rest processed in
/// ascending cost order with ties broken by edge index.
class MstOracle final : public LinearOracle {
public:
  explicit MstOracle(Graph graph);
  std::size_t dimension() const override { return graph_.edge_count(); }
  std::optional<Vertex> minimize(std::span<const double> costs,
                                 const Fixings& fixings) override;
  const Graph& graph() const { return graph_; }

private:
  Graph graph_;
};

/// Held-Karp bitmask DP, exact up to 20 nodes. Fixings are folded into the
/// costs as a +/-BIG shift with BIG = 1 + n*max|c|; since every tour has the
/// same number of edges the shift preserves the argmin among fixing-
/// respecting tours, and a post-hoc check catches jointly infeasible
/// fixings.
class TspOracle final : public LinearOracle {
public:
  explicit TspOracle(Graph graph);
  std::size_t dimension() const override { return graph_.edge_count(); }
  std::optional<Vertex> minimize(std::span<const double> costs,
                                 const Fixings& fixings) override;
  const Graph& graph() const { return graph_; }

private:
  Graph graph_;
};

/// Exact argmin by linear scan over an explicit vertex list; ties go to the
/// earliest listed point. Test baseline and the natural oracle for tiny
/// generic instances.
class EnumerationOracle final : public LinearOracle {
public:
  EnumerationOracle(std::size_t dimension, std::vector<Vertex> points);
  std::size_t dimension() const override { return dim_; }
  std::optional<Vertex> minimize(std::span<const double> costs,
                                 const Fixings& fixings) override;
  const std::vector<Vertex>& points() const { return points_; }

private:
  std::size_t dim_;
  std::vector<Vertex> points_;
};

/// Runs an external command per call and speaks the line protocol:
///   request:  line 1 "n m_fix", line 2 the n costs (full precision),
///             then m_fix lines "index value"
///   response: one line of n space-separated 0/1 values, or "INFEASIBLE".
/// The returned vertex is validated (check_vertex + fixings) before being
/// accepted; violations, malformed output, and timeouts raise OracleError.
class ExternalOracle final : public LinearOracle {
public:
  ExternalOracle(std::string command, const Instance& instance,
                 double timeout_seconds = 60.0);
  std::size_t dimension() const override;
  std::optional<Vertex> minimize(std::span<const double> costs,
                                 const Fixings& fixings) override;

private:
  std::string command_;
  const Instance* instance_;
  double timeout_seconds_;
};

/// Adapter pinning a base set of fixings (a branch-and-bound node's) under
/// whatever the caller adds per call.
class FixedOracle final : public LinearOracle {
public:
  FixedOracle(LinearOracle& inner, Fixings base)
      : inner_(&inner), base_(std::move(base)) {}
  std::size_t dimension() const override { return inner_->dimension(); }
  bool supports_fixings() const override { return inner_->supports_fixings(); }
  std::optional<Vertex> minimize(std::span<const double> costs,
                                 const Fixings& fixings) override {
    return inner_->minimize(costs, base_.merged_with(fixings));
  }

private:
  LinearOracle* inner_;
  Fixings base_;
};

/// Picks the internal oracle matching the instance kind; throws OracleError
/// for Generic (no structure to exploit; use an explicit list or an
/// external command).
std::unique_ptr<LinearOracle> make_internal_oracle(const Instance& instance);

}  // namespace rsd
