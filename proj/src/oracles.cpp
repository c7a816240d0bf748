#include "rsd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <sstream>

#include <errno.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace rsd {

void Fixings::set(std::size_t index, int value) {
  if (value != 0 && value != 1)
    throw std::invalid_argument("fixing value must be 0 or 1");
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const auto& e, std::size_t i) { return e.first < i; });
  if (it != entries_.end() && it->first == index)
    throw OracleError("variable " + std::to_string(index) + " fixed twice");
  entries_.insert(it, {index, value});
}

std::optional<int> Fixings::get(std::size_t index) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const auto& e, std::size_t i) { return e.first < i; });
  if (it != entries_.end() && it->first == index) return it->second;
  return std::nullopt;
}

bool Fixings::respected_by(const Vertex& v) const {
  for (const auto& [idx, val] : entries_) {
    if (idx >= v.bits.size()) return false;
    if (v.bits[idx] != val) return false;
  }
  return true;
}

Fixings Fixings::merged_with(const Fixings& extra) const {
  Fixings out = *this;
  for (const auto& [idx, val] : extra.entries_) {
    if (auto existing = out.get(idx)) {
      if (*existing != val)
        throw OracleError("conflicting fixings for variable " +
                          std::to_string(idx));
      continue;
    }
    out.set(idx, val);
  }
  return out;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

void require_dimension(std::size_t expected, std::span<const double> costs,
                       const Fixings& fixings) {
  if (costs.size() != expected)
    throw std::invalid_argument("oracle: cost vector has wrong dimension");
  for (const auto& [idx, val] : fixings.entries())
    if (idx >= expected)
      throw std::invalid_argument("oracle: fixing index out of range");
}

}  // namespace

MstOracle::MstOracle(Graph graph) : graph_(std::move(graph)) {
  graph_.validate();
  if (!graph_.is_complete())
    throw std::invalid_argument("MstOracle expects a complete graph");
}

std::optional<Vertex> MstOracle::minimize(std::span<const double> costs,
                                          const Fixings& fixings) {
  const std::size_t n = graph_.edge_count();
  require_dimension(n, costs, fixings);

  Vertex tree;
  tree.bits.assign(n, 0);
  DisjointSets ds(graph_.node_count);
  int picked = 0;

  // Forced edges first; a cycle among them is infeasible.
  for (const auto& [idx, val] : fixings.entries()) {
    if (val != 1) continue;
    const auto [a, b] = graph_.edges[idx];
    if (!ds.unite(a, b)) return std::nullopt;
    tree.bits[idx] = 1;
    ++picked;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (costs[a] != costs[b]) return costs[a] < costs[b];
    return a < b;  // deterministic tie break by edge index
  });

  for (std::size_t idx : order) {
    if (picked == graph_.node_count - 1) break;
    if (tree.bits[idx]) continue;
    if (auto fixed = fixings.get(idx); fixed && *fixed == 0) continue;
    const auto [a, b] = graph_.edges[idx];
    if (!ds.unite(a, b)) continue;
    tree.bits[idx] = 1;
    ++picked;
  }
  if (picked != graph_.node_count - 1) return std::nullopt;  // disconnected
  return tree;
}

TspOracle::TspOracle(Graph graph) : graph_(std::move(graph)) {
  graph_.validate();
  if (!graph_.is_complete())
    throw std::invalid_argument("TspOracle expects a complete graph");
  if (graph_.node_count < 3)
    throw std::invalid_argument("TspOracle needs at least 3 nodes");
  if (graph_.node_count > 20)
    throw std::invalid_argument(
        "oracle size limit: Held-Karp handles at most 20 nodes; plug in an "
        "external oracle for larger instances");
}

std::optional<Vertex> TspOracle::minimize(std::span<const double> costs,
                                          const Fixings& fixings) {
  const std::size_t n_edges = graph_.edge_count();
  require_dimension(n_edges, costs, fixings);
  const int n = graph_.node_count;

  // Fold fixings into the costs: tours all have exactly n edges, so a
  // uniform +/-BIG shift ranks fixing-respecting tours ahead of the rest
  // without disturbing their relative order.
  double max_abs = 0.0;
  for (double c : costs) max_abs = std::max(max_abs, std::abs(c));
  const double big = 1.0 + static_cast<double>(n_edges) * max_abs;
  std::vector<double> shifted(costs.begin(), costs.end());
  for (const auto& [idx, val] : fixings.entries())
    shifted[idx] += val == 0 ? big : -big;

  auto edge_cost = [&](int a, int b) {
    return shifted[static_cast<std::size_t>(graph_.edge_index(a, b))];
  };

  // Held-Karp over subsets of {1..n-1}; dp[mask][v] = cheapest path from
  // node 0 through exactly the nodes of mask, ending at v.
  const std::size_t n_masks = std::size_t(1) << (n - 1);
  const std::size_t width = static_cast<std::size_t>(n - 1);
  const double inf = 1.0 / 0.0;
  std::vector<double> dp(n_masks * width, inf);
  std::vector<std::int8_t> parent(n_masks * width, -1);

  for (int v = 1; v < n; ++v)
    dp[(std::size_t(1) << (v - 1)) * width + (v - 1)] = edge_cost(0, v);

  for (std::size_t mask = 1; mask < n_masks; ++mask) {
    for (int v = 1; v < n; ++v) {
      if (!(mask & (std::size_t(1) << (v - 1)))) continue;
      const double cur = dp[mask * width + (v - 1)];
      if (cur == inf) continue;
      for (int w = 1; w < n; ++w) {
        if (mask & (std::size_t(1) << (w - 1))) continue;
        const std::size_t next = mask | (std::size_t(1) << (w - 1));
        double cand = cur + edge_cost(v, w);
        double& slot = dp[next * width + (w - 1)];
        if (cand < slot) {
          slot = cand;
          parent[next * width + (w - 1)] = static_cast<std::int8_t>(v);
        }
      }
    }
  }

  const std::size_t full = n_masks - 1;
  double best = inf;
  int best_last = -1;
  for (int v = 1; v < n; ++v) {
    const double cand = dp[full * width + (v - 1)] + edge_cost(v, 0);
    if (cand < best) {
      best = cand;
      best_last = v;
    }
  }
  if (best_last < 0) return std::nullopt;

  Vertex tour;
  tour.bits.assign(n_edges, 0);
  std::size_t mask = full;
  int v = best_last;
  tour.bits[static_cast<std::size_t>(graph_.edge_index(v, 0))] = 1;
  while (v != 0) {
    const int prev = parent[mask * width + (v - 1)];
    const int from = prev < 0 ? 0 : prev;
    tour.bits[static_cast<std::size_t>(graph_.edge_index(from, v))] = 1;
    mask &= ~(std::size_t(1) << (v - 1));
    v = from;
  }

  // The shift makes fixing violations strictly dominated; if the optimum
  // still violates one, the fixings are jointly infeasible.
  if (!fixings.respected_by(tour)) return std::nullopt;
  return tour;
}

EnumerationOracle::EnumerationOracle(std::size_t dimension,
                                     std::vector<Vertex> points)
    : dim_(dimension), points_(std::move(points)) {
  for (const Vertex& p : points_)
    if (p.bits.size() != dim_)
      throw std::invalid_argument("enumeration oracle: point dimension mismatch");
}

std::optional<Vertex> EnumerationOracle::minimize(std::span<const double> costs,
                                                  const Fixings& fixings) {
  require_dimension(dim_, costs, fixings);
  const Vertex* best = nullptr;
  double best_value = 0.0;
  for (const Vertex& p : points_) {
    if (!fixings.respected_by(p)) continue;
    double value = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      if (p.bits[i]) value += costs[i];
    if (!best || value < best_value) {  // ties keep the earliest point
      best = &p;
      best_value = value;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

namespace {

// One request/response exchange with a child process over pipes, with a
// wall-clock timeout on the read side.
std::string exchange_with_child(const std::string& command,
                                const std::string& request,
                                double timeout_seconds) {
  int to_child[2], from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0)
    throw OracleError("external oracle: pipe() failed");

  const pid_t pid = fork();
  if (pid < 0) throw OracleError("external oracle: fork() failed");
  if (pid == 0) {
    setpgid(0, 0);  // own process group so a timeout can kill sh's children
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);

  // Write the full request, then close stdin so line-at-a-time readers see
  // EOF even if they ignore the framing.
  std::size_t written = 0;
  while (written < request.size()) {
    const ssize_t n = write(to_child[1], request.data() + written,
                            request.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;  // child may exit early; the read below reports the failure
    }
    written += static_cast<std::size_t>(n);
  }
  close(to_child[1]);

  std::string response;
  char buf[4096];
  bool timed_out = false;
  while (true) {
    struct pollfd pfd{from_child[0], POLLIN, 0};
    const int pr = poll(&pfd, 1, static_cast<int>(timeout_seconds * 1000.0));
    if (pr == 0) {
      timed_out = true;
      break;
    }
    if (pr < 0) {
      if (errno == EINTR) continue;
      break;
    }
    const ssize_t n = read(from_child[0], buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (n == 0) break;  // EOF
    response.append(buf, static_cast<std::size_t>(n));
  }
  close(from_child[0]);
  if (timed_out) kill(-pid, SIGKILL);
  int status = 0;
  waitpid(pid, &status, 0);
  if (timed_out)
    throw OracleError("external oracle timed out after " +
                      std::to_string(timeout_seconds) + "s: " + command);
  return response;
}

}  // namespace

ExternalOracle::ExternalOracle(std::string command, const Instance& instance,
                               double timeout_seconds)
    : command_(std::move(command)),
      instance_(&instance),
      timeout_seconds_(timeout_seconds) {
  if (command_.empty())
    throw std::invalid_argument("external oracle: empty command");
}

std::size_t ExternalOracle::dimension() const {
  return instance_->dimension();
}

std::optional<Vertex> ExternalOracle::minimize(std::span<const double> costs,
                                               const Fixings& fixings) {
  const std::size_t n = instance_->dimension();
  require_dimension(n, costs, fixings);

  std::ostringstream req;
  req << n << ' ' << fixings.size() << '\n';
  char num[64];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(num, sizeof(num), "%.17g", costs[i]);
    req << (i ? " " : "") << num;
  }
  req << '\n';
  for (const auto& [idx, val] : fixings.entries())
    req << idx << ' ' << val << '\n';

  const std::string response =
      exchange_with_child(command_, req.str(), timeout_seconds_);

  std::istringstream in(response);
  std::string first;
  if (!(in >> first))
    throw OracleError("external oracle returned no output: " + command_);
  if (first == "INFEASIBLE") return std::nullopt;

  Vertex v;
  v.bits.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int bit;
    if (i == 0) {
      try {
        bit = std::stoi(first);
      } catch (const std::exception&) {
        throw OracleError("external oracle protocol violation: expected 0/1 "
                          "values, got \"" + first + "\"");
      }
    } else if (!(in >> bit)) {
      throw OracleError("external oracle protocol violation: expected " +
                        std::to_string(n) + " values");
    }
    if (bit != 0 && bit != 1)
      throw OracleError("external oracle protocol violation: non-binary value");
    v.bits[i] = static_cast<std::uint8_t>(bit);
  }

  if (!fixings.respected_by(v))
    throw OracleError("external oracle returned a vertex violating a fixing");
  if (!check_vertex(v, *instance_))
    throw OracleError("external oracle returned an infeasible vertex");
  return v;
}

std::unique_ptr<LinearOracle> make_internal_oracle(const Instance& instance) {
  switch (instance.kind) {
    case ProblemKind::Mst:
      return std::make_unique<MstOracle>(*instance.graph);
    case ProblemKind::Tsp:
      return std::make_unique<TspOracle>(*instance.graph);
    case ProblemKind::Generic:
      throw OracleError(
          "no internal oracle for generic instances; use an external oracle");
  }
  throw OracleError("unknown instance kind");
}

}  // namespace rsd
