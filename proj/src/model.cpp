#include "rsd/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rsd/kernels.hpp"
#include "rsd/rng.hpp"

namespace rsd {

ScenarioSet::ScenarioSet(std::vector<Scenario> scenarios)
    : scenarios_(std::move(scenarios)) {
  if (scenarios_.empty()) throw ParseError("empty scenario set");
  dim_ = scenarios_[0].costs.size();
  for (const Scenario& s : scenarios_) {
    if (s.costs.size() != dim_)
      throw ParseError("scenario dimension mismatch: expected " +
                       std::to_string(dim_) + ", got " +
                       std::to_string(s.costs.size()));
    if (!std::isfinite(s.offset))
      throw ParseError("non-finite scenario offset");
    for (double c : s.costs)
      if (!std::isfinite(c)) throw ParseError("non-finite scenario cost");
  }
}

ScenarioSet ScenarioSet::perturbed(double eps, Rng& rng) const {
  std::vector<Scenario> out = scenarios_;
  for (Scenario& s : out) {
    s.offset += rng.uniform(-eps, eps);
    for (double& c : s.costs) c += rng.uniform(-eps, eps);
  }
  return ScenarioSet(std::move(out));
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Mst: return "mst";
    case ProblemKind::Tsp: return "tsp";
    case ProblemKind::Generic: return "generic";
  }
  return "generic";
}

ProblemKind problem_kind_from_string(const std::string& s) {
  if (s == "mst") return ProblemKind::Mst;
  if (s == "tsp") return ProblemKind::Tsp;
  if (s == "generic") return ProblemKind::Generic;
  throw ParseError("unknown kind \"" + s + "\" (expected mst|tsp|generic)");
}

Graph Graph::complete(int nodes) {
  Graph g;
  g.node_count = nodes;
  g.edges.reserve(static_cast<std::size_t>(nodes) * (nodes - 1) / 2);
  for (int u = 0; u < nodes; ++u)
    for (int v = u + 1; v < nodes; ++v) g.edges.emplace_back(u, v);
  return g;
}

bool Graph::is_complete() const {
  return edges.size() ==
         static_cast<std::size_t>(node_count) * (node_count - 1) / 2;
}

int Graph::edge_index(int u, int v) const {
  if (u > v) std::swap(u, v);
  const auto it =
      std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v));
  if (it == edges.end() || *it != std::make_pair(u, v)) return -1;
  return static_cast<int>(it - edges.begin());
}

void Graph::validate() const {
  if (node_count <= 0) throw ParseError("graph needs at least one node");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (u < 0 || v < 0 || u >= node_count || v >= node_count)
      throw ParseError("edge endpoint out of range");
    if (u == v) throw ParseError("self-loop in edge list");
    if (u > v) throw ParseError("edges must be listed as (u,v) with u < v");
    if (i > 0 && !(edges[i - 1] < edges[i]))
      throw ParseError("edges must be sorted lexicographically and distinct");
  }
}

std::size_t Vertex::ones() const {
  std::size_t n = 0;
  for (std::uint8_t b : bits) n += b;
  return n;
}

std::uint64_t vertex_hash(const Vertex& v) {
  // FNV-1a over the bit bytes
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint8_t b : v.bits) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

FValue evaluate_f(std::span<const double> x, const ScenarioSet& u) {
  if (x.size() != u.dimension())
    throw std::invalid_argument("evaluate_f: point has dimension " +
                                std::to_string(x.size()) + ", scenarios have " +
                                std::to_string(u.dimension()));
  return kernels::max_affine(u, x);
}

FValue evaluate_f(const Vertex& v, const ScenarioSet& u) {
  if (v.bits.size() != u.dimension())
    throw std::invalid_argument("evaluate_f: vertex/scenario dimension mismatch");
  return kernels::max_affine_bits(u, v);
}

namespace {

// Union-find over graph nodes, call-local.
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

bool is_spanning_tree(const Vertex& v, const Graph& g) {
  if (v.ones() != static_cast<std::size_t>(g.node_count) - 1) return false;
  DisjointSets ds(g.node_count);
  for (std::size_t i = 0; i < v.bits.size(); ++i) {
    if (!v.bits[i]) continue;
    const auto [a, b] = g.edges[i];
    if (!ds.unite(a, b)) return false;  // cycle
  }
  int root = ds.find(0);
  for (int n = 1; n < g.node_count; ++n)
    if (ds.find(n) != root) return false;
  return true;
}

bool is_tour(const Vertex& v, const Graph& g) {
  std::vector<int> degree(g.node_count, 0);
  DisjointSets ds(g.node_count);
  std::size_t used = 0;
  for (std::size_t i = 0; i < v.bits.size(); ++i) {
    if (!v.bits[i]) continue;
    ++used;
    const auto [a, b] = g.edges[i];
    ++degree[a];
    ++degree[b];
    ds.unite(a, b);
  }
  if (used != static_cast<std::size_t>(g.node_count)) return false;
  for (int d : degree)
    if (d != 2) return false;
  int root = ds.find(0);
  for (int n = 1; n < g.node_count; ++n)
    if (ds.find(n) != root) return false;  // degree 2 + connected = one cycle
  return true;
}

}  // namespace

bool check_vertex(const Vertex& v, const Instance& instance) {
  if (v.bits.size() != instance.dimension())
    throw std::invalid_argument("check_vertex: dimension mismatch");
  for (std::uint8_t b : v.bits)
    if (b > 1) return false;
  switch (instance.kind) {
    case ProblemKind::Generic: return true;
    case ProblemKind::Mst: return is_spanning_tree(v, *instance.graph);
    case ProblemKind::Tsp: return is_tour(v, *instance.graph);
  }
  return false;
}

namespace {

using nlohmann::json;

Graph graph_from_json(const json& j, ProblemKind kind, std::size_t dim) {
  Graph g;
  if (j.contains("nodes")) {
    g.node_count = j.at("nodes").get<int>();
  } else {
    throw ParseError("mst/tsp instances need a \"nodes\" field");
  }
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        throw ParseError("each edge must be a [u, v] pair");
      g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  } else {
    g = Graph::complete(g.node_count);
  }
  g.validate();
  if (kind != ProblemKind::Generic && !g.is_complete())
    throw ParseError("mst/tsp instances require a complete graph");
  if (g.edge_count() != dim)
    throw ParseError("scenario dimension " + std::to_string(dim) +
                     " does not match edge count " +
                     std::to_string(g.edge_count()));
  return g;
}

}  // namespace

Instance load_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.contains("kind")) throw ParseError("missing \"kind\"");
    const ProblemKind kind =
        problem_kind_from_string(j.at("kind").get<std::string>());

    if (!j.contains("scenarios") || !j.at("scenarios").is_array() ||
        j.at("scenarios").empty())
      throw ParseError("empty scenario set");
    std::vector<Scenario> scenarios;
    scenarios.reserve(j.at("scenarios").size());
    for (const auto& sj : j.at("scenarios")) {
      Scenario s;
      s.offset = sj.value("c0", 0.0);
      s.costs = sj.at("c").get<std::vector<double>>();
      scenarios.push_back(std::move(s));
    }
    ScenarioSet set(std::move(scenarios));

    std::optional<Graph> graph;
    if (kind != ProblemKind::Generic)
      graph = graph_from_json(j, kind, set.dimension());

    Instance inst{kind, j.value("name", std::string{}), std::move(graph),
                  std::move(set), {}, std::nullopt, std::nullopt};
    if (j.contains("meta")) {
      const auto& meta = j.at("meta");
      if (meta.contains("nominal"))
        inst.nominal = meta.at("nominal").get<std::vector<double>>();
      if (meta.contains("beta")) inst.beta = meta.at("beta").get<double>();
      if (meta.contains("seed"))
        inst.seed = meta.at("seed").get<std::uint64_t>();
      if (!inst.nominal.empty() && inst.nominal.size() != inst.dimension())
        throw ParseError("meta.nominal length does not match the dimension");
    }
    return inst;
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance schema violation: ") + e.what());
  }
}

std::string save_instance(const Instance& instance) {
  json j;
  j["name"] = instance.name;
  j["kind"] = to_string(instance.kind);
  if (instance.graph) j["nodes"] = instance.graph->node_count;
  json scenarios = json::array();
  for (const Scenario& s : instance.scenarios.scenarios()) {
    scenarios.push_back({{"c0", s.offset}, {"c", s.costs}});
  }
  j["scenarios"] = std::move(scenarios);
  json meta;
  if (!instance.nominal.empty()) {
    meta["nominal"] = instance.nominal;
    // provenance: which half-space the scenario deviations were drawn from
    if (instance.kind != ProblemKind::Generic)
      meta["deviations"] =
          instance.kind == ProblemKind::Tsp ? "nonnegative" : "signed";
  }
  if (instance.beta) meta["beta"] = *instance.beta;
  if (instance.seed) meta["seed"] = *instance.seed;
  if (!meta.is_null()) j["meta"] = std::move(meta);
  return j.dump(2) + "\n";
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_instance(buf.str());
}

void save_instance_file(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write instance file: " + path);
  out << save_instance(instance);
}

}  // namespace rsd
