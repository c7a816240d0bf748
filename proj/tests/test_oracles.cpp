#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rsd/oracles.hpp"
#include "rsd/rng.hpp"
#include "test_util.hpp"

using namespace rsd;

namespace {

double vertex_cost(const Vertex& v, const std::vector<double>& costs) {
  double s = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i)
    if (v.bits[i]) s += costs[i];
  return s;
}

Instance wrap_instance(ProblemKind kind, const Graph& g) {
  std::vector<Scenario> sc(1);
  sc[0].costs.assign(g.edge_count(), 0.0);
  return Instance{kind, "wrap", g, ScenarioSet(std::move(sc)),
                  {},   std::nullopt, std::nullopt};
}

}  // namespace

TEST_CASE("kruskal on K3") {
  MstOracle oracle(Graph::complete(3));
  const std::vector<double> costs{1.0, 2.0, 3.0};

  auto tree = oracle.minimize(costs, {});
  REQUIRE(tree.has_value());
  CHECK(tree->bits == std::vector<std::uint8_t>{1, 1, 0});
  CHECK(vertex_cost(*tree, costs) == doctest::Approx(3.0));

  Fixings force_worst;
  force_worst.set(2, 1);
  tree = oracle.minimize(costs, force_worst);
  REQUIRE(tree.has_value());
  CHECK(tree->bits == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(vertex_cost(*tree, costs) == doctest::Approx(4.0));

  Fixings all;
  all.set(0, 1);
  all.set(1, 1);
  all.set(2, 1);
  CHECK_FALSE(oracle.minimize(costs, all).has_value());  // forced cycle
}

TEST_CASE("kruskal respects forbidden edges and detects disconnection") {
  MstOracle oracle(Graph::complete(4));
  Rng rng(17);
  std::vector<double> costs(6);
  for (double& c : costs) c = rng.uniform(0.0, 1.0);

  // Forbid every edge at node 3: index of (u,3) for u<3 -> edges 02,12,23?
  // K4 edges: 01 02 03 12 13 23 -> node 3 appears in 03(2), 13(4), 23(5).
  Fixings cut;
  cut.set(2, 0);
  cut.set(4, 0);
  cut.set(5, 0);
  CHECK_FALSE(oracle.minimize(costs, cut).has_value());
}

TEST_CASE("held-karp on tiny graphs") {
  {
    TspOracle oracle(Graph::complete(3));
    const std::vector<double> costs{5.0, -2.0, 7.0};
    auto tour = oracle.minimize(costs, {});
    REQUIRE(tour.has_value());
    CHECK(tour->bits == std::vector<std::uint8_t>{1, 1, 1});  // only K3 tour
  }
  {
    TspOracle oracle(Graph::complete(4));
    Rng rng(23);
    const Graph g = Graph::complete(4);
    const auto tours = testutil::enumerate_tours(g);
    REQUIRE(tours.size() == 3);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> costs(6);
      for (double& c : costs) c = rng.uniform(-1.0, 3.0);
      auto got = oracle.minimize(costs, {});
      REQUIRE(got.has_value());
      const auto best = testutil::brute_force_argmin_linear(tours, costs);
      CHECK(vertex_cost(*got, costs) ==
            doctest::Approx(vertex_cost(tours[*best], costs)).epsilon(1e-12));
    }
  }
}

TEST_CASE("held-karp honors fixings via the cost shift") {
  const Graph g = Graph::complete(5);
  TspOracle oracle(g);
  Rng rng(29);
  const auto tours = testutil::enumerate_tours(g);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> costs(g.edge_count());
    for (double& c : costs) c = rng.uniform(0.0, 2.0);

    Fixings forbid01;
    forbid01.set(0, 0);  // edge (0,1)
    auto got = oracle.minimize(costs, forbid01);
    REQUIRE(got.has_value());
    CHECK(got->bits[0] == 0);

    std::vector<Vertex> filtered;
    for (const Vertex& t : tours)
      if (t.bits[0] == 0) filtered.push_back(t);
    const auto best = testutil::brute_force_argmin_linear(filtered, costs);
    CHECK(vertex_cost(*got, costs) ==
          doctest::Approx(vertex_cost(filtered[*best], costs)).epsilon(1e-12));

    Fixings force;
    force.set(1, 1);  // edge (0,2)
    got = oracle.minimize(costs, force);
    REQUIRE(got.has_value());
    CHECK(got->bits[1] == 1);
  }
}

TEST_CASE("held-karp rejects oversized graphs") {
  CHECK_THROWS_WITH_AS(TspOracle(Graph::complete(21)),
                       doctest::Contains("oracle size limit"),
                       std::invalid_argument);
}

TEST_CASE("enumeration oracle") {
  std::vector<Vertex> points{Vertex{{0, 0}}, Vertex{{0, 1}}, Vertex{{1, 0}}};
  EnumerationOracle oracle(2, points);

  auto got = oracle.minimize(std::vector<double>{1.0, -1.0}, {});
  REQUIRE(got.has_value());
  CHECK(got->bits == std::vector<std::uint8_t>{0, 1});

  got = oracle.minimize(std::vector<double>{0.0, 0.0}, {});
  CHECK(got->bits == std::vector<std::uint8_t>{0, 0});  // tie: first listed

  Fixings fix0;
  fix0.set(0, 1);
  got = oracle.minimize(std::vector<double>{1.0, -1.0}, fix0);
  REQUIRE(got.has_value());
  CHECK(got->bits == std::vector<std::uint8_t>{1, 0});  // only candidate

  Fixings impossible;
  impossible.set(0, 1);
  impossible.set(1, 1);
  CHECK_FALSE(oracle.minimize(std::vector<double>{1.0, 1.0}, impossible)
                  .has_value());
}

TEST_CASE("internal oracles are exact against enumeration") {
  Rng rng(41);
  for (int nodes = 4; nodes <= 6; ++nodes) {
    const Graph g = Graph::complete(nodes);
    MstOracle mst(g);
    TspOracle tsp(g);
    const auto trees = testutil::enumerate_spanning_trees(g);
    const auto tours = testutil::enumerate_tours(g);
    for (int trial = 0; trial < 34; ++trial) {
      std::vector<double> costs(g.edge_count());
      for (double& c : costs) c = rng.uniform(-2.0, 2.0);

      const auto t1 = mst.minimize(costs, {});
      const auto e1 = testutil::brute_force_argmin_linear(trees, costs);
      REQUIRE(t1.has_value());
      CHECK(vertex_cost(*t1, costs) ==
            doctest::Approx(vertex_cost(trees[*e1], costs)).epsilon(1e-12));

      const auto t2 = tsp.minimize(costs, {});
      const auto e2 = testutil::brute_force_argmin_linear(tours, costs);
      REQUIRE(t2.has_value());
      CHECK(vertex_cost(*t2, costs) ==
            doctest::Approx(vertex_cost(tours[*e2], costs)).epsilon(1e-12));
    }
  }
}

TEST_CASE("oracles are deterministic and respect fixings bit-exactly") {
  const Graph g = Graph::complete(6);
  MstOracle oracle(g);
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> costs(g.edge_count());
    for (double& c : costs) c = rng.uniform(0.0, 1.0);
    Fixings fixings;
    // a couple of random, conflict-free fixings
    const std::size_t i1 = static_cast<std::size_t>(rng.uniform() * 15);
    const std::size_t i2 = (i1 + 7) % 15;
    fixings.set(i1, 1);
    fixings.set(i2, 0);

    const auto a = oracle.minimize(costs, fixings);
    const auto b = oracle.minimize(costs, fixings);
    if (!a.has_value()) {
      CHECK_FALSE(b.has_value());
      continue;
    }
    CHECK(a->bits == b->bits);
    CHECK(fixings.respected_by(*a));
    CHECK(a->bits[i1] == 1);
    CHECK(a->bits[i2] == 0);
  }
}

TEST_CASE("fixings merge and conflict") {
  Fixings a, b;
  a.set(0, 1);
  b.set(1, 0);
  const Fixings merged = a.merged_with(b);
  CHECK(merged.size() == 2);
  CHECK(*merged.get(0) == 1);
  CHECK(*merged.get(1) == 0);

  Fixings conflict;
  conflict.set(0, 0);
  CHECK_THROWS_AS((void)a.merged_with(conflict), OracleError);
  CHECK_THROWS_AS(a.set(0, 0), OracleError);
}

#ifdef ORACLE_STUB_PATH

TEST_CASE("external oracle accepts a valid fixed answer") {
  const Graph g = Graph::complete(3);
  const Instance inst = wrap_instance(ProblemKind::Mst, g);
  ExternalOracle oracle(std::string(ORACLE_STUB_PATH) + " fixed 1,1,0", inst);
  const std::vector<double> costs{1.0, 2.0, 3.0};
  auto got = oracle.minimize(costs, {});
  REQUIRE(got.has_value());
  CHECK(got->bits == std::vector<std::uint8_t>{1, 1, 0});
}

TEST_CASE("external oracle rejects fixing violations and bad output") {
  const Graph g = Graph::complete(3);
  const Instance inst = wrap_instance(ProblemKind::Mst, g);
  const std::vector<double> costs{1.0, 2.0, 3.0};
  {
    ExternalOracle oracle(std::string(ORACLE_STUB_PATH) + " violate", inst);
    Fixings f;
    f.set(0, 1);
    CHECK_THROWS_AS((void)oracle.minimize(costs, f), OracleError);
  }
  {
    ExternalOracle oracle(std::string(ORACLE_STUB_PATH) + " garbage", inst);
    CHECK_THROWS_AS((void)oracle.minimize(costs, {}), OracleError);
  }
  {
    // a structurally valid vector that is not a spanning tree
    ExternalOracle oracle(std::string(ORACLE_STUB_PATH) + " fixed 1,0,0", inst);
    CHECK_THROWS_AS((void)oracle.minimize(costs, {}), OracleError);
  }
}

TEST_CASE("external oracle handles INFEASIBLE and timeouts") {
  const Graph g = Graph::complete(3);
  const Instance inst = wrap_instance(ProblemKind::Mst, g);
  const std::vector<double> costs{1.0, 2.0, 3.0};
  {
    ExternalOracle oracle(std::string(ORACLE_STUB_PATH) + " infeasible", inst);
    CHECK_FALSE(oracle.minimize(costs, {}).has_value());
  }
  {
    ExternalOracle oracle(std::string(ORACLE_STUB_PATH) + " timeout", inst,
                          0.3);
    CHECK_THROWS_WITH_AS((void)oracle.minimize(costs, {}),
                         doctest::Contains("timed out"), OracleError);
  }
}

TEST_CASE("external kruskal stub matches the internal oracle") {
  const Graph g = Graph::complete(3);
  const Instance inst = wrap_instance(ProblemKind::Mst, g);
  ExternalOracle external(std::string(ORACLE_STUB_PATH) + " kruskal3", inst);
  MstOracle internal(g);
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> costs(3);
    for (double& c : costs) c = rng.uniform(0.0, 5.0);
    const auto a = external.minimize(costs, {});
    const auto b = internal.minimize(costs, {});
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->bits == b->bits);
  }
}

#endif  // ORACLE_STUB_PATH
