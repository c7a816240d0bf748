#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "rsd/master.hpp"
#include "rsd/rng.hpp"

using namespace rsd;

namespace {

ScenarioSet two_piece_set() {
  return ScenarioSet({Scenario{0.0, {1.0, -1.0}}, Scenario{0.0, {-1.0, 1.0}}});
}

std::vector<Vertex> random_distinct_vertices(std::size_t count, std::size_t n,
                                             Rng& rng) {
  std::set<std::vector<std::uint8_t>> seen;
  std::vector<Vertex> out;
  while (out.size() < count) {
    Vertex v;
    v.bits.resize(n);
    for (auto& b : v.bits) b = rng.uniform() < 0.5 ? 1 : 0;
    if (seen.insert(v.bits).second) out.push_back(std::move(v));
  }
  return out;
}

ScenarioSet random_scenarios(std::size_t m, std::size_t n, Rng& rng) {
  std::vector<Scenario> sc(m);
  for (Scenario& s : sc) {
    s.offset = rng.uniform(-1.0, 1.0);
    s.costs.resize(n);
    for (double& c : s.costs) c = rng.uniform(-2.0, 2.0);
  }
  return ScenarioSet(std::move(sc));
}

void check_certificates(const ActiveSet& active, const ScenarioSet& u,
                        const MasterSolution& ms, Rng& rng) {
  const std::size_t n = u.dimension();
  double alpha_sum = 0.0;
  for (double a : ms.alpha) {
    CHECK(a >= -1e-10);
    alpha_sum += a;
  }
  CHECK(alpha_sum == doctest::Approx(1.0).epsilon(1e-8));

  double lambda_sum = 0.0;
  for (double l : ms.lambda) {
    CHECK(l >= -1e-10);
    lambda_sum += l;
  }
  CHECK(lambda_sum == doctest::Approx(1.0).epsilon(1e-8));

  const double fx = evaluate_f(ms.x, u).value;
  CHECK(std::abs(ms.z - fx) <= 1e-7 * (1.0 + std::abs(fx)));

  // complementary slackness: active scenarios carry the dual weight
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (ms.lambda[j] <= 1e-7) continue;
    double piece = u[j].offset;
    for (std::size_t i = 0; i < n; ++i) piece += u[j].costs[i] * ms.x[i];
    CHECK(piece >= ms.z - 1e-6);
  }

  // normal cone: the subgradient certifies minimality over conv(V)
  for (std::size_t i = 0; i < active.size(); ++i) {
    double d = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      d += ms.subgradient[k] *
           ((active.vertex(i).bits[k] ? 1.0 : 0.0) - ms.x[k]);
    CHECK(d >= -1e-6);
  }

  // subgradient inequality at random points
  for (int t = 0; t < 100; ++t) {
    std::vector<double> y(n);
    for (double& v : y) v = rng.uniform();
    double lin = ms.z;
    for (std::size_t k = 0; k < n; ++k)
      lin += ms.subgradient[k] * (y[k] - ms.x[k]);
    CHECK(evaluate_f(y, u).value >= lin - 1e-6);
  }

  // minimality over the simplex at random convex combinations
  for (int t = 0; t < 100; ++t) {
    std::vector<double> w(active.size());
    double sum = 0.0;
    for (double& v : w) sum += (v = rng.uniform());
    std::vector<double> point(n, 0.0);
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (active.vertex(i).bits[k]) point[k] += w[i] / sum;
    CHECK(evaluate_f(point, u).value >= ms.z - 1e-6);
  }
}

}  // namespace

TEST_CASE("master on the two-piece example") {
  const ScenarioSet u = two_piece_set();
  const ActiveSet active(u, {Vertex{{0, 0}}, Vertex{{0, 1}}});
  const MasterSolution ms = solve_master(active, u);
  CHECK(ms.z == doctest::Approx(0.0));
  CHECK(ms.alpha[0] == doctest::Approx(1.0));
  CHECK(ms.alpha[1] == doctest::Approx(0.0));
  CHECK(ms.x[0] == doctest::Approx(0.0));
  CHECK(ms.x[1] == doctest::Approx(0.0));
  // any optimal dual has lambda_2 in [1/2, 1]
  CHECK(ms.lambda[1] >= 0.5 - 1e-8);
  CHECK(ms.lambda[1] <= 1.0 + 1e-8);

  MasterOptions prefer;
  prefer.prefer_dual_scenario = 1;
  const MasterSolution chosen = solve_master(active, u, prefer);
  CHECK(chosen.lambda[0] == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(chosen.lambda[1] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(chosen.subgradient[0] == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(chosen.subgradient[1] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("singleton vertex set") {
  Rng rng(5);
  const ScenarioSet u = random_scenarios(4, 6, rng);
  const auto vs = random_distinct_vertices(1, 6, rng);
  const ActiveSet active(u, vs);
  const MasterSolution ms = solve_master(active, u);
  CHECK(ms.alpha.size() == 1);
  CHECK(ms.alpha[0] == doctest::Approx(1.0));
  CHECK(ms.z == doctest::Approx(evaluate_f(vs[0], u).value));
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(ms.x[k] == doctest::Approx(vs[0].bits[k] ? 1.0 : 0.0));
}

TEST_CASE("hand-solved 2x2 master") {
  // cache [[3,1],[0,2]]: min over the segment of max(1+2a, 2-2a) at a=1/4.
  const ScenarioSet u(
      {Scenario{0.0, {3.0, 1.0}}, Scenario{0.0, {0.0, 2.0}}});
  const ActiveSet active(u, {Vertex{{1, 0}}, Vertex{{0, 1}}});
  CHECK(active.column(0)[0] == doctest::Approx(3.0));
  CHECK(active.column(0)[1] == doctest::Approx(0.0));
  CHECK(active.column(1)[0] == doctest::Approx(1.0));
  CHECK(active.column(1)[1] == doctest::Approx(2.0));

  const MasterSolution ms = solve_master(active, u);
  CHECK(ms.z == doctest::Approx(1.5));
  CHECK(ms.alpha[0] == doctest::Approx(0.25));
  CHECK(ms.alpha[1] == doctest::Approx(0.75));
  CHECK(ms.lambda[0] == doctest::Approx(0.5));
  CHECK(ms.lambda[1] == doctest::Approx(0.5));
}

TEST_CASE("cost cache stays consistent under add and filter") {
  Rng rng(6);
  const ScenarioSet u = random_scenarios(7, 10, rng);
  auto vs = random_distinct_vertices(6, 10, rng);
  ActiveSet active(u, vs);
  CHECK(active.size() == 6);
  CHECK_FALSE(active.contains(Vertex{std::vector<std::uint8_t>(10, 1)}));

  // adding an existing vertex is a no-op
  CHECK(active.add(vs[2]) == 2);
  CHECK(active.size() == 6);

  std::vector<char> keep{1, 0, 1, 0, 1, 0};
  active.filter(keep);
  REQUIRE(active.size() == 3);
  CHECK(active.vertex(1) == vs[2]);

  for (std::size_t i = 0; i < active.size(); ++i) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      double expect = u[j].offset;
      for (std::size_t k = 0; k < 10; ++k)
        if (active.vertex(i).bits[k]) expect += u[j].costs[k];
      CHECK(std::abs(active.column(i)[j] - expect) <= 1e-12);
    }
  }

  // fingerprints are order independent
  ActiveSet reordered(u, {active.vertex(2), active.vertex(0), active.vertex(1)});
  CHECK(reordered.set_fingerprint() == active.set_fingerprint());
}

TEST_CASE("certificates hold on random vertex sets") {
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(rng.uniform() * 5);
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 8);
    const std::size_t nv =
        1 + static_cast<std::size_t>(rng.uniform() * std::min<std::size_t>(
                                         8, (std::size_t(1) << n) - 1));
    const ScenarioSet u = random_scenarios(m, n, rng);
    const ActiveSet active(u, random_distinct_vertices(nv, n, rng));
    const MasterSolution ms = solve_master(active, u);
    check_certificates(active, u, ms, rng);
  }
}

TEST_CASE("perturbed scenarios make the subgradient unique") {
  Rng rng(43);
  int agree = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t n = 6, m = 4, nv = 5;
    ScenarioSet u = random_scenarios(m, n, rng);
    ScenarioSet perturbed = u.perturbed(1e-4, rng);
    const ActiveSet active(perturbed, random_distinct_vertices(nv, n, rng));

    MasterOptions fwd, rev;
    rev.pivot_order = lp::PivotOrder::Reverse;
    const MasterSolution a = solve_master(active, perturbed, fwd);
    const MasterSolution b = solve_master(active, perturbed, rev);
    double diff = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      diff = std::max(diff, std::abs(a.subgradient[k] - b.subgradient[k]));
    if (diff <= 1e-5) ++agree;
  }
  CHECK(agree >= 95);
}
