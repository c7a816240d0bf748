#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rsd/kernels.hpp"
#include "rsd/rng.hpp"

using namespace rsd;

namespace {

// Big enough that the OpenMP fronts take the parallel path.
ScenarioSet big_random_set(std::size_t m, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Scenario> sc(m);
  for (Scenario& s : sc) {
    s.offset = rng.uniform(-1.0, 1.0);
    s.costs.resize(n);
    for (double& c : s.costs) c = rng.uniform(-3.0, 3.0);
  }
  return ScenarioSet(std::move(sc));
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference bitwise") {
  const std::size_t m = 257, n = 131;  // m*n above the parallel grain
  REQUIRE(m * n >= kernels::parallel_grain);
  const ScenarioSet u = big_random_set(m, n, 11);
  Rng rng(12);

  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform(-1.0, 2.0);
  Vertex vert;
  vert.bits.resize(n);
  for (auto& b : vert.bits) b = rng.uniform() < 0.4 ? 1 : 0;
  std::vector<double> w(m);
  for (double& v : w) v = rng.uniform();

  const FValue a = kernels::max_affine_serial(u, x);
  const FValue b = kernels::max_affine(u, x);
  CHECK(a.value == b.value);
  CHECK(a.argmax == b.argmax);

  const FValue c = kernels::max_affine_bits_serial(u, vert);
  const FValue d = kernels::max_affine_bits(u, vert);
  CHECK(c.value == d.value);
  CHECK(c.argmax == d.argmax);

  std::vector<double> col_s(m), col_p(m);
  kernels::vertex_scenario_values_serial(u, vert, col_s);
  kernels::vertex_scenario_values(u, vert, col_p);
  CHECK(col_s == col_p);

  std::vector<double> sum_s(n), sum_p(n);
  kernels::weighted_scenario_sum_serial(u, w, sum_s);
  kernels::weighted_scenario_sum(u, w, sum_p);
  CHECK(sum_s == sum_p);
}

TEST_CASE("max_affine ties resolve to the smallest scenario index") {
  // Duplicate the maximizing scenario; argmax must report the first copy.
  std::vector<Scenario> sc;
  sc.push_back({0.0, {1.0, 0.0}});
  sc.push_back({0.0, {2.0, 0.0}});
  sc.push_back({0.0, {2.0, 0.0}});
  const ScenarioSet u(std::move(sc));
  const std::vector<double> x{1.0, 5.0};
  CHECK(kernels::max_affine_serial(u, x).argmax == 1);
  CHECK(kernels::max_affine(u, x).argmax == 1);
}

TEST_CASE("weighted_scenario_sum computes the convex combination of rows") {
  const ScenarioSet u(
      {Scenario{0.0, {1.0, -1.0}}, Scenario{0.0, {-1.0, 1.0}}});
  std::vector<double> lambda{0.25, 0.75};
  std::vector<double> out(2);
  kernels::weighted_scenario_sum(u, lambda, out);
  CHECK(out[0] == doctest::Approx(-0.5));
  CHECK(out[1] == doctest::Approx(0.5));
}

TEST_CASE("bit kernels agree with the dense versions") {
  const std::size_t m = 64, n = 40;
  const ScenarioSet u = big_random_set(m, n, 21);
  Rng rng(22);
  Vertex vert;
  vert.bits.resize(n);
  for (auto& b : vert.bits) b = rng.uniform() < 0.5 ? 1 : 0;
  std::vector<double> dense(n);
  for (std::size_t i = 0; i < n; ++i) dense[i] = vert.bits[i];

  const FValue via_bits = kernels::max_affine_bits(u, vert);
  const FValue via_dense = kernels::max_affine(u, dense);
  CHECK(via_bits.value == doctest::Approx(via_dense.value).epsilon(1e-12));
  CHECK(via_bits.argmax == via_dense.argmax);
}
