// Benchmark of the scenario-sweep kernels: serial reference vs the OpenMP
// fronts, on synthetic data sized like the large benchmark instances. Also
// reports the max absolute deviation between the two paths, which must be 0.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "rsd/kernels.hpp"
#include "rsd/rng.hpp"

using namespace rsd;

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t m = 2000, n = 2000;
  int reps = 20;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    const double v = std::stod(argv[i + 1]);
    if (flag == "--scenarios")
      m = static_cast<std::size_t>(v);
    else if (flag == "--dim")
      n = static_cast<std::size_t>(v);
    else if (flag == "--reps")
      reps = static_cast<int>(v);
    else {
      std::fprintf(stderr, "usage: kernel_bench [--scenarios M] [--dim N] [--reps R]\n");
      return 2;
    }
  }

  Rng rng(1234);
  std::vector<Scenario> scenarios(m);
  for (Scenario& s : scenarios) {
    s.offset = rng.uniform(-1.0, 1.0);
    s.costs.resize(n);
    for (double& c : s.costs) c = rng.uniform(-2.0, 2.0);
  }
  ScenarioSet u(std::move(scenarios));

  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform();
  Vertex vert;
  vert.bits.resize(n);
  for (auto& b : vert.bits) b = rng.uniform() < 0.5 ? 0 : 1;
  std::vector<double> weights(m);
  double wsum = 0.0;
  for (double& w : weights) wsum += (w = rng.uniform());
  for (double& w : weights) w /= wsum;

  std::printf("scenario-sweep kernels: m=%zu n=%zu reps=%d threads=%d\n", m, n,
              reps, kernels::max_threads());
  std::printf("%-24s %12s %12s %9s %10s\n", "kernel", "serial ms", "openmp ms",
              "speedup", "max |diff|");

  {
    FValue a{}, b{};
    const double ts = time_ms([&] { a = kernels::max_affine_serial(u, x); }, reps);
    const double tp = time_ms([&] { b = kernels::max_affine(u, x); }, reps);
    const double diff =
        std::abs(a.value - b.value) + (a.argmax == b.argmax ? 0.0 : 1.0);
    std::printf("%-24s %12.3f %12.3f %8.2fx %10.3g\n", "max_affine", ts, tp,
                ts / tp, diff);
  }
  {
    FValue a{}, b{};
    const double ts =
        time_ms([&] { a = kernels::max_affine_bits_serial(u, vert); }, reps);
    const double tp = time_ms([&] { b = kernels::max_affine_bits(u, vert); }, reps);
    const double diff =
        std::abs(a.value - b.value) + (a.argmax == b.argmax ? 0.0 : 1.0);
    std::printf("%-24s %12.3f %12.3f %8.2fx %10.3g\n", "max_affine_bits", ts,
                tp, ts / tp, diff);
  }
  {
    std::vector<double> outs(m), outp(m);
    const double ts = time_ms(
        [&] { kernels::vertex_scenario_values_serial(u, vert, outs); }, reps);
    const double tp =
        time_ms([&] { kernels::vertex_scenario_values(u, vert, outp); }, reps);
    double diff = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      diff = std::max(diff, std::abs(outs[j] - outp[j]));
    std::printf("%-24s %12.3f %12.3f %8.2fx %10.3g\n", "vertex_scenario_values",
                ts, tp, ts / tp, diff);
  }
  {
    std::vector<double> outs(n), outp(n);
    const double ts = time_ms(
        [&] { kernels::weighted_scenario_sum_serial(u, weights, outs); }, reps);
    const double tp =
        time_ms([&] { kernels::weighted_scenario_sum(u, weights, outp); }, reps);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      diff = std::max(diff, std::abs(outs[i] - outp[i]));
    std::printf("%-24s %12.3f %12.3f %8.2fx %10.3g\n", "weighted_scenario_sum",
                ts, tp, ts / tp, diff);
  }
  return 0;
}
