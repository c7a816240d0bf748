#include "rsd/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rsd::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double bit_sum(std::span<const double> costs, const Vertex& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i)
    if (v.bits[i]) s += costs[i];
  return s;
}

// (value, index) combine: larger value wins, ties go to the smaller index.
// Comparisons are exact, so the combine is associative and any partition of
// the scenario range yields the same result as the serial scan.
inline void combine_best(double val, std::size_t idx, double& best_val,
                         std::size_t& best_idx) {
  if (val > best_val || (val == best_val && idx < best_idx)) {
    best_val = val;
    best_idx = idx;
  }
}

}  // namespace

FValue max_affine_serial(const ScenarioSet& u, std::span<const double> x) {
  double best = -1.0 / 0.0;
  std::size_t arg = 0;
  for (std::size_t j = 0; j < u.size(); ++j)
    combine_best(u[j].offset + dot(u[j].costs, x), j, best, arg);
  return {best, arg};
}

FValue max_affine(const ScenarioSet& u, std::span<const double> x) {
  const std::size_t m = u.size();
  if (m * u.dimension() < parallel_grain || max_threads() == 1)
    return max_affine_serial(u, x);
  double best = -1.0 / 0.0;
  std::size_t arg = 0;
#pragma omp parallel
  {
    double local_best = -1.0 / 0.0;
    std::size_t local_arg = 0;
#pragma omp for schedule(static) nowait
    for (long j = 0; j < static_cast<long>(m); ++j) {
      const auto idx = static_cast<std::size_t>(j);
      combine_best(u[idx].offset + dot(u[idx].costs, x), idx, local_best,
                   local_arg);
    }
#pragma omp critical
    combine_best(local_best, local_arg, best, arg);
  }
  return {best, arg};
}

FValue max_affine_bits_serial(const ScenarioSet& u, const Vertex& v) {
  double best = -1.0 / 0.0;
  std::size_t arg = 0;
  for (std::size_t j = 0; j < u.size(); ++j)
    combine_best(u[j].offset + bit_sum(u[j].costs, v), j, best, arg);
  return {best, arg};
}

FValue max_affine_bits(const ScenarioSet& u, const Vertex& v) {
  const std::size_t m = u.size();
  if (m * u.dimension() < parallel_grain || max_threads() == 1)
    return max_affine_bits_serial(u, v);
  double best = -1.0 / 0.0;
  std::size_t arg = 0;
#pragma omp parallel
  {
    double local_best = -1.0 / 0.0;
    std::size_t local_arg = 0;
#pragma omp for schedule(static) nowait
    for (long j = 0; j < static_cast<long>(m); ++j) {
      const auto idx = static_cast<std::size_t>(j);
      combine_best(u[idx].offset + bit_sum(u[idx].costs, v), idx, local_best,
                   local_arg);
    }
#pragma omp critical
    combine_best(local_best, local_arg, best, arg);
  }
  return {best, arg};
}

void vertex_scenario_values_serial(const ScenarioSet& u, const Vertex& v,
                                   std::span<double> out) {
  for (std::size_t j = 0; j < u.size(); ++j)
    out[j] = u[j].offset + bit_sum(u[j].costs, v);
}

void vertex_scenario_values(const ScenarioSet& u, const Vertex& v,
                            std::span<double> out) {
  const std::size_t m = u.size();
  if (m * u.dimension() < parallel_grain || max_threads() == 1) {
    vertex_scenario_values_serial(u, v, out);
    return;
  }
#pragma omp parallel for schedule(static)
  for (long j = 0; j < static_cast<long>(m); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    out[idx] = u[idx].offset + bit_sum(u[idx].costs, v);
  }
}

void weighted_scenario_sum_serial(const ScenarioSet& u,
                                  std::span<const double> weights,
                                  std::span<double> out) {
  const std::size_t n = u.dimension();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += weights[j] * u[j].costs[i];
    out[i] = s;
  }
}

void weighted_scenario_sum(const ScenarioSet& u,
                           std::span<const double> weights,
                           std::span<double> out) {
  const std::size_t n = u.dimension();
  if (u.size() * n < parallel_grain || max_threads() == 1) {
    weighted_scenario_sum_serial(u, weights, out);
    return;
  }
  // Parallel over coordinates; each out[i] sums over scenarios in the fixed
  // serial order, so the result matches the serial kernel bitwise.
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
      s += weights[j] * u[j].costs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = s;
  }
}

}  // namespace rsd::kernels
