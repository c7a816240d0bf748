#pragma once

#include <span>

#include "rsd/model.hpp"

// Scenario-sweep kernels. Each kernel exists twice: a serial reference
// (suffix _serial) and an OpenMP front that parallelizes across independent
// outputs only, so both variants produce bitwise-identical results for any
// thread count. The serial versions stay around for the unit tests and for
// the kernel_bench comparison target.
namespace rsd::kernels {

/// Number of threads the OpenMP fronts may use (1 when built without OpenMP).
int max_threads();

/// Work threshold (scenario count * dimension) below which the OpenMP fronts
/// fall back to the serial path.
inline constexpr std::size_t parallel_grain = 1u << 14;

/// max_j costs_j . x + offset_j with smallest-index tie break.
FValue max_affine(const ScenarioSet& u, std::span<const double> x);
FValue max_affine_serial(const ScenarioSet& u, std::span<const double> x);

/// Same sweep for a binary point (index sum instead of a dense dot product).
FValue max_affine_bits(const ScenarioSet& u, const Vertex& v);
FValue max_affine_bits_serial(const ScenarioSet& u, const Vertex& v);

/// out[j] = costs_j . v + offset_j for every scenario j (a cost-cache column).
void vertex_scenario_values(const ScenarioSet& u, const Vertex& v,
                            std::span<double> out);
void vertex_scenario_values_serial(const ScenarioSet& u, const Vertex& v,
                                   std::span<double> out);

/// out[i] = sum_j weights[j] * costs_j[i]; the inner sum runs over j in fixed
/// order so the parallel (over i) and serial results coincide bitwise.
void weighted_scenario_sum(const ScenarioSet& u,
                           std::span<const double> weights,
                           std::span<double> out);
void weighted_scenario_sum_serial(const ScenarioSet& u,
                                  std::span<const double> weights,
                                  std::span<double> out);

}  // namespace rsd::kernels
