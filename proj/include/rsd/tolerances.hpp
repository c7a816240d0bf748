#pragma once

// Central numeric tolerances. Every module reads from here so there is a
// single tuning surface.
namespace rsd::tol {

inline constexpr double feasibility = 1e-9;   // LP primal/dual feasibility
inline constexpr double optimality = 1e-7;    // duality gap, slackness
inline constexpr double reporting = 1e-6;     // invariants surfaced to callers
inline constexpr double alpha_zero = 1e-10;   // convex weight treated as zero
inline constexpr double integrality = 1e-6;   // coordinate counts as 0/1
inline constexpr double cycle_decrease = 1e-9; // strict objective decrease

}  // namespace rsd::tol
