#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rsd::lp {

enum class Status { Optimal, Infeasible, Unbounded, Stalled };

std::string to_string(Status s);

/// Dense linear program in computational standard form:
///
///   min c.x   s.t.   A x {<=,=,>=} b   (per-row sense),   x >= 0.
///
/// Row senses are 'L', 'E', 'G'.
struct Problem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;     // row-major, rows x cols
  std::vector<double> b;     // rhs, length rows
  std::vector<double> c;     // objective, length cols
  std::vector<char> sense;   // length rows

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// Column scan order used for entering-variable selection; exposed so callers
/// can probe solution uniqueness by re-solving with a different tie-breaking
/// order.
enum class PivotOrder { Forward, Reverse };

struct Options {
  PivotOrder pivot_order = PivotOrder::Forward;
  /// Engage Bland's rule from the first pivot instead of waiting for the
  /// degenerate-pivot trigger.
  bool blands_from_start = false;
  /// Hard pivot cap; 0 means 50*(rows+cols) + 10000.
  long max_pivots = 0;
  /// Re-solve the final basis against the original data (LU) when the basis
  /// is at most this large; tableau drift is negligible below it anyway, but
  /// the refit makes the certificates sharp. 0 disables.
  std::size_t refine_max_rows = 512;
};

/// Solution with duals. Dual sign convention for the min problem:
/// y_i >= 0 for 'G' rows, y_i <= 0 for 'L' rows, free for 'E' rows, and
/// strong duality c.x* = b.y* at optimality.
struct Solution {
  Status status = Status::Stalled;
  double objective = 0.0;
  std::vector<double> x;  // length cols
  std::vector<double> y;  // length rows
  long pivots = 0;
  bool blands_engaged = false;
};

/// Two-phase dense primal simplex. Dantzig pricing with smallest-index tie
/// breaks; switches to Bland's rule permanently once 2*(rows+cols)
/// consecutive degenerate pivots accumulate, which restores the
/// anti-cycling guarantee while keeping typical runs fast.
Solution solve(const Problem& p, const Options& opts = {});

}  // namespace rsd::lp
