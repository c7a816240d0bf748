#include "rsd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsd/tolerances.hpp"

namespace rsd::lp {

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::Stalled: return "stalled";
  }
  return "stalled";
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kStepEps = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Structural, Slack, Surplus, Artificial };

// Dense two-phase tableau. Rows are normalized to b >= 0 up front; every row
// then starts with a basic slack ('L') or a basic artificial ('G'/'E'), so
// the initial basis is the identity and the final tableau carries B^-1 in
// those unit columns, which is where the duals are read from.
class Tableau {
public:
  Tableau(const Problem& p, const Options& opts) : p_(p), opts_(opts) {
    rows_ = p.rows;
    norm_sign_.assign(rows_, 1.0);
    sense_.resize(rows_);
    rhs_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      sense_[i] = p.sense[i];
      rhs_[i] = p.b[i];
      if (rhs_[i] < 0) {
        norm_sign_[i] = -1.0;
        rhs_[i] = -rhs_[i];
        if (sense_[i] == 'L')
          sense_[i] = 'G';
        else if (sense_[i] == 'G')
          sense_[i] = 'L';
      }
      if (sense_[i] != 'L' && sense_[i] != 'E' && sense_[i] != 'G')
        throw std::invalid_argument("lp: row sense must be L, E or G");
    }

    // Column layout: structural | slack/surplus | artificial.
    kind_.assign(p.cols, VarKind::Structural);
    col_row_.assign(p.cols, 0);
    slack_col_.assign(rows_, std::size_t(-1));
    unit_col_.assign(rows_, std::size_t(-1));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (sense_[i] == 'L' || sense_[i] == 'G') {
        slack_col_[i] = kind_.size();
        kind_.push_back(sense_[i] == 'L' ? VarKind::Slack : VarKind::Surplus);
        col_row_.push_back(i);
      }
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (sense_[i] == 'G' || sense_[i] == 'E') {
        unit_col_[i] = kind_.size();
        kind_.push_back(VarKind::Artificial);
        col_row_.push_back(i);
      } else {
        unit_col_[i] = slack_col_[i];  // 'L': the slack is the unit column
      }
    }
    cols_ = kind_.size();

    t_.assign(rows_ * cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < p.cols; ++j)
        at(i, j) = norm_sign_[i] * p.at(i, j);
      if (slack_col_[i] != std::size_t(-1))
        at(i, slack_col_[i]) = sense_[i] == 'L' ? 1.0 : -1.0;
      if (kind_[unit_col_[i]] == VarKind::Artificial) at(i, unit_col_[i]) = 1.0;
    }

    basis_.resize(rows_);
    in_basis_.assign(cols_, false);
    for (std::size_t i = 0; i < rows_; ++i) {
      basis_[i] = sense_[i] == 'L' ? slack_col_[i] : unit_col_[i];
      in_basis_[basis_[i]] = true;
    }

    // Phase-2 reduced costs start as the original objective; phase-1 costs
    // are 1 on artificials, priced out against the artificial start basis.
    d2_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < p.cols; ++j) d2_[j] = p.c[j];
    d1_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j)
      if (kind_[j] == VarKind::Artificial) d1_[j] = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (kind_[basis_[i]] != VarKind::Artificial) continue;
      for (std::size_t j = 0; j < cols_; ++j) d1_[j] -= at(i, j);
      obj1_ -= rhs_[i];
    }

    max_pivots_ = opts_.max_pivots > 0
                      ? opts_.max_pivots
                      : 50 * static_cast<long>(rows_ + cols_) + 10000;
    blands_ = opts_.blands_from_start;
    bland_trigger_ = 2 * static_cast<long>(rows_ + cols_);
  }

  Solution run() {
    Solution sol;
    // Phase 1: minimize the artificial sum (tracked in obj1_, negated).
    if (!iterate(/*phase=*/1)) return extract(Status::Stalled, sol);
    if (-obj1_ > tol::optimality * (1.0 + norm_b())) {
      sol.status = Status::Infeasible;
      sol.pivots = pivots_;
      return sol;
    }
    expel_artificials();
    if (!iterate(/*phase=*/2)) {
      return extract(unbounded_ ? Status::Unbounded : Status::Stalled, sol);
    }
    return extract(Status::Optimal, sol);
  }

private:
  double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * cols_ + j]; }

  double norm_b() const {
    double m = 0.0;
    for (double v : rhs_) m = std::max(m, std::abs(v));
    return m;
  }

  bool eligible(std::size_t j, int phase) const {
    if (in_basis_[j]) return false;
    if (phase == 2 && kind_[j] == VarKind::Artificial) return false;
    return true;
  }

  // Entering column: Bland's rule picks the first eligible improving column
  // in scan order; Dantzig picks the most negative reduced cost with the
  // scan order breaking ties.
  std::size_t choose_entering(const std::vector<double>& d, int phase) const {
    const bool reverse = opts_.pivot_order == PivotOrder::Reverse;
    std::size_t best = std::size_t(-1);
    double best_val = -tol::feasibility;
    for (std::size_t s = 0; s < cols_; ++s) {
      const std::size_t j = reverse ? cols_ - 1 - s : s;
      if (!eligible(j, phase)) continue;
      if (d[j] >= -tol::feasibility) continue;
      if (blands_) return j;
      if (d[j] < best_val) {
        best_val = d[j];
        best = j;
      }
    }
    return best;
  }

  // Ratio test. Ties normally prefer kicking artificials out of the basis,
  // then the smallest basic index; under Bland's rule the tie break is the
  // smallest basic index alone, which is what the anti-cycling proof needs.
  std::size_t choose_leaving(std::size_t enter) const {
    std::size_t leave = std::size_t(-1);
    double best_ratio = kInf;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double coef = at(i, enter);
      if (coef <= kPivotEps) continue;
      const double ratio = rhs_[i] / coef;
      if (ratio < best_ratio - kStepEps) {
        best_ratio = ratio;
        leave = i;
      } else if (ratio < best_ratio + kStepEps && leave != std::size_t(-1)) {
        if (blands_) {
          if (basis_[i] < basis_[leave]) leave = i;
          continue;
        }
        const bool cand_art = kind_[basis_[i]] == VarKind::Artificial;
        const bool cur_art = kind_[basis_[leave]] == VarKind::Artificial;
        if (cand_art != cur_art) {
          if (cand_art) leave = i;
        } else if (basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
    }
    return leave;
  }

  void pivot(std::size_t leave, std::size_t enter) {
    const double piv = at(leave, enter);
    const double inv = 1.0 / piv;
    for (std::size_t j = 0; j < cols_; ++j) at(leave, j) *= inv;
    rhs_[leave] *= inv;
    at(leave, enter) = 1.0;  // exact

    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) at(i, j) -= f * at(leave, j);
      at(i, enter) = 0.0;
      rhs_[i] -= f * rhs_[leave];
      if (rhs_[i] < 0 && rhs_[i] > -1e-13) rhs_[i] = 0.0;
    }
    auto update_costs = [&](std::vector<double>& d, double& obj) {
      const double f = d[enter];
      if (f == 0.0) return;
      for (std::size_t j = 0; j < cols_; ++j) d[j] -= f * at(leave, j);
      d[enter] = 0.0;
      obj -= f * rhs_[leave];
    };
    update_costs(d1_, obj1_);
    update_costs(d2_, obj2_);

    in_basis_[basis_[leave]] = false;
    basis_[leave] = enter;
    in_basis_[enter] = true;
    ++pivots_;
  }

  bool iterate(int phase) {
    const std::vector<double>& d = phase == 1 ? d1_ : d2_;
    while (true) {
      if (pivots_ >= max_pivots_) return false;
      const std::size_t enter = choose_entering(d, phase);
      if (enter == std::size_t(-1)) return true;  // optimal for this phase
      const std::size_t leave = choose_leaving(enter);
      if (leave == std::size_t(-1)) {
        if (phase == 1) return true;  // cannot happen: phase 1 bounded
        unbounded_ = true;
        return false;
      }
      const double step = rhs_[leave] / at(leave, enter);
      if (step <= kStepEps) {
        if (!blands_ && ++degenerate_streak_ >= bland_trigger_) blands_ = true;
      } else {
        degenerate_streak_ = 0;
      }
      pivot(leave, enter);
    }
  }

  // After phase 1, pivot basic artificials out wherever a usable column
  // exists; rows where none exists are redundant and keep their artificial
  // basic at value zero.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (kind_[basis_[i]] != VarKind::Artificial) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (kind_[j] == VarKind::Artificial || in_basis_[j]) continue;
        if (std::abs(at(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Solution extract(Status status, Solution& sol) const {
    sol.status = status;
    sol.pivots = pivots_;
    sol.blands_engaged = blands_;
    sol.x.assign(p_.cols, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] < p_.cols) sol.x[basis_[i]] = std::max(0.0, rhs_[i]);

    // Duals from B^-1 sitting in the per-row unit columns: the artificial
    // column for 'G'/'E' rows, the slack for 'L'. y = cB^T B^-1, then
    // undo the b>=0 row normalization.
    sol.y.assign(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double yi = 0.0;
      for (std::size_t k = 0; k < rows_; ++k) {
        const std::size_t bk = basis_[k];
        if (bk < p_.cols && p_.c[bk] != 0.0) yi += p_.c[bk] * at(k, unit_col_[i]);
      }
      sol.y[i] = norm_sign_[i] * yi;
    }

    if (status == Status::Optimal && rows_ > 0 &&
        rows_ <= opts_.refine_max_rows)
      refine(sol);

    sol.objective = 0.0;
    for (std::size_t j = 0; j < p_.cols; ++j)
      sol.objective += p_.c[j] * sol.x[j];
    return sol;
  }

  // Re-solve B xB = b and B^T y = cB against the original (normalized)
  // column data by LU with partial pivoting, wiping out accumulated tableau
  // drift. Falls back silently if the basis matrix is numerically singular.
  void refine(Solution& sol) const {
    const std::size_t n = rows_;
    std::vector<double> lu(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = basis_[k];
      for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        if (j < p_.cols)
          v = norm_sign_[i] * p_.at(i, j);
        else if (kind_[j] != VarKind::Artificial)
          v = (col_row_[j] == i) ? (sense_[i] == 'L' ? 1.0 : -1.0) : 0.0;
        else
          v = (col_row_[j] == i) ? 1.0 : 0.0;
        lu[i * n + k] = v;
      }
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu[i * n + k]) > std::abs(lu[piv * n + k])) piv = i;
      if (std::abs(lu[piv * n + k]) < 1e-12) return;  // singular: keep tableau
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j)
          std::swap(lu[k * n + j], lu[piv * n + j]);
        std::swap(perm[k], perm[piv]);
      }
      const double inv = 1.0 / lu[k * n + k];
      for (std::size_t i = k + 1; i < n; ++i) {
        const double f = lu[i * n + k] * inv;
        lu[i * n + k] = f;
        for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= f * lu[k * n + j];
      }
    }
    auto solve_fwd = [&](std::vector<double>& v) {  // solve B z = v in place
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = v[perm[i]];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) w[i] -= lu[i * n + j] * w[j];
      for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) w[i] -= lu[i * n + j] * w[j];
        w[i] /= lu[i * n + i];
      }
      v = std::move(w);
    };
    auto solve_transposed = [&](std::vector<double>& v) {  // B^T z = v
      // Solve U^T L^T P z = v: forward with U^T, back with L^T, un-permute.
      std::vector<double> w = v;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) w[i] -= lu[j * n + i] * w[j];
        w[i] /= lu[i * n + i];
      }
      for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = i + 1; j < n; ++j) w[i] -= lu[j * n + i] * w[j];
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[perm[i]] = w[i];
      v = std::move(z);
    };

    // Right-hand side in normalized space is |b| (rows were flipped to b>=0).
    std::vector<double> xb(n);
    for (std::size_t i = 0; i < n; ++i) xb[i] = std::abs(p_.b[i]);
    solve_fwd(xb);

    std::vector<double> cb(n);
    for (std::size_t k = 0; k < n; ++k)
      cb[k] = basis_[k] < p_.cols ? p_.c[basis_[k]] : 0.0;
    solve_transposed(cb);

    sol.x.assign(p_.cols, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      if (basis_[k] < p_.cols) sol.x[basis_[k]] = xb[k];
    for (std::size_t i = 0; i < n; ++i) sol.y[i] = norm_sign_[i] * cb[i];
  }

  const Problem& p_;
  Options opts_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> t_, rhs_, d1_, d2_;
  std::vector<double> norm_sign_;
  std::vector<char> sense_;
  std::vector<VarKind> kind_;
  std::vector<std::size_t> col_row_, slack_col_, unit_col_, basis_;
  std::vector<char> in_basis_;
  double obj1_ = 0.0, obj2_ = 0.0;
  long pivots_ = 0, max_pivots_ = 0, degenerate_streak_ = 0,
       bland_trigger_ = 0;
  bool blands_ = false, unbounded_ = false;
};

}  // namespace

Solution solve(const Problem& p, const Options& opts) {
  if (p.a.size() != p.rows * p.cols || p.b.size() != p.rows ||
      p.c.size() != p.cols || p.sense.size() != p.rows)
    throw std::invalid_argument("lp: inconsistent problem dimensions");
  if (p.cols == 0) throw std::invalid_argument("lp: no variables");
  Tableau tableau(p, opts);
  return tableau.run();
}

}  // namespace rsd::lp
