#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ctt/common.hpp"

namespace ctt {

/// maximize objective . v  s.t.  rows * v <= rhs,  lower <= v <= upper.
/// In the assignment problem the columns are the admitted fractions of the
/// routed shipments and the rows are the capacitated arcs they share.
struct LpSubproblem {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  std::size_t columns() const noexcept { return objective.size(); }
};

enum class LpStatus { optimal, infeasible };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> values;
  double objective = 0.0;
  std::vector<double> duals;  // one per row, >= 0
  int pivots = 0;
};

namespace detail {

// Dense tableau: constraint rows followed by the objective row of reduced
// costs; the last column holds the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& reduced(std::size_t c) { return at(rows_, c); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
};

}  // namespace detail

/// Primal simplex on a dense tableau with Bland's rule, for packing LPs:
/// max c'v subject to A v <= b, lower <= v <= upper, with A >= 0.
///
/// Columns are shifted to v' = v - lower; the problem is infeasible iff some
/// row's rhs falls below rows*lower by more than `tol`. Because the shifted
/// right-hand sides are then non-negative, the slack basis is feasible and
/// no phase one is needed. Upper bounds enter as explicit rows.
inline LpResult solve_lp(const LpSubproblem& sub, double tol = 1e-9) {
  const std::size_t n = sub.columns();
  const std::size_t m = sub.rows.size();
  if (sub.lower.size() != n || sub.upper.size() != n || sub.rhs.size() != m)
    throw std::invalid_argument("solve_lp: inconsistent subproblem dimensions");
  for (const auto& row : sub.rows) {
    if (row.size() != n) throw std::invalid_argument("solve_lp: row width differs from column count");
    for (double a : row)
      if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("solve_lp: row coefficients must be >= 0");
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!std::isfinite(sub.lower[j]) || !std::isfinite(sub.upper[j]))
      throw std::invalid_argument("solve_lp: column bounds must be finite");

  LpResult res;
  for (std::size_t j = 0; j < n; ++j)
    if (sub.upper[j] < sub.lower[j] - tol) return res;

  std::vector<double> shifted(m);
  for (std::size_t i = 0; i < m; ++i) {
    double used = 0.0;
    for (std::size_t j = 0; j < n; ++j) used += sub.rows[i][j] * sub.lower[j];
    shifted[i] = sub.rhs[i] - used;
    if (shifted[i] < -tol) return res;
    if (shifted[i] < 0.0) shifted[i] = 0.0;
  }

  // Columns: n structurals, m row slacks, n bound slacks.
  const std::size_t nrows = m + n;
  const std::size_t ncols = n + m + n;
  detail::Tableau t(nrows, ncols);
  std::vector<std::size_t> basis(nrows);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sub.rows[i][j];
    t.at(i, n + i) = 1.0;
    t.rhs(i) = shifted[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t r = m + j;
    t.at(r, j) = 1.0;
    t.at(r, n + m + j) = 1.0;
    t.rhs(r) = std::max(0.0, sub.upper[j] - sub.lower[j]);
    basis[r] = n + m + j;
  }
  for (std::size_t j = 0; j < n; ++j) t.reduced(j) = sub.objective[j];

  constexpr double kPivotEps = 1e-12;
  for (;;) {
    std::size_t enter = ncols;
    for (std::size_t c = 0; c < ncols; ++c)
      if (t.reduced(c) > tol) {
        enter = c;
        break;
      }
    if (enter == ncols) break;

    std::size_t leave = nrows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < nrows; ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotEps) continue;
      const double ratio = t.rhs(r) / a;
      if (leave == nrows || ratio < best - kPivotEps ||
          (std::abs(ratio - best) <= kPivotEps && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    // Every column is bounded above, so some row always blocks.
    if (leave == nrows) throw Error("solve_lp: unbounded direction in a bounded problem");
    t.pivot(leave, enter);
    basis[leave] = enter;
    ++res.pivots;
  }

  res.status = LpStatus::optimal;
  res.values.assign(n, 0.0);
  for (std::size_t r = 0; r < nrows; ++r)
    if (basis[r] < n) res.values[basis[r]] = t.rhs(r);
  for (std::size_t j = 0; j < n; ++j) {
    res.values[j] = std::min(sub.upper[j], std::max(sub.lower[j], sub.lower[j] + res.values[j]));
    res.objective += sub.objective[j] * res.values[j];
  }
  res.duals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) res.duals[i] = std::max(0.0, -t.reduced(n + i));
  return res;
}

}  // namespace ctt
