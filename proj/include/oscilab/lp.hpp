// Small dense linear programs: min c.x subject to A x >= b, x >= 0, c >= 0.
//
// The dual (max b.y, A^T y <= c, y >= 0) has the origin as a feasible basis
// because c >= 0, so a single-phase primal simplex on the dual suffices. The
// primal solution is read off the reduced costs of the dual slacks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscilab/grid.hpp"

namespace oscilab {

struct LinearProgram {
  std::size_t vars = 0;
  std::vector<double> cost;               // size vars, all >= 0
  std::vector<std::vector<double>> rows;  // each of size vars
  std::vector<double> rhs;

  std::size_t add_row(std::vector<double> row, double b) {
    if (row.size() != vars) throw ConfigError("LP row has wrong width");
    rows.push_back(std::move(row));
    rhs.push_back(b);
    return rows.size() - 1;
  }
};

struct LPSolution {
  double objective = 0.0;
  std::vector<double> x;  // primal
  std::vector<double> y;  // dual multipliers, one per row
  std::size_t pivots = 0;
  double primal_infeasibility = 0.0;  // max_i (b_i - A_i x)_+
  double duality_gap = 0.0;           // |c.x - b.y|
};

inline LPSolution solve_lp(const LinearProgram& lp, std::size_t max_pivots = 1'000'000) {
  using R = long double;
  const std::size_t n = lp.vars, m = lp.rows.size();
  if (lp.cost.size() != n) throw ConfigError("LP cost has wrong size");
  for (double c : lp.cost)
    if (!(c >= 0.0)) throw ConfigError("LP solver needs a nonnegative cost vector");

  // Dual tableau: one row per primal variable j: sum_i A_ij y_i + s_j = c_j.
  // Columns: y_0..y_{m-1}, s_0..s_{n-1}, rhs.
  const std::size_t cols = m + n + 1;
  std::vector<R> t(n * cols, 0.0L);
  auto at = [&](std::size_t r, std::size_t c) -> R& { return t[r * cols + c]; };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) at(j, i) = lp.rows[i][j];
  for (std::size_t j = 0; j < n; ++j) {
    at(j, m + j) = 1.0L;
    at(j, cols - 1) = lp.cost[j];
  }
  // Objective row holds reduced costs of max b.y: z - b.y = 0.
  std::vector<R> z(cols, 0.0L);
  for (std::size_t i = 0; i < m; ++i) z[i] = -R(lp.rhs[i]);
  std::vector<std::size_t> basis(n);
  for (std::size_t j = 0; j < n; ++j) basis[j] = m + j;

  const R eps = 1e-15L, pivot_tol = 1e-11L;
  LPSolution sol;
  // Dantzig pricing; after a run of degenerate pivots switch to Bland's rule,
  // which cannot cycle, until the objective moves again.
  std::size_t degenerate_run = 0;
  for (;;) {
    const bool bland = degenerate_run >= 50;
    std::size_t enter = cols;
    R most = 0.0L;
    for (std::size_t c = 0; c + 1 < cols; ++c) {
      if (!(z[c] < -eps * (1.0L + std::fabs(R(c < m ? lp.rhs[c] : 0.0))))) continue;
      if (bland) {
        enter = c;
        break;
      }
      if (z[c] < most) {
        most = z[c];
        enter = c;
      }
    }
    if (enter == cols) break;
    std::size_t leave = n;
    R best = 0.0L;
    for (std::size_t r = 0; r < n; ++r) {
      const R a = at(r, enter);
      if (a <= pivot_tol) continue;
      const R ratio = at(r, cols - 1) / a;
      if (leave == n || ratio < best - eps || (std::fabs(ratio - best) <= eps && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == n) throw InvariantViolation("LP dual unbounded: primal constraints infeasible");
    const R piv = at(leave, enter);
    for (std::size_t c = 0; c < cols; ++c) at(leave, c) /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == leave) continue;
      const R f = at(r, enter);
      if (f == 0.0L) continue;
      for (std::size_t c = 0; c < cols; ++c) at(r, c) -= f * at(leave, c);
    }
    const R f = z[enter];
    for (std::size_t c = 0; c < cols; ++c) z[c] -= f * at(leave, c);
    basis[leave] = enter;
    degenerate_run = best <= eps ? degenerate_run + 1 : 0;
    if (++sol.pivots > max_pivots) throw InvariantViolation("LP pivot limit exceeded");
  }

  sol.y.assign(m, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    if (basis[r] < m) sol.y[basis[r]] = double(at(r, cols - 1));
  sol.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) sol.x[j] = double(std::max(R(0), z[m + j]));

  CompensatedSum primal, dual;
  for (std::size_t j = 0; j < n; ++j) primal.add(lp.cost[j] * sol.x[j]);
  for (std::size_t i = 0; i < m; ++i) dual.add(lp.rhs[i] * sol.y[i]);
  for (std::size_t i = 0; i < m; ++i) {
    CompensatedSum ax;
    for (std::size_t j = 0; j < n; ++j) ax.add(lp.rows[i][j] * sol.x[j]);
    sol.primal_infeasibility = std::max(sol.primal_infeasibility, lp.rhs[i] - ax.value());
  }
  sol.objective = primal.value();
  sol.duality_gap = std::abs(primal.value() - dual.value());
  return sol;
}

}  // namespace oscilab
