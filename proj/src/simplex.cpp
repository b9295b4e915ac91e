#include "sphereiso/simplex.hpp"

#include <cassert>

namespace sphereiso {

namespace {

struct Tableau {
  int m, ncols;  // ncols excludes the rhs column
  std::vector<std::vector<Rat>> t;  // m rows, ncols+1 entries each
  std::vector<Rat> cost;            // reduced cost row, ncols+1 entries
  std::vector<int> basis;           // basis[i] = column basic in row i

  void pivot(int row, int col) {
    Rat piv = t[row][col];
    for (int j = 0; j <= ncols; ++j) t[row][j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == row || t[i][col].is_zero()) continue;
      Rat f = t[i][col];
      for (int j = 0; j <= ncols; ++j) t[i][j] -= f * t[row][j];
    }
    if (!cost[col].is_zero()) {
      Rat f = cost[col];
      for (int j = 0; j <= ncols; ++j) cost[j] -= f * t[row][j];
    }
    basis[row] = col;
  }

  /// Bland's rule iteration over columns for which allowed(col) holds.
  /// Returns optimal / unbounded.
  template <typename Allowed>
  LpResult::Status iterate(Allowed&& allowed) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j)
        if (allowed(j) && cost[j].is_negative()) { enter = j; break; }
      if (enter < 0) return LpResult::Status::optimal;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m; ++i) {
        if (!(t[i][enter] > Rat(0))) continue;
        Rat ratio = t[i][ncols] / t[i][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return LpResult::Status::unbounded;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<Rat>>& A,
                  const std::vector<Rat>& b, const std::vector<Rat>& c) {
  const int m = (int)A.size();
  const int n = (int)c.size();

  Tableau tb;
  tb.m = m;
  tb.ncols = n + m;  // artificial column per row
  tb.t.assign(m, std::vector<Rat>(tb.ncols + 1, Rat(0)));
  tb.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    assert((int)A[i].size() == n);
    bool neg = b[i].is_negative();
    for (int j = 0; j < n; ++j) tb.t[i][j] = neg ? -A[i][j] : A[i][j];
    tb.t[i][tb.ncols] = neg ? -b[i] : b[i];
    tb.t[i][n + i] = Rat(1);
    tb.basis[i] = n + i;
  }

  // Phase 1: minimize the sum of artificials.
  tb.cost.assign(tb.ncols + 1, Rat(0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= tb.ncols; ++j)
      if (j < n || j == tb.ncols) tb.cost[j] -= tb.t[i][j];
  tb.iterate([](int) { return true; });

  LpResult res;
  if ((-tb.cost[tb.ncols]) > Rat(0)) {
    res.status = LpResult::Status::infeasible;
    return res;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tb.basis[i] < n) continue;
    for (int j = 0; j < n; ++j)
      if (!tb.t[i][j].is_zero()) { tb.pivot(i, j); break; }
  }

  // Phase 2 over the real columns only.
  tb.cost.assign(tb.ncols + 1, Rat(0));
  for (int j = 0; j < n; ++j) tb.cost[j] = c[j];
  for (int i = 0; i < m; ++i) {
    if (tb.basis[i] >= n) continue;
    Rat cb = c[tb.basis[i]];
    if (cb.is_zero()) continue;
    for (int j = 0; j <= tb.ncols; ++j) tb.cost[j] -= cb * tb.t[i][j];
  }
  auto status = tb.iterate([&](int j) { return j < n; });
  if (status == LpResult::Status::unbounded) {
    res.status = status;
    return res;
  }

  res.status = LpResult::Status::optimal;
  res.x.assign(n, Rat(0));
  for (int i = 0; i < m; ++i)
    if (tb.basis[i] < n) res.x[tb.basis[i]] = tb.t[i][tb.ncols];
  res.objective = Rat(0);
  for (int j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

}  // namespace sphereiso
