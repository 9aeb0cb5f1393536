#include "toric/lp.hpp"

namespace toric {

namespace {

struct Tableau {
  QMat rows;  // each row: columns then rhs
  std::vector<int> basis;
  QVec z;  // reduced costs, last entry = -objective
  int cols = 0;

  void pivot(int r, int e) {
    Q inv = 1 / rows[r][e];
    for (auto& v : rows[r]) v *= inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == r || rows[i][e] == 0) continue;
      Q f = rows[i][e];
      for (int j = 0; j <= cols; ++j)
        if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
    }
    if (z[e] != 0) {
      Q f = z[e];
      for (int j = 0; j <= cols; ++j)
        if (rows[r][j] != 0) z[j] -= f * rows[r][j];
    }
    basis[r] = e;
  }

  void set_cost(const QVec& cost) {
    z.assign(cols + 1, Q(0));
    for (int j = 0; j < cols; ++j) z[j] = cost[j];
    for (size_t i = 0; i < rows.size(); ++i) {
      const Q& cb = cost[basis[i]];
      if (cb == 0) continue;
      for (int j = 0; j <= cols; ++j) z[j] -= cb * rows[i][j];
    }
  }

  // Returns false when unbounded. `allowed` limits entering columns.
  bool run(int allowed) {
    for (;;) {
      int e = -1;
      for (int j = 0; j < allowed; ++j)
        if (z[j] > 0) {
          e = j;
          break;
        }
      if (e < 0) return true;
      int r = -1;
      Q best;
      for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][e] <= 0) continue;
        Q ratio = rows[i][cols] / rows[i][e];
        if (r < 0 || ratio < best || (ratio == best && basis[i] < basis[r])) {
          r = static_cast<int>(i);
          best = ratio;
        }
      }
      if (r < 0) return false;
      pivot(r, e);
    }
  }
};

}  // namespace

LPResult lp_maximize(const QVec& c, const QMat& A, const QVec& b, const QMat& E, const QVec& f) {
  const int n = static_cast<int>(c.size());
  const int mi = static_cast<int>(A.size());
  const int me = static_cast<int>(E.size());
  const int m = mi + me;
  const int nstruct = 2 * n + mi;
  Tableau t;
  t.cols = nstruct + m;
  t.rows.assign(m, QVec(t.cols + 1, Q(0)));
  t.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    const QVec& a = i < mi ? A[i] : E[i - mi];
    Q rhs = i < mi ? b[i] : f[i - mi];
    QVec& row = t.rows[i];
    for (int j = 0; j < n; ++j) {
      row[j] = a[j];
      row[n + j] = -a[j];
    }
    if (i < mi) row[2 * n + i] = 1;
    row[t.cols] = rhs;
    if (rhs < 0)
      for (auto& v : row) v = -v;
    row[nstruct + i] = 1;
    t.basis[i] = nstruct + i;
  }
  LPResult res;
  QVec cost1(t.cols, Q(0));
  for (int i = 0; i < m; ++i) cost1[nstruct + i] = -1;
  t.set_cost(cost1);
  t.run(t.cols);
  if (t.z[t.cols] != 0) {
    res.status = LPStatus::infeasible;
    return res;
  }
  for (int i = 0; i < static_cast<int>(t.rows.size()); ++i) {
    if (t.basis[i] < nstruct) continue;
    int e = -1;
    for (int j = 0; j < nstruct; ++j)
      if (t.rows[i][j] != 0) {
        e = j;
        break;
      }
    if (e >= 0) {
      t.pivot(i, e);
    } else {
      t.rows.erase(t.rows.begin() + i);
      t.basis.erase(t.basis.begin() + i);
      --i;
    }
  }
  QVec cost2(t.cols, Q(0));
  for (int j = 0; j < n; ++j) {
    cost2[j] = c[j];
    cost2[n + j] = -c[j];
  }
  t.set_cost(cost2);
  if (!t.run(nstruct)) {
    res.status = LPStatus::unbounded;
    return res;
  }
  res.status = LPStatus::optimal;
  res.value = -t.z[t.cols];
  QVec y(t.cols, Q(0));
  for (size_t i = 0; i < t.rows.size(); ++i) y[t.basis[i]] = t.rows[i][t.cols];
  res.x.resize(n);
  for (int j = 0; j < n; ++j) res.x[j] = y[j] - y[n + j];
  return res;
}

bool lp_feasible(int n, const QMat& A, const QVec& b, const QMat& E, const QVec& f) {
  return lp_maximize(QVec(n, Q(0)), A, b, E, f).status != LPStatus::infeasible;
}

}  // namespace toric
