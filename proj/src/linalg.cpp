#include "toric/linalg.hpp"

#include <algorithm>
#include <set>

namespace toric {

std::vector<int> rref(QMat& a) {
  std::vector<int> piv;
  if (a.empty()) return piv;
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(a[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[r], a[p]);
    Q inv = 1 / a[r][c];
    for (int j = c; j < cols; ++j) a[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Q f = a[i][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  a.resize(r);
  return piv;
}

int rank(QMat a) { return static_cast<int>(rref(a).size()); }

QMat nullspace(QMat a, int cols) {
  auto piv = rref(a);
  std::vector<bool> is_piv(cols, false);
  for (int p : piv) is_piv[p] = true;
  QMat out;
  for (int free = 0; free < cols; ++free) {
    if (is_piv[free]) continue;
    QVec v(cols, Q(0));
    v[free] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][free];
    out.push_back(v);
  }
  return out;
}

std::optional<QVec> solve(QMat a, QVec b) {
  if (a.size() != b.size()) throw Error(ErrorKind::dimension_mismatch, "solve: shape mismatch");
  if (a.empty()) return std::nullopt;
  const int cols = static_cast<int>(a[0].size());
  for (size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
  auto piv = rref(a);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  if (static_cast<int>(piv.size()) != cols) return std::nullopt;
  QVec x(cols);
  for (int i = 0; i < cols; ++i) x[i] = a[i][cols];
  return x;
}

Q det(QMat a) {
  const int n = static_cast<int>(a.size());
  Q d = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (int i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Q f = a[i][c] / a[c][c];
      for (int j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return d;
}

QVec AffineHull::project(const QVec& x) const {
  QVec out(pivots.size());
  for (size_t i = 0; i < pivots.size(); ++i) out[i] = x[pivots[i]];
  return out;
}

AffineHull affine_hull(const std::vector<QVec>& pts, int ambient) {
  AffineHull h;
  h.origin = pts.empty() ? QVec(ambient, Q(0)) : pts[0];
  QMat diffs;
  for (size_t i = 1; i < pts.size(); ++i) {
    QVec d = pts[i] - h.origin;
    if (!is_zero(d)) diffs.push_back(d);
  }
  h.pivots = rref(diffs);
  h.basis = diffs;
  h.normals = nullspace(diffs, ambient);
  for (auto& n : h.normals) n = primitive(n);
  return h;
}

namespace {

void combos(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
    cur.push_back(i);
    combos(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<QVec> enumerate_vertices(const QMat& E, const QVec& f, const QMat& A, const QVec& b,
                                     int ambient) {
  QMat Er = E;
  const int re = rank(Er);
  const int need = ambient - re;
  std::set<QVec> found;
  auto feasible = [&](const QVec& x) {
    for (size_t i = 0; i < A.size(); ++i)
      if (dot(A[i], x) > b[i]) return false;
    for (size_t i = 0; i < E.size(); ++i)
      if (dot(E[i], x) != f[i]) return false;
    return true;
  };
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  if (need < 0 || need > static_cast<int>(A.size())) return {};
  combos(static_cast<int>(A.size()), need, 0, cur, subsets);
  for (const auto& s : subsets) {
    QMat M = E;
    QVec rhs = f;
    for (int i : s) {
      M.push_back(A[i]);
      rhs.push_back(b[i]);
    }
    if (M.empty()) {
      QVec zero(ambient, Q(0));
      if (ambient == 0 && feasible(zero)) found.insert(zero);
      continue;
    }
    // Drop dependent equality rows so the square solve sees a full-rank system.
    QMat aug = M;
    for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == ambient) continue;
    if (static_cast<int>(piv.size()) != ambient) continue;
    QVec x(ambient);
    for (int i = 0; i < ambient; ++i) x[i] = aug[i][ambient];
    if (feasible(x)) found.insert(x);
  }
  return {found.begin(), found.end()};
}

}  // namespace toric
