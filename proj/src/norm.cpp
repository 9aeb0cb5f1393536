#include "toric/norm.hpp"

#include "toric/lp.hpp"

namespace toric {

PADiff PADiff::scale(const Q& a) const {
  if (a >= 0) return {pos.scale(a), neg.scale(a)};
  return {neg.scale(-a), pos.scale(-a)};
}

namespace {

// Rows <p_i - p_l, y> + (c_i - c_l) tau <= 0 keeping piece i minimal.
void cell_rows(const std::vector<Piece>& ps, size_t i, int n, QMat& A, QVec& b, bool maximal) {
  for (size_t l = 0; l < ps.size(); ++l) {
    if (l == i) continue;
    QVec row(n + 1);
    for (int k = 0; k < n; ++k) row[k] = ps[i].m[k] - ps[l].m[k];
    row[n] = ps[i].c - ps[l].c;
    if (maximal)
      for (auto& v : row) v = -v;
    A.push_back(row);
    b.push_back(0);
  }
}

std::vector<Piece> linf_pieces(int n, const Q& offset) {
  std::vector<Piece> out;
  for (int k = 0; k < n; ++k)
    for (int s : {1, -1}) {
      QVec m(n, Q(0));
      m[k] = s;
      out.push_back({m, offset});
    }
  return out;
}

}  // namespace

std::optional<Q> sup_abs_ratio(const PADiff& num, const std::vector<Piece>& den) {
  const int n = num.dim();
  if (num.neg.dim() != n) throw Error(ErrorKind::dimension_mismatch, "norm: dimensions differ");
  const auto& P = num.pos.pieces();
  const auto& N = num.neg.pieces();
  Q best = 0;
  // Charnes-Cooper: y = x / den(x), tau = 1 / den(x).
  for (size_t i = 0; i < P.size(); ++i)
    for (size_t j = 0; j < N.size(); ++j)
      for (size_t k = 0; k < den.size(); ++k) {
        QMat A;
        QVec b;
        cell_rows(P, i, n, A, b, false);
        cell_rows(N, j, n, A, b, false);
        cell_rows(den, k, n, A, b, true);
        QVec neg_tau(n + 1, Q(0));
        neg_tau[n] = -1;
        A.push_back(neg_tau);
        b.push_back(0);
        QVec norm_row = den[k].m;
        norm_row.push_back(den[k].c);
        QVec obj = P[i].m - N[j].m;
        obj.push_back(P[i].c - N[j].c);
        for (int sgn : {1, -1}) {
          QVec c = obj;
          if (sgn < 0)
            for (auto& v : c) v = -v;
          LPResult r = lp_maximize(c, A, b, {norm_row}, {Q(1)});
          if (r.status == LPStatus::unbounded) return std::nullopt;
          if (r.status == LPStatus::optimal && r.value > best) best = r.value;
        }
      }
  return best;
}

std::optional<Q> c_norm(const PADiff& f) { return sup_abs_ratio(f, linf_pieces(f.dim(), 0)); }

std::optional<Q> g_norm(const PADiff& f) { return sup_abs_ratio(f, linf_pieces(f.dim(), 1)); }

}  // namespace toric
