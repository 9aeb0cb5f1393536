#include "toric/pa.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "toric/hull.hpp"
#include "toric/lp.hpp"

namespace toric {

namespace {

bool strictly_needed_lp(int dim, const std::vector<Piece>& ps, size_t i) {
  // maximize s subject to <m_j - m_i, x> + c_j - c_i >= s for j != i, s <= 1
  QMat A;
  QVec b;
  for (size_t j = 0; j < ps.size(); ++j) {
    if (j == i) continue;
    QVec row(dim + 1);
    for (int k = 0; k < dim; ++k) row[k] = ps[i].m[k] - ps[j].m[k];
    row[dim] = 1;
    A.push_back(row);
    b.push_back(ps[j].c - ps[i].c);
  }
  QVec cap(dim + 1, Q(0));
  cap[dim] = 1;
  A.push_back(cap);
  b.push_back(1);
  QVec obj(dim + 1, Q(0));
  obj[dim] = 1;
  auto r = lp_maximize(obj, A, b);
  return r.status == LPStatus::optimal && r.value > 0;
}

}  // namespace

std::vector<Piece> irredundant_pieces(int dim, std::vector<Piece> pieces) {
  if (pieces.empty()) throw Error(ErrorKind::invalid_input, "piecewise affine function needs a piece");
  for (const auto& p : pieces)
    if (static_cast<int>(p.m.size()) != dim)
      throw Error(ErrorKind::dimension_mismatch, "piece slope of wrong dimension");
  std::map<QVec, Q> best;
  for (const auto& p : pieces) {
    auto it = best.find(p.m);
    if (it == best.end() || p.c < it->second) best[p.m] = p.c;
  }
  std::vector<Piece> uniq;
  for (const auto& [m, c] : best) uniq.push_back({m, c});
  if (uniq.size() == 1) return uniq;

  std::vector<Piece> out;
  if (dim <= 3) {
    std::vector<QVec> ms;
    QVec ts;
    for (const auto& p : uniq) {
      ms.push_back(p.m);
      ts.push_back(-p.c);
    }
    Envelope env = upper_hull(ms, ts, dim);
    for (int v : env.vertices) out.push_back(uniq[v]);
  } else {
    for (size_t i = 0; i < uniq.size(); ++i)
      if (strictly_needed_lp(dim, uniq, i)) out.push_back(uniq[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PAConcave::PAConcave(int dim, std::vector<Piece> pieces)
    : dim_(dim), pieces_(irredundant_pieces(dim, std::move(pieces))) {}

Q PAConcave::eval(const QVec& x) const {
  if (static_cast<int>(x.size()) != dim_) throw Error(ErrorKind::dimension_mismatch, "eval: wrong dimension");
  return dot(pieces_[active(x)].m, x) + pieces_[active(x)].c;
}

size_t PAConcave::active(const QVec& x) const {
  size_t best = 0;
  Q bv = dot(pieces_[0].m, x) + pieces_[0].c;
  for (size_t i = 1; i < pieces_.size(); ++i) {
    Q v = dot(pieces_[i].m, x) + pieces_[i].c;
    if (v < bv) {
      bv = v;
      best = i;
    }
  }
  return best;
}

double PAConcave::eval(const DVec& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces_) {
    double v = p.c.get_d();
    for (int k = 0; k < dim_; ++k) v += p.m[k].get_d() * x[k];
    best = std::min(best, v);
  }
  return best;
}

bool PAConcave::is_conical() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.c == 0; });
}

PAConcave PAConcave::recession() const {
  std::vector<Piece> ps;
  for (const auto& p : pieces_) ps.push_back({p.m, Q(0)});
  return PAConcave(dim_, ps);
}

PAConcave PAConcave::operator+(const PAConcave& o) const {
  if (dim_ != o.dim_) throw Error(ErrorKind::dimension_mismatch, "sum of functions on different spaces");
  std::vector<Piece> ps;
  for (const auto& a : pieces_)
    for (const auto& b : o.pieces_) ps.push_back({a.m + b.m, a.c + b.c});
  return PAConcave(dim_, ps);
}

PAConcave PAConcave::add_constant(const Q& c) const {
  std::vector<Piece> ps = pieces_;
  for (auto& p : ps) p.c += c;
  return PAConcave(dim_, ps);
}

PAConcave PAConcave::scale(const Q& a) const {
  if (a < 0) throw Error(ErrorKind::invalid_input, "scale factor must be nonnegative");
  if (a == 0) return zero(dim_);
  std::vector<Piece> ps = pieces_;
  for (auto& p : ps) {
    p.m = a * p.m;
    p.c *= a;
  }
  return PAConcave(dim_, ps);
}

std::string to_string(const PAConcave& f) {
  std::string s = "min{";
  for (size_t i = 0; i < f.pieces().size(); ++i) {
    if (i) s += ", ";
    s += "<" + to_string(f.pieces()[i].m) + ",x> + " + to_string(f.pieces()[i].c);
  }
  return s + "}";
}

}  // namespace toric
