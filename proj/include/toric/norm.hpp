#pragma once

#include <optional>

#include "toric/pa.hpp"

namespace toric {

// Difference pos - neg of two PA concave functions; closed under negation.
struct PADiff {
  PAConcave pos, neg;
  static PADiff of(const PAConcave& f) { return {f, PAConcave::zero(f.dim())}; }
  int dim() const { return pos.dim(); }
  Q eval(const QVec& x) const { return pos.eval(x) - neg.eval(x); }
  PADiff operator+(const PADiff& o) const { return {pos + o.pos, neg + o.neg}; }
  PADiff operator-() const { return {neg, pos}; }
  PADiff scale(const Q& a) const;  // any sign
};

// sup_x |num(x)| / den(x) with den(x) = max_k (<d_k, x> + e_k) > 0 away from
// its zero set; nullopt is +inf. One exact LP per cell of the common refinement.
std::optional<Q> sup_abs_ratio(const PADiff& num, const std::vector<Piece>& den);

// l-infinity norm on N_R.
std::optional<Q> c_norm(const PADiff& f);
std::optional<Q> g_norm(const PADiff& f);
inline std::optional<Q> c_norm(const PAConcave& f) { return c_norm(PADiff::of(f)); }
inline std::optional<Q> g_norm(const PAConcave& f) { return g_norm(PADiff::of(f)); }

}  // namespace toric
