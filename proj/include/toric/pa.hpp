#pragma once

#include "toric/rational.hpp"

namespace toric {

struct Piece {
  QVec m;
  Q c;
  bool operator==(const Piece& o) const { return m == o.m && c == o.c; }
  bool operator<(const Piece& o) const { return m < o.m || (m == o.m && c < o.c); }
};

// f(x) = min_i (<m_i, x> + c_i) on N_R, kept irredundant: every stored piece is
// the unique minimizer on an open set. Pieces are sorted by slope.
class PAConcave {
 public:
  PAConcave() = default;
  PAConcave(int dim, std::vector<Piece> pieces);
  static PAConcave zero(int dim) { return PAConcave(dim, {{QVec(dim, Q(0)), Q(0)}}); }
  static PAConcave affine(const QVec& m, const Q& c) {
    return PAConcave(static_cast<int>(m.size()), {{m, c}});
  }

  int dim() const { return dim_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  Q eval(const QVec& x) const;
  double eval(const DVec& x) const;
  // Index of a piece attaining the minimum at x (lowest index on ties).
  size_t active(const QVec& x) const;
  bool is_conical() const;
  PAConcave recession() const;
  PAConcave operator+(const PAConcave& o) const;
  PAConcave add_constant(const Q& c) const;
  PAConcave scale(const Q& a) const;  // a >= 0

  bool operator==(const PAConcave& o) const { return dim_ == o.dim_ && pieces_ == o.pieces_; }
  bool operator!=(const PAConcave& o) const { return !(*this == o); }

 private:
  int dim_ = 0;
  std::vector<Piece> pieces_;
};

// Drops pieces that never attain the minimum alone; exact hull for dim <= 3, LP above.
std::vector<Piece> irredundant_pieces(int dim, std::vector<Piece> pieces);

std::string to_string(const PAConcave& f);

}  // namespace toric
