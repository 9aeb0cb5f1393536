#pragma once

#include <optional>

#include "toric/rational.hpp"

namespace toric {

// Row-reduces in place to reduced row echelon form; returns pivot columns.
std::vector<int> rref(QMat& a);
int rank(QMat a);
// Basis of {x : a x = 0}; `cols` fixes the width when `a` has no rows.
QMat nullspace(QMat a, int cols);
std::optional<QVec> solve(QMat a, QVec b);
Q det(QMat a);

struct AffineHull {
  QVec origin;
  QMat basis;               // rows, in reduced echelon form
  std::vector<int> pivots;  // projection onto these coordinates is injective on the hull
  QMat normals;             // n . x = n . origin cuts out the hull
  int dim() const { return static_cast<int>(basis.size()); }
  QVec project(const QVec& x) const;
};

AffineHull affine_hull(const std::vector<QVec>& pts, int ambient);

// H-representation vertex enumeration by brute force over active sets.
// Equalities E x = f, inequalities A x <= b.
std::vector<QVec> enumerate_vertices(const QMat& E, const QVec& f, const QMat& A, const QVec& b,
                                     int ambient);

}  // namespace toric
