#pragma once

#include "toric/linalg.hpp"

namespace toric {

struct Facet {
  QVec normal;  // outward: normal . x <= offset on the hull
  Q offset;
  std::vector<int> vertices;  // input indices, hull vertices only
};

struct Hull {
  int ambient = 0;
  int dim = -1;               // affine dimension, -1 for the empty set
  std::vector<int> vertices;  // input indices of extreme points, lexicographic by coordinates
  QMat eq_normals;            // affine hull: eq_normals[i] . x = eq_offsets[i]
  QVec eq_offsets;
  std::vector<Facet> facets;  // facets relative to the affine hull, normals supported on pivots
};

// Incremental beneath-beyond hull in the affine hull of the input; coplanar
// simplicial pieces are merged afterwards by normalized hyperplane.
Hull convex_hull(const std::vector<QVec>& pts, int ambient);

struct EnvelopeCell {
  std::vector<int> vertices;  // input indices of lifted envelope vertices on this cell
  QVec slope;                 // value = slope . m + constant on the cell
  Q constant;
};

struct Envelope {
  int dim = 0;
  Hull base;                  // hull of the base points
  std::vector<int> vertices;  // input indices of envelope vertices, lexicographic by base point
  std::vector<EnvelopeCell> cells;
};

// Concave upper envelope of lifted points (m_i, t_i) over conv{m_i}.
Envelope upper_hull(const std::vector<QVec>& m, const QVec& t, int dim);

}  // namespace toric
