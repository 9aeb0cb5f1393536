#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>

#include "toric/hull.hpp"

namespace toric {

using Simplex = std::vector<QVec>;

// Compact rational polytope stored by its exact vertex set in lexicographic
// order, with the H-representation computed at construction.
class Polytope {
 public:
  Polytope() = default;
  Polytope(int ambient, const std::vector<QVec>& points);
  static Polytope empty(int ambient);
  static Polytope from_hrep(int ambient, const QMat& A, const QVec& b, const QMat& E = {},
                            const QVec& f = {});
  static Polytope box(const QVec& lo, const QVec& hi);

  int ambient() const { return ambient_; }
  int dim() const { return hull_.dim; }
  bool is_empty() const { return vertices_.empty(); }
  const std::vector<QVec>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return hull_.facets; }
  const QMat& eq_normals() const { return hull_.eq_normals; }
  const QVec& eq_offsets() const { return hull_.eq_offsets; }

  bool contains(const QVec& x) const;
  bool contains(const DVec& x, double tol = 1e-12) const;
  QVec centroid() const;  // vertex average, a relative-interior point
  Q volume() const;
  std::vector<Simplex> triangulate() const;
  Polytope translate(const QVec& t) const;
  Polytope scale(const Q& a) const;
  // Facet i as a polytope on its own vertices.
  Polytope facet_polytope(size_t i) const;

  bool operator==(const Polytope& o) const {
    return ambient_ == o.ambient_ && vertices_ == o.vertices_;
  }
  bool operator!=(const Polytope& o) const { return !(*this == o); }

 private:
  int ambient_ = 0;
  std::vector<QVec> vertices_;
  Hull hull_;
  // Double copies of the H-representation for fast membership.
  std::vector<std::pair<DVec, double>> dineq_, deq_;
};

Polytope minkowski_sum(const Polytope& a, const Polytope& b);

// Euclidean distance from x to p; ambient dimension <= 2.
double distance_to(const Polytope& p, const DVec& x);

struct Ball {
  QVec center;
  Q radius;
  bool operator==(const Ball& o) const { return center == o.center && radius == o.radius; }
};

struct OracleBody {
  int ambient = 0;
  std::function<bool(const DVec&)> member;
  DVec lo, hi;
  DVec inner;
};

class ConvexBody {
 public:
  ConvexBody() = default;
  ConvexBody(Polytope p) : v_(std::move(p)) {}
  ConvexBody(Ball b) : v_(std::move(b)) {}
  ConvexBody(OracleBody o) : v_(std::move(o)) {}

  int ambient() const;
  bool is_polytope() const { return std::holds_alternative<Polytope>(v_); }
  bool is_ball() const { return std::holds_alternative<Ball>(v_); }
  bool is_oracle() const { return std::holds_alternative<OracleBody>(v_); }
  const Polytope& polytope() const { return std::get<Polytope>(v_); }
  const Ball& ball() const { return std::get<Ball>(v_); }
  const OracleBody& oracle() const { return std::get<OracleBody>(v_); }

  bool is_empty() const;
  // Affine dimension; balls with positive radius are full-dimensional.
  int dim() const;
  bool contains(const QVec& x) const;  // exact except for oracles
  bool contains(const DVec& x, double tol = 1e-12) const;
  std::pair<DVec, DVec> bounding_box() const;
  DVec inner_point() const;
  std::optional<QVec> inner_point_exact() const;
  ConvexBody scale(const Q& a) const;
  ConvexBody translate(const QVec& t) const;

  bool operator==(const ConvexBody& o) const;
  bool operator!=(const ConvexBody& o) const { return !(*this == o); }

 private:
  std::variant<Polytope, Ball, OracleBody> v_;
};

// Ball plus polytope yields an oracle body (ambient dimension <= 2).
ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b);

// Delta_eps = Conv{y in body : dist(y, relative boundary) >= eps}, euclidean distance.
// For polytopes with irrational facet-normal lengths the offset uses a rational
// upper bound of the length within 1e-15, so the result is contained in Delta_eps.
ConvexBody shrink(const ConvexBody& body, const Q& eps);

// Rational sqrt: exact when the argument is a square, otherwise an upper bound.
Q sqrt_upper(const Q& x);

}  // namespace toric
