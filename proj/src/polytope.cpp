#include "toric/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace toric {

Polytope::Polytope(int ambient, const std::vector<QVec>& points) : ambient_(ambient) {
  if (points.empty()) {
    hull_.ambient = ambient;
    return;
  }
  Hull h = convex_hull(points, ambient);
  std::map<int, int> pos;
  for (size_t i = 0; i < h.vertices.size(); ++i) {
    pos[h.vertices[i]] = static_cast<int>(i);
    vertices_.push_back(points[h.vertices[i]]);
  }
  for (auto& v : h.vertices) v = pos[v];
  for (auto& f : h.facets) {
    for (auto& v : f.vertices) v = pos[v];
    std::sort(f.vertices.begin(), f.vertices.end());
  }
  std::sort(h.facets.begin(), h.facets.end(), [](const Facet& a, const Facet& b) {
    return std::tie(a.normal, a.offset) < std::tie(b.normal, b.offset);
  });
  hull_ = std::move(h);
  for (const auto& f : hull_.facets) dineq_.push_back({to_double(f.normal), to_double(f.offset)});
  for (size_t i = 0; i < hull_.eq_normals.size(); ++i)
    deq_.push_back({to_double(hull_.eq_normals[i]), to_double(hull_.eq_offsets[i])});
}

Polytope Polytope::empty(int ambient) { return Polytope(ambient, {}); }

Polytope Polytope::from_hrep(int ambient, const QMat& A, const QVec& b, const QMat& E, const QVec& f) {
  return Polytope(ambient, enumerate_vertices(E, f, A, b, ambient));
}

Polytope Polytope::box(const QVec& lo, const QVec& hi) {
  const int d = static_cast<int>(lo.size());
  std::vector<QVec> pts;
  for (int mask = 0; mask < (1 << d); ++mask) {
    QVec p(d);
    for (int i = 0; i < d; ++i) p[i] = (mask >> i) & 1 ? hi[i] : lo[i];
    pts.push_back(p);
  }
  return Polytope(d, pts);
}

bool Polytope::contains(const QVec& x) const {
  if (vertices_.empty()) return false;
  if (static_cast<int>(x.size()) != ambient_)
    throw Error(ErrorKind::dimension_mismatch, "Polytope::contains: wrong dimension");
  for (size_t i = 0; i < hull_.eq_normals.size(); ++i)
    if (dot(hull_.eq_normals[i], x) != hull_.eq_offsets[i]) return false;
  for (const auto& f : hull_.facets)
    if (dot(f.normal, x) > f.offset) return false;
  return true;
}

bool Polytope::contains(const DVec& x, double tol) const {
  if (vertices_.empty()) return false;
  auto ev = [&](const DVec& a) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
    return s;
  };
  for (const auto& [a, o] : deq_)
    if (std::fabs(ev(a) - o) > tol * (1 + std::fabs(o))) return false;
  for (const auto& [a, o] : dineq_)
    if (ev(a) > o + tol * (1 + std::fabs(o))) return false;
  return true;
}

QVec Polytope::centroid() const {
  if (vertices_.empty()) throw Error(ErrorKind::invalid_input, "centroid of empty polytope");
  QVec c(ambient_, Q(0));
  for (const auto& v : vertices_) c = c + v;
  return Q(1, static_cast<unsigned long>(vertices_.size())) * c;
}

Polytope Polytope::facet_polytope(size_t i) const {
  std::vector<QVec> pts;
  for (int v : hull_.facets.at(i).vertices) pts.push_back(vertices_[v]);
  return Polytope(ambient_, pts);
}

std::vector<Simplex> Polytope::triangulate() const {
  if (dim() > 3) throw Error(ErrorKind::dimension_too_high, "triangulate: dim > 3");
  if (vertices_.empty()) return {};
  if (dim() == 0) return {Simplex{vertices_[0]}};
  if (dim() == 1) return {Simplex{vertices_[0], vertices_[1]}};
  std::vector<Simplex> out;
  const QVec& apex = vertices_[0];
  for (size_t i = 0; i < hull_.facets.size(); ++i) {
    const auto& fv = hull_.facets[i].vertices;
    if (std::find(fv.begin(), fv.end(), 0) != fv.end()) continue;
    for (auto s : facet_polytope(i).triangulate()) {
      s.insert(s.begin(), apex);
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

Q factorial(int k) {
  Q f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Q Polytope::volume() const {
  if (vertices_.empty() || dim() < ambient_) return 0;
  if (ambient_ == 0) return 1;
  Q total = 0;
  for (const auto& s : triangulate()) {
    QMat m;
    for (size_t j = 1; j < s.size(); ++j) m.push_back(s[j] - s[0]);
    total += abs(det(m));
  }
  return total / factorial(ambient_);
}

Polytope Polytope::translate(const QVec& t) const {
  std::vector<QVec> pts;
  for (const auto& v : vertices_) pts.push_back(v + t);
  return Polytope(ambient_, pts);
}

Polytope Polytope::scale(const Q& a) const {
  std::vector<QVec> pts;
  for (const auto& v : vertices_) pts.push_back(a * v);
  return Polytope(ambient_, pts);
}

Polytope minkowski_sum(const Polytope& a, const Polytope& b) {
  if (a.ambient() != b.ambient()) throw Error(ErrorKind::dimension_mismatch, "minkowski_sum: dimensions differ");
  std::vector<QVec> pts;
  for (const auto& u : a.vertices())
    for (const auto& v : b.vertices()) pts.push_back(u + v);
  return Polytope(a.ambient(), pts);
}

double distance_to(const Polytope& p, const DVec& x) {
  if (p.is_empty()) return INFINITY;
  if (p.contains(x, 1e-13)) return 0;
  if (p.ambient() > 2)
    throw Error(ErrorKind::dimension_too_high, "distance_to: limited to dimension <= 2");
  // Outside a convex polygon the nearest point lies on an edge; diagonals never get closer.
  std::vector<DVec> v;
  for (const auto& q : p.vertices()) v.push_back(to_double(q));
  auto seg = [&](const DVec& a, const DVec& b) {
    double num = 0, den = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      num += (x[i] - a[i]) * (b[i] - a[i]);
      den += (b[i] - a[i]) * (b[i] - a[i]);
    }
    double s = den > 0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
    double d2 = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      double e = x[i] - a[i] - s * (b[i] - a[i]);
      d2 += e * e;
    }
    return std::sqrt(d2);
  };
  double best = INFINITY;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i; j < v.size(); ++j) best = std::min(best, seg(v[i], v[j]));
  return best;
}

int ConvexBody::ambient() const {
  if (is_polytope()) return polytope().ambient();
  if (is_ball()) return static_cast<int>(ball().center.size());
  return oracle().ambient;
}

bool ConvexBody::is_empty() const {
  if (is_polytope()) return polytope().is_empty();
  if (is_ball()) return ball().radius < 0;
  return false;
}

int ConvexBody::dim() const {
  if (is_polytope()) return polytope().dim();
  if (is_ball()) return ball().radius > 0 ? ambient() : 0;
  return ambient();
}

bool ConvexBody::contains(const QVec& x) const {
  if (is_polytope()) return polytope().contains(x);
  if (is_ball()) {
    QVec d = x - ball().center;
    return dot(d, d) <= ball().radius * ball().radius;
  }
  return oracle().member(to_double(x));
}

bool ConvexBody::contains(const DVec& x, double tol) const {
  if (is_polytope()) return polytope().contains(x, tol);
  if (is_ball()) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      double d = x[i] - ball().center[i].get_d();
      s += d * d;
    }
    double r = ball().radius.get_d();
    return std::sqrt(s) <= r + tol * (1 + r);
  }
  return oracle().member(x);
}

std::pair<DVec, DVec> ConvexBody::bounding_box() const {
  const int d = ambient();
  if (is_polytope()) {
    DVec lo(d, INFINITY), hi(d, -INFINITY);
    for (const auto& v : polytope().vertices())
      for (int i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], v[i].get_d());
        hi[i] = std::max(hi[i], v[i].get_d());
      }
    return {lo, hi};
  }
  if (is_ball()) {
    DVec lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = Q(ball().center[i] - ball().radius).get_d();
      hi[i] = Q(ball().center[i] + ball().radius).get_d();
    }
    return {lo, hi};
  }
  return {oracle().lo, oracle().hi};
}

DVec ConvexBody::inner_point() const {
  if (is_oracle()) return oracle().inner;
  return to_double(*inner_point_exact());
}

std::optional<QVec> ConvexBody::inner_point_exact() const {
  if (is_polytope()) return polytope().centroid();
  if (is_ball()) return ball().center;
  return std::nullopt;
}

ConvexBody ConvexBody::scale(const Q& a) const {
  if (is_polytope()) return polytope().scale(a);
  if (is_ball()) {
    if (a == 0) return Polytope(ambient(), {QVec(ambient(), Q(0))});
    return Ball{a * ball().center, a * ball().radius};
  }
  if (a == 0) return Polytope(ambient(), {QVec(ambient(), Q(0))});
  OracleBody o = oracle();
  double s = a.get_d();
  auto inner = o.member;
  o.member = [inner, s](const DVec& x) {
    DVec y(x);
    for (auto& v : y) v /= s;
    return inner(y);
  };
  for (auto& v : o.lo) v *= s;
  for (auto& v : o.hi) v *= s;
  for (auto& v : o.inner) v *= s;
  return o;
}

ConvexBody ConvexBody::translate(const QVec& t) const {
  if (is_polytope()) return polytope().translate(t);
  if (is_ball()) return Ball{ball().center + t, ball().radius};
  OracleBody o = oracle();
  DVec td = to_double(t);
  auto inner = o.member;
  o.member = [inner, td](const DVec& x) {
    DVec y(x);
    for (size_t i = 0; i < y.size(); ++i) y[i] -= td[i];
    return inner(y);
  };
  for (size_t i = 0; i < td.size(); ++i) {
    o.lo[i] += td[i];
    o.hi[i] += td[i];
    o.inner[i] += td[i];
  }
  return o;
}

bool ConvexBody::operator==(const ConvexBody& o) const {
  if (is_polytope() && o.is_polytope()) return polytope() == o.polytope();
  if (is_ball() && o.is_ball()) return ball() == o.ball();
  if (is_ball() && o.is_polytope() && ball().radius == 0)
    return o.polytope() == Polytope(ambient(), {ball().center});
  if (o.is_ball() && is_polytope()) return o == *this;
  return false;
}

ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b) {
  if (a.ambient() != b.ambient()) throw Error(ErrorKind::dimension_mismatch, "minkowski_sum: dimensions differ");
  if (a.is_polytope() && b.is_polytope()) return minkowski_sum(a.polytope(), b.polytope());
  if (a.is_ball() && b.is_ball()) return Ball{a.ball().center + b.ball().center, a.ball().radius + b.ball().radius};
  if (a.is_ball() && b.is_polytope() && b.polytope().vertices().size() == 1)
    return a.translate(b.polytope().vertices()[0]);
  if (b.is_ball() && a.is_polytope() && a.polytope().vertices().size() == 1)
    return b.translate(a.polytope().vertices()[0]);
  if (a.is_ball() && b.is_polytope()) return minkowski_sum(b, a);
  if (a.is_polytope() && b.is_ball() && a.ambient() <= 2) {
    Polytope p = a.polytope();
    Ball bl = b.ball();
    DVec c = to_double(bl.center);
    double r = bl.radius.get_d();
    OracleBody o;
    o.ambient = a.ambient();
    o.member = [p, c, r](const DVec& x) {
      DVec y(x);
      for (size_t i = 0; i < y.size(); ++i) y[i] -= c[i];
      return distance_to(p, y) <= r * (1 + 1e-12) + 1e-12;
    };
    std::tie(o.lo, o.hi) = a.bounding_box();
    for (int i = 0; i < o.ambient; ++i) {
      o.lo[i] += c[i] - r;
      o.hi[i] += c[i] + r;
    }
    o.inner = to_double(p.centroid() + bl.center);
    return o;
  }
  throw Error(ErrorKind::unsupported_combination,
              "minkowski_sum: ball plus polytope is limited to dimension <= 2");
}

Q sqrt_upper(const Q& x) {
  if (x < 0) throw Error(ErrorKind::invalid_input, "sqrt of negative");
  if (x == 0) return 0;
  mpz_class n = x.get_num(), d = x.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return Q(rn, rd);
  }
  Q r(std::sqrt(x.get_d()));
  const Q bump(mpz_class("1000000000000001"), mpz_class("1000000000000000"));
  while (r * r < x) r *= bump;
  return r;
}

ConvexBody shrink(const ConvexBody& body, const Q& eps) {
  if (eps < 0) throw Error(ErrorKind::invalid_input, "shrink: eps must be >= 0");
  if (eps == 0) return body;
  if (body.is_ball()) {
    const Ball& b = body.ball();
    if (b.radius < eps) return Polytope::empty(body.ambient());
    return Ball{b.center, b.radius - eps};
  }
  if (!body.is_polytope()) throw Error(ErrorKind::unsupported_combination, "shrink: oracle bodies not supported");
  const Polytope& p = body.polytope();
  if (p.is_empty() || p.dim() == 0) return Polytope::empty(p.ambient());
  AffineHull ah = affine_hull(p.vertices(), p.ambient());
  const int k = ah.dim();
  QMat G(k, QVec(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) G[i][j] = dot(ah.basis[i], ah.basis[j]);
  QMat A;
  QVec b;
  for (const auto& f : p.facets()) {
    QVec w(k);
    for (int i = 0; i < k; ++i) w[i] = dot(ah.basis[i], f.normal);
    auto z = solve(G, w);
    Q len2 = dot(w, *z);
    A.push_back(f.normal);
    b.push_back(f.offset - eps * sqrt_upper(len2));
  }
  return Polytope::from_hrep(p.ambient(), A, b, p.eq_normals(), p.eq_offsets());
}

}  // namespace toric
