#include "toric/roof.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "toric/linalg.hpp"

namespace toric {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Lin {
  DVec a;  // a . u <= b
  double b;
};

struct Quad {
  DVec p;                 // |p + sum_i u_i B[i]| <= r
  std::vector<DVec> B;
  double r;
};

// Affine parametrization z = z0 + sum_i u_i B[i] of the second operand's domain,
// with the constraints that do not depend on the evaluation point.
struct SupConvGeom {
  DVec z0;
  std::vector<DVec> B;
  std::vector<Lin> lin;
  std::vector<Quad> quad;
  DVec ubox_lo, ubox_hi;  // bounding box of the parameter range
  // Domain of the first operand: polytope facets n . x <= o, or a ball.
  std::vector<std::pair<DVec, double>> f_facets;
  bool f_ball = false;
  DVec f_center;
  double f_radius = 0;
};

double dotd(const DVec& a, const DVec& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

struct Roof::Node {
  Kind kind = Kind::pa;
  int dim = 0;
  std::vector<QVec> pts;
  QVec vals;
  Envelope env;
  Polytope base;
  std::vector<std::pair<DVec, double>> dcells;
  ConvexBody body;
  Expr expr;
  bool singular = false;
  std::vector<Roof> ops;
  Q param;
  ConvexBody dom;
  SupConvGeom geom;
};

const Roof::Node& Roof::node() const {
  if (!n_) throw Error(ErrorKind::invalid_input, "empty roof");
  return *n_;
}

Roof Roof::pa(int dim, const std::vector<QVec>& m, const QVec& t) {
  if (m.empty()) throw Error(ErrorKind::invalid_input, "PA roof needs a lifted point");
  Envelope e0 = upper_hull(m, t, dim);
  auto n = std::make_shared<Node>();
  n->kind = Kind::pa;
  n->dim = dim;
  for (int v : e0.vertices) {
    n->pts.push_back(m[v]);
    n->vals.push_back(t[v]);
  }
  n->env = upper_hull(n->pts, n->vals, dim);
  n->base = Polytope(dim, n->pts);
  for (const auto& c : n->env.cells) n->dcells.push_back({to_double(c.slope), c.constant.get_d()});
  n->dom = n->base;
  return Roof(n);
}

Roof Roof::indicator(ConvexBody body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::indicator;
  n->dim = body.ambient();
  n->body = body;
  n->dom = std::move(body);
  return Roof(n);
}

Roof Roof::analytic(Expr e, ConvexBody body, bool singular_boundary) {
  if (e.dim() != body.ambient())
    throw Error(ErrorKind::dimension_mismatch, "expression and body dimensions differ");
  auto n = std::make_shared<Node>();
  n->kind = Kind::analytic;
  n->dim = e.dim();
  n->expr = std::move(e);
  n->body = body;
  n->dom = std::move(body);
  n->singular = singular_boundary;
  return Roof(n);
}

Roof::Kind Roof::kind() const { return node().kind; }
int Roof::dim() const { return node().dim; }
ConvexBody Roof::domain() const { return node().dom; }

bool Roof::is_exact() const {
  const Node& n = node();
  switch (n.kind) {
    case Kind::pa: return true;
    case Kind::indicator: return n.body.is_polytope();
    case Kind::analytic:
    case Kind::supconv: return false;
    case Kind::restrict: return n.body.is_polytope() && n.ops[0].is_exact();
    case Kind::scale:
    case Kind::shift: return n.ops[0].is_exact();
  }
  return false;
}

const std::vector<QVec>& Roof::points() const { return node().pts; }
const QVec& Roof::values() const { return node().vals; }
const Envelope& Roof::envelope() const { return node().env; }
const Polytope& Roof::base() const { return node().base; }
const ConvexBody& Roof::body() const { return node().body; }
const Expr& Roof::expr() const { return node().expr; }
bool Roof::singular_boundary() const { return node().singular; }
const Roof& Roof::inner() const { return node().ops.at(0); }
const Roof& Roof::other() const { return node().ops.at(1); }
const Q& Roof::param() const { return node().param; }

namespace {

double maximize_1d(const std::function<double(double)>& h, double lo, double hi) {
  if (!(hi - lo > 1e-14 * (1 + std::fabs(lo) + std::fabs(hi)))) return h(0.5 * (lo + hi));
  auto neg = [&](double u) {
    double v = h(u);
    return v == kNegInf ? 1e300 : -v;
  };
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::brent_find_minima(neg, lo, hi, 45, iters);
  return std::max({h(r.first), h(lo), h(hi)});
}

// Feasible interval of t for constraints along the line u = base + t e_axis.
// Intervals empty only by rounding collapse to their midpoint.
bool line_interval(const std::vector<Lin>& lin, const std::vector<Quad>& quad, const DVec& base,
                   int axis, double& lo, double& hi) {
  constexpr double tol = 1e-12;
  for (const auto& c : lin) {
    double a = c.a[axis];
    double rest = c.b - dotd(c.a, base);
    if (std::fabs(a) < 1e-300) {
      if (rest < -tol * (1 + std::fabs(c.b))) return false;
      continue;
    }
    if (a > 0) hi = std::min(hi, rest / a);
    else lo = std::max(lo, rest / a);
  }
  for (const auto& q : quad) {
    DVec w = q.p;
    for (size_t i = 0; i < q.B.size(); ++i)
      for (size_t j = 0; j < w.size(); ++j) w[j] += base[i] * q.B[i][j];
    const DVec& d = q.B[axis];
    double A = dotd(d, d), Bq = 2 * dotd(w, d);
    double C = dotd(w, w) - q.r * q.r;
    if (A < 1e-300) {
      if (C > tol * (1 + q.r * q.r)) return false;
      continue;
    }
    double disc = Bq * Bq - 4 * A * C;
    if (disc < -tol * (Bq * Bq + std::fabs(4 * A * C) + 1)) return false;
    double s = std::sqrt(std::max(disc, 0.0));
    lo = std::max(lo, (-Bq - s) / (2 * A));
    hi = std::min(hi, (-Bq + s) / (2 * A));
  }
  if (lo <= hi) return true;
  if (lo - hi > tol * (1 + std::fabs(lo) + std::fabs(hi))) return false;
  lo = hi = 0.5 * (lo + hi);
  return true;
}

}  // namespace

double Roof::eval(const DVec& y) const {
  const Node& n = node();
  if (static_cast<int>(y.size()) != n.dim)
    throw Error(ErrorKind::dimension_mismatch, "roof evaluated at a point of wrong dimension");
  switch (n.kind) {
    case Kind::pa: {
      if (!n.base.contains(y)) return kNegInf;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [s, c] : n.dcells) best = std::min(best, dotd(s, y) + c);
      return best;
    }
    case Kind::indicator: return n.body.contains(y) ? 0.0 : kNegInf;
    case Kind::analytic: return n.body.contains(y) ? n.expr.eval(y) : kNegInf;
    case Kind::restrict: return n.body.contains(y) ? n.ops[0].eval(y) : kNegInf;
    case Kind::shift: {
      double v = n.ops[0].eval(y);
      return v == kNegInf ? v : v + n.param.get_d();
    }
    case Kind::scale: {
      double a = n.param.get_d();
      DVec z(y);
      for (auto& v : z) v /= a;
      double v = n.ops[0].eval(z);
      return v == kNegInf ? v : a * v;
    }
    case Kind::supconv: {
      if (!n.dom.contains(y, 1e-10)) return kNegInf;
      const SupConvGeom& g = n.geom;
      const Roof& f = n.ops[0];
      const Roof& other = n.ops[1];
      const int k = static_cast<int>(g.B.size());
      const int d = n.dim;
      std::vector<Lin> lin = g.lin;
      std::vector<Quad> quad = g.quad;
      DVec yz(d);
      for (int j = 0; j < d; ++j) yz[j] = y[j] - g.z0[j];
      if (g.f_ball) {
        Quad q;
        q.p = yz;
        for (int j = 0; j < d; ++j) q.p[j] -= g.f_center[j];
        for (const auto& b : g.B) {
          DVec nb(b);
          for (auto& v : nb) v = -v;
          q.B.push_back(nb);
        }
        q.r = g.f_radius;
        quad.push_back(q);
      } else {
        for (const auto& [nrm, off] : g.f_facets) {
          Lin l;
          l.a.resize(k);
          for (int i = 0; i < k; ++i) l.a[i] = -dotd(nrm, g.B[i]);
          l.b = off - dotd(nrm, yz);
          lin.push_back(l);
        }
      }
      auto h = [&](const DVec& u) {
        DVec z(g.z0);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < d; ++j) z[j] += u[i] * g.B[i][j];
        double gv = other.eval(z);
        if (gv == kNegInf) return kNegInf;
        DVec x(d);
        for (int j = 0; j < d; ++j) x[j] = y[j] - z[j];
        double fv = f.eval(x);
        return fv == kNegInf ? kNegInf : fv + gv;
      };
      if (k == 0) return h({});
      constexpr double big = 1e12;
      if (k == 1) {
        double lo = -big, hi = big;
        if (!line_interval(lin, quad, DVec{0.0}, 0, lo, hi)) return kNegInf;
        return maximize_1d([&](double u) { return h(DVec{u}); }, lo, hi);
      }
      // k == 2: outer search over u0 of the inner maximum over the chord.
      auto chord = [&](double u0, double& lo, double& hi) {
        lo = -big;
        hi = big;
        return line_interval(lin, quad, DVec{u0, 0.0}, 1, lo, hi);
      };
      auto G = [&](double u0) {
        double lo, hi;
        if (!chord(u0, lo, hi)) return kNegInf;
        return maximize_1d([&](double u1) { return h(DVec{u0, u1}); }, lo, hi);
      };
      // Feasible u0 form an interval: find one feasible sample, then bisect for its ends.
      const double L = g.ubox_lo[0], H = g.ubox_hi[0];
      auto feasible = [&](double u0) {
        double lo, hi;
        return chord(u0, lo, hi);
      };
      std::optional<double> seed;
      for (int N : {64, 4096}) {
        for (int i = 0; i <= N && !seed; ++i) {
          double u0 = L + (H - L) * i / N;
          if (feasible(u0)) seed = u0;
        }
        if (seed) break;
      }
      for (size_t i = 0; i < lin.size() && !seed; ++i)
        for (size_t j = i + 1; j < lin.size() && !seed; ++j) {
          double det = lin[i].a[0] * lin[j].a[1] - lin[i].a[1] * lin[j].a[0];
          if (std::fabs(det) < 1e-300) continue;
          double u0 = (lin[i].b * lin[j].a[1] - lin[i].a[1] * lin[j].b) / det;
          if (feasible(u0)) seed = u0;
        }
      if (!seed) return kNegInf;
      double a = L, b = *seed;
      for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (a + b);
        (feasible(m) ? b : a) = m;
      }
      double lo0 = b;
      a = *seed;
      b = H;
      for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (a + b);
        (feasible(m) ? a : b) = m;
      }
      double hi0 = a;
      if (feasible(L)) lo0 = L;
      if (feasible(H)) hi0 = H;
      return maximize_1d(G, lo0, hi0);
    }
  }
  return kNegInf;
}

std::optional<Q> Roof::eval_exact(const QVec& y) const {
  const Node& n = node();
  if (static_cast<int>(y.size()) != n.dim)
    throw Error(ErrorKind::dimension_mismatch, "roof evaluated at a point of wrong dimension");
  if (!is_exact()) throw Error(ErrorKind::precondition, "exact evaluation of a non-exact roof");
  switch (n.kind) {
    case Kind::pa: {
      if (!n.base.contains(y)) return std::nullopt;
      std::optional<Q> best;
      for (const auto& c : n.env.cells) {
        Q v = dot(c.slope, y) + c.constant;
        if (!best || v < *best) best = v;
      }
      return best;
    }
    case Kind::indicator:
      if (!n.body.contains(y)) return std::nullopt;
      return Q(0);
    case Kind::restrict:
      if (!n.body.contains(y)) return std::nullopt;
      return n.ops[0].eval_exact(y);
    case Kind::shift: {
      auto v = n.ops[0].eval_exact(y);
      if (!v) return v;
      return Q(*v + n.param);
    }
    case Kind::scale: {
      auto v = n.ops[0].eval_exact((1 / n.param) * y);
      if (!v) return v;
      return Q(*v * n.param);
    }
    default: break;
  }
  return std::nullopt;
}

Roof Roof::to_pa() const {
  const Node& n = node();
  if (!is_exact()) throw Error(ErrorKind::precondition, "to_pa of a non-exact roof");
  switch (n.kind) {
    case Kind::pa: return *this;
    case Kind::indicator: {
      const auto& v = n.body.polytope().vertices();
      if (v.empty()) throw Error(ErrorKind::invalid_input, "indicator of the empty set");
      return pa(n.dim, v, QVec(v.size(), Q(0)));
    }
    case Kind::shift: {
      Roof p = n.ops[0].to_pa();
      QVec t = p.values();
      for (auto& x : t) x += n.param;
      return pa(n.dim, p.points(), t);
    }
    case Kind::scale: {
      Roof p = n.ops[0].to_pa();
      std::vector<QVec> m;
      QVec t;
      for (size_t i = 0; i < p.points().size(); ++i) {
        m.push_back(n.param * p.points()[i]);
        t.push_back(n.param * p.values()[i]);
      }
      return pa(n.dim, m, t);
    }
    case Kind::restrict: {
      // Upper vertices of {(y, s) : y in body and base, s <= every cell function, s >= L}.
      Roof p = n.ops[0].to_pa();
      const Polytope& K = n.body.polytope();
      const Polytope& P = p.base();
      const int d = n.dim;
      QMat E, A;
      QVec f, b;
      auto pad = [&](const QVec& v, const Q& last) {
        QVec r(v);
        r.push_back(last);
        return r;
      };
      for (const Polytope* poly : {&K, &P}) {
        for (size_t i = 0; i < poly->eq_normals().size(); ++i) {
          E.push_back(pad(poly->eq_normals()[i], 0));
          f.push_back(poly->eq_offsets()[i]);
        }
        for (const auto& fc : poly->facets()) {
          A.push_back(pad(fc.normal, 0));
          b.push_back(fc.offset);
        }
      }
      for (const auto& c : p.envelope().cells) {
        QVec row(d + 1);
        for (int i = 0; i < d; ++i) row[i] = -c.slope[i];
        row[d] = 1;
        A.push_back(row);
        b.push_back(c.constant);
      }
      Q L = *std::min_element(p.values().begin(), p.values().end()) - 1;
      QVec low(d + 1, Q(0));
      low[d] = -1;
      A.push_back(low);
      b.push_back(-L);
      std::vector<QVec> m;
      QVec t;
      for (const auto& v : enumerate_vertices(E, f, A, b, d + 1)) {
        QVec y(v.begin(), v.begin() + d);
        auto top = p.eval_exact(y);
        if (top && *top == v[d]) {
          m.push_back(y);
          t.push_back(v[d]);
        }
      }
      if (m.empty()) throw Error(ErrorKind::invalid_input, "restriction body misses the roof's domain");
      return pa(d, m, t);
    }
    default: break;
  }
  throw Error(ErrorKind::precondition, "to_pa of a non-exact roof");
}

bool Roof::operator==(const Roof& o) const {
  if (!n_ || !o.n_) return n_ == o.n_;
  const Node& a = node();
  const Node& b = o.node();
  if (a.dim != b.dim) return false;
  if (is_exact() && o.is_exact()) {
    Roof pa = to_pa(), pb = o.to_pa();
    return pa.points() == pb.points() && pa.values() == pb.values();
  }
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::indicator: return a.body == b.body;
    case Kind::analytic:
      return a.expr.source() == b.expr.source() && a.body == b.body && a.singular == b.singular;
    case Kind::supconv: return a.ops == b.ops;
    case Kind::restrict: return a.ops == b.ops && a.body == b.body;
    case Kind::scale:
    case Kind::shift: return a.param == b.param && a.ops == b.ops;
    default: return false;
  }
}

Roof restrict(const Roof& f, const ConvexBody& body) {
  if (f.dim() != body.ambient()) throw Error(ErrorKind::dimension_mismatch, "restrict: dimensions differ");
  auto n = std::make_shared<Roof::Node>();
  n->kind = Roof::Kind::restrict;
  n->dim = f.dim();
  n->ops = {f};
  n->body = body;
  n->dom = body;
  return Roof(n);
}

Roof add_constant(const Roof& f, const Q& c) {
  Roof base = f;
  Q total = c;
  if (f.kind() == Roof::Kind::shift) {
    base = f.inner();
    total += f.param();
  }
  if (total == 0) return base;
  auto n = std::make_shared<Roof::Node>();
  n->kind = Roof::Kind::shift;
  n->dim = f.dim();
  n->ops = {base};
  n->param = total;
  n->dom = base.domain();
  return Roof(n);
}

Roof scale(const Roof& f, const Q& a) {
  if (a < 0) throw Error(ErrorKind::invalid_input, "scale factor must be nonnegative");
  if (a == 0) return Roof::indicator(Polytope(f.dim(), {QVec(f.dim(), Q(0))}));
  if (a == 1) return f;
  if (f.kind() == Roof::Kind::shift) return add_constant(scale(f.inner(), a), a * f.param());
  Roof base = f;
  Q total = a;
  if (f.kind() == Roof::Kind::scale) {
    base = f.inner();
    total *= f.param();
  }
  auto n = std::make_shared<Roof::Node>();
  n->kind = Roof::Kind::scale;
  n->dim = f.dim();
  n->ops = {base};
  n->param = total;
  n->dom = base.domain().scale(total);
  return Roof(n);
}

Roof sup_convolution(const Roof& f, const Roof& g) {
  if (f.dim() != g.dim()) throw Error(ErrorKind::dimension_mismatch, "sup-convolution: dimensions differ");
  const int d = f.dim();
  if (f.is_exact() && g.is_exact()) {
    Roof a = f.to_pa(), b = g.to_pa();
    std::vector<QVec> m;
    QVec t;
    for (size_t i = 0; i < a.points().size(); ++i)
      for (size_t j = 0; j < b.points().size(); ++j) {
        m.push_back(a.points()[i] + b.points()[j]);
        t.push_back(a.values()[i] + b.values()[j]);
      }
    return Roof::pa(d, m, t);
  }
  if (f.kind() == Roof::Kind::shift) return add_constant(sup_convolution(f.inner(), g), f.param());
  if (g.kind() == Roof::Kind::shift) return add_constant(sup_convolution(f, g.inner()), g.param());
  Q a = 1, b = 1;
  Roof fb = f, gb = g;
  if (f.kind() == Roof::Kind::scale) {
    a = f.param();
    fb = f.inner();
  }
  if (g.kind() == Roof::Kind::scale) {
    b = g.param();
    gb = g.inner();
  }
  if (fb == gb) return scale(fb, a + b);
  auto is_ball_indicator = [](const Roof& r) {
    return r.kind() == Roof::Kind::indicator && r.body().is_ball();
  };
  const Roof* first;
  const Roof* second;
  if (g.is_exact() || (!f.is_exact() && is_ball_indicator(g))) {
    first = &f;
    second = &g;
  } else if (f.is_exact() || is_ball_indicator(f)) {
    first = &g;
    second = &f;
  } else {
    throw Error(ErrorKind::unsupported_combination,
                "sup-convolution of two analytic roofs is not supported");
  }

  SupConvGeom geo;
  ConvexBody dg = second->domain();
  if (dg.is_polytope()) {
    const Polytope& P = dg.polytope();
    if (P.is_empty()) throw Error(ErrorKind::invalid_input, "sup-convolution with an empty roof");
    AffineHull ah = affine_hull(P.vertices(), d);
    geo.z0 = to_double(ah.origin);
    for (const auto& row : ah.basis) geo.B.push_back(to_double(row));
    for (const auto& fc : P.facets()) {
      Lin l;
      for (const auto& row : ah.basis) l.a.push_back(dot(fc.normal, row).get_d());
      l.b = Q(fc.offset - dot(fc.normal, ah.origin)).get_d();
      geo.lin.push_back(l);
    }
    const int k = ah.dim();
    geo.ubox_lo.assign(k, INFINITY);
    geo.ubox_hi.assign(k, -INFINITY);
    for (const auto& v : P.vertices())
      for (int i = 0; i < k; ++i) {
        double u = Q(v[ah.pivots[i]] - ah.origin[ah.pivots[i]]).get_d();
        geo.ubox_lo[i] = std::min(geo.ubox_lo[i], u);
        geo.ubox_hi[i] = std::max(geo.ubox_hi[i], u);
      }
  } else if (dg.is_ball()) {
    geo.z0 = to_double(dg.ball().center);
    double r = dg.ball().radius.get_d();
    Quad q;
    q.p.assign(d, 0.0);
    for (int i = 0; i < d; ++i) {
      DVec e(d, 0.0);
      e[i] = 1;
      geo.B.push_back(e);
    }
    q.B = geo.B;
    q.r = r;
    geo.quad.push_back(q);
    geo.ubox_lo.assign(d, -r);
    geo.ubox_hi.assign(d, r);
  } else {
    throw Error(ErrorKind::unsupported_combination, "sup-convolution with an oracle-bodied roof");
  }
  if (geo.B.size() > 2)
    throw Error(ErrorKind::unsupported_combination,
                "analytic sup-convolution is limited to operands of dimension <= 2");

  ConvexBody df = first->domain();
  if (df.is_polytope()) {
    const Polytope& P = df.polytope();
    if (P.dim() != d)
      throw Error(ErrorKind::unsupported_combination,
                  "analytic sup-convolution needs a full-dimensional analytic domain");
    for (const auto& fc : P.facets()) geo.f_facets.push_back({to_double(fc.normal), fc.offset.get_d()});
  } else if (df.is_ball()) {
    geo.f_ball = true;
    geo.f_center = to_double(df.ball().center);
    geo.f_radius = df.ball().radius.get_d();
  } else {
    throw Error(ErrorKind::unsupported_combination, "sup-convolution with an oracle-bodied roof");
  }

  auto n = std::make_shared<Roof::Node>();
  n->kind = Roof::Kind::supconv;
  n->dim = d;
  n->ops = {*first, *second};
  n->dom = minkowski_sum(df, dg);
  n->geom = std::move(geo);
  return Roof(n);
}

Q sup_exact(const Roof& f) {
  Roof p = f.to_pa();
  return *std::max_element(p.values().begin(), p.values().end());
}

Roof lf_transform(const PAConcave& f) {
  std::vector<QVec> m;
  QVec t;
  for (const auto& p : f.pieces()) {
    m.push_back(p.m);
    t.push_back(-p.c);
  }
  return Roof::pa(f.dim(), m, t);
}

PAConcave lf_transform_inv(const Roof& r) {
  if (!r.is_exact())
    throw Error(ErrorKind::unsupported_combination, "Legendre-Fenchel transform of a non-exact roof");
  Roof p = r.to_pa();
  std::vector<Piece> ps;
  for (size_t i = 0; i < p.points().size(); ++i) ps.push_back({p.points()[i], -p.values()[i]});
  return PAConcave(r.dim(), ps);
}

Polytope stability_set(const PAConcave& f) {
  if (!f.is_conical()) throw Error(ErrorKind::not_conical, "stability set of a non-conical function");
  std::vector<QVec> m;
  for (const auto& p : f.pieces()) m.push_back(p.m);
  return Polytope(f.dim(), m);
}

namespace {

std::string body_string(const ConvexBody& b) {
  if (b.is_polytope()) {
    std::string s = "conv{";
    for (size_t i = 0; i < b.polytope().vertices().size(); ++i)
      s += (i ? ", " : "") + to_string(b.polytope().vertices()[i]);
    return s + "}";
  }
  if (b.is_ball()) return "ball(" + to_string(b.ball().center) + ", " + to_string(b.ball().radius) + ")";
  return "oracle";
}

}  // namespace

std::string to_string(const Roof& r) {
  switch (r.kind()) {
    case Roof::Kind::pa: {
      std::string s = "pa{";
      for (size_t i = 0; i < r.points().size(); ++i)
        s += (i ? ", " : "") + to_string(r.points()[i]) + " -> " + to_string(r.values()[i]);
      return s + "}";
    }
    case Roof::Kind::indicator: return "indicator(" + body_string(r.body()) + ")";
    case Roof::Kind::analytic: return "analytic(" + r.expr().source() + " on " + body_string(r.body()) + ")";
    case Roof::Kind::supconv: return "(" + to_string(r.inner()) + " [+] " + to_string(r.other()) + ")";
    case Roof::Kind::restrict: return "restrict(" + to_string(r.inner()) + ", " + body_string(r.body()) + ")";
    case Roof::Kind::scale: return to_string(r.param()) + " * " + to_string(r.inner());
    case Roof::Kind::shift: return to_string(r.inner()) + " + " + to_string(r.param());
  }
  return "";
}

}  // namespace toric
