#include "toric/fan.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "toric/linalg.hpp"
#include "toric/lp.hpp"

namespace toric {

namespace {

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

QVec unit(int n, int i) {
  QVec e(n, Q(0));
  e[i] = 1;
  return e;
}

QVec mat_vec(const QMat& a, const QVec& x) {
  QVec out;
  for (const auto& row : a) out.push_back(dot(row, x));
  return out;
}

bool on_level_zero(const QVec& v) { return v.back() == 0; }

}  // namespace

std::vector<QVec> cone_rays(int ambient, const QMat& ineq, const QMat& eq) {
  const int re = rank(eq);
  const int need = ambient - 1 - re;
  std::set<QVec> out;
  auto consider = [&](const QMat& M) {
    if (rank(M) != ambient - 1) return;
    QVec z = nullspace(M, ambient).at(0);
    QVec s = mat_vec(ineq, z);
    bool pos = std::all_of(s.begin(), s.end(), [](const Q& x) { return x >= 0; });
    bool neg = std::all_of(s.begin(), s.end(), [](const Q& x) { return x <= 0; });
    if (pos && neg) throw Error(ErrorKind::invalid_input, "cone contains a line");
    if (pos) out.insert(primitive(z));
    if (neg) out.insert(primitive(Q(-1) * z));
  };
  if (need < 0) return {};
  for_each_subset(static_cast<int>(ineq.size()), need, [&](const std::vector<int>& sub) {
    QMat M = eq;
    for (int i : sub) M.push_back(ineq[i]);
    consider(M);
  });
  return {out.begin(), out.end()};
}

Cone Cone::from_generators(int ambient, std::vector<QVec> gens) {
  Cone c;
  c.ambient_ = ambient;
  std::set<QVec> uniq;
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != ambient) throw Error(ErrorKind::dimension_mismatch, "cone generator of wrong dimension");
    if (!is_zero(g)) uniq.insert(primitive(g));
  }
  if (uniq.empty()) {
    for (int i = 0; i < ambient; ++i) c.eq_.push_back(unit(ambient, i));
    return c;
  }
  std::vector<QVec> pts = {QVec(ambient, Q(0))};
  pts.insert(pts.end(), uniq.begin(), uniq.end());
  Hull h = convex_hull(pts, ambient);
  if (std::find(h.vertices.begin(), h.vertices.end(), 0) == h.vertices.end())
    throw Error(ErrorKind::invalid_input, "cone is not strongly convex");
  for (const auto& n : h.eq_normals) c.eq_.push_back(primitive(n));
  std::set<QVec> ineq;
  for (const auto& f : h.facets)
    if (f.offset == 0) ineq.insert(primitive(Q(-1) * f.normal));
  c.ineq_.assign(ineq.begin(), ineq.end());
  for (size_t i = 1; i < pts.size(); ++i) {
    QMat M = c.eq_;
    for (const auto& a : c.ineq_)
      if (dot(a, pts[i]) == 0) M.push_back(a);
    if (rank(M) == ambient - 1) c.rays_.push_back(pts[i]);
  }
  std::sort(c.rays_.begin(), c.rays_.end());
  c.dim_ = h.dim;
  return c;
}

Cone Cone::from_hrep(int ambient, const QMat& ineq, const QMat& eq) {
  return from_generators(ambient, cone_rays(ambient, ineq, eq));
}

bool Cone::contains(const QVec& x) const {
  for (const auto& a : eq_)
    if (dot(a, x) != 0) return false;
  for (const auto& a : ineq_)
    if (dot(a, x) < 0) return false;
  return true;
}

bool Cone::contains(const Cone& c) const {
  return std::all_of(c.rays_.begin(), c.rays_.end(), [&](const QVec& r) { return contains(r); });
}

bool Cone::has_face(const Cone& sub) const {
  QVec p(ambient_, Q(0));
  for (const auto& r : sub.rays_) p = p + r;
  std::vector<QVec> face;
  for (const auto& r : rays_) {
    bool tight = true;
    for (const auto& a : ineq_)
      if (dot(a, p) == 0 && dot(a, r) != 0) tight = false;
    if (tight) face.push_back(r);
  }
  return face == sub.rays_;
}

std::vector<Cone> Cone::facets() const {
  std::set<Cone> out;
  for (const auto& a : ineq_) {
    std::vector<QVec> g;
    for (const auto& r : rays_)
      if (dot(a, r) == 0) g.push_back(r);
    out.insert(from_generators(ambient_, g));
  }
  return {out.begin(), out.end()};
}

std::vector<Cone> Cone::faces() const {
  std::set<Cone> seen = {*this};
  std::vector<Cone> todo = {*this};
  while (!todo.empty()) {
    Cone c = todo.back();
    todo.pop_back();
    for (auto& f : c.facets())
      if (seen.insert(f).second) todo.push_back(f);
  }
  seen.insert(trivial(ambient_));
  return {seen.begin(), seen.end()};
}

Cone intersect(const Cone& a, const Cone& b) {
  if (a.ambient() != b.ambient()) throw Error(ErrorKind::dimension_mismatch, "cones in different spaces");
  QMat ineq = a.ineq(), eq = a.eq();
  ineq.insert(ineq.end(), b.ineq().begin(), b.ineq().end());
  eq.insert(eq.end(), b.eq().begin(), b.eq().end());
  return Cone::from_hrep(a.ambient(), ineq, eq);
}

Fan::Fan(int ambient, std::vector<Cone> cones) : ambient_(ambient) {
  for (const auto& c : cones)
    if (c.ambient() != ambient) throw Error(ErrorKind::dimension_mismatch, "fan: cone in wrong space");
  std::sort(cones.begin(), cones.end());
  cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
  for (size_t i = 0; i < cones.size(); ++i) {
    bool maximal = true;
    for (size_t j = 0; j < cones.size() && maximal; ++j)
      if (i != j && cones[j].contains(cones[i])) maximal = false;
    if (maximal) cones_.push_back(cones[i]);
  }
  for (size_t i = 0; i < cones_.size(); ++i)
    for (size_t j = i + 1; j < cones_.size(); ++j) {
      Cone c = intersect(cones_[i], cones_[j]);
      if (!cones_[i].has_face(c) || !cones_[j].has_face(c))
        throw Error(ErrorKind::invalid_input, "fan: two cones do not meet in a common face");
    }
}

Fan Fan::from_rays(int ambient, const std::vector<std::vector<QVec>>& cones) {
  std::vector<Cone> cs;
  for (const auto& g : cones) cs.push_back(Cone::from_generators(ambient, g));
  return Fan(ambient, cs);
}

std::vector<Cone> Fan::all_cones() const {
  std::set<Cone> all;
  for (const auto& c : cones_)
    for (auto& f : c.faces()) all.insert(f);
  return {all.begin(), all.end()};
}

std::vector<QVec> Fan::rays() const {
  std::set<QVec> r;
  for (const auto& c : cones_)
    for (const auto& v : c.rays()) r.insert(v);
  return {r.begin(), r.end()};
}

int Fan::locate(const QVec& x) const {
  for (size_t i = 0; i < cones_.size(); ++i)
    if (cones_[i].contains(x)) return static_cast<int>(i);
  return -1;
}

bool is_smooth(const Fan& f) {
  for (const auto& c : f.cones()) {
    const int r = static_cast<int>(c.rays().size());
    if (r == 0) continue;
    if (rank(c.rays()) != r) return false;
    mpz_class g = 0;
    for_each_subset(f.ambient(), r, [&](const std::vector<int>& cols) {
      QMat minor;
      for (const auto& v : c.rays()) {
        QVec row;
        for (int j : cols) row.push_back(v[j]);
        minor.push_back(row);
      }
      Q d = det(minor);
      mpz_class dz = d.get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), dz.get_mpz_t());
    });
    if (g != 1) return false;
  }
  return true;
}

namespace {

std::map<Cone, int> wall_counts(const Fan& f) {
  std::map<Cone, int> walls;
  for (const auto& c : f.cones())
    for (const auto& w : c.facets()) ++walls[w];
  return walls;
}

}  // namespace

bool is_complete(const Fan& f) {
  if (f.ambient() > 3) throw Error(ErrorKind::dimension_too_high, "completeness check limited to dim <= 3");
  if (f.cones().empty()) return false;
  if (f.ambient() == 0) return true;
  for (const auto& c : f.cones())
    if (c.dim() != f.ambient()) return false;
  for (const auto& [w, n] : wall_counts(f))
    if (n != 2) return false;
  return true;
}

bool is_halfspace_complete(const Fan& f) {
  if (f.ambient() > 4) throw Error(ErrorKind::dimension_too_high, "completeness check limited to dim <= 3");
  if (f.cones().empty() || f.ambient() == 0) return false;
  for (const auto& c : f.cones()) {
    if (c.dim() != f.ambient()) return false;
    for (const auto& r : c.rays())
      if (r.back() < 0) return false;
  }
  for (const auto& [w, n] : wall_counts(f)) {
    bool flat = w.dim() == f.ambient() - 1 &&
                std::all_of(w.rays().begin(), w.rays().end(), on_level_zero);
    if (n != (flat ? 1 : 2)) return false;
  }
  return true;
}

namespace {

// Strictly concave support function: rays psi_rho and slopes m_sigma with
// equality on rays of sigma and <m_sigma, v> >= psi + 1 off sigma.
bool strictly_concave_feasible(const Fan& f) {
  const int n = f.ambient();
  auto rays = f.rays();
  const int nr = static_cast<int>(rays.size());
  const int nc = static_cast<int>(f.cones().size());
  const int nv = nr + nc * n;
  QMat A, E;
  QVec b, e;
  for (int s = 0; s < nc; ++s) {
    const Cone& c = f.cones()[s];
    for (int r = 0; r < nr; ++r) {
      QVec row(nv, Q(0));
      for (int k = 0; k < n; ++k) row[nr + s * n + k] = rays[r][k];
      row[r] = -1;
      bool in = std::find(c.rays().begin(), c.rays().end(), rays[r]) != c.rays().end();
      if (in) {
        E.push_back(row);
        e.push_back(0);
      } else {
        A.push_back(Q(-1) * row);
        b.push_back(-1);
      }
    }
  }
  return lp_feasible(nv, A, b, E, e);
}

void require_complete(const Fan& f) {
  bool full = f.ambient() <= 3 && is_complete(f);
  if (!full && !is_halfspace_complete(f)) throw Error(ErrorKind::not_complete, "fan is not complete");
}

}  // namespace

bool is_projective(const Fan& f) {
  require_complete(f);
  return strictly_concave_feasible(f);
}

bool refines(const Fan& fine, const Fan& coarse) {
  for (const auto& c : fine.cones()) {
    bool inside = false;
    for (const auto& d : coarse.cones())
      if (d.contains(c)) inside = true;
    if (!inside) return false;
  }
  return true;
}

namespace {

// |x| is covered by |y|: within each maximal cone of x the pieces cut out by y
// close up, every interior wall being shared by exactly two pieces.
bool covered(const Fan& x, const Fan& y) {
  for (const auto& s : x.cones()) {
    std::set<Cone> subs;
    for (const auto& t : y.cones()) {
      Cone c = intersect(s, t);
      if (c.dim() == s.dim()) subs.insert(c);
    }
    if (subs.empty()) return false;
    if (s.dim() == 0) continue;
    std::map<Cone, int> walls;
    for (const auto& c : subs)
      for (const auto& w : c.facets()) {
        bool boundary = false;
        for (const auto& a : s.ineq()) {
          bool tight = std::all_of(w.rays().begin(), w.rays().end(), [&](const QVec& r) { return dot(a, r) == 0; });
          if (tight) boundary = true;
        }
        if (!boundary) ++walls[w];
      }
    for (const auto& [w, n] : walls)
      if (n != 2) return false;
  }
  return true;
}

}  // namespace

Fan common_refinement(const Fan& a, const Fan& b) {
  if (a.ambient() != b.ambient()) throw Error(ErrorKind::dimension_mismatch, "fans in different spaces");
  if (a.ambient() <= 3 && (!covered(a, b) || !covered(b, a)))
    throw Error(ErrorKind::support_mismatch, "fans have different supports");
  std::vector<Cone> cs;
  for (const auto& s : a.cones())
    for (const auto& t : b.cones()) cs.push_back(intersect(s, t));
  return Fan(a.ambient(), cs);
}

Fan canonical_extension(const Fan& f) {
  const int n = f.ambient();
  std::vector<Cone> cs;
  std::vector<Cone> base = f.cones();
  if (base.empty()) base.push_back(Cone::trivial(n));
  for (const auto& c : base) {
    std::vector<QVec> g;
    for (const auto& r : c.rays()) {
      QVec v = r;
      v.push_back(0);
      g.push_back(v);
    }
    g.push_back(unit(n + 1, n));
    cs.push_back(Cone::from_generators(n + 1, g));
  }
  return Fan(n + 1, cs);
}

namespace {

Q det2(const QVec& u, const QVec& v) { return u[0] * v[1] - u[1] * v[0]; }

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

Fan smooth_refinement_2d(const Fan& f) {
  if (f.ambient() != 2) throw Error(ErrorKind::dimension_too_high, "smooth refinement is constructed only in dimension 2");
  std::vector<Cone> out;
  for (const auto& c : f.cones()) {
    if (c.dim() < 2) {
      out.push_back(c);
      continue;
    }
    QVec u = c.rays()[0], v = c.rays()[1];
    if (det2(u, v) < 0) std::swap(u, v);
    while (det2(u, v) > 1) {
      mpz_class a = u[0].get_num(), b = u[1].get_num(), g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      QVec w = {Q(-y), Q(x)};
      mpz_class n = det2(u, v).get_num(), d0 = det2(w, v).get_num();
      mpz_class k = floor_div(-d0 + n - 1, n);
      w = w + Q(k) * u;
      out.push_back(Cone::from_generators(2, {u, w}));
      u = w;
    }
    out.push_back(Cone::from_generators(2, {u, v}));
  }
  return Fan(2, out);
}

Fan normal_fan(const Polytope& p) {
  if (p.is_empty() || p.dim() != p.ambient())
    throw Error(ErrorKind::invalid_input, "normal fan needs a full-dimensional polytope");
  std::vector<Cone> cs;
  for (const auto& v : p.vertices()) {
    std::vector<QVec> g;
    for (const auto& f : p.facets())
      if (dot(f.normal, v) == f.offset) g.push_back(Q(-1) * f.normal);
    cs.push_back(Cone::from_generators(p.ambient(), g));
  }
  return Fan(p.ambient(), cs);
}

Fan projective_space_fan(int d) {
  std::vector<QVec> rays;
  for (int i = 0; i < d; ++i) rays.push_back(unit(d, i));
  rays.push_back(QVec(d, Q(-1)));
  std::vector<std::vector<QVec>> cones;
  for (int skip = 0; skip <= d; ++skip) {
    std::vector<QVec> g;
    for (int i = 0; i <= d; ++i)
      if (i != skip) g.push_back(rays[i]);
    cones.push_back(g);
  }
  return Fan::from_rays(d, cones);
}

SupportFunction::SupportFunction(Fan fan, std::vector<QVec> slopes) : fan_(std::move(fan)), m_(std::move(slopes)) {
  if (m_.size() != fan_.cones().size()) throw Error(ErrorKind::invalid_input, "one slope per maximal cone required");
  for (size_t i = 0; i < m_.size(); ++i)
    for (size_t j = i + 1; j < m_.size(); ++j) {
      Cone c = intersect(fan_.cones()[i], fan_.cones()[j]);
      for (const auto& r : c.rays())
        if (dot(m_[i], r) != dot(m_[j], r))
          throw Error(ErrorKind::invalid_input, "support function slopes disagree on a shared face");
    }
}

SupportFunction SupportFunction::from_values(const Fan& fan, const std::map<QVec, Q>& values) {
  std::vector<QVec> slopes;
  for (const auto& c : fan.cones()) {
    QVec rhs;
    for (const auto& r : c.rays()) {
      auto it = values.find(r);
      rhs.push_back(it == values.end() ? Q(0) : it->second);
    }
    if (c.rays().empty()) {
      slopes.push_back(QVec(fan.ambient(), Q(0)));
      continue;
    }
    auto m = solve(c.rays(), rhs);
    if (!m) throw Error(ErrorKind::invalid_input, "ray values are not linear on a cone");
    slopes.push_back(*m);
  }
  return SupportFunction(fan, slopes);
}

Q SupportFunction::eval(const QVec& x) const {
  int i = fan_.locate(x);
  if (i < 0) throw Error(ErrorKind::point_outside_domain, "point outside the support of the fan");
  return dot(m_[i], x);
}

std::map<QVec, Q> SupportFunction::ray_values() const {
  std::map<QVec, Q> out;
  for (const auto& r : fan_.rays()) out[r] = eval(r);
  return out;
}

namespace {

void check_keys(const Fan& f, const std::map<QVec, Q>& m) {
  auto rays = f.rays();
  for (const auto& [r, a] : m)
    if (!std::binary_search(rays.begin(), rays.end(), r))
      throw Error(ErrorKind::invalid_input, "divisor coefficient on " + to_string(r) + " which is not a ray");
}

}  // namespace

SupportFunction support_from_divisor(const Fan& f, const ToricDivisorData& d) {
  if (!is_smooth(f)) throw Error(ErrorKind::not_smooth, "support function from divisor requires a smooth fan");
  check_keys(f, d.horizontal);
  std::map<QVec, Q> vals;
  for (const auto& [r, a] : d.horizontal) vals[r] = -a;
  return SupportFunction::from_values(f, vals);
}

SupportFunction support_from_divisor(const Fan& f, const ToricDivisorData& d, const std::string& prime) {
  if (!is_smooth(f)) throw Error(ErrorKind::not_smooth, "support function from divisor requires a smooth fan");
  check_keys(f, d.horizontal);
  const int n = f.ambient();
  Fan can = canonical_extension(f);
  std::map<QVec, Q> vals;
  for (const auto& [r, a] : d.horizontal) {
    QVec v = r;
    v.push_back(0);
    vals[v] = -a;
  }
  auto it = d.vertical.find(prime);
  if (it != d.vertical.end()) {
    for (const auto& [w, b] : it->second) {
      if (w != unit(n + 1, n))
        throw Error(ErrorKind::invalid_input, "canonical extension has the single vertical ray (0,1)");
      vals[w] = -b;
    }
  }
  return SupportFunction::from_values(can, vals);
}

ToricDivisorData divisor_from_support(const SupportFunction& s) {
  ToricDivisorData d;
  for (const auto& [r, v] : s.ray_values()) d.horizontal[r] = -v;
  return d;
}

bool is_relatively_nef(const SupportFunction& s) {
  auto vals = s.ray_values();
  for (const auto& m : s.slopes())
    for (const auto& [r, v] : vals)
      if (dot(m, r) < v) return false;
  return true;
}

bool is_ample(const SupportFunction& s) {
  require_complete(s.fan());
  auto vals = s.ray_values();
  for (size_t i = 0; i < s.slopes().size(); ++i) {
    const Cone& c = s.fan().cones()[i];
    for (const auto& [r, v] : vals) {
      Q lhs = dot(s.slopes()[i], r);
      bool in = std::binary_search(c.rays().begin(), c.rays().end(), r);
      if (in ? lhs != v : lhs <= v) return false;
    }
  }
  return true;
}

bool is_effective(const SupportFunction& s) {
  for (const auto& [r, v] : s.ray_values())
    if (v > 0) return false;
  return true;
}

bool is_effective(const std::vector<PAConcave>& gammas) {
  // sup gamma = min { sum l_i c_i : sum l_i m_i = 0, sum l_i = 1, l >= 0 }.
  for (const auto& g : gammas) {
    const int n = static_cast<int>(g.pieces().size());
    QMat E, A;
    QVec f, b;
    for (int k = 0; k < g.dim(); ++k) {
      QVec row(n);
      for (int i = 0; i < n; ++i) row[i] = g.pieces()[i].m[k];
      E.push_back(row);
      f.push_back(0);
    }
    E.push_back(QVec(n, Q(1)));
    f.push_back(1);
    for (int i = 0; i < n; ++i) {
      A.push_back(Q(-1) * unit(n, i));
      b.push_back(0);
    }
    QVec obj(n);
    for (int i = 0; i < n; ++i) obj[i] = -g.pieces()[i].c;
    auto r = lp_maximize(obj, A, b, E, f);
    if (r.status != LPStatus::optimal || -r.value > 0) return false;
  }
  return true;
}

PAConcave to_pa(const SupportFunction& s) {
  if (!is_relatively_nef(s)) throw Error(ErrorKind::precondition, "support function is not concave");
  std::vector<Piece> ps;
  for (const auto& m : s.slopes()) ps.push_back({m, Q(0)});
  return PAConcave(s.fan().ambient(), ps);
}

PAConcave level_one(const SupportFunction& phi) {
  if (!is_relatively_nef(phi)) throw Error(ErrorKind::precondition, "support function is not concave");
  const int n = phi.fan().ambient() - 1;
  std::vector<Piece> ps;
  for (const auto& m : phi.slopes()) ps.push_back({QVec(m.begin(), m.begin() + n), m[n]});
  return PAConcave(n, ps);
}

Fan ArithmeticFan::at(const std::string& prime) const {
  auto it = exceptional.find(prime);
  return it == exceptional.end() ? canonical_extension(base) : it->second;
}

bool ValidationReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
}

namespace {

CheckItem guarded(const std::string& name, const std::function<bool()>& fn) {
  CheckItem c{name, false, ""};
  try {
    c.pass = fn();
  } catch (const Error& e) {
    c.detail = std::string(error_kind_name(e.kind())) + ": " + e.what();
  }
  return c;
}

Fan level_zero_slice(const Fan& f) {
  const int n = f.ambient() - 1;
  std::vector<Cone> cs;
  for (const auto& c : f.all_cones()) {
    if (!std::all_of(c.rays().begin(), c.rays().end(), on_level_zero)) continue;
    std::vector<QVec> g;
    for (const auto& r : c.rays()) g.push_back(QVec(r.begin(), r.begin() + n));
    cs.push_back(Cone::from_generators(n, g));
  }
  return Fan(n, cs);
}

bool compatible(const QMat& M, const Fan& a, const Fan& b) {
  for (const auto& c : a.cones()) {
    bool found = false;
    for (const auto& d : b.cones()) {
      bool all = true;
      for (const auto& r : c.rays())
        if (!d.contains(mat_vec(M, r))) all = false;
      if (all) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool is_identity(const QMat& M) {
  for (size_t i = 0; i < M.size(); ++i) {
    if (M[i].size() != M.size()) return false;
    for (size_t j = 0; j < M[i].size(); ++j)
      if (M[i][j] != (i == j ? 1 : 0)) return false;
  }
  return true;
}

}  // namespace

ValidationReport validate_arithmetic_fan(const ArithmeticFan& af) {
  ValidationReport rep;
  rep.items.push_back(guarded("base_smooth", [&] { return is_smooth(af.base); }));
  rep.items.push_back(guarded("base_projective", [&] { return is_complete(af.base) && is_projective(af.base); }));
  Fan can = canonical_extension(af.base);
  bool refines_can = true;
  for (const auto& [p, f] : af.exceptional) {
    rep.items.push_back(guarded("projective[" + p + "]", [&] {
      if (f.ambient() != af.base.ambient() + 1) return false;
      return is_halfspace_complete(f) && is_projective(f);
    }));
    rep.items.push_back(guarded("slice[" + p + "]", [&] {
      if (f.ambient() != af.base.ambient() + 1) return false;
      return level_zero_slice(f) == af.base;
    }));
    bool r = false;
    try {
      r = f.ambient() == can.ambient() && refines(f, can);
    } catch (const Error&) {
    }
    refines_can = refines_can && r;
  }
  CheckItem fin{"finite_exceptional", true, std::to_string(af.exceptional.size()) + " listed primes"};
  rep.items.push_back(fin);
  rep.effectivity = rep.ok() && refines_can ? "effective" : "unknown";
  return rep;
}

QMat FanMorphism::at(const std::string& prime) const {
  auto it = per_prime.find(prime);
  if (it != per_prime.end()) return it->second;
  const size_t n2 = phi.size(), n1 = n2 ? phi[0].size() : 0;
  QMat M(n2 + 1, QVec(n1 + 1, Q(0)));
  for (size_t i = 0; i < n2; ++i)
    for (size_t j = 0; j < n1; ++j) M[i][j] = phi[i][j];
  M[n2][n1] = 1;
  return M;
}

ValidationReport validate_fan_morphism(const FanMorphism& m, const ArithmeticFan& src, const ArithmeticFan& dst) {
  ValidationReport rep;
  const size_t n1 = src.base.ambient(), n2 = dst.base.ambient();
  bool shape = m.phi.size() == n2 &&
               std::all_of(m.phi.begin(), m.phi.end(), [&](const QVec& r) { return r.size() == n1 && is_integral(r); });
  for (const auto& [p, M] : m.per_prime)
    shape = shape && M.size() == n2 + 1 &&
            std::all_of(M.begin(), M.end(), [&](const QVec& r) { return r.size() == n1 + 1 && is_integral(r); });
  rep.items.push_back({"integral_shapes", shape, ""});
  if (!shape) {
    rep.effectivity = "unknown";
    return rep;
  }

  std::set<std::string> primes;
  for (const auto& [p, f] : src.exceptional) primes.insert(p);
  for (const auto& [p, f] : dst.exceptional) primes.insert(p);
  for (const auto& [p, M] : m.per_prime) primes.insert(p);

  auto check_prime = [&](const std::string& label, const QMat& M, const Fan& a, const Fan& b) {
    rep.items.push_back(guarded("compatible[" + label + "]", [&] {
      QVec last = M.back();
      bool preimage = last.back() > 0;
      for (size_t j = 0; j + 1 < last.size(); ++j) preimage = preimage && last[j] == 0;
      return preimage && compatible(M, a, b);
    }));
  };
  for (const auto& p : primes) check_prime(p, m.at(p), src.at(p), dst.at(p));
  check_prime("generic", m.at(""), canonical_extension(src.base), canonical_extension(dst.base));

  rep.items.push_back(guarded("generic_map", [&] {
    bool preimage = !is_complete(dst.base) || is_complete(src.base);
    return preimage && compatible(m.phi, src.base, dst.base);
  }));
  bool restricts = true;
  for (const auto& [p, M] : m.per_prime) {
    for (size_t i = 0; i < n2; ++i)
      for (size_t j = 0; j < n1; ++j) restricts = restricts && M[i][j] == m.phi[i][j];
    for (size_t j = 0; j < n1; ++j) restricts = restricts && M[n2][j] == 0;
  }
  rep.items.push_back({"restriction", restricts, ""});
  rep.items.push_back({"canonical_outside_finite_set", true, std::to_string(primes.size()) + " primes in S"});

  bool ident = n1 == n2 && is_identity(m.phi);
  for (const auto& [p, M] : m.per_prime) ident = ident && is_identity(M);
  rep.refinement = ident && rep.ok();
  rep.effectivity = "unknown";
  return rep;
}

ToricDivisorData weil_decomposition(const ArithmeticFan& af, const std::map<std::string, PAConcave>& gammas) {
  if (!is_smooth(af.base)) throw Error(ErrorKind::not_smooth, "base fan is not smooth");
  for (const auto& [p, f] : af.exceptional)
    if (!is_smooth(f)) throw Error(ErrorKind::not_smooth, "exceptional fan at " + p + " is not smooth");
  const int n = af.base.ambient();
  ToricDivisorData d;
  std::optional<PAConcave> rec;
  for (const auto& [p, g] : gammas) {
    if (g.dim() != n) throw Error(ErrorKind::dimension_mismatch, "gamma of wrong dimension");
    PAConcave r = g.recession();
    if (rec && *rec != r) throw Error(ErrorKind::invalid_input, "recession functions differ between places");
    rec = r;
  }
  for (const auto& r : af.base.rays()) d.horizontal[r] = rec ? -rec->eval(r) : Q(0);

  for (const auto& [p, g] : gammas) {
    Fan f = af.at(p);
    auto homog = [&](const QVec& w) {
      QVec x(w.begin(), w.begin() + n);
      Q best;
      bool first = true;
      for (const auto& pc : g.pieces()) {
        Q v = dot(pc.m, x) + pc.c * w[n];
        if (first || v < best) best = v;
        first = false;
      }
      return best;
    };
    for (const auto& c : f.cones()) {
      bool linear = false;
      for (const auto& pc : g.pieces()) {
        bool tight = true;
        for (const auto& w : c.rays()) {
          QVec x(w.begin(), w.begin() + n);
          if (dot(pc.m, x) + pc.c * w[n] != homog(w)) tight = false;
        }
        if (tight) linear = true;
      }
      if (!linear) throw Error(ErrorKind::invalid_input, "gamma at " + p + " is not affine on the cells of its fan");
    }
    for (const auto& w : f.rays()) {
      if (w[n] <= 0) continue;
      Q b = -homog(w);
      if (b != 0) d.vertical[p][w] = b;
    }
  }
  return d;
}

}  // namespace toric
