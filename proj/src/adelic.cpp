#include "toric/adelic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "toric/lp.hpp"

namespace toric {

Place Place::infinite(int index, const Q& weight) {
  if (weight <= 0 || weight > 1) throw Error(ErrorKind::invalid_input, "place weight must lie in (0, 1]");
  return {Kind::infinite, index == 0 ? "inf" : "inf" + std::to_string(index), weight};
}

Place Place::finite(const std::string& label, const Q& weight) {
  if (weight <= 0 || weight > 1) throw Error(ErrorKind::invalid_input, "place weight must lie in (0, 1]");
  if (label.empty() || label.rfind("inf", 0) == 0)
    throw Error(ErrorKind::invalid_input, "finite place label '" + label + "' is reserved or empty");
  return {Kind::finite, label, weight};
}

std::string to_string(const Place& p) {
  std::string s = p.label;
  if (p.weight != 1) s += " (weight " + to_string(p.weight) + ")";
  return s;
}

// ---------------------------------------------------------------------------
// Families

namespace {

Polytope unit_interval() { return Polytope(1, {{Q(0)}, {Q(1)}}); }
Ball unit_disk() { return Ball{{Q(0), Q(0)}, Q(1)}; }

// Rational upper bound for pi.
const Q& pi_upper() {
  static const Q p = frac(355, 113);
  return p;
}

std::string substitute(const std::string& templ, long n) {
  std::string out;
  const std::string key = "{n}";
  size_t pos = 0;
  while (true) {
    size_t k = templ.find(key, pos);
    if (k == std::string::npos) {
      out += templ.substr(pos);
      return out;
    }
    out += templ.substr(pos, k - pos) + std::to_string(n);
    pos = k + key.size();
  }
}

void check_alpha(const Q& alpha) {
  if (alpha >= 0) throw Error(ErrorKind::invalid_input, "family exponent alpha must be negative");
}

}  // namespace

FamilyDescriptor FamilyDescriptor::simplex_ramp(int start) {
  FamilyDescriptor f;
  f.kind_ = Kind::simplex_ramp;
  f.start_ = start;
  f.body_ = unit_interval();
  f.bound_ = GeometricBound{frac(1, 2), frac(1, 4)};
  return f;
}

FamilyDescriptor FamilyDescriptor::power_cusp(const Q& alpha, int start) {
  check_alpha(alpha);
  FamilyDescriptor f;
  f.kind_ = Kind::power_cusp;
  f.alpha_ = alpha;
  f.start_ = start;
  f.body_ = unit_interval();
  f.singular_ = true;
  if (alpha > -1) f.bound_ = GeometricBound{Q(-alpha / (alpha + 1)), frac(1, 2)};
  return f;
}

FamilyDescriptor FamilyDescriptor::radial_power_cusp(const Q& alpha, int start) {
  check_alpha(alpha);
  FamilyDescriptor f;
  f.kind_ = Kind::radial_power_cusp;
  f.alpha_ = alpha;
  f.start_ = start;
  f.body_ = unit_disk();
  f.singular_ = true;
  if (alpha > -1) f.bound_ = GeometricBound{Q(2 * pi_upper() * -alpha / (alpha + 1)), frac(1, 2)};
  return f;
}

FamilyDescriptor FamilyDescriptor::expression(const std::string& templ, ConvexBody body,
                                              bool singular_boundary,
                                              std::optional<Q> vanishing_factor,
                                              std::optional<GeometricBound> bound, int start) {
  FamilyDescriptor f;
  f.kind_ = Kind::expression;
  f.templ_ = templ;
  f.body_ = std::move(body);
  f.singular_ = singular_boundary;
  f.vanishing_factor_ = vanishing_factor;
  f.bound_ = bound;
  f.start_ = start;
  if (bound && (bound->constant < 0 || bound->ratio <= 0 || bound->ratio >= 1))
    throw Error(ErrorKind::invalid_input, "tail bound needs constant >= 0 and ratio in (0, 1)");
  parse_roof_expression(substitute(templ, start), f.body_.ambient());
  return f;
}

int FamilyDescriptor::dim() const { return body_.ambient(); }

Roof FamilyDescriptor::generator(long n) const {
  if (n < start_) throw Error(ErrorKind::invalid_input, "family index below its start");
  switch (kind_) {
    case Kind::simplex_ramp: {
      Q h = pow2(-n);
      return Roof::pa(1, {{Q(0)}, {h}, {Q(1)}}, {Q(-h), Q(0), Q(0)});
    }
    case Kind::power_cusp: {
      std::string a = to_string(alpha_);
      std::string e = "min(0, 1 - pow(2, " + to_string(Q(n * alpha_)) + ")*pow(y1, " + a + "))";
      return Roof::analytic(parse_roof_expression(e, 1), body_, true);
    }
    case Kind::radial_power_cusp: {
      std::string a = to_string(alpha_);
      std::string e = "min(0, 1 - pow(2, " + to_string(Q(n * alpha_)) +
                      ")*pow(1 - sqrt(y1*y1 + y2*y2), " + a + "))";
      return Roof::analytic(parse_roof_expression(e, 2), body_, true);
    }
    case Kind::expression:
      return Roof::analytic(parse_roof_expression(substitute(templ_, n), body_.ambient()), body_,
                            singular_);
    case Kind::derived: return gen_(n);
  }
  return {};
}

std::optional<ConvexBody> FamilyDescriptor::vanishing_region(long n) const {
  switch (kind_) {
    case Kind::simplex_ramp:
    case Kind::power_cusp: return ConvexBody(Polytope(1, {{pow2(-n)}, {Q(1)}}));
    case Kind::radial_power_cusp: {
      Q r = 1 - pow2(-n);
      if (r < 0) return std::nullopt;
      return ConvexBody(Ball{{Q(0), Q(0)}, r});
    }
    case Kind::expression:
      if (!vanishing_factor_) return std::nullopt;
      return shrink(body_, *vanishing_factor_ * pow2(-n));
    case Kind::derived: return van_(n);
  }
  return std::nullopt;
}

std::optional<Q> FamilyDescriptor::tail_bound(long N) const {
  if (!bound_) return std::nullopt;
  long from = std::max<long>(N + 1, start_);
  Q r = 1;
  for (long i = 0; i < from; ++i) r *= bound_->ratio;
  return Q(weight_ * bound_->constant * r / (1 - bound_->ratio));
}

std::optional<Q> FamilyDescriptor::exact_tail(const QVec& y, long N) const {
  if (kind_ != Kind::simplex_ramp || y.size() != 1) return std::nullopt;
  long from = std::max<long>(N + 1, start_);
  if (y[0] <= 0) return Q(-weight_ * pow2(-(from - 1)));
  Q s = 0;
  for (long n = from; pow2(-n) > y[0]; ++n) s += y[0] - pow2(-n);
  return Q(weight_ * s);
}

std::vector<double> FamilyDescriptor::breaks(long n) const {
  switch (kind_) {
    case Kind::simplex_ramp:
    case Kind::power_cusp: return {std::ldexp(1.0, static_cast<int>(-n))};
    case Kind::radial_power_cusp: return {1 - std::ldexp(1.0, static_cast<int>(-n))};
    default: return {};
  }
}

Place FamilyDescriptor::place(long n) const {
  if (infinite_index_ && n == *infinite_index_) return Place::infinite(0, weight_);
  return Place::finite("v" + std::to_string(n), weight_);
}

std::optional<long> FamilyDescriptor::index_of(const std::string& label) const {
  if (label == "inf") {
    if (infinite_index_ && *infinite_index_ >= start_) return *infinite_index_;
    return std::nullopt;
  }
  if (label.size() < 2 || label[0] != 'v') return std::nullopt;
  for (size_t i = 1; i < label.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) return std::nullopt;
  if (label.size() > 10 || (label.size() > 2 && label[1] == '0')) return std::nullopt;
  long n = std::stol(label.substr(1));
  if (n < start_ || (infinite_index_ && n == *infinite_index_)) return std::nullopt;
  return n;
}

FamilyDescriptor FamilyDescriptor::derive(
    std::function<Roof(long, const Roof&)> t,
    std::function<std::optional<ConvexBody>(long, const std::optional<ConvexBody>&)> v) const {
  FamilyDescriptor f = *this;
  FamilyDescriptor base = *this;
  f.kind_ = Kind::derived;
  f.bound_.reset();
  f.gen_ = [base, t](long n) { return t(n, base.generator(n)); };
  f.van_ = [base, v](long n) { return v(n, base.vanishing_region(n)); };
  return f;
}

// ---------------------------------------------------------------------------
// Divisors

AdelicDivisor AdelicDivisor::canonical(const ConvexBody& delta) {
  AdelicDivisor D;
  D.dim = delta.ambient();
  D.domain = delta;
  D.default_roof = Roof::indicator(delta);
  return D;
}

AdelicDivisor& AdelicDivisor::set(const Place& p, const Roof& r) {
  auto it = std::lower_bound(places.begin(), places.end(), p.label,
                             [](const PlaceRoof& a, const std::string& l) { return a.place.label < l; });
  if (it != places.end() && it->place.label == p.label) {
    *it = {p, r};
  } else {
    places.insert(it, {p, r});
  }
  return *this;
}

const PlaceRoof* AdelicDivisor::find(const std::string& label) const {
  for (const auto& pr : places)
    if (pr.place.label == label) return &pr;
  return nullptr;
}

Roof AdelicDivisor::roof_at(const std::string& label) const {
  if (const PlaceRoof* pr = find(label)) return pr->roof;
  if (family)
    if (auto n = family->index_of(label)) return family->generator(*n);
  return default_roof;
}

void AdelicDivisor::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::invalid_input, m); };
  if (dim < 1) bad("divisor dimension must be positive");
  if (domain.ambient() != dim) bad("domain dimension differs from the divisor dimension");
  if (domain.is_empty()) bad("empty domain");
  if (default_roof.dim() != dim) bad("default roof has the wrong dimension");
  std::set<std::string> seen;
  for (const auto& pr : places) {
    if (!seen.insert(pr.place.label).second) bad("duplicate place '" + pr.place.label + "'");
    if (pr.roof.dim() != dim) bad("roof at place '" + pr.place.label + "' has the wrong dimension");
    if (family && family->index_of(pr.place.label))
      bad("place '" + pr.place.label + "' is also a family place");
  }
  for (size_t i = 1; i < places.size(); ++i)
    if (places[i - 1].place.label > places[i].place.label) bad("places must be sorted by label");
  for (const auto& s : S)
    if (s.rfind("inf", 0) == 0) bad("S lists finite places only");
  if (family && family->dim() != dim) bad("family has the wrong dimension");
}

bool SemipositiveReport::ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DVec pull(const DVec& x, const DVec& c, double t) {
  DVec y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = c[i] + t * (x[i] - c[i]);
  return y;
}

// Random points of a body by rejection from its bounding box, plus vertices.
std::vector<DVec> sample_body(const ConvexBody& b, int count, std::mt19937_64& rng) {
  std::vector<DVec> out;
  if (b.is_polytope())
    for (const auto& v : b.polytope().vertices()) out.push_back(to_double(v));
  if (b.dim() < b.ambient()) {
    if (b.is_polytope()) {
      const auto& vs = b.polytope().vertices();
      std::uniform_real_distribution<double> u(0, 1);
      for (int k = 0; k < count; ++k) {
        DVec w(vs.size());
        double s = 0;
        for (auto& x : w) s += (x = -std::log(u(rng) + 1e-300));
        DVec p(b.ambient(), 0.0);
        for (size_t i = 0; i < vs.size(); ++i)
          for (int j = 0; j < b.ambient(); ++j) p[j] += w[i] / s * vs[i][j].get_d();
        out.push_back(p);
      }
    }
    return out;
  }
  auto [lo, hi] = b.bounding_box();
  std::vector<std::uniform_real_distribution<double>> u;
  for (size_t i = 0; i < lo.size(); ++i) u.emplace_back(lo[i], hi[i]);
  int got = 0;
  for (int tries = 0; got < count && tries < 200 * count; ++tries) {
    DVec p(lo.size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = u[i](rng);
    if (b.contains(p)) {
      out.push_back(p);
      ++got;
    }
  }
  return out;
}

bool is_pa_kind(const Roof& r) { return r.is_exact(); }

// Effective-domain closure of r equals delta.
Verdict domain_verdict(const std::string& where, const Roof& r, const ConvexBody& delta,
                       std::mt19937_64& rng) {
  Verdict v{"ii", false, true, where};
  if (r.is_exact()) {
    if (!delta.is_polytope()) {
      v.detail += ": exact roof on a non-polytope domain";
      return v;
    }
    Roof p = r.to_pa();
    v.pass = p.base() == delta.polytope();
    v.detail += v.pass ? ": domain equals the polytope" : ": domain differs from the polytope";
    return v;
  }
  v.exact = false;
  ConvexBody dom = r.domain();
  DVec c = delta.inner_point();
  for (const auto& x : sample_body(delta, 256, rng)) {
    DVec y = pull(x, c, 0.999);
    if (!dom.contains(y, 1e-9) || r.eval(y) == -kInf) {
      v.detail += ": roof is -inf at an interior sample of the domain";
      return v;
    }
  }
  DVec cd = dom.inner_point();
  for (const auto& x : sample_body(dom, 256, rng)) {
    DVec y = pull(x, cd, 0.999);
    if (!delta.contains(y, 1e-9)) {
      v.detail += ": roof is defined outside the domain";
      return v;
    }
  }
  v.pass = true;
  v.detail += ": domain agrees on 512 samples";
  return v;
}

// Midpoint concavity of an analytic roof on sampled pairs.
std::optional<Verdict> concavity_verdict(const std::string& where, const Roof& r,
                                         const ConvexBody& delta, std::mt19937_64& rng) {
  if (r.is_exact()) return std::nullopt;
  Verdict v{"concave", true, false, where};
  auto pts = sample_body(delta, 128, rng);
  DVec c = delta.inner_point();
  for (size_t i = 0; i + 1 < pts.size(); i += 2) {
    DVec a = pull(pts[i], c, 0.999), b = pull(pts[i + 1], c, 0.999), m(a.size());
    for (size_t j = 0; j < a.size(); ++j) m[j] = 0.5 * (a[j] + b[j]);
    double fa = r.eval(a), fb = r.eval(b), fm = r.eval(m);
    if (fa == -kInf || fb == -kInf) continue;
    if (fm < 0.5 * (fa + fb) - 1e-9 * (1 + std::fabs(fa) + std::fabs(fb))) {
      v.pass = false;
      v.detail += ": midpoint inequality fails (sampled)";
      return v;
    }
  }
  v.detail += ": midpoint inequality holds on sampled pairs";
  return v;
}

Polytope linf_box(int d, const Q& eps) { return Polytope::box(QVec(d, Q(-eps)), QVec(d, eps)); }

// Supremum when it is exactly computable.
std::optional<Q> known_sup(const Roof& r) {
  if (r.kind() == Roof::Kind::indicator) return Q(0);
  if (r.kind() == Roof::Kind::shift) {
    auto s = known_sup(r.inner());
    if (s) return Q(*s + r.param());
    return s;
  }
  if (is_pa_kind(r)) return sup_exact(r);
  return std::nullopt;
}

// Delta inside V + B(0, eps); exact where decidable.
std::optional<bool> covered(const ConvexBody& delta, const ConvexBody& V, const Q& eps,
                            std::mt19937_64& rng, bool& exact) {
  exact = true;
  const int d = delta.ambient();
  if (delta.is_polytope() && V.is_polytope()) {
    Polytope sum = minkowski_sum(V.polytope(), linf_box(d, eps));
    for (const auto& v : delta.polytope().vertices())
      if (!sum.contains(v)) return false;
    return true;
  }
  if (delta.is_ball() && V.is_ball()) {
    Q slack = V.ball().radius + eps - delta.ball().radius;
    if (slack < 0) return false;
    QVec diff = delta.ball().center - V.ball().center;
    return dot(diff, diff) <= slack * slack;
  }
  exact = false;
  if (!V.is_polytope() || d > 2) return std::nullopt;
  double e = eps.get_d();
  for (const auto& y : sample_body(delta, 512, rng))
    if (distance_to(V.polytope(), y) > e) return false;
  return true;
}

}  // namespace

SemipositiveReport check_semipositive(const AdelicDivisor& D, const std::vector<Q>& eps_schedule) {
  D.validate();
  SemipositiveReport rep;
  std::mt19937_64 rng(12345);
  const ConvexBody& delta = D.domain;

  // (i) rational suprema.
  for (const auto& pr : D.places) {
    if (pr.place.is_infinite()) continue;
    Verdict v{"i", false, true, pr.place.label};
    if (auto s = known_sup(pr.roof)) {
      v.pass = true;
      v.detail += ": sup = " + to_string(*s);
    } else {
      v.detail += ": analytic roof at a finite place, supremum not verifiable";
    }
    rep.verdicts.push_back(v);
  }
  {
    Verdict v{"i", false, true, "default"};
    if (auto s = known_sup(D.default_roof)) {
      v.pass = *s == 0;
      v.detail += ": sup = " + to_string(*s);
    } else {
      v.detail += ": analytic default roof, supremum not verifiable";
    }
    rep.verdicts.push_back(v);
  }
  if (D.family) {
    const FamilyDescriptor& F = *D.family;
    Verdict v{"i", true, true, "family"};
    for (long n = F.start(); n < F.start() + 4; ++n) {
      Roof g = F.generator(n);
      if (g.is_exact()) {
        Q s = sup_exact(g);
        if (s != 0) {
          v.pass = false;
          v.detail += ": sup of member " + std::to_string(n) + " is " + to_string(s);
          break;
        }
        continue;
      }
      v.exact = false;
      auto V = F.vanishing_region(n);
      if (!V || V->is_empty()) continue;
      DVec p = V->inner_point();
      if (g.eval(p) != 0) {
        v.pass = false;
        v.detail += ": member " + std::to_string(n) + " is nonzero on its vanishing region";
        break;
      }
    }
    if (v.pass) v.detail += v.exact ? ": members have sup 0" : ": members vanish on declared regions";
    rep.verdicts.push_back(v);
  }

  // (ii) effective domains, with concavity of analytic roofs.
  auto domain_checks = [&](const std::string& where, const Roof& r) {
    rep.verdicts.push_back(domain_verdict(where, r, delta, rng));
    if (auto c = concavity_verdict(where, r, delta, rng)) rep.verdicts.push_back(*c);
  };
  for (const auto& pr : D.places) domain_checks(pr.place.label, pr.roof);
  domain_checks("default", D.default_roof);
  if (D.family) domain_checks("family", D.family->generator(D.family->start()));

  // (iii) tails.
  size_t explicit_finite = 0;
  for (const auto& pr : D.places)
    if (!pr.place.is_infinite()) ++explicit_finite;
  for (const Q& eps : eps_schedule) {
    Verdict v{"iii", false, true, "eps = " + to_string(eps)};
    if (eps <= 0) {
      v.detail += ": eps must be positive";
      rep.verdicts.push_back(v);
      continue;
    }
    const int d = D.dim;
    bool ok = true;
    if (D.default_roof.kind() == Roof::Kind::indicator && D.default_roof.body() == delta) {
      // widened indicator of the domain is 0 on it
    } else if (D.default_roof.is_exact() && delta.is_polytope()) {
      Roof wide = sup_convolution(D.default_roof, Roof::indicator(linf_box(d, eps)));
      for (const auto& y : delta.polytope().vertices()) {
        auto val = wide.eval_exact(y);
        if (!val || *val < 0) ok = false;
      }
    } else {
      v.exact = false;
      Roof wide = sup_convolution(D.default_roof, Roof::indicator(linf_box(d, eps)));
      for (const auto& y : sample_body(delta, 256, rng))
        if (!(wide.eval(y) >= -1e-12)) ok = false;
    }
    if (!ok) {
      v.detail += ": default roof widened by eps is negative on the domain";
      rep.verdicts.push_back(v);
      continue;
    }
    size_t count = explicit_finite;
    if (D.family) {
      const FamilyDescriptor& F = *D.family;
      std::optional<long> found;
      for (long n = F.start(); n < F.start() + 200; ++n) {
        auto V = F.vanishing_region(n);
        if (!V || V->is_empty()) continue;
        bool ex = true;
        auto c = covered(delta, *V, eps, rng, ex);
        if (!c) break;
        v.exact = v.exact && ex;
        if (*c) {
          found = n;
          break;
        }
      }
      if (!found) {
        v.detail += ": no family index beyond which the members vanish up to eps";
        rep.verdicts.push_back(v);
        continue;
      }
      for (long n = F.start(); n < *found; ++n)
        if (!F.place(n).is_infinite()) ++count;
    }
    v.pass = true;
    v.detail += ": |S(eps)| = " + std::to_string(count);
    rep.verdicts.push_back(v);
  }
  return rep;
}

GlobalRoofValue global_roof_eval(const AdelicDivisor& D, const QVec& y, int max_terms) {
  if (static_cast<int>(y.size()) != D.dim)
    throw Error(ErrorKind::dimension_mismatch, "global roof: point has the wrong dimension");
  if (!D.domain.contains(y)) throw Error(ErrorKind::point_outside_domain, "point " + to_string(y) + " is outside the domain");
  GlobalRoofValue out;
  std::optional<Q> ex = Q(0);
  double val = 0;
  const DVec yd = to_double(y);
  auto minus_inf = [&] {
    out.minus_infinity = true;
    out.exact.reset();
    out.value = -kInf;
    return out;
  };
  auto add = [&](const Roof& r, const Q& w) {
    if (r.is_exact()) {
      auto v = r.eval_exact(y);
      if (!v) return false;
      if (ex) *ex += w * *v;
      val += Q(w * *v).get_d();
      return true;
    }
    double v = r.eval(yd);
    if (v == -kInf) return false;
    ex.reset();
    val += w.get_d() * v;
    return true;
  };
  for (const auto& pr : D.places) {
    ++out.terms;
    if (!add(pr.roof, pr.place.weight)) return minus_inf();
  }
  if (D.default_roof.is_exact()) {
    auto v = D.default_roof.eval_exact(y);
    if (!v || *v < 0) return minus_inf();
    if (*v > 0) throw Error(ErrorKind::invalid_input, "default roof is positive at infinitely many places");
  } else {
    double v = D.default_roof.eval(yd);
    if (v < -1e-12) return minus_inf();
    if (v > 1e-12) throw Error(ErrorKind::invalid_input, "default roof is positive at infinitely many places");
  }
  if (D.family) {
    const FamilyDescriptor& F = *D.family;
    long n = F.start();
    bool done = false;
    double last = 0;
    for (; n < F.start() + max_terms; ++n) {
      auto V = F.vanishing_region(n);
      if (V && V->contains(y)) {
        done = true;
        break;
      }
      Roof g = F.generator(n);
      double before = val;
      ++out.terms;
      if (!add(g, F.weight())) return minus_inf();
      last = val - before;
    }
    if (!done) {
      if (auto tail = F.exact_tail(y, n - 1)) {
        if (ex) *ex += *tail;
        val += tail->get_d();
      } else {
        out.truncated = true;
        out.error = std::fabs(last);
      }
    }
  }
  out.exact = ex;
  out.value = ex ? ex->get_d() : val;
  return out;
}

const char* to_string(NefVerdict::Kind k) {
  switch (k) {
    case NefVerdict::Kind::nef: return "Nef";
    case NefVerdict::Kind::not_nef: return "NotNef";
    case NefVerdict::Kind::numerically_nef: return "NumericallyNef";
  }
  return "?";
}

NefVerdict check_nef(const AdelicDivisor& D, int grid) {
  D.validate();
  NefVerdict out;
  const ConvexBody& delta = D.domain;
  bool exact_data = delta.is_polytope() && D.default_roof.is_exact();
  for (const auto& pr : D.places) exact_data = exact_data && pr.roof.is_exact();
  if (D.family) exact_data = exact_data && D.family->generator(D.family->start()).is_exact();

  if (exact_data) {
    std::vector<QVec> pts = delta.polytope().vertices();
    for (const auto& pr : D.places) {
      Roof pa = pr.roof.to_pa();
      for (const auto& p : pa.points())
        if (delta.contains(p)) pts.push_back(p);
    }
    bool all_exact = true;
    for (const auto& p : pts) {
      GlobalRoofValue g = global_roof_eval(D, p);
      if (g.minus_infinity || (g.exact && *g.exact < 0)) {
        out.kind = NefVerdict::Kind::not_nef;
        out.witness = to_double(p);
        out.witness_value = g.value;
        out.detail = "global roof is negative at " + to_string(p);
        return out;
      }
      if (!g.exact) all_exact = false;
    }
    if (all_exact) {
      out.detail = "global roof >= 0 at the " + std::to_string(pts.size()) +
                   " vertices and cell vertices of the domain";
      return out;
    }
  }

  out.exact = false;
  auto [lo, hi] = delta.bounding_box();
  const int d = D.dim;
  const int g = d <= 2 ? grid : std::max(8, grid / 4);
  std::vector<QVec> pts;
  if (delta.is_polytope()) pts = delta.polytope().vertices();
  std::vector<int> idx(d, 0);
  while (true) {
    QVec p(d);
    for (int j = 0; j < d; ++j) {
      Q a = from_double(lo[j]), b = from_double(hi[j]);
      p[j] = a + Q(idx[j]) / g * (b - a);
    }
    if (delta.contains(p)) pts.push_back(p);
    int j = 0;
    while (j < d && ++idx[j] > g) idx[j++] = 0;
    if (j == d) break;
  }
  for (const auto& p : pts) {
    GlobalRoofValue v = global_roof_eval(D, p);
    if (v.minus_infinity || v.value < -1e-12 - v.error) {
      out.kind = NefVerdict::Kind::not_nef;
      out.witness = to_double(p);
      out.witness_value = v.value;
      out.detail = "global roof is negative at a grid point (sampled)";
      return out;
    }
  }
  out.kind = NefVerdict::Kind::numerically_nef;
  out.detail = "global roof >= 0 on " + std::to_string(pts.size()) + " grid points (sampled)";
  return out;
}

// ---------------------------------------------------------------------------
// Boundary divisors and norms

const PADiff& ModelDivisor::at(const std::string& label) const {
  for (const auto& [p, g] : gammas)
    if (p.label == label) return g;
  return fallback;
}

BoundaryDivisor standard_boundary_divisor(int d, const std::vector<std::string>& S) {
  if (d < 1) throw Error(ErrorKind::invalid_input, "boundary divisor needs d >= 1");
  Fan f = projective_space_fan(d);
  ToricDivisorData data;
  for (const auto& r : f.rays()) data.horizontal[r] = 1;
  BoundaryDivisor B;
  B.psi = to_pa(support_from_divisor(f, data));
  B.delta = stability_set(B.psi);
  PAConcave shifted = B.psi.add_constant(-1);

  std::vector<Place> special{Place::infinite()};
  for (const auto& s : S) special.push_back(Place::finite(s));
  B.green.dim = d;
  B.green.fallback = PADiff::of(B.psi);
  for (const auto& p : special) B.green.gammas.push_back({p, PADiff::of(shifted)});

  B.roofs.dim = d;
  B.roofs.domain = B.delta;
  B.roofs.S = S;
  B.roofs.default_roof = lf_transform(B.psi);
  Roof top = lf_transform(shifted);
  for (const auto& p : special) B.roofs.set(p, top);
  return B;
}

namespace {

bool is_concave_data(const PADiff& g) { return g.neg == PAConcave::zero(g.dim()); }

// sup_x min_i (<m_i, x> + c_i).
LPResult pa_sup(const PAConcave& f) {
  const int d = f.dim();
  QVec c(d + 1, Q(0));
  c[d] = 1;
  QMat A;
  QVec b;
  for (const auto& p : f.pieces()) {
    QVec row(d + 1);
    for (int j = 0; j < d; ++j) row[j] = -p.m[j];
    row[d] = 1;
    A.push_back(row);
    b.push_back(p.c);
  }
  return lp_maximize(c, A, b);
}

}  // namespace

std::vector<CheckItem> check_boundary_divisor(const ModelDivisor& B, const std::vector<std::string>& S) {
  std::vector<CheckItem> out;
  std::vector<std::string> special{"inf"};
  special.insert(special.end(), S.begin(), S.end());
  auto is_special = [&](const std::string& l) {
    return std::find(special.begin(), special.end(), l) != special.end();
  };
  for (const auto& l : special) {
    const PADiff& g = B.at(l);
    CheckItem it{"negative at " + l, false, ""};
    if (!is_concave_data(g)) {
      it.detail = "gamma is not concave";
    } else {
      LPResult r = pa_sup(g.pos);
      it.pass = r.status == LPStatus::optimal && r.value < 0;
      it.detail = r.status == LPStatus::optimal ? "sup gamma = " + to_string(r.value) : "sup gamma = +inf";
    }
    out.push_back(it);
  }
  std::vector<std::pair<std::string, const PADiff*>> rest{{"default", &B.fallback}};
  for (const auto& [p, g] : B.gammas)
    if (!is_special(p.label)) rest.push_back({p.label, &g});
  for (const auto& [l, gp] : rest) {
    const PADiff& g = *gp;
    CheckItem it{"zero exactly at the origin at " + l, false, ""};
    if (!is_concave_data(g) || !g.pos.is_conical()) {
      it.detail = "gamma is not a concave conical function";
      out.push_back(it);
      continue;
    }
    std::vector<QVec> slopes;
    for (const auto& p : g.pos.pieces()) slopes.push_back(p.m);
    Polytope P(B.dim, slopes);
    QVec zero(B.dim, Q(0));
    bool interior = P.dim() == B.dim && P.contains(zero);
    for (const auto& f : P.facets())
      if (f.offset == 0) interior = false;
    it.pass = interior;
    it.detail = interior ? "0 is interior to the stability set" : "0 is not interior to the stability set";
    out.push_back(it);
  }
  return out;
}

std::optional<Q> boundary_norm(const ModelDivisor& D, const ModelDivisor& B) {
  if (D.dim != B.dim) throw Error(ErrorKind::dimension_mismatch, "boundary_norm: dimensions differ");
  std::set<std::string> labels;
  for (const auto& [p, g] : D.gammas) labels.insert(p.label);
  for (const auto& [p, g] : B.gammas) labels.insert(p.label);
  auto one = [&](const PADiff& d, const PADiff& b) -> std::optional<Q> {
    if (!is_concave_data(b)) throw Error(ErrorKind::invalid_input, "boundary data must be concave");
    std::vector<Piece> den;
    for (const auto& p : b.pos.pieces()) den.push_back({Q(-1) * p.m, Q(-p.c)});
    return sup_abs_ratio(d, den);
  };
  std::optional<Q> best = one(D.fallback, B.fallback);
  if (!best) return std::nullopt;
  for (const auto& l : labels) {
    auto r = one(D.at(l), B.at(l));
    if (!r) return std::nullopt;
    best = std::max(*best, *r);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Sums and regularization

namespace {

bool is_indicator_of(const Roof& r, const ConvexBody& body) {
  if (r.kind() == Roof::Kind::indicator) return r.body() == body;
  if (!r.is_exact() || !body.is_polytope()) return false;
  Roof p = r.to_pa();
  if (p.base() != body.polytope()) return false;
  return std::all_of(p.values().begin(), p.values().end(), [](const Q& v) { return v == 0; });
}

std::vector<std::string> merged_labels(const AdelicDivisor& a, const AdelicDivisor& b) {
  std::set<std::string> s;
  for (const auto& pr : a.places) s.insert(pr.place.label);
  for (const auto& pr : b.places) s.insert(pr.place.label);
  return {s.begin(), s.end()};
}

Q weight_of(const AdelicDivisor& D, const std::string& label) {
  if (const PlaceRoof* pr = D.find(label)) return pr->place.weight;
  if (D.family && D.family->index_of(label)) return D.family->weight();
  return 1;
}

Place make_place(const std::string& label, const Q& w) {
  return label.rfind("inf", 0) == 0 ? Place{Place::Kind::infinite, label, w} : Place::finite(label, w);
}

}  // namespace

AdelicDivisor add(const AdelicDivisor& a, const AdelicDivisor& b) {
  a.validate();
  b.validate();
  if (a.dim != b.dim) throw Error(ErrorKind::dimension_mismatch, "add: dimensions differ");
  if (a.family && b.family)
    throw Error(ErrorKind::unsupported_combination, "add: both divisors carry a place family");
  AdelicDivisor out;
  out.dim = a.dim;
  out.domain = minkowski_sum(a.domain, b.domain);
  std::set<std::string> S(a.S.begin(), a.S.end());
  S.insert(b.S.begin(), b.S.end());
  out.S.assign(S.begin(), S.end());
  out.default_roof = sup_convolution(a.default_roof, b.default_roof);
  const AdelicDivisor* fam = a.family ? &a : b.family ? &b : nullptr;
  const AdelicDivisor* other = fam == &a ? &b : &a;
  for (const auto& l : merged_labels(a, b)) {
    if (fam && fam->family->index_of(l)) continue;
    Q wa = weight_of(a, l), wb = weight_of(b, l);
    if (a.find(l) && b.find(l) && wa != wb)
      throw Error(ErrorKind::invalid_input, "add: place '" + l + "' has different weights");
    out.set(make_place(l, a.find(l) ? wa : wb), sup_convolution(a.roof_at(l), b.roof_at(l)));
  }
  if (fam) {
    const FamilyDescriptor& F = *fam->family;
    AdelicDivisor o = *other;
    bool fam_first = fam == &a;
    out.family = F.derive(
        [o, F, fam_first](long n, const Roof& g) {
          Roof h = o.roof_at(F.place(n).label);
          return fam_first ? sup_convolution(g, h) : sup_convolution(h, g);
        },
        [o, F](long n, const std::optional<ConvexBody>& V) -> std::optional<ConvexBody> {
          if (!V) return std::nullopt;
          Roof h = o.roof_at(F.place(n).label);
          if (!is_indicator_of(h, o.domain)) return std::nullopt;
          try {
            return minkowski_sum(*V, o.domain);
          } catch (const Error&) {
            return std::nullopt;
          }
        });
  }
  return out;
}

AdelicDivisor regularize(const AdelicDivisor& D, const Q& eps) {
  D.validate();
  if (eps <= 0) throw Error(ErrorKind::invalid_input, "regularize: eps must be positive");
  BoundaryDivisor B = standard_boundary_divisor(D.dim, D.S);
  Roof small = Roof::indicator(B.delta.scale(eps));
  auto special = [S = D.S](const std::string& l) {
    return l == "inf" || std::find(S.begin(), S.end(), l) != S.end();
  };
  auto widen = [D, small, eps](const Roof& r, bool top) {
    Roof g = top ? add_constant(small, eps) : small;
    return restrict(sup_convolution(r, g), D.domain);
  };
  AdelicDivisor out = D;
  out.places.clear();
  std::set<std::string> labels{"inf"};
  for (const auto& pr : D.places) labels.insert(pr.place.label);
  labels.insert(D.S.begin(), D.S.end());
  for (const auto& l : labels) {
    if (D.family && D.family->index_of(l)) continue;
    out.set(make_place(l, weight_of(D, l)), widen(D.roof_at(l), special(l)));
  }
  out.default_roof = widen(D.default_roof, false);
  if (D.family) {
    FamilyDescriptor F = *D.family;
    out.family = F.derive(
        [F, widen, special](long n, const Roof& g) { return widen(g, special(F.place(n).label)); },
        [](long, const std::optional<ConvexBody>& V) { return V; });
  }
  return out;
}

}  // namespace toric
