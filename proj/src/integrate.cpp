#include "toric/integrate.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_qrng.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "toric/linalg.hpp"

namespace toric {

HeightValue HeightValue::of(const Q& q) {
  HeightValue h;
  h.kind = Kind::exact;
  h.exact = q;
  h.value = q.get_d();
  return h;
}

HeightValue HeightValue::approx(double v, double err) {
  HeightValue h;
  h.kind = Kind::approx;
  h.value = v;
  h.abs_error = err;
  return h;
}

HeightValue HeightValue::minus_infinity(std::vector<std::string> trace) {
  HeightValue h;
  h.kind = Kind::minus_infinity;
  h.value = -std::numeric_limits<double>::infinity();
  h.trace = std::move(trace);
  return h;
}

HeightValue operator+(const HeightValue& a, const HeightValue& b) {
  HeightValue r;
  if (a.is_minus_infinity() || b.is_minus_infinity()) {
    r = HeightValue::minus_infinity();
  } else if (a.is_exact() && b.is_exact()) {
    r = HeightValue::of(a.exact + b.exact);
  } else {
    r = HeightValue::approx(a.value + b.value, a.abs_error + b.abs_error);
  }
  r.heuristic = a.heuristic || b.heuristic;
  r.budget_exceeded = a.budget_exceeded || b.budget_exceeded;
  r.lower_bound_only = a.lower_bound_only || b.lower_bound_only;
  r.trace = a.trace;
  r.trace.insert(r.trace.end(), b.trace.begin(), b.trace.end());
  return r;
}

HeightValue operator*(const Q& s, const HeightValue& a) {
  HeightValue r = a;
  switch (a.kind) {
    case HeightValue::Kind::minus_infinity:
      if (s <= 0) throw Error(ErrorKind::precondition, "-inf scaled by a nonpositive factor");
      return r;
    case HeightValue::Kind::exact:
      r.exact = s * a.exact;
      r.value = r.exact.get_d();
      return r;
    case HeightValue::Kind::approx:
      r.value = s.get_d() * a.value;
      r.abs_error = std::fabs(s.get_d()) * a.abs_error;
      return r;
  }
  return r;
}

std::string to_string(const HeightValue& h) {
  std::ostringstream os;
  os.precision(12);
  switch (h.kind) {
    case HeightValue::Kind::exact: os << to_string(h.exact) << " (exact)"; break;
    case HeightValue::Kind::approx:
      os << h.value << " +- " << h.abs_error << (h.heuristic ? " (heuristic)" : " (numeric)");
      break;
    case HeightValue::Kind::minus_infinity: os << "-inf"; break;
  }
  if (h.lower_bound_only) os << " [lower bound only]";
  if (h.budget_exceeded) os << " [budget exceeded]";
  return os.str();
}

namespace {

Q simplex_volume(const Simplex& s) {
  const int d = static_cast<int>(s.size()) - 1;
  QMat m;
  for (int i = 1; i <= d; ++i) m.push_back(s[i] - s[0]);
  Q v = abs(det(m));
  for (int i = 2; i <= d; ++i) v /= i;
  return v;
}

}  // namespace

Q integrate_exact(const Roof& r) {
  if (!r.is_exact()) throw Error(ErrorKind::precondition, "exact integration of a non-exact roof");
  const int d = r.dim();
  if (d > 3) throw Error(ErrorKind::dimension_too_high, "exact integration needs dim <= 3");
  Roof p = r.to_pa();
  if (p.base().dim() < d) return 0;
  Q total = 0;
  for (const auto& cell : p.envelope().cells) {
    std::vector<QVec> pts;
    for (int i : cell.vertices) pts.push_back(p.points()[i]);
    Polytope cp(d, pts);
    if (cp.dim() < d) continue;
    for (const auto& s : cp.triangulate()) {
      Q sum = 0;
      for (const auto& v : s) sum += dot(cell.slope, v) + cell.constant;
      total += simplex_volume(s) * sum / (d + 1);
    }
  }
  return total;
}

namespace {

using Fn = std::function<double(const DVec&)>;
using Fn1 = std::function<double(double)>;

struct Quad1 {
  double value = 0;
  double error = 0;
  bool budget = false;
  Quad1& operator+=(const Quad1& o) {
    value += o.value;
    error += o.error;
    budget = budget || o.budget;
    return *this;
  }
};

double trampoline(double x, void* p) { return (*static_cast<const Fn1*>(p))(x); }

struct GslSetup {
  GslSetup() { gsl_set_error_handler_off(); }
};

// Nested Gauss-Kronrod quadrature with one workspace per nesting depth.
class Integrator {
 public:
  Integrator(size_t limit, double epsabs, double epsrel, double user_abs, double user_rel)
      : limit_(limit), epsabs_(epsabs), epsrel_(epsrel), user_abs_(user_abs), user_rel_(user_rel) {}
  ~Integrator() {
    for (auto* w : ws_) gsl_integration_workspace_free(w);
  }
  Integrator(const Integrator&) = delete;
  Integrator& operator=(const Integrator&) = delete;

  // Sum of adaptive integrals over consecutive pieces [pts[i], pts[i+1]]. Inner
  // depths get a smaller subdivision limit and never flag the budget: their
  // error shows up as noise in the outer integrand. The outermost line flags it
  // when its error estimate misses the caller's tolerances.
  Quad1 line(const Fn1& g, const std::vector<double>& pts, size_t depth, double epsabs) {
    const size_t limit = depth == 0 ? limit_ : std::min<size_t>(limit_, 200);
    while (ws_.size() <= depth) ws_.push_back(gsl_integration_workspace_alloc(limit_));
    gsl_integration_workspace* w = ws_[depth];
    Quad1 out;
    size_t pieces = pts.size() > 1 ? pts.size() - 1 : 1;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      if (!(pts[i + 1] > pts[i])) continue;
      gsl_function F{&trampoline, const_cast<Fn1*>(&g)};
      double r = 0, e = 0;
      int status = gsl_integration_qag(&F, pts[i], pts[i + 1], epsabs / pieces, epsrel_, limit,
                                       GSL_INTEG_GAUSS21, w, &r, &e);
      out.value += r;
      out.error += e;
      if (depth == 0 && status != GSL_SUCCESS &&
          e > std::max(user_abs_ / pieces, user_rel_ * std::fabs(r)))
        out.budget = true;
    }
    return out;
  }
  double epsabs() const { return epsabs_; }
  size_t limit() const { return limit_; }

 private:
  size_t limit_;
  double epsabs_, epsrel_, user_abs_, user_rel_;
  std::vector<gsl_integration_workspace*> ws_;
};

std::vector<double> with_breaks(double a, double b, const std::vector<double>& breaks) {
  std::vector<double> pts{a, b};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  return pts;
}

Quad1 simplex2(const Fn& f, const std::vector<DVec>& v, Integrator& ig, double epsabs) {
  DVec e1{v[1][0] - v[0][0], v[1][1] - v[0][1]};
  DVec e2{v[2][0] - v[1][0], v[2][1] - v[1][1]};
  double jac = std::fabs(e1[0] * e2[1] - e1[1] * e2[0]);
  Quad1 inner_acc;
  Fn1 outer = [&](double s1) {
    Fn1 inner = [&](double s2) {
      DVec y{v[0][0] + s1 * (e1[0] + s2 * e2[0]), v[0][1] + s1 * (e1[1] + s2 * e2[1])};
      return f(y);
    };
    Quad1 q = ig.line(inner, {0.0, 1.0}, 1, epsabs);
    inner_acc.budget = inner_acc.budget || q.budget;
    return s1 * jac * q.value;
  };
  Quad1 q = ig.line(outer, {0.0, 1.0}, 0, epsabs);
  q.budget = q.budget || inner_acc.budget;
  return q;
}

Quad1 simplex3(const Fn& f, const std::vector<DVec>& v, Integrator& ig, double epsabs) {
  DVec e1(3), e2(3), e3(3);
  for (int j = 0; j < 3; ++j) {
    e1[j] = v[1][j] - v[0][j];
    e2[j] = v[2][j] - v[1][j];
    e3[j] = v[3][j] - v[2][j];
  }
  double jac = std::fabs(e1[0] * (e2[1] * e3[2] - e2[2] * e3[1]) -
                         e1[1] * (e2[0] * e3[2] - e2[2] * e3[0]) +
                         e1[2] * (e2[0] * e3[1] - e2[1] * e3[0]));
  bool budget = false;
  Fn1 outer = [&](double s1) {
    Fn1 mid = [&](double s2) {
      Fn1 inner = [&](double s3) {
        DVec y(3);
        for (int j = 0; j < 3; ++j) y[j] = v[0][j] + s1 * (e1[j] + s2 * (e2[j] + s3 * e3[j]));
        return f(y);
      };
      Quad1 q = ig.line(inner, {0.0, 1.0}, 2, epsabs);
      budget = budget || q.budget;
      return s2 * q.value;
    };
    Quad1 q = ig.line(mid, {0.0, 1.0}, 1, epsabs);
    budget = budget || q.budget;
    return s1 * s1 * jac * q.value;
  };
  Quad1 q = ig.line(outer, {0.0, 1.0}, 0, epsabs);
  q.budget = q.budget || budget;
  return q;
}

// Chord {t : member(base + t e_axis)} of a convex body, found from sampled
// members and refined by bisection.
std::optional<std::pair<double, double>> chord(const std::function<bool(double)>& member,
                                               double lo, double hi, double hint) {
  std::optional<double> in;
  if (hint >= lo && hint <= hi && member(hint)) in = hint;
  for (int n : {16, 256}) {
    for (int i = 0; i <= n && !in; ++i) {
      double t = lo + (hi - lo) * (i + 0.5) / (n + 1);
      if (member(t)) in = t;
    }
    if (in) break;
  }
  if (!in) return std::nullopt;
  double a = lo, b = *in;
  if (member(lo)) {
    b = lo;
  } else {
    for (int it = 0; it < 60; ++it) {
      double m = 0.5 * (a + b);
      (member(m) ? b : a) = m;
    }
  }
  double left = b;
  a = *in;
  b = hi;
  if (member(hi)) {
    a = hi;
  } else {
    for (int it = 0; it < 60; ++it) {
      double m = 0.5 * (a + b);
      (member(m) ? a : b) = m;
    }
  }
  return std::make_pair(left, a);
}

Quad1 qmc(const Fn& f, const ConvexBody& body, const IntegrationConfig& cfg) {
  const int d = body.ambient();
  auto [lo, hi] = body.bounding_box();
  double vol = 1;
  for (int j = 0; j < d; ++j) vol *= hi[j] - lo[j];
  const int shifts = 16;
  const size_t per = std::max<size_t>(cfg.qmc_samples / shifts, 64);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> est;
  gsl_qrng* q = gsl_qrng_alloc(gsl_qrng_sobol, d);
  if (!q) throw Error(ErrorKind::dimension_too_high, "quasi-Monte-Carlo dimension too high");
  DVec u(d), y(d), shift(d);
  for (int s = 0; s < shifts; ++s) {
    gsl_qrng_init(q);
    for (int j = 0; j < d; ++j) shift[j] = U(rng);
    double sum = 0;
    for (size_t i = 0; i < per; ++i) {
      gsl_qrng_get(q, u.data());
      for (int j = 0; j < d; ++j) {
        double t = u[j] + shift[j];
        if (t >= 1) t -= 1;
        y[j] = lo[j] + t * (hi[j] - lo[j]);
      }
      if (body.contains(y)) sum += f(y);
    }
    est.push_back(vol * sum / per);
  }
  gsl_qrng_free(q);
  double mean = 0, var = 0;
  for (double e : est) mean += e;
  mean /= shifts;
  for (double e : est) var += (e - mean) * (e - mean);
  var /= shifts - 1;
  return {mean, 3 * std::sqrt(var / shifts), false};
}

Quad1 quad_body(const Fn& f, const ConvexBody& body, const std::vector<double>& breaks,
                const IntegrationConfig& cfg, Integrator& ig) {
  const int d = body.ambient();
  const double eps = ig.epsabs();
  if (body.is_empty() || body.dim() < d) return {};
  if (body.is_polytope()) {
    const Polytope& p = body.polytope();
    if (d == 1) {
      double a = p.vertices().front()[0].get_d(), b = p.vertices().back()[0].get_d();
      return ig.line([&](double t) { return f(DVec{t}); }, with_breaks(a, b, breaks), 0, eps);
    }
    if (d <= 3) {
      auto simplices = p.triangulate();
      Quad1 out;
      for (const auto& s : simplices) {
        std::vector<DVec> v;
        for (const auto& x : s) v.push_back(to_double(x));
        double e = eps / simplices.size();
        out += d == 2 ? simplex2(f, v, ig, e) : simplex3(f, v, ig, e);
      }
      return out;
    }
    return qmc(f, body, cfg);
  }
  if (body.is_ball()) {
    const Ball& b = body.ball();
    DVec c = to_double(b.center);
    double R = b.radius.get_d();
    if (d == 1) {
      std::vector<double> br;
      for (double x : breaks) {
        br.push_back(c[0] - x);
        br.push_back(c[0] + x);
      }
      return ig.line([&](double t) { return f(DVec{t}); }, with_breaks(c[0] - R, c[0] + R, br), 0,
                     eps);
    }
    if (d == 2) {
      bool budget = false;
      Fn1 radial = [&](double r) {
        Fn1 ang = [&](double phi) { return f(DVec{c[0] + r * std::cos(phi), c[1] + r * std::sin(phi)}); };
        Quad1 q = ig.line(ang, {0.0, 2 * M_PI}, 1, eps);
        budget = budget || q.budget;
        return r * q.value;
      };
      Quad1 q = ig.line(radial, with_breaks(0, R, breaks), 0, eps);
      q.budget = q.budget || budget;
      return q;
    }
    if (d == 3) {
      bool budget = false;
      Fn1 radial = [&](double r) {
        Fn1 polar = [&](double th) {
          Fn1 az = [&](double phi) {
            return f(DVec{c[0] + r * std::sin(th) * std::cos(phi),
                          c[1] + r * std::sin(th) * std::sin(phi), c[2] + r * std::cos(th)});
          };
          Quad1 q = ig.line(az, {0.0, 2 * M_PI}, 2, eps);
          budget = budget || q.budget;
          return std::sin(th) * q.value;
        };
        Quad1 q = ig.line(polar, {0.0, M_PI}, 1, eps);
        budget = budget || q.budget;
        return r * r * q.value;
      };
      Quad1 q = ig.line(radial, with_breaks(0, R, breaks), 0, eps);
      q.budget = q.budget || budget;
      return q;
    }
    return qmc(f, body, cfg);
  }
  const OracleBody& o = body.oracle();
  if (d == 1) {
    auto ch = chord([&](double t) { return o.member(DVec{t}); }, o.lo[0], o.hi[0], o.inner[0]);
    if (!ch) return {};
    return ig.line([&](double t) { return f(DVec{t}); }, with_breaks(ch->first, ch->second, breaks),
                   0, eps);
  }
  if (d == 2) {
    bool budget = false;
    Fn1 outer = [&](double x) {
      auto ch = chord([&](double t) { return o.member(DVec{x, t}); }, o.lo[1], o.hi[1], o.inner[1]);
      if (!ch) return 0.0;
      Quad1 q = ig.line([&](double t) { return f(DVec{x, t}); }, {ch->first, ch->second}, 1, eps);
      budget = budget || q.budget;
      return q.value;
    };
    Quad1 q = ig.line(outer, {o.lo[0], o.hi[0]}, 0, eps);
    q.budget = q.budget || budget;
    return q;
  }
  return qmc(f, body, cfg);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

HeightValue integrate_numeric(const Roof& r, const IntegrationConfig& cfg,
                              const std::vector<double>& breaks) {
  static GslSetup setup;
  const ConvexBody body = r.domain();
  if (body.is_empty() || body.dim() < body.ambient()) return HeightValue::of(0);
  const DivergenceConfig& dv = cfg.divergence;
  Integrator ig(cfg.max_subdivisions, cfg.abs_tol * 1e-3, cfg.rel_tol * 1e-2, cfg.abs_tol,
                cfg.rel_tol);
  std::vector<double> I;
  std::vector<std::string> trace;
  bool budget = false;
  double qerr = 0;
  bool have_aitken = false;
  double aitken = 0;
  double aitken_step = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int k = 0; k <= dv.max_doublings; ++k) {
    const double M = std::pow(dv.cutoff_base, k);
    Fn g = [&](const DVec& y) {
      double v = r.eval(y);
      return v >= -M ? v : -M;
    };
    Quad1 q = quad_body(g, body, breaks, cfg, ig);
    budget = budget || q.budget;
    qerr = q.error;
    I.push_back(q.value);
    std::string line = "M=" + fmt(M) + " I=" + fmt(q.value);
    if (k == 0) {
      trace.push_back(line);
      continue;
    }
    const double d = I[k - 1] - I[k];
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(I[k]));
    double ratio = std::numeric_limits<double>::quiet_NaN();
    if (k >= 2 && I[k - 2] - I[k - 1] > 0) ratio = d / (I[k - 2] - I[k - 1]);
    line += " step=" + fmt(d);
    if (std::isfinite(ratio)) line += " ratio=" + fmt(ratio);
    trace.push_back(line);

    if (std::fabs(d) <= tol) {
      double v = I[k];
      if (std::isfinite(ratio) && ratio > 0 && ratio < dv.stall_ratio) v -= d * ratio / (1 - ratio);
      HeightValue h = HeightValue::approx(v, std::fabs(d) + qerr);
      h.budget_exceeded = budget;
      h.trace = std::move(trace);
      return h;
    }
    if (std::isfinite(ratio) && ratio >= dv.stall_ratio) {
      if (++stalled >= dv.confirm) {
        trace.push_back("cutoff decrements stalled for " + std::to_string(stalled) +
                        " doublings: divergent");
        return HeightValue::minus_infinity(std::move(trace));
      }
      have_aitken = false;
      continue;
    }
    if (k >= 2) stalled = 0;
    if (std::isfinite(ratio) && ratio > 0) {
      double a = I[k] - d * ratio / (1 - ratio);
      if (have_aitken) {
        aitken_step = std::fabs(a - aitken);
        if (aitken_step <= tol) {
          HeightValue h = HeightValue::approx(a, aitken_step + qerr);
          h.budget_exceeded = budget;
          h.trace = std::move(trace);
          return h;
        }
      }
      aitken = a;
      have_aitken = true;
    } else {
      have_aitken = false;
    }
  }
  trace.push_back("cutoff budget exhausted");
  HeightValue h = have_aitken ? HeightValue::approx(aitken, aitken_step + qerr)
                         : HeightValue::approx(I.back(), std::fabs(I[I.size() - 2] - I.back()) + qerr);
  h.heuristic = true;
  h.budget_exceeded = true;
  h.trace = std::move(trace);
  return h;
}

HeightValue integrate(const Roof& r, const IntegrationConfig& cfg, bool exact_only,
                      const std::vector<double>& breaks) {
  if (r.is_exact() && r.dim() <= 3) return HeightValue::of(integrate_exact(r));
  if (exact_only) throw Error(ErrorKind::precondition, "exact-only integration of a non-exact roof");
  return integrate_numeric(r, cfg, breaks);
}

HeightValue mixed_integral(const std::vector<Roof>& roofs, const IntegrationConfig& cfg,
                           bool exact_only) {
  if (roofs.empty()) throw Error(ErrorKind::invalid_input, "mixed integral of no roofs");
  const int d = roofs[0].dim();
  if (static_cast<int>(roofs.size()) != d + 1)
    throw Error(ErrorKind::invalid_input, "mixed integral needs d + 1 roofs");
  for (const auto& r : roofs)
    if (r.dim() != d) throw Error(ErrorKind::dimension_mismatch, "mixed integral: dimensions differ");
  HeightValue total = HeightValue::of(0);
  std::vector<std::string> divergent;
  for (unsigned mask = 1; mask < (1u << (d + 1)); ++mask) {
    std::optional<Roof> g;
    std::string name;
    int size = 0;
    for (int i = 0; i <= d; ++i) {
      if (!(mask & (1u << i))) continue;
      g = g ? sup_convolution(*g, roofs[i]) : roofs[i];
      name += (size ? "," : "") + std::to_string(i);
      ++size;
    }
    HeightValue term = integrate(*g, cfg, exact_only);
    if (term.is_minus_infinity()) {
      const bool first = divergent.empty();
      divergent.push_back("subset {" + name + "} not integrable");
      if (first)
        for (const auto& t : term.trace) divergent.push_back("  " + t);
      continue;
    }
    Q sign = (d + 1 - size) % 2 ? -1 : 1;
    total = total + sign * term;
  }
  if (!divergent.empty()) {
    HeightValue h = HeightValue::minus_infinity(divergent);
    // on the diagonal MI is (d+1)! times the integral, so -inf is the value itself
    bool diagonal = true;
    for (const auto& r : roofs) diagonal = diagonal && r == roofs[0];
    h.lower_bound_only = !diagonal;
    return h;
  }
  return total;
}

}  // namespace toric
