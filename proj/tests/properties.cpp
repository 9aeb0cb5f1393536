#include "properties.hpp"

#include <cmath>
#include <random>
#include <set>

#include "toric/fan.hpp"
#include "toric/height.hpp"
#include "toric/roof.hpp"

namespace toric::props {

namespace {

struct Tally {
  SuiteResult r;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (r.failures == 0) r.first_failure = what;
      ++r.failures;
    }
  }
};

Q det2(const QVec& u, const QVec& v) { return u[0] * v[1] - u[1] * v[0]; }

// Complete fan in the plane from random primitive directions with angular gaps below pi.
Fan random_complete_fan_2d(std::mt19937& rng, int range = 5) {
  std::uniform_int_distribution<int> u(-range, range);
  while (true) {
    std::set<QVec> dirs;
    int k = 3 + static_cast<int>(rng() % 4);
    while (static_cast<int>(dirs.size()) < k) {
      QVec v = {Q(u(rng)), Q(u(rng))};
      if (!is_zero(v)) dirs.insert(primitive(v));
    }
    std::vector<QVec> d(dirs.begin(), dirs.end());
    std::sort(d.begin(), d.end(), [](const QVec& a, const QVec& b) {
      return std::atan2(a[1].get_d(), a[0].get_d()) < std::atan2(b[1].get_d(), b[0].get_d());
    });
    bool ok = true;
    std::vector<std::vector<QVec>> cones;
    for (size_t i = 0; i < d.size(); ++i) {
      const QVec& a = d[i];
      const QVec& b = d[(i + 1) % d.size()];
      if (det2(a, b) <= 0) ok = false;
      cones.push_back({a, b});
    }
    if (ok) return Fan::from_rays(2, cones);
  }
}

Q small_rational(std::mt19937& rng, int range, int den) {
  std::uniform_int_distribution<int> u(-range * den, range * den);
  return frac(u(rng), den);
}

PAConcave random_pa(std::mt19937& rng, int dim) {
  int k = 1 + static_cast<int>(rng() % 7);
  std::vector<Piece> ps;
  for (int i = 0; i < k; ++i) {
    QVec m;
    for (int j = 0; j < dim; ++j) m.push_back(small_rational(rng, 3, 1 + static_cast<int>(rng() % 2)));
    ps.push_back({m, small_rational(rng, 3, 1 + static_cast<int>(rng() % 4))});
  }
  return PAConcave(dim, ps);
}

Roof random_pa_roof(std::mt19937& rng, int dim) {
  int k = 1 + static_cast<int>(rng() % 6);
  std::vector<QVec> m;
  QVec t;
  for (int i = 0; i < k; ++i) {
    QVec p;
    for (int j = 0; j < dim; ++j) p.push_back(small_rational(rng, 2, 1 + static_cast<int>(rng() % 2)));
    m.push_back(p);
    t.push_back(small_rational(rng, 2, 1 + static_cast<int>(rng() % 3)));
  }
  return Roof::pa(dim, m, t);
}

// Full-dimensional polytope with small rational vertices.
Polytope random_body(std::mt19937& rng, int dim) {
  while (true) {
    std::vector<QVec> pts;
    int k = dim + 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) {
      QVec p;
      for (int j = 0; j < dim; ++j) p.push_back(small_rational(rng, 2, 1 + static_cast<int>(rng() % 2)));
      pts.push_back(p);
    }
    Polytope P(dim, pts);
    if (P.dim() == dim) return P;
  }
}

// PA roof on P: its vertices plus random interior points, random values.
Roof random_roof_on(std::mt19937& rng, const Polytope& P) {
  std::vector<QVec> m = P.vertices();
  QVec t;
  for (size_t i = 0; i < m.size(); ++i) t.push_back(small_rational(rng, 2, 1 + static_cast<int>(rng() % 3)));
  int extra = static_cast<int>(rng() % 3);
  for (int e = 0; e < extra; ++e) {
    QVec p(P.ambient(), Q(0));
    Q total = 0;
    std::vector<Q> w;
    for (size_t i = 0; i < P.vertices().size(); ++i) {
      w.push_back(Q(1 + static_cast<int>(rng() % 4)));
      total += w.back();
    }
    for (size_t i = 0; i < w.size(); ++i) p = p + Q(w[i] / total) * P.vertices()[i];
    m.push_back(p);
    t.push_back(small_rational(rng, 2, 1 + static_cast<int>(rng() % 3)) + 1);
  }
  return Roof::pa(P.ambient(), m, t);
}

Roof random_full_roof(std::mt19937& rng, int dim) {
  return random_roof_on(rng, random_body(rng, dim));
}

Q factorial(int n) {
  Q f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

SuiteResult lf_involution_suite(std::uint32_t seed) {
  Tally t;
  t.r.name = "lf-involution";
  std::mt19937 rng(seed);
  for (int trial = 0; trial < 200; ++trial) {
    int dim = 1 + trial % 3;
    PAConcave f = random_pa(rng, dim);
    ++t.r.cases;
    t.check(lf_transform_inv(lf_transform(f)) == f, "involution fails for " + to_string(f));
  }
  return t.r;
}

SuiteResult supconv_duality_suite(std::uint32_t seed) {
  Tally t;
  t.r.name = "supconv-duality";
  std::mt19937 rng(seed);
  for (int trial = 0; trial < 100; ++trial) {
    int dim = 1 + trial % 3;
    Roof f = random_pa_roof(rng, dim), g = random_pa_roof(rng, dim);
    Roof lhs = sup_convolution(f, g);
    Roof rhs = lf_transform(lf_transform_inv(f) + lf_transform_inv(g));
    bool ok = lhs.points() == rhs.points() && lhs.values() == rhs.values();
    for (const auto& a : f.points())
      for (const auto& b : g.points()) ok = ok && lhs.eval_exact(a + b) == rhs.eval_exact(a + b);
    ++t.r.cases;
    t.check(ok, "duality fails for " + to_string(f) + " and " + to_string(g));
  }
  return t.r;
}

SuiteResult fan_suite(std::uint32_t seed) {
  Tally t;
  t.r.name = "fans";
  std::mt19937 rng(seed);
  for (int trial = 0; trial < 40; ++trial) {
    Fan a = random_complete_fan_2d(rng);
    Fan b = random_complete_fan_2d(rng);

    // is_smooth against the determinant oracle.
    bool oracle = true;
    for (const auto& c : a.cones())
      if (abs(det2(c.rays()[0], c.rays()[1])) != 1) oracle = false;
    ++t.r.cases;
    t.check(is_smooth(a) == oracle, "is_smooth disagrees with |det| oracle");

    // Every cone of the common refinement sits in a cone of each input.
    Fan ab = common_refinement(a, b);
    ++t.r.cases;
    t.check(refines(ab, a) && refines(ab, b) && is_complete(ab), "common refinement containment");

    // Smooth refinement: unit determinants, refines the input, keeps smooth cones.
    Fan s = smooth_refinement_2d(ab);
    bool unit = true;
    for (const auto& c : s.cones())
      if (abs(det2(c.rays()[0], c.rays()[1])) != 1) unit = false;
    bool kept = true;
    for (const auto& c : ab.cones())
      if (abs(det2(c.rays()[0], c.rays()[1])) == 1 &&
          std::find(s.cones().begin(), s.cones().end(), c) == s.cones().end())
        kept = false;
    ++t.r.cases;
    t.check(unit && is_smooth(s) && refines(s, ab) && kept, "smooth refinement output");
  }
  return t.r;
}

SuiteResult mixed_diagonal_suite(std::uint32_t seed) {
  Tally t;
  t.r.name = "mixed-diagonal";
  std::mt19937 rng(seed);
  IntegrationConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    int dim = 1 + trial % 3;
    Roof f = trial % 4 == 3 ? random_pa_roof(rng, dim) : random_full_roof(rng, dim);
    HeightValue mi = mixed_integral(std::vector<Roof>(dim + 1, f), cfg, true);
    Q direct = factorial(dim + 1) * integrate_exact(f);
    ++t.r.cases;
    t.check(mi.is_exact() && mi.exact == direct,
            "MI " + to_string(mi) + " vs " + to_string(direct) + " for " + to_string(f));
  }
  return t.r;
}

SuiteResult nef_height_suite(std::uint32_t seed) {
  Tally t;
  t.r.name = "nef-height";
  std::mt19937 rng(seed);
  IntegrationConfig cfg;
  int nef = 0;
  for (int trial = 0; nef < 50 && trial < 1000; ++trial) {
    int dim = 1 + trial % 2;
    Polytope P = random_body(rng, dim);
    Roof top = random_roof_on(rng, P);
    Roof fin = random_roof_on(rng, P);
    fin = add_constant(fin, -sup_exact(fin));
    Q low = 0;
    bool first = true;
    for (const auto& v : P.vertices()) {
      Q s = *top.eval_exact(v) + *fin.eval_exact(v);
      if (first || s < low) low = s;
      first = false;
    }
    // Half of the draws sit on or above the nef threshold, the rest straddle it.
    Q shift = -low + (trial % 2 ? Q(static_cast<int>(rng() % 3)) / 4 : frac(-1, 8));
    AdelicDivisor D = AdelicDivisor::canonical(P);
    D.set(Place::infinite(), add_constant(top, shift));
    D.set(Place::finite("2"), fin);
    NefVerdict v = check_nef(D);
    if (v.kind != NefVerdict::Kind::nef) continue;
    ++nef;
    HeightReport h = self_intersection(D, {cfg, true});
    ++t.r.cases;
    t.check(h.value.is_exact() && h.value.exact >= 0, "nef divisor with height " + to_string(h.value));
  }
  return t.r;
}

SuiteResult exact_numeric_suite(std::uint32_t seed) {
  Tally t;
  t.r.name = "exact-numeric";
  std::mt19937 rng(seed);
  IntegrationConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    int dim = 1 + trial % 2;
    Roof f = random_full_roof(rng, dim);
    Q ex = integrate_exact(f);
    HeightValue num = integrate_numeric(f, cfg);
    double tol = 10 * std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(ex.get_d()));
    ++t.r.cases;
    t.check(!num.is_minus_infinity() && std::fabs(num.value - ex.get_d()) <= tol,
            "numeric " + to_string(num) + " vs exact " + to_string(ex));
  }
  return t.r;
}

namespace {

PADiff random_diff(std::mt19937& rng, int dim) {
  return {random_pa(rng, dim), random_pa(rng, dim)};
}

ModelDivisor model_scale(const ModelDivisor& D, const Q& a) {
  ModelDivisor out = D;
  for (auto& [p, g] : out.gammas) g = g.scale(a);
  out.fallback = D.fallback.scale(a);
  return out;
}

ModelDivisor model_sum(const ModelDivisor& a, const ModelDivisor& b) {
  ModelDivisor out = a;
  out.fallback = a.fallback + b.fallback;
  for (auto& [p, g] : out.gammas) g = a.at(p.label) + b.at(p.label);
  return out;
}

}  // namespace

SuiteResult boundary_norm_suite(std::uint32_t seed) {
  Tally t;
  t.r.name = "boundary-norm";
  std::mt19937 rng(seed);
  for (int trial = 0; trial < 50; ++trial) {
    int dim = 1 + trial % 2;
    BoundaryDivisor B = standard_boundary_divisor(dim, {"2"});
    auto draw = [&] {
      ModelDivisor D;
      D.dim = dim;
      D.fallback = PADiff::of(PAConcave::zero(dim));
      D.gammas.push_back({Place::infinite(), random_diff(rng, dim)});
      D.gammas.push_back({Place::finite("2"), random_diff(rng, dim)});
      return D;
    };
    ModelDivisor D1 = draw(), D2 = draw();
    ModelDivisor zero = model_scale(D1, 0);
    auto n1 = boundary_norm(D1, B.green);
    auto n2 = boundary_norm(D2, B.green);
    auto n12 = boundary_norm(model_sum(D1, D2), B.green);
    Q a = small_rational(rng, 3, 2);
    auto na = boundary_norm(model_scale(D1, a), B.green);
    auto n0 = boundary_norm(zero, B.green);
    ++t.r.cases;
    bool finite = n1 && n2 && n12 && na && n0;
    t.check(finite, "norm of bounded data reported as +inf");
    if (!finite) continue;
    bool nonzero = false;
    for (const auto& [p, g] : D1.gammas)
      if (g.pos != g.neg) nonzero = true;
    t.check(*n0 == 0, "norm of zero is " + to_string(*n0));
    t.check(!nonzero || *n1 > 0, "nonzero data with zero norm");
    t.check(*n12 <= *n1 + *n2, "triangle inequality: " + to_string(*n12) + " > " + to_string(*n1) + " + " + to_string(*n2));
    t.check(*na == abs(a) * *n1, "homogeneity fails for a = " + to_string(a));
    // Sampled lower bound: the ratio at random points never exceeds the norm.
    for (int s = 0; s < 20; ++s) {
      QVec x;
      for (int j = 0; j < dim; ++j) x.push_back(small_rational(rng, 4, 3));
      for (const auto& [p, g] : D1.gammas) {
        Q den = -B.green.at(p.label).eval(x);
        if (den > 0) t.check(abs(g.eval(x)) / den <= *n1, "sampled ratio exceeds the norm");
      }
    }
  }
  return t.r;
}

}  // namespace toric::props
