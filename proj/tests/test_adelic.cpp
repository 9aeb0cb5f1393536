#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "toric/adelic.hpp"
#include "toric/examples.hpp"
#include "toric/integrate.hpp"

using namespace toric;

namespace {

Polytope interval(const Q& a, const Q& b) { return Polytope(1, {{a}, {b}}); }

Polytope triangle() { return Polytope(2, {{Q(0), Q(0)}, {Q(1), Q(0)}, {Q(0), Q(1)}}); }

bool has_failure(const SemipositiveReport& r, const std::string& cond) {
  for (const auto& v : r.verdicts)
    if (v.condition == cond && !v.pass) return true;
  return false;
}

// Same base and the same values at the vertices of both envelopes.
bool same_roof(const Roof& a, const Roof& b) {
  Roof x = a.to_pa(), y = b.to_pa();
  if (x.base() != y.base()) return false;
  for (const Roof* r : {&x, &y})
    for (const auto& p : r->points())
      if (x.eval_exact(p) != y.eval_exact(p)) return false;
  return true;
}

}  // namespace

TEST(Place, WeightsAndLabels) {
  EXPECT_EQ(Place::infinite().label, "inf");
  EXPECT_TRUE(Place::infinite().is_infinite());
  EXPECT_EQ(Place::finite("7", frac(1, 2)).weight, frac(1, 2));
  EXPECT_THROW(Place::finite("7", 0), Error);
  EXPECT_THROW(Place::finite("7", frac(3, 2)), Error);
  EXPECT_THROW(Place::finite("inf"), Error);
}

TEST(Family, GeneratorsVanishOnTheirRegions) {
  // Exact check for the PA family at vertices and interior rationals.
  FamilyDescriptor ramp = FamilyDescriptor::simplex_ramp();
  for (long n = 1; n <= 12; ++n) {
    Roof g = ramp.generator(n);
    Polytope V = ramp.vanishing_region(n)->polytope();
    for (int k = 0; k <= 16; ++k) {
      QVec y = {V.vertices()[0][0] + Q(k, 16) * (V.vertices()[1][0] - V.vertices()[0][0])};
      y[0].canonicalize();
      EXPECT_EQ(*g.eval_exact(y), 0) << "n = " << n;
    }
    EXPECT_EQ(*g.eval_exact({Q(0)}), -pow2(-n));
  }
  // Grid check for the analytic families.
  for (const auto& F : {FamilyDescriptor::power_cusp(frac(-1, 2), 0),
                        FamilyDescriptor::radial_power_cusp(frac(-1, 2), 0)}) {
    for (long n = 0; n <= 10; ++n) {
      Roof g = F.generator(n);
      ConvexBody V = *F.vanishing_region(n);
      auto [lo, hi] = V.bounding_box();
      for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= (F.dim() == 2 ? 20 : 0); ++j) {
          DVec y{lo[0] + (hi[0] - lo[0]) * i / 20.0};
          if (F.dim() == 2) y.push_back(lo[1] + (hi[1] - lo[1]) * j / 20.0);
          if (!V.contains(y)) continue;
          EXPECT_NEAR(g.eval(y), 0.0, 1e-12) << "n = " << n;
        }
    }
  }
}

TEST(Family, TailBoundsDominateTheClosedFormTails) {
  // Per-term integrals: ramp -h^2/2, cusp h a/(a+1), radial 2 pi (h a/(a+1) - h^2 a/(2(a+2))).
  const double a = -0.5;
  auto ramp_term = [](long n) { return -std::ldexp(1.0, -2 * static_cast<int>(n) - 1); };
  auto cusp_term = [&](long n) { return std::ldexp(1.0, -static_cast<int>(n)) * a / (a + 1); };
  auto radial_term = [&](long n) {
    double h = std::ldexp(1.0, -static_cast<int>(n));
    return 2 * M_PI * (h * a / (a + 1) - h * h * a / (2 * (a + 2)));
  };
  struct Case {
    FamilyDescriptor F;
    std::function<double(long)> term;
  };
  std::vector<Case> cases = {{FamilyDescriptor::simplex_ramp(), ramp_term},
                             {FamilyDescriptor::power_cusp(frac(-1, 2), 0), cusp_term},
                             {FamilyDescriptor::radial_power_cusp(frac(-1, 2), 0), radial_term}};
  for (const auto& c : cases)
    for (long N = 0; N < 30; ++N) {
      double tail = 0;
      for (long n = N + 1; n < 90; ++n) tail += c.term(n);
      EXPECT_GE(c.F.tail_bound(N)->get_d(), std::fabs(tail));
    }
}

TEST(Family, PerTermIntegralsMatchClosedForms) {
  IntegrationConfig cfg;
  FamilyDescriptor cusp = FamilyDescriptor::power_cusp(frac(-1, 2), 0);
  for (long n : {0L, 3L, 7L}) {
    HeightValue v = integrate(cusp.generator(n), cfg, false, cusp.breaks(n));
    double h = std::ldexp(1.0, -static_cast<int>(n));
    EXPECT_NEAR(v.value, -h, 1e-5 * h) << "n = " << n;
  }
  FamilyDescriptor ramp = FamilyDescriptor::simplex_ramp();
  for (long n = 1; n <= 6; ++n) EXPECT_EQ(integrate_exact(ramp.generator(n)), -pow2(-2 * n - 1));
}

TEST(Family, TemplateSubstitution) {
  FamilyDescriptor F = FamilyDescriptor::expression("min(0, y1 - pow(2, -{n}))", interval(0, 1), false,
                                                    Q(1), GeometricBound{frac(1, 2), frac(1, 4)});
  EXPECT_NEAR(F.generator(3).eval({0.0}), -0.125, 1e-15);
  EXPECT_EQ(F.place(3).label, "v3");
  EXPECT_EQ(*F.index_of("v3"), 3);
  EXPECT_FALSE(F.index_of("v0").has_value());
  EXPECT_FALSE(F.index_of("7").has_value());
}

TEST(Semipositive, RadialFamilyPasses) {
  SemipositiveReport r = check_semipositive(examples::radial_family(frac(-1, 2)),
                                            {frac(1, 2), frac(1, 10), frac(1, 100)});
  EXPECT_TRUE(r.ok());
  for (const auto& v : r.verdicts)
    if (v.condition == "iii") EXPECT_TRUE(v.exact) << v.detail;
}

TEST(Semipositive, RampDivisorPassesExactly) {
  SemipositiveReport r = check_semipositive(examples::ramp(), {frac(1, 3), frac(1, 1000)});
  EXPECT_TRUE(r.ok());
  for (const auto& v : r.verdicts) EXPECT_TRUE(v.exact) << v.condition << " " << v.detail;
}

TEST(Semipositive, FamilyWithoutVanishingRegionFailsTail) {
  AdelicDivisor D = AdelicDivisor::canonical(interval(0, 1));
  D.family = FamilyDescriptor::expression("1 + 0*y1", interval(0, 1), false, std::nullopt, std::nullopt);
  SemipositiveReport r = check_semipositive(D, {frac(1, 10)});
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_failure(r, "iii"));
}

TEST(Semipositive, AnalyticRoofAtFiniteDivisorIsUnverifiable) {
  AdelicDivisor D = examples::power(frac(-1, 2));
  D.set(Place::finite("3"), Roof::analytic(parse_roof_expression("0*y1", 1), interval(0, 1)));
  EXPECT_TRUE(has_failure(check_semipositive(D, {}), "i"));
}

TEST(Semipositive, WrongDomainAndNonConcaveRoofFail) {
  AdelicDivisor D = AdelicDivisor::canonical(interval(0, 1));
  D.set(Place::finite("2"), Roof::indicator(interval(0, frac(1, 2))));
  EXPECT_TRUE(has_failure(check_semipositive(D, {}), "ii"));
  AdelicDivisor E = AdelicDivisor::canonical(interval(0, 1));
  E.set(Place::infinite(), Roof::analytic(parse_roof_expression("y1*y1", 1), interval(0, 1)));
  EXPECT_TRUE(has_failure(check_semipositive(E, {}), "concave"));
}

TEST(GlobalRoof, RampValues) {
  AdelicDivisor D = examples::ramp();
  EXPECT_EQ(*global_roof_eval(D, {frac(1, 2)}).exact, 1);
  EXPECT_EQ(*global_roof_eval(D, {frac(1, 4)}).exact, frac(3, 4));
  EXPECT_EQ(*global_roof_eval(D, {Q(0)}).exact, 0);
  // Summing the ramps below index n by hand gives (n + 1) 2^-n at y = 2^-n.
  for (int n = 1; n < 8; ++n) {
    Q y = pow2(-n);
    Q oracle = n * y + pow2(-n);
    EXPECT_EQ(*global_roof_eval(D, {y}).exact, oracle) << "n = " << n;
  }
  EXPECT_THROW(global_roof_eval(D, {Q(2)}), Error);
}

TEST(GlobalRoof, CanonicalAndPowerValues) {
  AdelicDivisor C = AdelicDivisor::canonical(triangle());
  EXPECT_EQ(*global_roof_eval(C, {frac(1, 3), frac(1, 5)}).exact, 0);
  GlobalRoofValue g = global_roof_eval(examples::power(frac(-1, 2)), {frac(1, 2)});
  EXPECT_FALSE(g.exact.has_value());
  EXPECT_NEAR(g.value, 1 - std::sqrt(2.0), 1e-14);
  EXPECT_TRUE(global_roof_eval(examples::power(frac(-1, 2)), {Q(0)}).minus_infinity);
}

TEST(GlobalRoof, ConcaveAlongSegments) {
  std::mt19937 rng(7);
  AdelicDivisor D = examples::ramp();
  D.set(Place::finite("5"), Roof::pa(1, {{Q(0)}, {frac(1, 3)}, {Q(1)}}, {frac(-1, 2), Q(0), frac(-1, 4)}));
  for (int i = 0; i < 200; ++i) {
    Q a(static_cast<int>(rng() % 97), 96), b(static_cast<int>(rng() % 97), 96);
    a.canonicalize();
    b.canonicalize();
    Q m = (a + b) / 2;
    Q fa = *global_roof_eval(D, {a}).exact, fb = *global_roof_eval(D, {b}).exact;
    EXPECT_GE(*global_roof_eval(D, {m}).exact, (fa + fb) / 2);
  }
}

TEST(Nef, Verdicts) {
  NefVerdict r = check_nef(examples::ramp());
  EXPECT_EQ(r.kind, NefVerdict::Kind::nef);
  EXPECT_TRUE(r.exact);
  NefVerdict p = check_nef(examples::power(frac(-1, 2)));
  EXPECT_EQ(p.kind, NefVerdict::Kind::not_nef);
  ASSERT_TRUE(p.witness.has_value());
  EXPECT_EQ(check_nef(standard_boundary_divisor(2).roofs).kind, NefVerdict::Kind::nef);
  AdelicDivisor shifted = AdelicDivisor::canonical(interval(0, 1));
  shifted.set(Place::infinite(), Roof::pa(1, {{Q(0)}, {Q(1)}}, {Q(1), frac(-1, 10)}));
  EXPECT_EQ(check_nef(shifted).kind, NefVerdict::Kind::not_nef);
}

TEST(Boundary, ProjectiveLine) {
  BoundaryDivisor B = standard_boundary_divisor(1);
  for (int x = -5; x <= 5; ++x) EXPECT_EQ(B.psi.eval(QVec{Q(x)}), std::min(Q(x), Q(-x)));
  EXPECT_EQ(B.delta, interval(-1, 1));
  for (const auto& item : check_boundary_divisor(B.green, {})) EXPECT_TRUE(item.pass) << item.name;
  for (int k = 0; k <= 10; ++k) {
    Q y = Q(-1) + Q(k, 5);
    y.canonicalize();
    EXPECT_EQ(*global_roof_eval(B.roofs, {y}).exact, 1);
  }
  EXPECT_EQ(check_nef(B.roofs).kind, NefVerdict::Kind::nef);
}

TEST(Boundary, GlobalRoofIsOneWithExceptionalPlaces) {
  std::mt19937 rng(3);
  BoundaryDivisor B = standard_boundary_divisor(2, {"2", "3"});
  EXPECT_EQ(B.roofs.places.size(), 3u);
  for (const auto& item : check_boundary_divisor(B.green, {"2", "3"})) EXPECT_TRUE(item.pass) << item.name;
  EXPECT_TRUE(check_semipositive(B.roofs, {frac(1, 4)}).ok());
  int hits = 0;
  while (hits < 50) {
    QVec y = {Q(static_cast<int>(rng() % 41) - 20, 10), Q(static_cast<int>(rng() % 41) - 20, 10)};
    for (auto& c : y) c.canonicalize();
    if (!B.delta.contains(y)) continue;
    ++hits;
    // Each of inf, "2", "3" carries the constant roof 1 on the domain.
    EXPECT_EQ(*global_roof_eval(B.roofs, y).exact, 3);
  }
}

TEST(Boundary, BadDataFails) {
  BoundaryDivisor B = standard_boundary_divisor(1);
  ModelDivisor M = B.green;
  M.fallback = PADiff::of(PAConcave(1, {{{Q(1)}, Q(0)}, {{Q(-1)}, Q(1)}}));
  bool any_fail = false;
  for (const auto& item : check_boundary_divisor(M, {})) any_fail = any_fail || !item.pass;
  EXPECT_TRUE(any_fail);
}

TEST(BoundaryNorm, CanonicalModelHasNormOne) {
  for (int d : {1, 2}) {
    BoundaryDivisor B = standard_boundary_divisor(d);
    ModelDivisor can{d, {}, PADiff::of(B.psi)};
    EXPECT_EQ(*boundary_norm(can, B.green), 1);
    ModelDivisor zero{d, {}, PADiff::of(PAConcave::zero(d))};
    EXPECT_EQ(*boundary_norm(zero, B.green), 0);
    for (const Q& a : {Q(3), frac(-5, 2), frac(1, 7)}) {
      ModelDivisor scaled{d, {}, PADiff::of(B.psi).scale(a)};
      EXPECT_EQ(*boundary_norm(scaled, B.green), abs(a));
    }
  }
}

TEST(BoundaryNorm, InfiniteWhenTheTorusPartDiffers) {
  BoundaryDivisor B = standard_boundary_divisor(1);
  ModelDivisor M{1, {}, PADiff::of(PAConcave::affine({Q(0)}, Q(1)))};
  EXPECT_FALSE(boundary_norm(M, B.green).has_value());
  ModelDivisor top{1, {{Place::infinite(), PADiff::of(PAConcave::affine({Q(0)}, Q(3)))}},
                   PADiff::of(PAConcave::zero(1))};
  EXPECT_EQ(*boundary_norm(top, B.green), 3);
}

TEST(Add, IdentityAndShiftedIndicators) {
  AdelicDivisor D = examples::ramp();
  D.family.reset();
  D.set(Place::finite("2"), Roof::pa(1, {{Q(0)}, {Q(1)}}, {frac(-1, 2), Q(0)}));
  AdelicDivisor zero = AdelicDivisor::canonical(Polytope(1, {{Q(0)}}));
  AdelicDivisor S = add(D, zero);
  EXPECT_EQ(S.domain, D.domain);
  ASSERT_EQ(S.places.size(), D.places.size());
  for (size_t i = 0; i < S.places.size(); ++i) EXPECT_TRUE(same_roof(S.places[i].roof, D.places[i].roof));

  AdelicDivisor T = AdelicDivisor::canonical(interval(0, 1));
  T.set(Place::infinite(), add_constant(Roof::indicator(interval(0, 1)), 1));
  AdelicDivisor TT = add(T, T);
  Roof top = TT.find("inf")->roof.to_pa();
  EXPECT_EQ(top.base(), interval(0, 2));
  for (const auto& v : top.values()) EXPECT_EQ(v, 2);
}

TEST(Add, TrianglePlusSegment) {
  AdelicDivisor D3 = add(examples::triangle_pole(), examples::segment());
  Polytope delta3(2, {{Q(0), Q(0)}, {Q(2), Q(0)}, {Q(1), Q(1)}, {Q(0), Q(1)}});
  EXPECT_EQ(D3.domain, delta3);
  const Roof& r = D3.find("inf")->roof;
  for (DVec y : {DVec{0.5, 0.25}, DVec{1.5, 0.2}, DVec{0.1, 0.9}, DVec{1.9, 0.05}})
    EXPECT_NEAR(r.eval(y), -1 / (1 - y[1]), 1e-8) << y[0] << "," << y[1];
}

TEST(Add, CommutativeAndAssociativeOnPaData) {
  std::mt19937 rng(11);
  auto draw = [&](int dim) {
    std::vector<QVec> pts;
    for (int i = 0; i < 4; ++i) {
      QVec p;
      for (int j = 0; j < dim; ++j) p.push_back(frac(static_cast<long>(rng() % 5), 2));
      pts.push_back(p);
    }
    Polytope P(dim, pts);
    AdelicDivisor D = AdelicDivisor::canonical(P);
    QVec vals;
    for (size_t i = 0; i < P.vertices().size(); ++i) vals.push_back(frac(static_cast<long>(rng() % 5) - 2, 3));
    D.set(Place::infinite(), Roof::pa(dim, P.vertices(), vals));
    if (rng() % 2) D.set(Place::finite("2"), add_constant(Roof::indicator(P), -1));
    return D;
  };
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 1 + trial % 2;
    AdelicDivisor a = draw(dim), b = draw(dim), c = draw(dim);
    AdelicDivisor ab = add(a, b), ba = add(b, a);
    AdelicDivisor l = add(ab, c), r = add(a, add(b, c));
    ASSERT_EQ(ab.places.size(), ba.places.size());
    for (size_t i = 0; i < ab.places.size(); ++i) EXPECT_TRUE(same_roof(ab.places[i].roof, ba.places[i].roof));
    ASSERT_EQ(l.places.size(), r.places.size());
    for (size_t i = 0; i < l.places.size(); ++i) EXPECT_TRUE(same_roof(l.places[i].roof, r.places[i].roof));
    EXPECT_TRUE(same_roof(l.default_roof, r.default_roof));
  }
}

TEST(Add, RejectsTwoFamilies) {
  EXPECT_THROW(add(examples::ramp(), examples::ramp()), Error);
}

TEST(Regularize, IndicatorGainsEpsAtTheInfinitePlace) {
  AdelicDivisor C = AdelicDivisor::canonical(triangle());
  AdelicDivisor R = regularize(C, frac(1, 10));
  const Roof& top = R.find("inf")->roof;
  const Polytope T = triangle();
  for (const auto& v : T.vertices()) EXPECT_EQ(*top.eval_exact(v), frac(1, 10));
  EXPECT_EQ(*R.default_roof.eval_exact({frac(1, 4), frac(1, 4)}), 0);
}

TEST(Regularize, PowerRoofBecomesBoundedBelow) {
  AdelicDivisor R = regularize(examples::power(frac(-1, 2)), frac(1, 10));
  const Roof& r = R.find("inf")->roof;
  // Oracle: 1 - min(y + 1/10, 1)^(-1/2) + 1/10.
  double lowest = 0;
  for (int i = 0; i <= 400; ++i) {
    double y = i / 400.0;
    double v = r.eval({y});
    EXPECT_NEAR(v, 1 - std::pow(std::min(y + 0.1, 1.0), -0.5) + 0.1, 1e-7) << y;
    lowest = std::min(lowest, v);
  }
  EXPECT_GT(lowest, -3.0);
}

TEST(Regularize, MonotoneInEps) {
  AdelicDivisor D = examples::power(frac(-1, 2));
  AdelicDivisor big = regularize(D, frac(1, 5)), small = regularize(D, frac(1, 20));
  const Roof& a = big.find("inf")->roof;
  const Roof& b = small.find("inf")->roof;
  const Roof& o = D.find("inf")->roof;
  for (int i = 1; i <= 100; ++i) {
    double y = i / 100.0;
    EXPECT_GE(a.eval({y}), b.eval({y}) - 1e-12);
    EXPECT_GE(b.eval({y}), o.eval({y}) - 1e-12);
  }
}
