#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "properties.hpp"
#include "toric/norm.hpp"
#include "toric/roof.hpp"

using namespace toric;

namespace {

QVec qv(std::initializer_list<Q> xs) { return QVec(xs); }

Polytope interval(const Q& a, const Q& b) { return Polytope(1, {qv({a}), qv({b})}); }

Polytope simplex2() { return Polytope(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})}); }

const double kNegInf = -std::numeric_limits<double>::infinity();

ErrorKind parse_error_kind(const std::string& src, int dim) {
  try {
    parse_roof_expression(src, dim);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::invalid_input;
}

}  // namespace

TEST(Expression, ParsesAndEvaluates) {
  Expr e = parse_roof_expression("min(0, y1 - 0.25)", 1);
  EXPECT_EQ(e.root().op, ExprNode::Op::min);
  EXPECT_EQ(e.root().args[0]->op, ExprNode::Op::constant);
  EXPECT_EQ(e.root().args[1]->op, ExprNode::Op::sub);
  EXPECT_DOUBLE_EQ(e.eval({0.0}), -0.25);
  EXPECT_EQ(*e.eval_exact({frac(1, 8)}), frac(-1, 8));

  Expr g = parse_roof_expression("1 - pow(y1, -1/2)", 1);
  EXPECT_NEAR(g.eval({0.25}), -1.0, 1e-15);
  EXPECT_EQ(g.eval({0.0}), kNegInf);

  Expr h = parse_roof_expression(" 2*y1*y2 - y2/3 + sqrt(4) - -1 ", 2);
  EXPECT_NEAR(h.eval({0.5, 3.0}), 3.0 - 1.0 + 2.0 + 1.0, 1e-14);
  EXPECT_EQ(*h.eval_exact({frac(1, 2), Q(3)}), Q(5));
  EXPECT_NEAR(parse_roof_expression("1e-1 + 3/4 + .5", 1).eval({0.0}), 1.35, 1e-15);
  EXPECT_NEAR(parse_roof_expression("max(y1, 1 - y1)", 1).eval({0.2}), 0.8, 1e-15);
  EXPECT_NEAR(parse_roof_expression("pow(y1, 2)", 1).eval({-3.0}), 9.0, 1e-12);
  EXPECT_FALSE(parse_roof_expression("sqrt(2)", 1).eval_exact({Q(0)}).has_value());
}

TEST(Expression, NegativeBaseFractionalPowerIsMinusInfinity) {
  Expr e = parse_roof_expression("pow(y1, 1/2)", 1);
  EXPECT_EQ(e.eval({-1.0}), kNegInf);
  EXPECT_EQ(parse_roof_expression("-pow(1 - y2, -1)", 2).eval({0.0, 1.0}), kNegInf);
}

TEST(Expression, Errors) {
  try {
    parse_roof_expression("pow(y1", 1);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::syntax);
    EXPECT_EQ(e.offset(), 7u);
  }
  try {
    parse_roof_expression("1 + * 2", 1);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  EXPECT_EQ(parse_error_kind("min(y1)", 1), ErrorKind::arity);
  EXPECT_EQ(parse_error_kind("max(y1, 1, 2)", 1), ErrorKind::arity);
  EXPECT_EQ(parse_error_kind("sqrt(y1, 2)", 1), ErrorKind::arity);
  EXPECT_EQ(parse_error_kind("y3 + 1", 2), ErrorKind::unknown_variable);
  EXPECT_EQ(parse_error_kind("y0", 2), ErrorKind::unknown_variable);
  EXPECT_EQ(parse_error_kind("x", 1), ErrorKind::unknown_variable);
  EXPECT_EQ(parse_error_kind("exp(y1)", 1), ErrorKind::syntax);
  EXPECT_EQ(parse_error_kind("pow(y1, y1)", 1), ErrorKind::syntax);
  EXPECT_EQ(parse_error_kind("(y1", 1), ErrorKind::syntax);
  EXPECT_EQ(parse_error_kind("", 1), ErrorKind::syntax);
}

TEST(Roof, Eval) {
  Roof ind = Roof::indicator(interval(0, 1));
  EXPECT_EQ(*ind.eval_exact(qv({frac(1, 2)})), 0);
  EXPECT_FALSE(ind.eval_exact(qv({2})).has_value());
  EXPECT_EQ(ind.eval({2.0}), kNegInf);

  Roof tent = Roof::pa(1, {qv({0}), qv({1}), qv({frac(1, 2)})}, qv({0, 0, 1}));
  EXPECT_EQ(*tent.eval_exact(qv({frac(1, 4)})), frac(1, 2));
  EXPECT_DOUBLE_EQ(tent.eval({0.75}), 0.5);

  Roof ex2 = Roof::analytic(parse_roof_expression("1 - pow(y1, -1/2)", 1), interval(0, 1), true);
  EXPECT_NEAR(ex2.eval({0.25}), -1.0, 1e-15);
  EXPECT_EQ(ex2.eval({1.5}), kNegInf);
  EXPECT_FALSE(ex2.is_exact());
}

TEST(Roof, PaNormalizesToEnvelopeVertices) {
  // (1/2, 0) lies below the chord and drops out.
  Roof r = Roof::pa(1, {qv({1}), qv({0}), qv({frac(1, 2)})}, qv({0, 0, -1}));
  EXPECT_EQ(r.points(), (std::vector<QVec>{qv({0}), qv({1})}));
  EXPECT_EQ(r, Roof::indicator(interval(0, 1)));
  EXPECT_EQ(sup_exact(r), 0);
}

TEST(LegendreFenchel, PaperIdentities) {
  PAConcave psi(1, {{qv({0}), 0}, {qv({1}), 0}});  // min(0, x)
  EXPECT_EQ(lf_transform(psi), Roof::indicator(interval(0, 1)));
  EXPECT_EQ(stability_set(psi), interval(0, 1));

  PAConcave psi_b(1, {{qv({1}), 0}, {qv({-1}), 0}});  // min(x, -x)
  Roof r = lf_transform(psi_b.add_constant(-1));
  EXPECT_EQ(r, add_constant(Roof::indicator(interval(-1, 1)), 1));
  for (int i = -4; i <= 4; ++i) EXPECT_EQ(*r.eval_exact(qv({frac(i, 4)})), 1);
  EXPECT_EQ(stability_set(psi_b), interval(-1, 1));

  PAConcave aff = PAConcave::affine(qv({2, -1}), frac(3, 2));
  Roof pt = lf_transform(aff);
  EXPECT_EQ(*pt.eval_exact(qv({2, -1})), frac(-3, 2));
  EXPECT_FALSE(pt.eval_exact(qv({2, 0})).has_value());

  EXPECT_EQ(stability_set(PAConcave::zero(2)), Polytope(2, {qv({0, 0})}));
  EXPECT_THROW(stability_set(psi.add_constant(1)), Error);
  EXPECT_EQ(lf_transform_inv(lf_transform(psi)), psi);
}

TEST(LegendreFenchel, ConicalMapsToIndicatorOfStabilitySet) {
  PAConcave psi(2, {{qv({0, 0}), 0}, {qv({1, 0}), 0}, {qv({0, 1}), 0}});
  EXPECT_EQ(lf_transform(psi), Roof::indicator(stability_set(psi)));
  EXPECT_EQ(stability_set(psi), simplex2());
}

TEST(LegendreFenchel, DimensionLimit) {
  PAConcave f(4, {{qv({1, 0, 0, 0}), 0}, {qv({0, 1, 0, 0}), 0}});
  try {
    lf_transform(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension_too_high);
  }
}

// eval(f^v, y) against the minimum of <y, x> - f(x) over a fine grid of a wide box.
TEST(LegendreFenchel, GridOracle) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> u(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Piece> ps;
    for (int i = 0; i < 4; ++i) ps.push_back({qv({u(rng), u(rng)}), Q(u(rng))});
    PAConcave f(2, ps);
    Roof r = lf_transform(f);
    QVec y = r.base().centroid();
    DVec yd = to_double(y);
    const double h = 0.05, R = 12;
    double best = INFINITY;
    for (double x0 = -R; x0 <= R + 1e-9; x0 += h)
      for (double x1 = -R; x1 <= R + 1e-9; x1 += h)
        best = std::min(best, yd[0] * x0 + yd[1] * x1 - f.eval(DVec{x0, x1}));
    double exact = r.eval_exact(y)->get_d();
    EXPECT_LE(exact, best + 1e-9);
    // Lipschitz constant of the objective is at most |y| + max |m_i| (l1), about 8.
    EXPECT_GE(exact, best - 8 * h);
  }
}

TEST(SupConvolution, Exact) {
  Roof a = Roof::indicator(simplex2());
  Roof b = Roof::indicator(Polytope(2, {qv({0, 0}), qv({1, 0})}));
  Roof s = sup_convolution(a, b);
  Polytope d3(2, {qv({0, 0}), qv({2, 0}), qv({1, 1}), qv({0, 1})});
  EXPECT_EQ(s, Roof::indicator(d3));
  EXPECT_EQ(s.domain(), ConvexBody(d3));

  Roof tent = Roof::pa(1, {qv({0}), qv({1}), qv({frac(1, 2)})}, qv({0, 0, 1}));
  EXPECT_EQ(sup_convolution(tent, Roof::indicator(Polytope(1, {qv({0})}))), tent);
  Roof shifted = add_constant(Roof::indicator(interval(0, 1)), 1);
  EXPECT_EQ(sup_convolution(shifted, shifted), add_constant(Roof::indicator(interval(0, 2)), 2));
}

TEST(SupConvolution, AnalyticWithSegment) {
  Roof th1 = Roof::analytic(parse_roof_expression("-pow(1 - y2, -1)", 2), simplex2(), true);
  Roof seg = Roof::indicator(Polytope(2, {qv({0, 0}), qv({1, 0})}));
  Roof th3 = sup_convolution(th1, seg);
  EXPECT_EQ(th3.kind(), Roof::Kind::supconv);
  Polytope d3(2, {qv({0, 0}), qv({2, 0}), qv({1, 1}), qv({0, 1})});
  EXPECT_EQ(th3.domain(), ConvexBody(d3));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  while (checked < 200) {
    DVec y{2 * u(rng), u(rng)};
    if (!d3.contains(y)) continue;
    if (y[1] > 0.999) continue;
    EXPECT_NEAR(th3.eval(y), -1 / (1 - y[1]), 1e-9 / (1 - y[1]));
    ++checked;
  }
  EXPECT_EQ(th3.eval({2.0, 0.5}), kNegInf);
  EXPECT_EQ(sup_convolution(seg, th1), th3);
}

TEST(SupConvolution, AnalyticIdentityAndInterval) {
  Roof ex2 = Roof::analytic(parse_roof_expression("1 - pow(y1, -1/2)", 1), interval(0, 1), true);
  Roof id = sup_convolution(ex2, Roof::indicator(Polytope(1, {qv({0})})));
  for (double y : {0.1, 0.3, 0.9, 1.0}) EXPECT_NEAR(id.eval({y}), ex2.eval({y}), 1e-12);
  // The roof increases, so the supremum over [y - 1/10, y + 1/10] sits at the right end.
  Roof wide = sup_convolution(ex2, Roof::indicator(interval(frac(-1, 10), frac(1, 10))));
  EXPECT_NEAR(wide.eval({0.5}), 1 - 1 / std::sqrt(0.6), 1e-10);
  EXPECT_NEAR(wide.eval({1.05}), 0.0, 1e-10);
  EXPECT_NEAR(wide.eval({-0.05}), 1 - 1 / std::sqrt(0.05), 1e-9);
  EXPECT_EQ(wide.eval({1.2}), kNegInf);
}

TEST(SupConvolution, AnalyticWithBall) {
  // sup over |z| <= 1/2 of -(|y - z|^2) is -(max(0, |y| - 1/2))^2 away from the box edge.
  Roof f = Roof::analytic(parse_roof_expression("-(y1*y1 + y2*y2)", 2),
                          Polytope::box(qv({-5, -5}), qv({5, 5})));
  Roof s = sup_convolution(f, Roof::indicator(Ball{qv({0, 0}), frac(1, 2)}));
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 40; ++i) {
    DVec y{u(rng), u(rng)};
    double r = std::hypot(y[0], y[1]);
    double expect = -std::pow(std::max(0.0, r - 0.5), 2);
    EXPECT_NEAR(s.eval(y), expect, 1e-8);
  }
  // Polytope operand against a ball-bodied analytic roof.
  Roof disk = Roof::analytic(parse_roof_expression("1 - y1*y1 - y2*y2", 2), Ball{qv({0, 0}), Q(1)});
  Roof sq = Roof::indicator(Polytope::box(qv({frac(-1, 4), frac(-1, 4)}), qv({frac(1, 4), frac(1, 4)})));
  Roof t = sup_convolution(disk, sq);
  EXPECT_NEAR(t.eval({0.1, -0.2}), 1.0, 1e-9);
  EXPECT_NEAR(t.eval({1.0, 0.0}), 1 - 0.75 * 0.75, 1e-9);
  EXPECT_NEAR(t.eval({0.9, 0.9}), 1 - 2 * 0.65 * 0.65, 1e-8);
  // (1, 1) is at distance 0.75 sqrt(2) > 1 from the square.
  EXPECT_EQ(t.eval({1.0, 1.0}), kNegInf);
}

TEST(SupConvolution, Unsupported) {
  Roof a = Roof::analytic(parse_roof_expression("-y1*y1", 1), interval(-1, 1));
  Roof b = Roof::analytic(parse_roof_expression("-y1*y1*y1*y1", 1), interval(-1, 1));
  try {
    sup_convolution(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_combination);
  }
  // f [+] f = 2 f(y / 2) for a concave f.
  Roof aa = sup_convolution(a, a);
  EXPECT_NEAR(aa.eval({1.0}), -0.5, 1e-15);
  EXPECT_EQ(aa.domain(), ConvexBody(interval(-2, 2)));
}

TEST(Roof, RestrictShiftScale) {
  Roof ind = Roof::indicator(simplex2());
  EXPECT_EQ(restrict(ind, simplex2()), ind);
  EXPECT_EQ(*add_constant(ind, 1).eval_exact(qv({frac(1, 3), frac(1, 3)})), 1);

  Roof tent = Roof::pa(1, {qv({0}), qv({1}), qv({frac(1, 2)})}, qv({0, 0, 1}));
  Roof cut = restrict(tent, interval(frac(1, 4), 2));
  EXPECT_FALSE(cut.eval_exact(qv({frac(1, 8)})).has_value());
  EXPECT_EQ(*cut.eval_exact(qv({frac(1, 4)})), frac(1, 2));
  Roof cut_pa = cut.to_pa();
  EXPECT_EQ(cut_pa.points(), (std::vector<QVec>{qv({frac(1, 4)}), qv({frac(1, 2)}), qv({1})}));
  EXPECT_EQ(cut_pa.values(), qv({frac(1, 2), 1, 0}));

  Roof two = scale(tent, 2);
  for (int i = -2; i <= 10; ++i) {
    QVec y = qv({frac(i, 8)});
    auto lhs = two.eval_exact(Q(2) * y);
    auto rhs = tent.eval_exact(y);
    ASSERT_EQ(lhs.has_value(), rhs.has_value());
    if (lhs) EXPECT_EQ(*lhs, 2 * *rhs);
  }
  EXPECT_EQ(two.to_pa().points(), (std::vector<QVec>{qv({0}), qv({1}), qv({2})}));
  EXPECT_EQ(scale(tent, 0), Roof::indicator(Polytope(1, {qv({0})})));
  EXPECT_EQ(two, sup_convolution(tent, tent));
}

TEST(Recession, Basics) {
  PAConcave f(1, {{qv({1}), 0}, {qv({0}), 0}});
  EXPECT_EQ(f.add_constant(-1).recession(), f);
  EXPECT_EQ(PAConcave::affine(qv({2, 3}), 5).recession(), PAConcave::affine(qv({2, 3}), 0));
  PAConcave psi_b(1, {{qv({1}), 0}, {qv({-1}), 0}});
  EXPECT_EQ(psi_b.add_constant(-1).recession(), psi_b);
  EXPECT_EQ(f.recession().recession(), f.recession());
}

TEST(Norms, Examples) {
  EXPECT_EQ(*c_norm(PAConcave::zero(1)), 0);
  EXPECT_EQ(*g_norm(PAConcave::zero(2)), 0);
  EXPECT_EQ(*g_norm(PAConcave::affine(qv({0, 0}), frac(-7, 3))), frac(7, 3));
  PAConcave m(1, {{qv({1}), 0}, {qv({0}), 0}});  // min(x, 0)
  EXPECT_EQ(*c_norm(m), 1);
  EXPECT_EQ(*g_norm(m), 1);
  EXPECT_FALSE(c_norm(m.add_constant(-1)).has_value());
  EXPECT_EQ(*g_norm(PAConcave::affine(qv({1}), 0)), 1);
  // min(x1, 2 x2) reaches -2 on the unit l-infinity sphere at (0, -1).
  PAConcave f2(2, {{qv({1, 0}), 0}, {qv({0, 2}), 0}});
  EXPECT_EQ(*c_norm(f2), 2);
  EXPECT_EQ(*c_norm(PADiff::of(f2) + (-PADiff::of(f2))), 0);
}

TEST(Norms, Axioms) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> u(-3, 3);
  auto rand_conical = [&](int dim) {
    std::vector<Piece> ps;
    for (int i = 0; i < 3; ++i) {
      QVec mm;
      for (int j = 0; j < dim; ++j) mm.push_back(Q(u(rng)));
      ps.push_back({mm, Q(0)});
    }
    return PADiff{PAConcave(dim, ps), PAConcave(dim, {{QVec(dim, Q(0)), Q(0)}})};
  };
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 1 + trial % 2;
    PADiff f = rand_conical(dim), g = rand_conical(dim);
    f.neg = PAConcave(dim, {{QVec(dim, Q(u(rng))), Q(0)}, {QVec(dim, Q(0)), Q(0)}});
    using NormFn = std::optional<Q> (*)(const PADiff&);
    for (NormFn norm : {NormFn(&c_norm), NormFn(&g_norm)}) {
      auto nf = norm(f), ng = norm(g), nfg = norm(f + g);
      ASSERT_TRUE(nf && ng && nfg);
      EXPECT_LE(*nfg, *nf + *ng);
      Q a = frac(u(rng) - 1, 2);
      EXPECT_EQ(*norm(f.scale(a)), abs(a) * *nf);
      EXPECT_EQ(*norm(-f), *nf);
    }
    // Sampled lower bound: |f(x)| / |x|_inf never exceeds the norm.
    for (int s = 0; s < 20; ++s) {
      QVec x;
      for (int j = 0; j < dim; ++j) x.push_back(Q(u(rng)));
      if (is_zero(x)) continue;
      Q mx = 0;
      for (const auto& v : x) mx = std::max(mx, Q(abs(v)));
      EXPECT_LE(Q(abs(f.eval(x)) / mx), *c_norm(f));
    }
  }
}

TEST(Properties, LfInvolution) {
  auto r = props::lf_involution_suite(20260101u);
  EXPECT_TRUE(r.ok()) << r.first_failure;
  EXPECT_EQ(r.cases, 200);
}

TEST(Properties, SupConvDuality) {
  auto r = props::supconv_duality_suite(20260102u);
  EXPECT_TRUE(r.ok()) << r.first_failure;
  EXPECT_EQ(r.cases, 100);
}
