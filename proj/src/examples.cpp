#include "toric/examples.hpp"

namespace toric::examples {

namespace {

Polytope interval() { return Polytope(1, {{Q(0)}, {Q(1)}}); }

}  // namespace

AdelicDivisor ramp() {
  AdelicDivisor D = AdelicDivisor::canonical(interval());
  D.set(Place::infinite(), add_constant(Roof::indicator(interval()), 1));
  D.family = FamilyDescriptor::simplex_ramp(1);
  return D;
}

AdelicDivisor power(const Q& alpha) {
  AdelicDivisor D = AdelicDivisor::canonical(interval());
  Expr e = parse_roof_expression("1 - pow(y1, " + to_string(alpha) + ")", 1);
  D.set(Place::infinite(), Roof::analytic(e, interval(), true));
  return D;
}

AdelicDivisor power_family(const Q& alpha) {
  AdelicDivisor D = AdelicDivisor::canonical(interval());
  D.family = FamilyDescriptor::power_cusp(alpha, 0).set_infinite_index(0);
  return D;
}

AdelicDivisor radial_family(const Q& alpha) {
  AdelicDivisor D = AdelicDivisor::canonical(Ball{{Q(0), Q(0)}, Q(1)});
  D.family = FamilyDescriptor::radial_power_cusp(alpha, 0).set_infinite_index(0);
  return D;
}

AdelicDivisor triangle_pole() {
  Polytope tri(2, {{Q(0), Q(0)}, {Q(1), Q(0)}, {Q(0), Q(1)}});
  AdelicDivisor D = AdelicDivisor::canonical(tri);
  D.set(Place::infinite(), Roof::analytic(parse_roof_expression("-1/(1 - y2)", 2), tri, true));
  return D;
}

AdelicDivisor segment() {
  Polytope seg(2, {{Q(0), Q(0)}, {Q(1), Q(0)}});
  AdelicDivisor D = AdelicDivisor::canonical(seg);
  D.set(Place::infinite(), Roof::indicator(seg));
  return D;
}

}  // namespace toric::examples
