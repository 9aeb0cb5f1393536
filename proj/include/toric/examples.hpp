#pragma once

#include "toric/adelic.hpp"

namespace toric::examples {

// Constant 1 at the infinite place on [0,1] plus the simplex_ramp family.
AdelicDivisor ramp();
// 1 - y^alpha at the infinite place on [0,1].
AdelicDivisor power(const Q& alpha);
// power_cusp(alpha) family from n = 0, member 0 at the infinite place.
AdelicDivisor power_family(const Q& alpha);
// radial_power_cusp(alpha) family on the unit disk from n = 0.
AdelicDivisor radial_family(const Q& alpha);
// -(1 - y2)^-1 at the infinite place on the standard triangle.
AdelicDivisor triangle_pole();
// Zero roofs on the segment [0,1] x {0}.
AdelicDivisor segment();

}  // namespace toric::examples
