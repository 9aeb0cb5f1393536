#pragma once

#include <cstdint>
#include <string>

namespace toric::props {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  bool ok() const { return cases > 0 && failures == 0; }
};

SuiteResult fan_suite(std::uint32_t seed);
// lf_transform_inv(lf_transform(f)) == f on 200 random PA functions, dim 1..3.
SuiteResult lf_involution_suite(std::uint32_t seed);
// f [+] g == (f^v + g^v)^v on 100 random PA roof pairs, dim 1..3.
SuiteResult supconv_duality_suite(std::uint32_t seed);
// MI(f, ..., f) == (d+1)! * integral(f) on 100 random PA roofs, dim 1..3.
SuiteResult mixed_diagonal_suite(std::uint32_t seed);
// check_nef == Nef implies a nonnegative height, 50 random PA divisors.
SuiteResult nef_height_suite(std::uint32_t seed);
// Numeric and exact integrals agree within 10x tolerance, 50 random PA roofs, dim <= 2.
SuiteResult exact_numeric_suite(std::uint32_t seed);
// Boundary-norm axioms on 50 random PA model divisors.
SuiteResult boundary_norm_suite(std::uint32_t seed);

}  // namespace toric::props
