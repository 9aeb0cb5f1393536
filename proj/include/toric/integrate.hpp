#pragma once

#include <cstdint>

#include "toric/roof.hpp"

namespace toric {

struct DivergenceConfig {
  double cutoff_base = 2;
  int max_doublings = 40;
  double stall_ratio = 0.97;
  // Consecutive stalled doublings required before declaring -inf.
  int confirm = 8;
};

struct IntegrationConfig {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  size_t max_subdivisions = 2000;
  DivergenceConfig divergence;
  size_t qmc_samples = 1 << 16;
  std::uint64_t seed = 1;
};

// Exact{Q} | Approx{value, abs_error} | MinusInfinity.
struct HeightValue {
  enum class Kind { exact, approx, minus_infinity };
  Kind kind = Kind::exact;
  Q exact = 0;
  double value = 0;  // -inf for minus_infinity
  double abs_error = 0;
  bool heuristic = false;
  bool budget_exceeded = false;
  bool lower_bound_only = false;
  std::vector<std::string> trace;

  static HeightValue of(const Q& q);
  static HeightValue approx(double v, double err);
  static HeightValue minus_infinity(std::vector<std::string> trace = {});
  bool is_exact() const { return kind == Kind::exact; }
  bool is_minus_infinity() const { return kind == Kind::minus_infinity; }
};

HeightValue operator+(const HeightValue& a, const HeightValue& b);
// s >= 0 unless the value is finite.
HeightValue operator*(const Q& s, const HeightValue& a);
std::string to_string(const HeightValue& h);

// Triangulates each linearity cell; exact kinds only, dim <= 3.
Q integrate_exact(const Roof& r);

// Cutoff scheme over max(r, -M_k). `breaks` are extra subdivision points along
// the axis of a 1-dimensional domain or along the radius of a ball.
HeightValue integrate_numeric(const Roof& r, const IntegrationConfig& cfg,
                              const std::vector<double>& breaks = {});

// Exact path whenever the roof is exact.
HeightValue integrate(const Roof& r, const IntegrationConfig& cfg, bool exact_only = false,
                      const std::vector<double>& breaks = {});

// Sum over nonempty subsets I of (-1)^(d+1-|I|) times the integral of the
// sup-convolution of the roofs in I over the Minkowski sum of their domains.
HeightValue mixed_integral(const std::vector<Roof>& roofs, const IntegrationConfig& cfg,
                           bool exact_only = false);

}  // namespace toric
