#pragma once

#include <functional>
#include <map>
#include <optional>

#include "toric/fan.hpp"
#include "toric/norm.hpp"
#include "toric/roof.hpp"

namespace toric {

struct Place {
  enum class Kind { infinite, finite };
  Kind kind = Kind::finite;
  std::string label;
  Q weight = 1;

  static Place infinite(int index = 0, const Q& weight = 1);
  static Place finite(const std::string& label, const Q& weight = 1);
  bool is_infinite() const { return kind == Kind::infinite; }
  bool operator==(const Place& o) const {
    return kind == o.kind && label == o.label && weight == o.weight;
  }
};

// |integral of generator(n)| <= constant * ratio^n.
struct GeometricBound {
  Q constant;
  Q ratio;  // in (0, 1)
};

// Roofs attached to the enumerated places v(n), n >= start.
class FamilyDescriptor {
 public:
  enum class Kind { simplex_ramp, power_cusp, radial_power_cusp, expression, derived };

  // min(y - 2^-n, 0) on [0,1].
  static FamilyDescriptor simplex_ramp(int start = 1);
  // min(0, 1 - 2^(n alpha) y^alpha) on [0,1], alpha in (-1, 0) for integrability.
  static FamilyDescriptor power_cusp(const Q& alpha, int start = 1);
  // min(0, 1 - 2^(n alpha) (1 - |y|)^alpha) on the closed unit disk.
  static FamilyDescriptor radial_power_cusp(const Q& alpha, int start = 1);
  // `templ` may contain "{n}", replaced by the decimal index. `vanishing` maps n to
  // shrink(body, factor * 2^-n) when set.
  static FamilyDescriptor expression(const std::string& templ, ConvexBody body,
                                     bool singular_boundary, std::optional<Q> vanishing_factor,
                                     std::optional<GeometricBound> bound, int start = 1);

  Kind kind() const { return kind_; }
  const Q& alpha() const { return alpha_; }
  const std::string& templ() const { return templ_; }
  const ConvexBody& body() const { return body_; }
  bool singular_boundary() const { return singular_; }
  const std::optional<Q>& vanishing_factor() const { return vanishing_factor_; }
  const std::optional<GeometricBound>& bound() const { return bound_; }
  int dim() const;
  int start() const { return start_; }
  std::optional<int> infinite_index() const { return infinite_index_; }
  const Q& weight() const { return weight_; }
  FamilyDescriptor& set_infinite_index(std::optional<int> n) {
    infinite_index_ = n;
    return *this;
  }
  FamilyDescriptor& set_weight(const Q& w) {
    weight_ = w;
    return *this;
  }

  Roof generator(long n) const;
  std::optional<ConvexBody> vanishing_region(long n) const;
  // B(N) >= |sum_{n > N} weight * integral of generator(n)|; nullopt if undeclared.
  std::optional<Q> tail_bound(long N) const;
  // Exact value of sum_{n > N} generator(n)(y) where known.
  std::optional<Q> exact_tail(const QVec& y, long N) const;
  // Extra quadrature subdivision points (axis or radius).
  std::vector<double> breaks(long n) const;
  Place place(long n) const;
  // Index whose place has this label, if any.
  std::optional<long> index_of(const std::string& label) const;
  bool serializable() const { return kind_ != Kind::derived; }

  // Generator n |-> t(n, generator(n)); vanishing region n |-> v(n, region(n)).
  FamilyDescriptor derive(
      std::function<Roof(long, const Roof&)> t,
      std::function<std::optional<ConvexBody>(long, const std::optional<ConvexBody>&)> v) const;

 private:
  Kind kind_ = Kind::simplex_ramp;
  Q alpha_ = 0;
  std::string templ_;
  ConvexBody body_;
  bool singular_ = false;
  std::optional<Q> vanishing_factor_;
  std::optional<GeometricBound> bound_;
  int start_ = 1;
  std::optional<int> infinite_index_;
  Q weight_ = 1;
  std::function<Roof(long)> gen_;
  std::function<std::optional<ConvexBody>(long)> van_;
};

struct PlaceRoof {
  Place place;
  Roof roof;
};

struct AdelicDivisor {
  int dim = 0;
  ConvexBody domain;
  std::vector<std::string> S;
  std::vector<PlaceRoof> places;  // sorted by label
  Roof default_roof;
  std::optional<FamilyDescriptor> family;

  // Indicator default, no places.
  static AdelicDivisor canonical(const ConvexBody& delta);
  AdelicDivisor& set(const Place& p, const Roof& r);
  const PlaceRoof* find(const std::string& label) const;
  // Roof at a place, falling back to the family and then the default.
  Roof roof_at(const std::string& label) const;
  // Structural checks; throws invalid_input.
  void validate() const;
};

struct Verdict {
  std::string condition;
  bool pass = false;
  bool exact = true;
  std::string detail;
};

struct SemipositiveReport {
  std::vector<Verdict> verdicts;
  bool ok() const;
};

SemipositiveReport check_semipositive(const AdelicDivisor& D, const std::vector<Q>& eps_schedule);

struct GlobalRoofValue {
  bool minus_infinity = false;
  std::optional<Q> exact;
  double value = 0;
  double error = 0;
  bool truncated = false;
  int terms = 0;
};

GlobalRoofValue global_roof_eval(const AdelicDivisor& D, const QVec& y, int max_terms = 256);

struct NefVerdict {
  enum class Kind { nef, not_nef, numerically_nef };
  Kind kind = Kind::nef;
  bool exact = true;
  std::optional<DVec> witness;
  double witness_value = 0;
  std::string detail;
};

const char* to_string(NefVerdict::Kind k);
NefVerdict check_nef(const AdelicDivisor& D, int grid = 64);

// Tropical Green's functions: gamma at the listed places, `fallback` elsewhere.
struct ModelDivisor {
  int dim = 0;
  std::vector<std::pair<Place, PADiff>> gammas;
  PADiff fallback;
  const PADiff& at(const std::string& label) const;
};

struct BoundaryDivisor {
  PAConcave psi;
  Polytope delta;
  ModelDivisor green;
  AdelicDivisor roofs;
};

BoundaryDivisor standard_boundary_divisor(int d, const std::vector<std::string>& S = {});

// Conditions for B to be a boundary divisor with exceptional set S.
std::vector<CheckItem> check_boundary_divisor(const ModelDivisor& B, const std::vector<std::string>& S);

// Smallest eps with -eps B <= D <= eps B; nullopt is +inf.
std::optional<Q> boundary_norm(const ModelDivisor& D, const ModelDivisor& B);

// Per-place sup-convolution over the Minkowski sum of domains.
AdelicDivisor add(const AdelicDivisor& a, const AdelicDivisor& b);

// Roofs (theta_v sup-convolved with the roofs of eps B), restricted to the domain.
AdelicDivisor regularize(const AdelicDivisor& D, const Q& eps);

std::string to_string(const Place& p);

}  // namespace toric
