#pragma once

#include <map>
#include <string>

#include "toric/pa.hpp"
#include "toric/polytope.hpp"

namespace toric {

// Strongly convex rational polyhedral cone, stored by its primitive extreme
// ray generators (lexicographic) together with its facet inequalities.
class Cone {
 public:
  Cone() = default;
  static Cone from_generators(int ambient, std::vector<QVec> gens);
  static Cone from_hrep(int ambient, const QMat& ineq, const QMat& eq);
  static Cone trivial(int ambient) { return from_generators(ambient, {}); }

  int ambient() const { return ambient_; }
  int dim() const { return dim_; }
  const std::vector<QVec>& rays() const { return rays_; }
  const QMat& ineq() const { return ineq_; }  // a . x >= 0
  const QMat& eq() const { return eq_; }      // a . x == 0
  bool contains(const QVec& x) const;
  bool contains(const Cone& c) const;
  // True when `sub`, a subcone of this cone, is one of its faces.
  bool has_face(const Cone& sub) const;
  std::vector<Cone> facets() const;
  std::vector<Cone> faces() const;

  bool operator==(const Cone& o) const { return ambient_ == o.ambient_ && rays_ == o.rays_; }
  bool operator!=(const Cone& o) const { return !(*this == o); }
  bool operator<(const Cone& o) const { return rays_ < o.rays_; }

 private:
  int ambient_ = 0;
  int dim_ = 0;
  std::vector<QVec> rays_;
  QMat ineq_, eq_;
};

Cone intersect(const Cone& a, const Cone& b);

// Extreme rays of the pointed cone {A x >= 0, E x = 0}.
std::vector<QVec> cone_rays(int ambient, const QMat& ineq, const QMat& eq);

// Fan given by its maximal cones; faces are derived on demand. Construction
// drops cones contained in others and rejects pairs not meeting in a common face.
class Fan {
 public:
  Fan() = default;
  Fan(int ambient, std::vector<Cone> cones);
  static Fan from_rays(int ambient, const std::vector<std::vector<QVec>>& cones);

  int ambient() const { return ambient_; }
  const std::vector<Cone>& cones() const { return cones_; }
  std::vector<Cone> all_cones() const;
  std::vector<QVec> rays() const;
  // A maximal cone containing x, or -1.
  int locate(const QVec& x) const;

  bool operator==(const Fan& o) const { return ambient_ == o.ambient_ && cones_ == o.cones_; }
  bool operator!=(const Fan& o) const { return !(*this == o); }

 private:
  int ambient_ = 0;
  std::vector<Cone> cones_;
};

bool is_smooth(const Fan& f);
bool is_complete(const Fan& f);
// Support equal to N_R x R_{>=0}, the last coordinate being the level.
bool is_halfspace_complete(const Fan& f);
bool is_projective(const Fan& f);
bool refines(const Fan& fine, const Fan& coarse);
Fan common_refinement(const Fan& a, const Fan& b);
Fan canonical_extension(const Fan& f);
Fan smooth_refinement_2d(const Fan& f);
// Concave convention: the cone at vertex m is where min over the polytope is attained at m.
Fan normal_fan(const Polytope& p);
Fan projective_space_fan(int d);

class SupportFunction {
 public:
  SupportFunction() = default;
  SupportFunction(Fan fan, std::vector<QVec> slopes);
  // Values at the ray generators; missing rays default to 0.
  static SupportFunction from_values(const Fan& fan, const std::map<QVec, Q>& values);

  const Fan& fan() const { return fan_; }
  const std::vector<QVec>& slopes() const { return m_; }
  Q eval(const QVec& x) const;
  std::map<QVec, Q> ray_values() const;

 private:
  Fan fan_;
  std::vector<QVec> m_;  // one functional per maximal cone
};

struct ToricDivisorData {
  std::map<QVec, Q> horizontal;                           // ray generator -> a_rho
  std::map<std::string, std::map<QVec, Q>> vertical;      // prime -> vertical ray -> b
  bool operator==(const ToricDivisorData& o) const {
    return horizontal == o.horizontal && vertical == o.vertical;
  }
};

SupportFunction support_from_divisor(const Fan& f, const ToricDivisorData& d);
// Phi on the canonical extension: Phi(v_rho, 0) = -a_rho, Phi(0, 1) = -b_p.
SupportFunction support_from_divisor(const Fan& f, const ToricDivisorData& d, const std::string& prime);
ToricDivisorData divisor_from_support(const SupportFunction& s);

bool is_relatively_nef(const SupportFunction& s);
bool is_ample(const SupportFunction& s);
bool is_effective(const SupportFunction& s);
// gamma <= 0 everywhere for every entry.
bool is_effective(const std::vector<PAConcave>& gammas);
// The concave function min_sigma <m_sigma, x>; requires nef.
PAConcave to_pa(const SupportFunction& s);
// x |-> Phi(x, 1) for Phi on a fan in N_R x R_{>=0}; requires nef.
PAConcave level_one(const SupportFunction& phi);

struct ArithmeticFan {
  Fan base;
  std::map<std::string, Fan> exceptional;
  Fan at(const std::string& prime) const;
};

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckItem> items;
  std::string effectivity;  // "effective" or "unknown"
  bool refinement = false;
  bool ok() const;
};

ValidationReport validate_arithmetic_fan(const ArithmeticFan& af);

struct FanMorphism {
  QMat phi;                               // rows n2, columns n1
  std::map<std::string, QMat> per_prime;  // (n2+1) x (n1+1); canonical extension elsewhere
  QMat at(const std::string& prime) const;
};

ValidationReport validate_fan_morphism(const FanMorphism& m, const ArithmeticFan& src,
                                       const ArithmeticFan& dst);

// Horizontal part from the recession functions, vertical part b_w = -Phi_p(w)
// at every ray w of the exceptional fan with positive level.
ToricDivisorData weil_decomposition(const ArithmeticFan& af, const std::map<std::string, PAConcave>& gammas);

}  // namespace toric
