#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace toric {

using Q = mpq_class;
using QVec = std::vector<Q>;
using QMat = std::vector<QVec>;
using DVec = std::vector<double>;

enum class ErrorKind {
  dimension_too_high,
  dimension_mismatch,
  not_complete,
  support_mismatch,
  not_smooth,
  not_conical,
  syntax,
  arity,
  unknown_variable,
  unsupported_combination,
  point_outside_domain,
  budget_exceeded,
  no_tail_bound,
  invalid_input,
  precondition,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parses "p/q", integers and plain decimals ("-0.25", "1e-3") exactly.
Q parse_rational(const std::string& s);
std::string to_string(const Q& q);
std::string to_string(const QVec& v);
double to_double(const Q& q);
DVec to_double(const QVec& v);
Q from_double(double x);

Q dot(const QVec& a, const QVec& b);
QVec operator+(const QVec& a, const QVec& b);
QVec operator-(const QVec& a, const QVec& b);
QVec operator*(const Q& s, const QVec& v);
bool is_zero(const QVec& v);

// Scales to the primitive integer vector on the same ray.
QVec primitive(const QVec& v);
bool is_integral(const QVec& v);
mpz_class gcd_of(const QVec& integral);

Q pow2(long n);

// Canonicalized p/q; mpq_class(p, q) alone is not.
Q frac(long p, long q);

}  // namespace toric
