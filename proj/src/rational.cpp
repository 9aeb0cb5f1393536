#include "toric/rational.hpp"

#include <cctype>
#include <cmath>

namespace toric {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::dimension_too_high: return "DimensionTooHigh";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::not_complete: return "NotComplete";
    case ErrorKind::support_mismatch: return "SupportMismatch";
    case ErrorKind::not_smooth: return "NotSmooth";
    case ErrorKind::not_conical: return "NotConical";
    case ErrorKind::syntax: return "SyntaxError";
    case ErrorKind::arity: return "ArityError";
    case ErrorKind::unknown_variable: return "UnknownVariable";
    case ErrorKind::unsupported_combination: return "UnsupportedCombination";
    case ErrorKind::point_outside_domain: return "PointOutsideDomain";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::no_tail_bound: return "NoTailBound";
    case ErrorKind::invalid_input: return "InvalidInput";
    case ErrorKind::precondition: return "PreconditionFailed";
  }
  return "Error";
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Q parse_decimal(std::string s, const std::string& orig) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    std::string e = s.substr(epos + 1);
    s = s.substr(0, epos);
    bool eneg = false;
    if (!e.empty() && (e[0] == '-' || e[0] == '+')) {
      eneg = e[0] == '-';
      e = e.substr(1);
    }
    if (!all_digits(e) || e.size() > 6)
      throw Error(ErrorKind::invalid_input, "bad rational literal '" + orig + "'");
    exp10 = std::stol(e) * (eneg ? -1 : 1);
  }
  std::string ip = s, fp;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    ip = s.substr(0, dot);
    fp = s.substr(dot + 1);
  }
  if (ip.empty() && fp.empty())
    throw Error(ErrorKind::invalid_input, "bad rational literal '" + orig + "'");
  if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
    throw Error(ErrorKind::invalid_input, "bad rational literal '" + orig + "'");
  mpz_class num(ip.empty() ? std::string("0") : ip + fp, 10);
  if (ip.empty()) num = mpz_class(fp, 10);
  exp10 -= static_cast<long>(fp.size());
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  Q r = exp10 >= 0 ? Q(num * p10) : Q(num, p10);
  r.canonicalize();
  return neg ? Q(-r) : r;
}

}  // namespace

Q parse_rational(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorKind::invalid_input, "empty rational literal");
  auto slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(s, raw);
  std::string a = s.substr(0, slash), b = s.substr(slash + 1);
  bool neg = false;
  if (!a.empty() && (a[0] == '-' || a[0] == '+')) {
    neg = a[0] == '-';
    a = a.substr(1);
  }
  if (!all_digits(a) || !all_digits(b))
    throw Error(ErrorKind::invalid_input, "bad rational literal '" + raw + "'");
  mpz_class den(b, 10);
  if (den == 0) throw Error(ErrorKind::invalid_input, "zero denominator in '" + raw + "'");
  Q r(mpz_class(a, 10), den);
  r.canonicalize();
  return neg ? Q(-r) : r;
}

std::string to_string(const Q& q) {
  Q c(q);
  c.canonicalize();
  return c.get_str();
}

Q frac(long p, long q) {
  if (q == 0) throw Error(ErrorKind::invalid_input, "zero denominator");
  Q r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const QVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

double to_double(const Q& q) { return q.get_d(); }

DVec to_double(const QVec& v) {
  DVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

Q from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::invalid_input, "non-finite value");
  return Q(x);
}

Q dot(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::dimension_mismatch, "dot: length mismatch");
  Q s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

QVec operator+(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::dimension_mismatch, "vector sum: length mismatch");
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVec operator-(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::dimension_mismatch, "vector difference: length mismatch");
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QVec operator*(const Q& s, const QVec& v) {
  QVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
  return r;
}

bool is_zero(const QVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

bool is_integral(const QVec& v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

mpz_class gcd_of(const QVec& v) {
  mpz_class g = 0;
  for (const auto& x : v) {
    mpz_class a = abs(x.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  }
  return g;
}

QVec primitive(const QVec& v) {
  if (is_zero(v)) return v;
  mpz_class l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  QVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = v[i] * l;
  mpz_class g = gcd_of(r);
  for (auto& x : r) x /= g;
  return r;
}

Q pow2(long n) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(std::labs(n)));
  return n >= 0 ? Q(p) : Q(mpz_class(1), p);
}

}  // namespace toric
