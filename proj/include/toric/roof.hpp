#pragma once

#include <memory>
#include <optional>

#include "toric/expr.hpp"
#include "toric/pa.hpp"
#include "toric/polytope.hpp"

namespace toric {

// Closed concave function M_R -> R u {-inf}. Exact kinds (PA envelopes,
// indicators of polytopes and their wrappers) evaluate over Q; the others
// evaluate in double precision.
class Roof {
 public:
  enum class Kind { pa, indicator, analytic, supconv, restrict, scale, shift };

  Roof() = default;
  // Concave upper envelope of the lifted points (m_i, t_i); -inf off conv{m_i}.
  static Roof pa(int dim, const std::vector<QVec>& m, const QVec& t);
  static Roof indicator(ConvexBody body);
  // `singular_boundary` declares that values may tend to -inf at the boundary.
  static Roof analytic(Expr e, ConvexBody body, bool singular_boundary = false);

  Kind kind() const;
  int dim() const;
  bool is_exact() const;
  ConvexBody domain() const;

  double eval(const DVec& y) const;
  // Exact kinds only; nullopt stands for -inf.
  std::optional<Q> eval_exact(const QVec& y) const;
  // Exact kinds only: the same function as a PA envelope.
  Roof to_pa() const;

  // kind pa: envelope vertices in lexicographic order and their values.
  const std::vector<QVec>& points() const;
  const QVec& values() const;
  const Envelope& envelope() const;
  const Polytope& base() const;
  // kinds indicator, analytic, restrict.
  const ConvexBody& body() const;
  // kind analytic.
  const Expr& expr() const;
  bool singular_boundary() const;
  // kinds supconv (first operand), restrict, scale, shift.
  const Roof& inner() const;
  // kind supconv: the operand with a polytope or ball domain.
  const Roof& other() const;
  // kind scale: factor a; kind shift: constant c.
  const Q& param() const;

  bool operator==(const Roof& o) const;
  bool operator!=(const Roof& o) const { return !(*this == o); }

  struct Node;

 private:
  explicit Roof(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  const Node& node() const;
  std::shared_ptr<const Node> n_;

  friend Roof restrict(const Roof&, const ConvexBody&);
  friend Roof add_constant(const Roof&, const Q&);
  friend Roof scale(const Roof&, const Q&);
  friend Roof sup_convolution(const Roof&, const Roof&);
};

Roof restrict(const Roof& f, const ConvexBody& body);
Roof add_constant(const Roof& f, const Q& c);
// y |-> a f(y / a), the a-th sup-convolution power; a = 0 gives the indicator of {0}.
Roof scale(const Roof& f, const Q& a);
// Exact pairwise sums when both operands are exact, else a lazily maximized
// node. Shifts are pulled out and scalings of a common base merge; other pairs
// of non-exact operands are rejected
// unless one of them is the indicator of a ball.
Roof sup_convolution(const Roof& f, const Roof& g);

// Exact kinds only.
Q sup_exact(const Roof& f);

// f^v(y) = inf_x (<y, x> - f(x)); lifted points (m_i, -c_i).
Roof lf_transform(const PAConcave& f);
// Pieces (m_j, -t_j) over the envelope vertices of an exact roof.
PAConcave lf_transform_inv(const Roof& r);

// conv{m_i} for a conical f.
Polytope stability_set(const PAConcave& f);

std::string to_string(const Roof& r);

}  // namespace toric
