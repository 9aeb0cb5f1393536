#pragma once

#include "toric/rational.hpp"

namespace toric {

enum class LPStatus { optimal, infeasible, unbounded };

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  Q value;
  QVec x;
};

// Exact two-phase simplex with Bland's rule over free variables:
// maximize c.x subject to A x <= b and E x = f.
LPResult lp_maximize(const QVec& c, const QMat& A, const QVec& b, const QMat& E = {},
                     const QVec& f = {});

bool lp_feasible(int n, const QMat& A, const QVec& b, const QMat& E = {}, const QVec& f = {});

}  // namespace toric
