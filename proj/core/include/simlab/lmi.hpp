#pragma once

#include <optional>

#include "simlab/types.hpp"

namespace simlab::lmi {

/// Shape of the third slack block. The first two are always P - I and
/// kappa I - P.
enum class BlockKind {
  Discrete,    // P - T* P T        (op = T)
  Continuous,  // -(B* P + P B)     (op = B, usually A - rate*I)
};

enum class Status {
  Feasible,    // min block eigenvalue reached the target
  Stalled,     // merit stopped improving well above the target
  IterBudget,  // Newton budget exhausted without resolution
};

struct FeasibilityResult {
  Status status = Status::IterBudget;
  Matrix p;                // best Hermitian iterate
  double min_slack = 0.0;  // its smallest block eigenvalue
  int newton_steps = 0;
};

/// Smallest eigenvalue over the three slack blocks evaluated at P.
double block_min_slack(BlockKind kind, const Matrix& op, double kappa, const Matrix& p);

/// Search for P with I <= P <= kappa I and the third block >= 0, all within
/// feas_target: log-det barrier over the shifted slack blocks, damped Newton
/// on the Hermitian parameter, level shift raised towards the max-min-slack
/// point. Newton directions come from a dense factorization at small sizes
/// and from Jacobi-preconditioned CG on the Hessian operator at large ones.
FeasibilityResult find_feasible(BlockKind kind, const Matrix& op, double kappa,
                                const TolerancePolicy& tol, double feas_target,
                                const Matrix* warm_start = nullptr);

}  // namespace simlab::lmi
