#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace swdelay {

/// coeffs . x <= rhs
struct LinearConstraint {
  std::vector<double> coeffs;
  double rhs = 0.0;
};

struct VariableBounds {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  static VariableBounds free() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
};

/// maximize objective . x  subject to constraints and per-variable bounds.
struct LpProblem {
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  /// Empty means x >= 0 for every variable.
  std::vector<VariableBounds> bounds;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  /// Present (non-empty) iff status == Optimal.
  std::vector<double> variables;
};

struct LpOptions {
  std::size_t max_pivots = 10000;
  double tolerance = 1e-9;
};

/// Dense two-phase primal simplex with Bland's anti-cycling rule.
///
/// Throws DimensionMismatch for inconsistent inputs, InvalidArgument for a
/// lower bound above its upper bound, and IterationLimit once max_pivots is
/// exhausted.
LpSolution lp_solve(const LpProblem& problem, const LpOptions& options = {});

const char* to_string(LpStatus status);

}  // namespace swdelay
