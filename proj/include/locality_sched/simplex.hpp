#pragma once

#include <cstddef>
#include <vector>

namespace locsched {

// Minimize objective . x subject to the listed constraints and x >= 0.
struct LinearConstraint {
  enum class Relation { Equal, LessEqual };
  std::vector<double> coeffs;  // dense, one per variable
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
};

struct SimplexSolution {
  double objective = 0.0;
  std::vector<double> x;
};

// Dense two-phase simplex with Bland's rule (anti-cycling). Built for small
// dense problems; comparisons use absolute tolerance 1e-9. Throws
// std::runtime_error on infeasible or unbounded programs and on iteration
// overrun.
SimplexSolution solve_simplex(const LinearProgram& lp);

}  // namespace locsched
