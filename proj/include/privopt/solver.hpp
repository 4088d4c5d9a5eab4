#pragma once

#include "privopt/problem.hpp"

namespace privopt {

struct SolverOptions {
  double feas_tol = 1e-8;
  double pivot_tol = 1e-9;
  int max_iterations = 0;  // 0 picks a size-dependent default
};

// Dense two-phase simplex with Bland's anti-cycling pivot rule.
// Deterministic: identical inputs give identical outputs.
Solution solve_lp(const ConstrainedProblem& problem,
                  const SolverOptions& options = {});

// Primal active-set method for convex QP (objective x'Qx + c'x, min),
// equality subproblems solved through a dense KKT factorization.
Solution solve_qp(const ConstrainedProblem& problem,
                  const SolverOptions& options = {});

Solution solve(const ConstrainedProblem& problem,
               const SolverOptions& options = {});

// All basic feasible solutions of {x : Ax <= b}, deduplicated.  Test
// oracle for small systems only.
std::vector<Vector> enumerate_vertices(const Matrix& A, const Vector& b,
                                       double tol = 1e-9);

}  // namespace privopt
