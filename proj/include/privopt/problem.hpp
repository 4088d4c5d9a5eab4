#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace privopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Sense { Maximize, Minimize };

struct LinearObjective {
  Vector c;
  Sense sense = Sense::Maximize;
};

// Objective x'Qx + c'x, minimized. Q must be symmetric PSD.
struct QuadraticObjective {
  Matrix Q;
  Vector c;
};

// Inequality system A x <= b (every row is <=).
struct ConstraintSystem {
  Matrix A;
  Vector b;

  int rows() const { return static_cast<int>(A.rows()); }
  int cols() const { return static_cast<int>(A.cols()); }
};

struct ConstrainedProblem {
  std::variant<LinearObjective, QuadraticObjective> objective;
  ConstraintSystem constraints;
  // Variables are free unless flagged here. Empty means all free.
  std::vector<bool> nonneg;

  int num_vars() const { return constraints.cols(); }
  bool is_linear() const {
    return std::holds_alternative<LinearObjective>(objective);
  }
  bool var_nonneg(int j) const {
    return !nonneg.empty() && nonneg[static_cast<std::size_t>(j)];
  }
  double objective_value(const Vector& x) const {
    if (is_linear()) return std::get<LinearObjective>(objective).c.dot(x);
    const auto& q = std::get<QuadraticObjective>(objective);
    return x.dot(q.Q * x) + q.c.dot(x);
  }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIterations };

std::string to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  int iterations = 0;
  std::string note;  // residual / failure diagnostics
};

// Sensitivity Delta = max_{D ~ D'} ||b(D) - b(D')||_1 plus per-row floors
// b*_i = inf_D b(D)_i.  Floors may be -infinity.  Rows whose b-entry does
// not depend on the database are marked non-private; they are released
// unchanged and do not count toward the shift's m.
struct SensitivityModel {
  double delta_sens = 0.0;
  Vector floors;
  std::vector<bool> private_rows;  // empty means every row is private

  int rows() const { return static_cast<int>(floors.size()); }
  bool row_private(int i) const {
    return private_rows.empty() || private_rows[static_cast<std::size_t>(i)];
  }
  int num_private() const {
    if (private_rows.empty()) return rows();
    int k = 0;
    for (bool p : private_rows) k += p ? 1 : 0;
    return k;
  }
};

struct PrivateSolution {
  Vector b_bar;
  Vector x;
  double objective = 0.0;
  std::uint64_t seed = 0;
  bool feasible_wrt_original = false;
  Solution solver_result;
};

}  // namespace privopt
