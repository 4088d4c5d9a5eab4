#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "privopt/errors.hpp"
#include "privopt/solver.hpp"

namespace privopt {

namespace {

// Inequality rows plus nonneg bounds folded into one system R x <= r.
void folded_rows(const ConstrainedProblem& p, Matrix& R, Vector& r) {
  const int m = p.constraints.rows();
  const int n = p.num_vars();
  int extra = 0;
  for (int j = 0; j < n; ++j)
    if (p.var_nonneg(j)) ++extra;
  R.setZero(m + extra, n);
  r.setZero(m + extra);
  R.topRows(m) = p.constraints.A;
  r.head(m) = p.constraints.b;
  int k = m;
  for (int j = 0; j < n; ++j) {
    if (p.var_nonneg(j)) {
      R(k, j) = -1.0;
      r(k) = 0.0;
      ++k;
    }
  }
}

bool rows_independent(const Matrix& R, const std::vector<int>& w, double tol) {
  if (w.empty()) return true;
  Matrix W(static_cast<int>(w.size()), R.cols());
  for (int i = 0; i < W.rows(); ++i) W.row(i) = R.row(w[i]);
  Eigen::ColPivHouseholderQR<Matrix> qr(W.transpose());
  qr.setThreshold(tol);
  return qr.rank() == W.rows();
}

}  // namespace

Solution solve_qp(const ConstrainedProblem& problem, const SolverOptions& options) {
  if (problem.is_linear())
    throw std::invalid_argument("solve_qp needs a quadratic objective");
  const auto& obj = std::get<QuadraticObjective>(problem.objective);
  const int n = problem.num_vars();
  if (obj.Q.rows() != n || obj.Q.cols() != n || obj.c.size() != n)
    throw std::invalid_argument("inconsistent QP dimensions");

  Matrix Q = 0.5 * (obj.Q + obj.Q.transpose());
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (lo < -1e-9 * scale)
      throw std::invalid_argument("Q is not positive semidefinite");
  }
  Matrix H = 2.0 * Q;  // Hessian of x'Qx + c'x

  Matrix R;
  Vector r;
  folded_rows(problem, R, r);
  const int mall = static_cast<int>(R.rows());

  Solution sol;
  sol.x = Vector::Zero(n);

  // Feasible start from a zero-objective simplex run.
  if (mall > 0) {
    ConstrainedProblem feas;
    feas.objective = LinearObjective{Vector::Zero(n), Sense::Minimize};
    feas.constraints = {R, r};
    // nonneg already folded into R
    Solution st = solve_lp(feas, options);
    if (st.status != SolveStatus::Optimal) {
      sol.status = st.status == SolveStatus::Infeasible ? SolveStatus::Infeasible
                                                        : SolveStatus::MaxIterations;
      sol.note = "feasibility phase: " + to_string(st.status);
      sol.iterations = st.iterations;
      return sol;
    }
    sol.x = st.x;
  }

  const double act_tol = 1e-9 * std::max(1.0, r.size() ? r.cwiseAbs().maxCoeff() : 1.0);
  std::vector<int> work;
  for (int i = 0; i < mall && static_cast<int>(work.size()) < n; ++i) {
    if (std::abs(R.row(i).dot(sol.x) - r(i)) <= act_tol) {
      work.push_back(i);
      if (!rows_independent(R, work, 1e-10)) work.pop_back();
    }
  }

  Vector x = sol.x;
  double ridge = 0.0;
  const int maxit =
      options.max_iterations > 0 ? options.max_iterations : 200 + 20 * (mall + n);
  int zero_steps = 0;
  int iters = 0;

  while (iters < maxit) {
    ++iters;
    const int k = static_cast<int>(work.size());
    Matrix K(n + k, n + k);
    K.setZero();
    K.topLeftCorner(n, n) = H;
    if (ridge > 0.0) K.topLeftCorner(n, n).diagonal().array() += ridge;
    for (int i = 0; i < k; ++i) {
      K.block(0, n + i, n, 1) = R.row(work[i]).transpose();
      K.block(n + i, 0, 1, n) = R.row(work[i]);
    }
    Vector rhs(n + k);
    rhs.head(n) = -(H * x + obj.c);
    rhs.tail(k).setZero();

    Eigen::FullPivLU<Matrix> lu(K);
    lu.setThreshold(1e-12);
    if (lu.rank() < n + k) {
      if (ridge == 0.0) {
        ridge = 1e-10 * std::max(1.0, H.trace() / n);
        --iters;
        continue;
      }
      sol.status = SolveStatus::MaxIterations;
      sol.note = "singular KKT system";
      sol.x = x;
      sol.objective = problem.objective_value(x);
      sol.iterations = iters;
      return sol;
    }
    Vector dz = lu.solve(rhs);
    Vector d = dz.head(n);
    Vector lambda = dz.tail(k);

    if (d.lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      int drop = -1;
      double worst = -1e-8;
      for (int i = 0; i < k; ++i) {
        if (lambda(i) < worst) {
          worst = lambda(i);
          drop = i;
        }
      }
      if (drop < 0) {
        sol.status = SolveStatus::Optimal;
        sol.x = x;
        sol.objective = problem.objective_value(x);
        sol.iterations = iters;
        return sol;
      }
      work.erase(work.begin() + drop);
      zero_steps = 0;
      continue;
    }

    double alpha = 1.0;
    int block = -1;
    for (int i = 0; i < mall; ++i) {
      if (std::find(work.begin(), work.end(), i) != work.end()) continue;
      double rate = R.row(i).dot(d);
      if (rate > 1e-12) {
        double room = r(i) - R.row(i).dot(x);
        double t = std::max(room, 0.0) / rate;
        if (t < alpha - 1e-15) {
          alpha = t;
          block = i;
        }
      }
    }
    x += alpha * d;
    if (block >= 0) {
      work.push_back(block);
      if (!rows_independent(R, work, 1e-10)) work.pop_back();
      if (alpha <= 1e-14) {
        if (++zero_steps > mall + 2) {
          sol.status = SolveStatus::MaxIterations;
          sol.note = "stalled at a degenerate corner";
          sol.x = x;
          sol.objective = problem.objective_value(x);
          sol.iterations = iters;
          return sol;
        }
      } else {
        zero_steps = 0;
      }
    }
  }

  sol.status = SolveStatus::MaxIterations;
  sol.note = "active-set iteration limit";
  sol.x = x;
  sol.objective = problem.objective_value(x);
  sol.iterations = iters;
  return sol;
}

std::vector<Vector> enumerate_vertices(const Matrix& A, const Vector& b, double tol) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (n < 1 || n > 8 || m > 20)
    throw DimensionTooLarge("enumerate_vertices handles n <= 8, m <= 20");
  std::vector<Vector> vertices;
  if (m < n) return vertices;

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Matrix As(n, n);
  Vector bs(n);
  for (;;) {
    for (int i = 0; i < n; ++i) {
      As.row(i) = A.row(idx[i]);
      bs(i) = b(idx[i]);
    }
    Eigen::FullPivLU<Matrix> lu(As);
    lu.setThreshold(1e-12);
    if (lu.rank() == n) {
      Vector x = lu.solve(bs);
      if (((A * x - b).array() <= tol).all()) {
        bool dup = false;
        for (const auto& v : vertices) {
          if ((v - x).lpNorm<Eigen::Infinity>() <= tol) {
            dup = true;
            break;
          }
        }
        if (!dup) vertices.push_back(x);
      }
    }
    // next n-combination of [0, m)
    int k = n - 1;
    while (k >= 0 && idx[k] == m - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return vertices;
}

}  // namespace privopt
