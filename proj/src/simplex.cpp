#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "privopt/solver.hpp"

namespace privopt {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

namespace {

// Dense tableau for the standard form  min c'v : Sv = rhs, v >= 0.
// Free variables are split v+ - v-, one slack per row, artificials only
// for rows whose slack enters with coefficient -1 after sign-normalizing
// the right-hand side.
struct Tableau {
  int m = 0;       // constraint rows
  int width = 0;   // columns incl. rhs
  int ncols = 0;   // structural + slack + artificial
  std::vector<double> data;
  std::vector<int> basis;
  std::vector<char> allowed;

  double* row(int i) { return data.data() + static_cast<std::size_t>(i) * width; }
  const double* row(int i) const {
    return data.data() + static_cast<std::size_t>(i) * width;
  }

  void pivot(int r, int s) {
    double* pr = row(r);
    double inv = 1.0 / pr[s];
    for (int j = 0; j < width; ++j) pr[j] *= inv;
    pr[s] = 1.0;
    for (int i = 0; i < m + 2; ++i) {
      if (i == r) continue;
      double* pi = row(i);
      double f = pi[s];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) pi[j] -= f * pr[j];
      pi[s] = 0.0;
    }
    basis[r] = s;
  }
};

// Bland's rule: entering column is the lowest-index eligible one, the
// leaving row breaks ratio ties by lowest basic index.
int bland_entering(const Tableau& t, int obj_row, double tol) {
  const double* rc = t.row(obj_row);
  for (int j = 0; j < t.ncols; ++j)
    if (t.allowed[j] && rc[j] < -tol) return j;
  return -1;
}

int bland_leaving(const Tableau& t, int s, double tol) {
  int r = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < t.m; ++i) {
    double a = t.row(i)[s];
    if (a > tol) {
      double ratio = t.row(i)[t.width - 1] / a;
      if (ratio < best - 1e-15 ||
          (ratio <= best + 1e-15 && (r == -1 || t.basis[i] < t.basis[r]))) {
        if (ratio < best) best = ratio;
        r = i;
      }
    }
  }
  return r;
}

}  // namespace

Solution solve_lp(const ConstrainedProblem& problem, const SolverOptions& options) {
  if (!problem.is_linear())
    throw std::invalid_argument("solve_lp needs a linear objective");
  const auto& obj = std::get<LinearObjective>(problem.objective);
  const Matrix& A = problem.constraints.A;
  const Vector& b = problem.constraints.b;
  const int m = problem.constraints.rows();
  const int n = problem.num_vars();
  if (obj.c.size() != n || b.size() != m)
    throw std::invalid_argument("inconsistent LP dimensions");

  // Column layout: structural (1 col per nonneg var, 2 per free var),
  // then slacks, then artificials.
  std::vector<int> col_of(n), neg_col_of(n, -1);
  int nstruct = 0;
  for (int j = 0; j < n; ++j) {
    col_of[j] = nstruct++;
    if (!problem.var_nonneg(j)) neg_col_of[j] = nstruct++;
  }
  std::vector<char> row_flip(m);
  int nart = 0;
  for (int i = 0; i < m; ++i) {
    row_flip[i] = b[i] < 0.0;
    if (row_flip[i]) ++nart;
  }

  Tableau t;
  t.m = m;
  t.ncols = nstruct + m + nart;
  t.width = t.ncols + 1;
  t.data.assign(static_cast<std::size_t>(m + 2) * t.width, 0.0);
  t.basis.assign(m, -1);
  t.allowed.assign(t.ncols, 1);

  const int rhs = t.width - 1;
  const int obj_row = m;
  const int phase1_row = m + 1;
  int art = nstruct + m;
  for (int i = 0; i < m; ++i) {
    double sign = row_flip[i] ? -1.0 : 1.0;
    double* pr = t.row(i);
    for (int j = 0; j < n; ++j) {
      double a = sign * A(i, j);
      pr[col_of[j]] = a;
      if (neg_col_of[j] >= 0) pr[neg_col_of[j]] = -a;
    }
    pr[nstruct + i] = sign;  // slack
    pr[rhs] = sign * b[i];
    if (row_flip[i]) {
      pr[art] = 1.0;
      t.basis[i] = art++;
    } else {
      t.basis[i] = nstruct + i;
    }
  }

  // Phase-2 cost row (internal minimization).
  double csign = obj.sense == Sense::Maximize ? -1.0 : 1.0;
  double* cr = t.row(obj_row);
  for (int j = 0; j < n; ++j) {
    cr[col_of[j]] = csign * obj.c[j];
    if (neg_col_of[j] >= 0) cr[neg_col_of[j]] = -csign * obj.c[j];
  }
  // Phase-1 cost row: sum of artificials, reduced against their rows.
  if (nart > 0) {
    double* p1 = t.row(phase1_row);
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] >= nstruct + m) {
        const double* pr = t.row(i);
        for (int j = 0; j < t.width; ++j) p1[j] -= pr[j];
        p1[t.basis[i]] = 0.0;
      }
    }
  }

  const double ptol = options.pivot_tol;
  const double bscale = std::max(1.0, b.size() ? b.cwiseAbs().maxCoeff() : 1.0);
  int maxit = options.max_iterations > 0 ? options.max_iterations
                                         : 1000 + 40 * (m + t.ncols);
  Solution sol;
  sol.x = Vector::Zero(n);
  int iters = 0;

  auto run_phase = [&](int cost_row) -> SolveStatus {
    for (;;) {
      if (iters >= maxit) return SolveStatus::MaxIterations;
      int s = bland_entering(t, cost_row, ptol);
      if (s < 0) return SolveStatus::Optimal;
      int r = bland_leaving(t, s, ptol);
      if (r < 0) return SolveStatus::Unbounded;
      t.pivot(r, s);
      ++iters;
    }
  };

  if (nart > 0) {
    SolveStatus ph1 = run_phase(phase1_row);
    if (ph1 != SolveStatus::Optimal) {
      sol.status = SolveStatus::MaxIterations;
      sol.iterations = iters;
      sol.note = "phase 1 stopped: " + to_string(ph1);
      return sol;
    }
    double infeas = -t.row(phase1_row)[rhs];
    if (infeas > options.feas_tol * bscale) {
      sol.status = SolveStatus::Infeasible;
      sol.iterations = iters;
      return sol;
    }
    // Pivot leftover artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] >= nstruct + m) {
        const double* pr = t.row(i);
        for (int j = 0; j < nstruct + m; ++j) {
          if (std::abs(pr[j]) > ptol) {
            t.pivot(i, j);
            ++iters;
            break;
          }
        }
      }
    }
    for (int j = nstruct + m; j < t.ncols; ++j) t.allowed[j] = 0;
  }

  SolveStatus ph2 = run_phase(obj_row);
  sol.iterations = iters;
  if (ph2 != SolveStatus::Optimal) {
    sol.status = ph2;
    if (ph2 == SolveStatus::MaxIterations)
      sol.note = "phase 2 hit the iteration limit";
    return sol;
  }

  for (int i = 0; i < m; ++i) {
    int c = t.basis[i];
    if (c < nstruct) {
      double v = t.row(i)[rhs];
      for (int j = 0; j < n; ++j) {
        if (col_of[j] == c) sol.x[j] += v;
        if (neg_col_of[j] == c) sol.x[j] -= v;
      }
    }
  }
  sol.objective = obj.c.dot(sol.x);
  sol.status = SolveStatus::Optimal;

  if (m > 0) {
    double resid = (A * sol.x - b).maxCoeff();
    if (resid > 10.0 * options.feas_tol * bscale) {
      sol.status = SolveStatus::MaxIterations;
      sol.note = "feasibility residual " + std::to_string(resid);
    }
  }
  return sol;
}

Solution solve(const ConstrainedProblem& problem, const SolverOptions& options) {
  return problem.is_linear() ? solve_lp(problem, options)
                             : solve_qp(problem, options);
}

}  // namespace privopt
