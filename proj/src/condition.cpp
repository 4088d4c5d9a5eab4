#include "privopt/condition.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "privopt/errors.hpp"
#include "privopt/solver.hpp"

namespace privopt {

NormIndex dual_norm(NormIndex p) {
  switch (p) {
    case NormIndex::One: return NormIndex::Inf;
    case NormIndex::Two: return NormIndex::Two;
    case NormIndex::Inf: return NormIndex::One;
  }
  return NormIndex::Two;
}

double vector_norm(const Vector& v, NormIndex p) {
  switch (p) {
    case NormIndex::One: return v.lpNorm<1>();
    case NormIndex::Two: return v.norm();
    case NormIndex::Inf: return v.lpNorm<Eigen::Infinity>();
  }
  return v.norm();
}

double cond_diag(const Vector& diag) {
  if (diag.size() == 0) throw std::domain_error("empty diagonal");
  double sum = 0.0;
  for (int i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0))
      throw std::domain_error("diagonal entries must be positive");
    sum += 1.0 / diag(i);
  }
  return sum;
}

double cond_sigma_min(const Matrix& A) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("cond_sigma_min needs a square matrix");
  Eigen::JacobiSVD<Matrix> svd(A);
  double smin = svd.singularValues().minCoeff();
  if (smin <= 1e-12)
    throw SingularMatrix("sigma_min below 1e-12");
  return 1.0 / smin;
}

double cond_strong_stable(const Matrix& A) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());

  // Stability probe: min t s.t. Ax - t 1 <= 0, |x|_inf <= 1; strongly
  // stable iff the optimum is strictly negative.
  {
    ConstrainedProblem probe;
    Matrix P(m + 2 * n, n + 1);
    P.setZero();
    Vector pb = Vector::Zero(m + 2 * n);
    P.block(0, 0, m, n) = A;
    P.block(0, n, m, 1).setConstant(-1.0);
    for (int j = 0; j < n; ++j) {
      P(m + j, j) = 1.0;
      pb(m + j) = 1.0;
      P(m + n + j, j) = -1.0;
      pb(m + n + j) = 1.0;
    }
    Vector c = Vector::Zero(n + 1);
    c(n) = 1.0;
    probe.objective = LinearObjective{c, Sense::Minimize};
    probe.constraints = {P, pb};
    Solution st = solve_lp(probe);
    if (st.status != SolveStatus::Optimal)
      throw SolverFailure("stability probe LP: " + to_string(st.status));
    if (!(st.objective < -1e-9))
      throw NotStronglyStable("Ax < 0 has no solution");
  }

  // alpha-bar LP over (u, z): max 1'u with
  //   A'u - z <= 0, -A'u - z <= -1, 1'z = 1, u >= 0.
  ConstrainedProblem lp;
  Matrix L(2 * n + 2, m + n);
  L.setZero();
  Vector lb = Vector::Zero(2 * n + 2);
  L.block(0, 0, n, m) = A.transpose();
  L.block(0, m, n, n) = -Matrix::Identity(n, n);
  L.block(n, 0, n, m) = -A.transpose();
  L.block(n, m, n, n) = -Matrix::Identity(n, n);
  lb.segment(n, n).setConstant(-1.0);
  L.block(2 * n, m, 1, n).setConstant(1.0);
  lb(2 * n) = 1.0;
  L.block(2 * n + 1, m, 1, n).setConstant(-1.0);
  lb(2 * n + 1) = -1.0;
  Vector c = Vector::Zero(m + n);
  c.head(m).setConstant(1.0);
  lp.objective = LinearObjective{c, Sense::Maximize};
  lp.constraints = {L, lb};
  lp.nonneg.assign(static_cast<std::size_t>(m + n), false);
  for (int i = 0; i < m; ++i) lp.nonneg[static_cast<std::size_t>(i)] = true;

  Solution sol = solve_lp(lp);
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("alpha-bar LP: " + to_string(sol.status));
  return sol.objective;
}

namespace {

// Maximize norm_{p*}(u) / norm_{q*}(A_S' u) over the unit simplex of the
// support; the ratio is scale-free, so the simplex is enough.
double support_best(const Matrix& At, NormIndex pstar, NormIndex qstar,
                    const std::vector<int>& support) {
  const int k = static_cast<int>(support.size());
  const int n = static_cast<int>(At.rows());

  auto value = [&](const Vector& u) {
    Vector atu = Vector::Zero(n);
    for (int i = 0; i < k; ++i) atu += u(i) * At.col(support[i]);
    double denom = vector_norm(atu, qstar);
    if (denom <= 1e-300) return 0.0;
    return vector_norm(u, pstar) / denom;
  };

  Vector best_u = Vector::Constant(k, 1.0 / k);
  double best = value(best_u);
  if (k > 1) {
    // Coarse simplex sweep, resolution chosen by support size.
    int res;
    switch (k) {
      case 2: res = 512; break;
      case 3: res = 96; break;
      case 4: res = 40; break;
      case 5: res = 24; break;
      case 6: res = 16; break;
      default: res = 10; break;
    }
    Vector u(k);
    std::vector<int> comp(static_cast<std::size_t>(k), 0);
    comp[0] = res;
    for (;;) {
      for (int i = 0; i < k; ++i) u(i) = static_cast<double>(comp[i]) / res;
      double v = value(u);
      if (v > best) {
        best = v;
        best_u = u;
      }
      // next composition of res into k nonnegative parts
      int i = k - 2;
      while (i >= 0 && comp[i] == 0) --i;
      if (i < 0) break;
      --comp[i];
      int rest = res;
      for (int j = 0; j <= i; ++j) rest -= comp[j];
      comp[i + 1] = rest;
      for (int j = i + 2; j < k; ++j) comp[j] = 0;
    }
    // Pattern-search polish with shrinking step.
    double h = 1.0 / res;
    for (int sweep = 0; sweep < 200 && h > 1e-12; ++sweep) {
      bool improved = false;
      for (int a = 0; a < k; ++a) {
        for (int bidx = 0; bidx < k; ++bidx) {
          if (a == bidx) continue;
          Vector u2 = best_u;
          double step = std::min(h, u2(bidx));
          if (step <= 0.0) continue;
          u2(a) += step;
          u2(bidx) -= step;
          double v = value(u2);
          if (v > best) {
            best = v;
            best_u = u2;
            improved = true;
          }
        }
      }
      if (!improved) h *= 0.5;
    }
  }
  return best;
}

}  // namespace

double cond_bruteforce(const Matrix& A, NormIndex p, NormIndex q) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (m > 8 || n > 8)
    throw DimensionTooLarge("cond_bruteforce handles m, n <= 8");
  Matrix At = A.transpose();
  NormIndex pstar = dual_norm(p);
  NormIndex qstar = dual_norm(q);

  double best = 0.0;
  int max_support = std::min(m, n);
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> support;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) support.push_back(i);
    if (static_cast<int>(support.size()) > max_support) continue;
    Matrix rows(static_cast<int>(support.size()), n);
    for (int i = 0; i < rows.rows(); ++i) rows.row(i) = A.row(support[i]);
    Eigen::ColPivHouseholderQR<Matrix> qr(rows.transpose());
    qr.setThreshold(1e-10);
    if (qr.rank() != rows.rows()) continue;
    best = std::max(best, support_best(At, pstar, qstar, support));
  }
  return best;
}

double condition_number(const Matrix& A, const CondSpec& spec) {
  switch (spec.method) {
    case CondMethod::Diagonal: {
      if (A.rows() != A.cols())
        throw std::invalid_argument("Diagonal method needs a square matrix");
      Vector d = A.diagonal();
      Matrix off = A - Matrix(d.asDiagonal());
      if (off.cwiseAbs().maxCoeff() > 0.0)
        throw std::invalid_argument("Diagonal method needs a diagonal matrix");
      return cond_diag(d);
    }
    case CondMethod::SigmaMin:
      return cond_sigma_min(A);
    case CondMethod::StrongStableLP:
      return cond_strong_stable(A);
    case CondMethod::BruteForce:
      return cond_bruteforce(A, spec.p, spec.q);
  }
  throw std::invalid_argument("unknown condition method");
}

double upper_bound(double lipschitz, double delta_sens,
                   const PrivacyParams& privacy, int m, double alpha) {
  if (!(lipschitz > 0.0)) throw std::domain_error("L must be > 0");
  if (!(delta_sens > 0.0)) throw std::domain_error("delta_sens must be > 0");
  if (m < 1) throw std::domain_error("m must be >= 1");
  if (!(alpha > 0.0)) throw std::domain_error("alpha must be > 0");
  double log_term =
      log_shift_term(privacy.epsilon, privacy.delta, static_cast<double>(m));
  return 2.0 * lipschitz * delta_sens / privacy.epsilon * alpha * log_term;
}

BoundReport bound_report(double lipschitz, double delta_sens,
                         const PrivacyParams& privacy, int m, double alpha,
                         NormIndex p_chosen, const std::optional<Vector>& diag) {
  BoundReport report;
  report.alpha_used = alpha;
  report.p_chosen = p_chosen;
  report.upper = upper_bound(lipschitz, delta_sens, privacy, m, alpha);
  if (diag) report.lower = lower_bound(delta_sens, privacy, *diag);
  return report;
}

double lower_bound(double delta_sens, const PrivacyParams& privacy,
                   const Vector& diag) {
  if (!(delta_sens > 0.0)) throw std::domain_error("delta_sens must be > 0");
  if (privacy.delta > 0.5)
    throw std::domain_error("lower bound needs delta <= 1/2");
  double alpha = cond_diag(diag);
  double log_term = log_shift_term(privacy.epsilon, 2.0 * privacy.delta, 1.0);
  return delta_sens / (4.0 * privacy.epsilon) * alpha * log_term;
}

}  // namespace privopt
