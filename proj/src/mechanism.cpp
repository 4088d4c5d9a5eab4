#include "privopt/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace privopt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_model(const Vector& b, const SensitivityModel& sens) {
  if (sens.floors.size() != b.size())
    throw std::invalid_argument("sensitivity floors do not match b");
  if (!sens.private_rows.empty() &&
      static_cast<int>(sens.private_rows.size()) != b.size())
    throw std::invalid_argument("private_rows mask does not match b");
  if (!(sens.delta_sens > 0.0))
    throw std::domain_error("delta_sens must be > 0");
  for (int i = 0; i < b.size(); ++i) {
    if (b(i) < sens.floors(i))
      throw std::invalid_argument("b[" + std::to_string(i) +
                                  "] lies below its floor; sensitivity model is inconsistent");
  }
}

}  // namespace

Vector apply_shift_and_noise(const Vector& b, const SensitivityModel& sens,
                             double shift, const Vector& eta) {
  check_model(b, sens);
  if (eta.size() != b.size())
    throw std::invalid_argument("noise vector does not match b");
  Vector out = b;
  for (int i = 0; i < b.size(); ++i) {
    if (!sens.row_private(i)) continue;
    out(i) = std::max(b(i) - shift + eta(i), sens.floors(i));
  }
  return out;
}

Vector perturb_constraints(const Vector& b, const SensitivityModel& sens,
                           const PrivacyParams& privacy, Rng& rng) {
  check_model(b, sens);
  int m_priv = sens.num_private();
  if (m_priv == 0) return b;
  double s = shift_width(sens.delta_sens, privacy, m_priv);
  TruncLaplace noise(sens.delta_sens / privacy.epsilon, s);
  // One draw from the parent keys this call; one substream per row index.
  Rng call_stream = rng.split(rng.next_u64());
  Vector eta = Vector::Zero(b.size());
  for (int i = 0; i < b.size(); ++i) {
    if (!sens.row_private(i)) continue;
    Rng sub = call_stream.split(static_cast<std::uint64_t>(i));
    eta(i) = noise.sample(sub);
  }
  return apply_shift_and_noise(b, sens, s, eta);
}

Vector baseline_laplace_perturb(const Vector& b, const SensitivityModel& sens,
                                const PrivacyParams& privacy,
                                bool floor_at_zero, Rng& rng) {
  check_model(b, sens);
  int m_priv = sens.num_private();
  if (m_priv == 0) return b;
  double s = shift_width(sens.delta_sens, privacy, m_priv);
  double scale = sens.delta_sens / privacy.epsilon;
  Rng call_stream = rng.split(rng.next_u64());
  Vector out = b;
  for (int i = 0; i < b.size(); ++i) {
    if (!sens.row_private(i)) continue;
    Rng sub = call_stream.split(static_cast<std::uint64_t>(i));
    double eta = laplace_sample(scale, sub);
    out(i) = b(i) - s + eta;
    if (floor_at_zero) out(i) = std::max(out(i), 0.0);
  }
  return out;
}

PrivateSolution solve_private(const ConstrainedProblem& problem,
                              const SensitivityModel& sens,
                              const PrivacyParams& privacy, Rng& rng,
                              const PrivateSolveOptions& options) {
  const Vector& b = problem.constraints.b;
  check_model(b, sens);

  bool floors_finite = (sens.floors.array() > kNegInf).all();
  if (options.check_floors && floors_finite) {
    ConstrainedProblem probe = problem;
    probe.objective = LinearObjective{Vector::Zero(problem.num_vars()),
                                      Sense::Minimize};
    probe.constraints.b = sens.floors;
    Solution st = solve_lp(probe, options.solver);
    if (st.status == SolveStatus::Infeasible)
      throw InfeasibleFloorSystem(
          "the floor system {x : Ax <= b*} is empty (Assumption 1 fails)");
    if (st.status != SolveStatus::Optimal)
      throw SolverFailure("floor probe ended with status " + to_string(st.status));
  }

  PrivateSolution ps;
  ps.seed = rng.seed();
  ps.b_bar = perturb_constraints(b, sens, privacy, rng);

  ConstrainedProblem perturbed = problem;
  perturbed.constraints.b = ps.b_bar;
  Solution sol = solve(perturbed, options.solver);
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("perturbed problem: " + to_string(sol.status) +
                        (sol.note.empty() ? "" : " (" + sol.note + ")"));

  ps.x = sol.x;
  ps.objective = sol.objective;
  ps.solver_result = sol;
  ps.feasible_wrt_original =
      audit_feasibility(problem.constraints.A, sol.x, b, options.audit_tol)
          .feasible();
  return ps;
}

Solution solve_pure_dp(const ConstrainedProblem& problem, const Vector& floors,
                       const SolverOptions& options) {
  if (floors.size() != problem.constraints.rows())
    throw std::invalid_argument("floors do not match the constraint system");
  if (!(floors.array() > kNegInf).all())
    throw std::invalid_argument("solve_pure_dp requires finite floors");
  ConstrainedProblem fixed = problem;
  fixed.constraints.b = floors;
  Solution sol = solve(fixed, options);
  if (sol.status == SolveStatus::Infeasible)
    throw NoPureDpMechanism(
        "the intersection of feasible sets is empty: no (eps, 0)-DP mechanism exists");
  return sol;
}

FeasibilityReport audit_feasibility(const Matrix& A, const Vector& x,
                                    const Vector& b, double tol) {
  if (A.cols() != x.size() || A.rows() != b.size())
    throw std::invalid_argument("audit dimensions are inconsistent");
  FeasibilityReport report;
  Vector resid = A * x - b;
  for (int i = 0; i < resid.size(); ++i) {
    if (resid(i) > tol) {
      report.violated.push_back(i);
      report.max_violation = std::max(report.max_violation, resid(i));
    }
  }
  return report;
}

DpAuditReport empirical_dp_check(const ScalarMechanism& mechanism, double b,
                                 double b_prime, const PrivacyParams& privacy,
                                 int n_samples, int n_bins, Rng& rng) {
  if (n_samples < 1 || n_bins < 1)
    throw std::invalid_argument("n_samples and n_bins must be positive");

  std::vector<double> sp(static_cast<std::size_t>(n_samples));
  std::vector<double> sq(static_cast<std::size_t>(n_samples));
  Rng ra = rng.split(rng.next_u64());
  Rng rb = rng.split(rng.next_u64());
  for (int i = 0; i < n_samples; ++i) sp[i] = mechanism(b, ra);
  for (int i = 0; i < n_samples; ++i) sq[i] = mechanism(b_prime, rb);

  double lo = std::min(*std::min_element(sp.begin(), sp.end()),
                       *std::min_element(sq.begin(), sq.end()));
  double hi = std::max(*std::max_element(sp.begin(), sp.end()),
                       *std::max_element(sq.begin(), sq.end()));
  if (hi <= lo) hi = lo + 1.0;
  double width = (hi - lo) / n_bins;

  std::vector<int> cp(static_cast<std::size_t>(n_bins), 0);
  std::vector<int> cq(static_cast<std::size_t>(n_bins), 0);
  auto bin_of = [&](double v) {
    int k = static_cast<int>((v - lo) / width);
    return std::clamp(k, 0, n_bins - 1);
  };
  for (double v : sp) ++cp[static_cast<std::size_t>(bin_of(v))];
  for (double v : sq) ++cq[static_cast<std::size_t>(bin_of(v))];

  DpAuditReport rep;
  rep.n_samples = n_samples;
  rep.n_bins = n_bins;
  rep.lo = lo;
  rep.hi = hi;

  // Bins wholly inside the overlap of the two empirical supports; bins
  // that straddle a support edge legitimately exceed the e^eps ratio.
  double olo = std::max(*std::min_element(sp.begin(), sp.end()),
                        *std::min_element(sq.begin(), sq.end()));
  double ohi = std::min(*std::max_element(sp.begin(), sp.end()),
                        *std::max_element(sq.begin(), sq.end()));
  double fuzz = 1e-12 * (hi - lo);

  double e_eps = std::exp(privacy.epsilon);
  double n = static_cast<double>(n_samples);
  double var_sum = 0.0;
  double bias_sum = 0.0;
  for (int k = 0; k < n_bins; ++k) {
    double p = cp[static_cast<std::size_t>(k)] / n;
    double q = cq[static_cast<std::size_t>(k)] / n;
    rep.delta_hat += std::max(p - e_eps * q, 0.0);
    var_sum += (p * (1.0 - p) + e_eps * e_eps * q * (1.0 - q)) / n;
    // E[max(N(0,sigma), 0)] = 0.4 sigma; folded noise inflates the sum of
    // clipped terms even when the true excess is zero.
    bias_sum += 0.4 * std::sqrt((p + e_eps * e_eps * q) / n);
    int a = cp[static_cast<std::size_t>(k)];
    int c = cq[static_cast<std::size_t>(k)];
    bool inside = lo + k * width >= olo - fuzz && lo + (k + 1) * width <= ohi + fuzz;
    if (inside && a >= 25 && c >= 25) {
      double ratio = p / q;
      double allowance =
          1.0 + 3.0 * std::sqrt(1.0 / a + 1.0 / c);
      rep.max_overlap_ratio = std::max(rep.max_overlap_ratio, ratio);
      rep.max_overlap_ratio_normed =
          std::max(rep.max_overlap_ratio_normed, ratio / allowance);
    }
  }
  rep.slack = bias_sum + 3.0 * std::sqrt(var_sum);
  return rep;
}

}  // namespace privopt
