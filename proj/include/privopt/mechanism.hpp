#pragma once

#include <functional>
#include <vector>

#include "privopt/errors.hpp"
#include "privopt/problem.hpp"
#include "privopt/rng.hpp"
#include "privopt/solver.hpp"
#include "privopt/trunclap.hpp"

namespace privopt {

// Releases b_bar_i = max{b_i - s + eta_i, floor_i} for private rows, with
// eta_i i.i.d. truncated Laplace(scale delta/eps, support [-s, s]) and
// s = shift_width(delta, privacy, #private rows).  Non-private rows pass
// through unchanged.  The output is always componentwise <= b and
// >= floors.
Vector perturb_constraints(const Vector& b, const SensitivityModel& sens,
                           const PrivacyParams& privacy, Rng& rng);

// Deterministic core of the release, shared with tests that inject noise
// directly: out_i = max(b_i - shift + eta_i, floor_i) on private rows.
Vector apply_shift_and_noise(const Vector& b, const SensitivityModel& sens,
                             double shift, const Vector& eta);

// Same shift, but eta drawn from the unbounded Laplace(delta/eps);
// releases may exceed b, which is the point of this baseline.
Vector baseline_laplace_perturb(const Vector& b, const SensitivityModel& sens,
                                const PrivacyParams& privacy,
                                bool floor_at_zero, Rng& rng);

struct PrivateSolveOptions {
  // Probe {x : Ax <= floors} for nonemptiness before perturbing (skipped
  // automatically when any floor is -infinity).
  bool check_floors = true;
  double audit_tol = 1e-7;
  SolverOptions solver;
};

// Perturb the constraint vector, solve the perturbed problem, audit the
// result against the original constraints.  Throws InfeasibleFloorSystem
// if the floor probe fails and SolverFailure if the perturbed solve does
// not come back Optimal.
PrivateSolution solve_private(const ConstrainedProblem& problem,
                              const SensitivityModel& sens,
                              const PrivacyParams& privacy, Rng& rng,
                              const PrivateSolveOptions& options = {});

// Optimal (eps, 0)-DP release: the database-independent optimizer over
// {x : Ax <= floors}.  Throws NoPureDpMechanism when that set is empty.
Solution solve_pure_dp(const ConstrainedProblem& problem, const Vector& floors,
                       const SolverOptions& options = {});

struct FeasibilityReport {
  std::vector<int> violated;
  double max_violation = 0.0;
  bool feasible() const { return violated.empty(); }
};

FeasibilityReport audit_feasibility(const Matrix& A, const Vector& x,
                                    const Vector& b, double tol);

// Histogram-based (eps, delta) audit of a one-dimensional mechanism on the
// neighboring inputs b and b_prime.
struct DpAuditReport {
  double delta_hat = 0.0;       // sum over bins of max(P - e^eps * P', 0)
  double slack = 0.0;           // folded-noise bias bound + 3 std devs
  double max_overlap_ratio = 0.0;        // raw max P/P' over well-filled bins
  double max_overlap_ratio_normed = 0.0; // same, divided by its 3-sigma allowance
  int n_samples = 0;
  int n_bins = 0;
  double lo = 0.0;
  double hi = 0.0;
};

using ScalarMechanism = std::function<double(double, Rng&)>;

DpAuditReport empirical_dp_check(const ScalarMechanism& mechanism, double b,
                                 double b_prime, const PrivacyParams& privacy,
                                 int n_samples, int n_bins, Rng& rng);

inline DpAuditReport empirical_dp_check(const ScalarMechanism& mechanism,
                                        double b, double b_prime,
                                        const PrivacyParams& privacy,
                                        int n_samples, Rng& rng) {
  return empirical_dp_check(mechanism, b, b_prime, privacy, n_samples, 200, rng);
}

}  // namespace privopt
