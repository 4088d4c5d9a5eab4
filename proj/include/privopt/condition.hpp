#pragma once

#include <optional>

#include "privopt/problem.hpp"
#include "privopt/trunclap.hpp"

namespace privopt {

enum class NormIndex { One, Two, Inf };

NormIndex dual_norm(NormIndex p);
double vector_norm(const Vector& v, NormIndex p);

enum class CondMethod { Diagonal, SigmaMin, StrongStableLP, BruteForce };

struct CondSpec {
  NormIndex p = NormIndex::Inf;
  NormIndex q = NormIndex::One;
  CondMethod method = CondMethod::BruteForce;
};

// alpha_{inf,1} of a positive diagonal system: sum of 1/a_i.
double cond_diag(const Vector& diag);

// 1 / sigma_min(A) for square nonsingular A; upper-bounds alpha_{2,2}.
double cond_sigma_min(const Matrix& A);

// The alpha-bar LP for strongly stable systems (Ax < 0 solvable):
//   max 1'u  s.t.  1 - z <= u'A <= z,  u >= 0,  1'z = 1.
// Throws NotStronglyStable when the stability probe fails and
// SolverFailure when the alpha-bar LP itself is infeasible or unbounded.
double cond_strong_stable(const Matrix& A);

// Grid-plus-polish estimate of alpha_{p,q}(A) over row supports with
// linearly independent rows.  Test oracle, small systems only.
double cond_bruteforce(const Matrix& A, NormIndex p, NormIndex q);

double condition_number(const Matrix& A, const CondSpec& spec);

// Objective-gap guarantee 2 L delta / eps * alpha * ln(m (e^eps - 1)/delta + 1),
// with alpha the caller-supplied alpha_{p,q}(A) * m^(1/p) aggregate.
double upper_bound(double lipschitz, double delta_sens,
                   const PrivacyParams& privacy, int m, double alpha);

// Matching lower bound for positive diagonal systems,
// delta/(4 eps) * sum(1/a_i) * ln((e^eps - 1)/(2 delta) + 1); requires
// delta <= 1/2.
double lower_bound(double delta_sens, const PrivacyParams& privacy,
                   const Vector& diag);

struct BoundReport {
  double upper = 0.0;
  std::optional<double> lower;
  double alpha_used = 0.0;
  NormIndex p_chosen = NormIndex::Inf;
};

// Upper bound with the supplied aggregate; the lower bound is added when
// a positive diagonal is given (then alpha_used = sum 1/a_i at p = inf).
BoundReport bound_report(double lipschitz, double delta_sens,
                         const PrivacyParams& privacy, int m, double alpha,
                         NormIndex p_chosen,
                         const std::optional<Vector>& diag = std::nullopt);

}  // namespace privopt
