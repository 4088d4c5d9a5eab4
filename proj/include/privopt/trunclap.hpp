#pragma once

#include "privopt/rng.hpp"

namespace privopt {

struct PrivacyParams {
  double epsilon;
  double delta;

  PrivacyParams(double eps, double del);
};

// ln(m (e^eps - 1)/delta + 1), stable across the whole epsilon range.
double log_shift_term(double epsilon, double delta, double m);

// Shift s = (delta_sens / eps) * ln(m * (e^eps - 1) / delta + 1), the
// deterministic offset that sizes the truncated noise support so a
// release never exceeds the true constraint vector.
double shift_width(double delta_sens, const PrivacyParams& privacy, int m);

// Laplace density restricted to [-half_width, half_width], renormalized.
// scale = delta_sens / epsilon in mechanism use.
class TruncLaplace {
 public:
  TruncLaplace(double scale, double half_width);

  double scale() const { return scale_; }
  double half_width() const { return half_width_; }

  double pdf(double eta) const;
  double cdf(double eta) const;

  // Exact inverse of cdf on [0, 1]; maps 0 -> -s and 1 -> s.
  double inverse_cdf(double u) const;

  double sample(Rng& rng) const { return inverse_cdf(rng.next_unit()); }

  // P[|eta| landing within delta_sens of either support edge], i.e.
  // P[eta < -s + delta_sens or eta > s - delta_sens], in closed form.
  // With scale = delta_sens/eps and s = shift_width(...) this equals
  // delta/m to machine precision.
  double tail_mass_beyond(double delta_sens) const;

 private:
  double scale_;
  double half_width_;
  double edge_;  // exp(-half_width / scale)
};

// Unbounded Laplace draw with the given scale (inverse-CDF transform on
// an open-interval uniform). Used by the baseline mechanism.
double laplace_sample(double scale, Rng& rng);

}  // namespace privopt
