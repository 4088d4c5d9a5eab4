#include "privopt/trunclap.hpp"

#include <cmath>
#include <stdexcept>

namespace privopt {

PrivacyParams::PrivacyParams(double eps, double del) : epsilon(eps), delta(del) {
  if (!(eps > 0.0)) throw std::domain_error("epsilon must be > 0");
  if (!(del > 0.0) || del > 1.0) throw std::domain_error("delta must be in (0, 1]");
}

double log_shift_term(double epsilon, double delta, double m) {
  // ln(m (e^eps - 1)/delta + 1): log1p/expm1 keeps small eps accurate;
  // above ~500 expm1 would overflow and the +-1 terms are below one ulp.
  if (epsilon > 500.0) return epsilon + std::log(m / delta);
  return std::log1p(m * std::expm1(epsilon) / delta);
}

double shift_width(double delta_sens, const PrivacyParams& privacy, int m) {
  if (!(delta_sens > 0.0)) throw std::domain_error("delta_sens must be > 0");
  if (m < 1) throw std::domain_error("m must be >= 1");
  return delta_sens / privacy.epsilon *
         log_shift_term(privacy.epsilon, privacy.delta, static_cast<double>(m));
}

TruncLaplace::TruncLaplace(double scale, double half_width)
    : scale_(scale), half_width_(half_width) {
  if (!(scale > 0.0)) throw std::domain_error("scale must be > 0");
  if (!(half_width > 0.0)) throw std::domain_error("half_width must be > 0");
  edge_ = std::exp(-half_width_ / scale_);
}

double TruncLaplace::pdf(double eta) const {
  if (eta < -half_width_ || eta > half_width_) return 0.0;
  double z = 2.0 * scale_ * (1.0 - edge_);
  return std::exp(-std::abs(eta) / scale_) / z;
}

double TruncLaplace::cdf(double eta) const {
  if (eta <= -half_width_) return 0.0;
  if (eta >= half_width_) return 1.0;
  double denom = 2.0 * (1.0 - edge_);
  if (eta <= 0.0) return (std::exp(eta / scale_) - edge_) / denom;
  return 1.0 - (std::exp(-eta / scale_) - edge_) / denom;
}

double TruncLaplace::inverse_cdf(double u) const {
  if (u < 0.0 || u > 1.0) throw std::domain_error("u must be in [0, 1]");
  if (u == 0.0) return -half_width_;
  if (u == 1.0) return half_width_;
  double span = 1.0 - edge_;
  if (u <= 0.5) return scale_ * std::log(edge_ + 2.0 * u * span);
  return -scale_ * std::log(edge_ + 2.0 * (1.0 - u) * span);
}

namespace {
double log_expm1(double x) {
  return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}
}  // namespace

double TruncLaplace::tail_mass_beyond(double delta_sens) const {
  if (delta_sens < 0.0) throw std::domain_error("delta_sens must be >= 0");
  if (delta_sens > 2.0 * half_width_)
    throw std::domain_error("delta_sens exceeds the support width 2s");
  if (delta_sens == 0.0) return 0.0;
  // Two symmetric tails of width delta_sens:
  //   P = (e^{delta/scale} - 1) / (e^{s/scale} - 1), capped at 1 when the
  // tails overlap (delta_sens > s).  Evaluated in logs so narrow scales
  // cannot overflow the exponentials.
  double mass =
      std::exp(log_expm1(delta_sens / scale_) - log_expm1(half_width_ / scale_));
  return mass < 1.0 ? mass : 1.0;
}

double laplace_sample(double scale, Rng& rng) {
  if (!(scale > 0.0)) throw std::domain_error("scale must be > 0");
  double u = rng.next_open();
  if (u < 0.5) return scale * std::log(2.0 * u);
  return -scale * std::log(2.0 * (1.0 - u));
}

}  // namespace privopt
