#include "qkdjam/bell.hpp"

#include <cmath>
#include <stdexcept>

#include "qkdjam/constants.hpp"

namespace qkdjam {

namespace {

constexpr double kCorrelationSlack = 1e-9;

void check_estimate(const ChshEstimate& est) {
  if (!std::isfinite(est.s_value) || est.s_value < 0.0 || est.s_value > 4.0) {
    throw std::domain_error("ChshEstimate: s_value must lie in [0, 4]");
  }
  if (!std::isfinite(est.sigma) || est.sigma <= 0.0) {
    throw std::domain_error("ChshEstimate: sigma must be positive");
  }
}

} // namespace

SecurityThreshold SecurityThreshold::sigma_multiple(double k) {
  if (!std::isfinite(k) || k <= 0.0) {
    throw std::domain_error("SecurityThreshold: sigma multiple must be > 0");
  }
  return SecurityThreshold{ThresholdMode::SigmaMultiple, k};
}

SecurityThreshold SecurityThreshold::p_value(double p) {
  if (!std::isfinite(p) || p <= 0.0 || p >= 1.0) {
    throw std::domain_error("SecurityThreshold: p-value must lie in (0, 1)");
  }
  return SecurityThreshold{ThresholdMode::PValue, p};
}

double SecurityThreshold::as_sigma_multiple() const {
  return mode == ThresholdMode::SigmaMultiple ? value : -normal_quantile(value);
}

double SecurityThreshold::as_p_value() const {
  return mode == ThresholdMode::PValue ? value : normal_lower_tail(-value);
}

double normal_lower_tail(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in (0, 1)");
  }
  // Rational tail approximation (Abramowitz & Stegun 26.2.22), then Newton
  // steps against erfc to full double precision.
  const double p_low = p < 0.5 ? p : 1.0 - p;
  const double t = std::sqrt(-2.0 * std::log(p_low));
  double z = t - (2.30753 + 0.27061 * t) / (1.0 + 0.99229 * t + 0.04481 * t * t);
  if (p < 0.5) {
    z = -z;
  }
  for (int i = 0; i < 4; ++i) {
    const double err = normal_lower_tail(z) - p;
    const double pdf =
        std::exp(-0.5 * z * z) / std::sqrt(2.0 * constants::pi);
    if (pdf <= 0.0) {
      break;
    }
    z -= err / pdf;
  }
  return z;
}

double chsh(double e_ab, double e_abp, double e_apb, double e_apbp) {
  for (double e : {e_ab, e_abp, e_apb, e_apbp}) {
    if (!std::isfinite(e) || std::abs(e) > 1.0 + kCorrelationSlack) {
      throw std::domain_error("chsh: correlation outside [-1, 1]");
    }
  }
  return std::abs(e_ab - e_abp + e_apb + e_apbp);
}

double jammed_s(double s, double alpha_rad) {
  if (!std::isfinite(s) || s < 0.0 || s > 4.0) {
    throw std::domain_error("jammed_s: s must lie in [0, 4]");
  }
  if (!std::isfinite(alpha_rad)) {
    throw std::domain_error("jammed_s: non-finite alpha");
  }
  return s * std::abs(std::cos(2.0 * alpha_rad));
}

double violation_sigmas(const ChshEstimate& est) {
  check_estimate(est);
  return (est.s_value - constants::chsh_classical_limit) / est.sigma;
}

double p_insecure(const ChshEstimate& est) {
  return normal_lower_tail(-violation_sigmas(est));
}

double target_s(const ChshEstimate& est, const SecurityThreshold& threshold) {
  check_estimate(est);
  return constants::chsh_classical_limit +
         threshold.as_sigma_multiple() * est.sigma;
}

std::optional<double> required_alpha(const ChshEstimate& est,
                                     const SecurityThreshold& threshold) {
  check_estimate(est);
  if (est.s_value <= constants::chsh_classical_limit) {
    throw std::domain_error("required_alpha: estimate does not violate the "
                            "classical limit; nothing to jam");
  }
  const double target = target_s(est, threshold);
  if (target >= est.s_value) {
    return std::nullopt; // already at or below the threshold
  }
  return 0.5 * std::acos(target / est.s_value);
}

} // namespace qkdjam
