#pragma once

#include <optional>

namespace qkdjam {

/// A measured (or predicted) CHSH value with its standard deviation.
/// Valid range: 0 <= s_value <= 4 (algebraic maximum), sigma >= 0.
struct ChshEstimate {
  double s_value = 0.0;
  double sigma = 0.0;
};

enum class ThresholdMode { SigmaMultiple, PValue };

/// Security threshold below which Alice and Bob stop trusting the channel.
/// The two modes are interconvertible through the one-sided Gaussian tail:
/// p = Phi(-k), k = -Phi^-1(p).
struct SecurityThreshold {
  ThresholdMode mode = ThresholdMode::SigmaMultiple;
  double value = 0.0;

  static SecurityThreshold sigma_multiple(double k);
  static SecurityThreshold p_value(double p);

  /// Threshold expressed as a sigma multiple k (converted when needed).
  double as_sigma_multiple() const;
  /// Threshold expressed as a one-sided p-value.
  double as_p_value() const;
};

/// Standard normal lower-tail CDF Phi(z).
double normal_lower_tail(double z);

/// Inverse of normal_lower_tail; p must lie in (0, 1).
double normal_quantile(double p);

/// S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|. Each |E| may exceed 1 by at
/// most 1e-9 (numerical slack); more throws std::domain_error.
double chsh(double e_ab, double e_abp, double e_apb, double e_apbp);

/// CHSH value after one arm's polarization frame is rotated by alpha:
/// S * |cos(2 alpha)|. s must lie in [0, 4].
double jammed_s(double s, double alpha_rad);

/// (S - 2) / sigma; the number of standard deviations of Bell violation.
/// Throws std::domain_error if sigma <= 0.
double violation_sigmas(const ChshEstimate& est);

/// One-sided probability that the true S is at or below the classical
/// limit of 2, i.e. Phi(-violation_sigmas). This is the probability with
/// which Alice and Bob would conclude their channel is insecure.
double p_insecure(const ChshEstimate& est);

/// Smallest rotation angle that drags the estimate down to the security
/// threshold: alpha = acos(S_target / S) / 2 with S_target = 2 + k*sigma.
/// Result lies in (0, pi/4]. Returns nullopt when the estimate is already
/// at or below the target (no attack needed). Throws std::domain_error when
/// s_value <= 2 or sigma <= 0. Never rounds; reporting conventions live in
/// the table reporter, not here.
std::optional<double> required_alpha(const ChshEstimate& est,
                                     const SecurityThreshold& threshold);

/// The jammed target S_target = 2 + k*sigma for a threshold.
double target_s(const ChshEstimate& est, const SecurityThreshold& threshold);

} // namespace qkdjam
