#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace qkdjam {

enum class BellFamily { Phi, Psi };
enum class BellSign { Plus, Minus };

/// One of the four maximally entangled polarization Bell states.
///
/// Only the family determines the linear-polarization correlation sign
/// (+1 for Phi, -1 for Psi). The +/- sign is carried for completeness but
/// has no effect on any correlation computed here; tests pin that down so
/// nobody chases a phantom degree of freedom.
struct EntangledState {
  BellFamily family = BellFamily::Phi;
  BellSign sign = BellSign::Plus;

  double correlation_sign() const {
    return family == BellFamily::Phi ? 1.0 : -1.0;
  }
};

inline constexpr EntangledState phi_plus{BellFamily::Phi, BellSign::Plus};
inline constexpr EntangledState phi_minus{BellFamily::Phi, BellSign::Minus};
inline constexpr EntangledState psi_plus{BellFamily::Psi, BellSign::Plus};
inline constexpr EntangledState psi_minus{BellFamily::Psi, BellSign::Minus};

/// Two analyzer dial settings for one party, in radians. Angles are kept
/// as given (they are physical dial positions); canonical_angle() reduces
/// to [0, pi) when callers want a normal form.
struct BasisPair {
  double primary_angle = 0.0;
  double secondary_angle = 0.0;
};

/// Joint measurement configuration for a Bell test.
///
/// arm_rotation_alpha is the rotation applied to Alice's arm. Sign
/// convention: positive alpha shifts Alice's effective analyzer angle by
/// +alpha, equivalently rotates her photon's polarization frame by -alpha.
struct MeasurementSettings {
  BasisPair alice;
  BasisPair bob;
  double arm_rotation_alpha = 0.0;
};

/// The basis choice that saturates the Tsirelson bound for Phi+:
/// Alice (0, 45) degrees, Bob (22.5, 67.5) degrees.
MeasurementSettings tsirelson_settings();

/// Same/different coincidence tallies for one joint analyzer setting.
struct CoincidenceCounts {
  std::uint64_t n_same = 0;
  std::uint64_t n_diff = 0;

  std::uint64_t total() const { return n_same + n_diff; }
};

/// Estimated correlation from counts, with its binomial standard error.
struct CorrelationEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Reduce an angle to [0, pi). Analyzer settings are pi-periodic.
double canonical_angle(double theta_rad);

/// Quantum correlation E(a, b) = s * cos(2(a - b)), s = +1 Phi / -1 Psi.
/// Throws std::domain_error for non-finite angles.
double correlation(const EntangledState& state, double a_rad, double b_rad);

/// p(A = B | a, b) = (1 + E(a, b)) / 2.
double same_outcome_probability(const EntangledState& state, double a_rad,
                                double b_rad);

/// Returns settings with alpha added to the arm rotation.
MeasurementSettings apply_arm_rotation(MeasurementSettings settings,
                                       double alpha_rad);

/// Number of joint settings in a CHSH run.
inline constexpr std::size_t kJointSettingCount = 4;

/// Effective (alice, bob) analyzer angles for the four joint settings, in
/// CHSH order (a,b), (a,b'), (a',b), (a',b'), with the arm rotation folded
/// into Alice's angles.
std::array<std::pair<double, double>, kJointSettingCount> joint_angles(
    const MeasurementSettings& settings);

/// Analytic correlations for the four joint settings, CHSH order.
std::array<double, kJointSettingCount> analytic_correlations(
    const EntangledState& state, const MeasurementSettings& settings);

/// Deterministic per-partition seed derivation (splitmix64 of seed and
/// index). Monte Carlo batches partitioned across workers must draw their
/// sub-seeds from this so results stay reproducible.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index);

/// Draws n_pairs coincidence outcomes per joint setting, Bernoulli with
/// p = same_outcome_probability under the rotated settings. Setting i uses
/// derive_stream_seed(seed, i), so the four tallies are independent streams
/// and the whole result is a pure function of (state, settings, n_pairs,
/// seed). Throws std::domain_error if n_pairs == 0.
std::array<CoincidenceCounts, kJointSettingCount> sample_coincidences(
    const EntangledState& state, const MeasurementSettings& settings,
    std::uint64_t n_pairs, std::uint64_t seed);

/// E_hat = 2 n_same/total - 1, std error 2*sqrt(p(1-p)/total).
/// Throws std::domain_error on zero total.
CorrelationEstimate estimate_correlation(const CoincidenceCounts& counts);

} // namespace qkdjam
