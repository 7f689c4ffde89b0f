#include "qkdjam/polarization.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "qkdjam/constants.hpp"

namespace qkdjam {

namespace {

void require_finite(double angle, const char* what) {
  if (!std::isfinite(angle)) {
    throw std::domain_error(std::string("non-finite angle: ") + what);
  }
}

} // namespace

MeasurementSettings tsirelson_settings() {
  using constants::pi;
  return MeasurementSettings{
      BasisPair{0.0, pi / 4.0},
      BasisPair{pi / 8.0, 3.0 * pi / 8.0},
      0.0,
  };
}

double canonical_angle(double theta_rad) {
  require_finite(theta_rad, "canonical_angle");
  double reduced = std::fmod(theta_rad, constants::pi);
  if (reduced < 0.0) {
    reduced += constants::pi;
  }
  // fmod can land exactly on pi after the negative fixup
  if (reduced >= constants::pi) {
    reduced -= constants::pi;
  }
  return reduced;
}

double correlation(const EntangledState& state, double a_rad, double b_rad) {
  require_finite(a_rad, "alice");
  require_finite(b_rad, "bob");
  return state.correlation_sign() * std::cos(2.0 * (a_rad - b_rad));
}

double same_outcome_probability(const EntangledState& state, double a_rad,
                                double b_rad) {
  return 0.5 * (1.0 + correlation(state, a_rad, b_rad));
}

MeasurementSettings apply_arm_rotation(MeasurementSettings settings,
                                       double alpha_rad) {
  require_finite(alpha_rad, "arm rotation");
  settings.arm_rotation_alpha += alpha_rad;
  return settings;
}

std::array<std::pair<double, double>, kJointSettingCount> joint_angles(
    const MeasurementSettings& settings) {
  const double a = settings.alice.primary_angle + settings.arm_rotation_alpha;
  const double ap = settings.alice.secondary_angle + settings.arm_rotation_alpha;
  const double b = settings.bob.primary_angle;
  const double bp = settings.bob.secondary_angle;
  return {{{a, b}, {a, bp}, {ap, b}, {ap, bp}}};
}

std::array<double, kJointSettingCount> analytic_correlations(
    const EntangledState& state, const MeasurementSettings& settings) {
  std::array<double, kJointSettingCount> result{};
  const auto angles = joint_angles(settings);
  for (std::size_t i = 0; i < kJointSettingCount; ++i) {
    result[i] = correlation(state, angles[i].first, angles[i].second);
  }
  return result;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over seed advanced by the stream index
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::array<CoincidenceCounts, kJointSettingCount> sample_coincidences(
    const EntangledState& state, const MeasurementSettings& settings,
    std::uint64_t n_pairs, std::uint64_t seed) {
  if (n_pairs == 0) {
    throw std::domain_error("sample_coincidences: n_pairs must be >= 1");
  }
  std::array<CoincidenceCounts, kJointSettingCount> counts{};
  const auto angles = joint_angles(settings);
  for (std::size_t i = 0; i < kJointSettingCount; ++i) {
    const double p =
        same_outcome_probability(state, angles[i].first, angles[i].second);
    std::mt19937_64 rng(derive_stream_seed(seed, i));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::uint64_t same = 0;
    for (std::uint64_t k = 0; k < n_pairs; ++k) {
      if (uniform(rng) < p) {
        ++same;
      }
    }
    counts[i] = CoincidenceCounts{same, n_pairs - same};
  }
  return counts;
}

CorrelationEstimate estimate_correlation(const CoincidenceCounts& counts) {
  const std::uint64_t total = counts.total();
  if (total == 0) {
    throw std::domain_error("estimate_correlation: zero total count");
  }
  const double p_hat =
      static_cast<double>(counts.n_same) / static_cast<double>(total);
  const double e_hat = 2.0 * p_hat - 1.0;
  const double std_error =
      2.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(total));
  return CorrelationEstimate{e_hat, std_error};
}

} // namespace qkdjam
