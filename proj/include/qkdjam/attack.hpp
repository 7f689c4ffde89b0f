#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qkdjam/bell.hpp"
#include "qkdjam/faraday.hpp"

namespace qkdjam {

/// A published Bell-test result: citation key, fiber distance, estimate.
struct ExperimentRecord {
  std::string label;
  double distance_km = 0.0;
  ChshEstimate estimate;
};

/// Everything an attacker needs for one experiment/threshold/medium triple.
struct AttackPlan {
  double alpha_rad = 0.0;   // required rotation, (0, pi/4]
  double s_tilde = 0.0;     // jammed CHSH target the rotation produces
  double b0l_min_T_m = 0.0; // alpha / V
  std::string medium_name;
  SecurityThreshold threshold;
};

/// Minimum field-length product (B0 L)_min = alpha / V, in T m.
/// Requires alpha > 0 and verdet > 0.
double b0l_min(double alpha_rad, double verdet_rad_per_T_m);

/// Full plan: required alpha from the estimate and threshold, field-length
/// product from the medium's Verdet constant. Returns nullopt when the
/// experiment is already at or below the threshold (no attack required).
std::optional<AttackPlan> plan_attack(const ExperimentRecord& experiment,
                                      const SecurityThreshold& threshold,
                                      const MediumSpec& medium);

/// Extra bit-error fraction a rotation alpha adds in a prepare-and-measure
/// protocol: sin^2(alpha).
double qber_increase(double alpha_rad);

/// Baseline and rotation errors composed as independent symmetric bit
/// flips: baseline + (1 - 2 baseline) sin^2(alpha), clamped to [0, 0.5].
/// Baseline must lie in [0, 0.5].
double total_qber(double baseline, double alpha_rad);

/// One row of the reference attack tables.
struct TableRow {
  std::string ref;
  double distance_km = 0.0;
  double s_meas = 0.0;
  double sigma = 0.0;
  double s_tilde = 0.0;
  double alpha_rad = 0.0;
  double b0l_min_T_m = 0.0;
};

/// Round half away from zero at two decimals; the rounding the table
/// reporter applies at every printed step.
double round2(double x);

/// Reproduces the reference attack table for one threshold. Values are
/// rounded to print precision at each step (S_tilde, then alpha, then the
/// Verdet constant entering (B0 L)_min, each to two decimals) so rows match
/// their published form; the underlying library API never rounds.
std::vector<TableRow> reference_table(std::span<const ExperimentRecord> experiments,
                                      const SecurityThreshold& threshold,
                                      const MediumSpec& medium);

} // namespace qkdjam
