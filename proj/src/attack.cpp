#include "qkdjam/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkdjam {

double b0l_min(double alpha_rad, double verdet_rad_per_T_m) {
  if (!(verdet_rad_per_T_m > 0.0)) {
    throw std::domain_error("b0l_min: Verdet constant must be > 0");
  }
  if (!(alpha_rad > 0.0)) {
    throw std::domain_error("b0l_min: rotation angle must be > 0");
  }
  return alpha_rad / verdet_rad_per_T_m;
}

std::optional<AttackPlan> plan_attack(const ExperimentRecord& experiment,
                                      const SecurityThreshold& threshold,
                                      const MediumSpec& medium) {
  const auto alpha = required_alpha(experiment.estimate, threshold);
  if (!alpha) {
    return std::nullopt;
  }
  AttackPlan plan;
  plan.alpha_rad = *alpha;
  plan.s_tilde = jammed_s(experiment.estimate.s_value, *alpha);
  plan.b0l_min_T_m = b0l_min(*alpha, medium.verdet());
  plan.medium_name = medium.name;
  plan.threshold = threshold;
  return plan;
}

double qber_increase(double alpha_rad) {
  if (!std::isfinite(alpha_rad)) {
    throw std::domain_error("qber_increase: non-finite alpha");
  }
  const double s = std::sin(alpha_rad);
  return s * s;
}

double total_qber(double baseline, double alpha_rad) {
  if (!(baseline >= 0.0 && baseline <= 0.5)) {
    throw std::domain_error("total_qber: baseline must lie in [0, 0.5]");
  }
  const double combined =
      baseline + (1.0 - 2.0 * baseline) * qber_increase(alpha_rad);
  return std::clamp(combined, 0.0, 0.5);
}

double round2(double x) {
  return std::copysign(std::floor(std::abs(x) * 100.0 + 0.5), x) / 100.0;
}

std::vector<TableRow> reference_table(
    std::span<const ExperimentRecord> experiments,
    const SecurityThreshold& threshold, const MediumSpec& medium) {
  std::vector<TableRow> rows;
  rows.reserve(experiments.size());
  const double verdet_2dp = round2(medium.verdet());
  for (const ExperimentRecord& exp : experiments) {
    const double s_tilde = round2(target_s(exp.estimate, threshold));
    if (s_tilde >= exp.estimate.s_value) {
      throw std::domain_error("reference_table: experiment " + exp.label +
                              " is already at or below the threshold");
    }
    const double alpha =
        round2(0.5 * std::acos(s_tilde / exp.estimate.s_value));
    rows.push_back(TableRow{
        exp.label,
        exp.distance_km,
        exp.estimate.s_value,
        exp.estimate.sigma,
        s_tilde,
        alpha,
        round2(b0l_min(alpha, verdet_2dp)),
    });
  }
  return rows;
}

} // namespace qkdjam
