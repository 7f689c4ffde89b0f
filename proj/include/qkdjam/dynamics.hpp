#pragma once

#include <optional>
#include <vector>

#include "qkdjam/bell.hpp"
#include "qkdjam/constants.hpp"

namespace qkdjam {

/// One piecewise-constant segment of the attacker's rotation program.
/// alpha_rad is the net Faraday rotation the applied field imposes while
/// the segment is active (V * B0 * L, precomputed by the caller).
struct ScheduleSegment {
  double start_time_s = 0.0;
  double alpha_rad = 0.0;
};

/// Attacker rotation program: segments with strictly increasing start
/// times, the first at t = 0, all inside [0, total_duration).
struct FieldSchedule {
  std::vector<ScheduleSegment> segments;
  double total_duration_s = 0.0;

  /// Applied rotation at time t (last segment whose start <= t).
  double alpha_at(double t_s) const;
  /// Duration of the shortest segment (the last one runs to the end).
  double shortest_segment_s() const;

  static FieldSchedule constant(double alpha_rad, double duration_s);
  /// Alternating segments of alpha_a / alpha_b, each period_s long,
  /// starting with alpha_a at t = 0.
  static FieldSchedule square_wave(double alpha_a, double alpha_b,
                                   double period_s, double duration_s);
};

enum class CountermeasureKind { TriggeredRealignment, ContinuousTracker, None };

/// Alice and Bob's polarization-alignment countermeasure.
///  - TriggeredRealignment: compensation frozen until QBER exceeds
///    qber_trigger, then the channel spends realign_duration_s realigning
///    and compensation snaps to the applied rotation at the window's end.
///  - ContinuousTracker: compensation follows the applied rotation with
///    angular speed capped at max_slew_rad_per_s.
///  - None: compensation stays zero.
/// qber_trigger doubles as the secure/jammed classification threshold for
/// every kind.
struct CountermeasureModel {
  CountermeasureKind kind = CountermeasureKind::None;
  double qber_trigger = 0.05;
  double realign_duration_s = 5.0;
  double max_slew_rad_per_s = 40.0 * constants::pi;
  double baseline_qber = 0.0;
};

enum class ChannelState { Secure, Jammed, Realigning };

struct TimelineSample {
  double t_s = 0.0;
  double alpha_applied_rad = 0.0;
  double compensation_rad = 0.0;
  double residual_rad = 0.0; // alpha_applied - compensation
  double qber = 0.0;
  ChannelState state = ChannelState::Secure;
};

/// Fixed-step simulation result. Sample k covers [k dt, (k+1) dt).
struct JammingTimeline {
  std::vector<TimelineSample> samples;
  double availability = 0.0; // SECURE time / total duration
  double time_step_s = 0.0;
  double total_duration_s = 0.0;
};

/// Optional secure/jammed criterion based on Bell violation instead of
/// QBER: the channel counts as secure while the jammed value of the
/// unjammed estimate still violates by more than sigma_threshold standard
/// deviations. Realignment still triggers on QBER.
struct ChshCriterion {
  ChshEstimate unjammed;
  double sigma_threshold = 1.7;
};

/// Steps the attack schedule against the countermeasure with explicit
/// fixed-step integration. time_step must be positive and at most a tenth
/// of the shortest schedule segment. Pure function of its arguments.
/// Throws std::domain_error on invalid schedule ordering or step.
JammingTimeline simulate(const FieldSchedule& schedule,
                         const CountermeasureModel& counter, double time_step_s,
                         const std::optional<ChshCriterion>& chsh_criterion = {});

/// SECURE time fraction of a timeline. Throws std::domain_error when empty.
double availability(const JammingTimeline& timeline);

/// Slowest field-toggle period that still defeats the countermeasure:
/// the realignment window for the triggered kind, alpha_target / max_slew
/// for the tracker. Returns nullopt for CountermeasureKind::None (nothing
/// to defeat). alpha_target must be non-negative.
std::optional<double> min_toggle_period(const CountermeasureModel& counter,
                                        double alpha_target_rad);

} // namespace qkdjam
