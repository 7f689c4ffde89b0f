#include "qkdjam/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkdjam/attack.hpp"

namespace qkdjam {

namespace {

void check_schedule(const FieldSchedule& schedule) {
  if (schedule.segments.empty()) {
    throw std::domain_error("FieldSchedule: needs at least one segment");
  }
  if (schedule.segments.front().start_time_s != 0.0) {
    throw std::domain_error("FieldSchedule: first segment must start at t = 0");
  }
  if (!(schedule.total_duration_s > 0.0)) {
    throw std::domain_error("FieldSchedule: total duration must be positive");
  }
  double prev = -1.0;
  for (const ScheduleSegment& seg : schedule.segments) {
    if (!std::isfinite(seg.alpha_rad)) {
      throw std::domain_error("FieldSchedule: non-finite rotation");
    }
    if (!(seg.start_time_s > prev)) {
      throw std::domain_error(
          "FieldSchedule: segment start times must be strictly increasing");
    }
    if (seg.start_time_s >= schedule.total_duration_s) {
      throw std::domain_error(
          "FieldSchedule: segment starts past the total duration");
    }
    prev = seg.start_time_s;
  }
}

void check_countermeasure(const CountermeasureModel& counter) {
  if (!(counter.baseline_qber >= 0.0 && counter.baseline_qber <= 0.5)) {
    throw std::domain_error("CountermeasureModel: baseline QBER out of range");
  }
  if (!(counter.qber_trigger > counter.baseline_qber &&
        counter.qber_trigger < 0.5)) {
    throw std::domain_error(
        "CountermeasureModel: trigger must lie in (baseline, 0.5)");
  }
  if (counter.kind == CountermeasureKind::TriggeredRealignment &&
      !(counter.realign_duration_s > 0.0)) {
    throw std::domain_error(
        "CountermeasureModel: realignment duration must be positive");
  }
  if (counter.kind == CountermeasureKind::ContinuousTracker &&
      !(counter.max_slew_rad_per_s > 0.0)) {
    throw std::domain_error("CountermeasureModel: slew rate must be positive");
  }
}

} // namespace

double FieldSchedule::alpha_at(double t_s) const {
  // last segment whose start <= t; segments are sorted
  auto it = std::upper_bound(
      segments.begin(), segments.end(), t_s,
      [](double t, const ScheduleSegment& s) { return t < s.start_time_s; });
  if (it == segments.begin()) {
    return segments.front().alpha_rad;
  }
  return std::prev(it)->alpha_rad;
}

double FieldSchedule::shortest_segment_s() const {
  double shortest = total_duration_s - segments.back().start_time_s;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    shortest = std::min(shortest, segments[i + 1].start_time_s -
                                      segments[i].start_time_s);
  }
  return shortest;
}

FieldSchedule FieldSchedule::constant(double alpha_rad, double duration_s) {
  return FieldSchedule{{ScheduleSegment{0.0, alpha_rad}}, duration_s};
}

FieldSchedule FieldSchedule::square_wave(double alpha_a, double alpha_b,
                                         double period_s, double duration_s) {
  if (!(period_s > 0.0)) {
    throw std::domain_error("square_wave: period must be positive");
  }
  FieldSchedule schedule;
  schedule.total_duration_s = duration_s;
  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * period_s;
    if (t >= duration_s) {
      break;
    }
    schedule.segments.push_back(
        ScheduleSegment{t, i % 2 == 0 ? alpha_a : alpha_b});
  }
  return schedule;
}

JammingTimeline simulate(const FieldSchedule& schedule,
                         const CountermeasureModel& counter,
                         double time_step_s,
                         const std::optional<ChshCriterion>& chsh_criterion) {
  check_schedule(schedule);
  check_countermeasure(counter);
  // the slack absorbs binary representation noise in segment boundaries
  if (!(time_step_s > 0.0) ||
      time_step_s > schedule.shortest_segment_s() / 10.0 * (1.0 + 1e-9)) {
    throw std::domain_error(
        "simulate: time step must be positive and at most a tenth of the "
        "shortest schedule segment");
  }

  const auto is_secure_residual = [&](double residual, double qber) {
    if (chsh_criterion) {
      const double s_jammed =
          jammed_s(chsh_criterion->unjammed.s_value, residual);
      const ChshEstimate jammed{s_jammed, chsh_criterion->unjammed.sigma};
      return violation_sigmas(jammed) > chsh_criterion->sigma_threshold;
    }
    return qber <= counter.qber_trigger;
  };

  const std::size_t n_steps = static_cast<std::size_t>(
      std::llround(schedule.total_duration_s / time_step_s));

  JammingTimeline timeline;
  timeline.time_step_s = time_step_s;
  timeline.total_duration_s = schedule.total_duration_s;
  timeline.samples.reserve(n_steps);

  double compensation = 0.0;
  bool realigning = false;
  double realign_end = 0.0;
  std::size_t secure_steps = 0;

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * time_step_s;
    const double alpha = schedule.alpha_at(t);

    switch (counter.kind) {
      case CountermeasureKind::TriggeredRealignment:
        if (realigning && t >= realign_end) {
          compensation = alpha; // realignment completes: snap to applied
          realigning = false;
        }
        break;
      case CountermeasureKind::ContinuousTracker: {
        const double max_move = counter.max_slew_rad_per_s * time_step_s;
        const double gap = alpha - compensation;
        compensation += std::clamp(gap, -max_move, max_move);
        break;
      }
      case CountermeasureKind::None:
        compensation = 0.0;
        break;
    }

    const double residual = alpha - compensation;
    const double qber = total_qber(counter.baseline_qber, residual);

    ChannelState state;
    if (realigning) {
      state = ChannelState::Realigning;
    } else if (counter.kind == CountermeasureKind::TriggeredRealignment &&
               qber > counter.qber_trigger) {
      realigning = true; // trigger fires; channel goes down for the window
      realign_end = t + counter.realign_duration_s;
      state = ChannelState::Realigning;
    } else if (is_secure_residual(residual, qber)) {
      state = ChannelState::Secure;
      ++secure_steps;
    } else {
      state = ChannelState::Jammed;
    }

    timeline.samples.push_back(
        TimelineSample{t, alpha, compensation, residual, qber, state});
  }

  timeline.availability =
      n_steps == 0 ? 0.0
                   : static_cast<double>(secure_steps) * time_step_s /
                         schedule.total_duration_s;
  return timeline;
}

double availability(const JammingTimeline& timeline) {
  if (timeline.samples.empty()) {
    throw std::domain_error("availability: empty timeline");
  }
  std::size_t secure = 0;
  for (const TimelineSample& s : timeline.samples) {
    if (s.state == ChannelState::Secure) {
      ++secure;
    }
  }
  return static_cast<double>(secure) * timeline.time_step_s /
         timeline.total_duration_s;
}

std::optional<double> min_toggle_period(const CountermeasureModel& counter,
                                        double alpha_target_rad) {
  if (!(alpha_target_rad >= 0.0)) {
    throw std::domain_error("min_toggle_period: alpha must be >= 0");
  }
  switch (counter.kind) {
    case CountermeasureKind::TriggeredRealignment:
      return counter.realign_duration_s;
    case CountermeasureKind::ContinuousTracker:
      return alpha_target_rad / counter.max_slew_rad_per_s;
    case CountermeasureKind::None:
      return std::nullopt;
  }
  return std::nullopt;
}

} // namespace qkdjam
