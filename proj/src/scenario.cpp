#include "qkdjam/scenario.hpp"

#include <cmath>

#include "qkdjam/constants.hpp"
#include "qkdjam/polarization.hpp"

namespace qkdjam {

using nlohmann::json;

namespace {

constexpr double kFigureGridLow = 1.8;
constexpr double kFigureGridHigh = 3.0;

ScenarioMode parse_mode(const std::string& text) {
  if (text == "verdet") return ScenarioMode::Verdet;
  if (text == "plan") return ScenarioMode::Plan;
  if (text == "chsh_sim" || text == "chsh-sim") return ScenarioMode::ChshSim;
  if (text == "qber") return ScenarioMode::Qber;
  if (text == "dynamics") return ScenarioMode::Dynamics;
  if (text == "tables") return ScenarioMode::Tables;
  if (text == "figure1") return ScenarioMode::Figure1;
  throw ConfigError("unknown mode '" + text + "'");
}

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ConfigError(where + ": missing numeric field '" + key + "'");
  }
  return obj[key].get<double>();
}

SecurityThreshold parse_threshold(const json& node) {
  if (!node.is_object()) {
    throw ConfigError("threshold: expected an object");
  }
  const bool has_sigma = node.contains("sigma_multiple");
  const bool has_p = node.contains("p_value");
  if (has_sigma == has_p) {
    throw ConfigError(
        "threshold: give exactly one of 'sigma_multiple' or 'p_value'");
  }
  try {
    if (has_sigma) {
      return SecurityThreshold::sigma_multiple(
          get_number(node, "sigma_multiple", "threshold"));
    }
    return SecurityThreshold::p_value(get_number(node, "p_value", "threshold"));
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("threshold: ") + e.what());
  }
}

FieldSchedule parse_schedule(const json& node) {
  if (node.contains("constant")) {
    const json& c = node["constant"];
    return FieldSchedule::constant(get_number(c, "alpha_rad", "schedule"),
                                   get_number(c, "duration_s", "schedule"));
  }
  if (node.contains("square_wave")) {
    const json& w = node["square_wave"];
    return FieldSchedule::square_wave(get_number(w, "alpha_a_rad", "schedule"),
                                      get_number(w, "alpha_b_rad", "schedule"),
                                      get_number(w, "period_s", "schedule"),
                                      get_number(w, "duration_s", "schedule"));
  }
  if (!node.contains("segments") || !node["segments"].is_array()) {
    throw ConfigError("schedule: expected 'segments', 'constant', or "
                      "'square_wave'");
  }
  FieldSchedule schedule;
  schedule.total_duration_s = get_number(node, "total_duration_s", "schedule");
  for (const json& seg : node["segments"]) {
    schedule.segments.push_back(
        ScheduleSegment{get_number(seg, "start_time_s", "schedule"),
                        get_number(seg, "alpha_rad", "schedule")});
  }
  return schedule;
}

CountermeasureModel parse_countermeasure(const json& node) {
  CountermeasureModel counter;
  const std::string kind = node.contains("kind") && node["kind"].is_string()
                               ? node["kind"].get<std::string>()
                               : "";
  if (kind == "triggered_realignment") {
    counter.kind = CountermeasureKind::TriggeredRealignment;
  } else if (kind == "continuous_tracker") {
    counter.kind = CountermeasureKind::ContinuousTracker;
  } else if (kind == "none") {
    counter.kind = CountermeasureKind::None;
  } else {
    throw ConfigError("countermeasure: unknown kind '" + kind + "'");
  }
  if (node.contains("qber_trigger")) {
    counter.qber_trigger = get_number(node, "qber_trigger", "countermeasure");
  }
  if (node.contains("realign_duration_s")) {
    counter.realign_duration_s =
        get_number(node, "realign_duration_s", "countermeasure");
  }
  if (node.contains("max_slew_rad_per_s")) {
    counter.max_slew_rad_per_s =
        get_number(node, "max_slew_rad_per_s", "countermeasure");
  }
  if (node.contains("baseline_qber")) {
    counter.baseline_qber = get_number(node, "baseline_qber", "countermeasure");
  }
  return counter;
}

EntangledState parse_state(const std::string& text) {
  if (text == "phi+") return phi_plus;
  if (text == "phi-") return phi_minus;
  if (text == "psi+") return psi_plus;
  if (text == "psi-") return psi_minus;
  throw ConfigError("unknown entangled state '" + text + "'");
}

std::string state_name(ChannelState state) {
  switch (state) {
    case ChannelState::Secure: return "SECURE";
    case ChannelState::Jammed: return "JAMMED";
    case ChannelState::Realigning: return "REALIGNING";
  }
  return "?";
}

Report verdet_report(const ScenarioConfig& config) {
  const MediumSpec& medium = *config.medium;
  Report report;
  report.columns = {"medium",
                    "kind",
                    "wavelength_nm",
                    "verdet_rad_per_T_m",
                    "electron_density_per_m3",
                    "b0_tesla",
                    "length_m",
                    "beta_rad"};
  std::vector<Cell> row;
  row.push_back(text_cell(medium.name));
  switch (medium.kind) {
    case MediumKind::DielectricComposition:
      row.push_back(text_cell("dielectric_composition"));
      break;
    case MediumKind::FiberEmpirical:
      row.push_back(text_cell("fiber_empirical"));
      break;
    case MediumKind::DirectVerdet:
      row.push_back(text_cell("direct_verdet"));
      break;
  }
  row.push_back(medium.wavelength_m > 0.0
                    ? num_cell(format_general(medium.wavelength_m * 1e9))
                    : Cell{});
  const double verdet = medium.verdet();
  row.push_back(num_cell(format_general(verdet)));
  row.push_back(medium.kind == MediumKind::DielectricComposition
                    ? num_cell(format_general(medium.electron_density_per_m3()))
                    : Cell{});
  if (config.field) {
    row.push_back(num_cell(format_general(config.field->b0_tesla)));
    row.push_back(num_cell(format_general(config.field->length_m)));
    row.push_back(num_cell(format_general(faraday_angle(verdet, *config.field))));
  } else {
    row.push_back(Cell{});
    row.push_back(Cell{});
    row.push_back(Cell{});
  }
  report.rows.push_back(std::move(row));
  return report;
}

Report plan_report(const ScenarioConfig& config) {
  const ExperimentRecord& exp = *config.experiment;
  const MediumSpec& medium = *config.medium;
  Report report;
  report.columns = {"experiment",  "distance_km",        "s_meas",
                    "sigma",       "threshold_sigmas",   "s_tilde",
                    "alpha_rad",   "qber_increase",      "medium",
                    "verdet_rad_per_T_m", "b0l_min_T_m", "status"};
  const auto plan = plan_attack(exp, *config.threshold, medium);
  std::vector<Cell> row;
  row.push_back(text_cell(exp.label));
  row.push_back(num_cell(format_general(exp.distance_km)));
  row.push_back(num_cell(format_general(exp.estimate.s_value)));
  row.push_back(num_cell(format_general(exp.estimate.sigma)));
  row.push_back(
      num_cell(format_general(config.threshold->as_sigma_multiple())));
  if (plan) {
    row.push_back(num_cell(format_general(plan->s_tilde)));
    row.push_back(num_cell(format_general(plan->alpha_rad)));
    row.push_back(num_cell(format_general(qber_increase(plan->alpha_rad))));
    row.push_back(text_cell(medium.name));
    row.push_back(num_cell(format_general(medium.verdet())));
    row.push_back(num_cell(format_general(plan->b0l_min_T_m)));
    row.push_back(text_cell("attack"));
  } else {
    row.push_back(Cell{});
    row.push_back(Cell{});
    row.push_back(Cell{});
    row.push_back(text_cell(medium.name));
    row.push_back(num_cell(format_general(medium.verdet())));
    row.push_back(Cell{});
    row.push_back(text_cell("no-attack-required"));
  }
  report.rows.push_back(std::move(row));
  return report;
}

Report chsh_sim_report(const ScenarioConfig& config) {
  const EntangledState state = config.state;
  MeasurementSettings settings = tsirelson_settings();
  settings = apply_arm_rotation(settings, config.alpha_rad);

  const auto counts = sample_coincidences(state, settings,
                                          config.monte_carlo.n_pairs,
                                          config.monte_carlo.seed);
  const auto analytic = analytic_correlations(state, settings);
  const auto angles = joint_angles(settings);

  static const char* kSettingNames[kJointSettingCount] = {"a,b", "a,b'", "a',b",
                                                          "a',b'"};
  Report report;
  report.columns = {"setting",    "alice_angle_rad", "bob_angle_rad",
                    "n_pairs",    "n_same",          "e_analytic",
                    "e_hat",      "e_std_error"};
  std::array<CorrelationEstimate, kJointSettingCount> estimates{};
  for (std::size_t i = 0; i < kJointSettingCount; ++i) {
    estimates[i] = estimate_correlation(counts[i]);
    report.rows.push_back(std::vector<Cell>{
        text_cell(kSettingNames[i]),
        num_cell(format_general(angles[i].first)),
        num_cell(format_general(angles[i].second)),
        num_cell(format_integer(static_cast<std::int64_t>(counts[i].total()))),
        num_cell(format_integer(static_cast<std::int64_t>(counts[i].n_same))),
        num_cell(format_general(analytic[i])),
        num_cell(format_general(estimates[i].value)),
        num_cell(format_general(estimates[i].std_error)),
    });
  }
  const double s_hat = chsh(estimates[0].value, estimates[1].value,
                            estimates[2].value, estimates[3].value);
  double var = 0.0;
  for (const auto& est : estimates) {
    var += est.std_error * est.std_error;
  }
  const double s_analytic =
      chsh(analytic[0], analytic[1], analytic[2], analytic[3]);
  report.metadata.emplace_back("alpha_rad", format_general(config.alpha_rad));
  report.metadata.emplace_back("seed",
                               format_integer(static_cast<std::int64_t>(
                                   config.monte_carlo.seed)));
  report.metadata.emplace_back("s_analytic", format_general(s_analytic));
  report.metadata.emplace_back("s_hat", format_general(s_hat));
  report.metadata.emplace_back("s_std_error", format_general(std::sqrt(var)));
  return report;
}

Report qber_report(const ScenarioConfig& config) {
  Report report;
  report.columns = {"alpha_rad", "qber_increase", "baseline_qber",
                    "total_qber"};
  report.rows.push_back(std::vector<Cell>{
      num_cell(format_general(config.alpha_rad)),
      num_cell(format_general(qber_increase(config.alpha_rad))),
      num_cell(format_general(config.baseline_qber)),
      num_cell(format_general(total_qber(config.baseline_qber,
                                         config.alpha_rad))),
  });
  return report;
}

Report dynamics_report(const ScenarioConfig& config) {
  const JammingTimeline timeline =
      simulate(*config.schedule, *config.countermeasure, config.time_step_s,
               config.chsh_criterion);
  Report report;
  report.columns = {"t_s",          "alpha_applied_rad", "compensation_rad",
                    "residual_rad", "qber",              "state"};
  report.rows.reserve(timeline.samples.size());
  for (const TimelineSample& s : timeline.samples) {
    report.rows.push_back(std::vector<Cell>{
        num_cell(format_general(s.t_s)),
        num_cell(format_general(s.alpha_applied_rad)),
        num_cell(format_general(s.compensation_rad)),
        num_cell(format_general(s.residual_rad)),
        num_cell(format_general(s.qber)),
        text_cell(state_name(s.state)),
    });
  }
  report.metadata.emplace_back("availability",
                               format_general(timeline.availability));
  report.metadata.emplace_back("time_step_s",
                               format_general(timeline.time_step_s));
  report.metadata.emplace_back("total_duration_s",
                               format_general(timeline.total_duration_s));
  return report;
}

Report tables_report(const ScenarioConfig& config) {
  const auto rows = reference_table(config.table_experiments,
                                    *config.threshold, *config.medium);
  Report report;
  report.columns = {"ref",     "d_km",      "s_meas", "sigma",
                    "s_tilde", "alpha_rad", "b0l_min_T_m"};
  for (const TableRow& row : rows) {
    report.rows.push_back(std::vector<Cell>{
        text_cell(row.ref),
        num_cell(format_fixed(row.distance_km, 0)),
        num_cell(format_fixed(row.s_meas, 2)),
        num_cell(format_fixed(row.sigma, 2)),
        num_cell(format_fixed(row.s_tilde, 2)),
        num_cell(format_fixed(row.alpha_rad, 2)),
        num_cell(format_fixed(row.b0l_min_T_m, 2)),
    });
  }
  return report;
}

Report figure1_report(const ScenarioConfig& config) {
  const Figure1Data data =
      figure1_data(config.experiment->estimate, config.alpha_rad, config.grid);
  Report report;
  report.columns = {"s", "density_original", "density_jammed"};
  for (const Figure1Row& row : data.rows) {
    report.rows.push_back(std::vector<Cell>{
        num_cell(format_general(row.s)),
        num_cell(format_general(row.density_original)),
        num_cell(format_general(row.density_jammed)),
    });
  }
  report.metadata.emplace_back("marker_classical_s",
                               format_general(data.marker_classical));
  report.metadata.emplace_back("marker_tsirelson_s",
                               format_general(data.marker_tsirelson));
  report.metadata.emplace_back(
      "mean_original", format_general(config.experiment->estimate.s_value));
  report.metadata.emplace_back("mean_jammed", format_general(data.jammed_mean));
  report.metadata.emplace_back(
      "sigma", format_general(config.experiment->estimate.sigma));
  report.metadata.emplace_back("alpha_rad", format_general(config.alpha_rad));
  return report;
}

} // namespace

double normal_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * constants::pi));
}

Figure1Data figure1_data(const ChshEstimate& est, double alpha_rad,
                         std::size_t grid) {
  if (grid < 2) {
    throw std::domain_error("figure1_data: grid must be >= 2");
  }
  if (!(est.sigma > 0.0)) {
    throw std::domain_error("figure1_data: sigma must be positive");
  }
  Figure1Data data;
  data.marker_classical = constants::chsh_classical_limit;
  data.marker_tsirelson = constants::tsirelson_bound;
  data.jammed_mean = jammed_s(est.s_value, alpha_rad);
  data.rows.reserve(grid);
  const double step =
      (kFigureGridHigh - kFigureGridLow) / static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < grid; ++i) {
    const double s = kFigureGridLow + static_cast<double>(i) * step;
    data.rows.push_back(Figure1Row{
        s,
        normal_pdf(s, est.s_value, est.sigma),
        normal_pdf(s, data.jammed_mean, est.sigma),
    });
  }
  return data;
}

ScenarioConfig parse_scenario(const json& doc, const MediumRegistry& media,
                              const ExperimentRegistry& experiments) {
  if (!doc.is_object()) {
    throw ConfigError("scenario: expected a JSON object");
  }
  if (!doc.contains("mode") || !doc["mode"].is_string()) {
    throw ConfigError("scenario: missing string field 'mode'");
  }
  ScenarioConfig config;
  config.mode = parse_mode(doc["mode"].get<std::string>());

  if (doc.contains("medium")) {
    const json& node = doc["medium"];
    if (node.is_string()) {
      const MediumSpec* preset = media.find(node.get<std::string>());
      if (preset == nullptr) {
        throw ConfigError("unknown medium preset '" +
                          node.get<std::string>() + "'");
      }
      config.medium = *preset;
    } else {
      config.medium = parse_medium(node, "inline medium");
    }
  }

  if (doc.contains("experiment")) {
    const json& node = doc["experiment"];
    if (node.is_string()) {
      const ExperimentRecord* preset =
          experiments.find(node.get<std::string>());
      if (preset == nullptr) {
        throw ConfigError("unknown experiment preset '" +
                          node.get<std::string>() + "'");
      }
      config.experiment = *preset;
    } else {
      config.experiment = parse_experiment(node, "inline experiment");
    }
  }

  if (doc.contains("threshold")) {
    config.threshold = parse_threshold(doc["threshold"]);
  }
  if (doc.contains("field")) {
    config.field = FieldRegion{get_number(doc["field"], "b0_tesla", "field"),
                               get_number(doc["field"], "length_m", "field")};
  }
  if (doc.contains("schedule")) {
    config.schedule = parse_schedule(doc["schedule"]);
  }
  if (doc.contains("countermeasure")) {
    config.countermeasure = parse_countermeasure(doc["countermeasure"]);
  }
  if (doc.contains("criterion")) {
    const json& node = doc["criterion"];
    const std::string kind =
        node.contains("kind") && node["kind"].is_string()
            ? node["kind"].get<std::string>()
            : "qber";
    if (kind == "chsh") {
      ChshCriterion criterion;
      criterion.unjammed.s_value = get_number(node, "s_meas", "criterion");
      criterion.unjammed.sigma = get_number(node, "sigma", "criterion");
      criterion.sigma_threshold =
          get_number(node, "sigma_threshold", "criterion");
      config.chsh_criterion = criterion;
    } else if (kind != "qber") {
      throw ConfigError("criterion: unknown kind '" + kind + "'");
    }
  }
  if (doc.contains("time_step_s")) {
    config.time_step_s = get_number(doc, "time_step_s", "scenario");
  }
  if (doc.contains("alpha_rad")) {
    config.alpha_rad = get_number(doc, "alpha_rad", "scenario");
  }
  if (doc.contains("baseline_qber")) {
    config.baseline_qber = get_number(doc, "baseline_qber", "scenario");
  }
  if (doc.contains("grid")) {
    const double grid = get_number(doc, "grid", "scenario");
    if (grid < 2.0 || grid != std::floor(grid)) {
      throw ConfigError("scenario: grid must be an integer >= 2");
    }
    config.grid = static_cast<std::size_t>(grid);
  }
  if (doc.contains("state")) {
    if (!doc["state"].is_string()) {
      throw ConfigError("scenario: state must be a string");
    }
    config.state = parse_state(doc["state"].get<std::string>());
  }
  if (doc.contains("monte_carlo")) {
    const json& node = doc["monte_carlo"];
    if (node.contains("n_pairs")) {
      const double n = get_number(node, "n_pairs", "monte_carlo");
      if (!(n >= 1.0) || n != std::floor(n)) {
        throw ConfigError("monte_carlo: n_pairs must be an integer >= 1");
      }
      config.monte_carlo.n_pairs = static_cast<std::uint64_t>(n);
    }
    if (node.contains("seed")) {
      const double seed = get_number(node, "seed", "monte_carlo");
      if (seed < 0.0 || seed != std::floor(seed)) {
        throw ConfigError("monte_carlo: seed must be a non-negative integer");
      }
      config.monte_carlo.seed = static_cast<std::uint64_t>(seed);
    }
  }
  if (doc.contains("output")) {
    const json& node = doc["output"];
    if (node.contains("format")) {
      const std::string format = node["format"].is_string()
                                     ? node["format"].get<std::string>()
                                     : "";
      if (format == "csv") {
        config.output.format = ReportFormat::Csv;
      } else if (format == "jsonl") {
        config.output.format = ReportFormat::JsonLines;
      } else if (format == "text") {
        config.output.format = ReportFormat::TextTable;
      } else {
        throw ConfigError("output: unknown format '" + format + "'");
      }
    }
    if (node.contains("path")) {
      if (!node["path"].is_string()) {
        throw ConfigError("output: path must be a string");
      }
      config.output.path = node["path"].get<std::string>();
    }
  }

  // mode-specific requirements
  const auto require = [&](bool ok, const char* message) {
    if (!ok) {
      throw ConfigError(std::string("scenario: ") + message);
    }
  };
  switch (config.mode) {
    case ScenarioMode::Verdet:
      require(config.medium.has_value(), "verdet mode needs a medium");
      break;
    case ScenarioMode::Plan:
      require(config.experiment.has_value(), "plan mode needs an experiment");
      require(config.threshold.has_value(), "plan mode needs a threshold");
      require(config.medium.has_value(), "plan mode needs a medium");
      break;
    case ScenarioMode::ChshSim:
      break;
    case ScenarioMode::Qber:
      break;
    case ScenarioMode::Dynamics:
      require(config.schedule.has_value(), "dynamics mode needs a schedule");
      require(config.countermeasure.has_value(),
              "dynamics mode needs a countermeasure");
      break;
    case ScenarioMode::Tables: {
      require(config.threshold.has_value(), "tables mode needs a threshold");
      require(config.medium.has_value(), "tables mode needs a medium");
      if (doc.contains("experiments")) {
        if (!doc["experiments"].is_array()) {
          throw ConfigError("scenario: 'experiments' must be an array of ids");
        }
        for (const json& id : doc["experiments"]) {
          if (!id.is_string()) {
            throw ConfigError("scenario: experiment ids must be strings");
          }
          const ExperimentRecord* record =
              experiments.find(id.get<std::string>());
          if (record == nullptr) {
            throw ConfigError("unknown experiment preset '" +
                              id.get<std::string>() + "'");
          }
          config.table_experiments.push_back(*record);
        }
      } else {
        config.table_experiments = experiments.table_records();
      }
      require(!config.table_experiments.empty(),
              "tables mode needs at least one experiment");
      break;
    }
    case ScenarioMode::Figure1:
      require(config.experiment.has_value(),
              "figure1 mode needs an experiment");
      break;
  }
  return config;
}

Report run_scenario(const ScenarioConfig& config) {
  switch (config.mode) {
    case ScenarioMode::Verdet: return verdet_report(config);
    case ScenarioMode::Plan: return plan_report(config);
    case ScenarioMode::ChshSim: return chsh_sim_report(config);
    case ScenarioMode::Qber: return qber_report(config);
    case ScenarioMode::Dynamics: return dynamics_report(config);
    case ScenarioMode::Tables: return tables_report(config);
    case ScenarioMode::Figure1: return figure1_report(config);
  }
  throw ConfigError("unknown scenario mode");
}

} // namespace qkdjam
