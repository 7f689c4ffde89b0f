#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qkdjam/attack.hpp"
#include "qkdjam/dynamics.hpp"
#include "qkdjam/polarization.hpp"
#include "qkdjam/registry.hpp"
#include "qkdjam/report.hpp"

namespace qkdjam {

/// Configuration failed validation (exit code 2 in the CLI).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reading or writing a file failed (exit code 4 in the CLI).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ScenarioMode { Verdet, Plan, ChshSim, Qber, Dynamics, Tables, Figure1 };

struct MonteCarloParams {
  std::uint64_t n_pairs = 1000000;
  std::uint64_t seed = 1;
};

struct OutputSpec {
  ReportFormat format = ReportFormat::Csv;
  std::optional<std::filesystem::path> path; // stdout when absent
};

/// A fully resolved scenario: preset references already replaced by their
/// values, units converted to SI (config accepts nm and km at the
/// boundary), every invariant checked.
struct ScenarioConfig {
  ScenarioMode mode = ScenarioMode::Verdet;
  std::optional<MediumSpec> medium;
  std::optional<ExperimentRecord> experiment;
  std::vector<ExperimentRecord> table_experiments; // tables mode
  std::optional<SecurityThreshold> threshold;
  std::optional<FieldRegion> field;
  std::optional<FieldSchedule> schedule;
  std::optional<CountermeasureModel> countermeasure;
  std::optional<ChshCriterion> chsh_criterion;
  double time_step_s = 0.01;
  double alpha_rad = 0.0;
  double baseline_qber = 0.0;
  std::size_t grid = 121;
  EntangledState state; // chsh_sim source state, Phi+ by default
  MonteCarloParams monte_carlo;
  OutputSpec output;
};

/// Parse and validate a scenario document, resolving preset names through
/// the registries. Inline medium/experiment objects override presets.
/// Throws ConfigError with a diagnostic on any validation failure.
ScenarioConfig parse_scenario(const nlohmann::json& doc,
                              const MediumRegistry& media,
                              const ExperimentRegistry& experiments);

/// Dispatch a validated scenario to its module and build the report.
/// Domain errors from the modules propagate as std::domain_error.
Report run_scenario(const ScenarioConfig& config);

struct Figure1Row {
  double s = 0.0;
  double density_original = 0.0;
  double density_jammed = 0.0;
};

/// Gaussian densities of the measured CHSH value before and after jamming,
/// sampled on a uniform grid over S in [1.8, 3.0], plus the classical-limit
/// and Tsirelson markers. The jammed curve keeps sigma and shifts the mean
/// to jammed_s(mean, alpha). grid >= 2; sigma > 0.
struct Figure1Data {
  std::vector<Figure1Row> rows;
  double marker_classical = 0.0;
  double marker_tsirelson = 0.0;
  double jammed_mean = 0.0;
};

Figure1Data figure1_data(const ChshEstimate& est, double alpha_rad,
                         std::size_t grid);

/// Normal probability density; exposed so reports and tests share one
/// definition.
double normal_pdf(double x, double mean, double sigma);

} // namespace qkdjam
