// qkdjam: feasibility analysis of Faraday-rotation jamming attacks on
// polarization-based QKD. Verbs map onto the library's scenario modes;
// reports go to --out (or stdout), diagnostics to stderr.
//
// Exit codes: 0 success, 2 config validation, 3 domain error, 4 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkdjam/registry.hpp"
#include "qkdjam/report.hpp"
#include "qkdjam/scenario.hpp"

#ifndef QKDJAM_DATA_DIR
#define QKDJAM_DATA_DIR "data"
#endif

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::string data_dir = QKDJAM_DATA_DIR;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "scenario config file (JSON)");
  cmd->add_option("--out", args.out_path, "output path (default: stdout)");
  cmd->add_option("--format", args.format, "csv, jsonl, or text")
      ->check(CLI::IsMember({"csv", "jsonl", "text"}));
  cmd->add_option("--seed", args.seed, "Monte Carlo seed override");
  cmd->add_option("--data-dir", args.data_dir,
                  "preset directory (media.json, experiments.json)");
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw qkdjam::IoError("cannot open config file " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw qkdjam::ConfigError(path + ": " + e.what());
  }
}

int run(const CommonArgs& args, json overlay) {
  json doc = args.config_path.empty() ? json::object()
                                      : load_config_file(args.config_path);
  doc.merge_patch(overlay);
  if (args.seed) {
    doc["monte_carlo"]["seed"] = *args.seed;
  }
  if (!args.out_path.empty()) {
    doc["output"]["path"] = args.out_path;
  }
  if (!args.format.empty()) {
    doc["output"]["format"] = args.format;
  }

  const std::filesystem::path data_dir(args.data_dir);
  const qkdjam::MediumRegistry media =
      qkdjam::load_media_file(data_dir / "media.json");
  const qkdjam::ExperimentRegistry experiments =
      qkdjam::load_experiments_file(data_dir / "experiments.json");

  const qkdjam::ScenarioConfig config =
      qkdjam::parse_scenario(doc, media, experiments);
  const qkdjam::Report report = qkdjam::run_scenario(config);
  qkdjam::write_report(report, config.output.format, config.output.path);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Faraday-rotation jamming analysis for polarization QKD"};
  app.require_subcommand(1);

  CommonArgs args;
  json overlay = json::object();

  auto* verdet = app.add_subcommand("verdet", "Verdet constant of a medium");
  add_common(verdet, args);
  std::string medium_preset;
  verdet->add_option("--preset", medium_preset, "medium preset name");
  double b0 = 0.0, length = 0.0;
  auto* b0_opt = verdet->add_option("--b0", b0, "field along propagation, T");
  auto* len_opt = verdet->add_option("--length", length, "path length, m");
  verdet->callback([&] {
    overlay["mode"] = "verdet";
    if (!medium_preset.empty()) overlay["medium"] = medium_preset;
    if (*b0_opt || *len_opt) {
      overlay["field"] = {{"b0_tesla", b0}, {"length_m", length}};
    }
  });

  auto* plan = app.add_subcommand("plan", "attack plan for one experiment");
  add_common(plan, args);
  std::string plan_experiment;
  double plan_sigmas = 0.0, plan_p = 0.0;
  plan->add_option("--preset", medium_preset, "medium preset name");
  plan->add_option("--experiment", plan_experiment, "experiment preset id");
  auto* sig_opt = plan->add_option("--sigmas", plan_sigmas,
                                   "threshold as sigma multiple");
  auto* p_opt = plan->add_option("--p-value", plan_p,
                                 "threshold as one-sided p-value");
  plan->callback([&] {
    overlay["mode"] = "plan";
    if (!medium_preset.empty()) overlay["medium"] = medium_preset;
    if (!plan_experiment.empty()) overlay["experiment"] = plan_experiment;
    // the null member erases any config-file value under merge-patch rules
    if (*sig_opt) {
      overlay["threshold"] = {{"sigma_multiple", plan_sigmas},
                              {"p_value", nullptr}};
    }
    if (*p_opt) {
      overlay["threshold"] = {{"p_value", plan_p},
                              {"sigma_multiple", nullptr}};
    }
  });

  auto* chsh_sim =
      app.add_subcommand("chsh-sim", "Monte Carlo Bell test at Tsirelson bases");
  add_common(chsh_sim, args);
  double sim_alpha = 0.0;
  std::uint64_t sim_pairs = 0;
  auto* sim_alpha_opt =
      chsh_sim->add_option("--alpha", sim_alpha, "arm rotation, rad");
  auto* sim_pairs_opt =
      chsh_sim->add_option("--pairs", sim_pairs, "pairs per joint setting");
  chsh_sim->callback([&] {
    overlay["mode"] = "chsh_sim";
    if (*sim_alpha_opt) overlay["alpha_rad"] = sim_alpha;
    if (*sim_pairs_opt) overlay["monte_carlo"]["n_pairs"] = sim_pairs;
  });

  auto* qber = app.add_subcommand("qber", "QBER added by a rotation");
  add_common(qber, args);
  double qber_alpha = 0.0, qber_baseline = 0.0;
  auto* qber_alpha_opt = qber->add_option("--alpha", qber_alpha, "rotation, rad");
  auto* qber_base_opt =
      qber->add_option("--baseline", qber_baseline, "baseline QBER");
  qber->callback([&] {
    overlay["mode"] = "qber";
    if (*qber_alpha_opt) overlay["alpha_rad"] = qber_alpha;
    if (*qber_base_opt) overlay["baseline_qber"] = qber_baseline;
  });

  auto* dynamics =
      app.add_subcommand("dynamics", "attack schedule vs countermeasure");
  add_common(dynamics, args);
  dynamics->callback([&] { overlay["mode"] = "dynamics"; });

  auto* tables = app.add_subcommand("tables", "reference attack table");
  add_common(tables, args);
  double tables_sigmas = 1.7;
  tables->add_option("--sigmas", tables_sigmas,
                     "threshold as sigma multiple (default 1.7)");
  tables->add_option("--preset", medium_preset,
                     "medium preset (default fiber-1550nm-cruz)");
  tables->callback([&] {
    overlay["mode"] = "tables";
    overlay["threshold"] = {{"sigma_multiple", tables_sigmas},
                            {"p_value", nullptr}};
    overlay["medium"] =
        medium_preset.empty() ? "fiber-1550nm-cruz" : medium_preset;
  });

  auto* figure1 =
      app.add_subcommand("figure1", "Gaussian densities before/after jamming");
  add_common(figure1, args);
  std::string fig_experiment;
  double fig_alpha = 0.0;
  std::uint64_t fig_grid = 0;
  figure1->add_option("--experiment", fig_experiment, "experiment preset id");
  auto* fig_alpha_opt = figure1->add_option("--alpha", fig_alpha, "rotation, rad");
  auto* fig_grid_opt = figure1->add_option("--grid", fig_grid, "grid points");
  figure1->callback([&] {
    overlay["mode"] = "figure1";
    if (!fig_experiment.empty()) overlay["experiment"] = fig_experiment;
    if (*fig_alpha_opt) overlay["alpha_rad"] = fig_alpha;
    if (*fig_grid_opt) overlay["grid"] = fig_grid;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e); // --help
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    return run(args, overlay);
  } catch (const qkdjam::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qkdjam::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}
