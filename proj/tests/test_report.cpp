#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qkdjam/registry.hpp"
#include "qkdjam/report.hpp"
#include "qkdjam/scenario.hpp"

using namespace qkdjam;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const MediumRegistry& media() {
  static const MediumRegistry registry =
      load_media_file(fs::path(QKDJAM_DATA_DIR) / "media.json");
  return registry;
}

const ExperimentRegistry& experiments() {
  static const ExperimentRegistry registry =
      load_experiments_file(fs::path(QKDJAM_DATA_DIR) / "experiments.json");
  return registry;
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string command =
      std::string(QKDJAM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  std::array<char, 4096> buffer;
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

} // namespace

TEST_CASE("fixed formatting is pinned") {
  CHECK(format_fixed(2.15, 2) == "2.15");
  CHECK(format_fixed(0.125, 2) == "0.13");
  CHECK(format_fixed(0.0, 2) == "0.00");
  CHECK(format_fixed(-0.125, 2) == "-0.13");
  CHECK(format_fixed(20.0, 0) == "20");
  CHECK(format_fixed(0.09, 2) == "0.09");
  CHECK(format_fixed(2.0 + 2.5 * 0.09, 2) == "2.23");
}

TEST_CASE("render formats") {
  Report report;
  report.columns = {"name", "value"};
  report.rows.push_back({text_cell("x,1"), num_cell("2.5")});
  report.metadata.emplace_back("note", "n1");

  const std::string csv = render(report, ReportFormat::Csv);
  CHECK(csv == "# note,n1\nname,value\n\"x,1\",2.5\n");

  const std::string jsonl = render(report, ReportFormat::JsonLines);
  CHECK(jsonl ==
        "{\"meta\":{\"note\":\"n1\"}}\n{\"name\":\"x,1\",\"value\":2.5}\n");
  // every line parses as JSON
  std::istringstream lines(jsonl);
  std::string line;
  json parsed;
  while (std::getline(lines, line)) {
    CHECK_NOTHROW(parsed = json::parse(line));
  }

  const std::string text = render(report, ReportFormat::TextTable);
  CHECK(text.find("name") != std::string::npos);
  CHECK(text.find("note: n1") != std::string::npos);
}

TEST_CASE("scenario parsing rejects bad configs with diagnostics") {
  const auto parse = [&](const json& doc) {
    return parse_scenario(doc, media(), experiments());
  };
  CHECK_THROWS_AS(parse(json::object()), ConfigError);
  CHECK_THROWS_AS(parse({{"mode", "frobnicate"}}), ConfigError);
  CHECK_THROWS_AS(parse({{"mode", "verdet"}}), ConfigError); // no medium
  CHECK_THROWS_AS(parse({{"mode", "verdet"}, {"medium", "nope"}}), ConfigError);
  CHECK_THROWS_AS(parse({{"mode", "chsh_sim"},
                         {"monte_carlo", {{"n_pairs", -5}}}}),
                  ConfigError);
  CHECK_THROWS_AS(parse({{"mode", "plan"},
                         {"medium", "fiber-1550nm-cruz"},
                         {"experiment", "takesue-d0"},
                         {"threshold", {{"sigma_multiple", 1.7},
                                        {"p_value", 0.05}}}}),
                  ConfigError);
  CHECK_THROWS_AS(parse({{"mode", "qber"},
                         {"output", {{"format", "xml"}}}}),
                  ConfigError);
}

TEST_CASE("scenario parsing resolves presets and inline overrides") {
  json doc = {{"mode", "plan"},
              {"medium", "fiber-1550nm-cruz"},
              {"experiment", "takesue-d0"},
              {"threshold", {{"sigma_multiple", 1.7}}}};
  const auto config = parse_scenario(doc, media(), experiments());
  REQUIRE(config.medium.has_value());
  CHECK(config.medium->kind == MediumKind::FiberEmpirical);
  REQUIRE(config.experiment.has_value());
  CHECK(config.experiment->estimate.s_value == doctest::Approx(2.65));

  json inline_doc = {
      {"mode", "plan"},
      {"medium",
       {{"name", "custom-fiber"},
        {"kind", "fiber_empirical"},
        {"wavelength_nm", 1310},
        {"a_coeff", 0.15}}},
      {"experiment",
       {{"label", "bench"}, {"distance_km", 1.5}, {"s_meas", 2.5}, {"sigma", 0.07}}},
      {"threshold", {{"p_value", 0.05}}}};
  const auto inline_config = parse_scenario(inline_doc, media(), experiments());
  CHECK(inline_config.medium->name == "custom-fiber");
  CHECK(inline_config.medium->wavelength_m == doctest::Approx(1.31e-6));
  CHECK(inline_config.experiment->label == "bench");
  CHECK(inline_config.threshold->as_sigma_multiple() ==
        doctest::Approx(1.6448536269514729));
}

TEST_CASE("run_scenario: verdet row carries the air numbers") {
  json doc = {{"mode", "verdet"},
              {"medium", "air-850nm"},
              {"field", {{"b0_tesla", 5e-5}, {"length_m", 4e4}}}};
  const auto report = run_scenario(parse_scenario(doc, media(), experiments()));
  REQUIRE(report.rows.size() == 1);
  const double verdet = std::stod(report.rows[0][3].text);
  CHECK(verdet == doctest::Approx(3.7e-4).epsilon(0.02).scale(0.0));
  const double beta = std::stod(report.rows[0][7].text);
  CHECK(beta == doctest::Approx(7.4e-4).epsilon(0.02).scale(0.0));
}

TEST_CASE("run_scenario: plan surfaces the no-attack signal as data") {
  json doc = {{"mode", "plan"},
              {"medium", "fiber-1550nm-cruz"},
              {"experiment",
               {{"label", "weak"}, {"distance_km", 0.0}, {"s_meas", 2.05},
                {"sigma", 0.09}}},
              {"threshold", {{"sigma_multiple", 1.7}}}};
  const auto report = run_scenario(parse_scenario(doc, media(), experiments()));
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].back().text == "no-attack-required");
}

TEST_CASE("figure1 densities normalize and peak at the jammed mean") {
  const ChshEstimate est{2.37, 0.09};
  const auto data = figure1_data(est, 0.216, 241);
  REQUIRE(data.rows.size() == 241);
  CHECK(data.marker_classical == doctest::Approx(2.0));
  CHECK(data.marker_tsirelson == doctest::Approx(2.8284271247461903));
  CHECK(data.jammed_mean == doctest::Approx(2.1522685519470577).epsilon(1e-12));

  // trapezoid over the emitted grid, extended to mean +/- 6 sigma with the
  // same density definition
  const auto integrate = [&](auto density_of_row, double mean) {
    double integral = 0.0;
    for (std::size_t i = 1; i < data.rows.size(); ++i) {
      const double h = data.rows[i].s - data.rows[i - 1].s;
      integral += 0.5 * h * (density_of_row(i) + density_of_row(i - 1));
    }
    const auto extend = [&](double from, double to) {
      if (to <= from) return;
      const int steps = 2000;
      const double h = (to - from) / steps;
      for (int i = 0; i < steps; ++i) {
        const double x0 = from + i * h;
        integral += 0.5 * h *
                    (normal_pdf(x0, mean, est.sigma) +
                     normal_pdf(x0 + h, mean, est.sigma));
      }
    };
    extend(mean - 6.0 * est.sigma, data.rows.front().s);
    extend(data.rows.back().s, mean + 6.0 * est.sigma);
    return integral;
  };
  const double norm_orig =
      integrate([&](std::size_t i) { return data.rows[i].density_original; },
                est.s_value);
  const double norm_jam =
      integrate([&](std::size_t i) { return data.rows[i].density_jammed; },
                data.jammed_mean);
  CHECK(std::abs(norm_orig - 1.0) < 1e-3);
  CHECK(std::abs(norm_jam - 1.0) < 1e-3);

  // jammed curve peaks at the jammed mean (within one grid step)
  std::size_t arg_max = 0;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    if (data.rows[i].density_jammed > data.rows[arg_max].density_jammed) {
      arg_max = i;
    }
  }
  CHECK(std::abs(data.rows[arg_max].s - 2.15) < 0.01);

  // alpha = 0: both curves identical
  const auto same = figure1_data(est, 0.0, 41);
  for (const auto& row : same.rows) {
    CHECK(row.density_original == doctest::Approx(row.density_jammed));
  }

  CHECK_THROWS_AS(figure1_data(est, 0.216, 1), std::domain_error);
  CHECK_THROWS_AS(figure1_data({2.37, 0.0}, 0.216, 41), std::domain_error);
}

TEST_CASE("cli: tables output is byte-identical across runs and matches the "
          "golden files") {
  const auto once = run_cli("tables --sigmas 1.7");
  REQUIRE(once.exit_code == 0);
  const auto twice = run_cli("tables --sigmas 1.7");
  CHECK(once.output == twice.output);
  CHECK(once.output == read_file(fs::path(QKDJAM_GOLDEN_DIR) / "table1.csv"));

  const auto strict = run_cli("tables --sigmas 2.5");
  REQUIRE(strict.exit_code == 0);
  CHECK(strict.output == read_file(fs::path(QKDJAM_GOLDEN_DIR) / "table2.csv"));
}

TEST_CASE("cli: verdet row contains the air Verdet constant") {
  const auto result = run_cli("verdet --preset air-850nm");
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.output);
  std::string header, row;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  // fourth CSV column is the Verdet constant
  std::istringstream cells(row);
  std::string cell;
  for (int i = 0; i < 4; ++i) {
    REQUIRE(std::getline(cells, cell, ','));
  }
  CHECK(std::stod(cell) == doctest::Approx(3.7e-4).epsilon(0.02).scale(0.0));
}

TEST_CASE("cli: malformed config exits 2 and writes nothing") {
  const fs::path config_path = temp_file("qkdjam_bad_config.json");
  const fs::path out_path = temp_file("qkdjam_bad_output.csv");
  fs::remove(out_path);
  {
    std::ofstream out(config_path);
    out << R"({"mode": "chsh_sim", "monte_carlo": {"n_pairs": -100}})";
  }
  const auto result = run_cli("chsh-sim --config " + config_path.string() +
                              " --out " + out_path.string());
  CHECK(result.exit_code == 2);
  CHECK_FALSE(fs::exists(out_path));
  fs::remove(config_path);
}

TEST_CASE("cli: unknown preset exits 2, domain error exits 3, io error "
          "exits 4") {
  CHECK(run_cli("verdet --preset unobtainium").exit_code == 2);
  CHECK(run_cli("qber --alpha 0.2 --baseline 0.7").exit_code == 3);
  CHECK(run_cli("qber --alpha 0.2 --out /nonexistent-dir/report.csv")
            .exit_code == 4);
}

TEST_CASE("cli: seeded Monte Carlo reruns are byte-identical") {
  const std::string args = "chsh-sim --alpha 0.216 --pairs 20000 --seed 7";
  const auto a = run_cli(args);
  REQUIRE(a.exit_code == 0);
  const auto b = run_cli(args);
  CHECK(a.output == b.output);
  const auto other_seed = run_cli("chsh-sim --alpha 0.216 --pairs 20000 --seed 8");
  CHECK(a.output != other_seed.output);
}

TEST_CASE("cli: dynamics scenario file reports availability metadata") {
  const auto result =
      run_cli("dynamics --config " +
              (fs::path(QKDJAM_SCENARIO_DIR) / "toggle-1s-triggered.json")
                  .string());
  REQUIRE(result.exit_code == 0);
  CHECK(result.output.find("# availability,") != std::string::npos);
  CHECK(result.output.find("REALIGNING") != std::string::npos);
}

TEST_CASE("cli: jsonl format emits parseable lines") {
  const auto result = run_cli("qber --alpha 0.279 --baseline 0.025 "
                              "--format jsonl");
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.output);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    const json parsed = json::parse(line);
    if (parsed.contains("total_qber")) {
      CHECK(parsed["total_qber"].get<double>() ==
            doctest::Approx(0.09705000060910754).epsilon(1e-9));
      ++rows;
    }
  }
  CHECK(rows == 1);
}
