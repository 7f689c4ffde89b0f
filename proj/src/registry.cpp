#include "qkdjam/registry.hpp"

#include <fstream>

#include <json.hpp>

#include "qkdjam/scenario.hpp"

namespace qkdjam {

namespace {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

double require_number(const json& obj, const char* key,
                      const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ConfigError(where + ": missing numeric field '" + key + "'");
  }
  return obj[key].get<double>();
}

std::string require_string(const json& obj, const char* key,
                           const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw ConfigError(where + ": missing string field '" + key + "'");
  }
  return obj[key].get<std::string>();
}

MediumKind parse_kind(const std::string& text, const std::string& where) {
  if (text == "dielectric_composition") return MediumKind::DielectricComposition;
  if (text == "fiber_empirical") return MediumKind::FiberEmpirical;
  if (text == "direct_verdet") return MediumKind::DirectVerdet;
  throw ConfigError(where + ": unknown medium kind '" + text + "'");
}

} // namespace

MediumSpec parse_medium(const json& entry, const std::string& where) {
  MediumSpec medium;
  medium.name = require_string(entry, "name", where);
  medium.kind = parse_kind(require_string(entry, "kind", where), where);
  if (entry.contains("wavelength_nm")) {
    medium.wavelength_m = require_number(entry, "wavelength_nm", where) * 1e-9;
  }
  switch (medium.kind) {
    case MediumKind::DielectricComposition: {
      medium.refractive_index = require_number(entry, "refractive_index", where);
      if (!entry.contains("constituents") || !entry["constituents"].is_array()) {
        throw ConfigError(where + ": composition medium needs 'constituents'");
      }
      // a medium-level density fills any constituent that omits its own
      double shared_density = 0.0;
      if (entry.contains("shared_mass_density_g_per_m3")) {
        shared_density =
            require_number(entry, "shared_mass_density_g_per_m3", where);
      }
      for (const json& c : entry["constituents"]) {
        Constituent constituent;
        constituent.name = require_string(c, "name", where);
        constituent.fraction = require_number(c, "fraction", where);
        constituent.electrons_per_molecule =
            require_number(c, "electrons_per_molecule", where);
        constituent.molar_mass_g_per_mol =
            require_number(c, "molar_mass_g_per_mol", where);
        constituent.mass_density_g_per_m3 =
            c.contains("mass_density_g_per_m3")
                ? require_number(c, "mass_density_g_per_m3", where)
                : shared_density;
        medium.constituents.push_back(std::move(constituent));
      }
      break;
    }
    case MediumKind::FiberEmpirical:
      medium.fiber_a_coeff = require_number(entry, "a_coeff", where);
      break;
    case MediumKind::DirectVerdet:
      medium.verdet_rad_per_T_m =
          require_number(entry, "verdet_rad_per_T_m", where);
      break;
  }
  try {
    validate(medium);
  } catch (const std::domain_error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return medium;
}

ExperimentRecord parse_experiment(const json& entry, const std::string& where) {
  ExperimentRecord record;
  record.label = require_string(entry, "label", where);
  record.distance_km = require_number(entry, "distance_km", where);
  record.estimate.s_value = require_number(entry, "s_meas", where);
  record.estimate.sigma = require_number(entry, "sigma", where);
  if (record.distance_km < 0.0) {
    throw ConfigError(where + ": distance must be >= 0");
  }
  if (!(record.estimate.s_value >= 0.0 && record.estimate.s_value <= 4.0) ||
      !(record.estimate.sigma > 0.0)) {
    throw ConfigError(where + ": estimate needs s_meas in [0, 4], sigma > 0");
  }
  return record;
}

const MediumSpec* MediumRegistry::find(const std::string& name) const {
  for (const MediumSpec& m : media) {
    if (m.name == name) {
      return &m;
    }
  }
  return nullptr;
}

const ExperimentRecord* ExperimentRegistry::find(const std::string& id) const {
  for (const RegisteredExperiment& e : experiments) {
    if (e.id == id) {
      return &e.record;
    }
  }
  return nullptr;
}

std::vector<ExperimentRecord> ExperimentRegistry::records() const {
  std::vector<ExperimentRecord> out;
  out.reserve(experiments.size());
  for (const RegisteredExperiment& e : experiments) {
    out.push_back(e.record);
  }
  return out;
}

std::vector<ExperimentRecord> ExperimentRegistry::table_records() const {
  std::vector<ExperimentRecord> out;
  for (const RegisteredExperiment& e : experiments) {
    if (e.in_reference_table) {
      out.push_back(e.record);
    }
  }
  return out;
}

MediumRegistry load_media_file(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  if (!doc.contains("media") || !doc["media"].is_array()) {
    throw ConfigError(path.string() + ": expected top-level 'media' array");
  }
  MediumRegistry registry;
  for (const json& entry : doc["media"]) {
    registry.media.push_back(parse_medium(entry, path.string()));
  }
  return registry;
}

ExperimentRegistry load_experiments_file(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  if (!doc.contains("experiments") || !doc["experiments"].is_array()) {
    throw ConfigError(path.string() +
                      ": expected top-level 'experiments' array");
  }
  ExperimentRegistry registry;
  for (const json& entry : doc["experiments"]) {
    RegisteredExperiment reg;
    reg.id = require_string(entry, "id", path.string());
    reg.record = parse_experiment(entry, path.string());
    if (entry.contains("in_reference_table")) {
      if (!entry["in_reference_table"].is_boolean()) {
        throw ConfigError(path.string() +
                          ": 'in_reference_table' must be boolean");
      }
      reg.in_reference_table = entry["in_reference_table"].get<bool>();
    }
    registry.experiments.push_back(std::move(reg));
  }
  return registry;
}

} // namespace qkdjam
