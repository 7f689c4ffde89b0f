#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkdjam/attack.hpp"
#include "qkdjam/faraday.hpp"

namespace qkdjam {

/// Medium presets loaded from the shipped data file (data/media.json).
struct MediumRegistry {
  std::vector<MediumSpec> media;

  const MediumSpec* find(const std::string& name) const;
};

/// Experiment registry entry: a lookup id plus the record itself.
/// in_reference_table marks the rows the tables mode reproduces by default.
struct RegisteredExperiment {
  std::string id;
  ExperimentRecord record;
  bool in_reference_table = true;
};

struct ExperimentRegistry {
  std::vector<RegisteredExperiment> experiments;

  const ExperimentRecord* find(const std::string& id) const;
  std::vector<ExperimentRecord> records() const;
  std::vector<ExperimentRecord> table_records() const;
};

/// Parse a media preset file. Throws ConfigError on malformed content,
/// IoError when the file cannot be read.
MediumRegistry load_media_file(const std::filesystem::path& path);

/// Parse an experiment registry file. Same error contract.
ExperimentRegistry load_experiments_file(const std::filesystem::path& path);

/// Parse one medium entry (also used for inline media in scenario configs).
/// 'where' names the source in diagnostics.
MediumSpec parse_medium(const nlohmann::json& entry, const std::string& where);

/// Parse one experiment record (also used inline in scenario configs).
ExperimentRecord parse_experiment(const nlohmann::json& entry,
                                  const std::string& where);

} // namespace qkdjam
