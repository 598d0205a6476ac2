#pragma once

// Scenario files: one JSON document naming a probability space, sets,
// measures and optional set sequences.
//
//   {
//     "space": [0.25, 0.25, 0.25, 0.25],
//     "sets": {
//       "quartet": {"generators": [[1, 2, 3, 4]]},
//       "imported": {"csv": "gens.csv", "mode": "hull"}
//     },
//     "measures": {
//       "wc_es": {"type": "worst_case", "base": {"kind": "es", "alpha": 0.5}}
//     },
//     "sequences": {"shrink": {"sets": ["a", "b"], "limit": "quartet"}}
//   }
//
// CSV paths are relative to the scenario file. Once loaded, imported
// generators are stored inline, so to_json(load(...)) reloads identically.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "setrisk/setrisk.hpp"

namespace setrisk::cli {

struct SetDef {
  std::vector<std::vector<double>> generators;
  bool hull = false;

  bool operator==(const SetDef&) const = default;
};

struct SequenceDef {
  std::vector<std::string> sets;
  std::string limit;

  bool operator==(const SequenceDef&) const = default;
};

struct Scenario {
  std::vector<double> space;
  std::map<std::string, SetDef> sets;
  std::map<std::string, nlohmann::json> measures;
  std::map<std::string, SequenceDef> sequences;

  bool operator==(const Scenario&) const = default;

  ProbSpace prob_space() const;
  RvSet set(const std::string& name) const;
  Srm measure(const std::string& name) const;
  /// The scalar base of a measure: its "base" entry, or the measure itself
  /// when it is written as a bare base spec.
  ScalarRisk scalar(const std::string& name) const;
  const SequenceDef& sequence(const std::string& name) const;

  /// Builds every set, measure and sequence once so that errors surface at load.
  void validate() const;
};

/// Errc::parse for malformed documents; messages name the offending field.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& s);

/// Rows of comma- or whitespace-separated numbers, one generator per row.
std::vector<std::vector<double>> read_csv_matrix(const std::filesystem::path& path);

}  // namespace setrisk::cli
