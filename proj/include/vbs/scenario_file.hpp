#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "vbs/optimizer.hpp"
#include "vbs/power_models.hpp"
#include "vbs/radio_link.hpp"
#include "vbs/simulator.hpp"
#include "vbs/traffic.hpp"

namespace vbs {

struct RunOptions {
  double alpha = 0.0;
  int cores_max = 8;
  std::uint64_t seed = 42;
  std::uint64_t arrivals = 100000;
  double warmup_fraction = 0.1;
  int batches = 20;
  SizeDistribution size_distribution = SizeDistribution::kExponential;
};

/// In-memory form of a scenario file. Defaults are the reference parameter
/// set; a file only needs the keys it changes.
struct ScenarioConfig {
  std::string name = "default";
  ComputeParams compute;
  RadioParams radio;
  LinkInputs link;
  TrafficParams traffic;
  EarthParams earth;
  bool has_earth = true;
  RunOptions run;

  void validate() const;
  Scenario scenario() const;
  BusyPowerProfile earth_profile() const;
};

/// Parses the flat sectioned format:
///
///   [traffic]
///   arrival_rate = 1.5 /s
///   file_size = 2 MB        # 1 MB = 8e6 bit
///
/// Unknown sections or keys, duplicate keys and unit mismatches raise
/// kConfig, naming `source` and the line.
ScenarioConfig parse_config(std::istream& in, const std::string& source);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Writes every key with its unit; parse_config reads it back.
void write_config(std::ostream& out, const ScenarioConfig& cfg);

/// Sets one key from text exactly as a file line `key = text` under
/// `[section]` would. Does not re-validate the whole config.
void apply_setting(ScenarioConfig& cfg, const std::string& section,
                   const std::string& key, const std::string& text);

}  // namespace vbs
