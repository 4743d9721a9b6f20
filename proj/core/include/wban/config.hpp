// Experiment configuration: strict JSON schema, cross-field validation,
// canonical serialization and hashing, network fixture I/O.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wban/model.hpp"
#include "wban/protocols.hpp"
#include "wban/sim.hpp"

namespace wban {

struct SweepSpec {
  SweepAxis axis = SweepAxis::kNWbans;
  std::vector<double> values{2, 4, 6, 8, 10};
};

struct ExperimentConfig {
  SimConfig sim;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  SweepSpec sweep;
  std::vector<ProtocolKind> protocols{ProtocolKind::kOcaim, ProtocolKind::kSms, ProtocolKind::kOs};
  std::size_t workers = 1;
  std::string output_dir = "out";

  /// Schema and cross-field checks; throws ConfigError naming the field.
  void validate() const;
};

/// Parses and validates. Unknown keys are rejected; the paper-stated
/// constants (k_sensors, box, tx_power_dbm) must be given explicitly.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON (sorted keys, every field present). Stable across runs.
std::string canonical_json(const ExperimentConfig& config);

/// FNV-1a 64 of canonical_json, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// One-line summary of the paper-stated constants, printed at run start.
std::string describe_constants(const ExperimentConfig& config);

/// Network fixtures: explicit coordinator and sensor positions.
NetworkState parse_network(std::string_view text);
NetworkState load_network(const std::filesystem::path& path);
std::string network_json(const NetworkState& network);

}  // namespace wban
