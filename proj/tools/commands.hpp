// wbansim verbs, callable in-process. Each returns a process exit code.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wban/protocols.hpp"

namespace wban::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kRuntimeError = 2, kGoldenMismatch = 3 };

struct Options {
  std::string config_path;
  std::string out_dir;  // empty: use the config's output_dir
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::size_t> workers;
  std::optional<std::vector<ProtocolKind>> protocols;
  std::string fixture_path;
  bool write_rounds = false;
};

inline const std::vector<std::string> kFigureNames{"sinr_time", "sinr_theta", "power_time",
                                                   "beacon_prob", "fdr"};

/// "10" -> 1..10, "3-7" -> 3..7, "1,4,9" -> {1,4,9}. Throws ArgumentError.
std::vector<std::uint64_t> parse_seeds(const std::string& text);
/// Comma separated, case insensitive. Throws ArgumentError.
std::vector<ProtocolKind> parse_protocols(const std::string& text);

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_figure(const std::string& name, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_golden(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_analytics(const Options& opt, std::ostream& out, std::ostream& err);

}  // namespace wban::cli
