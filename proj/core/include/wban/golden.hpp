// Worked-example regression: run a fixed three-WBAN fixture through OCAIM and
// compare every derived set with the listing stored in the fixture.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wban/model.hpp"
#include "wban/protocols.hpp"

namespace wban {

struct GoldenCheck {
  std::string name;  // e.g. "I_2", "SIL_{2,3}", "Code_1"
  std::vector<std::string> expected;
  std::vector<std::string> actual;
  bool match = false;
};

struct GoldenReport {
  std::vector<GoldenCheck> checks;
  OcaimTrace trace;
  bool pass() const;
  std::vector<std::string> mismatches() const;
};

struct GoldenFixture {
  NetworkState network;
  double theta_db = 3.0;
  std::vector<std::pair<std::string, std::vector<std::string>>> expected;
};

GoldenFixture parse_golden(std::string_view text);
/// Throws ConfigError when the file is missing or malformed.
GoldenFixture load_golden(const std::filesystem::path& path);

/// Derived sets keyed like the fixture: I_i, IS_i, SIL_{i,k}, Code_i.
std::vector<std::pair<std::string, std::vector<std::string>>> golden_sets(const OcaimTrace& trace,
                                                                          const NetworkState& net);

GoldenReport run_golden(const GoldenFixture& fixture, const ChannelModel& channel = {});

}  // namespace wban
