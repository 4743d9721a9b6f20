#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "wban/config.hpp"
#include "wban/error.hpp"
#include "wban/report.hpp"

using namespace wban;
using nlohmann::json;

namespace {

json default_json() {
  std::ifstream in(WBAN_CONFIG_DIR "/default.json");
  return json::parse(in);
}

std::string error_of(const json& j) {
  try {
    parse_config(j.dump());
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shipped config is valid") {
  const auto cfg = load_config(WBAN_CONFIG_DIR "/default.json");
  CHECK(cfg.sim.scenario.k_sensors == 10);
  CHECK(cfg.sim.scenario.tx_power_dbm == -10);
  CHECK(cfg.sim.box.hi.x == 5);
  CHECK(cfg.seeds.size() == 10);
  CHECK(describe_constants(cfg).find("K=10") != std::string::npos);
}

TEST_CASE("cross-field violation is named") {
  auto j = default_json();
  j["timing"]["slot_length"] = 0.006;  // 10 * 6 ms > 50 ms
  CHECK(error_of(j).find("K * slot_length") != std::string::npos);
}

TEST_CASE("unknown fields are rejected with their path") {
  auto j = default_json();
  j["protocol"]["thetaa_db"] = 3;
  CHECK(error_of(j).find("protocol.thetaa_db: unknown field") != std::string::npos);
  auto k = default_json();
  k["extra"] = 1;
  CHECK(error_of(k).find("extra") != std::string::npos);
}

TEST_CASE("paper constants must be explicit") {
  auto j = default_json();
  j["scenario"].erase("k_sensors");
  CHECK(error_of(j).find("scenario.k_sensors: required") != std::string::npos);
  auto k = default_json();
  k["scenario"].erase("box");
  CHECK(error_of(k).find("scenario.box") != std::string::npos);
}

TEST_CASE("type errors and parse errors carry location") {
  auto j = default_json();
  j["run"]["horizon_superframes"] = "long";
  CHECK(error_of(j).find("run.horizon_superframes: wrong type") != std::string::npos);
  try {
    parse_config("{\n  \"scenario\": {\n    \"k_sensors\": ,\n  }\n}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("config hash is stable and content sensitive") {
  const auto a = load_config(WBAN_CONFIG_DIR "/default.json");
  const auto b = parse_config(default_json().dump(4));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  auto j = default_json();
  j["protocol"]["theta_db"] = 11;
  CHECK(config_hash(parse_config(j.dump())) != config_hash(a));
  // Canonical form parses back to the same config.
  auto canon = json::parse(canonical_json(a));
  CHECK(canon["timing"]["t_fr"] == 0.001152);
}

TEST_CASE("canonical form parses back to the same config") {
  const auto a = load_config(WBAN_CONFIG_DIR "/default.json");
  CHECK(config_hash(parse_config(canonical_json(a))) == config_hash(a));
}

TEST_CASE("network fixtures round trip") {
  NetworkState net;
  Wban w;
  w.coordinator = {1, 2, 3};
  w.superframe_offset = 0.01;
  w.sensors.push_back(Sensor{{0, 0}, {1.5, 2, 3}, -12, 0});
  w.sensors.push_back(Sensor{{0, 1}, {1, 2.5, 3}, -10, 2});
  net.wbans.push_back(w);
  const auto back = parse_network(network_json(net));
  REQUIRE(back.n() == 1);
  CHECK(back.wbans[0].coordinator == w.coordinator);
  CHECK(back.wbans[0].sensors[0].tx_power_dbm == -12);
  CHECK(back.wbans[0].sensors[1].assigned_slot == 2);
  CHECK(back.wbans[0].superframe_offset == 0.01);
  CHECK_THROWS_AS(parse_network(R"({"wbans": [{"coordinator": [0, 0]}]})"), ConfigError);
}

TEST_CASE("numbers print shortest round-trip") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    const auto s = format_number(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(3) == "3");
}

TEST_CASE("csv carries header comments and a schema version column") {
  Table t{{"a", "b"}, {{"1", "x,y"}, {"2", "z"}}};
  ArtifactHeader h{"abc", {1, 2}, {{"artifact", "demo"}}};
  const auto csv = to_csv(t, h);
  CHECK(csv ==
        "# config_hash: abc\n# seeds: 1 2\n# artifact: demo\n"
        "schema_version,a,b\n1,1,\"x,y\"\n1,2,z\n");
  Table bad{{"a"}, {{"1", "2"}}};
  CHECK_THROWS_AS(to_csv(bad, h), Error);
}

TEST_CASE("rounds table has one row per round and WBAN") {
  MetricsLog log;
  log.n_wbans = 2;
  log.records.resize(6);
  for (std::size_t i = 0; i < 6; ++i) {
    log.records[i].round = i / 2;
    log.records[i].wban = i % 2;
  }
  const auto t = rounds_table(log);
  CHECK(t.rows.size() == 6);
  CHECK(t.columns.front() == "protocol");
  CHECK(t.rows[1][3] == "2");  // one-based WBAN
}

TEST_CASE("svg plot is well formed") {
  PlotSpec spec{"T <1>", "x", "y", {{"a", {1, 2, 3}, {0.1, 0.5, 0.2}, {0.01, 0.02, 0.0}}, {"b", {1, 2}, {1, 2}, {}}}};
  const auto svg = svg_line_plot(spec);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("T &lt;1&gt;") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg_line_plot({"empty", "x", "y", {}}).find("</svg>") != std::string::npos);
}

TEST_CASE("manifest records configuration and codes") {
  Manifest m;
  m.set_config("00ff", R"({"a": 1})");
  m.set_seeds({3, 4});
  CowhcSet codes;
  codes.matrix_order = 2;
  codes.codes.push_back(Code{{1, -1}, 1});
  m.add_codes(codes);
  m.add_flags(3, 0);
  const auto doc = json::parse(m.dump());
  CHECK(doc["config_hash"] == "00ff");
  CHECK(doc["seeds"][1] == 4);
  CHECK(doc["cowhc"]["codes"][0]["chips"] == "+-");
  CHECK(doc["validity_flags"]["3"].is_string());
}

TEST_CASE("write_text creates directories") {
  const auto dir = std::filesystem::temp_directory_path() / "wban_write_text_test";
  std::filesystem::remove_all(dir);
  write_text(dir / "a" / "b.txt", "hello");
  std::ifstream in(dir / "a" / "b.txt");
  std::string s;
  std::getline(in, s);
  CHECK(s == "hello");
  std::filesystem::remove_all(dir);
}
