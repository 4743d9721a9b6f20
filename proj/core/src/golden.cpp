#include "wban/golden.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "wban/codes.hpp"
#include "wban/config.hpp"
#include "wban/error.hpp"

namespace wban {

using nlohmann::json;

bool GoldenReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const GoldenCheck& c) { return c.match; });
}

std::vector<std::string> GoldenReport::mismatches() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.match) out.push_back(c.name);
  return out;
}

GoldenFixture parse_golden(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("golden fixture: ") + e.what());
  }
  if (!j.is_object() || !j.contains("network"))
    throw ConfigError("golden fixture: 'network' object required");
  for (const auto& [k, _] : j.items())
    if (k != "network" && k != "expected" && k != "theta_db")
      throw ConfigError("golden fixture: unknown field '" + k + "'");
  GoldenFixture f;
  f.network = parse_network(j.at("network").dump());
  if (j.contains("theta_db")) {
    if (!j["theta_db"].is_number()) throw ConfigError("golden fixture: theta_db must be a number");
    f.theta_db = j["theta_db"].get<double>();
  }
  if (j.contains("expected")) {
    for (const auto& [k, v] : j["expected"].items()) {
      if (!v.is_array()) throw ConfigError("golden fixture: expected." + k + " must be an array");
      std::vector<std::string> members;
      for (const auto& m : v) {
        if (!m.is_string()) throw ConfigError("golden fixture: expected." + k + " holds non-strings");
        members.push_back(m.get<std::string>());
      }
      std::sort(members.begin(), members.end());
      f.expected.emplace_back(k, std::move(members));
    }
  }
  return f;
}

GoldenFixture load_golden(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("golden fixture not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_golden(ss.str());
}

namespace {

std::vector<std::string> names(const SensorSet& set) {
  std::vector<std::string> out;
  for (const auto& id : set) out.push_back(to_string(id));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::vector<std::string>>> golden_sets(const OcaimTrace& trace,
                                                                          const NetworkState& net) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (const auto& l : trace.lists) out.emplace_back("I_" + std::to_string(l.owner + 1), names(l.members));
  for (const auto& s : trace.sets) out.emplace_back("IS_" + std::to_string(s.owner + 1), names(s.members));
  for (const auto& w : net.wbans)
    for (const auto& s : w.sensors) {
      const auto it = trace.sils.find(s.id);
      out.emplace_back("SIL" + to_string(s.id).substr(1),
                       it == trace.sils.end() ? std::vector<std::string>{} : names(it->second));
    }
  for (const auto& a : trace.assignments) {
    std::vector<std::string> coded;
    for (const auto& s : net.wbans.at(a.wban).sensors)
      if (a.per_slot.at(s.assigned_slot).spread) coded.push_back(to_string(s.id));
    std::sort(coded.begin(), coded.end());
    out.emplace_back("Code_" + std::to_string(a.wban + 1), std::move(coded));
  }
  return out;
}

GoldenReport run_golden(const GoldenFixture& fixture, const ChannelModel& channel) {
  GoldenReport report;
  OcaimOptions opt;
  opt.theta_db = fixture.theta_db;
  const std::size_t n = fixture.network.n();
  const CowhcSet codes = n > 0 ? cowhc_for(n) : CowhcSet{};
  report.trace = run_ocaim_round(fixture.network, channel, codes, opt);
  const auto derived = golden_sets(report.trace, fixture.network);
  std::map<std::string, std::vector<std::string>> by_name(derived.begin(), derived.end());
  for (const auto& [name, expected] : fixture.expected) {
    GoldenCheck c;
    c.name = name;
    c.expected = expected;
    const auto it = by_name.find(name);
    if (it != by_name.end()) c.actual = it->second;
    c.match = it != by_name.end() && c.actual == c.expected;
    report.checks.push_back(std::move(c));
  }
  return report;
}

}  // namespace wban
