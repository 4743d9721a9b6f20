#include "wban/config.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

#include "wban/error.hpp"

namespace wban {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were read so leftovers can be
// reported as unknown.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  std::string where(std::string_view key = {}) const {
    std::string p = path_.empty() ? "<root>" : path_;
    if (!key.empty()) p = path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    return p;
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  Fields object(const char* key) {
    if (!has(key)) return Fields(empty_, where(key));
    return Fields(raw(key), where(key));
  }

  template <typename T>
  void get(const char* key, T& out, bool required = false) {
    if (!has(key)) {
      if (required) throw ConfigError(where(key) + ": required field missing");
      return;
    }
    const json& v = raw(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0))
          throw ConfigError("");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
      }
      out = v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError(where(key) + ": wrong type (" + v.dump() + ")");
    }
  }

  Vec3 vec3(const char* key, Vec3 fallback, bool required = false) {
    if (!has(key)) {
      if (required) throw ConfigError(where(key) + ": required field missing");
      return fallback;
    }
    const json& v = raw(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number())
      throw ConfigError(where(key) + ": expected [x, y, z]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }

  void finish() const {
    for (const auto& [k, _] : j_.items())
      if (!seen_.count(k)) throw ConfigError(where(k) + ": unknown field");
  }

 private:
  static inline const json empty_ = json::object();
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Box read_box(Fields f, bool required) {
  Box b;
  b.lo = f.vec3("lo", b.lo, required);
  b.hi = f.vec3("hi", b.hi, required);
  f.finish();
  return b;
}

NetworkState network_from(const json& j, const std::string& path) {
  Fields f(j, path);
  NetworkState net;
  if (f.has("box")) net.box = read_box(f.object("box"), true);
  double bi = 0.1, ts = 0.005;
  f.get("beacon_interval", bi);
  f.get("slot_length", ts);
  if (!f.has("wbans")) throw ConfigError(f.where("wbans") + ": required field missing");
  const json& arr = f.raw("wbans");
  if (!arr.is_array()) throw ConfigError(f.where("wbans") + ": expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Fields w(arr[i], f.where("wbans") + "[" + std::to_string(i) + "]");
    Wban wban;
    wban.id = i;
    wban.code_index = i;
    wban.beacon_interval = bi;
    wban.slot_length = ts;
    wban.coordinator = w.vec3("coordinator", {}, true);
    w.get("superframe_offset", wban.superframe_offset);
    w.get("clock_drift_ppm", wban.clock_drift_ppm);
    if (!w.has("sensors")) throw ConfigError(w.where("sensors") + ": required field missing");
    const json& sensors = w.raw("sensors");
    if (!sensors.is_array()) throw ConfigError(w.where("sensors") + ": expected an array");
    for (std::size_t k = 0; k < sensors.size(); ++k) {
      Fields s(sensors[k], w.where("sensors") + "[" + std::to_string(k) + "]");
      Sensor sensor;
      sensor.id = {i, k};
      sensor.assigned_slot = k;
      sensor.position = s.vec3("position", {}, true);
      s.get("tx_power_dbm", sensor.tx_power_dbm);
      s.get("slot", sensor.assigned_slot);
      s.finish();
      wban.sensors.push_back(sensor);
    }
    w.finish();
    net.wbans.push_back(std::move(wban));
  }
  f.finish();
  net.waypoints.resize(net.wbans.size());
  return net;
}

json network_to(const NetworkState& net) {
  json j;
  j["box"] = {{"lo", vec_json(net.box.lo)}, {"hi", vec_json(net.box.hi)}};
  j["beacon_interval"] = net.wbans.empty() ? 0.1 : net.wbans.front().beacon_interval;
  j["slot_length"] = net.wbans.empty() ? 0.005 : net.wbans.front().slot_length;
  j["wbans"] = json::array();
  for (const auto& w : net.wbans) {
    json jw;
    jw["coordinator"] = vec_json(w.coordinator);
    jw["superframe_offset"] = w.superframe_offset;
    jw["clock_drift_ppm"] = w.clock_drift_ppm;
    jw["sensors"] = json::array();
    for (const auto& s : w.sensors)
      jw["sensors"].push_back({{"position", vec_json(s.position)},
                               {"tx_power_dbm", s.tx_power_dbm},
                               {"slot", s.assigned_slot}});
    j["wbans"].push_back(std::move(jw));
  }
  return j;
}

ExperimentConfig config_from(const json& root, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  SimConfig& s = c.sim;
  Fields top(root, "");

  {
    Fields f = top.object("scenario");
    f.get("n_wbans", s.scenario.n_wbans);
    f.get("k_sensors", s.scenario.k_sensors, true);
    f.get("tx_power_dbm", s.scenario.tx_power_dbm, true);
    f.get("min_body_radius", s.scenario.min_body_radius);
    f.get("max_body_radius", s.scenario.max_body_radius);
    f.get("max_drift_ppm", s.scenario.max_drift_ppm);
    if (!f.has("box")) throw ConfigError(f.where("box") + ": required field missing");
    s.box = read_box(f.object("box"), true);
    {
      Fields m = f.object("mobility");
      m.get("enabled", s.mobility_enabled);
      m.get("min_speed", s.mobility.min_speed);
      m.get("max_speed", s.mobility.max_speed);
      m.finish();
    }
    if (f.has("network_file")) {
      std::string file;
      f.get("network_file", file);
      std::filesystem::path p(file);
      if (p.is_relative()) p = base_dir / p;
      s.network = load_network(p);
    }
    f.finish();
  }
  {
    Fields f = top.object("channel");
    f.get("path_loss_exponent", s.channel.path_loss_exponent);
    f.get("reference_loss_db", s.channel.reference_loss_db);
    f.get("noise_floor_dbm", s.channel.noise_floor_dbm);
    f.get("shadowing_sigma_db", s.channel.shadowing_sigma_db);
    f.finish();
  }
  {
    Fields f = top.object("timing");
    f.get("beacon_interval", s.scenario.beacon_interval);
    f.get("slot_length", s.scenario.slot_length);
    f.get("t_fr", s.t_fr);
    f.get("t_b", s.t_b);
    f.get("sifs", s.sifs);
    f.get("nfrs", s.nfrs);
    f.finish();
  }
  {
    Fields f = top.object("protocol");
    f.get("theta_db", s.theta_db);
    f.get("n_channels", s.n_channels);
    f.get("switch_cost_frames", s.switch_cost_frames);
    f.get("capture_threshold_db", s.capture_threshold_db);
    f.get("max_retries", s.max_retries);
    f.finish();
  }
  {
    Fields f = top.object("run");
    f.get("seeds", c.seeds);
    f.get("horizon_superframes", s.horizon_superframes);
    f.get("warmup_superframes", s.warmup_superframes);
    f.get("workers", c.workers);
    if (f.has("protocols")) {
      std::vector<std::string> names;
      f.get("protocols", names);
      c.protocols.clear();
      for (const auto& n : names) {
        try {
          c.protocols.push_back(parse_protocol(n));
        } catch (const Error& e) {
          throw ConfigError(f.where("protocols") + ": " + e.what());
        }
      }
    }
    if (f.has("sweep")) {
      Fields sw = f.object("sweep");
      std::string axis = std::string(to_string(c.sweep.axis));
      sw.get("axis", axis);
      try {
        c.sweep.axis = parse_axis(axis);
      } catch (const Error& e) {
        throw ConfigError(sw.where("axis") + ": " + e.what());
      }
      sw.get("values", c.sweep.values);
      sw.finish();
    }
    f.finish();
  }
  top.get("output_dir", c.output_dir);
  top.finish();
  c.validate();
  return c;
}

json config_to(const ExperimentConfig& c) {
  const SimConfig& s = c.sim;
  json j;
  j["scenario"] = {
      {"n_wbans", s.scenario.n_wbans},
      {"k_sensors", s.scenario.k_sensors},
      {"tx_power_dbm", s.scenario.tx_power_dbm},
      {"min_body_radius", s.scenario.min_body_radius},
      {"max_body_radius", s.scenario.max_body_radius},
      {"max_drift_ppm", s.scenario.max_drift_ppm},
      {"box", {{"lo", vec_json(s.box.lo)}, {"hi", vec_json(s.box.hi)}}},
      {"mobility",
       {{"enabled", s.mobility_enabled},
        {"min_speed", s.mobility.min_speed},
        {"max_speed", s.mobility.max_speed}}},
  };
  // An inline network is hashed by content, not by file name.
  if (s.network) j["scenario"]["network"] = network_to(*s.network);
  j["channel"] = {{"path_loss_exponent", s.channel.path_loss_exponent},
                  {"reference_loss_db", s.channel.reference_loss_db},
                  {"noise_floor_dbm", s.channel.noise_floor_dbm},
                  {"shadowing_sigma_db", s.channel.shadowing_sigma_db}};
  j["timing"] = {{"beacon_interval", s.scenario.beacon_interval},
                 {"slot_length", s.scenario.slot_length},
                 {"t_fr", s.t_fr},
                 {"t_b", s.t_b},
                 {"sifs", s.sifs},
                 {"nfrs", s.nfrs}};
  j["protocol"] = {{"theta_db", s.theta_db},
                   {"n_channels", s.n_channels},
                   {"switch_cost_frames", s.switch_cost_frames},
                   {"capture_threshold_db", s.capture_threshold_db},
                   {"max_retries", s.max_retries}};
  json protos = json::array();
  for (auto p : c.protocols) protos.push_back(std::string(to_string(p)));
  j["run"] = {{"seeds", c.seeds},
              {"horizon_superframes", s.horizon_superframes},
              {"warmup_superframes", s.warmup_superframes},
              {"workers", c.workers},
              {"protocols", protos},
              {"sweep", {{"axis", std::string(to_string(c.sweep.axis))}, {"values", c.sweep.values}}}};
  j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  sim.validate();
  if (seeds.empty()) throw ConfigError("run.seeds: at least one seed required");
  if (workers == 0) throw ConfigError("run.workers must be >= 1");
  if (sweep.values.empty()) throw ConfigError("run.sweep.values must not be empty");
  for (double v : sweep.values) {
    if (sweep.axis == SweepAxis::kNWbans && (v < 1 || v != static_cast<double>(static_cast<long>(v))))
      throw ConfigError("run.sweep.values: n_wbans values must be positive integers");
    if (sweep.axis == SweepAxis::kTime &&
        (v < 0 || v >= static_cast<double>(sim.horizon_superframes)))
      throw ConfigError("run.sweep.values: time values must be round indices below the horizon");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  return config_from(parse_json(text), std::filesystem::current_path());
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return config_from(parse_json(text), path.parent_path());
}

std::string canonical_json(const ExperimentConfig& config) { return config_to(config).dump(); }

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical_json(config)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

std::string describe_constants(const ExperimentConfig& c) {
  const auto& s = c.sim;
  std::ostringstream ss;
  ss << "K=" << s.scenario.k_sensors << " sensors/WBAN, box [" << s.box.lo.x << "," << s.box.hi.x
     << "]x[" << s.box.lo.y << "," << s.box.hi.y << "]x[" << s.box.lo.z << "," << s.box.hi.z
     << "] m, tx " << s.scenario.tx_power_dbm << " dBm";
  return ss.str();
}

NetworkState parse_network(std::string_view text) { return network_from(parse_json(text), ""); }

NetworkState load_network(const std::filesystem::path& path) {
  return network_from(parse_json(read_file(path)), "");
}

std::string network_json(const NetworkState& network) { return network_to(network).dump(2); }

}  // namespace wban
