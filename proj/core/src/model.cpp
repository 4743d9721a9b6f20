#include "wban/model.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>

#include "wban/error.hpp"
#include "wban/log.hpp"
#include "wban/rng.hpp"

namespace wban {

namespace {

std::mutex g_sink_mutex;
WarningSink g_sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };

enum Stream : std::uint64_t { kPlacement = 1, kMobility = 2 };

Vec3 uniform_in(std::mt19937_64& rng, const Vec3& lo, const Vec3& hi) {
  return {uniform(rng, lo.x, hi.x), uniform(rng, lo.y, hi.y), uniform(rng, lo.z, hi.z)};
}

Vec3 random_direction(std::mt19937_64& rng) {
  const double z = uniform(rng, -1.0, 1.0);
  const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(1.0 - z * z);
  return {r * std::cos(phi), r * std::sin(phi), z};
}

// Axis-aligned bounds of a WBAN (coordinator plus sensors).
std::pair<Vec3, Vec3> extent(const Wban& w) {
  Vec3 lo = w.coordinator, hi = w.coordinator;
  for (const auto& s : w.sensors) {
    lo = {std::min(lo.x, s.position.x), std::min(lo.y, s.position.y), std::min(lo.z, s.position.z)};
    hi = {std::max(hi.x, s.position.x), std::max(hi.y, s.position.y), std::max(hi.z, s.position.z)};
  }
  return {lo, hi};
}

double clamp_axis(double shift, double lo, double hi, double box_lo, double box_hi) {
  const double min_shift = box_lo - lo;
  const double max_shift = box_hi - hi;
  if (min_shift > max_shift) return (min_shift + max_shift) / 2.0;  // body larger than box
  return std::clamp(shift, min_shift, max_shift);
}

}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(g_sink_mutex);
  std::swap(g_sink, sink);
  return sink;
}

void warn(std::string_view message) {
  std::lock_guard lock(g_sink_mutex);
  if (g_sink) g_sink(message);
}

double Wban::superframe_start(double now) const {
  const double p = period();
  return superframe_offset + std::floor((now - superframe_offset) / p) * p;
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

std::string to_string(const SensorId& id) {
  return "S_{" + std::to_string(id.wban + 1) + "," + std::to_string(id.sensor + 1) + "}";
}

bool Box::contains(const Vec3& p, double tol) const {
  return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol &&
         p.z >= lo.z - tol && p.z <= hi.z + tol;
}

void ChannelModel::validate() const {
  if (!(path_loss_exponent > 0)) throw ArgumentError("path_loss_exponent must be > 0");
  if (!(noise_floor_dbm < 0)) throw ArgumentError("noise_floor_dbm must be < 0");
  if (shadowing_sigma_db < 0) throw ArgumentError("shadowing_sigma_db must be >= 0");
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double received_power(const Sensor& tx, const Vec3& rx_position, const ChannelModel& channel,
                      std::mt19937_64* rng) {
  double d = distance(tx.position, rx_position);
  if (d < kMinDistance) {
    warn("received_power: transmitter " + to_string(tx.id) +
         " coincides with receiver; distance clamped to 1 cm");
    d = kMinDistance;
  }
  double p = tx.tx_power_dbm - channel.reference_loss_db -
             10.0 * channel.path_loss_exponent * std::log10(d);
  if (channel.shadowing_sigma_db > 0) {
    if (!rng) throw ArgumentError("received_power: shadowing requires a random stream");
    p -= std::normal_distribution<double>(0.0, channel.shadowing_sigma_db)(*rng);
  }
  return p;
}

PowerTable build_power_table(const Wban& wban, const NetworkState& network,
                             const ChannelModel& channel) {
  PowerTable table;
  table.owner = wban.id;
  for (const auto& w : network.wbans)
    for (const auto& s : w.sensors)
      table.entries[s.id] = received_power(s, wban.coordinator, channel);
  double rho = std::numeric_limits<double>::infinity();
  for (const auto& s : wban.sensors) rho = std::min(rho, table.entries.at(s.id));
  table.rho_min = wban.sensors.empty() ? 0.0 : rho;
  return table;
}

double sinr(const Vec3& at, const Emission& signal, std::span<const Emission> interferers,
            const ChannelModel& channel, bool code_aware) {
  auto power_mw = [&](const Emission& e) {
    Sensor probe{e.source, e.position, e.tx_power_dbm, 0};
    return dbm_to_mw(received_power(probe, at, channel));
  };
  double interference = 0.0;
  for (const auto& e : interferers) {
    if (e.source == signal.source) throw ArgumentError("sinr: signal listed among interferers");
    if (code_aware) {
      if (signal.code) continue;
      if (e.code && signal.code && *e.code != *signal.code) continue;
    }
    interference += power_mw(e) * std::clamp(e.overlap, 0.0, 1.0);
  }
  return mw_to_dbm(power_mw(signal)) - mw_to_dbm(dbm_to_mw(channel.noise_floor_dbm) + interference);
}

NetworkState step_mobility(const NetworkState& network, double dt, std::uint64_t seed,
                           const MobilityParams& params) {
  if (dt < 0) throw ArgumentError("step_mobility: dt must be >= 0");
  NetworkState next = network;
  next.waypoints.resize(next.wbans.size());
  if (dt == 0) return next;
  for (std::size_t i = 0; i < next.wbans.size(); ++i) {
    Wban& w = next.wbans[i];
    WaypointState& wp = next.waypoints[i];
    auto rng = make_stream(seed, kMobility, w.id);
    double remaining = dt;
    Vec3 shift{0, 0, 0};
    Vec3 here = w.coordinator;
    // A WBAN may reach several waypoints within one long step.
    for (int legs = 0; remaining > 0 && legs < 64; ++legs) {
      if (!wp.active) {
        wp.target = uniform_in(rng, next.box.lo, next.box.hi);
        wp.speed = uniform(rng, params.min_speed, params.max_speed);
        wp.active = true;
      }
      const Vec3 to_target = wp.target - here;
      const double dist = to_target.norm();
      const double reach = wp.speed * remaining;
      if (dist <= reach) {
        shift = shift + to_target;
        here = wp.target;
        remaining -= wp.speed > 0 ? dist / wp.speed : remaining;
        wp.active = false;
      } else {
        const Vec3 step = to_target * (reach / dist);
        shift = shift + step;
        here = here + step;
        remaining = 0;
      }
    }
    const auto [lo, hi] = extent(w);
    const Vec3 applied{clamp_axis(shift.x, lo.x, hi.x, next.box.lo.x, next.box.hi.x),
                       clamp_axis(shift.y, lo.y, hi.y, next.box.lo.y, next.box.hi.y),
                       clamp_axis(shift.z, lo.z, hi.z, next.box.lo.z, next.box.hi.z)};
    // A clamped body can never reach a target outside its feasible range.
    if (!(applied == shift)) wp.active = false;
    w.coordinator = w.coordinator + applied;
    for (auto& s : w.sensors) s.position = s.position + applied;
  }
  return next;
}

std::size_t Wban::slot_count() const noexcept {
  std::size_t n = sensors.size();
  for (const auto& s : sensors) n = std::max(n, s.assigned_slot + 1);
  return n;
}

NetworkState scatter_network(const ScatterParams& p, const Box& box, std::uint64_t seed) {
  if (p.max_body_radius < p.min_body_radius || p.min_body_radius < 0)
    throw ArgumentError("scatter_network: invalid body radius range");
  NetworkState net;
  net.box = box;
  const Vec3 margin{p.max_body_radius, p.max_body_radius, p.max_body_radius};
  for (std::size_t i = 0; i < p.n_wbans; ++i) {
    auto rng = make_stream(seed, kPlacement, i);
    Wban w;
    w.id = i;
    w.beacon_interval = p.beacon_interval;
    w.slot_length = p.slot_length;
    w.code_index = i;
    w.coordinator = uniform_in(rng, box.lo + margin, box.hi - margin);
    w.superframe_offset = uniform(rng, 0.0, p.beacon_interval);
    w.clock_drift_ppm = p.max_drift_ppm > 0 ? uniform(rng, -p.max_drift_ppm, p.max_drift_ppm) : 0.0;
    for (std::size_t k = 0; k < p.k_sensors; ++k) {
      const double r = uniform(rng, p.min_body_radius, p.max_body_radius);
      w.sensors.push_back(Sensor{{i, k}, w.coordinator + random_direction(rng) * r,
                                 p.tx_power_dbm, k});
    }
    net.wbans.push_back(std::move(w));
  }
  net.waypoints.resize(net.wbans.size());
  return net;
}

}  // namespace wban
