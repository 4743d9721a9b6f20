// Physical scenario: WBAN geometry, propagation, received power, SINR and
// rigid-body random-waypoint mobility.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace wban {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double norm() const;
  bool operator==(const Vec3&) const = default;
};

double distance(const Vec3& a, const Vec3& b);

/// (WBAN index, sensor index), both zero-based. Printed one-based as S_{i,k}.
struct SensorId {
  std::size_t wban = 0;
  std::size_t sensor = 0;
  auto operator<=>(const SensorId&) const = default;
};

std::string to_string(const SensorId& id);

inline constexpr double kDefaultTxPowerDbm = -10.0;

struct Sensor {
  SensorId id;
  Vec3 position;
  double tx_power_dbm = kDefaultTxPowerDbm;
  std::size_t assigned_slot = 0;
};

struct Wban {
  std::size_t id = 0;
  Vec3 coordinator;
  std::vector<Sensor> sensors;
  double superframe_offset = 0.0;  // s, local clock phase
  double beacon_interval = 0.1;    // s
  double slot_length = 0.005;      // s
  std::size_t code_index = 0;      // index into the network's COWHC set
  double clock_drift_ppm = 0.0;

  std::size_t k() const noexcept { return sensors.size(); }
  /// Slots in the active period: K, or more when assignments leave gaps.
  std::size_t slot_count() const noexcept;

  /// Superframe period on the global timeline, stretched by clock drift.
  double period() const noexcept { return beacon_interval * (1.0 + clock_drift_ppm * 1e-6); }
  /// Start of the latest superframe beginning at or before `now`.
  double superframe_start(double now) const;
};

struct Box {
  Vec3 lo{0, 0, 0};
  Vec3 hi{5, 5, 5};
  bool contains(const Vec3& p, double tol = 0.0) const;
};

struct WaypointState {
  Vec3 target;
  double speed = 0.0;  // m/s
  bool active = false;
};

struct MobilityParams {
  double min_speed = 0.1;  // m/s
  double max_speed = 1.0;
};

struct NetworkState {
  std::vector<Wban> wbans;
  Box box;
  std::vector<WaypointState> waypoints;  // one per WBAN, lazily initialised

  std::size_t n() const noexcept { return wbans.size(); }
  const Sensor& sensor(const SensorId& id) const { return wbans.at(id.wban).sensors.at(id.sensor); }
};

struct ChannelModel {
  double path_loss_exponent = 3.38;
  double reference_loss_db = 45.0;  // at 1 m
  double noise_floor_dbm = -95.0;
  double shadowing_sigma_db = 0.0;

  void validate() const;
};

/// Power received by every sensor in the network at one coordinator.
struct PowerTable {
  std::size_t owner = 0;
  std::map<SensorId, double> entries;  // dBm
  double rho_min = 0.0;                // dBm, minimum over own sensors
};

inline constexpr double kMinDistance = 0.01;  // m

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Log-distance path loss. Distances below 1 cm are clamped with a warning.
/// With shadowing_sigma_db > 0 a zero-mean Gaussian draw from `rng` is
/// subtracted; `rng` may be null only when sigma is zero.
double received_power(const Sensor& tx, const Vec3& rx_position, const ChannelModel& channel,
                      std::mt19937_64* rng = nullptr);

PowerTable build_power_table(const Wban& wban, const NetworkState& network,
                             const ChannelModel& channel);

/// A transmitter as seen by one receiver during one frame.
struct Emission {
  SensorId source;
  Vec3 position;
  double tx_power_dbm = kDefaultTxPowerDbm;
  std::optional<std::size_t> code;  // COWHC code index when spread
  double overlap = 1.0;             // fraction of the frame airtime overlapped
};

/// SINR in dB at `at`. With code_aware set, an interferer contributes nothing
/// when the signal is spread (despreading rejects it) or when both are spread
/// with different codes.
double sinr(const Vec3& at, const Emission& signal, std::span<const Emission> interferers,
            const ChannelModel& channel, bool code_aware);

/// Rigid random-waypoint step of every WBAN, clamped to the box.
NetworkState step_mobility(const NetworkState& network, double dt, std::uint64_t seed,
                           const MobilityParams& params = {});

struct ScatterParams {
  std::size_t n_wbans = 2;
  std::size_t k_sensors = 10;
  double min_body_radius = 0.2;  // m, sensor distance from coordinator
  double max_body_radius = 0.8;
  double beacon_interval = 0.1;
  double slot_length = 0.005;
  double max_drift_ppm = 20.0;
  double tx_power_dbm = kDefaultTxPowerDbm;
};

/// Random placement of N WBANs inside the box. Superframe offsets are uniform
/// in [0, BI) and drift uniform in [-max_drift_ppm, max_drift_ppm].
NetworkState scatter_network(const ScatterParams& params, const Box& box, std::uint64_t seed);

}  // namespace wban
