// Discrete-event Monte-Carlo engine: superframes, mobility, beacons, frames,
// SINR capture and per-protocol metrics.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "wban/analytics.hpp"
#include "wban/model.hpp"
#include "wban/protocols.hpp"

namespace wban {

struct SimConfig {
  ScatterParams scenario;
  Box box;
  MobilityParams mobility;
  bool mobility_enabled = true;
  ChannelModel channel;

  double t_fr = 1.152e-3;   // s
  double t_b = 0.6e-3;      // s
  double sifs = 0.192e-3;   // s
  unsigned nfrs = 1;        // frames generated per sensor per superframe

  double theta_db = 10.0;
  std::size_t n_channels = 16;
  double switch_cost_frames = 2.0;  // channel-switch energy in frame energies
  double capture_threshold_db = 10.0;
  unsigned max_retries = 0;         // same-slot retransmissions of a lost frame

  std::size_t horizon_superframes = 500;
  std::size_t warmup_superframes = 1;

  /// When set, used instead of scatter_network (offsets and drift included).
  std::optional<NetworkState> network;

  void validate() const;
};

/// Per (round, WBAN) counters. A round is one global beacon interval.
struct RoundRecord {
  std::size_t round = 0;
  std::size_t wban = 0;
  double sinr_sum_db = 0;
  double sinr_min_db = 0;
  std::size_t sinr_samples = 0;
  double energy_mws = 0;
  std::size_t beacons_sent = 0;
  std::size_t beacons_collided = 0;
  std::size_t frames_generated = 0;
  std::size_t frames_sent = 0;
  std::size_t frames_delivered = 0;
  std::size_t frames_collided = 0;
  std::size_t frames_in_flight = 0;
  std::size_t frames_dropped = 0;  // generated but never sent (lost beacon, full slot)
  std::size_t codes_assigned = 0;
  std::size_t channel_switches = 0;

  double mean_sinr_db() const;
};

struct MetricsLog {
  ProtocolKind protocol = ProtocolKind::kOs;
  std::uint64_t seed = 0;
  std::size_t n_wbans = 0;
  std::size_t warmup_rounds = 0;
  std::vector<RoundRecord> records;  // ordered by (round, wban)

  MetricsLog& merge(const MetricsLog& other);
};

/// Run-level aggregates over post-warmup rounds.
struct RunSummary {
  double mean_sinr_db = 0;
  double min_sinr_db = 0;
  double energy_mws_per_wban = 0;
  double fdr = 1;
  double beacon_success = 1;
  std::size_t beacons_sent = 0;
  std::size_t beacons_collided = 0;
  std::size_t frames_sent = 0;
  std::size_t frames_delivered = 0;
  std::size_t frames_collided = 0;
  std::size_t frames_in_flight = 0;
  double codes_assigned_per_round = 0;
  std::size_t channel_switches = 0;
};

RunSummary summarize(const MetricsLog& log);

MetricsLog run_simulation(const SimConfig& config, ProtocolKind protocol, std::uint64_t seed);

struct BeaconEstimate {
  double probability = 1;
  double ci_half_width = 0;  // binomial 95 %
  std::size_t attempts = 0;
  bool insufficient = false;  // fewer than kMinBeaconAttempts
};

inline constexpr std::size_t kMinBeaconAttempts = 1000;

BeaconEstimate measure_beacon_success(const MetricsLog& log);

/// Closed-form parameters matching a simulation config with n WBANs.
AnalyticParams analytic_params(const SimConfig& config, std::size_t n_wbans);

enum class SweepAxis { kNWbans, kTheta, kTime };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);

struct SweepPoint {
  double axis_value = 0;
  ProtocolKind protocol = ProtocolKind::kOs;
  std::size_t seeds = 0;
  double sinr_mean = 0, sinr_std = 0;
  double energy_mean = 0, energy_std = 0;
  double fdr_mean = 0, fdr_std = 0;
  double beacon_mean = 0, beacon_std = 0;
  std::vector<RunSummary> per_seed;  // in seed order
};

/// For kTime, `values` are round indices and each point aggregates that
/// round across seeds. Runs are fanned out over `workers` threads; results
/// do not depend on the worker count.
std::vector<SweepPoint> sweep(const SimConfig& base, SweepAxis axis,
                              const std::vector<double>& values,
                              const std::vector<ProtocolKind>& protocols,
                              const std::vector<std::uint64_t>& seeds, std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Event queue, exposed for tests.

enum class EventKind : int {
  kFrameEnd = 0,
  kBeaconEnd,
  kMobilityStep,
  kProtocolRound,
  kSuperframeBoundary,
  kBeaconTx,
  kSlotStart,
  kFrameTx,
};

struct Event {
  double time = 0;
  EventKind kind = EventKind::kFrameEnd;
  std::size_t wban = 0;
  std::size_t sensor = 0;

  /// Strict total order: (time, kind, wban, sensor).
  friend bool operator<(const Event& a, const Event& b);
};

class EventQueue {
 public:
  void push(const Event& e) { heap_.push(e); }
  Event pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const { return b < a; }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
};

}  // namespace wban
