// Per-superframe coordination rounds: OCAIM (five phases), the uncoordinated
// orthogonal-TDMA baseline (OS) and sensor-level channel allocation (SMS).
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wban/codes.hpp"
#include "wban/dtrc.hpp"
#include "wban/interference.hpp"
#include "wban/model.hpp"

namespace wban {

enum class ProtocolKind { kOcaim, kOs, kSms };

std::string_view to_string(ProtocolKind kind);
ProtocolKind parse_protocol(std::string_view name);

struct SlotAssignment {
  bool spread = false;
  std::optional<std::size_t> code;  // index into the COWHC set

  bool operator==(const SlotAssignment&) const = default;
};

/// Code-to-timeslot assignment of one WBAN; per_slot[k] covers slot k.
struct CodeAssignmentPattern {
  std::size_t wban = 0;
  std::vector<SlotAssignment> per_slot;

  std::size_t spread_slots() const;
  bool operator==(const CodeAssignmentPattern&) const = default;
};

/// Receive-side constants used to synthesise beacon timestamps.
struct BeaconTiming {
  double sender_phy_delay = 20e-6;  // PTP - MTP
  double phy_receive = 0.6e-3;      // PRT, roughly the beacon airtime
  double phy_processing = 10e-6;    // PPT
  double mac_receive = 5e-6;        // MRT
  double speed_of_light = 299'792'458.0;
};

/// Timestamps C_rx would record for the beacon of `tx` at global time `now`,
/// including the receiver's clock drift over the elapsed part of its
/// superframe.
FrameTimestamps observe_beacon(const Wban& rx, const Wban& tx, double now,
                               const BeaconTiming& timing = {});

/// Everything OCAIM derived in one round, kept for inspection and manifests.
struct OcaimTrace {
  std::vector<PowerTable> power_tables;
  std::vector<InterferenceList> lists;
  std::vector<InterferenceSet> sets;
  std::vector<TimeshiftPattern> patterns;
  std::map<SensorId, SensorSet> sils;  // SIL_{i,k}, union over peers
  std::vector<CodeAssignmentPattern> assignments;
};

struct OcaimOptions {
  double theta_db = 10.0;
  double now = 0.0;  // global time at which beacons are observed
  BeaconTiming timing;
};

/// Runs Phases 1-5. `codes` must hold at least one code per WBAN, otherwise
/// CapacityError is raised with the available size.
OcaimTrace run_ocaim_round(const NetworkState& network, const ChannelModel& channel,
                           const CowhcSet& codes, const OcaimOptions& options);

/// Orthogonal TDMA inside each WBAN only; nothing is spread.
std::vector<CodeAssignmentPattern> run_os_round(const NetworkState& network);

/// channel[id] == 0 means the shared default channel; 1..n_channels are the
/// separation channels.
struct ChannelPlan {
  std::map<SensorId, std::size_t> channel;
  std::size_t unresolved = 0;  // interfering sensors left on the default channel

  std::size_t off_default() const;
};

using ConflictEdges = std::vector<std::pair<SensorId, SensorId>>;

/// Greedy lowest-free-channel colouring in (WBAN, sensor) order.
ChannelPlan assign_channels(const NetworkState& network, const ConflictEdges& edges,
                            std::size_t n_channels);

/// Sensor-level conflicts: every cross pair inside each IN_{i,l}.
ConflictEdges sms_conflicts(const std::vector<InterferenceSet>& sets);

ChannelPlan run_sms_round(const NetworkState& network, const ChannelModel& channel,
                          double theta_db, std::size_t n_channels = 16);

}  // namespace wban
