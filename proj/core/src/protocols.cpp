#include "wban/protocols.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "wban/error.hpp"

namespace wban {

namespace {

std::vector<CodeAssignmentPattern> empty_patterns(const NetworkState& network) {
  std::vector<CodeAssignmentPattern> out;
  for (const auto& w : network.wbans)
    out.push_back(CodeAssignmentPattern{w.id, std::vector<SlotAssignment>(w.slot_count())});
  return out;
}

SuperframeGeometry geometry_of(const Wban& w) {
  return SuperframeGeometry{w.slot_length, w.beacon_interval, w.slot_count()};
}

}  // namespace

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::kOcaim: return "OCAIM";
    case ProtocolKind::kOs: return "OS";
    case ProtocolKind::kSms: return "SMS";
  }
  return "?";
}

ProtocolKind parse_protocol(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "OCAIM") return ProtocolKind::kOcaim;
  if (upper == "OS") return ProtocolKind::kOs;
  if (upper == "SMS") return ProtocolKind::kSms;
  throw ArgumentError("unknown protocol '" + std::string(name) + "' (expected OCAIM, OS or SMS)");
}

std::size_t CodeAssignmentPattern::spread_slots() const {
  return static_cast<std::size_t>(
      std::count_if(per_slot.begin(), per_slot.end(), [](const auto& s) { return s.spread; }));
}

FrameTimestamps observe_beacon(const Wban& rx, const Wban& tx, double now,
                               const BeaconTiming& timing) {
  const double own_start = rx.superframe_start(now);
  const double peer_start = tx.superframe_start(now);
  FrameTimestamps s;
  s.mtp = 0.0;
  s.ptp = timing.sender_phy_delay;
  s.l_prop = distance(rx.coordinator, tx.coordinator) / timing.speed_of_light;
  s.prt = timing.phy_receive;
  s.ppt = timing.phy_processing;
  s.mrt = timing.mac_receive;
  // Global instant the last bit reaches the receiver MAC, read on the
  // receiver's (drifting) superframe-relative clock.
  const double elapsed = (peer_start - own_start) + (s.ptp - s.mtp) + s.l_prop + s.prt + s.ppt + s.mrt;
  s.frt = elapsed * (1.0 + rx.clock_drift_ppm * 1e-6);
  return s;
}

OcaimTrace run_ocaim_round(const NetworkState& network, const ChannelModel& channel,
                           const CowhcSet& codes, const OcaimOptions& options) {
  const std::size_t n = network.n();
  if (codes.set_size() < n)
    throw CapacityError("COWHC set holds " + std::to_string(codes.set_size()) + " codes for " +
                            std::to_string(n) + " WBANs",
                        codes.set_size());
  OcaimTrace trace;

  // Phase 1: TDMA transmissions, every coordinator measures every sensor.
  for (const auto& w : network.wbans)
    trace.power_tables.push_back(build_power_table(w, network, channel));

  // Phase 2: interference lists, broadcast, interference sets.
  for (const auto& table : trace.power_tables)
    trace.lists.push_back(build_interference_list(table, options.theta_db));
  for (const auto& list : trace.lists)
    trace.sets.push_back(build_interference_set(list, trace.lists, n));

  // Phase 3: DTRC.
  for (const auto& own : network.wbans) {
    TimeshiftPattern pattern;
    pattern.owner = own.id;
    for (const auto& peer : network.wbans) {
      if (peer.id == own.id) continue;
      const double tau = wrap_timeshift(
          compute_timeshift(observe_beacon(own, peer, options.now, options.timing)),
          own.beacon_interval);
      pattern.entries[peer.id] = PeerOverlap{tau, classify_overlap(tau, geometry_of(own))};
    }
    trace.patterns.push_back(std::move(pattern));
  }

  // Phase 4: sensor interference lists.
  for (const auto& own : network.wbans) {
    for (const auto& sensor : own.sensors) {
      SensorSet& sil = trace.sils[sensor.id];
      for (const auto& peer : network.wbans) {
        if (peer.id == own.id) continue;
        const auto contribution =
            build_sil(sensor, peer.sensors, trace.sets[own.id], trace.sets[peer.id],
                      trace.patterns[own.id].entries.at(peer.id).colliding_pairs);
        sil.insert(contribution.begin(), contribution.end());
      }
    }
  }

  // Phase 5: C_i codes S_{i,k}, C_l codes every S_{l,m} in SIL_{i,k}.
  trace.assignments = empty_patterns(network);
  auto assign = [&](const SensorId& id) {
    const Wban& w = network.wbans[id.wban];
    auto& slot = trace.assignments[id.wban].per_slot[w.sensors[id.sensor].assigned_slot];
    slot.spread = true;
    slot.code = w.code_index;
  };
  for (const auto& [owner, sil] : trace.sils) {
    if (sil.empty()) continue;
    assign(owner);
    for (const auto& member : sil) assign(member);
  }
  return trace;
}

std::vector<CodeAssignmentPattern> run_os_round(const NetworkState& network) {
  return empty_patterns(network);
}

std::size_t ChannelPlan::off_default() const {
  return static_cast<std::size_t>(
      std::count_if(channel.begin(), channel.end(), [](const auto& kv) { return kv.second != 0; }));
}

ChannelPlan assign_channels(const NetworkState& network, const ConflictEdges& edges,
                            std::size_t n_channels) {
  if (n_channels < 1) throw ArgumentError("assign_channels: n_channels must be >= 1");
  std::map<SensorId, std::vector<SensorId>> neighbours;
  for (const auto& [a, b] : edges) {
    neighbours[a].push_back(b);
    neighbours[b].push_back(a);
  }
  ChannelPlan plan;
  for (const auto& w : network.wbans)
    for (const auto& s : w.sensors) plan.channel[s.id] = 0;
  // std::map iterates in (WBAN, sensor) order: lower WBAN ids negotiate first.
  for (const auto& [id, adj] : neighbours) {
    std::vector<bool> used(n_channels + 1, false);
    for (const auto& other : adj) {
      auto it = plan.channel.find(other);
      if (it != plan.channel.end() && it->second != 0) used[it->second] = true;
    }
    std::size_t pick = 0;
    for (std::size_t c = 1; c <= n_channels; ++c)
      if (!used[c]) {
        pick = c;
        break;
      }
    plan.channel[id] = pick;
    if (pick == 0) ++plan.unresolved;
  }
  return plan;
}

ConflictEdges sms_conflicts(const std::vector<InterferenceSet>& sets) {
  ConflictEdges edges;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t l = i + 1; l < sets.size(); ++l) {
      const SensorSet in = intersect(sets[i], sets[l]);
      for (const auto& a : in) {
        if (a.wban != sets[i].owner) continue;
        for (const auto& b : in)
          if (b.wban == sets[l].owner) edges.emplace_back(a, b);
      }
    }
  }
  return edges;
}

ChannelPlan run_sms_round(const NetworkState& network, const ChannelModel& channel,
                          double theta_db, std::size_t n_channels) {
  std::vector<InterferenceList> lists;
  for (const auto& w : network.wbans)
    lists.push_back(build_interference_list(build_power_table(w, network, channel), theta_db));
  std::vector<InterferenceSet> sets;
  for (const auto& l : lists) sets.push_back(build_interference_set(l, lists, network.n()));
  return assign_channels(network, sms_conflicts(sets), n_channels);
}

}  // namespace wban
