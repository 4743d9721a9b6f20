// Interference lists, interference sets, pairwise intersections and
// per-sensor interference lists.
#pragma once

#include <cstddef>
#include <set>
#include <span>

#include "wban/dtrc.hpp"
#include "wban/model.hpp"

namespace wban {

using SensorSet = std::set<SensorId>;

/// I_i: foreign sensors received at C_i above rho_min - theta.
struct InterferenceList {
  std::size_t owner = 0;
  SensorSet members;
  double threshold_theta = 0;  // dB
};

/// IS_i = I_i plus own sensors listed by some peer.
struct InterferenceSet {
  std::size_t owner = 0;
  SensorSet members;
};

struct SensorInterferenceList {
  SensorId owner_sensor;
  SensorSet members;
};

/// members = {(l, m) : l != owner, delta > rho_min - theta}, compared in dBm.
InterferenceList build_interference_list(const PowerTable& table, double theta_db);

/// Requires one list per WBAN id in [0, n_wbans); throws
/// IncompleteBroadcastError naming the first missing peer.
InterferenceSet build_interference_set(const InterferenceList& own,
                                       std::span<const InterferenceList> all_lists,
                                       std::size_t n_wbans);

/// IN_{i,l} = IS_i intersect IS_l.
SensorSet intersect(const InterferenceSet& a, const InterferenceSet& b);

/// Contribution of peer WBAN l to SIL_{i,k}: every peer sensor whose slot
/// collides with the owner's slot under `colliding` and for which
/// F_{i,k} OR F_{l,m} holds, F_x meaning x belongs to IN_{i,l}.
/// `peer_sensors` lists WBAN l's sensors; slot ids index `colliding`.
SensorSet build_sil(const Sensor& owner, std::span<const Sensor> peer_sensors,
                    const InterferenceSet& is_i, const InterferenceSet& is_l,
                    const SlotPairs& colliding);

}  // namespace wban
