#include "wban/interference.hpp"

#include <algorithm>
#include <iterator>
#include <string>
#include <vector>

#include "wban/error.hpp"

namespace wban {

InterferenceList build_interference_list(const PowerTable& table, double theta_db) {
  InterferenceList list;
  list.owner = table.owner;
  list.threshold_theta = theta_db;
  const double bar = table.rho_min - theta_db;
  for (const auto& [id, delta] : table.entries)
    if (id.wban != table.owner && delta > bar) list.members.insert(id);
  return list;
}

InterferenceSet build_interference_set(const InterferenceList& own,
                                       std::span<const InterferenceList> all_lists,
                                       std::size_t n_wbans) {
  std::vector<const InterferenceList*> by_owner(n_wbans, nullptr);
  for (const auto& l : all_lists)
    if (l.owner < n_wbans) by_owner[l.owner] = &l;
  for (std::size_t l = 0; l < n_wbans; ++l)
    if (!by_owner[l] && l != own.owner)
      throw IncompleteBroadcastError("interference list of WBAN " + std::to_string(l + 1) +
                                     " not received by WBAN " + std::to_string(own.owner + 1));

  InterferenceSet set;
  set.owner = own.owner;
  set.members = own.members;
  for (const auto* peer : by_owner) {
    if (!peer || peer->owner == own.owner) continue;
    for (const auto& id : peer->members)
      if (id.wban == own.owner) set.members.insert(id);
  }
  return set;
}

SensorSet intersect(const InterferenceSet& a, const InterferenceSet& b) {
  SensorSet out;
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                        std::inserter(out, out.end()));
  return out;
}

SensorSet build_sil(const Sensor& owner, std::span<const Sensor> peer_sensors,
                    const InterferenceSet& is_i, const InterferenceSet& is_l,
                    const SlotPairs& colliding) {
  const SensorSet in = intersect(is_i, is_l);
  const bool owner_flag = in.contains(owner.id);
  SensorSet out;
  for (const auto& peer : peer_sensors) {
    if (!colliding.contains({owner.assigned_slot, peer.assigned_slot})) continue;
    if (owner_flag || in.contains(peer.id)) out.insert(peer.id);
  }
  return out;
}

}  // namespace wban
