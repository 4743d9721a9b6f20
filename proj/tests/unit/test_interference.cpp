#include <vector>

#include "doctest.h"
#include "wban/error.hpp"
#include "wban/interference.hpp"

using namespace wban;

namespace {

PowerTable table(std::size_t owner, double rho_min, std::map<SensorId, double> entries) {
  PowerTable t;
  t.owner = owner;
  t.rho_min = rho_min;
  t.entries = std::move(entries);
  return t;
}

Sensor sensor(std::size_t w, std::size_t k) { return Sensor{{w, k}, {}, -10.0, k}; }

}  // namespace

TEST_CASE("interference list admits foreign sensors above rho_min - theta") {
  // rho_min -60 dBm, theta 3 dB -> bar -63 dBm, strict.
  const auto t = table(0, -60, {{{0, 0}, -60}, {{0, 1}, -40},       // own, never listed
                                {{1, 0}, -62.9}, {{1, 1}, -63.0},   // just above, on the bar
                                {{2, 0}, -70}, {{2, 3}, -50}});
  const auto l = build_interference_list(t, 3.0);
  CHECK(l.members == SensorSet{{1, 0}, {2, 3}});
  CHECK(l.threshold_theta == 3.0);
  // Raising theta lowers the bar and can only add members.
  const auto wider = build_interference_list(t, 11.0);
  CHECK(wider.members == SensorSet{{1, 0}, {1, 1}, {2, 0}, {2, 3}});
}

TEST_CASE("interference set adds own sensors listed by peers") {
  const InterferenceList l0{0, {{1, 3}}, 3};
  const InterferenceList l1{1, {{0, 3}, {2, 0}}, 3};
  const InterferenceList l2{2, {{1, 2}}, 3};
  const std::vector<InterferenceList> all{l0, l1, l2};
  CHECK(build_interference_set(l0, all, 3).members == SensorSet{{0, 3}, {1, 3}});
  CHECK(build_interference_set(l1, all, 3).members == SensorSet{{0, 3}, {1, 2}, {1, 3}, {2, 0}});
  CHECK(build_interference_set(l2, all, 3).members == SensorSet{{1, 2}, {2, 0}});
}

TEST_CASE("missing peer list raises IncompleteBroadcastError") {
  const InterferenceList l0{0, {}, 3};
  const std::vector<InterferenceList> partial{l0};
  CHECK_THROWS_AS(build_interference_set(l0, partial, 2), IncompleteBroadcastError);
}

TEST_CASE("SIL uses OR of the two membership indicators over colliding slots") {
  // IN = {(0,1), (1,2)}.
  const InterferenceSet is0{0, {{0, 1}, {1, 2}, {1, 0}}};
  const InterferenceSet is1{1, {{0, 1}, {1, 2}, {0, 0}}};
  const std::vector<Sensor> peers{sensor(1, 0), sensor(1, 1), sensor(1, 2)};
  const SlotPairs diagonal{{0, 0}, {1, 1}, {2, 2}};
  // Owner in IN: every colliding peer sensor qualifies.
  CHECK(build_sil(sensor(0, 1), peers, is0, is1, diagonal) == SensorSet{{1, 1}});
  // Owner outside IN but colliding peer inside IN.
  CHECK(build_sil(sensor(0, 2), peers, is0, is1, diagonal) == SensorSet{{1, 2}});
  // Neither inside IN.
  CHECK(build_sil(sensor(0, 0), peers, is0, is1, diagonal).empty());
  // No slot collision, no entry.
  CHECK(build_sil(sensor(0, 1), peers, is0, is1, SlotPairs{{1, 2}}) == SensorSet{{1, 2}});
  CHECK(build_sil(sensor(0, 1), peers, is0, is1, SlotPairs{}).empty());
}

TEST_CASE("intersect") {
  const InterferenceSet a{0, {{0, 1}, {1, 2}}}, b{1, {{1, 2}, {2, 2}}};
  CHECK(intersect(a, b) == SensorSet{{1, 2}});
}
