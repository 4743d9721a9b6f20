#include <cmath>

#include "doctest.h"
#include "wban/codes.hpp"
#include "wban/dtrc.hpp"
#include "wban/error.hpp"
#include "wban/golden.hpp"
#include "wban/protocols.hpp"

using namespace wban;

namespace {

GoldenFixture golden() { return load_golden(WBAN_FIXTURE_DIR "/golden_three_wban.json"); }

}  // namespace

TEST_CASE("protocol names") {
  CHECK(parse_protocol("ocaim") == ProtocolKind::kOcaim);
  CHECK(parse_protocol("Sms") == ProtocolKind::kSms);
  CHECK(to_string(ProtocolKind::kOs) == "OS");
  CHECK_THROWS_AS(parse_protocol("tdma"), ArgumentError);
}

TEST_CASE("observed beacons recover the superframe offset within the drift budget") {
  NetworkState net;
  for (std::size_t i = 0; i < 2; ++i) {
    Wban w;
    w.id = i;
    w.coordinator = {1.0 + i, 2, 1};
    net.wbans.push_back(w);
  }
  for (double offset : {-0.04, -0.0025, 0.0, 0.0025, 0.031}) {
    for (double drift : {0.0, 20.0, -20.0}) {
      net.wbans[0].superframe_offset = 0.05;
      net.wbans[1].superframe_offset = 0.05 + offset;
      net.wbans[0].clock_drift_ppm = drift;
      const double now = 0.3;
      const auto stamps = observe_beacon(net.wbans[0], net.wbans[1], now);
      const double tau = wrap_timeshift(compute_timeshift(stamps), 0.1);
      // Drift accumulates over the elapsed time plus at most one interval.
      CHECK(std::fabs(tau - offset) <= 20e-6 * (now + 0.1) + 1e-12);
      if (drift == 0.0) CHECK(std::fabs(tau - offset) < 1e-9);
    }
  }
}

TEST_CASE("OCAIM on the worked example") {
  const auto f = golden();
  OcaimOptions opt;
  opt.theta_db = f.theta_db;
  const auto trace = run_ocaim_round(f.network, ChannelModel{}, cowhc_for(3), opt);
  REQUIRE(trace.assignments.size() == 3);
  // Aligned superframes: slot z of every WBAN meets slot z of every peer.
  for (const auto& p : trace.patterns)
    for (const auto& [peer, ov] : p.entries) {
      CHECK(ov.timeshift == doctest::Approx(0).epsilon(1e-9));
      CHECK(ov.colliding_pairs.size() == 4);
    }
  // Every coded sensor uses its own WBAN's code.
  for (const auto& a : trace.assignments)
    for (const auto& s : a.per_slot)
      if (s.spread) CHECK(s.code == a.wban);
  CHECK(trace.assignments[1].spread_slots() == 3);
}

TEST_CASE("OCAIM needs one code per WBAN") {
  const auto f = golden();
  try {
    run_ocaim_round(f.network, ChannelModel{}, cowhc_for(2), OcaimOptions{});
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(e.max_achievable() == 2);
  }
}

TEST_CASE("OS spreads nothing") {
  const auto f = golden();
  for (const auto& p : run_os_round(f.network)) CHECK(p.spread_slots() == 0);
}

TEST_CASE("SMS colours interfering sensors off the default channel") {
  const auto f = golden();
  const auto plan = run_sms_round(f.network, ChannelModel{}, f.theta_db, 16);
  CHECK(plan.unresolved == 0);
  // Conflicting pairs never share a separation channel.
  OcaimOptions opt;
  opt.theta_db = f.theta_db;
  const auto trace = run_ocaim_round(f.network, ChannelModel{}, cowhc_for(3), opt);
  for (const auto& [a, b] : sms_conflicts(trace.sets)) {
    CHECK(plan.channel.at(a) != 0);
    CHECK(plan.channel.at(a) != plan.channel.at(b));
  }
  CHECK(plan.off_default() == 4);
}

TEST_CASE("channel exhaustion leaves sensors unresolved") {
  // 17 mutually conflicting sensors, 16 channels.
  NetworkState net;
  ConflictEdges edges;
  for (std::size_t i = 0; i < 17; ++i) {
    Wban w;
    w.id = i;
    w.sensors.push_back(Sensor{{i, 0}, {}, -10, 0});
    net.wbans.push_back(w);
  }
  for (std::size_t i = 0; i < 17; ++i)
    for (std::size_t j = i + 1; j < 17; ++j) edges.emplace_back(SensorId{i, 0}, SensorId{j, 0});
  const auto plan = assign_channels(net, edges, 16);
  CHECK(plan.unresolved == 1);
  CHECK(plan.off_default() == 16);
  CHECK(plan.channel.at({16, 0}) == 0);
}
