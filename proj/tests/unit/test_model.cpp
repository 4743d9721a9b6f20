#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "wban/error.hpp"
#include "wban/log.hpp"
#include "wban/model.hpp"

using namespace wban;

namespace {

Sensor at(Vec3 p, SensorId id = {0, 0}) { return Sensor{id, p, -10.0, 0}; }

double db_sum(std::initializer_list<double> dbm) {
  double mw = 0;
  for (double d : dbm) mw += std::pow(10.0, d / 10);
  return 10 * std::log10(mw);
}

}  // namespace

TEST_CASE("log-distance received power") {
  const ChannelModel ch;
  // -10 dBm minus 45 dB at 1 m.
  CHECK(received_power(at({1, 0, 0}), {0, 0, 0}, ch) == doctest::Approx(-55.0));
  // Each decade of distance costs 33.8 dB.
  CHECK(received_power(at({10, 0, 0}), {0, 0, 0}, ch) == doctest::Approx(-88.8));
  CHECK(received_power(at({0.5, 0, 0}), {0, 0, 0}, ch) ==
        doctest::Approx(-55.0 - 33.8 * std::log10(0.5)));
}

TEST_CASE("sub-centimetre distances are clamped with a warning") {
  std::vector<std::string> seen;
  auto old = set_warning_sink([&](std::string_view m) { seen.emplace_back(m); });
  const ChannelModel ch;
  const double p = received_power(at({0, 0, 0}), {0, 0, 0}, ch);
  set_warning_sink(old);
  CHECK(p == doctest::Approx(-55.0 - 33.8 * std::log10(kMinDistance)));
  CHECK(seen.size() == 1);
}

TEST_CASE("shadowing needs a random source") {
  ChannelModel ch;
  ch.shadowing_sigma_db = 4;
  CHECK_THROWS_AS(received_power(at({1, 0, 0}), {0, 0, 0}, ch), ArgumentError);
  std::mt19937_64 rng(1);
  CHECK(std::isfinite(received_power(at({1, 0, 0}), {0, 0, 0}, ch, &rng)));
}

TEST_CASE("channel validation") {
  ChannelModel ch;
  ch.path_loss_exponent = 0;
  CHECK_THROWS_AS(ch.validate(), ArgumentError);
}

TEST_CASE("SINR arithmetic") {
  const ChannelModel ch;
  const Vec3 rx{0, 0, 0};
  const Emission sig{{0, 0}, {1, 0, 0}, -10, std::nullopt, 1.0};
  SUBCASE("noise only") { CHECK(sinr(rx, sig, {}, ch, false) == doctest::Approx(-55 + 95)); }
  SUBCASE("one full interferer at the same distance gives about 0 dB") {
    const std::vector<Emission> i{{{1, 0}, {-1, 0, 0}, -10, std::nullopt, 1.0}};
    CHECK(sinr(rx, sig, i, ch, false) == doctest::Approx(-55 - db_sum({-55, -95})));
  }
  SUBCASE("partial overlap weights interference power") {
    const std::vector<Emission> i{{{1, 0}, {-1, 0, 0}, -10, std::nullopt, 0.5}};
    CHECK(sinr(rx, sig, i, ch, false) == doctest::Approx(-55 - db_sum({-58.0103, -95})).epsilon(1e-4));
  }
  SUBCASE("code-aware rejection") {
    const std::vector<Emission> plain{{{1, 0}, {-1, 0, 0}, -10, std::nullopt, 1.0}};
    const std::vector<Emission> coded{{{1, 0}, {-1, 0, 0}, -10, std::size_t{1}, 1.0}};
    const std::vector<Emission> same{{{1, 0}, {-1, 0, 0}, -10, std::size_t{0}, 1.0}};
    Emission spread_sig = sig;
    spread_sig.code = 0;
    // A spread signal rejects everything after despreading.
    CHECK(sinr(rx, spread_sig, plain, ch, true) == doctest::Approx(40));
    CHECK(sinr(rx, spread_sig, coded, ch, true) == doctest::Approx(40));
    // Unspread signal is hurt by anything.
    CHECK(sinr(rx, sig, coded, ch, true) < 1);
    // Without code awareness the code is ignored.
    CHECK(sinr(rx, spread_sig, coded, ch, false) < 1);
    CHECK(sinr(rx, spread_sig, same, ch, true) == doctest::Approx(40));
  }
  SUBCASE("signal listed among interferers") {
    const std::vector<Emission> i{sig};
    CHECK_THROWS_AS(sinr(rx, sig, i, ch, false), ArgumentError);
  }
}

TEST_CASE("power table and rho_min") {
  NetworkState net;
  Wban w;
  w.coordinator = {0, 0, 0};
  w.sensors = {at({0.5, 0, 0}, {0, 0}), at({0.2, 0, 0}, {0, 1})};
  w.sensors[1].assigned_slot = 1;
  net.wbans.push_back(w);
  const auto t = build_power_table(net.wbans[0], net, ChannelModel{});
  CHECK(t.entries.size() == 2);
  CHECK(t.rho_min == doctest::Approx(t.entries.at({0, 0})));
}

TEST_CASE("mobility") {
  ScatterParams sp;
  sp.n_wbans = 4;
  const Box box;
  const auto net = scatter_network(sp, box, 11);

  SUBCASE("dt = 0 leaves positions unchanged") {
    const auto same = step_mobility(net, 0.0, 3);
    for (std::size_t i = 0; i < net.n(); ++i) CHECK(same.wbans[i].coordinator == net.wbans[i].coordinator);
  }
  SUBCASE("bodies stay rigid and inside the box") {
    auto cur = net;
    for (std::uint64_t step = 0; step < 400; ++step) {
      cur = step_mobility(cur, 0.5, step);
      for (std::size_t i = 0; i < cur.n(); ++i) {
        const auto& w = cur.wbans[i];
        CHECK(box.contains(w.coordinator, 1e-9));
        for (std::size_t k = 0; k < w.k(); ++k) {
          CHECK(box.contains(w.sensors[k].position, 1e-9));
          const Vec3 rel0 = net.wbans[i].sensors[k].position - net.wbans[i].coordinator;
          const Vec3 rel = w.sensors[k].position - w.coordinator;
          CHECK(distance(rel0, rel) < 1e-9);
        }
      }
    }
  }
  SUBCASE("speed bound") {
    const auto moved = step_mobility(net, 1.0, 5, MobilityParams{0.1, 1.0});
    for (std::size_t i = 0; i < net.n(); ++i)
      CHECK(distance(moved.wbans[i].coordinator, net.wbans[i].coordinator) <= 1.0 + 1e-9);
  }
  SUBCASE("negative dt") { CHECK_THROWS_AS(step_mobility(net, -1, 0), ArgumentError); }
}

TEST_CASE("scatter_network is seeded and respects its ranges") {
  ScatterParams sp;
  sp.n_wbans = 6;
  const auto a = scatter_network(sp, Box{}, 42);
  const auto b = scatter_network(sp, Box{}, 42);
  const auto c = scatter_network(sp, Box{}, 43);
  CHECK(a.wbans[3].coordinator == b.wbans[3].coordinator);
  CHECK_FALSE(a.wbans[3].coordinator == c.wbans[3].coordinator);
  for (const auto& w : a.wbans) {
    CHECK(w.superframe_offset >= 0);
    CHECK(w.superframe_offset < sp.beacon_interval);
    CHECK(std::fabs(w.clock_drift_ppm) <= sp.max_drift_ppm);
    CHECK(w.k() == sp.k_sensors);
    for (const auto& s : w.sensors) {
      const double r = distance(s.position, w.coordinator);
      CHECK(r >= sp.min_body_radius - 1e-12);
      CHECK(r <= sp.max_body_radius + 1e-12);
    }
  }
}

TEST_CASE("sensor naming is one-based") {
  CHECK(to_string(SensorId{1, 3}) == "S_{2,4}");
  CHECK(dbm_to_mw(0) == doctest::Approx(1.0));
  CHECK(mw_to_dbm(0.1) == doctest::Approx(-10.0));
}
