#include <cmath>
#include <vector>

#include "doctest.h"
#include "wban/analytics.hpp"
#include "wban/error.hpp"
#include "wban/log.hpp"

using namespace wban;

namespace {

double bisect(double c, std::size_t n) {
  double lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid - std::pow(1 - c, static_cast<double>(n - 1) * mid);
    (g < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct QuietWarnings {
  WarningSink old = set_warning_sink([](std::string_view) {});
  ~QuietWarnings() { set_warning_sink(old); }
};

}  // namespace

TEST_CASE("fixed point agrees with bisection") {
  for (double c = 0.01; c <= 0.9 + 1e-9; c += 0.01)
    for (std::size_t n = 2; n <= 20; ++n) {
      const auto r = beacon_success_fixed_point(c, n);
      CHECK(std::fabs(r.fixed_point - bisect(c, n)) < 1e-10);
      CHECK(r.open_loop == doctest::Approx(std::pow(1 - c, n - 1.0)));
    }
}

TEST_CASE("fixed point degenerate inputs") {
  CHECK(beacon_success_fixed_point(0.0, 7).fixed_point == 1.0);
  CHECK(beacon_success_fixed_point(0.5, 1).fixed_point == 1.0);
  CHECK_THROWS_AS(beacon_success_fixed_point(1.0, 3), ArgumentError);
  CHECK_THROWS_AS(beacon_success_fixed_point(0.2, 0), ArgumentError);
}

TEST_CASE("beacon collision window at default timing") {
  AnalyticParams p;
  // 2*T_B + K*(T_fr + T_B) = 1.2 ms + 10 * 1.752 ms.
  const auto c = beacon_collision_probability(p);
  CHECK(c.t_bcoll == doctest::Approx(0.01872));
  CHECK(c.pr_bcoll == doctest::Approx(0.1872));
  CHECK(c.flags == kValid);
}

TEST_CASE("occupancy caps at one slot") {
  AnalyticParams p;
  p.nfrs.assign(10, 1);
  p.nfrs[0] = 3;
  p.nfrs[1] = 50;
  const auto td = occupancy(p);
  CHECK(td[0] == doctest::Approx(3 * 1.152e-3 + 2 * 0.192e-3));
  CHECK(td[1] == doctest::Approx(p.ts));
  CHECK(td[2] == doctest::Approx(1.152e-3));
}

TEST_CASE("saturated beacon window is clamped and flagged") {
  QuietWarnings quiet;
  AnalyticParams p;
  p.k_sensors = 10;
  p.ts = 0.005;
  p.bi = 0.1;
  p.nfrs.assign(10, 10);  // every slot full
  p.t_b = 5e-3;
  const auto c = beacon_collision_probability(p);
  CHECK(c.pr_bcoll == 1.0);
  CHECK((c.flags & kBeaconWindowSaturated) != 0);
  CHECK(describe_flags(c.flags).find("beacon") != std::string::npos);
}

TEST_CASE("analytic curve rows") {
  AnalyticParams p;
  const std::vector<std::size_t> ns{1, 2, 5, 10};
  const auto rows = analytic_curve(p, ns);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].pr_bsucc_fixedpoint == 1.0);
  CHECK(rows[0].pr_frsucc == doctest::Approx(1.0));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].pr_bsucc_fixedpoint < rows[i - 1].pr_bsucc_fixedpoint);
    CHECK(rows[i].pr_bsucc_fixedpoint >= rows[i].pr_bsucc_openloop);
    CHECK(rows[i].pr_frsucc <= rows[i - 1].pr_frsucc + 1e-15);
  }
}

TEST_CASE("parameter validation") {
  AnalyticParams p;
  p.nfrs = {1, 2};  // wrong size for K = 10
  CHECK_THROWS_AS(p.normalized(), ArgumentError);
  AnalyticParams q;
  q.ts = 0;
  CHECK_THROWS_AS(q.normalized(), ArgumentError);
}
