#include "wban/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wban/error.hpp"
#include "wban/log.hpp"

namespace wban {

AnalyticParams AnalyticParams::normalized() const {
  AnalyticParams p = *this;
  if (p.k_sensors == 0) throw ArgumentError("analytics: K must be >= 1");
  if (p.n_wbans == 0) throw ArgumentError("analytics: N must be >= 1");
  if (!(p.bi > 0 && p.ts > 0 && p.t_fr > 0 && p.t_b > 0 && p.sifs > 0))
    throw ArgumentError("analytics: all durations must be > 0");
  if (static_cast<double>(p.k_sensors) * p.ts > p.bi * (1 + 1e-12))
    throw ArgumentError("analytics: K * TS exceeds BI");
  if (p.nfrs.empty()) p.nfrs.assign(p.k_sensors, 1);
  if (p.nfrs.size() != p.k_sensors) throw ArgumentError("analytics: nfrs must have K entries");
  if (std::any_of(p.nfrs.begin(), p.nfrs.end(), [](unsigned v) { return v < 1; }))
    throw ArgumentError("analytics: nfrs must be >= 1");
  if (p.p_frames.empty()) p.p_frames.assign(p.nfrs.begin(), p.nfrs.end());
  if (p.p_frames.size() != p.k_sensors)
    throw ArgumentError("analytics: p_frames must have K entries");
  if (std::any_of(p.p_frames.begin(), p.p_frames.end(), [](double v) { return !(v > 0); }))
    throw ArgumentError("analytics: P_i must be > 0");
  return p;
}

std::string describe_flags(std::uint32_t flags) {
  if (flags == kValid) return "ok";
  std::string out;
  auto add = [&](std::uint32_t bit, const char* name) {
    if (!(flags & bit)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(kBeaconWindowSaturated, "beacon_window_saturated");
  add(kWbanSuccessFloored, "wban_success_floored");
  add(kFrameSuccessClamped, "frame_success_clamped");
  add(kCollisionWindowSaturated, "collision_window_saturated");
  return out;
}

std::vector<double> occupancy(const AnalyticParams& params) {
  const auto p = params.normalized();
  std::vector<double> td;
  td.reserve(p.k_sensors);
  for (unsigned n : p.nfrs) td.push_back(std::min(p.ts, n * p.t_fr + (n - 1.0) * p.sifs));
  return td;
}

BeaconCollision beacon_collision_probability(const AnalyticParams& params) {
  const auto p = params.normalized();
  const auto td = occupancy(p);
  BeaconCollision out;
  out.t_bcoll = 2 * p.t_b;
  for (double d : td) out.t_bcoll += d + p.t_b;
  out.pr_bcoll = out.t_bcoll / p.bi;
  if (out.pr_bcoll > 1) {
    warn("beacon collision window exceeds the beacon interval; probability clamped to 1");
    out.pr_bcoll = 1;
    out.flags |= kBeaconWindowSaturated;
  }
  return out;
}

BeaconSuccess beacon_success_fixed_point(double c, std::size_t n) {
  if (!(c >= 0 && c < 1)) throw ArgumentError("fixed point requires Pr_Bcoll in [0, 1)");
  if (n < 1) throw ArgumentError("fixed point requires N >= 1");
  const double peers = static_cast<double>(n - 1);
  const double base = 1 - c;
  BeaconSuccess out;
  out.open_loop = std::pow(base, peers);
  double p = 1.0;
  for (std::size_t it = 1; it <= kFixedPointMaxIterations; ++it) {
    const double next = 0.5 * (p + std::pow(base, peers * p));
    out.iterations = it;
    if (std::fabs(next - p) < kFixedPointTolerance) {
      p = next;
      out.fixed_point = p;
      out.w_succ = peers * p;
      return out;
    }
    p = next;
  }
  throw NumericError("beacon success fixed point did not converge");
}

double DataSuccess::mean_pr_frsucc() const {
  if (pr_frsucc.empty()) return 0;
  return std::accumulate(pr_frsucc.begin(), pr_frsucc.end(), 0.0) /
         static_cast<double>(pr_frsucc.size());
}

DataSuccess data_success(const AnalyticParams& params, double pr_bcoll,
                         const BeaconSuccess& beacon) {
  const auto p = params.normalized();
  const auto td = occupancy(p);
  DataSuccess out;
  out.d_succ = p.bi * std::pow(1 - pr_bcoll, beacon.w_succ);
  out.d_coll = 0;
  for (double d : td) out.d_coll += d + p.t_fr;
  if (out.d_succ <= 0 || out.d_coll > out.d_succ) {
    warn("data collision window exceeds the successful window; WBAN success floored at 0");
    out.pr_wbansucc = 0;
    out.flags |= kWbanSuccessFloored;
  } else {
    out.pr_wbansucc = (out.d_succ - out.d_coll) / out.d_succ;
  }
  const double per_slot = std::trunc(p.ts / (p.t_fr + p.sifs));
  for (std::size_t i = 0; i < p.k_sensors; ++i) {
    const double ntx = std::min(per_slot, static_cast<double>(p.nfrs[i]));
    out.ntxfrs.push_back(ntx);
    double pr = beacon.fixed_point * ntx * std::pow(out.pr_wbansucc, beacon.w_succ) / p.p_frames[i];
    if (pr > 1) {
      warn("delivered frames exceed generated frames; success probability clamped to 1");
      pr = 1;
      out.flags |= kFrameSuccessClamped;
    }
    out.pr_frsucc.push_back(std::max(pr, 0.0));
  }
  return out;
}

double frame_success_from_dcoll(double bi, double d_coll, std::size_t n) {
  if (n < 1) throw ArgumentError("frame success requires N >= 1");
  const double single = std::clamp((bi - d_coll) / bi, 0.0, 1.0);
  return std::pow(single, static_cast<double>(n - 1));
}

std::vector<FrameCurvePoint> frame_success_vs_n(const AnalyticParams& params,
                                                std::span<const std::size_t> n_values) {
  const auto p = params.normalized();
  double d_coll = 0;
  for (double frames : p.p_frames) d_coll += frames * p.t_fr + (frames - 1) * p.sifs + p.t_fr;
  std::vector<FrameCurvePoint> out;
  for (std::size_t n : n_values) {
    FrameCurvePoint pt;
    pt.n_wbans = n;
    pt.d_coll = d_coll;
    pt.pr_single = (p.bi - d_coll) / p.bi;
    if (pt.pr_single < 0) {
      pt.pr_single = 0;
      pt.flags |= kCollisionWindowSaturated;
    }
    pt.pr_frsucc = frame_success_from_dcoll(p.bi, d_coll, n);
    out.push_back(pt);
  }
  return out;
}

std::vector<AnalyticRow> analytic_curve(const AnalyticParams& params,
                                        std::span<const std::size_t> n_values) {
  const auto frames = frame_success_vs_n(params, n_values);
  std::vector<AnalyticRow> rows;
  for (std::size_t idx = 0; idx < n_values.size(); ++idx) {
    AnalyticParams p = params;
    p.n_wbans = n_values[idx];
    const auto coll = beacon_collision_probability(p);
    AnalyticRow row;
    row.n_wbans = p.n_wbans;
    row.pr_bcoll = coll.pr_bcoll;
    row.flags = coll.flags | frames[idx].flags;
    row.pr_frsucc = frames[idx].pr_frsucc;
    if (coll.pr_bcoll < 1) {
      const auto b = beacon_success_fixed_point(coll.pr_bcoll, p.n_wbans);
      row.pr_bsucc_openloop = b.open_loop;
      row.pr_bsucc_fixedpoint = b.fixed_point;
      const auto data = data_success(p, coll.pr_bcoll, b);
      row.pr_frsucc_beacon_aware = data.mean_pr_frsucc();
      row.flags |= data.flags;
    } else {
      const bool alone = p.n_wbans == 1;
      row.pr_bsucc_openloop = alone ? 1 : 0;
      row.pr_bsucc_fixedpoint = alone ? 1 : 0;
      row.pr_frsucc_beacon_aware = alone ? 1 : 0;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wban
