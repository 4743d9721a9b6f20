#include "wban/dtrc.hpp"

#include <cmath>
#include <string>

#include "wban/error.hpp"

namespace wban {

namespace {

// Boundary tolerance relative to the slot length; keeps exact multiples of
// TS from registering a zero-length overlap.
constexpr double kEdgeEps = 1e-9;

}  // namespace

void FrameTimestamps::validate() const {
  const std::pair<const char*, double> durations[] = {
      {"prt", prt}, {"mrt", mrt}, {"ppt", ppt}, {"l_prop", l_prop}};
  for (const auto& [name, v] : durations)
    if (!(v >= 0)) throw MalformedTimestampError(std::string("negative duration ") + name);
  if (!(ptp >= mtp)) throw MalformedTimestampError("PHY timestamp precedes MAC timestamp");
}

void SuperframeGeometry::validate() const {
  if (!(slot_length > 0) || !(beacon_interval > 0) || slots == 0)
    throw ArgumentError("superframe geometry requires TS > 0, BI > 0, K >= 1");
  if (static_cast<double>(slots) * slot_length > beacon_interval * (1 + 1e-12))
    throw ArgumentError("K * TS exceeds the beacon interval");
}

double compute_timeshift(const FrameTimestamps& s) {
  s.validate();
  const double diff = s.ptp - s.mtp;
  return s.frt - (s.mrt + s.ppt + s.prt + s.l_prop + diff);
}

double wrap_timeshift(double timeshift, double bi) {
  double w = std::fmod(timeshift, bi);
  if (w > bi / 2) w -= bi;
  if (w <= -bi / 2) w += bi;
  return w;
}

SlotPairs classify_overlap(double timeshift, const SuperframeGeometry& g) {
  g.validate();
  const double ts = g.slot_length;
  const auto k = static_cast<long>(g.slots);
  const double eps = kEdgeEps * ts;
  SlotPairs pairs;
  // Peer superframes start at timeshift + j*BI; only the three copies around
  // the own superframe can reach its active period.
  const double base = wrap_timeshift(timeshift, g.beacon_interval);
  for (int copy = -1; copy <= 1; ++copy) {
    const double start = base + copy * g.beacon_interval;
    for (long z = 0; z < k; ++z) {
      // Peer slot t covers [start + t*TS, start + (t+1)*TS); it meets own
      // slot z iff start + t*TS < (z+1)*TS and start + (t+1)*TS > z*TS.
      const double u = (static_cast<double>(z) * ts - start) / ts;
      long t_lo = static_cast<long>(std::floor(u - 1 + kEdgeEps)) + 1;
      long t_hi = static_cast<long>(std::ceil(u + 1 - kEdgeEps)) - 1;
      t_lo = std::max(t_lo, 0L);
      t_hi = std::min(t_hi, k - 1);
      for (long t = t_lo; t <= t_hi; ++t) {
        const double a = std::max(static_cast<double>(z) * ts, start + t * ts);
        const double b = std::min(static_cast<double>(z + 1) * ts, start + (t + 1) * ts);
        if (b - a > eps) pairs.emplace(static_cast<std::size_t>(z), static_cast<std::size_t>(t));
      }
    }
  }
  return pairs;
}

CaseAnalysis classify_overlap_cases(double timeshift, const SuperframeGeometry& g) {
  g.validate();
  CaseAnalysis out;
  const double ts = g.slot_length;
  const std::size_t k = g.slots;
  const double mag = std::fabs(timeshift);
  const double slots_shift = mag / ts;
  const double nearest = std::round(slots_shift);
  const bool aligned = std::fabs(slots_shift - nearest) < kEdgeEps;
  out.id = aligned ? static_cast<std::size_t>(nearest)
                   : static_cast<std::size_t>(std::ceil(slots_shift));

  if (timeshift == 0.0) {
    // Complete interference of both active periods: slot z meets slot z.
    out.covered = true;
    for (std::size_t z = 0; z < k; ++z) out.pairs.emplace(z, z);
    return out;
  }
  if (timeshift > 0 || mag >= g.beacon_interval / 2) return out;
  // The cases assume equal active and inactive halves, so the next peer
  // superframe cannot reach the own active period.
  if (static_cast<double>(k) * ts > g.beacon_interval / 2 * (1 + 1e-12)) return out;

  // The peer started ID slots (or a fraction of ID slots) earlier, so own
  // slot z faces peer slots z + ID - 1 and z + ID, or exactly z + ID when the
  // shift is a whole number of slots. One-based in the pseudocode; zero-based here.
  out.covered = true;
  const std::size_t id = out.id;
  for (std::size_t z = 0; z < k; ++z) {
    if (!aligned && id >= 1 && z + id - 1 < k) out.pairs.emplace(z, z + id - 1);
    if (z + id < k) out.pairs.emplace(z, z + id);
  }
  return out;
}

SlotPairs transpose(const SlotPairs& pairs) {
  SlotPairs out;
  for (const auto& [z, t] : pairs) out.emplace(t, z);
  return out;
}

}  // namespace wban
