// Distributed time reference correlation: peer superframe offsets recovered
// from beacon timestamps, and the slot pairs those offsets make collide.
#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <utility>

namespace wban {

/// Timing facts attached to (or measured for) one received beacon. All values
/// in seconds. ptp/mtp are sender-clock readings; frt is the receiver's clock.
struct FrameTimestamps {
  double ptp = 0;     // last bit left the sender PHY
  double mtp = 0;     // last bit left the sender MAC
  double prt = 0;     // receiver PHY: first to last bit
  double mrt = 0;     // receiver MAC: first to last bit
  double ppt = 0;     // receiver PHY processing
  double l_prop = 0;  // propagation delay
  double frt = 0;     // last bit received at receiver MAC

  void validate() const;
};

/// (own slot z, peer slot t), zero-based.
using SlotPair = std::pair<std::size_t, std::size_t>;
using SlotPairs = std::set<SlotPair>;

struct SuperframeGeometry {
  double slot_length = 0.005;      // TS
  double beacon_interval = 0.1;    // BI
  std::size_t slots = 10;          // K, filling the active period from t = 0

  void validate() const;
};

struct PeerOverlap {
  double timeshift = 0;  // s, peer superframe start minus own start
  SlotPairs colliding_pairs;
};

struct TimeshiftPattern {
  std::size_t owner = 0;
  std::map<std::size_t, PeerOverlap> entries;  // keyed by peer WBAN id
};

/// timeshift = FRT - (MRT + PPT + PRT + L + (PTP - MTP)).
/// Positive means the peer's superframe starts later than the receiver's.
/// Throws MalformedTimestampError on negative durations or PTP < MTP.
double compute_timeshift(const FrameTimestamps& stamps);

/// Maps any offset into (-BI/2, BI/2].
double wrap_timeshift(double timeshift, double beacon_interval);

/// Slot pairs with positive-measure temporal intersection between the own
/// superframe and the peer superframe shifted by `timeshift` (peer
/// superframes repeat every BI). This is the production classifier.
SlotPairs classify_overlap(double timeshift, const SuperframeGeometry& geometry);

/// The case analysis of the DTRC pseudocode (ID = ceil(|timeshift| / TS)).
/// Covers timeshift == 0 and negative timeshifts with |timeshift| < BI/2;
/// returns std::nullopt-like `covered = false` elsewhere.
struct CaseAnalysis {
  bool covered = false;
  std::size_t id = 0;
  SlotPairs pairs;
};
CaseAnalysis classify_overlap_cases(double timeshift, const SuperframeGeometry& geometry);

/// Transposes (z, t) -> (t, z); the view of the same overlap from the peer.
SlotPairs transpose(const SlotPairs& pairs);

}  // namespace wban
