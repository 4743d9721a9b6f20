// Closed-form beacon and data-frame success model for N coexisting WBANs.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wban {

/// Timing constants in seconds. nfrs and p_frames are per sensor (size K);
/// an empty p_frames defaults to nfrs.
struct AnalyticParams {
  std::size_t n_wbans = 2;
  std::size_t k_sensors = 10;
  double bi = 0.100;
  double ts = 0.005;
  double t_fr = 1.152e-3;
  double t_b = 0.6e-3;
  double sifs = 0.192e-3;
  std::vector<unsigned> nfrs;
  std::vector<double> p_frames;

  /// Fills nfrs / p_frames to size K when empty (nfrs = 1, P_i = Nfrs_i)
  /// and checks every invariant; throws ArgumentError.
  AnalyticParams normalized() const;
};

/// Bit flags raised whenever a closed form had to be clamped.
enum ValidityFlag : std::uint32_t {
  kValid = 0,
  kBeaconWindowSaturated = 1u << 0,  // T_Bcoll > BI
  kWbanSuccessFloored = 1u << 1,     // D_coll > D_succ
  kFrameSuccessClamped = 1u << 2,    // H/G > 1
  kCollisionWindowSaturated = 1u << 3,  // D_coll > BI in the upper-bound curve
};

std::string describe_flags(std::uint32_t flags);

/// TD_i = min(TS, Nfrs_i*T_fr + (Nfrs_i - 1)*SIFS).
std::vector<double> occupancy(const AnalyticParams& params);

struct BeaconCollision {
  double t_bcoll = 0;
  double pr_bcoll = 0;
  std::uint32_t flags = kValid;
};

/// T_Bcoll = 2*T_B + sum_i(TD_i + T_B); Pr_Bcoll = T_Bcoll / BI clamped to [0, 1].
BeaconCollision beacon_collision_probability(const AnalyticParams& params);

struct BeaconSuccess {
  double fixed_point = 1;  // p* = (1-c)^((N-1) p*)
  double open_loop = 1;    // (1-c)^(N-1)
  double w_succ = 0;       // (N-1) p*
  std::size_t iterations = 0;
};

inline constexpr double kFixedPointTolerance = 1e-12;
inline constexpr std::size_t kFixedPointMaxIterations = 100'000;

/// Damped iteration p <- (p + (1-c)^((N-1)p)) / 2 from p = 1.
/// Requires c in [0, 1) and n >= 1; NumericError on non-convergence.
BeaconSuccess beacon_success_fixed_point(double pr_bcoll, std::size_t n);

struct DataSuccess {
  double d_succ = 0;
  double d_coll = 0;
  double pr_wbansucc = 0;
  std::vector<double> ntxfrs;
  std::vector<double> pr_frsucc;  // per sensor
  std::uint32_t flags = kValid;

  double mean_pr_frsucc() const;
};

DataSuccess data_success(const AnalyticParams& params, double pr_bcoll,
                         const BeaconSuccess& beacon);

struct FrameCurvePoint {
  std::size_t n_wbans = 1;
  double d_coll = 0;
  double pr_single = 1;  // (BI - D_coll) / BI
  double pr_frsucc = 1;  // pr_single^(N-1)
  std::uint32_t flags = kValid;
};

/// Upper-bound curve assuming every beacon is received: TD_i = P_i*T_fr +
/// (P_i - 1)*SIFS, D_coll = sum_i(TD_i + T_fr).
std::vector<FrameCurvePoint> frame_success_vs_n(const AnalyticParams& params,
                                                std::span<const std::size_t> n_values);

double frame_success_from_dcoll(double bi, double d_coll, std::size_t n);

/// One row of the analytics CSV.
struct AnalyticRow {
  std::size_t n_wbans = 1;
  double pr_bcoll = 0;
  double pr_bsucc_openloop = 1;
  double pr_bsucc_fixedpoint = 1;
  double pr_frsucc = 1;               // upper-bound curve
  double pr_frsucc_beacon_aware = 1;  // mean over sensors of H/G
  std::uint32_t flags = kValid;
};

std::vector<AnalyticRow> analytic_curve(const AnalyticParams& params,
                                        std::span<const std::size_t> n_values);

}  // namespace wban
