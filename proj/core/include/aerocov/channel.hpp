#pragma once

#include <atomic>
#include <cstdint>
#include <random>

#include "aerocov/config.hpp"

namespace aerocov {

// Validity-violation counters for the UMa formulas. Extrapolating outside
// the stated ranges keeps rare near/far links in the interference budget
// instead of silently dropping them; the counters make that auditable.
struct ChannelDiags {
  std::atomic<std::uint64_t> below_min_2d{0};     // r < 10 m in the low regime
  std::atomic<std::uint64_t> beyond_range_2d{0};  // r > 4 km (high) / 5 km (low)
  std::atomic<std::uint64_t> plos_clamped{0};     // LOS enhancement pushed past 1
  std::atomic<std::uint64_t> nlos_below_los{0};   // Eq-form NLOS < LOS, high regime

  void reset();
};

struct ChannelDiagsSnapshot {
  std::uint64_t below_min_2d = 0;
  std::uint64_t beyond_range_2d = 0;
  std::uint64_t plos_clamped = 0;
  std::uint64_t nlos_below_los = 0;
};

ChannelDiagsSnapshot snapshot(const ChannelDiags& diags);

// Per-link propagation summary; expected_loss_linear is the LOS/NLOS
// mixture converted to a linear power gain in (0, 1].
struct PathLossResult {
  double pl_los_db = 0.0;
  double pl_nlos_db = 0.0;
  double p_los = 0.0;
  double expected_loss_linear = 0.0;
};

// Slope-break distance d_B = 4 h_BS h f_c / c (meters; f_c in GHz).
double breakpoint_distance_m(double bs_height_m, double user_height_m,
                             double carrier_ghz);

// UMa LOS path loss in dB. Two-branch form with breakpoint for user
// heights up to 22.5 m, single 22 dB/decade slope above. Bracket
// conditions use the 2D distance, log arguments the 3D distance.
double pathloss_los_db(double r_2d_m, double user_height_m,
                       const SystemConfig& config,
                       ChannelDiags* diags = nullptr);

// UMa NLOS path loss in dB: max of LOS and the NLOS form below 22.5 m,
// the height-dependent single-slope form above.
double pathloss_nlos_db(double r_2d_m, double user_height_m,
                        const SystemConfig& config,
                        ChannelDiags* diags = nullptr);

// Height/distance-dependent LOS probability; identically 1 above 100 m.
double los_probability(double r_2d_m, double user_height_m,
                       const SystemConfig& config,
                       ChannelDiags* diags = nullptr);

// LOS/NLOS mixture weighted by the LOS probability, mixed on the scale
// selected by config.mix_scale.
PathLossResult expected_total_loss(double r_2d_m, double user_height_m,
                                   const SystemConfig& config,
                                   ChannelDiags* diags = nullptr);

// Unit-mean Nakagami-m power gain |g|^2 ~ Gamma(shape m, rate m).
double sample_nakagami_power(int m, std::mt19937_64& rng);

} // namespace aerocov
