#include "aerocov/channel.hpp"

#include <algorithm>
#include <cmath>

#include "aerocov/units.hpp"

namespace aerocov {

namespace {

constexpr double kLowRegimeMaxHeight = 22.5; // m, two-branch UMa regime
constexpr double kMidRegimeMaxHeight = 100.0;
constexpr double kLowRegimeMin2d = 10.0;     // m
constexpr double kLowRegimeMax2d = 5000.0;   // m
constexpr double kHighRegimeMax2d = 4000.0;  // m

struct LinkDistances {
  double r;
  double d3d;
  double dh; // h_BS - h
};

LinkDistances distances(double r_2d_m, double user_height_m,
                        const SystemConfig& config) {
  const double dh = config.bs_height_m - user_height_m;
  return {r_2d_m, std::sqrt(r_2d_m * r_2d_m + dh * dh), dh};
}

void count_validity(const LinkDistances& d, double user_height_m,
                    ChannelDiags* diags) {
  if (diags == nullptr) {
    return;
  }
  if (user_height_m <= kLowRegimeMaxHeight) {
    if (d.r < kLowRegimeMin2d) {
      diags->below_min_2d.fetch_add(1, std::memory_order_relaxed);
    }
    if (d.r > kLowRegimeMax2d) {
      diags->beyond_range_2d.fetch_add(1, std::memory_order_relaxed);
    }
  } else if (d.r > kHighRegimeMax2d) {
    diags->beyond_range_2d.fetch_add(1, std::memory_order_relaxed);
  }
}

double raw_pathloss_los(const LinkDistances& d, double user_height_m,
                        const SystemConfig& config) {
  const double f = config.carrier_ghz;
  const double freq_term = 20.0 * std::log10(f);
  if (user_height_m <= kLowRegimeMaxHeight) {
    const double d_b =
        breakpoint_distance_m(config.bs_height_m, user_height_m, f);
    if (d.r < d_b) {
      return 28.0 + 22.0 * std::log10(d.d3d) + freq_term;
    }
    return 28.0 + 40.0 * std::log10(d.d3d) + freq_term -
           9.0 * std::log10(d_b * d_b + d.dh * d.dh);
  }
  return 28.0 + 22.0 * std::log10(d.d3d) + freq_term;
}

double raw_pathloss_nlos(const LinkDistances& d, double user_height_m,
                         const SystemConfig& config, ChannelDiags* diags) {
  const double f = config.carrier_ghz;
  if (user_height_m <= kLowRegimeMaxHeight) {
    const double nlos_prime = 13.54 + 39.08 * std::log10(d.d3d) +
                              20.0 * std::log10(f) -
                              0.6 * (user_height_m - 1.5);
    return std::max(raw_pathloss_los(d, user_height_m, config), nlos_prime);
  }
  // Height-dependent single slope; no max against the LOS value here,
  // so a very short 3D link can dip below the LOS value. Count it: in the
  // weighted mixture that region has P_LOS = 1 anyway.
  const double nlos = -17.5 +
                      (46.0 - 7.0 * std::log10(user_height_m)) *
                          std::log10(d.d3d) +
                      20.0 * std::log10(40.0 * units::kPi * f / 3.0);
  if (diags != nullptr && nlos < raw_pathloss_los(d, user_height_m, config)) {
    diags->nlos_below_los.fetch_add(1, std::memory_order_relaxed);
  }
  return nlos;
}

double raw_los_probability(double r, double user_height_m,
                           ChannelDiags* diags) {
  if (user_height_m > kMidRegimeMaxHeight) {
    return 1.0;
  }
  if (user_height_m <= kLowRegimeMaxHeight) {
    if (r <= 18.0) {
      return 1.0;
    }
    const double base =
        18.0 / r + std::exp(-r / 36.0) * (1.0 - 18.0 / r);
    double enhancement = 1.0;
    if (user_height_m > 13.0) {
      const double c = std::pow((user_height_m - 13.0) / 10.0, 1.5);
      const double ratio = r / 100.0;
      enhancement += c * 1.25 * ratio * ratio * ratio * std::exp(-r / 150.0);
    }
    double p = base * enhancement;
    if (p > 1.0) {
      if (diags != nullptr) {
        diags->plos_clamped.fetch_add(1, std::memory_order_relaxed);
      }
      p = 1.0;
    }
    return p;
  }
  const double log_h = std::log10(user_height_m);
  const double d1 = std::max(460.0 * log_h - 700.0, 18.0);
  if (r <= d1) {
    return 1.0;
  }
  const double p1 = 4300.0 * log_h - 3800.0;
  return d1 / r + std::exp(-r / p1) * (1.0 - d1 / r);
}

} // namespace

void ChannelDiags::reset() {
  below_min_2d.store(0);
  beyond_range_2d.store(0);
  plos_clamped.store(0);
  nlos_below_los.store(0);
}

ChannelDiagsSnapshot snapshot(const ChannelDiags& diags) {
  return {diags.below_min_2d.load(), diags.beyond_range_2d.load(),
          diags.plos_clamped.load(), diags.nlos_below_los.load()};
}

double breakpoint_distance_m(double bs_height_m, double user_height_m,
                             double carrier_ghz) {
  return 4.0 * bs_height_m * user_height_m * (carrier_ghz * 1e9) /
         units::kSpeedOfLight;
}

double pathloss_los_db(double r_2d_m, double user_height_m,
                       const SystemConfig& config, ChannelDiags* diags) {
  const LinkDistances d = distances(r_2d_m, user_height_m, config);
  count_validity(d, user_height_m, diags);
  return raw_pathloss_los(d, user_height_m, config);
}

double pathloss_nlos_db(double r_2d_m, double user_height_m,
                        const SystemConfig& config, ChannelDiags* diags) {
  const LinkDistances d = distances(r_2d_m, user_height_m, config);
  count_validity(d, user_height_m, diags);
  return raw_pathloss_nlos(d, user_height_m, config, diags);
}

double los_probability(double r_2d_m, double user_height_m,
                       const SystemConfig& config, ChannelDiags* diags) {
  (void)config;
  return raw_los_probability(r_2d_m, user_height_m, diags);
}

PathLossResult expected_total_loss(double r_2d_m, double user_height_m,
                                   const SystemConfig& config,
                                   ChannelDiags* diags) {
  const LinkDistances d = distances(r_2d_m, user_height_m, config);
  count_validity(d, user_height_m, diags);

  PathLossResult res;
  res.pl_los_db = raw_pathloss_los(d, user_height_m, config);
  res.pl_nlos_db = raw_pathloss_nlos(d, user_height_m, config, diags);
  res.p_los = raw_los_probability(d.r, user_height_m, diags);
  if (config.mix_scale == MixScale::linear) {
    res.expected_loss_linear =
        res.p_los * units::db_to_linear(-res.pl_los_db) +
        (1.0 - res.p_los) * units::db_to_linear(-res.pl_nlos_db);
  } else {
    const double mixed_db =
        res.p_los * res.pl_los_db + (1.0 - res.p_los) * res.pl_nlos_db;
    res.expected_loss_linear = units::db_to_linear(-mixed_db);
  }
  return res;
}

double sample_nakagami_power(int m, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(static_cast<double>(m),
                                        1.0 / static_cast<double>(m));
  return gamma(rng);
}

} // namespace aerocov
