#pragma once

#include <string>

#include "aerocov/units.hpp"

namespace aerocov {

// BS boresight azimuth assignment for a deployment realization.
//  aligned:        every boresight points at the typical user (phi_i = 0),
//  uniform_random: i.i.d. uniform on (-180, 180],
//  global_fixed:   all boresights at 0 deg in the global frame.
enum class AzimuthMode { aligned, uniform_random, global_fixed };

// Scale on which LOS/NLOS path losses are mixed into the expected total
// loss: linear mixes received powers (default), db mixes the dB values.
enum class MixScale { linear, db };

// Equivalent ways of writing the ULA steering phase; kept separate so the
// equivalence is testable.
enum class SteeringMode { tr36873, sin_tilt };

// Which constant clamps the combined element attenuation (TR 36.873 uses
// the front-to-back ratio A_m; both default to 30 dB here).
enum class CombinedClamp { front_to_back, side_lobe_limit };

// 3GPP TR 36.873 element pattern constants plus the ULA layout. The array
// is vertical-only (N_H = 1); phi_s has no effect in that case.
struct AntennaConfig {
  int num_elements_v = 16;                   // N
  int num_elements_h = 1;                    // fixed 1 (ULA)
  double element_spacing_wavelengths = 0.5;  // d_V / lambda
  double phi_3db_deg = 65.0;
  double theta_3db_deg = 65.0;
  double front_to_back_db = 30.0;            // A_m
  double sla_v_db = 30.0;
  double max_element_gain_dbi = 8.0;         // G_E,max
  double correlation = 1.0;                  // rho, element correlation level
  double steering_azimuth_deg = 0.0;         // phi_s, inert for N_H = 1
  SteeringMode steering = SteeringMode::tr36873;
  CombinedClamp combined_clamp = CombinedClamp::front_to_back;

  double combined_clamp_db() const {
    return combined_clamp == CombinedClamp::front_to_back ? front_to_back_db
                                                          : sla_v_db;
  }
};

// Full scenario description. Defaults follow the urban-macro evaluation
// set: 5 BS/km^2, 25 m BS towers, 25 dBm transmit power, -95 dBm noise,
// 28 GHz carrier, 16-element ULA at 5 deg electrical down-tilt.
struct SystemConfig {
  double bs_density_per_km2 = 5.0;   // lambda_B
  double bs_height_m = 25.0;         // h_BS
  double user_height_m = 1.5;        // h, 1.5 m ground user by default
  double tx_power_dbm = 25.0;        // P_t
  double noise_dbm = -95.0;          // sigma_n^2
  double carrier_ghz = 28.0;         // f_c
  double region_radius_m = 5000.0;   // simulation disc radius
  double tilt_deg = 5.0;             // theta_t, electrical down-tilt
  int nakagami_m = 1;                // positive integer fading shape
  AzimuthMode azimuth_mode = AzimuthMode::aligned;
  MixScale mix_scale = MixScale::linear;
  AntennaConfig antenna;

  int num_elements() const { return antenna.num_elements_v; }
  double tx_power_mw() const { return units::dbm_to_mw(tx_power_dbm); }
  double noise_mw() const { return units::dbm_to_mw(noise_dbm); }
  double bs_density_per_m2() const { return bs_density_per_km2 * 1e-6; }
  double expected_bs_count() const {
    return bs_density_per_m2() * units::kPi * region_radius_m * region_radius_m;
  }

  // Throws ConfigError on any violated invariant (user height outside
  // [1.5, 300] m, non-integer-positive m, tilt outside [0, 90), ...).
  void validate() const;
};

std::string to_string(AzimuthMode mode);
std::string to_string(MixScale scale);
std::string to_string(SteeringMode mode);
AzimuthMode azimuth_mode_from_string(const std::string& s);
MixScale mix_scale_from_string(const std::string& s);
SteeringMode steering_mode_from_string(const std::string& s);

} // namespace aerocov
