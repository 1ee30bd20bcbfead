#pragma once

#include "aerocov/config.hpp"

namespace aerocov {

// 3GPP TR 36.873 element pattern and steered-ULA array factor, all in dB.
// Angles are degrees: phi in (-180, 180], theta in [0, 180] with 90 =
// perpendicular to the array aperture. A positive tilt steers the array
// factor peak to theta = 90 + tilt (below the horizon).

// Horizontal element cut: -min[12 (phi / phi_3dB)^2, A_m].
double element_gain_h_db(double phi_deg, const AntennaConfig& antenna);

// Vertical element cut: -min[12 ((theta - 90) / theta_3dB)^2, SLA_v].
double element_gain_v_db(double theta_deg, const AntennaConfig& antenna);

// Element pattern G_E,max - min{-[A_H + A_V], clamp} in dBi.
double element_pattern_dbi(double phi_deg, double theta_deg,
                           const AntennaConfig& antenna);

// Squared steered-array response |v . w^T|^2 in [0, N] (linear scale).
double array_response_sq(double theta_deg, double tilt_deg,
                         const AntennaConfig& antenna);

// Array factor 10 log10[1 + rho (|v . w^T|^2 - 1)]; phi is accepted for
// interface symmetry but has no effect for a vertical ULA.
double array_factor_db(double phi_deg, double theta_deg, double tilt_deg,
                       const AntennaConfig& antenna);

// Composite directional gain: element pattern + array factor (dBi).
double composite_gain_dbi(double phi_deg, double theta_deg, double tilt_deg,
                          const AntennaConfig& antenna);

} // namespace aerocov
