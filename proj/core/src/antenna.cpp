#include "aerocov/antenna.hpp"

#include <algorithm>
#include <cmath>

#include "aerocov/units.hpp"

namespace aerocov {

namespace {

// Floor on the linear array-factor argument; a true null would otherwise
// map to -inf dB.
constexpr double kLinearFloor = 1e-30;

// |sum_{n=0}^{N-1} exp(i n x)|^2 / N via the Dirichlet kernel, with the
// x -> 2 pi k limit handled explicitly. Range [0, N].
double dirichlet_power(int n, double x) {
  const double half = 0.5 * x;
  const double s = std::sin(half);
  if (std::abs(s) < 1e-9) {
    return static_cast<double>(n);
  }
  const double ratio = std::sin(n * half) / s;
  return ratio * ratio / static_cast<double>(n);
}

} // namespace

double element_gain_h_db(double phi_deg, const AntennaConfig& antenna) {
  const double ratio = phi_deg / antenna.phi_3db_deg;
  return -std::min(12.0 * ratio * ratio, antenna.front_to_back_db);
}

double element_gain_v_db(double theta_deg, const AntennaConfig& antenna) {
  const double ratio = (theta_deg - 90.0) / antenna.theta_3db_deg;
  return -std::min(12.0 * ratio * ratio, antenna.sla_v_db);
}

double element_pattern_dbi(double phi_deg, double theta_deg,
                           const AntennaConfig& antenna) {
  const double combined =
      -(element_gain_h_db(phi_deg, antenna) + element_gain_v_db(theta_deg, antenna));
  return antenna.max_element_gain_dbi -
         std::min(combined, antenna.combined_clamp_db());
}

double array_response_sq(double theta_deg, double tilt_deg,
                         const AntennaConfig& antenna) {
  const int n = antenna.num_elements_v;
  if (n <= 1) {
    return 1.0;
  }
  // Per-element phase v_n w_n = exp(i 2 pi (n-1) d (cos theta + steer)).
  double steer;
  if (antenna.steering == SteeringMode::tr36873) {
    // conjugate steering toward theta_etilt = 90 + tilt
    steer = -std::cos(units::deg_to_rad(90.0 + tilt_deg));
  } else {
    // direct sin(tilt) weighting phase; identical for a ULA
    steer = std::sin(units::deg_to_rad(tilt_deg));
  }
  const double x = 2.0 * units::kPi * antenna.element_spacing_wavelengths *
                   (std::cos(units::deg_to_rad(theta_deg)) + steer);
  return dirichlet_power(n, x);
}

double array_factor_db(double /*phi_deg*/, double theta_deg, double tilt_deg,
                       const AntennaConfig& antenna) {
  const double response = array_response_sq(theta_deg, tilt_deg, antenna);
  const double linear = 1.0 + antenna.correlation * (response - 1.0);
  return 10.0 * std::log10(std::max(linear, kLinearFloor));
}

double composite_gain_dbi(double phi_deg, double theta_deg, double tilt_deg,
                          const AntennaConfig& antenna) {
  return element_pattern_dbi(phi_deg, theta_deg, antenna) +
         array_factor_db(phi_deg, theta_deg, tilt_deg, antenna);
}

} // namespace aerocov
