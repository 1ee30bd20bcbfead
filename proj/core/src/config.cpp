#include "aerocov/config.hpp"

#include <cmath>
#include <sstream>

#include "aerocov/errors.hpp"

namespace aerocov {

namespace {

void check(bool ok, const std::string& message) {
  if (!ok) {
    throw ConfigError(message);
  }
}

std::string num(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

} // namespace

void SystemConfig::validate() const {
  check(bs_density_per_km2 > 0.0,
        "lambda_b_per_km2 must be > 0, got " + num(bs_density_per_km2));
  check(user_height_m >= 1.5 && user_height_m <= 300.0,
        "user_height_m must lie in [1.5, 300], got " + num(user_height_m));
  check(bs_height_m > 0.0, "bs_height_m must be > 0, got " + num(bs_height_m));
  check(region_radius_m > 0.0,
        "region_radius_m must be > 0, got " + num(region_radius_m));
  check(carrier_ghz > 0.0, "carrier_ghz must be > 0, got " + num(carrier_ghz));
  check(tilt_deg >= 0.0 && tilt_deg < 90.0,
        "tilt_deg must lie in [0, 90), got " + num(tilt_deg));
  check(nakagami_m >= 1, "nakagami_m must be a positive integer, got " +
                             std::to_string(nakagami_m));
  check(std::isfinite(tx_power_dbm), "tx_power_dbm must be finite");
  check(std::isfinite(noise_dbm), "noise_dbm must be finite");
  check(antenna.num_elements_v >= 1, "num_elements must be >= 1, got " +
                                         std::to_string(antenna.num_elements_v));
  check(antenna.num_elements_h == 1,
        "num_elements_h must be 1 (vertical ULA), got " +
            std::to_string(antenna.num_elements_h));
  check(antenna.element_spacing_wavelengths > 0.0,
        "element_spacing_wavelengths must be > 0");
  check(antenna.correlation >= 0.0 && antenna.correlation <= 1.0,
        "correlation must lie in [0, 1], got " + num(antenna.correlation));
  check(antenna.phi_3db_deg > 0.0 && antenna.theta_3db_deg > 0.0,
        "3 dB beamwidths must be > 0");
  check(antenna.front_to_back_db > 0.0 && antenna.sla_v_db > 0.0,
        "front_to_back_db and sla_v_db must be > 0");
}

std::string to_string(AzimuthMode mode) {
  switch (mode) {
    case AzimuthMode::aligned: return "aligned";
    case AzimuthMode::uniform_random: return "uniform_random";
    case AzimuthMode::global_fixed: return "global_fixed";
  }
  return "aligned";
}

std::string to_string(MixScale scale) {
  return scale == MixScale::linear ? "linear" : "db";
}

std::string to_string(SteeringMode mode) {
  return mode == SteeringMode::tr36873 ? "tr36873" : "sin_tilt";
}

AzimuthMode azimuth_mode_from_string(const std::string& s) {
  if (s == "aligned") return AzimuthMode::aligned;
  if (s == "uniform_random") return AzimuthMode::uniform_random;
  if (s == "global_fixed") return AzimuthMode::global_fixed;
  throw ConfigError("unknown azimuth_mode \"" + s +
                    "\" (expected aligned|uniform_random|global_fixed)");
}

MixScale mix_scale_from_string(const std::string& s) {
  if (s == "linear") return MixScale::linear;
  if (s == "db") return MixScale::db;
  throw ConfigError("unknown mix_scale \"" + s + "\" (expected linear|db)");
}

SteeringMode steering_mode_from_string(const std::string& s) {
  if (s == "tr36873") return SteeringMode::tr36873;
  if (s == "sin_tilt") return SteeringMode::sin_tilt;
  throw ConfigError("unknown steering mode \"" + s +
                    "\" (expected tr36873|sin_tilt)");
}

} // namespace aerocov
