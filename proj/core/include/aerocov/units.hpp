#pragma once

#include <cmath>

namespace aerocov::units {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 3.0e8; // m/s

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// Wrap an angle into (-180, 180].
inline double wrap_deg_180(double deg) {
  double x = std::fmod(deg + 180.0, 360.0);
  if (x <= 0.0) {
    x += 360.0;
  }
  return x - 180.0;
}

} // namespace aerocov::units
