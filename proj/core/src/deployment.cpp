#include "aerocov/deployment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aerocov/errors.hpp"
#include "aerocov/units.hpp"

namespace aerocov {

double bearing_deg(Point2 from, Point2 to) {
  return units::rad_to_deg(std::atan2(to.x - from.x, to.y - from.y));
}

Deployment sample_ppp(const SystemConfig& config, std::mt19937_64& rng) {
  if (!(config.region_radius_m > 0.0)) {
    throw ConfigError("region_radius_m must be > 0");
  }
  const double mean_count = config.expected_bs_count();
  std::poisson_distribution<int> count_dist(mean_count);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Deployment dep;
  // The typical user needs a serving BS; empty realizations are re-drawn.
  constexpr int kMaxRedraws = 10'000'000;
  int count = 0;
  while ((count = count_dist(rng)) == 0) {
    if (++dep.redraws >= kMaxRedraws) {
      throw NumericalError("sample_ppp: re-draw limit hit (expected count " +
                           std::to_string(mean_count) + ")");
    }
  }

  dep.bs_positions.reserve(count);
  dep.bs_boresights_deg.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double radius = config.region_radius_m * std::sqrt(unit(rng));
    const double angle = 2.0 * units::kPi * unit(rng);
    dep.bs_positions.push_back(
        {radius * std::sin(angle), radius * std::cos(angle)});
  }
  for (int i = 0; i < count; ++i) {
    switch (config.azimuth_mode) {
      case AzimuthMode::aligned:
        dep.bs_boresights_deg.push_back(
            bearing_deg(dep.bs_positions[i], dep.user_position));
        break;
      case AzimuthMode::uniform_random: {
        // uniform on (-180, 180]
        dep.bs_boresights_deg.push_back(180.0 - 360.0 * unit(rng));
        break;
      }
      case AzimuthMode::global_fixed:
        dep.bs_boresights_deg.push_back(0.0);
        break;
    }
  }
  return dep;
}

LinkGeometry link_from_r_phi(double r_2d_m, double phi_deg,
                             const SystemConfig& config) {
  LinkGeometry link;
  const double dh = config.bs_height_m - config.user_height_m;
  // Sub-meter collisions are clamped to 1 m before channel evaluation.
  link.r_2d_m = std::max(r_2d_m, 1.0);
  link.d_3d_m = std::sqrt(link.r_2d_m * link.r_2d_m + dh * dh);
  link.theta_deg = 90.0 + units::rad_to_deg(std::atan(dh / link.r_2d_m));
  link.phi_deg = units::wrap_deg_180(phi_deg);
  return link;
}

LinkGeometry link_geometry(Point2 bs, double boresight_deg,
                           const SystemConfig& config) {
  const double r = std::hypot(bs.x, bs.y);
  const double phi = bearing_deg(bs, Point2{0.0, 0.0}) - boresight_deg;
  return link_from_r_phi(r, phi, config);
}

std::size_t associate_nearest(const Deployment& deployment) {
  if (deployment.bs_positions.empty()) {
    throw std::logic_error("associate_nearest: empty deployment");
  }
  std::size_t best = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < deployment.bs_positions.size(); ++i) {
    const Point2 p = deployment.bs_positions[i];
    const double d_sq = p.x * p.x + p.y * p.y;
    if (d_sq < best_sq) {
      best_sq = d_sq;
      best = i;
    }
  }
  return best;
}

} // namespace aerocov
