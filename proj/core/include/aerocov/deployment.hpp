#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "aerocov/config.hpp"

namespace aerocov {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// One realization of BS positions inside the simulation disc. The typical
// user sits at the origin; boresights are azimuths in the global frame
// (degrees, bearing measured from +y).
struct Deployment {
  std::vector<Point2> bs_positions;
  std::vector<double> bs_boresights_deg;
  Point2 user_position{0.0, 0.0};
  int redraws = 0; // zero-BS realizations discarded before this one

  std::size_t size() const { return bs_positions.size(); }
};

// Per-link geometry in the antenna's coordinate convention:
// theta in [0, 180] with 90 = horizontal and theta > 90 for a user below
// the BS; phi is the azimuth offset from the BS boresight in (-180, 180].
struct LinkGeometry {
  double r_2d_m = 0.0;    // clamped to >= 1 m
  double d_3d_m = 0.0;
  double theta_deg = 0.0;
  double phi_deg = 0.0;
};

// Bearing of `to` as seen from `from`, degrees from the +y axis, (-180, 180].
double bearing_deg(Point2 from, Point2 to);

// Homogeneous PPP on the disc of radius region_radius_m: the BS count is
// Poisson(lambda_B * pi * R^2), positions i.i.d. uniform, boresights per
// azimuth_mode. Zero-BS realizations are re-drawn and counted in
// Deployment::redraws.
Deployment sample_ppp(const SystemConfig& config, std::mt19937_64& rng);

LinkGeometry link_geometry(Point2 bs, double boresight_deg,
                           const SystemConfig& config);

// Same contract given the link's polar form (2D distance, boresight
// offset); r is clamped to >= 1 m here as well.
LinkGeometry link_from_r_phi(double r_2d_m, double phi_deg,
                             const SystemConfig& config);

// Index of the 2D-nearest BS (lowest index wins ties). The serving
// distance r_0 is the corresponding LinkGeometry::r_2d_m.
std::size_t associate_nearest(const Deployment& deployment);

} // namespace aerocov
