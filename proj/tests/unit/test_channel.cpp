#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "aerocov/channel.hpp"
#include "aerocov/rng.hpp"
#include "aerocov/units.hpp"

using namespace aerocov;

namespace {

SystemConfig config_for(double h, double f_ghz) {
  SystemConfig config;
  config.user_height_m = h;
  config.carrier_ghz = f_ghz;
  return config;
}

// 2D distance producing the requested 3D distance at the default 25 m BS
double r_for_d3d(double d3d, double h) {
  const double dh = 25.0 - h;
  return std::sqrt(d3d * d3d - dh * dh);
}

} // namespace

TEST_CASE("breakpoint distance") {
  CHECK(breakpoint_distance_m(25.0, 1.5, 5.0) == doctest::Approx(2500.0).epsilon(1e-12));
  CHECK(breakpoint_distance_m(25.0, 1.5, 28.0) == doctest::Approx(14000.0).epsilon(1e-12));
  // linear in f_c
  CHECK(breakpoint_distance_m(25.0, 1.5, 2.5) ==
        doctest::Approx(0.5 * breakpoint_distance_m(25.0, 1.5, 5.0)));
}

TEST_CASE("LOS path loss, low regime pre-breakpoint") {
  const SystemConfig config = config_for(1.5, 5.0);
  const double r = r_for_d3d(100.0, 1.5);
  CHECK(pathloss_los_db(r, 1.5, config) ==
        doctest::Approx(85.97940008672037).epsilon(1e-9));
}

TEST_CASE("LOS path loss, high regime single slope") {
  const SystemConfig config = config_for(100.0, 28.0);
  const double r = r_for_d3d(1000.0, 100.0);
  CHECK(pathloss_los_db(r, 100.0, config) ==
        doctest::Approx(122.94316062684439).epsilon(1e-9));
}

TEST_CASE("LOS path loss branch change at the breakpoint") {
  const SystemConfig config = config_for(1.5, 5.0);
  const double d_b = breakpoint_distance_m(25.0, 1.5, 5.0);
  const double eps = 1e-6;
  const double before = pathloss_los_db(d_b - eps, 1.5, config);
  const double after = pathloss_los_db(d_b + eps, 1.5, config);
  // evaluate both branch forms at the knot independently
  const double d3d = std::sqrt(d_b * d_b + 23.5 * 23.5);
  const double branch1 = 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(5.0);
  const double branch2 = 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(5.0) -
                         9.0 * std::log10(d_b * d_b + 23.5 * 23.5);
  CHECK(before == doctest::Approx(branch1).epsilon(1e-9));
  CHECK(after == doctest::Approx(branch2).epsilon(1e-9));
}

TEST_CASE("NLOS path loss, low regime") {
  const SystemConfig config = config_for(1.5, 5.0);
  const double r = r_for_d3d(500.0, 1.5);
  // PL'_N dominates the LOS value at this distance
  CHECK(pathloss_nlos_db(r, 1.5, config) ==
        doctest::Approx(132.99514785617197).epsilon(1e-9));
}

TEST_CASE("NLOS path loss, mid regime formula") {
  const SystemConfig config = config_for(50.0, 28.0);
  const double r = r_for_d3d(1000.0, 50.0);
  CHECK(pathloss_nlos_db(r, 50.0, config) ==
        doctest::Approx(146.20656272183666).epsilon(1e-9));
}

TEST_CASE("low-regime NLOS never undershoots LOS") {
  const SystemConfig config = config_for(1.5, 28.0);
  for (double r = 1.0; r <= 5000.0; r *= 1.7) {
    for (double h : {1.5, 10.0, 22.5}) {
      CHECK(pathloss_nlos_db(r, h, config) >=
            pathloss_los_db(r, h, config) - 1e-12);
    }
  }
}

TEST_CASE("LOS path loss is non-decreasing in distance within a branch") {
  const SystemConfig config = config_for(1.5, 5.0);
  double prev = 0.0;
  for (double r = 10.0; r <= 2400.0; r += 25.0) {
    const double pl = pathloss_los_db(r, 1.5, config);
    CHECK(pl >= prev);
    prev = pl;
  }
}

TEST_CASE("LOS probability hand values") {
  const SystemConfig config = config_for(1.5, 5.0);
  CHECK(los_probability(10.0, 1.5, config) == 1.0);
  CHECK(los_probability(18.0, 1.5, config) == 1.0);
  CHECK(los_probability(36.0, 1.5, config) ==
        doctest::Approx(0.6839397205857212).epsilon(1e-12));
  // h = 100: p_1 = 4800, d_1 = 220
  CHECK(los_probability(220.0, 100.0, config) == 1.0);
  CHECK(los_probability(1000.0, 100.0, config) ==
        doctest::Approx(0.8533103499974952).epsilon(1e-12));
  // above 100 m LOS is certain
  CHECK(los_probability(4500.0, 150.0, config) == 1.0);
  CHECK(los_probability(4500.0, 300.0, config) == 1.0);
}

TEST_CASE("LOS probability is in [0,1], ->1 as r->0, non-increasing for h=50") {
  const SystemConfig config = config_for(50.0, 5.0);
  double prev = 1.0;
  for (double r = 1.0; r <= 5000.0; r += 10.0) {
    const double p = los_probability(r, 50.0, config);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
  CHECK(los_probability(0.5, 50.0, config) == 1.0);
  for (double h : {1.5, 15.0, 22.5, 80.0}) {
    CHECK(los_probability(0.25, h, config) == 1.0);
  }
}

TEST_CASE("regime boundary at 22.5 m stays finite on both sides") {
  const SystemConfig config = config_for(22.5, 28.0);
  for (double r : {5.0, 50.0, 500.0, 4999.0}) {
    const PathLossResult low = expected_total_loss(r, 22.5, config);
    const PathLossResult high = expected_total_loss(r, 22.5 + 1e-9, config);
    for (const PathLossResult& res : {low, high}) {
      CHECK(std::isfinite(res.pl_los_db));
      CHECK(std::isfinite(res.pl_nlos_db));
      CHECK(std::isfinite(res.p_los));
      CHECK(res.expected_loss_linear > 0.0);
    }
  }
}

TEST_CASE("expected total loss composes the three channel pieces") {
  SystemConfig config = config_for(1.5, 5.0);
  const double r = 500.0;
  const PathLossResult res = expected_total_loss(r, 1.5, config);
  const double p = los_probability(r, 1.5, config);
  const double los = pathloss_los_db(r, 1.5, config);
  const double nlos = pathloss_nlos_db(r, 1.5, config);
  CHECK(res.p_los == doctest::Approx(p).epsilon(1e-14));
  CHECK(res.pl_los_db == doctest::Approx(los).epsilon(1e-14));
  CHECK(res.pl_nlos_db == doctest::Approx(nlos).epsilon(1e-14));
  CHECK(res.expected_loss_linear ==
        doctest::Approx(p * units::db_to_linear(-los) +
                        (1.0 - p) * units::db_to_linear(-nlos))
            .epsilon(1e-12));

  config.mix_scale = MixScale::db;
  const PathLossResult db_res = expected_total_loss(r, 1.5, config);
  CHECK(db_res.expected_loss_linear ==
        doctest::Approx(units::db_to_linear(-(p * los + (1.0 - p) * nlos)))
            .epsilon(1e-12));
}

TEST_CASE("degenerate mixtures collapse to the active branch") {
  const SystemConfig config = config_for(150.0, 28.0);
  // h > 100: P_LOS = 1 everywhere
  const PathLossResult res = expected_total_loss(800.0, 150.0, config);
  CHECK(res.p_los == 1.0);
  CHECK(res.expected_loss_linear ==
        doctest::Approx(units::db_to_linear(-res.pl_los_db)).epsilon(1e-14));
}

TEST_CASE("expected loss lies in (0, 1] across the parameter box") {
  for (double f : {5.0, 28.0}) {
    for (double h : {1.5, 22.5, 50.0, 100.0, 300.0}) {
      const SystemConfig config = config_for(h, f);
      for (double r = 1.0; r <= 5000.0; r *= 2.3) {
        const PathLossResult res = expected_total_loss(r, h, config);
        CHECK(res.expected_loss_linear > 0.0);
        CHECK(res.expected_loss_linear <= 1.0);
      }
    }
  }
}

TEST_CASE("validity counters track out-of-range links") {
  const SystemConfig config = config_for(1.5, 5.0);
  ChannelDiags diags;
  (void)expected_total_loss(5.0, 1.5, config, &diags);    // r < 10 m
  (void)expected_total_loss(5400.0, 1.5, config, &diags); // r > 5 km
  const ChannelDiagsSnapshot snap = snapshot(diags);
  CHECK(snap.below_min_2d == 1);
  CHECK(snap.beyond_range_2d == 1);
}

TEST_CASE("Nakagami power is Gamma(m, m): exponential CDF at m = 1 (KS, 1%)") {
  auto rng = derive_stream(17);
  const int n = 100000;
  std::vector<double> samples(n);
  for (double& x : samples) {
    x = sample_nakagami_power(1, rng);
  }
  std::sort(samples.begin(), samples.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = 1.0 - std::exp(-samples[i]);
    d = std::max(d, std::abs((i + 1.0) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  CHECK(d < 1.62762 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("Nakagami samples have unit mean and variance 1/m") {
  auto rng = derive_stream(19);
  for (int m : {1, 2, 3, 4}) {
    const int n = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_nakagami_power(m, rng);
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean - 1.0) <= 3.0 / std::sqrt(static_cast<double>(m) * n));
    CHECK(var == doctest::Approx(1.0 / m).epsilon(0.05));
  }
}
