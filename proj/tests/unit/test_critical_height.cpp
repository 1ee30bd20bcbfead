#include <cmath>
#include <vector>

#include <doctest.h>

#include "aerocov/critical_height.hpp"
#include "aerocov/errors.hpp"

using namespace aerocov;

namespace {

CriticalHeightOptions cheap_options() {
  CriticalHeightOptions options;
  options.realizations = 60;
  options.master_seed = 5;
  options.grid_step_m = 4.0;
  options.tol_h_m = 0.5;
  return options;
}

SystemConfig cheap_config() {
  SystemConfig config;
  config.region_radius_m = 1500.0;
  config.carrier_ghz = 5.0;
  return config;
}

CoverageCurve synthetic_curve(const std::vector<double>& p) {
  CoverageCurve curve;
  curve.sweep_variable = "user_height_m";
  curve.p_cov = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    curve.sweep_values.push_back(static_cast<double>(i + 1));
  }
  curve.ci_halfwidth.assign(p.size(), 0.0);
  curve.std_error.assign(p.size(), 0.0);
  return curve;
}

} // namespace

TEST_CASE("predicted main-lobe height") {
  SystemConfig config;
  config.tilt_deg = 0.0;
  CHECK(predicted_main_lobe_height(config, 100.0) == doctest::Approx(25.0));
  config.tilt_deg = 5.0;
  CHECK(predicted_main_lobe_height(config, 100.0) ==
        doctest::Approx(16.2511336474076).epsilon(1e-9));
  CHECK(predicted_main_lobe_height(config, 1e6) == 1.5);
  CHECK_THROWS_AS(predicted_main_lobe_height(config, 0.0), ConfigError);
}

TEST_CASE("peak detection with prominence filtering") {
  const CoverageCurve curve = synthetic_curve(
      {0.00, 0.10, 0.20, 0.30, 0.20, 0.10, 0.25, 0.10, 0.05, 0.02});
  const std::vector<HeightPeak> loose = detect_peaks(curve, 0.05);
  REQUIRE(loose.size() == 2);
  CHECK(loose[0].height_m == 4.0);
  CHECK(loose[0].p_cov == doctest::Approx(0.30));
  CHECK(loose[1].height_m == 7.0);
  // the second peak's prominence is 0.25 - 0.10 = 0.15
  const std::vector<HeightPeak> strict = detect_peaks(curve, 0.2);
  REQUIRE(strict.size() == 1);
  CHECK(strict[0].height_m == 4.0);
}

TEST_CASE("monotone curves have no interior peaks") {
  const CoverageCurve curve =
      synthetic_curve({0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3});
  CHECK(detect_peaks(curve, 0.001).empty());
}

TEST_CASE("single-point height grid matches a direct evaluation") {
  const SystemConfig config = cheap_config();
  const CriticalHeightOptions options = cheap_options();
  const CoverageCurve curve =
      coverage_vs_height(config, 0.0, {1.5}, options);
  REQUIRE(curve.p_cov.size() == 1);
  const CoverageCurve direct = analytic_conditional_curve(
      config, {0.0}, options.realizations, options.master_seed);
  CHECK(curve.p_cov[0] == doctest::Approx(direct.p_cov[0]).epsilon(1e-12));
}

TEST_CASE("find_critical_height mechanics on a cheap configuration") {
  const SystemConfig config = cheap_config();
  const CriticalHeightOptions options = cheap_options();
  const CriticalHeightResult res = find_critical_height(config, 5.0, options);
  CHECK(res.threshold_db == 5.0);
  CHECK(res.p_cov_ground == doctest::Approx(res.curve.p_cov.front()));
  CHECK(res.h_c_m > 1.5);
  CHECK(res.h_c_m <= 300.0);
  if (res.reached) {
    CHECK(res.h_c_m >= res.bracket_m.first);
    CHECK(res.h_c_m <= res.bracket_m.second);
    CHECK(res.bracket_m.second - res.bracket_m.first >= 0.0);
  }
  // determinism
  const CriticalHeightResult again = find_critical_height(config, 5.0, options);
  CHECK(res.h_c_m == again.h_c_m);
}

TEST_CASE("critical height is pinned at the band top when never crossed") {
  const SystemConfig config = cheap_config();
  CriticalHeightOptions options = cheap_options();
  options.grid_step_m = 25.0;
  // T = +100 dB: coverage is 0 at every height, so the curve never falls
  // back below the ground value
  const CriticalHeightResult res = find_critical_height(config, 100.0, options);
  CHECK_FALSE(res.reached);
  CHECK(res.h_c_m == 300.0);
}

TEST_CASE("critical height is stable across master seeds") {
  const SystemConfig config = cheap_config();
  CriticalHeightOptions a = cheap_options();
  a.realizations = 1000;
  CriticalHeightOptions b = a;
  b.master_seed = 6;
  const CriticalHeightResult res_a = find_critical_height(config, 5.0, a);
  const CriticalHeightResult res_b = find_critical_height(config, 5.0, b);
  CHECK(std::abs(res_a.h_c_m - res_b.h_c_m) <= 2.0 * a.grid_step_m);
}

TEST_CASE("invalid tolerance is rejected") {
  const SystemConfig config = cheap_config();
  CriticalHeightOptions options = cheap_options();
  options.tol_h_m = 0.0;
  CHECK_THROWS_AS(find_critical_height(config, 5.0, options), ConfigError);
}
