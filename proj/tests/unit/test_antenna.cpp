#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "aerocov/antenna.hpp"
#include "aerocov/units.hpp"

using namespace aerocov;

namespace {

AntennaConfig default_antenna(int n = 16) {
  AntennaConfig a;
  a.num_elements_v = n;
  return a;
}

// reference array response via the explicit complex element sum
double reference_response_sq(int n, double theta_deg, double tilt_deg) {
  std::complex<double> sum{0.0, 0.0};
  const double phase_unit =
      2.0 * units::kPi * 0.5 *
      (std::cos(units::deg_to_rad(theta_deg)) +
       std::sin(units::deg_to_rad(tilt_deg)));
  for (int k = 0; k < n; ++k) {
    sum += std::exp(std::complex<double>(0.0, phase_unit * k));
  }
  return std::norm(sum) / n;
}

} // namespace

TEST_CASE("horizontal element cut") {
  const AntennaConfig a = default_antenna();
  CHECK(element_gain_h_db(0.0, a) == 0.0);
  CHECK(element_gain_h_db(65.0, a) == doctest::Approx(-12.0).epsilon(1e-12));
  CHECK(element_gain_h_db(-65.0, a) == doctest::Approx(-12.0).epsilon(1e-12));
  CHECK(element_gain_h_db(180.0, a) == doctest::Approx(-30.0).epsilon(1e-12));
}

TEST_CASE("vertical element cut") {
  const AntennaConfig a = default_antenna();
  CHECK(element_gain_v_db(90.0, a) == 0.0);
  CHECK(element_gain_v_db(122.5, a) == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(element_gain_v_db(0.0, a) ==
        doctest::Approx(-23.00591715976331).epsilon(1e-12));
}

TEST_CASE("element pattern combines cuts under the clamp") {
  const AntennaConfig a = default_antenna();
  CHECK(element_pattern_dbi(0.0, 90.0, a) == doctest::Approx(8.0));
  CHECK(element_pattern_dbi(180.0, 0.0, a) == doctest::Approx(-22.0));
  for (double phi = -180.0; phi <= 180.0; phi += 7.0) {
    for (double theta = 0.0; theta <= 180.0; theta += 5.0) {
      const double g = element_pattern_dbi(phi, theta, a);
      CHECK(g <= a.max_element_gain_dbi + 1e-12);
      CHECK(g >= a.max_element_gain_dbi - a.front_to_back_db - 1e-12);
    }
  }
}

TEST_CASE("array factor peaks at theta = 90 + tilt with value 10log10(N)") {
  const AntennaConfig a = default_antenna(16);
  CHECK(array_factor_db(0.0, 95.0, 5.0, a) ==
        doctest::Approx(12.041199826559248).epsilon(1e-12));
  // scan: no angle exceeds the steered-direction value
  const double peak = array_factor_db(0.0, 95.0, 5.0, a);
  for (double theta = 0.0; theta <= 180.0; theta += 0.05) {
    CHECK(array_factor_db(0.0, theta, 5.0, a) <= peak + 1e-9);
  }
}

TEST_CASE("single element and rho = 0 flatten the array factor") {
  AntennaConfig one = default_antenna(1);
  for (double theta = 0.0; theta <= 180.0; theta += 9.0) {
    CHECK(array_factor_db(0.0, theta, 12.0, one) == doctest::Approx(0.0));
  }
  AntennaConfig uncorrelated = default_antenna(16);
  uncorrelated.correlation = 0.0;
  for (double theta = 0.0; theta <= 180.0; theta += 9.0) {
    CHECK(array_factor_db(0.0, theta, 12.0, uncorrelated) ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("partial correlation interpolates the array factor") {
  AntennaConfig a = default_antenna(16);
  a.correlation = 0.5;
  const double expected = 10.0 * std::log10(1.0 + 0.5 * (16.0 - 1.0));
  CHECK(array_factor_db(0.0, 95.0, 5.0, a) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("array response matches the explicit complex sum") {
  const AntennaConfig a = default_antenna(16);
  for (double theta = 1.0; theta < 180.0; theta += 3.7) {
    CHECK(array_response_sq(theta, 5.0, a) ==
          doctest::Approx(reference_response_sq(16, theta, 5.0)).epsilon(1e-9));
  }
}

TEST_CASE("both steering-phase conventions coincide for the ULA") {
  AntennaConfig standard = default_antenna(32);
  AntennaConfig direct = default_antenna(32);
  direct.steering = SteeringMode::sin_tilt;
  for (double tilt : {0.0, 5.0, 15.0}) {
    for (double theta = 0.0; theta <= 180.0; theta += 1.3) {
      CHECK(array_factor_db(0.0, theta, tilt, standard) ==
            doctest::Approx(array_factor_db(0.0, theta, tilt, direct))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("composite peak gain is G_E,max + 10log10(N) at zero tilt") {
  for (int n : {16, 32, 64}) {
    const AntennaConfig a = default_antenna(n);
    const double expected = 8.0 + 10.0 * std::log10(static_cast<double>(n));
    CHECK(composite_gain_dbi(0.0, 90.0, 0.0, a) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("composite gain is bounded by G_E,max + 10log10(N)") {
  const AntennaConfig a = default_antenna(16);
  const double bound = 8.0 + 10.0 * std::log10(16.0);
  for (double phi = -180.0; phi <= 180.0; phi += 11.0) {
    for (double theta = 0.0; theta <= 180.0; theta += 1.7) {
      CHECK(composite_gain_dbi(phi, theta, 5.0, a) <= bound + 1e-9);
    }
  }
}

TEST_CASE("composite gain is symmetric in phi") {
  const AntennaConfig a = default_antenna(16);
  for (double phi = 0.0; phi <= 180.0; phi += 13.0) {
    for (double theta = 10.0; theta <= 170.0; theta += 23.0) {
      CHECK(composite_gain_dbi(phi, theta, 5.0, a) ==
            doctest::Approx(composite_gain_dbi(-phi, theta, 5.0, a)));
    }
  }
}

TEST_CASE("array response is symmetric in its phase variable") {
  const AntennaConfig a = default_antenna(16);
  // pick theta pairs with opposite phase arguments around the steered peak
  const double steer = std::sin(units::deg_to_rad(5.0));
  for (double delta = 0.02; delta < 0.9; delta += 0.07) {
    const double up = std::acos(-steer + delta);
    const double down = std::acos(-steer - delta);
    CHECK(array_response_sq(units::rad_to_deg(up), 5.0, a) ==
          doctest::Approx(array_response_sq(units::rad_to_deg(down), 5.0, a))
              .epsilon(1e-9));
  }
}

TEST_CASE("mean array response over a uniform phase is 1") {
  const AntennaConfig a = default_antenna(16);
  // the phase variable x = pi (cos theta + sin tilt) sweeps one full 2*pi
  // period as theta runs 0..180; the normalized steering makes the mean
  // response over x uniform equal 1 exactly
  const double steer = std::sin(units::deg_to_rad(5.0));
  const int samples = 100000;
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = units::kPi * (steer - 1.0) +
                     2.0 * units::kPi * (i + 0.5) / samples;
    const double c = std::clamp(x / units::kPi - steer, -1.0, 1.0);
    const double theta = units::rad_to_deg(std::acos(c));
    sum += array_response_sq(theta, 5.0, a);
  }
  CHECK(sum / samples == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("doubling N adds 3 dB of peak gain and halves the main lobe") {
  const AntennaConfig a16 = default_antenna(16);
  const AntennaConfig a32 = default_antenna(32);
  const double peak16 = composite_gain_dbi(0.0, 90.0, 0.0, a16);
  const double peak32 = composite_gain_dbi(0.0, 90.0, 0.0, a32);
  CHECK(peak32 - peak16 == doctest::Approx(3.0102999566398125).epsilon(1e-9));

  // -3 dB width around the zero-tilt peak via a dense scan
  auto half_width = [](const AntennaConfig& a, double peak) {
    for (double theta = 90.0; theta <= 180.0; theta += 0.001) {
      if (composite_gain_dbi(0.0, theta, 0.0, a) < peak - 3.0) {
        return theta - 90.0;
      }
    }
    return 90.0;
  };
  const double w16 = half_width(a16, peak16);
  const double w32 = half_width(a32, peak32);
  CHECK(w32 == doctest::Approx(w16 / 2.0).epsilon(0.1));
}

TEST_CASE("first null near the main lobe sits at least 13 dB under the peak") {
  const AntennaConfig a = default_antenna(16);
  const double peak = composite_gain_dbi(0.0, 95.0, 5.0, a);
  // the first null above the steered direction: x = 2pi/N in phase terms
  double min_gain = peak;
  for (double theta = 95.5; theta <= 103.0; theta += 0.001) {
    min_gain = std::min(min_gain, composite_gain_dbi(0.0, theta, 5.0, a));
  }
  CHECK(min_gain <= peak - 13.0);
}

TEST_CASE("N = 1 composite gain reduces to the element pattern") {
  AntennaConfig a = default_antenna(1);
  a.correlation = 0.7;
  for (double theta = 0.0; theta <= 180.0; theta += 14.0) {
    CHECK(composite_gain_dbi(30.0, theta, 9.0, a) ==
          doctest::Approx(element_pattern_dbi(30.0, theta, a)));
  }
}
