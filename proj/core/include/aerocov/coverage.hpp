#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "aerocov/channel.hpp"
#include "aerocov/config.hpp"
#include "aerocov/deployment.hpp"

namespace aerocov {

enum class Method { monte_carlo, analytic_sum, analytic_conditional, rayleigh_closed_form };

std::string to_string(Method method);
Method method_from_string(const std::string& s);

// Geometry of one realization reduced to what SINR needs: serving and
// interferer (r, phi) pairs. Independent of user height, element count,
// tilt and carrier, so sweeps over those reuse the same realizations.
struct GeometryRealization {
  double r0_m = 0.0;
  double phi0_deg = 0.0;
  std::vector<double> interferer_r_m;
  std::vector<double> interferer_phi_deg;
  int redraws = 0;
};

GeometryRealization realize_geometry(const SystemConfig& config,
                                     std::mt19937_64& rng);
GeometryRealization reduce_geometry(const Deployment& deployment,
                                    const SystemConfig& config);

// Unfaded received powers in mW: P_t * expected_total_loss * antenna gain
// per BS, before the Nakagami draw.
struct RealizationPowers {
  double serving_mw = 0.0;
  std::vector<double> interferers_mw;
  double r0_m = 0.0;
};

RealizationPowers unfaded_powers(const GeometryRealization& geometry,
                                 const SystemConfig& config,
                                 ChannelDiags* diags = nullptr);
RealizationPowers unfaded_powers(const Deployment& deployment,
                                 const SystemConfig& config,
                                 ChannelDiags* diags = nullptr);

struct SinrSample {
  double sinr_linear = 0.0;
  double serving_mw = 0.0;
  double interference_mw = 0.0;
  double noise_mw = 0.0;
};

// One SINR draw: fresh Nakagami gain on the serving and every interfering
// link. fading[0] applies to the serving BS.
SinrSample sinr_with_fading(const RealizationPowers& powers, double noise_mw,
                            std::span<const double> fading);
SinrSample instantaneous_sinr(const Deployment& deployment,
                              const SystemConfig& config, std::mt19937_64& rng,
                              ChannelDiags* diags = nullptr);

// Coverage series over one sweep variable at a fixed SINR threshold. For
// threshold sweeps the variable is "threshold_db" and threshold_db is NaN.
// ci_halfwidth carries the 95% binomial half-width for Monte Carlo and is
// zero for the analytic methods (std_error keeps their realization-mean
// standard error for diagnostics).
struct CoverageCurve {
  std::string sweep_variable;
  std::vector<double> sweep_values;
  double threshold_db = 0.0;
  Method method = Method::monte_carlo;
  std::vector<double> p_cov;
  std::vector<double> ci_halfwidth;
  std::vector<double> std_error;
};

// Full Monte Carlo estimate of P[SINR > T]: every iteration draws a fresh
// PPP realization and a fresh fading vector. Deterministic for a fixed
// master seed, independent of worker count.
CoverageCurve mc_coverage_curve(const SystemConfig& config,
                                std::vector<double> thresholds_db,
                                std::uint64_t iterations,
                                std::uint64_t master_seed,
                                ChannelDiags* diags = nullptr,
                                unsigned threads = 0);
double mc_coverage(const SystemConfig& config, double threshold_db,
                   std::uint64_t iterations, std::uint64_t master_seed);

// Exact fading-averaged coverage for one realization, from the closed-form
// derivatives of exp(-beta sigma^2) * prod_i (1 + beta p_i / m)^(-m).
// Requires integer m >= 1.
double conditional_coverage(const RealizationPowers& powers, double noise_mw,
                            int nakagami_m, double threshold_linear);
double conditional_coverage(const Deployment& deployment,
                            const SystemConfig& config, double threshold_db);

// Production analytic method: conditional_coverage averaged over fresh
// realizations (realization j uses the same deployment as MC iteration j).
CoverageCurve analytic_conditional_curve(const SystemConfig& config,
                                         std::vector<double> thresholds_db,
                                         std::uint64_t realizations,
                                         std::uint64_t master_seed,
                                         ChannelDiags* diags = nullptr,
                                         unsigned threads = 0);

// Discretized-sum approximation (comparison mode): binomial sum over k
// with exp(-k m s sigma^2) and the 2 pi lambda_B weighted interferer sum,
// inner factor (1 + k p_i T / (m p_0))^(-m), lambda_B in BS/km^2. Known to
// diverge from the Monte Carlo estimate; retained for comparison.
double analytic_sum_coverage(const RealizationPowers& powers, double noise_mw,
                          int nakagami_m, double threshold_linear,
                          double lambda_b_per_km2);
CoverageCurve analytic_sum_curve(const SystemConfig& config,
                                 std::vector<double> thresholds_db,
                                 std::uint64_t realizations,
                                 std::uint64_t master_seed,
                                 ChannelDiags* diags = nullptr,
                                 unsigned threads = 0);
double analytic_sum_coverage_mean(const SystemConfig& config, double threshold_db,
                             std::uint64_t realizations,
                             std::uint64_t master_seed);

// m = 1 closed form: exp(-T sigma^2 / p_0 - 2 pi lambda_B sum_i p_i T /
// (p_0 + p_i T)). Equals analytic_sum_coverage at m = 1 exactly.
double rayleigh_closed_form_coverage(const RealizationPowers& powers,
                                     double noise_mw, double threshold_linear,
                                     double lambda_b_per_km2);
CoverageCurve rayleigh_closed_form_curve(const SystemConfig& config,
                                         std::vector<double> thresholds_db,
                                         std::uint64_t realizations,
                                         std::uint64_t master_seed,
                                         ChannelDiags* diags = nullptr,
                                         unsigned threads = 0);

// Laplace transform of the aggregate interference power at argument s.
// Conditional form: prod_i (1 + s p_i / m)^(-m) over realized interferers.
double laplace_interference_conditional(std::span<const double> interferer_mw,
                                        int nakagami_m, double s);

// Intensity (PGFL) form: exp(-2 pi lambda int_{r0}^{R} (1 - (1 + s p(r)/m)^(-m)) r dr)
// with lambda in BS/m^2 and p(r) the azimuth-averaged unfaded power.
// Adaptive quadrature; throws NumericalError with the integrand trace on
// non-convergence.
struct RadialIntegrandTrace {
  std::vector<double> r_m;
  std::vector<double> value;
};
double laplace_interference_intensity(const SystemConfig& config, double r0_m,
                                      double s,
                                      RadialIntegrandTrace* trace = nullptr);

// True if p_cov is non-increasing in T up to `slack` (statistical noise).
bool is_monotone_non_increasing(std::span<const double> p_cov,
                                double slack = 0.0);

} // namespace aerocov
