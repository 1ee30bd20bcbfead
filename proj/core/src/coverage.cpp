#include "aerocov/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aerocov/antenna.hpp"
#include "aerocov/errors.hpp"
#include "aerocov/parallel.hpp"
#include "aerocov/rng.hpp"
#include "aerocov/units.hpp"

namespace aerocov {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double received_power_mw(double r_m, double phi_deg, const SystemConfig& config,
                         double tx_mw, ChannelDiags* diags) {
  const LinkGeometry link = link_from_r_phi(r_m, phi_deg, config);
  const PathLossResult loss =
      expected_total_loss(link.r_2d_m, config.user_height_m, config, diags);
  const double gain_db = composite_gain_dbi(link.phi_deg, link.theta_deg,
                                            config.tilt_deg, config.antenna);
  return tx_mw * loss.expected_loss_linear * units::db_to_linear(gain_db);
}

std::vector<double> binomial_row(int m) {
  std::vector<double> row(m + 1, 1.0);
  for (int k = 1; k <= m; ++k) {
    row[k] = row[k - 1] * static_cast<double>(m - k + 1) / static_cast<double>(k);
  }
  return row;
}

// Shared analytic driver: realization j derives its stream from
// (master_seed, j), draws a deployment (same one the Monte-Carlo iteration
// j sees) and evaluates `per_threshold(powers, T_linear)` for every
// threshold. Per-realization values land in preallocated slots, so the
// mean is independent of the thread partition.
template <typename PerRealization>
CoverageCurve analytic_curve_driver(const SystemConfig& config,
                                    std::vector<double> thresholds_db,
                                    std::uint64_t realizations,
                                    std::uint64_t master_seed,
                                    ChannelDiags* diags, unsigned threads,
                                    Method method,
                                    PerRealization&& per_threshold) {
  config.validate();
  if (realizations == 0) {
    throw ConfigError("realizations must be >= 1");
  }
  const std::size_t n_t = thresholds_db.size();
  std::vector<double> t_linear(n_t);
  for (std::size_t t = 0; t < n_t; ++t) {
    t_linear[t] = units::db_to_linear(thresholds_db[t]);
  }

  std::vector<double> values(realizations * n_t);
  parallel_for(realizations, threads, [&](std::size_t j) {
    std::mt19937_64 rng = derive_stream(master_seed, j);
    const GeometryRealization geometry = realize_geometry(config, rng);
    const RealizationPowers powers = unfaded_powers(geometry, config, diags);
    for (std::size_t t = 0; t < n_t; ++t) {
      values[j * n_t + t] = per_threshold(powers, t_linear[t]);
    }
  });

  CoverageCurve curve;
  curve.sweep_variable = "threshold_db";
  curve.sweep_values = std::move(thresholds_db);
  curve.threshold_db = std::numeric_limits<double>::quiet_NaN();
  curve.method = method;
  curve.p_cov.resize(n_t);
  curve.ci_halfwidth.assign(n_t, 0.0);
  curve.std_error.resize(n_t);
  for (std::size_t t = 0; t < n_t; ++t) {
    double sum = 0.0;
    for (std::uint64_t j = 0; j < realizations; ++j) {
      sum += values[j * n_t + t];
    }
    const double mean = sum / static_cast<double>(realizations);
    double sq = 0.0;
    for (std::uint64_t j = 0; j < realizations; ++j) {
      const double d = values[j * n_t + t] - mean;
      sq += d * d;
    }
    curve.p_cov[t] = mean;
    curve.std_error[t] =
        realizations > 1
            ? std::sqrt(sq / (static_cast<double>(realizations) *
                              static_cast<double>(realizations - 1)))
            : 0.0;
  }
  return curve;
}

} // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::monte_carlo: return "monte_carlo";
    case Method::analytic_sum: return "analytic_sum";
    case Method::analytic_conditional: return "analytic_conditional";
    case Method::rayleigh_closed_form: return "rayleigh_closed_form";
  }
  return "monte_carlo";
}

Method method_from_string(const std::string& s) {
  if (s == "monte_carlo") return Method::monte_carlo;
  if (s == "analytic_sum") return Method::analytic_sum;
  if (s == "analytic_conditional") return Method::analytic_conditional;
  if (s == "rayleigh_closed_form") return Method::rayleigh_closed_form;
  throw ConfigError("unknown method \"" + s + "\"");
}

GeometryRealization reduce_geometry(const Deployment& deployment,
                                    const SystemConfig& config) {
  GeometryRealization geometry;
  geometry.redraws = deployment.redraws;
  const std::size_t serving = associate_nearest(deployment);
  const std::size_t n = deployment.size();
  geometry.interferer_r_m.reserve(n - 1);
  geometry.interferer_phi_deg.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const LinkGeometry link = link_geometry(
        deployment.bs_positions[i], deployment.bs_boresights_deg[i], config);
    if (i == serving) {
      geometry.r0_m = link.r_2d_m;
      geometry.phi0_deg = link.phi_deg;
    } else {
      geometry.interferer_r_m.push_back(link.r_2d_m);
      geometry.interferer_phi_deg.push_back(link.phi_deg);
    }
  }
  return geometry;
}

GeometryRealization realize_geometry(const SystemConfig& config,
                                     std::mt19937_64& rng) {
  return reduce_geometry(sample_ppp(config, rng), config);
}

RealizationPowers unfaded_powers(const GeometryRealization& geometry,
                                 const SystemConfig& config,
                                 ChannelDiags* diags) {
  RealizationPowers powers;
  powers.r0_m = geometry.r0_m;
  const double tx_mw = config.tx_power_mw();
  powers.serving_mw =
      received_power_mw(geometry.r0_m, geometry.phi0_deg, config, tx_mw, diags);
  const std::size_t n = geometry.interferer_r_m.size();
  powers.interferers_mw.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    powers.interferers_mw[i] =
        received_power_mw(geometry.interferer_r_m[i],
                          geometry.interferer_phi_deg[i], config, tx_mw, diags);
  }
  return powers;
}

RealizationPowers unfaded_powers(const Deployment& deployment,
                                 const SystemConfig& config,
                                 ChannelDiags* diags) {
  return unfaded_powers(reduce_geometry(deployment, config), config, diags);
}

SinrSample sinr_with_fading(const RealizationPowers& powers, double noise_mw,
                            std::span<const double> fading) {
  SinrSample sample;
  sample.noise_mw = noise_mw;
  sample.serving_mw = powers.serving_mw * fading[0];
  sample.interference_mw = 0.0;
  for (std::size_t i = 0; i < powers.interferers_mw.size(); ++i) {
    sample.interference_mw += powers.interferers_mw[i] * fading[i + 1];
  }
  sample.sinr_linear =
      sample.serving_mw / (sample.interference_mw + sample.noise_mw);
  return sample;
}

SinrSample instantaneous_sinr(const Deployment& deployment,
                              const SystemConfig& config, std::mt19937_64& rng,
                              ChannelDiags* diags) {
  const RealizationPowers powers = unfaded_powers(deployment, config, diags);
  std::vector<double> fading(powers.interferers_mw.size() + 1);
  for (double& g : fading) {
    g = sample_nakagami_power(config.nakagami_m, rng);
  }
  return sinr_with_fading(powers, config.noise_mw(), fading);
}

CoverageCurve mc_coverage_curve(const SystemConfig& config,
                                std::vector<double> thresholds_db,
                                std::uint64_t iterations,
                                std::uint64_t master_seed, ChannelDiags* diags,
                                unsigned threads) {
  config.validate();
  if (iterations == 0) {
    throw ConfigError("iterations must be >= 1");
  }
  const double noise_mw = config.noise_mw();
  std::vector<double> sinr(iterations);
  parallel_for(iterations, threads, [&](std::size_t i) {
    std::mt19937_64 rng = derive_stream(master_seed, i);
    const GeometryRealization geometry = realize_geometry(config, rng);
    const RealizationPowers powers = unfaded_powers(geometry, config, diags);
    const std::size_t links = powers.interferers_mw.size() + 1;
    double serving = 0.0;
    double interference = 0.0;
    for (std::size_t l = 0; l < links; ++l) {
      const double g = sample_nakagami_power(config.nakagami_m, rng);
      if (l == 0) {
        serving = powers.serving_mw * g;
      } else {
        interference += powers.interferers_mw[l - 1] * g;
      }
    }
    sinr[i] = serving / (interference + noise_mw);
  });

  CoverageCurve curve;
  curve.sweep_variable = "threshold_db";
  curve.threshold_db = std::numeric_limits<double>::quiet_NaN();
  curve.method = Method::monte_carlo;
  curve.sweep_values = std::move(thresholds_db);
  const double n = static_cast<double>(iterations);
  for (double t_db : curve.sweep_values) {
    const double t_lin = units::db_to_linear(t_db);
    std::uint64_t count = 0;
    for (double v : sinr) {
      count += v > t_lin ? 1 : 0;
    }
    const double p = static_cast<double>(count) / n;
    curve.p_cov.push_back(p);
    curve.ci_halfwidth.push_back(1.96 * std::sqrt(p * (1.0 - p) / n));
    curve.std_error.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return curve;
}

double mc_coverage(const SystemConfig& config, double threshold_db,
                   std::uint64_t iterations, std::uint64_t master_seed) {
  return mc_coverage_curve(config, {threshold_db}, iterations, master_seed)
      .p_cov[0];
}

double conditional_coverage(const RealizationPowers& powers, double noise_mw,
                            int nakagami_m, double threshold_linear) {
  if (nakagami_m < 1) {
    throw ConfigError("nakagami_m must be a positive integer");
  }
  const double p0 = powers.serving_mw;
  if (!(p0 > 0.0)) {
    return 0.0;
  }
  const int m = nakagami_m;
  const double m_d = static_cast<double>(m);
  const double s = threshold_linear / p0;
  const double beta = m_d * s;

  // F(beta) = exp(-beta sigma^2) prod_i (1 + beta p_i / m)^(-m), the
  // fading-free part of E[exp(-beta (I + sigma^2))].
  double log_f = -beta * noise_mw;
  for (double p : powers.interferers_mw) {
    log_f -= m_d * std::log1p(beta * p / m_d);
  }
  const double f0 = std::exp(log_f);
  if (m == 1) {
    return clamp01(f0);
  }

  // P = sum_{k<m} (beta^k / k!) (-1)^k F^(k)(beta); derivatives via the
  // log-derivative psi = F'/F and the Leibniz recurrence.
  std::vector<double> power_sums(m, 0.0); // power_sums[l] = sum_i t_i^(l+1)
  for (double p : powers.interferers_mw) {
    const double a = p / m_d;
    const double t = a / (1.0 + beta * a);
    double t_pow = t;
    for (int l = 0; l < m - 1; ++l) {
      power_sums[l] += t_pow;
      t_pow *= t;
    }
  }
  std::vector<double> psi(m - 1, 0.0);
  psi[0] = -noise_mw - m_d * power_sums[0];
  double factorial = 1.0;
  for (int l = 1; l < m - 1; ++l) {
    factorial *= static_cast<double>(l);
    const double sign = (l % 2 == 0) ? -1.0 : 1.0;
    psi[l] = sign * factorial * m_d * power_sums[l];
  }

  std::vector<double> deriv(m, 0.0);
  deriv[0] = f0;
  std::vector<std::vector<double>> binom(m);
  for (int n = 0; n < m; ++n) {
    binom[n] = binomial_row(n);
  }
  for (int n = 1; n < m; ++n) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += binom[n - 1][j] * deriv[j] * psi[n - 1 - j];
    }
    deriv[n] = acc;
  }

  double prob = 0.0;
  double beta_pow = 1.0;
  double k_factorial = 1.0;
  for (int k = 0; k < m; ++k) {
    if (k > 0) {
      beta_pow *= beta;
      k_factorial *= static_cast<double>(k);
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    prob += sign * beta_pow / k_factorial * deriv[k];
  }
  return clamp01(prob);
}

double conditional_coverage(const Deployment& deployment,
                            const SystemConfig& config, double threshold_db) {
  const RealizationPowers powers = unfaded_powers(deployment, config);
  return conditional_coverage(powers, config.noise_mw(), config.nakagami_m,
                              units::db_to_linear(threshold_db));
}

CoverageCurve analytic_conditional_curve(const SystemConfig& config,
                                         std::vector<double> thresholds_db,
                                         std::uint64_t realizations,
                                         std::uint64_t master_seed,
                                         ChannelDiags* diags,
                                         unsigned threads) {
  const double noise_mw = config.noise_mw();
  const int m = config.nakagami_m;
  return analytic_curve_driver(
      config, std::move(thresholds_db), realizations, master_seed, diags,
      threads, Method::analytic_conditional,
      [noise_mw, m](const RealizationPowers& powers, double t_linear) {
        return conditional_coverage(powers, noise_mw, m, t_linear);
      });
}

double analytic_sum_coverage(const RealizationPowers& powers, double noise_mw,
                          int nakagami_m, double threshold_linear,
                          double lambda_b_per_km2) {
  if (nakagami_m < 1) {
    throw ConfigError("nakagami_m must be a positive integer");
  }
  const double p0 = powers.serving_mw;
  if (!(p0 > 0.0)) {
    return 0.0;
  }
  const int m = nakagami_m;
  const double m_d = static_cast<double>(m);
  const double s = threshold_linear / p0;
  const std::vector<double> binom = binomial_row(m);

  double total = 0.0;
  for (int k = 1; k <= m; ++k) {
    const double k_d = static_cast<double>(k);
    double interferer_sum = 0.0;
    for (double p : powers.interferers_mw) {
      // inner factor (1 + k p_i T / (m p_0))^(-m)
      interferer_sum +=
          1.0 - std::exp(-m_d * std::log1p(k_d * p * threshold_linear /
                                           (m_d * p0)));
    }
    const double term =
        binom[k] * std::exp(-k_d * m_d * s * noise_mw) *
        std::exp(-2.0 * units::kPi * lambda_b_per_km2 * interferer_sum);
    total += (k % 2 == 1) ? term : -term;
  }
  return clamp01(total);
}

CoverageCurve analytic_sum_curve(const SystemConfig& config,
                                 std::vector<double> thresholds_db,
                                 std::uint64_t realizations,
                                 std::uint64_t master_seed, ChannelDiags* diags,
                                 unsigned threads) {
  const double noise_mw = config.noise_mw();
  const int m = config.nakagami_m;
  const double lambda = config.bs_density_per_km2;
  return analytic_curve_driver(
      config, std::move(thresholds_db), realizations, master_seed, diags,
      threads, Method::analytic_sum,
      [noise_mw, m, lambda](const RealizationPowers& powers, double t_linear) {
        return analytic_sum_coverage(powers, noise_mw, m, t_linear, lambda);
      });
}

double analytic_sum_coverage_mean(const SystemConfig& config, double threshold_db,
                             std::uint64_t realizations,
                             std::uint64_t master_seed) {
  return analytic_sum_curve(config, {threshold_db}, realizations, master_seed)
      .p_cov[0];
}

double rayleigh_closed_form_coverage(const RealizationPowers& powers,
                                     double noise_mw, double threshold_linear,
                                     double lambda_b_per_km2) {
  const double p0 = powers.serving_mw;
  if (!(p0 > 0.0)) {
    return 0.0;
  }
  double interferer_sum = 0.0;
  for (double p : powers.interferers_mw) {
    interferer_sum += p * threshold_linear / (p0 + p * threshold_linear);
  }
  const double exponent = -threshold_linear * noise_mw / p0 -
                          2.0 * units::kPi * lambda_b_per_km2 * interferer_sum;
  return clamp01(std::exp(exponent));
}

CoverageCurve rayleigh_closed_form_curve(const SystemConfig& config,
                                         std::vector<double> thresholds_db,
                                         std::uint64_t realizations,
                                         std::uint64_t master_seed,
                                         ChannelDiags* diags,
                                         unsigned threads) {
  if (config.nakagami_m != 1) {
    throw ConfigError("rayleigh_closed_form requires nakagami_m == 1");
  }
  const double noise_mw = config.noise_mw();
  const double lambda = config.bs_density_per_km2;
  return analytic_curve_driver(
      config, std::move(thresholds_db), realizations, master_seed, diags,
      threads, Method::rayleigh_closed_form,
      [noise_mw, lambda](const RealizationPowers& powers, double t_linear) {
        return rayleigh_closed_form_coverage(powers, noise_mw, t_linear,
                                             lambda);
      });
}

double laplace_interference_conditional(std::span<const double> interferer_mw,
                                        int nakagami_m, double s) {
  if (nakagami_m < 1) {
    throw ConfigError("nakagami_m must be a positive integer");
  }
  const double m_d = static_cast<double>(nakagami_m);
  double log_l = 0.0;
  for (double p : interferer_mw) {
    log_l -= m_d * std::log1p(s * p / m_d);
  }
  return std::exp(log_l);
}

namespace {

// Azimuth-consistent mean unfaded power at 2D distance r: exact phi = 0 in
// aligned mode, uniform-phi average otherwise.
double mean_power_at_radius(double r_m, const SystemConfig& config,
                            double tx_mw) {
  if (config.azimuth_mode == AzimuthMode::aligned) {
    return received_power_mw(r_m, 0.0, config, tx_mw, nullptr);
  }
  const LinkGeometry link = link_from_r_phi(r_m, 0.0, config);
  const PathLossResult loss =
      expected_total_loss(link.r_2d_m, config.user_height_m, config, nullptr);
  constexpr int kPhiSamples = 256;
  double gain_sum = 0.0;
  for (int i = 0; i < kPhiSamples; ++i) {
    const double phi = -180.0 + 360.0 * (i + 0.5) / kPhiSamples;
    gain_sum += units::db_to_linear(composite_gain_dbi(
        phi, link.theta_deg, config.tilt_deg, config.antenna));
  }
  return tx_mw * loss.expected_loss_linear * gain_sum / kPhiSamples;
}

struct SimpsonState {
  const SystemConfig* config;
  double tx_mw;
  double s;
  double m_d;
  int m;
  RadialIntegrandTrace* trace;
  int evaluations = 0;
};

double pgfl_integrand(double r, SimpsonState& state) {
  const double p = mean_power_at_radius(r, *state.config, state.tx_mw);
  const double value =
      (1.0 - std::exp(-state.m_d * std::log1p(state.s * p / state.m_d))) * r;
  ++state.evaluations;
  if (state.trace != nullptr) {
    state.trace->r_m.push_back(r);
    state.trace->value.push_back(value);
  }
  return value;
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth,
                        SimpsonState& state) {
  if (depth <= 0) {
    throw NumericalError(
        "laplace_interference_intensity: adaptive quadrature did not "
        "converge on [" +
        std::to_string(a) + ", " + std::to_string(b) + "] after " +
        std::to_string(state.evaluations) + " integrand evaluations");
  }
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = pgfl_integrand(lm, state);
  const double frm = pgfl_integrand(rm, state);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                          state) +
         adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                          state);
}

} // namespace

double laplace_interference_intensity(const SystemConfig& config, double r0_m,
                                      double s, RadialIntegrandTrace* trace) {
  config.validate();
  if (!(s > 0.0)) {
    throw ConfigError("laplace transform argument s must be > 0");
  }
  const double a = std::max(r0_m, 1.0);
  const double b = config.region_radius_m;
  if (a >= b) {
    return 1.0;
  }
  SimpsonState state{&config, config.tx_power_mw(), s,
                     static_cast<double>(config.nakagami_m),
                     config.nakagami_m, trace};
  const double fa = pgfl_integrand(a, state);
  const double fb = pgfl_integrand(b, state);
  const double mid = pgfl_integrand(0.5 * (a + b), state);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * mid + fb);
  const double tol = std::max(std::abs(whole) * 1e-9, 1e-12);
  const double integral =
      adaptive_simpson(a, b, fa, mid, fb, whole, tol, 48, state);
  return std::exp(-2.0 * units::kPi * config.bs_density_per_m2() * integral);
}

bool is_monotone_non_increasing(std::span<const double> p_cov, double slack) {
  for (std::size_t i = 1; i < p_cov.size(); ++i) {
    if (p_cov[i] > p_cov[i - 1] + slack) {
      return false;
    }
  }
  return true;
}

} // namespace aerocov
