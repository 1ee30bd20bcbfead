#include "aerocov/critical_height.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "aerocov/errors.hpp"
#include "aerocov/parallel.hpp"
#include "aerocov/rng.hpp"
#include "aerocov/units.hpp"

namespace aerocov {

namespace {

// Geometry realizations reused across heights: the PPP does not depend on
// the user height, so every height sees the same deployments and the
// curve is smooth enough for peak detection and bisection.
std::vector<GeometryRealization> realize_cache(const SystemConfig& config,
                                               const CriticalHeightOptions& options) {
  std::vector<GeometryRealization> cache(options.realizations);
  parallel_for(cache.size(), options.threads, [&](std::size_t j) {
    std::mt19937_64 rng = derive_stream(options.master_seed, j);
    cache[j] = realize_geometry(config, rng);
  });
  return cache;
}

double mean_conditional_coverage(const std::vector<GeometryRealization>& cache,
                                 const SystemConfig& config,
                                 double threshold_linear,
                                 const CriticalHeightOptions& options) {
  std::vector<double> values(cache.size());
  const double noise_mw = config.noise_mw();
  parallel_for(cache.size(), options.threads, [&](std::size_t j) {
    const RealizationPowers powers = unfaded_powers(cache[j], config);
    values[j] =
        conditional_coverage(powers, noise_mw, config.nakagami_m, threshold_linear);
  });
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

} // namespace

std::vector<double> default_height_grid(const CriticalHeightOptions& options) {
  std::vector<double> grid;
  for (double h = options.height_min_m; h < options.height_max_m - 1e-9;
       h += options.grid_step_m) {
    grid.push_back(h);
  }
  grid.push_back(options.height_max_m);
  return grid;
}

std::vector<CoverageCurve> coverage_vs_height_multi(
    const SystemConfig& config, const std::vector<double>& thresholds_db,
    const std::vector<double>& heights_m, const CriticalHeightOptions& options) {
  if (heights_m.empty()) {
    throw ConfigError("height grid must be non-empty");
  }
  for (double h : heights_m) {
    SystemConfig probe = config;
    probe.user_height_m = h;
    probe.validate();
  }

  std::vector<CoverageCurve> curves(thresholds_db.size());
  for (std::size_t t = 0; t < thresholds_db.size(); ++t) {
    curves[t].sweep_variable = "user_height_m";
    curves[t].sweep_values = heights_m;
    curves[t].threshold_db = thresholds_db[t];
    curves[t].method = options.method;
    curves[t].p_cov.resize(heights_m.size());
    curves[t].ci_halfwidth.assign(heights_m.size(), 0.0);
    curves[t].std_error.assign(heights_m.size(), 0.0);
  }

  if (options.method == Method::monte_carlo) {
    for (std::size_t i = 0; i < heights_m.size(); ++i) {
      SystemConfig at_height = config;
      at_height.user_height_m = heights_m[i];
      const CoverageCurve mc =
          mc_coverage_curve(at_height, thresholds_db, options.mc_iterations,
                            options.master_seed, nullptr, options.threads);
      for (std::size_t t = 0; t < thresholds_db.size(); ++t) {
        curves[t].p_cov[i] = mc.p_cov[t];
        curves[t].ci_halfwidth[i] = mc.ci_halfwidth[t];
        curves[t].std_error[i] = mc.std_error[t];
      }
    }
    return curves;
  }

  const std::vector<GeometryRealization> cache = realize_cache(config, options);
  std::vector<double> t_linear(thresholds_db.size());
  for (std::size_t t = 0; t < thresholds_db.size(); ++t) {
    t_linear[t] = units::db_to_linear(thresholds_db[t]);
  }
  const std::size_t n_t = thresholds_db.size();
  const double noise_mw = config.noise_mw();
  for (std::size_t i = 0; i < heights_m.size(); ++i) {
    SystemConfig at_height = config;
    at_height.user_height_m = heights_m[i];
    std::vector<double> values(cache.size() * n_t);
    parallel_for(cache.size(), options.threads, [&](std::size_t j) {
      const RealizationPowers powers = unfaded_powers(cache[j], at_height);
      for (std::size_t t = 0; t < n_t; ++t) {
        values[j * n_t + t] = conditional_coverage(
            powers, noise_mw, at_height.nakagami_m, t_linear[t]);
      }
    });
    for (std::size_t t = 0; t < n_t; ++t) {
      double sum = 0.0;
      for (std::size_t j = 0; j < cache.size(); ++j) {
        sum += values[j * n_t + t];
      }
      const double mean = sum / static_cast<double>(cache.size());
      double sq = 0.0;
      for (std::size_t j = 0; j < cache.size(); ++j) {
        const double d = values[j * n_t + t] - mean;
        sq += d * d;
      }
      curves[t].p_cov[i] = mean;
      curves[t].std_error[i] =
          cache.size() > 1
              ? std::sqrt(sq / (static_cast<double>(cache.size()) *
                                static_cast<double>(cache.size() - 1)))
              : 0.0;
    }
  }
  return curves;
}

CoverageCurve coverage_vs_height(const SystemConfig& config,
                                 double threshold_db,
                                 const std::vector<double>& heights_m,
                                 const CriticalHeightOptions& options) {
  return coverage_vs_height_multi(config, {threshold_db}, heights_m,
                                  options)[0];
}

std::vector<HeightPeak> detect_peaks(const CoverageCurve& curve,
                                     double prominence) {
  const std::vector<double>& p = curve.p_cov;
  const std::vector<double>& h = curve.sweep_values;
  std::vector<HeightPeak> peaks;
  if (p.size() < 3) {
    return peaks;
  }
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (!(p[i] > p[i - 1] && p[i] >= p[i + 1])) {
      continue;
    }
    // topographic prominence: drop to the higher of the two valleys that
    // separate this maximum from higher ground (or the curve ends)
    double left_min = p[i];
    for (std::size_t j = i; j-- > 0;) {
      if (p[j] > p[i]) {
        break;
      }
      left_min = std::min(left_min, p[j]);
    }
    double right_min = p[i];
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[j] > p[i]) {
        break;
      }
      right_min = std::min(right_min, p[j]);
    }
    if (p[i] - std::max(left_min, right_min) >= prominence) {
      peaks.push_back({h[i], p[i]});
    }
  }
  return peaks;
}

CriticalHeightResult find_critical_height(const SystemConfig& config,
                                          double threshold_db,
                                          const CriticalHeightOptions& options) {
  if (!(options.tol_h_m > 0.0)) {
    throw ConfigError("tol_h_m must be > 0");
  }
  SystemConfig base = config;
  base.user_height_m = options.height_min_m;
  base.validate();

  CriticalHeightResult result;
  result.threshold_db = threshold_db;
  result.method = options.method;

  const std::vector<double> grid = default_height_grid(options);
  result.curve =
      coverage_vs_height_multi(base, {threshold_db}, grid, options)[0];
  const std::vector<double>& p = result.curve.p_cov;
  for (double v : p) {
    if (!std::isfinite(v)) {
      throw NumericalError("find_critical_height: non-finite coverage value");
    }
  }
  result.p_cov_ground = p.front();
  result.peaks = detect_peaks(result.curve, options.peak_prominence);

  const double p_ground = result.p_cov_ground;
  if (p.back() >= p_ground) {
    // coverage never falls back below the ground value within the band
    result.h_c_m = grid.back();
    result.bracket_m = {grid.back(), grid.back()};
    result.reached = false;
    return result;
  }

  // largest descending-branch crossing of the ground level
  std::size_t lo_idx = 0;
  bool found = false;
  for (std::size_t i = grid.size() - 1; i-- > 0;) {
    if (p[i] >= p_ground && p[i + 1] < p_ground) {
      lo_idx = i;
      found = true;
      break;
    }
  }
  if (!found) {
    // the whole grid above the ground height sits below the ground value;
    // the crossing is inside the first step
    lo_idx = 0;
  }

  double lo = grid[lo_idx];
  double hi = grid[lo_idx + 1];
  result.bracket_m = {lo, hi};

  // Bisection on the same deterministic evaluator the scan used.
  std::function<double(double)> coverage_at;
  std::vector<GeometryRealization> cache;
  if (options.method == Method::monte_carlo) {
    coverage_at = [&](double height) {
      SystemConfig at_height = base;
      at_height.user_height_m = height;
      return mc_coverage(at_height, threshold_db, options.mc_iterations,
                         options.master_seed);
    };
  } else {
    cache = realize_cache(base, options);
    const double t_linear = units::db_to_linear(threshold_db);
    coverage_at = [&, t_linear](double height) {
      SystemConfig at_height = base;
      at_height.user_height_m = height;
      return mean_conditional_coverage(cache, at_height, t_linear, options);
    };
  }

  while (hi - lo > options.tol_h_m) {
    const double mid = 0.5 * (lo + hi);
    if (coverage_at(mid) >= p_ground) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.h_c_m = 0.5 * (lo + hi);
  result.reached = true;
  return result;
}

double predicted_main_lobe_height(const SystemConfig& config, double r0_m) {
  if (!(r0_m > 0.0)) {
    throw ConfigError("r0_m must be > 0");
  }
  const double height =
      config.bs_height_m - r0_m * std::tan(units::deg_to_rad(config.tilt_deg));
  return std::max(height, 1.5);
}

} // namespace aerocov
