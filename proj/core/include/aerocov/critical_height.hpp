#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "aerocov/coverage.hpp"

namespace aerocov {

struct HeightPeak {
  double height_m = 0.0;
  double p_cov = 0.0;
};

// Solution of P_cov(h_c) = P_cov(1.5 m) plus the height-curve diagnostics
// used to find it. `reached` is false when coverage never falls back below
// the ground value before 300 m (h_c is then pinned at the grid top).
struct CriticalHeightResult {
  double h_c_m = 0.0;
  double p_cov_ground = 0.0;
  std::pair<double, double> bracket_m{0.0, 0.0};
  std::vector<HeightPeak> peaks;
  Method method = Method::analytic_conditional;
  bool reached = false;
  double threshold_db = 0.0;
  CoverageCurve curve; // full height curve used for the scan
};

struct CriticalHeightOptions {
  double grid_step_m = 1.0;
  double height_min_m = 1.5;
  double height_max_m = 300.0;
  double tol_h_m = 0.25;
  double peak_prominence = 0.005; // minimum rise over the adjacent valley
  std::uint64_t realizations = 1000;
  std::uint64_t master_seed = 1;
  Method method = Method::analytic_conditional;
  std::uint64_t mc_iterations = 10000; // used when method == monte_carlo
  unsigned threads = 0;
};

// Coverage vs user height with every other parameter fixed. Realizations
// share deployments across heights (common random numbers), so the curve
// is smooth enough for peak detection and bisection.
CoverageCurve coverage_vs_height(const SystemConfig& config,
                                 double threshold_db,
                                 const std::vector<double>& heights_m,
                                 const CriticalHeightOptions& options);

// Several thresholds over one shared set of realizations (the per-height
// link powers are computed once and reused across thresholds).
std::vector<CoverageCurve> coverage_vs_height_multi(
    const SystemConfig& config, const std::vector<double>& thresholds_db,
    const std::vector<double>& heights_m, const CriticalHeightOptions& options);

std::vector<double> default_height_grid(const CriticalHeightOptions& options);

// Local maxima of the height curve after prominence filtering.
std::vector<HeightPeak> detect_peaks(const CoverageCurve& curve,
                                     double prominence);

// Scans the height grid, takes the largest descending-branch crossing of
// the ground-user coverage level, and bisects it down to tol_h.
CriticalHeightResult find_critical_height(const SystemConfig& config,
                                          double threshold_db,
                                          const CriticalHeightOptions& options);

// Height at which the typical user at 2D distance r0 sits in the array
// main lobe: h_BS - r0 tan(tilt), floored at 1.5 m.
double predicted_main_lobe_height(const SystemConfig& config, double r0_m);

} // namespace aerocov
