#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "aerocov/coverage.hpp"
#include "aerocov/critical_height.hpp"

namespace aerocov {

enum class Study {
  validation,
  element_sweep,
  height_sweep,
  fading_sweep,
  tilt_sweep,
  frequency_sweep,
  critical_height
};

std::string to_string(Study study);
Study study_from_string(const std::string& s);

struct SweepSpec {
  std::string variable; // a SystemConfig field name, e.g. "num_elements"
  std::vector<double> values;
};

// A named experiment: base configuration, sweep, thresholds and run
// bookkeeping. Fields left unset in the config file keep the defaults
// (28 GHz, N = 16, 5 deg tilt, m = 1 unless the study sweeps them);
// `explicit_keys` records what the file actually set so studies can tell
// an intentional value from a default.
struct StudySpec {
  Study study = Study::validation;
  SystemConfig base_config;
  SweepSpec sweep;                    // empty variable -> study default
  std::vector<double> thresholds_db;  // empty -> study default
  std::uint64_t iterations = 10000;   // Monte-Carlo iterations
  std::uint64_t realizations = 1000;  // analytic realizations
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  std::vector<Method> methods;        // empty -> study default
  bool plots = true;
  double tol_h_m = 0.25;              // critical-height bisection tolerance
  std::set<std::string> explicit_keys;

  bool has_explicit(const std::string& key) const {
    return explicit_keys.count(key) > 0;
  }
};

// Strict-schema JSON config. An empty (or whitespace-only) file yields the
// full default spec; unknown keys and invariant violations raise
// ConfigError naming the offending field.
StudySpec load_config(const std::string& path);
StudySpec parse_config_text(const std::string& text);

// Re-target a spec at a different study, refreshing the defaults the
// original study resolved (thresholds, methods, sweep) unless the config
// file set them explicitly.
StudySpec retarget_study(const StudySpec& spec, Study study);

std::vector<std::string> sweepable_variables();
void apply_sweep_value(SystemConfig& config, const std::string& variable,
                       double value);

// Flat row form of the CSV schema:
// sweep_value, T_db, p_cov, method, ci_halfwidth.
struct CurveRow {
  double sweep_value = 0.0;
  double threshold_db = 0.0;
  double p_cov = 0.0;
  Method method = Method::monte_carlo;
  double ci_halfwidth = 0.0;
};

void write_curve_rows_csv(const std::string& path,
                          const std::vector<CurveRow>& rows);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Deterministic static SVG line chart (byte-identical for fixed input).
void emit_plot_svg(const std::string& path, const std::string& title,
                   const std::string& x_label, const std::string& y_label,
                   const std::vector<PlotSeries>& series,
                   const std::vector<double>& vertical_guides = {});

// Golden-value channel table (CSV: r, h, f_c, pl_los, pl_nlos, p_los) on a
// fixed grid, for regression against hand-computed values.
void write_golden_channel_table(const std::string& path);

// Vertical pattern cut at phi = 0 (CSV: theta, element, array factor,
// composite gain).
void write_pattern_cut_csv(const std::string& path, const SystemConfig& config,
                           double theta_step_deg = 0.25);

struct StudyOutputs {
  std::vector<std::string> files;
};

// Executes the study, writes CSV/JSON/manifest (and SVG plots unless
// disabled) under spec.output_dir, and returns the files written.
// Re-running with the same spec and seed reproduces every file
// byte-identically.
StudyOutputs run_study(const StudySpec& spec);

} // namespace aerocov
