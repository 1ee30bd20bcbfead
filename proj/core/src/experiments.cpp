#include "aerocov/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aerocov/antenna.hpp"
#include "aerocov/errors.hpp"
#include "aerocov/version.hpp"

namespace aerocov {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string num(double v, const char* pattern = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " +
                  ec.message());
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write file: " + path.string());
  }
  return out;
}

json antenna_to_json(const AntennaConfig& antenna) {
  return json{{"phi_3db_deg", antenna.phi_3db_deg},
              {"theta_3db_deg", antenna.theta_3db_deg},
              {"front_to_back_db", antenna.front_to_back_db},
              {"sla_v_db", antenna.sla_v_db},
              {"max_element_gain_dbi", antenna.max_element_gain_dbi},
              {"correlation", antenna.correlation},
              {"element_spacing_wavelengths", antenna.element_spacing_wavelengths},
              {"steering", to_string(antenna.steering)},
              {"combined_clamp", antenna.combined_clamp == CombinedClamp::front_to_back
                                     ? "front_to_back"
                                     : "side_lobe_limit"},
              {"steering_azimuth_deg", antenna.steering_azimuth_deg},
              {"num_elements_h", antenna.num_elements_h}};
}

json config_to_json(const SystemConfig& config) {
  return json{{"lambda_b_per_km2", config.bs_density_per_km2},
              {"bs_height_m", config.bs_height_m},
              {"user_height_m", config.user_height_m},
              {"tx_power_dbm", config.tx_power_dbm},
              {"noise_dbm", config.noise_dbm},
              {"carrier_ghz", config.carrier_ghz},
              {"region_radius_m", config.region_radius_m},
              {"num_elements", config.antenna.num_elements_v},
              {"tilt_deg", config.tilt_deg},
              {"nakagami_m", config.nakagami_m},
              {"azimuth_mode", to_string(config.azimuth_mode)},
              {"mix_scale", to_string(config.mix_scale)},
              {"antenna", antenna_to_json(config.antenna)}};
}

json spec_to_json(const StudySpec& spec) {
  json methods = json::array();
  for (Method m : spec.methods) {
    methods.push_back(to_string(m));
  }
  return json{{"study", to_string(spec.study)},
              {"config", config_to_json(spec.base_config)},
              {"sweep", json{{"variable", spec.sweep.variable},
                             {"values", spec.sweep.values}}},
              {"thresholds_db", spec.thresholds_db},
              {"iterations", spec.iterations},
              {"realizations", spec.realizations},
              {"master_seed", spec.master_seed},
              {"methods", methods},
              {"tol_h_m", spec.tol_h_m}};
}

// One labelled curve cell: a threshold sweep for a concrete configuration
// (or a height sweep for the height studies).
struct CurveRecord {
  std::string label;
  double sweep_value = 0.0; // CSV sweep_value for threshold-sweep curves
  CoverageCurve curve;
  json overrides;
};

struct StudyContext {
  const StudySpec& spec;
  fs::path out_dir;
  ChannelDiags diags;
  std::vector<CurveRecord> records;
  std::vector<std::string> files;
  std::vector<std::string> notes;
  std::vector<double> guides; // vertical guide lines for the plot
};

bool is_threshold_sweep(const CoverageCurve& curve) {
  return curve.sweep_variable == "threshold_db";
}

std::vector<CurveRow> rows_from_records(const std::vector<CurveRecord>& records) {
  std::vector<CurveRow> rows;
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < rec.curve.sweep_values.size(); ++i) {
      CurveRow row;
      if (is_threshold_sweep(rec.curve)) {
        row.sweep_value = rec.sweep_value;
        row.threshold_db = rec.curve.sweep_values[i];
      } else {
        row.sweep_value = rec.curve.sweep_values[i];
        row.threshold_db = rec.curve.threshold_db;
      }
      row.p_cov = rec.curve.p_cov[i];
      row.method = rec.curve.method;
      row.ci_halfwidth = rec.curve.ci_halfwidth[i];
      rows.push_back(row);
    }
  }
  return rows;
}

json record_to_json(const CurveRecord& rec) {
  json j{{"label", rec.label},
         {"method", to_string(rec.curve.method)},
         {"sweep_variable", rec.curve.sweep_variable},
         {"sweep_values", rec.curve.sweep_values},
         {"p_cov", rec.curve.p_cov},
         {"ci_halfwidth", rec.curve.ci_halfwidth},
         {"std_error", rec.curve.std_error},
         {"overrides", rec.overrides}};
  if (!is_threshold_sweep(rec.curve)) {
    j["threshold_db"] = rec.curve.threshold_db;
  }
  return j;
}

void write_records_csv(StudyContext& ctx, const std::string& name,
                       const std::vector<CurveRecord>& records) {
  const fs::path path = ctx.out_dir / name;
  write_curve_rows_csv(path.string(), rows_from_records(records));
  ctx.files.push_back(path.string());
}

void write_records_json(StudyContext& ctx, const std::string& name) {
  json curves = json::array();
  for (const auto& rec : ctx.records) {
    curves.push_back(record_to_json(rec));
  }
  const json doc{{"study", to_string(ctx.spec.study)},
                 {"version", kVersion},
                 {"curves", curves}};
  const fs::path path = ctx.out_dir / name;
  auto out = open_out(path);
  out << doc.dump(2) << "\n";
  ctx.files.push_back(path.string());
}

void plot_records(StudyContext& ctx, const std::string& name,
                  const std::string& title,
                  const std::vector<CurveRecord>& records) {
  if (!ctx.spec.plots) {
    return;
  }
  std::vector<PlotSeries> series;
  std::string x_label = "SINR threshold T (dB)";
  for (const auto& rec : records) {
    PlotSeries s;
    s.label = rec.label + " [" + to_string(rec.curve.method) + "]";
    s.x = rec.curve.sweep_values;
    s.y = rec.curve.p_cov;
    if (!is_threshold_sweep(rec.curve)) {
      x_label = rec.curve.sweep_variable == "user_height_m"
                    ? "user height h (m)"
                    : rec.curve.sweep_variable;
    }
    series.push_back(std::move(s));
  }
  const fs::path path = ctx.out_dir / name;
  emit_plot_svg(path.string(), title, x_label, "coverage probability",
                series, ctx.guides);
  ctx.files.push_back(path.string());
}

CoverageCurve run_method(const SystemConfig& config, Method method,
                         const StudySpec& spec, ChannelDiags* diags) {
  switch (method) {
    case Method::monte_carlo:
      return mc_coverage_curve(config, spec.thresholds_db, spec.iterations,
                               spec.master_seed, diags);
    case Method::analytic_conditional:
      return analytic_conditional_curve(config, spec.thresholds_db,
                                        spec.realizations, spec.master_seed,
                                        diags);
    case Method::analytic_sum:
      return analytic_sum_curve(config, spec.thresholds_db, spec.realizations,
                                spec.master_seed, diags);
    case Method::rayleigh_closed_form:
      return rayleigh_closed_form_curve(config, spec.thresholds_db,
                                        spec.realizations, spec.master_seed,
                                        diags);
  }
  throw ConfigError("unhandled method");
}

void run_cell(StudyContext& ctx, const SystemConfig& config,
              const std::string& label, double sweep_value,
              const json& overrides) {
  for (Method method : ctx.spec.methods) {
    if (method == Method::rayleigh_closed_form && config.nakagami_m != 1) {
      ctx.notes.push_back("skipped rayleigh_closed_form for " + label +
                          " (nakagami_m != 1)");
      continue;
    }
    CurveRecord rec;
    rec.label = label;
    rec.sweep_value = sweep_value;
    rec.curve = run_method(config, method, ctx.spec, &ctx.diags);
    rec.overrides = overrides;
    if (!is_monotone_non_increasing(rec.curve.p_cov, 1e-12)) {
      ctx.notes.push_back("curve " + label + " [" +
                          to_string(rec.curve.method) +
                          "] is not monotone non-increasing in T");
    }
    ctx.records.push_back(std::move(rec));
  }
}

void run_validation(StudyContext& ctx) {
  const StudySpec& spec = ctx.spec;
  std::vector<double> heights = {1.5, 50.0, 75.0, 100.0};
  std::vector<double> elements = {16.0, 32.0, 64.0};
  if (spec.sweep.variable == "user_height_m" && !spec.sweep.values.empty()) {
    heights = spec.sweep.values;
  } else if (spec.sweep.variable == "num_elements" &&
             !spec.sweep.values.empty()) {
    elements = spec.sweep.values;
  }

  std::vector<CurveRecord> height_group;
  for (double h : heights) {
    SystemConfig config = spec.base_config;
    config.user_height_m = h;
    const std::size_t before = ctx.records.size();
    run_cell(ctx, config, "h=" + num(h, "%g") + " m", h,
             json{{"user_height_m", h}});
    for (std::size_t i = before; i < ctx.records.size(); ++i) {
      height_group.push_back(ctx.records[i]);
    }
  }
  write_records_csv(ctx, "validation_heights_curves.csv", height_group);
  plot_records(ctx, "validation_heights.svg",
               "Coverage probability vs threshold, user heights", height_group);

  const double aue_height =
      spec.has_explicit("config.user_height_m") ? spec.base_config.user_height_m
                                                : 100.0;
  std::vector<CurveRecord> element_group;
  for (double n : elements) {
    SystemConfig config = spec.base_config;
    config.user_height_m = aue_height;
    apply_sweep_value(config, "num_elements", n);
    const std::size_t before = ctx.records.size();
    run_cell(ctx, config,
             "N=" + num(n, "%g") + ", h=" + num(aue_height, "%g") + " m", n,
             json{{"num_elements", n}, {"user_height_m", aue_height}});
    for (std::size_t i = before; i < ctx.records.size(); ++i) {
      element_group.push_back(ctx.records[i]);
    }
  }
  write_records_csv(ctx, "validation_elements_curves.csv", element_group);
  plot_records(ctx, "validation_elements.svg",
               "Coverage probability vs threshold, element counts",
               element_group);
}

std::vector<double> secondary_heights(const StudyContext& ctx) {
  const StudySpec& spec = ctx.spec;
  if (spec.sweep.variable == "user_height_m") {
    return {}; // height is the sweep itself
  }
  if (spec.has_explicit("config.user_height_m")) {
    return {spec.base_config.user_height_m};
  }
  switch (spec.study) {
    case Study::element_sweep: return {100.0};
    case Study::fading_sweep: return {1.5};
    case Study::tilt_sweep: return {1.5, 50.0, 100.0};
    case Study::frequency_sweep: return {1.5, 100.0};
    default: return {spec.base_config.user_height_m};
  }
}

// Absolute coverage change (percentage points) between the lowest and
// highest tilt, per height and method, at every threshold.
void write_tilt_deltas(StudyContext& ctx);

void run_generic_sweep(StudyContext& ctx) {
  const StudySpec& spec = ctx.spec;
  if (spec.sweep.variable.empty() || spec.sweep.values.empty()) {
    throw ConfigError("study " + to_string(spec.study) + " requires a sweep");
  }
  const std::vector<double> heights = secondary_heights(ctx);
  for (double value : spec.sweep.values) {
    if (heights.empty()) {
      SystemConfig config = spec.base_config;
      apply_sweep_value(config, spec.sweep.variable, value);
      run_cell(ctx, config, spec.sweep.variable + "=" + num(value, "%g"), value,
               json{{spec.sweep.variable, value}});
      continue;
    }
    for (double h : heights) {
      SystemConfig config = spec.base_config;
      config.user_height_m = h;
      apply_sweep_value(config, spec.sweep.variable, value);
      std::string label = spec.sweep.variable + "=" + num(value, "%g") +
                          ", h=" + num(h, "%g") + " m";
      run_cell(ctx, config, label, value,
               json{{spec.sweep.variable, value}, {"user_height_m", h}});
    }
  }
  const std::string study_name = to_string(spec.study);
  write_records_csv(ctx, study_name + "_curves.csv", ctx.records);
  plot_records(ctx, study_name + ".svg",
               "Coverage probability vs threshold (" + study_name + ")",
               ctx.records);

  if (spec.study == Study::tilt_sweep && spec.sweep.values.size() >= 2) {
    write_tilt_deltas(ctx);
  }
}

void run_height_sweep(StudyContext& ctx) {
  const StudySpec& spec = ctx.spec;
  if (spec.sweep.variable != "user_height_m") {
    throw ConfigError("height_sweep requires sweep variable user_height_m");
  }
  CriticalHeightOptions options;
  options.realizations = spec.realizations;
  options.master_seed = spec.master_seed;
  options.mc_iterations = spec.iterations;

  for (Method method : spec.methods) {
    if (method != Method::analytic_conditional &&
        method != Method::monte_carlo) {
      ctx.notes.push_back("height_sweep supports monte_carlo and "
                          "analytic_conditional; skipped " +
                          to_string(method));
      continue;
    }
    options.method = method;
    const std::vector<CoverageCurve> curves = coverage_vs_height_multi(
        spec.base_config, spec.thresholds_db, spec.sweep.values, options);
    for (const auto& curve : curves) {
      CurveRecord rec;
      rec.label = "T=" + num(curve.threshold_db, "%g") + " dB";
      rec.sweep_value = curve.threshold_db;
      rec.curve = curve;
      rec.overrides = json{{"threshold_db", curve.threshold_db}};
      ctx.records.push_back(std::move(rec));
    }
  }
  if (!ctx.records.empty()) {
    for (const auto& peak : detect_peaks(ctx.records.front().curve, 0.005)) {
      ctx.guides.push_back(peak.height_m);
    }
  }
  write_records_csv(ctx, "height_sweep_curves.csv", ctx.records);
  plot_records(ctx, "height_sweep.svg", "Coverage probability vs user height",
               ctx.records);
}

void run_critical_height(StudyContext& ctx) {
  const StudySpec& spec = ctx.spec;
  CriticalHeightOptions options;
  options.realizations = spec.realizations;
  options.master_seed = spec.master_seed;
  options.mc_iterations = spec.iterations;
  options.tol_h_m = spec.tol_h_m;
  options.method = Method::analytic_conditional;
  for (Method m : spec.methods) {
    if (m == Method::monte_carlo) {
      options.method = Method::monte_carlo;
    }
  }
  // analytic_conditional wins if both are listed: the solver needs the
  // smooth evaluator for bisection
  for (Method m : spec.methods) {
    if (m == Method::analytic_conditional) {
      options.method = Method::analytic_conditional;
    }
  }

  json results = json::array();
  for (double t_db : spec.thresholds_db) {
    const CriticalHeightResult res =
        find_critical_height(spec.base_config, t_db, options);
    json peaks = json::array();
    for (const auto& peak : res.peaks) {
      peaks.push_back(json{{"height_m", peak.height_m}, {"p_cov", peak.p_cov}});
      ctx.guides.push_back(peak.height_m);
    }
    results.push_back(json{{"threshold_db", res.threshold_db},
                           {"h_c_m", res.h_c_m},
                           {"reached", res.reached},
                           {"p_cov_ground", res.p_cov_ground},
                           {"bracket_m", json::array({res.bracket_m.first,
                                                      res.bracket_m.second})},
                           {"peaks", peaks},
                           {"method", to_string(res.method)},
                           {"curve", json{{"heights_m", res.curve.sweep_values},
                                          {"p_cov", res.curve.p_cov},
                                          {"std_error", res.curve.std_error}}}});
    CurveRecord rec;
    rec.label = "T=" + num(t_db, "%g") + " dB";
    rec.sweep_value = t_db;
    rec.curve = res.curve;
    rec.overrides = json{{"threshold_db", t_db}};
    ctx.records.push_back(std::move(rec));
  }

  const fs::path result_path = ctx.out_dir / "critical_height.json";
  auto out = open_out(result_path);
  out << json{{"study", "critical_height"},
              {"version", kVersion},
              {"results", results}}
             .dump(2)
      << "\n";
  ctx.files.push_back(result_path.string());

  write_records_csv(ctx, "critical_height_curve.csv", ctx.records);
  plot_records(ctx, "critical_height.svg",
               "Coverage probability vs user height", ctx.records);
}

void write_tilt_deltas(StudyContext& ctx) {
  const StudySpec& spec = ctx.spec;
  const double tilt_from = spec.sweep.values.front();
  const double tilt_to = spec.sweep.values.back();
  json deltas = json::array();
  for (const auto& rec_to : ctx.records) {
    if (rec_to.sweep_value != tilt_to) {
      continue;
    }
    for (const auto& rec_from : ctx.records) {
      if (rec_from.sweep_value != tilt_from ||
          rec_from.curve.method != rec_to.curve.method ||
          rec_from.overrides.value("user_height_m", -1.0) !=
              rec_to.overrides.value("user_height_m", -1.0)) {
        continue;
      }
      json per_threshold = json::array();
      for (std::size_t i = 0; i < rec_to.curve.sweep_values.size(); ++i) {
        per_threshold.push_back(
            json{{"threshold_db", rec_to.curve.sweep_values[i]},
                 {"delta_points",
                  100.0 * (rec_to.curve.p_cov[i] - rec_from.curve.p_cov[i])}});
      }
      deltas.push_back(
          json{{"user_height_m", rec_to.overrides.value("user_height_m", -1.0)},
               {"method", to_string(rec_to.curve.method)},
               {"tilt_from_deg", tilt_from},
               {"tilt_to_deg", tilt_to},
               {"delta", per_threshold}});
    }
  }
  const fs::path path = ctx.out_dir / "tilt_deltas.json";
  auto out = open_out(path);
  out << json{{"study", "tilt_sweep"}, {"deltas", deltas}}.dump(2) << "\n";
  ctx.files.push_back(path.string());
}

} // namespace

void write_curve_rows_csv(const std::string& path,
                          const std::vector<CurveRow>& rows) {
  auto out = open_out(path);
  out << "sweep_value,T_db,p_cov,method,ci_halfwidth\n";
  for (const auto& row : rows) {
    out << num(row.sweep_value) << "," << num(row.threshold_db) << ","
        << num(row.p_cov) << "," << to_string(row.method) << ","
        << num(row.ci_halfwidth) << "\n";
  }
  if (!out) {
    throw IoError("failed writing CSV: " + path);
  }
}

void write_golden_channel_table(const std::string& path) {
  auto out = open_out(path);
  out << "r,h,f_c,pl_los,pl_nlos,p_los\n";
  const std::vector<double> radii = {1,   5,    10,   18,   36,   50,  100,
                                     220, 500,  1000, 2000, 2500, 3000, 5000};
  const std::vector<double> heights = {1.5, 10,  15,  22.5, 30, 50,
                                       75,  100, 150, 300};
  const std::vector<double> carriers = {5.0, 28.0};
  SystemConfig config;
  for (double f : carriers) {
    config.carrier_ghz = f;
    for (double h : heights) {
      config.user_height_m = h;
      for (double r : radii) {
        out << num(r) << "," << num(h) << "," << num(f) << ","
            << num(pathloss_los_db(r, h, config)) << ","
            << num(pathloss_nlos_db(r, h, config)) << ","
            << num(los_probability(r, h, config)) << "\n";
      }
    }
  }
  if (!out) {
    throw IoError("failed writing golden table: " + path);
  }
}

void write_pattern_cut_csv(const std::string& path, const SystemConfig& config,
                           double theta_step_deg) {
  if (!(theta_step_deg > 0.0)) {
    throw ConfigError("theta_step_deg must be > 0");
  }
  auto out = open_out(path);
  out << "theta_deg,element_dbi,array_factor_db,composite_dbi\n";
  for (double theta = 0.0; theta <= 180.0 + 1e-9; theta += theta_step_deg) {
    const double t = std::min(theta, 180.0);
    out << num(t) << "," << num(element_pattern_dbi(0.0, t, config.antenna))
        << "," << num(array_factor_db(0.0, t, config.tilt_deg, config.antenna))
        << ","
        << num(composite_gain_dbi(0.0, t, config.tilt_deg, config.antenna))
        << "\n";
  }
  if (!out) {
    throw IoError("failed writing pattern cut: " + path);
  }
}

StudyOutputs run_study(const StudySpec& spec) {
  spec.base_config.validate();
  if (spec.realizations == 0) {
    throw ConfigError("realizations must be >= 1");
  }
  for (Method m : spec.methods) {
    if (m == Method::monte_carlo && spec.iterations < 100) {
      throw ConfigError(
          "iterations must be >= 100 for Monte-Carlo studies, got " +
          std::to_string(spec.iterations));
    }
  }
  const auto start = std::chrono::steady_clock::now();

  StudyContext ctx{spec, fs::path(spec.output_dir)};
  ensure_dir(ctx.out_dir);

  switch (spec.study) {
    case Study::validation:
      run_validation(ctx);
      break;
    case Study::height_sweep:
      run_height_sweep(ctx);
      break;
    case Study::critical_height:
      run_critical_height(ctx);
      break;
    case Study::element_sweep:
    case Study::fading_sweep:
    case Study::tilt_sweep:
    case Study::frequency_sweep:
      run_generic_sweep(ctx);
      break;
  }

  write_records_json(ctx, to_string(spec.study) + "_curves.json");

  const double runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const ChannelDiagsSnapshot diags = snapshot(ctx.diags);
  const json spec_json = spec_to_json(spec);
  json manifest{{"study", to_string(spec.study)},
                {"version", kVersion},
                {"spec", spec_json},
                {"config_hash", hex64(fnv1a64(spec_json.dump()))},
                {"runtime_seconds", runtime_s},
                {"channel_diagnostics",
                 json{{"below_min_2d", diags.below_min_2d},
                      {"beyond_range_2d", diags.beyond_range_2d},
                      {"plos_clamped", diags.plos_clamped},
                      {"nlos_below_los", diags.nlos_below_los}}},
                {"notes", ctx.notes},
                {"outputs", ctx.files}};
  const fs::path manifest_path = ctx.out_dir / "manifest.json";
  auto out = open_out(manifest_path);
  out << manifest.dump(2) << "\n";
  ctx.files.push_back(manifest_path.string());

  return StudyOutputs{ctx.files};
}

} // namespace aerocov
