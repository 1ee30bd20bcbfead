#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aerocov/errors.hpp"
#include "aerocov/experiments.hpp"

namespace aerocov {

namespace {

using nlohmann::json;

const std::vector<std::string>& study_names() {
  static const std::vector<std::string> names = {
      "validation",  "element_sweep",   "height_sweep",   "fading_sweep",
      "tilt_sweep",  "frequency_sweep", "critical_height"};
  return names;
}

void reject_unknown_keys(const json& object, const std::string& context,
                         const std::vector<std::string>& allowed) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const auto& key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key \"" + item.key() + "\" in " + context);
    }
  }
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) {
    throw ConfigError("field \"" + field + "\" must be a number");
  }
  return j.get<double>();
}

int as_int(const json& j, const std::string& field) {
  const double v = as_number(j, field);
  if (std::floor(v) != v) {
    throw ConfigError("field \"" + field + "\" must be an integer");
  }
  return static_cast<int>(v);
}

std::uint64_t as_uint(const json& j, const std::string& field) {
  const double v = as_number(j, field);
  if (v < 0 || std::floor(v) != v) {
    throw ConfigError("field \"" + field + "\" must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

std::string as_string(const json& j, const std::string& field) {
  if (!j.is_string()) {
    throw ConfigError("field \"" + field + "\" must be a string");
  }
  return j.get<std::string>();
}

std::vector<double> as_number_list(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("field \"" + field + "\" must be a non-empty array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    out.push_back(as_number(v, field));
  }
  return out;
}

void parse_antenna(const json& j, AntennaConfig& antenna,
                   std::set<std::string>& explicit_keys) {
  reject_unknown_keys(
      j, "config.antenna",
      {"phi_3db_deg", "theta_3db_deg", "front_to_back_db", "sla_v_db",
       "max_element_gain_dbi", "correlation", "element_spacing_wavelengths",
       "steering", "combined_clamp", "steering_azimuth_deg",
       "num_elements_h"});
  for (const auto& item : j.items()) {
    const std::string key = "config.antenna." + item.key();
    explicit_keys.insert(key);
    const json& v = item.value();
    if (item.key() == "phi_3db_deg") antenna.phi_3db_deg = as_number(v, key);
    else if (item.key() == "theta_3db_deg") antenna.theta_3db_deg = as_number(v, key);
    else if (item.key() == "front_to_back_db") antenna.front_to_back_db = as_number(v, key);
    else if (item.key() == "sla_v_db") antenna.sla_v_db = as_number(v, key);
    else if (item.key() == "max_element_gain_dbi") antenna.max_element_gain_dbi = as_number(v, key);
    else if (item.key() == "correlation") antenna.correlation = as_number(v, key);
    else if (item.key() == "element_spacing_wavelengths") antenna.element_spacing_wavelengths = as_number(v, key);
    else if (item.key() == "steering") antenna.steering = steering_mode_from_string(as_string(v, key));
    else if (item.key() == "combined_clamp") {
      const std::string mode = as_string(v, key);
      if (mode == "front_to_back") antenna.combined_clamp = CombinedClamp::front_to_back;
      else if (mode == "side_lobe_limit") antenna.combined_clamp = CombinedClamp::side_lobe_limit;
      else throw ConfigError("unknown combined_clamp \"" + mode + "\"");
    } else if (item.key() == "steering_azimuth_deg") antenna.steering_azimuth_deg = as_number(v, key);
    else if (item.key() == "num_elements_h") antenna.num_elements_h = as_int(v, key);
  }
}

void parse_system_config(const json& j, SystemConfig& config,
                         std::set<std::string>& explicit_keys) {
  reject_unknown_keys(
      j, "config",
      {"lambda_b_per_km2", "bs_height_m", "user_height_m", "tx_power_dbm",
       "noise_dbm", "carrier_ghz", "region_radius_m", "num_elements",
       "tilt_deg", "nakagami_m", "azimuth_mode", "mix_scale", "antenna"});
  for (const auto& item : j.items()) {
    const std::string key = "config." + item.key();
    const json& v = item.value();
    if (item.key() == "antenna") {
      if (!v.is_object()) {
        throw ConfigError("config.antenna must be an object");
      }
      parse_antenna(v, config.antenna, explicit_keys);
      continue;
    }
    explicit_keys.insert(key);
    if (item.key() == "lambda_b_per_km2") config.bs_density_per_km2 = as_number(v, key);
    else if (item.key() == "bs_height_m") config.bs_height_m = as_number(v, key);
    else if (item.key() == "user_height_m") config.user_height_m = as_number(v, key);
    else if (item.key() == "tx_power_dbm") config.tx_power_dbm = as_number(v, key);
    else if (item.key() == "noise_dbm") config.noise_dbm = as_number(v, key);
    else if (item.key() == "carrier_ghz") config.carrier_ghz = as_number(v, key);
    else if (item.key() == "region_radius_m") config.region_radius_m = as_number(v, key);
    else if (item.key() == "num_elements") config.antenna.num_elements_v = as_int(v, key);
    else if (item.key() == "tilt_deg") config.tilt_deg = as_number(v, key);
    else if (item.key() == "nakagami_m") config.nakagami_m = as_int(v, key);
    else if (item.key() == "azimuth_mode") config.azimuth_mode = azimuth_mode_from_string(as_string(v, key));
    else if (item.key() == "mix_scale") config.mix_scale = mix_scale_from_string(as_string(v, key));
  }
}

std::vector<double> default_thresholds(Study study) {
  if (study == Study::height_sweep || study == Study::critical_height) {
    return {5.0, 10.0};
  }
  std::vector<double> t;
  for (double v = -10.0; v <= 20.0 + 1e-9; v += 2.5) {
    t.push_back(v);
  }
  return t;
}

std::vector<Method> default_methods(Study study) {
  switch (study) {
    case Study::validation:
    case Study::element_sweep:
      return {Method::monte_carlo, Method::analytic_conditional};
    default:
      return {Method::analytic_conditional};
  }
}

SweepSpec default_sweep(Study study) {
  switch (study) {
    case Study::element_sweep:
      return {"num_elements", {16.0, 32.0, 64.0}};
    case Study::height_sweep: {
      SweepSpec sweep{"user_height_m", {}};
      for (double h = 1.5; h < 300.0 - 1e-9; h += 1.0) {
        sweep.values.push_back(h);
      }
      sweep.values.push_back(300.0);
      return sweep;
    }
    case Study::fading_sweep:
      return {"nakagami_m", {1.0, 2.0, 4.0}};
    case Study::tilt_sweep:
      return {"tilt_deg", {5.0, 10.0, 15.0}};
    case Study::frequency_sweep:
      return {"carrier_ghz", {5.0, 28.0}};
    case Study::validation:
    case Study::critical_height:
      return {"", {}};
  }
  return {"", {}};
}

} // namespace

std::string to_string(Study study) {
  return study_names()[static_cast<std::size_t>(study)];
}

Study study_from_string(const std::string& s) {
  const auto& names = study_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == s) {
      return static_cast<Study>(i);
    }
  }
  std::string expected;
  for (const auto& n : names) {
    expected += expected.empty() ? n : "|" + n;
  }
  throw ConfigError("unknown study \"" + s + "\" (expected " + expected + ")");
}

std::vector<std::string> sweepable_variables() {
  return {"user_height_m", "num_elements",     "tilt_deg",
          "carrier_ghz",   "nakagami_m",       "lambda_b_per_km2",
          "tx_power_dbm",  "noise_dbm",        "bs_height_m",
          "region_radius_m"};
}

void apply_sweep_value(SystemConfig& config, const std::string& variable,
                       double value) {
  auto as_integer = [&](const char* what) {
    if (std::floor(value) != value) {
      throw ConfigError(std::string("sweep value for ") + what +
                        " must be an integer");
    }
    return static_cast<int>(value);
  };
  if (variable == "user_height_m") config.user_height_m = value;
  else if (variable == "num_elements") config.antenna.num_elements_v = as_integer("num_elements");
  else if (variable == "tilt_deg") config.tilt_deg = value;
  else if (variable == "carrier_ghz") config.carrier_ghz = value;
  else if (variable == "nakagami_m") config.nakagami_m = as_integer("nakagami_m");
  else if (variable == "lambda_b_per_km2") config.bs_density_per_km2 = value;
  else if (variable == "tx_power_dbm") config.tx_power_dbm = value;
  else if (variable == "noise_dbm") config.noise_dbm = value;
  else if (variable == "bs_height_m") config.bs_height_m = value;
  else if (variable == "region_radius_m") config.region_radius_m = value;
  else {
    std::string expected;
    for (const auto& v : sweepable_variables()) {
      expected += expected.empty() ? v : ", " + v;
    }
    throw ConfigError("unknown sweep variable \"" + variable +
                      "\" (expected one of: " + expected + ")");
  }
}

StudySpec parse_config_text(const std::string& text) {
  StudySpec spec;

  std::string stripped = text;
  const auto first = stripped.find_first_not_of(" \t\r\n");
  json root = json::object();
  if (first != std::string::npos) {
    try {
      root = json::parse(stripped);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!root.is_object()) {
      throw ConfigError("config root must be a JSON object");
    }
  }

  reject_unknown_keys(root, "config file",
                      {"study", "config", "sweep", "thresholds_db",
                       "iterations", "realizations", "master_seed",
                       "output_dir", "methods", "plots", "tol_h_m"});

  if (root.contains("study")) {
    spec.study = study_from_string(as_string(root["study"], "study"));
    spec.explicit_keys.insert("study");
  }
  if (root.contains("config")) {
    if (!root["config"].is_object()) {
      throw ConfigError("\"config\" must be an object");
    }
    parse_system_config(root["config"], spec.base_config, spec.explicit_keys);
  }
  if (root.contains("sweep")) {
    const json& sweep = root["sweep"];
    if (!sweep.is_object()) {
      throw ConfigError("\"sweep\" must be an object");
    }
    reject_unknown_keys(sweep, "sweep", {"variable", "values"});
    if (!sweep.contains("variable") || !sweep.contains("values")) {
      throw ConfigError("sweep requires both \"variable\" and \"values\"");
    }
    spec.sweep.variable = as_string(sweep["variable"], "sweep.variable");
    spec.sweep.values = as_number_list(sweep["values"], "sweep.values");
    spec.explicit_keys.insert("sweep");
    // validate early: the variable must name a SystemConfig field
    SystemConfig probe = spec.base_config;
    apply_sweep_value(probe, spec.sweep.variable, spec.sweep.values.front());
  }
  if (root.contains("thresholds_db")) {
    spec.thresholds_db = as_number_list(root["thresholds_db"], "thresholds_db");
    spec.explicit_keys.insert("thresholds_db");
  }
  if (root.contains("iterations")) {
    spec.iterations = as_uint(root["iterations"], "iterations");
    spec.explicit_keys.insert("iterations");
  }
  if (root.contains("realizations")) {
    spec.realizations = as_uint(root["realizations"], "realizations");
    spec.explicit_keys.insert("realizations");
  }
  if (root.contains("master_seed")) {
    spec.master_seed = as_uint(root["master_seed"], "master_seed");
    spec.explicit_keys.insert("master_seed");
  }
  if (root.contains("output_dir")) {
    spec.output_dir = as_string(root["output_dir"], "output_dir");
    spec.explicit_keys.insert("output_dir");
  }
  if (root.contains("methods")) {
    const json& methods = root["methods"];
    if (!methods.is_array() || methods.empty()) {
      throw ConfigError("\"methods\" must be a non-empty array of strings");
    }
    for (const auto& m : methods) {
      spec.methods.push_back(method_from_string(as_string(m, "methods")));
    }
    spec.explicit_keys.insert("methods");
  }
  if (root.contains("plots")) {
    if (!root["plots"].is_boolean()) {
      throw ConfigError("\"plots\" must be a boolean");
    }
    spec.plots = root["plots"].get<bool>();
    spec.explicit_keys.insert("plots");
  }
  if (root.contains("tol_h_m")) {
    spec.tol_h_m = as_number(root["tol_h_m"], "tol_h_m");
    if (!(spec.tol_h_m > 0.0)) {
      throw ConfigError("tol_h_m must be > 0");
    }
    spec.explicit_keys.insert("tol_h_m");
  }

  // Resolve per-study defaults so the runner sees a complete spec.
  if (spec.thresholds_db.empty()) {
    spec.thresholds_db = default_thresholds(spec.study);
  }
  if (spec.methods.empty()) {
    spec.methods = default_methods(spec.study);
  }
  if (spec.sweep.variable.empty()) {
    spec.sweep = default_sweep(spec.study);
  }

  spec.base_config.validate();
  if (spec.realizations == 0) {
    throw ConfigError("realizations must be >= 1");
  }
  bool uses_mc = false;
  for (Method m : spec.methods) {
    uses_mc = uses_mc || m == Method::monte_carlo;
  }
  if (uses_mc && spec.iterations < 100) {
    throw ConfigError("iterations must be >= 100 for Monte-Carlo studies, got " +
                      std::to_string(spec.iterations));
  }
  return spec;
}

StudySpec load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

StudySpec retarget_study(const StudySpec& spec, Study study) {
  StudySpec out = spec;
  if (out.study == study) {
    return out;
  }
  out.study = study;
  if (!out.has_explicit("thresholds_db")) {
    out.thresholds_db = default_thresholds(study);
  }
  if (!out.has_explicit("methods")) {
    out.methods = default_methods(study);
  }
  if (!out.has_explicit("sweep")) {
    out.sweep = default_sweep(study);
  }
  return out;
}

} // namespace aerocov
