#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aerocov/errors.hpp"
#include "aerocov/experiments.hpp"
#include "aerocov/version.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> iterations;
  std::optional<std::uint64_t> realizations;
  std::string out_dir;
  std::vector<std::string> methods;
  std::vector<double> thresholds;
  bool no_plots = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--iterations", flags.iterations, "Monte-Carlo iterations");
  cmd->add_option("--realizations", flags.realizations,
                  "analytic realizations");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--methods", flags.methods,
                  "methods: monte_carlo, analytic_conditional, analytic_sum, "
                  "rayleigh_closed_form")
      ->delimiter(',');
  cmd->add_option("--thresholds", flags.thresholds, "SINR thresholds in dB")
      ->delimiter(',');
  cmd->add_flag("--no-plots", flags.no_plots, "skip SVG plot output");
}

aerocov::StudySpec build_spec(const CommonFlags& flags,
                              const std::string& study_name) {
  aerocov::StudySpec spec = flags.config_path.empty()
                                ? aerocov::parse_config_text("")
                                : aerocov::load_config(flags.config_path);
  if (!study_name.empty()) {
    // the command line names the study; re-resolve its defaults
    spec = aerocov::retarget_study(spec, aerocov::study_from_string(study_name));
  }
  if (flags.seed) spec.master_seed = *flags.seed;
  if (flags.iterations) spec.iterations = *flags.iterations;
  if (flags.realizations) spec.realizations = *flags.realizations;
  if (!flags.out_dir.empty()) spec.output_dir = flags.out_dir;
  if (!flags.methods.empty()) {
    spec.methods.clear();
    for (const auto& m : flags.methods) {
      spec.methods.push_back(aerocov::method_from_string(m));
    }
  }
  if (!flags.thresholds.empty()) {
    spec.thresholds_db = flags.thresholds;
  }
  if (flags.no_plots) {
    spec.plots = false;
  }
  return spec;
}

int run_and_report(const aerocov::StudySpec& spec) {
  const aerocov::StudyOutputs outputs = aerocov::run_study(spec);
  std::cout << "study " << aerocov::to_string(spec.study) << " complete; "
            << outputs.files.size() << " files:\n";
  for (const auto& f : outputs.files) {
    std::cout << "  " << f << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"aerocov: downlink coverage simulator for ground and aerial "
               "cellular users"};
  app.set_version_flag("--version", aerocov::kVersion);
  app.require_subcommand(1);

  // run <study>
  CLI::App* run_cmd = app.add_subcommand("run", "run a named study");
  std::string study_name;
  run_cmd->add_option("study", study_name, "study name")->required();
  CommonFlags run_flags;
  add_common_flags(run_cmd, run_flags);

  // critical-height
  CLI::App* ch_cmd =
      app.add_subcommand("critical-height", "solve the critical user height");
  CommonFlags ch_flags;
  add_common_flags(ch_cmd, ch_flags);
  double tol_h = 0.25;
  ch_cmd->add_option("--tol", tol_h, "height tolerance in meters");

  // pattern-dump
  CLI::App* pattern_cmd =
      app.add_subcommand("pattern-dump", "export the vertical pattern cut");
  std::string pattern_config;
  std::string pattern_out = "pattern_cut.csv";
  double pattern_step = 0.25;
  pattern_cmd->add_option("--config", pattern_config, "JSON config file");
  pattern_cmd->add_option("--out", pattern_out, "output CSV path");
  pattern_cmd->add_option("--step", pattern_step, "theta step in degrees");

  // goldens
  CLI::App* goldens_cmd =
      app.add_subcommand("goldens", "export the golden channel table");
  std::string goldens_out = "channel_goldens.csv";
  goldens_cmd->add_option("--out", goldens_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(run_cmd)) {
      return run_and_report(build_spec(run_flags, study_name));
    }
    if (app.got_subcommand(ch_cmd)) {
      aerocov::StudySpec spec = build_spec(ch_flags, "critical_height");
      spec.tol_h_m = tol_h;
      return run_and_report(spec);
    }
    if (app.got_subcommand(pattern_cmd)) {
      aerocov::SystemConfig config;
      if (!pattern_config.empty()) {
        config = aerocov::load_config(pattern_config).base_config;
      }
      aerocov::write_pattern_cut_csv(pattern_out, config, pattern_step);
      std::cout << "wrote " << pattern_out << "\n";
      return 0;
    }
    if (app.got_subcommand(goldens_cmd)) {
      aerocov::write_golden_channel_table(goldens_out);
      std::cout << "wrote " << goldens_out << "\n";
      return 0;
    }
  } catch (const aerocov::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const aerocov::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const aerocov::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
