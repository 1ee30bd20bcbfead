#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "aerocov/errors.hpp"
#include "aerocov/experiments.hpp"

using namespace aerocov;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("aerocov_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

StudySpec tiny_validation_spec(const fs::path& out) {
  StudySpec spec = parse_config_text("{}");
  spec.iterations = 120;
  spec.realizations = 30;
  spec.thresholds_db = {0.0, 10.0};
  spec.output_dir = out.string();
  return spec;
}

} // namespace

TEST_CASE("empty config yields the full default spec") {
  const StudySpec spec = parse_config_text("");
  CHECK(spec.study == Study::validation);
  CHECK(spec.base_config.carrier_ghz == 28.0);
  CHECK(spec.base_config.num_elements() == 16);
  CHECK(spec.base_config.tilt_deg == 5.0);
  CHECK(spec.base_config.nakagami_m == 1);
  CHECK(spec.base_config.bs_density_per_km2 == 5.0);
  CHECK(spec.base_config.tx_power_dbm == 25.0);
  CHECK(spec.base_config.noise_dbm == -95.0);
  CHECK(spec.base_config.bs_height_m == 25.0);
  CHECK(spec.iterations == 10000);
  CHECK(spec.realizations == 1000);
  CHECK(spec.thresholds_db.size() == 13);
  REQUIRE(spec.methods.size() == 2);
  CHECK(spec.methods[0] == Method::monte_carlo);
  CHECK(spec.methods[1] == Method::analytic_conditional);
}

TEST_CASE("user heights outside [1.5, 300] are rejected") {
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"config":{"user_height_m":400}})"),
      doctest::Contains("user_height_m"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"config":{"user_height_m":1.0}})"),
                  ConfigError);
}

TEST_CASE("unknown keys are rejected with their name echoed") {
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"config":{"bandwidth":20}})"),
                       doctest::Contains("bandwidth"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"frobnicate":1})"),
                       doctest::Contains("frobnicate"), ConfigError);
}

TEST_CASE("sweep variables must name a config field") {
  CHECK_THROWS_WITH_AS(
      parse_config_text(
          R"({"sweep":{"variable":"bandwidth","values":[1,2]}})"),
      doctest::Contains("bandwidth"), ConfigError);
  const StudySpec ok = parse_config_text(
      R"({"sweep":{"variable":"num_elements","values":[8,16]}})");
  CHECK(ok.sweep.values.size() == 2);
}

TEST_CASE("Monte-Carlo studies require at least 100 iterations") {
  CHECK_THROWS_AS(parse_config_text(R"({"iterations":50})"), ConfigError);
  const StudySpec analytic_only = parse_config_text(
      R"({"iterations":50,"methods":["analytic_conditional"]})");
  CHECK(analytic_only.iterations == 50);
}

TEST_CASE("malformed values are rejected") {
  CHECK_THROWS_AS(parse_config_text(R"({"config":{"nakagami_m":2.5}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"config":{"azimuth_mode":"spiral"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"study":"sideways"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"([1,2,3])"), ConfigError);
}

TEST_CASE("defaults re-resolve when the CLI retargets the study") {
  const StudySpec base = parse_config_text("{}");
  const StudySpec ch = retarget_study(base, Study::critical_height);
  CHECK(ch.study == Study::critical_height);
  REQUIRE(ch.thresholds_db.size() == 2);
  CHECK(ch.thresholds_db[0] == 5.0);
  CHECK(ch.thresholds_db[1] == 10.0);
  REQUIRE(ch.methods.size() == 1);
  CHECK(ch.methods[0] == Method::analytic_conditional);

  const StudySpec pinned =
      parse_config_text(R"({"thresholds_db":[7.5],"methods":["monte_carlo"]})");
  const StudySpec kept = retarget_study(pinned, Study::critical_height);
  REQUIRE(kept.thresholds_db.size() == 1);
  CHECK(kept.thresholds_db[0] == 7.5);
  CHECK(kept.methods[0] == Method::monte_carlo);
}

TEST_CASE("run_study writes curves, plots and a manifest; CSV is reproducible") {
  const fs::path out_a = fresh_dir("validation_a");
  const fs::path out_b = fresh_dir("validation_b");
  StudySpec spec = tiny_validation_spec(out_a);

  const StudyOutputs outputs = run_study(spec);
  for (const std::string& f : outputs.files) {
    CHECK(fs::exists(f));
  }
  const std::string heights_csv = read_file(out_a / "validation_heights_curves.csv");
  CHECK(heights_csv.rfind("sweep_value,T_db,p_cov,method,ci_halfwidth\n", 0) == 0);
  // 4 heights x 2 thresholds x 2 methods rows + header
  CHECK(std::count(heights_csv.begin(), heights_csv.end(), '\n') == 17);
  CHECK(fs::exists(out_a / "validation_heights.svg"));
  CHECK(fs::exists(out_a / "validation_elements.svg"));

  const nlohmann::json manifest =
      nlohmann::json::parse(read_file(out_a / "manifest.json"));
  CHECK(manifest.contains("config_hash"));
  CHECK(manifest.contains("version"));
  CHECK(manifest["spec"]["master_seed"] == 1);
  CHECK(manifest.contains("channel_diagnostics"));

  StudySpec spec_b = spec;
  spec_b.output_dir = out_b.string();
  run_study(spec_b);
  CHECK(read_file(out_b / "validation_heights_curves.csv") == heights_csv);
  CHECK(read_file(out_b / "validation_elements_curves.csv") ==
        read_file(out_a / "validation_elements_curves.csv"));
  CHECK(read_file(out_b / "validation_heights.svg") ==
        read_file(out_a / "validation_heights.svg"));
}

TEST_CASE("generic sweep studies cover the secondary heights") {
  const fs::path out = fresh_dir("tilt");
  StudySpec spec = parse_config_text(
      R"({"study":"tilt_sweep","methods":["analytic_conditional"],
          "realizations":20,"thresholds_db":[10.0]})");
  spec.output_dir = out.string();
  spec.plots = false;
  run_study(spec);
  const std::string csv = read_file(out / "tilt_sweep_curves.csv");
  // 3 tilts x 3 heights x 1 threshold + header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  const nlohmann::json deltas =
      nlohmann::json::parse(read_file(out / "tilt_deltas.json"));
  CHECK(deltas["deltas"].size() == 3);
}

TEST_CASE("critical-height study emits the result document") {
  const fs::path out = fresh_dir("ch");
  StudySpec spec = parse_config_text(
      R"({"study":"critical_height","realizations":25,"thresholds_db":[100.0],
          "config":{"region_radius_m":1200,"carrier_ghz":5}})");
  spec.output_dir = out.string();
  run_study(spec);
  CHECK(fs::exists(out / "critical_height.svg"));
  const nlohmann::json doc =
      nlohmann::json::parse(read_file(out / "critical_height.json"));
  REQUIRE(doc["results"].size() == 1);
  CHECK(doc["results"][0]["reached"] == false);
  CHECK(doc["results"][0]["h_c_m"] == 300.0);
  CHECK(doc["results"][0]["curve"]["heights_m"].size() ==
        doc["results"][0]["curve"]["p_cov"].size());
  CHECK(doc["results"][0]["curve"]["p_cov"].size() > 200);
  CHECK(fs::exists(out / "critical_height_curve.csv"));
}

TEST_CASE("plot output is deterministic and supports single points") {
  const fs::path out = fresh_dir("plots");
  const std::vector<PlotSeries> series = {
      {"single", {3.0}, {0.5}},
      {"line", {0.0, 1.0, 2.0}, {0.1, 0.4, 0.2}},
  };
  emit_plot_svg((out / "a.svg").string(), "t", "x", "y", series, {1.5});
  emit_plot_svg((out / "b.svg").string(), "t", "x", "y", series, {1.5});
  const std::string a = read_file(out / "a.svg");
  CHECK(a == read_file(out / "b.svg"));
  CHECK(a.find("<circle") != std::string::npos);
  CHECK(a.find("single") != std::string::npos);

  CHECK_THROWS_AS(
      emit_plot_svg((out / "c.svg").string(), "t", "x", "y", {}, {}),
      ConfigError);
}

TEST_CASE("golden channel table and pattern cut exports") {
  const fs::path out = fresh_dir("exports");
  const fs::path golden = out / "goldens.csv";
  write_golden_channel_table(golden.string());
  const std::string table = read_file(golden);
  CHECK(table.rfind("r,h,f_c,pl_los,pl_nlos,p_los\n", 0) == 0);
  // 14 radii x 10 heights x 2 carriers rows + header
  CHECK(std::count(table.begin(), table.end(), '\n') == 281);

  const fs::path cut = out / "cut.csv";
  SystemConfig config;
  write_pattern_cut_csv(cut.string(), config, 0.25);
  const std::string cut_text = read_file(cut);
  CHECK(cut_text.rfind("theta_deg,element_dbi,array_factor_db,composite_dbi\n",
                       0) == 0);
  CHECK(std::count(cut_text.begin(), cut_text.end(), '\n') == 722);
}

TEST_CASE("unwritable output paths raise IoError") {
  StudySpec spec = tiny_validation_spec("/proc/aerocov_nope/out");
  CHECK_THROWS_AS(run_study(spec), IoError);
}
