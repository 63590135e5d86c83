#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "dimreader/pipeline.hpp"
#include "dimreader/render.hpp"
#include "dimreader/synthetic.hpp"

using namespace dimreader;

namespace {

std::string temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Small CSV dataset the pipeline tests run on.
std::string write_scurve_csv(const std::string& dir, int n) {
  SyntheticData curve = make_s_curve(n, 5);
  std::string path = dir + "/scurve.csv";
  save_csv(curve.dataset, path);
  return path;
}

}  // namespace

TEST_CASE("run configs parse with defaults and echo back") {
  RunConfig config = RunConfig::from_json_text(R"({
    "input": "foo.csv",
    "method": "isomap",
    "k_neighbors": 7,
    "perturbation": {"axis": "x"},
    "extraction": "one-at-a-time",
    "seed": 42
  })");
  CHECK(config.input_path == "foo.csv");
  CHECK(config.projection.method == ProjectionMethod::kIsomap);
  CHECK(config.projection.k_neighbors == 7);
  CHECK(config.projection.seed == 42);
  CHECK(config.extraction == RunConfig::ExtractionScheme::kOneAtATime);
  CHECK(config.grid_resolution == 10);  // default
  CHECK(config.n_levels == 10);         // default

  // The echo carries every resolved default.
  RunConfig back = RunConfig::from_json_text(config.to_json());
  CHECK(back.grid_resolution == config.grid_resolution);
  CHECK(back.projection.perplexity == config.projection.perplexity);
  CHECK(back.axis_name == "x");
}

TEST_CASE("bad configs are rejected up front") {
  CHECK_THROWS_AS(RunConfig::from_json_text("{}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"input": "x.csv", "method": "umap"})"),
                  ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(R"({"input": "x.csv", "perturbation": {"bogus": 1}})"),
      ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(R"({"input": "x.csv", "extraction": "thirds"})"),
      ConfigError);
}

TEST_CASE("an unknown axis name fails before any computation") {
  std::string dir = temp_dir("dimreader_pipe_badaxis");
  std::string csv = write_scurve_csv(dir, 30);
  RunConfig config;
  config.input_path = csv;
  config.projection.method = ProjectionMethod::kPca;
  config.perturbation = RunConfig::PerturbationKind::kAxis;
  config.axis_name = "not-a-dimension";
  config.output_dir = dir + "/out";
  CHECK_THROWS_AS(run_pipeline(config), ConfigError);
  CHECK(!std::filesystem::exists(dir + "/out/result.json"));
}

TEST_CASE("the pipeline writes result, plot and report") {
  std::string dir = temp_dir("dimreader_pipe_run");
  std::string csv = write_scurve_csv(dir, 40);
  RunConfig config;
  config.input_path = csv;
  config.projection.method = ProjectionMethod::kPca;
  config.projection.seed = 9;
  config.perturbation = RunConfig::PerturbationKind::kAxis;
  config.axis_name = "z";
  config.extraction = RunConfig::ExtractionScheme::kHalves;
  config.output_dir = dir + "/out";

  RunReport report = run_pipeline(config);
  CHECK(std::filesystem::exists(dir + "/out/result.json"));
  CHECK(std::filesystem::exists(dir + "/out/plot.svg"));
  CHECK(std::filesystem::exists(dir + "/out/report.json"));
  CHECK(report.projection_runs >= 2);  // plain + at least one dual round
  CHECK(report.phase_seconds.count("extract") == 1);
  CHECK(report.projection_converged);

  PlotGeometry geometry = geometry_from_json(read_file(dir + "/out/result.json"));
  CHECK(geometry.points.rows() == 40);
  CHECK(geometry.vectors.rows() == 40);
  CHECK(!geometry.isolines.isolines.empty());
}

TEST_CASE("identical configs produce byte-identical results across thread counts") {
  std::string dir = temp_dir("dimreader_pipe_det");
  std::string csv = write_scurve_csv(dir, 36);
  RunConfig config;
  config.input_path = csv;
  config.projection.method = ProjectionMethod::kIsomap;
  config.projection.k_neighbors = 7;
  config.projection.seed = 4;
  config.perturbation = RunConfig::PerturbationKind::kAxis;
  config.axis_name = "x";
  config.extraction = RunConfig::ExtractionScheme::kHalves;

  config.output_dir = dir + "/a";
  setenv("DIMREADER_THREADS", "1", 1);
  run_pipeline(config);
  config.output_dir = dir + "/b";
  setenv("DIMREADER_THREADS", "4", 1);
  run_pipeline(config);
  config.output_dir = dir + "/c";
  run_pipeline(config);
  unsetenv("DIMREADER_THREADS");

  std::string a = read_file(dir + "/a/result.json");
  std::string b = read_file(dir + "/b/result.json");
  std::string c = read_file(dir + "/c/result.json");
  CHECK(a == b);
  CHECK(b == c);
  CHECK(read_file(dir + "/a/plot.svg") == read_file(dir + "/b/plot.svg"));
}

TEST_CASE("custom perturbation files drive the pipeline") {
  std::string dir = temp_dir("dimreader_pipe_custom");
  SyntheticData curve = make_s_curve(30, 5);
  std::string csv = dir + "/scurve.csv";
  save_csv(curve.dataset, csv);

  Dataset field;
  field.points = s_curve_tangent_field(curve, 0);
  field.dim_names = {"dx", "dy", "dz"};
  std::string field_csv = dir + "/field.csv";
  save_csv(field, field_csv);

  RunConfig config;
  config.input_path = csv;
  config.projection.method = ProjectionMethod::kIsomap;
  config.projection.k_neighbors = 6;
  config.perturbation = RunConfig::PerturbationKind::kCustom;
  config.custom_path = field_csv;
  config.output_dir = dir + "/out";
  RunReport report = run_pipeline(config);
  CHECK(report.projection_runs >= 2);
  PlotGeometry geometry = geometry_from_json(read_file(dir + "/out/result.json"));
  CHECK(geometry.points.rows() == 30);
}

TEST_CASE("discovery mode emits the perturbation artifacts") {
  std::string dir = temp_dir("dimreader_pipe_discover");
  std::string csv = write_scurve_csv(dir, 24);
  RunConfig config;
  config.input_path = csv;
  config.projection.method = ProjectionMethod::kPca;
  config.perturbation = RunConfig::PerturbationKind::kDiscoverGlobal;
  config.output_dir = dir + "/out";

  RunReport report = run_discovery(config);
  CHECK(std::filesystem::exists(dir + "/out/discovery.json"));
  CHECK(std::filesystem::exists(dir + "/out/report.json"));
  // 1 plain run + 3 axis passes of randomized halves.
  CHECK(report.projection_runs >= 4);

  // And the full pipeline accepts a discovered perturbation end to end.
  config.perturbation = RunConfig::PerturbationKind::kDiscoverPerPoint;
  config.lambda = 0.5;
  config.output_dir = dir + "/out2";
  RunReport full = run_pipeline(config);
  CHECK(std::filesystem::exists(dir + "/out2/result.json"));
  PlotGeometry geometry = geometry_from_json(read_file(dir + "/out2/result.json"));
  REQUIRE(geometry.discovery);
  CHECK(geometry.discovery->perturbation.rows() == 24);
}
