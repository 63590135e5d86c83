#include "dimreader/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dimreader/discovery.hpp"
#include "dimreader/extraction.hpp"
#include "dimreader/field.hpp"
#include "dimreader/render.hpp"

namespace dimreader {

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json config_to_json_object(const RunConfig& c) {
  json j;
  j["input"] = c.input_path;
  j["format"] = c.format == DatasetFormat::kCsv ? "csv" : "idx-images";
  j["label_column"] = c.label_column;
  j["method"] = to_string(c.projection.method);
  j["k_neighbors"] = c.projection.k_neighbors;
  j["perplexity"] = c.projection.perplexity;
  j["learning_rate"] = c.projection.learning_rate;
  j["max_iters"] = c.projection.max_iters;
  j["grad_tol"] = c.projection.grad_tol;
  j["seed"] = c.projection.seed;
  switch (c.perturbation) {
    case RunConfig::PerturbationKind::kAxis:
      j["perturbation"] = {{"axis", c.axis_name}};
      break;
    case RunConfig::PerturbationKind::kCustom:
      j["perturbation"] = {{"custom", c.custom_path}};
      break;
    case RunConfig::PerturbationKind::kDiscoverGlobal:
      j["perturbation"] = {{"discover", "global"}};
      break;
    case RunConfig::PerturbationKind::kDiscoverPerPoint:
      j["perturbation"] = {{"discover", "per-point"}};
      break;
  }
  j["extraction"] =
      c.extraction == RunConfig::ExtractionScheme::kHalves ? "halves" : "one-at-a-time";
  j["grid_resolution"] = c.grid_resolution;
  j["reg_weight"] = c.reg_weight;
  j["n_levels"] = c.n_levels;
  j["lambda"] = c.lambda;
  j["sigma"] = c.sigma;
  j["output_dir"] = c.output_dir;
  return j;
}

RunConfig config_from_json_object(const json& j) {
  RunConfig c;
  c.input_path = j.value("input", "");
  std::string format = j.value("format", "csv");
  if (format == "csv")
    c.format = DatasetFormat::kCsv;
  else if (format == "idx-images")
    c.format = DatasetFormat::kIdxImages;
  else
    throw ConfigError("unknown dataset format: '" + format + "'");
  c.label_column = j.value("label_column", "");

  c.projection.method = projection_method_from_string(j.value("method", "pca"));
  c.projection.k_neighbors = j.value("k_neighbors", c.projection.k_neighbors);
  c.projection.perplexity = j.value("perplexity", c.projection.perplexity);
  c.projection.learning_rate = j.value("learning_rate", c.projection.learning_rate);
  c.projection.max_iters = j.value("max_iters", c.projection.max_iters);
  c.projection.grad_tol = j.value("grad_tol", c.projection.grad_tol);
  c.projection.seed = j.value("seed", c.projection.seed);

  if (j.contains("perturbation")) {
    const json& p = j.at("perturbation");
    if (p.contains("axis")) {
      c.perturbation = RunConfig::PerturbationKind::kAxis;
      c.axis_name = p.at("axis").get<std::string>();
    } else if (p.contains("custom")) {
      c.perturbation = RunConfig::PerturbationKind::kCustom;
      c.custom_path = p.at("custom").get<std::string>();
    } else if (p.contains("discover")) {
      std::string mode = p.at("discover").get<std::string>();
      if (mode == "global")
        c.perturbation = RunConfig::PerturbationKind::kDiscoverGlobal;
      else if (mode == "per-point")
        c.perturbation = RunConfig::PerturbationKind::kDiscoverPerPoint;
      else
        throw ConfigError("unknown discover mode: '" + mode + "'");
    } else {
      throw ConfigError("perturbation must specify axis, custom or discover");
    }
  }

  std::string extraction = j.value("extraction", "halves");
  if (extraction == "halves")
    c.extraction = RunConfig::ExtractionScheme::kHalves;
  else if (extraction == "one-at-a-time")
    c.extraction = RunConfig::ExtractionScheme::kOneAtATime;
  else
    throw ConfigError("unknown extraction scheme: '" + extraction + "'");

  c.grid_resolution = j.value("grid_resolution", c.grid_resolution);
  c.reg_weight = j.value("reg_weight", c.reg_weight);
  c.n_levels = j.value("n_levels", c.n_levels);
  c.lambda = j.value("lambda", c.lambda);
  c.sigma = j.value("sigma", c.sigma);
  c.output_dir = j.value("output_dir", c.output_dir);

  if (c.input_path.empty()) throw ConfigError("config is missing 'input'");
  if (c.grid_resolution < 1) throw ConfigError("grid_resolution must be positive");
  if (c.n_levels < 1) throw ConfigError("n_levels must be positive");
  if (c.lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  return c;
}

/// Resolves the perturbation field; runs discovery first when asked to.
PerturbationField resolve_field(const RunConfig& config, const Dataset& dataset,
                                const ProjectionDriver& driver, RunReport& report,
                                std::optional<DiscoveryResult>& discovery,
                                int* tangent_runs) {
  switch (config.perturbation) {
    case RunConfig::PerturbationKind::kAxis: {
      int dim = dataset.dimension_index(config.axis_name);
      return PerturbationField::axis(dataset.n(), dataset.d(), dim);
    }
    case RunConfig::PerturbationKind::kCustom: {
      Dataset rows = load_csv(config.custom_path);
      if (rows.n() != dataset.n() || rows.d() != dataset.d())
        throw ConfigError("custom perturbation shape " + std::to_string(rows.n()) + "x" +
                          std::to_string(rows.d()) + " does not match dataset");
      return PerturbationField::custom(rows.points);
    }
    case RunConfig::PerturbationKind::kDiscoverGlobal:
    case RunConfig::PerturbationKind::kDiscoverPerPoint: {
      TangentMap map = build_tangent_map(driver, config.projection.seed);
      *tangent_runs = 0;  // counted by the caller via report bookkeeping
      DiscoveryResult result;
      if (config.perturbation == RunConfig::PerturbationKind::kDiscoverGlobal) {
        SolverOptions opt;
        opt.seed = config.projection.seed;
        result = discover_global(map, opt);
      } else {
        result = discover_per_point(map, driver.plain_coords(), config.lambda,
                                    config.sigma, config.projection.seed);
      }
      for (const auto& w : result.warnings) report.warnings.push_back(w);
      discovery = result;
      return PerturbationField::custom(result.perturbation);
    }
  }
  throw ConfigError("unreachable perturbation kind");
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  return config_from_json_object(j);
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return from_json_text(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

std::string RunConfig::to_json() const { return config_to_json_object(*this).dump(2) + "\n"; }

std::string RunReport::to_json() const {
  json j;
  j["config"] = json::parse(config_echo);
  j["projection_runs"] = projection_runs;
  j["phase_seconds"] = phase_seconds;
  j["projection_converged"] = projection_converged;
  j["warnings"] = warnings;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

RunReport run_pipeline(const RunConfig& config) {
  RunReport report;
  report.config_echo = config.to_json();

  // Everything the config references must resolve before any
  // computation starts.
  Dataset dataset = load_dataset(config.input_path, config.format, config.label_column);
  if (config.perturbation == RunConfig::PerturbationKind::kAxis)
    dataset.dimension_index(config.axis_name);  // throws on unknown names
  config.projection.validate(dataset.n());

  auto t0 = std::chrono::steady_clock::now();
  ProjectionDriver driver(dataset.points, config.projection);
  report.phase_seconds["project"] = seconds_since(t0);
  report.projection_runs += 1;
  for (const auto& w : driver.warnings()) report.warnings.push_back(w);
  if (driver.fixed_point()) report.projection_converged = driver.fixed_point()->converged;

  t0 = std::chrono::steady_clock::now();
  std::optional<DiscoveryResult> discovery;
  int tangent_runs = 0;
  PerturbationField field =
      resolve_field(config, dataset, driver, report, discovery, &tangent_runs);
  if (discovery) {
    // d randomized-halves passes built the tangent map.
    for (int j = 0; j < dataset.d(); ++j)
      report.projection_runs += simulate_halves_rounds(
          dataset.n(), config.projection.seed + 0x1000ull * static_cast<std::uint64_t>(j));
    report.phase_seconds["discover"] = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
  }

  PerturbationVectors vectors =
      config.extraction == RunConfig::ExtractionScheme::kHalves
          ? extract_randomized_halves(driver, field, config.projection.seed)
          : extract_one_at_a_time(driver, field);
  report.projection_runs += vectors.runs;
  report.phase_seconds["extract"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  FieldFit fit = fit_scalar_field(driver.plain_coords(), vectors.vectors,
                                  config.grid_resolution, config.reg_weight);
  for (const auto& w : fit.warnings) report.warnings.push_back(w);
  report.phase_seconds["fit"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  IsolineSet isolines = marching_squares(fit.grid, config.n_levels);
  report.phase_seconds["contour"] = seconds_since(t0);

  PlotGeometry geometry;
  geometry.points = driver.plain_coords();
  geometry.vectors = vectors.vectors;
  geometry.grid = fit.grid;
  geometry.isolines = std::move(isolines);
  geometry.labels = dataset.labels;
  geometry.discovery = discovery;

  std::filesystem::create_directories(config.output_dir);
  std::string result_path = config.output_dir + "/result.json";
  std::string svg_path = config.output_dir + "/plot.svg";
  std::string report_path = config.output_dir + "/report.json";
  write_text_file(result_path, geometry_to_json(geometry));
  write_text_file(svg_path, geometry_to_svg(geometry));
  report.outputs = {result_path, svg_path, report_path};
  write_text_file(report_path, report.to_json());
  return report;
}

RunReport run_discovery(const RunConfig& config) {
  if (config.perturbation != RunConfig::PerturbationKind::kDiscoverGlobal &&
      config.perturbation != RunConfig::PerturbationKind::kDiscoverPerPoint)
    throw ConfigError("discover entry needs perturbation.discover in the config");

  RunReport report;
  report.config_echo = config.to_json();
  Dataset dataset = load_dataset(config.input_path, config.format, config.label_column);
  config.projection.validate(dataset.n());

  auto t0 = std::chrono::steady_clock::now();
  ProjectionDriver driver(dataset.points, config.projection);
  report.phase_seconds["project"] = seconds_since(t0);
  report.projection_runs += 1;
  for (const auto& w : driver.warnings()) report.warnings.push_back(w);
  if (driver.fixed_point()) report.projection_converged = driver.fixed_point()->converged;

  t0 = std::chrono::steady_clock::now();
  TangentMap map = build_tangent_map(driver, config.projection.seed);
  for (int j = 0; j < dataset.d(); ++j)
    report.projection_runs += simulate_halves_rounds(
        dataset.n(), config.projection.seed + 0x1000ull * static_cast<std::uint64_t>(j));
  DiscoveryResult result;
  if (config.perturbation == RunConfig::PerturbationKind::kDiscoverGlobal) {
    SolverOptions opt;
    opt.seed = config.projection.seed;
    result = discover_global(map, opt);
  } else {
    result = discover_per_point(map, driver.plain_coords(), config.lambda, config.sigma,
                                config.projection.seed);
  }
  for (const auto& w : result.warnings) report.warnings.push_back(w);
  report.phase_seconds["discover"] = seconds_since(t0);

  PerturbationReport maps = perturbation_report(result);
  if (dataset.image_shape) maps.image_shape = dataset.image_shape;

  json doc;
  doc["mode"] =
      result.mode == DiscoveryResult::Mode::kGlobal ? "global" : "per-point";
  doc["lambda"] = result.lambda_smooth;
  doc["sigma"] = result.sigma;
  doc["objective"] = result.objective;
  {
    json rows = json::array();
    for (int i = 0; i < result.perturbation.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < result.perturbation.cols(); ++j)
        row.push_back(result.perturbation(i, j));
      rows.push_back(std::move(row));
    }
    doc["perturbation"] = std::move(rows);
  }
  {
    json rows = json::array();
    for (int i = 0; i < maps.magnitude_maps.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < maps.magnitude_maps.cols(); ++j)
        row.push_back(maps.magnitude_maps(i, j));
      rows.push_back(std::move(row));
    }
    doc["magnitude_maps"] = std::move(rows);
  }
  doc["total_magnitude"] = maps.total_magnitude;
  doc["dominant_dimension"] = maps.dominant_dimension;
  doc["dimension_names"] = dataset.dim_names;
  if (maps.image_shape)
    doc["image_shape"] = {maps.image_shape->first, maps.image_shape->second};

  std::filesystem::create_directories(config.output_dir);
  std::string discovery_path = config.output_dir + "/discovery.json";
  std::string report_path = config.output_dir + "/report.json";
  write_text_file(discovery_path, doc.dump(2) + "\n");
  report.outputs = {discovery_path, report_path};
  write_text_file(report_path, report.to_json());
  return report;
}

}  // namespace dimreader
