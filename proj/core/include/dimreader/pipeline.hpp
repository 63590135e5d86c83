#pragma once

#include <map>
#include <string>
#include <vector>

#include "dimreader/dataset.hpp"
#include "dimreader/projection.hpp"

namespace dimreader {

/// Declarative description of one end-to-end run: dataset, projection,
/// which perturbation to study, how to extract it, and the field /
/// contour / output knobs. Loaded from a JSON file; every defaulted
/// value is echoed back into the run report so a plot is reproducible
/// from its report alone.
struct RunConfig {
  std::string input_path;
  DatasetFormat format = DatasetFormat::kCsv;
  std::string label_column;

  ProjectionConfig projection;

  enum class PerturbationKind { kAxis, kCustom, kDiscoverGlobal, kDiscoverPerPoint };
  PerturbationKind perturbation = PerturbationKind::kAxis;
  std::string axis_name;    // kAxis: dimension name from the header
  std::string custom_path;  // kCustom: CSV of per-point directions

  enum class ExtractionScheme { kOneAtATime, kHalves };
  ExtractionScheme extraction = ExtractionScheme::kHalves;

  int grid_resolution = 10;
  double reg_weight = 0.0;  // 0: 0.01 * mean constraint magnitude
  int n_levels = 10;
  double lambda = 1.0;  // per-point discovery smoothing
  double sigma = 0.0;   // 0: half the median pairwise projected distance
  std::string output_dir = "out";

  static RunConfig from_json_file(const std::string& path);
  static RunConfig from_json_text(const std::string& text);
  std::string to_json() const;
};

struct RunReport {
  std::string config_echo;  // JSON with every default resolved
  int projection_runs = 0;
  std::map<std::string, double> phase_seconds;
  bool projection_converged = true;
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;

  std::string to_json() const;
};

/// The four-step run: project, extract perturbation vectors, fit the
/// scalar field, contour it (discovery first when the config asks for a
/// discovered perturbation). Writes result.json, plot.svg and
/// report.json into output_dir and returns the report.
RunReport run_pipeline(const RunConfig& config);

/// Discovery-only entry: builds the tangent map, finds the requested
/// best perturbation and writes discovery.json + report.json without
/// the field/contour stages. The config's perturbation must be one of
/// the discover kinds.
RunReport run_discovery(const RunConfig& config);

}  // namespace dimreader
