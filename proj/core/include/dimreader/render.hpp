#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimreader/discovery.hpp"
#include "dimreader/field.hpp"
#include "dimreader/matrix.hpp"

namespace dimreader {

/// Everything one DimReader plot consists of: projected points, their
/// perturbation vectors, the fitted field and its isolines, plus
/// optional class labels and a discovery result when the perturbation
/// was searched for rather than user-given.
struct PlotGeometry {
  Matrix<double> points;   // n x 2
  Matrix<double> vectors;  // n x 2
  ScalarGrid grid;
  IsolineSet isolines;
  std::optional<std::vector<std::string>> labels;
  std::optional<DiscoveryResult> discovery;
};

/// Serializes the geometry to the interchange JSON schema:
/// { points, vectors, grid: {resolution, bounds, values}, isolines:
///   [{level, polyline}] } (+ {mode, lambda, sigma, objective,
/// perturbation} when a discovery result is attached). Deterministic
/// byte output for identical input.
std::string geometry_to_json(const PlotGeometry& geometry);

/// Parses the JSON emitted above.
PlotGeometry geometry_from_json(const std::string& json_text);

/// SVG 1.1 document: class-coloured point markers, optional vector
/// glyphs, isolines shaded light (low level) to dark (high level).
std::string geometry_to_svg(const PlotGeometry& geometry, bool draw_vectors = false);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dimreader
