#pragma once

#include <array>
#include <string>
#include <vector>

#include "dimreader/matrix.hpp"

namespace dimreader {

struct GridBounds {
  double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

/// Piecewise-linear scalar field on a triangulated square grid over the
/// projection plane. `resolution` counts cells per side; values live on
/// the (resolution+1)^2 vertices. Every cell is split along the same
/// diagonal (lower-left to upper-right): the lower triangle is
/// {v00, v10, v11} and the upper one {v00, v11, v01}.
struct ScalarGrid {
  int resolution = 10;
  GridBounds bounds;
  std::vector<double> values;  // row-major, index iy * (resolution+1) + ix

  int vertex_count() const { return (resolution + 1) * (resolution + 1); }
  int vertex_index(int ix, int iy) const { return iy * (resolution + 1) + ix; }
  double vertex_value(int ix, int iy) const { return values[vertex_index(ix, iy)]; }
  double cell_width() const { return bounds.width() / resolution; }
  double cell_height() const { return bounds.height() / resolution; }

  /// PL interpolation of the field at a point (clamped into bounds).
  double interpolate(double x, double y) const;

  /// Gradient of the triangle containing (x, y); constant per triangle.
  std::array<double, 2> gradient_at(double x, double y) const;

  double min_value() const;
  double max_value() const;
};

/// Axis-aligned bounding box of the points, grown by 5% on each side so
/// every point sits strictly inside a full triangle. Degenerate extents
/// are widened to a unit box around the data.
GridBounds padded_bounds(const Matrix<double>& points);

struct FieldFit {
  ScalarGrid grid;
  std::vector<std::string> warnings;
};

/// Least-squares scalar field whose PL gradient matches the given
/// per-point vectors. Each point contributes two rows constraining the
/// gradient of its containing triangle (a linear function of that
/// triangle's three vertex values); smoothness rows weighted by
/// reg_weight penalize the value difference across every horizontal and
/// vertical grid edge and make the system uniquely solvable. The normal
/// equations are solved with conjugate gradients and the field is
/// shifted to zero mean (gauge fix).
///
/// reg_weight <= 0 selects the default 0.01 * (mean constraint
/// magnitude). All-zero vectors produce a flat field and a warning
/// instead of an error.
FieldFit fit_scalar_field(const Matrix<double>& points, const Matrix<double>& vectors,
                          int resolution = 10, double reg_weight = 0.0);

struct Isoline {
  double level = 0.0;
  std::vector<std::array<double, 2>> polyline;
  bool closed = false;
};

struct IsolineSet {
  std::vector<Isoline> isolines;
};

/// Marching squares at explicit levels. Corner signs of (value - level)
/// pick one of 16 cases per cell; crossings are linearly interpolated
/// along cell edges; the two ambiguous saddle cases are resolved by the
/// cell-center average. Segments are joined into polylines in a
/// deterministic post-pass. Levels outside the value range simply
/// produce nothing.
IsolineSet extract_isolines(const ScalarGrid& grid, const std::vector<double>& levels);

/// Marching squares at n_levels evenly spaced interior levels
/// min + k (max-min)/(n_levels+1), k = 1..n_levels. A constant field
/// has no isolines.
IsolineSet marching_squares(const ScalarGrid& grid, int n_levels = 10);

}  // namespace dimreader
