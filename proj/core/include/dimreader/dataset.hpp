#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimreader/matrix.hpp"

namespace dimreader {

enum class DatasetFormat { kCsv, kIdxImages };

/// A loaded dataset: the n x d point matrix, the dimension names
/// (header for CSV, pixel indices for IDX) and optional class labels.
/// image_shape is set for IDX data so perturbations can be shown as
/// images again.
struct Dataset {
  Matrix<double> points;
  std::vector<std::string> dim_names;
  std::optional<std::vector<std::string>> labels;
  std::optional<std::pair<int, int>> image_shape;  // rows, cols

  int n() const { return points.rows(); }
  int d() const { return points.cols(); }

  /// Index of a dimension by name; ConfigError if absent.
  int dimension_index(const std::string& name) const;
};

/// CSV with a header row of dimension names. label_column, when given,
/// names the column to strip into labels. Cells must parse as numbers;
/// errors name the offending row and column.
Dataset load_csv(const std::string& path,
                 const std::string& label_column = std::string());

/// IDX image file (big-endian magic 0x00000803-style): pixels scaled to
/// [0, 1], one flattened image per row.
Dataset load_idx_images(const std::string& path);

Dataset load_dataset(const std::string& path, DatasetFormat format,
                     const std::string& label_column = std::string());

/// Writes a dataset as CSV (round-trippable doubles).
void save_csv(const Dataset& dataset, const std::string& path);

}  // namespace dimreader
