#include "dimreader/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dimreader/errors.hpp"

namespace dimreader {

int Dataset::dimension_index(const std::string& name) const {
  auto it = std::find(dim_names.begin(), dim_names.end(), name);
  if (it == dim_names.end())
    throw ConfigError("unknown dimension name: '" + name + "'");
  return static_cast<int>(it - dim_names.begin());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    size_t a = cell.find_first_not_of(" \t\r");
    size_t b = cell.find_last_not_of(" \t\r");
    cells.push_back(a == std::string::npos ? std::string() : cell.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, int line_no, const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw NonNumericCell("non-numeric cell at line " + std::to_string(line_no) +
                         ", column '" + column + "': '" + cell + "'");
  return value;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw EmptyDataset("'" + path + "' is empty");
  std::vector<std::string> header = split_csv_line(line);
  if (header.empty()) throw ParseError("'" + path + "' has an empty header row");

  int label_idx = -1;
  if (!label_column.empty()) {
    auto it = std::find(header.begin(), header.end(), label_column);
    if (it == header.end())
      throw ConfigError("label column '" + label_column + "' not found in header");
    label_idx = static_cast<int>(it - header.begin());
  }

  Dataset out;
  for (int j = 0; j < static_cast<int>(header.size()); ++j)
    if (j != label_idx) out.dim_names.push_back(header[j]);
  if (label_idx >= 0) out.labels.emplace();

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(header.size()) + " (missing cell in column '" +
                       header[std::min(cells.size(), header.size() - 1)] + "')");
    std::vector<double> row;
    row.reserve(out.dim_names.size());
    for (int j = 0; j < static_cast<int>(cells.size()); ++j) {
      if (j == label_idx) {
        out.labels->push_back(cells[j]);
        continue;
      }
      row.push_back(parse_cell(cells[j], line_no, header[j]));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyDataset("'" + path + "' has no data rows");

  out.points = Matrix<double>(static_cast<int>(rows.size()),
                              static_cast<int>(out.dim_names.size()));
  for (int i = 0; i < out.points.rows(); ++i)
    for (int j = 0; j < out.points.cols(); ++j) out.points(i, j) = rows[i][j];
  return out;
}

namespace {

std::uint32_t read_be32(std::istream& in, const std::string& path) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4))
    throw ParseError("'" + path + "': truncated IDX header");
  return (std::uint32_t(bytes[0]) << 24) | (std::uint32_t(bytes[1]) << 16) |
         (std::uint32_t(bytes[2]) << 8) | std::uint32_t(bytes[3]);
}

}  // namespace

Dataset load_idx_images(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::uint32_t magic = read_be32(in, path);
  if ((magic & 0xffffff00u) != 0x00000800u)
    throw ParseError("'" + path + "': bad IDX magic (expected unsigned-byte data)");
  int ndims = static_cast<int>(magic & 0xffu);
  if (ndims < 1 || ndims > 3)
    throw ParseError("'" + path + "': unsupported IDX rank " + std::to_string(ndims));

  std::vector<std::uint32_t> dims(ndims);
  for (auto& d : dims) d = read_be32(in, path);
  std::uint32_t n = dims[0];
  std::uint32_t per_item = 1;
  for (int i = 1; i < ndims; ++i) per_item *= dims[i];
  if (n == 0) throw EmptyDataset("'" + path + "' holds zero items");

  Dataset out;
  out.points = Matrix<double>(static_cast<int>(n), static_cast<int>(per_item));
  std::vector<unsigned char> buffer(per_item);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!in.read(reinterpret_cast<char*>(buffer.data()), per_item))
      throw ParseError("'" + path + "': truncated at item " + std::to_string(i));
    for (std::uint32_t j = 0; j < per_item; ++j)
      out.points(static_cast<int>(i), static_cast<int>(j)) = buffer[j] / 255.0;
  }
  out.dim_names.reserve(per_item);
  for (std::uint32_t j = 0; j < per_item; ++j)
    out.dim_names.push_back("px" + std::to_string(j));
  if (ndims == 3)
    out.image_shape = {static_cast<int>(dims[1]), static_cast<int>(dims[2])};
  return out;
}

Dataset load_dataset(const std::string& path, DatasetFormat format,
                     const std::string& label_column) {
  switch (format) {
    case DatasetFormat::kCsv: return load_csv(path, label_column);
    case DatasetFormat::kIdxImages: return load_idx_images(path);
  }
  throw ConfigError("unknown dataset format");
}

void save_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOFailure("cannot write '" + path + "'");
  for (size_t j = 0; j < dataset.dim_names.size(); ++j) {
    if (j) out << ',';
    out << dataset.dim_names[j];
  }
  if (dataset.labels) out << ",label";
  out << '\n';
  char buf[32];
  for (int i = 0; i < dataset.n(); ++i) {
    for (int j = 0; j < dataset.d(); ++j) {
      if (j) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", dataset.points(i, j));
      out << buf;
    }
    if (dataset.labels) out << ',' << (*dataset.labels)[i];
    out << '\n';
  }
  if (!out) throw IOFailure("write failed for '" + path + "'");
}

}  // namespace dimreader
