#include "dimreader/render.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "dimreader/errors.hpp"

namespace dimreader {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix<double>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix<double> matrix_from_json(const json& rows, int cols_expected = -1) {
  int n = static_cast<int>(rows.size());
  int d = n > 0 ? static_cast<int>(rows[0].size()) : std::max(cols_expected, 0);
  Matrix<double> m(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

std::string format_coord(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string geometry_to_json(const PlotGeometry& geometry) {
  json doc;
  doc["points"] = matrix_to_json(geometry.points);
  doc["vectors"] = matrix_to_json(geometry.vectors);
  doc["grid"] = {{"resolution", geometry.grid.resolution},
                 {"bounds",
                  {{"xmin", geometry.grid.bounds.xmin},
                   {"ymin", geometry.grid.bounds.ymin},
                   {"xmax", geometry.grid.bounds.xmax},
                   {"ymax", geometry.grid.bounds.ymax}}},
                 {"values", geometry.grid.values}};
  json isolines = json::array();
  for (const auto& iso : geometry.isolines.isolines) {
    json polyline = json::array();
    for (const auto& v : iso.polyline) polyline.push_back({v[0], v[1]});
    isolines.push_back({{"level", iso.level}, {"polyline", std::move(polyline)}});
  }
  doc["isolines"] = std::move(isolines);
  if (geometry.labels) doc["labels"] = *geometry.labels;
  if (geometry.discovery) {
    const DiscoveryResult& r = *geometry.discovery;
    doc["mode"] = r.mode == DiscoveryResult::Mode::kGlobal ? "global" : "per-point";
    doc["lambda"] = r.lambda_smooth;
    doc["sigma"] = r.sigma;
    doc["objective"] = r.objective;
    doc["perturbation"] = matrix_to_json(r.perturbation);
  }
  return doc.dump(2) + "\n";
}

PlotGeometry geometry_from_json(const std::string& json_text) {
  json doc = json::parse(json_text);
  PlotGeometry g;
  g.points = matrix_from_json(doc.at("points"), 2);
  g.vectors = matrix_from_json(doc.at("vectors"), 2);
  const json& grid = doc.at("grid");
  g.grid.resolution = grid.at("resolution").get<int>();
  g.grid.bounds.xmin = grid.at("bounds").at("xmin").get<double>();
  g.grid.bounds.ymin = grid.at("bounds").at("ymin").get<double>();
  g.grid.bounds.xmax = grid.at("bounds").at("xmax").get<double>();
  g.grid.bounds.ymax = grid.at("bounds").at("ymax").get<double>();
  g.grid.values = grid.at("values").get<std::vector<double>>();
  for (const json& iso : doc.at("isolines")) {
    Isoline line;
    line.level = iso.at("level").get<double>();
    for (const json& v : iso.at("polyline"))
      line.polyline.push_back({v[0].get<double>(), v[1].get<double>()});
    if (line.polyline.size() > 1 && line.polyline.front() == line.polyline.back())
      line.closed = true;
    g.isolines.isolines.push_back(std::move(line));
  }
  if (doc.contains("labels"))
    g.labels = doc.at("labels").get<std::vector<std::string>>();
  if (doc.contains("perturbation")) {
    DiscoveryResult r;
    r.mode = doc.at("mode").get<std::string>() == "global"
                 ? DiscoveryResult::Mode::kGlobal
                 : DiscoveryResult::Mode::kPerPoint;
    r.lambda_smooth = doc.at("lambda").get<double>();
    r.sigma = doc.at("sigma").get<double>();
    r.objective = doc.at("objective").get<double>();
    r.perturbation = matrix_from_json(doc.at("perturbation"));
    g.discovery = std::move(r);
  }
  return g;
}

std::string geometry_to_svg(const PlotGeometry& geometry, bool draw_vectors) {
  constexpr double kSize = 640.0;
  constexpr double kMargin = 20.0;
  const GridBounds& b = geometry.grid.bounds;
  double sx = (kSize - 2 * kMargin) / b.width();
  double sy = (kSize - 2 * kMargin) / b.height();
  auto px = [&](double x) { return kMargin + (x - b.xmin) * sx; };
  // SVG y grows downward.
  auto py = [&](double y) { return kSize - kMargin - (y - b.ymin) * sy; };

  static const char* kPalette[] = {"#4c78a8", "#f58518", "#54a24b", "#e45756",
                                   "#72b7b2", "#b279a2", "#eeca3b", "#9d755d",
                                   "#bab0ac", "#d67195"};
  std::map<std::string, int> class_ids;
  if (geometry.labels)
    for (const auto& label : *geometry.labels)
      class_ids.emplace(label, static_cast<int>(class_ids.size()));

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
         "viewBox=\"0 0 640 640\">\n";
  svg += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";

  // Isolines, light to dark by level rank.
  std::vector<double> levels;
  for (const auto& iso : geometry.isolines.isolines) levels.push_back(iso.level);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (const auto& iso : geometry.isolines.isolines) {
    if (iso.polyline.size() < 2) continue;
    size_t rank =
        std::lower_bound(levels.begin(), levels.end(), iso.level) - levels.begin();
    int shade = levels.size() > 1
                    ? 216 - static_cast<int>(178.0 * rank / (levels.size() - 1))
                    : 128;
    std::string path = "M";
    for (size_t t = 0; t < iso.polyline.size(); ++t) {
      if (t) path += " L";
      path += format_coord(px(iso.polyline[t][0])) + " " +
              format_coord(py(iso.polyline[t][1]));
    }
    char color[16];
    std::snprintf(color, sizeof color, "#%02x%02x%02x", shade, shade, shade);
    svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
  }

  if (draw_vectors) {
    double scale = 0.0;
    for (int i = 0; i < geometry.vectors.rows(); ++i)
      scale = std::max(scale,
                       std::hypot(geometry.vectors(i, 0), geometry.vectors(i, 1)));
    double glyph = scale > 0.0 ? 0.04 * std::max(b.width(), b.height()) / scale : 0.0;
    for (int i = 0; i < geometry.points.rows(); ++i) {
      double x0 = geometry.points(i, 0), y0 = geometry.points(i, 1);
      double x1 = x0 + glyph * geometry.vectors(i, 0);
      double y1 = y0 + glyph * geometry.vectors(i, 1);
      svg += "<line x1=\"" + format_coord(px(x0)) + "\" y1=\"" + format_coord(py(y0)) +
             "\" x2=\"" + format_coord(px(x1)) + "\" y2=\"" + format_coord(py(y1)) +
             "\" stroke=\"#d62728\" stroke-width=\"1\"/>\n";
    }
  }

  for (int i = 0; i < geometry.points.rows(); ++i) {
    const char* fill = kPalette[0];
    if (geometry.labels) {
      int id = class_ids[(*geometry.labels)[i]];
      fill = kPalette[id % 10];
    }
    svg += "<circle cx=\"" + format_coord(px(geometry.points(i, 0))) + "\" cy=\"" +
           format_coord(py(geometry.points(i, 1))) + "\" r=\"3\" fill=\"" + fill +
           "\" fill-opacity=\"0.85\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOFailure("cannot write '" + path + "'");
  out << content;
  if (!out) throw IOFailure("write failed for '" + path + "'");
}

}  // namespace dimreader
