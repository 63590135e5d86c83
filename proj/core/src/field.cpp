#include "dimreader/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "dimreader/errors.hpp"
#include "dimreader/linalg.hpp"

namespace dimreader {

namespace {

struct CellLocation {
  int ix, iy;        // cell indices
  double fx, fy;     // local coordinates in [0, 1]
  bool lower;        // lower triangle {v00, v10, v11} vs upper {v00, v11, v01}
};

CellLocation locate(const ScalarGrid& grid, double x, double y) {
  const int res = grid.resolution;
  double fx = (x - grid.bounds.xmin) / grid.cell_width();
  double fy = (y - grid.bounds.ymin) / grid.cell_height();
  fx = std::clamp(fx, 0.0, static_cast<double>(res));
  fy = std::clamp(fy, 0.0, static_cast<double>(res));
  int ix = std::min(static_cast<int>(fx), res - 1);
  int iy = std::min(static_cast<int>(fy), res - 1);
  CellLocation loc{ix, iy, fx - ix, fy - iy, true};
  loc.lower = loc.fx >= loc.fy;
  return loc;
}

}  // namespace

double ScalarGrid::interpolate(double x, double y) const {
  CellLocation loc = locate(*this, x, y);
  double v00 = vertex_value(loc.ix, loc.iy);
  double v10 = vertex_value(loc.ix + 1, loc.iy);
  double v11 = vertex_value(loc.ix + 1, loc.iy + 1);
  double v01 = vertex_value(loc.ix, loc.iy + 1);
  if (loc.lower) return v00 + (v10 - v00) * loc.fx + (v11 - v10) * loc.fy;
  return v00 + (v11 - v01) * loc.fx + (v01 - v00) * loc.fy;
}

std::array<double, 2> ScalarGrid::gradient_at(double x, double y) const {
  CellLocation loc = locate(*this, x, y);
  double v00 = vertex_value(loc.ix, loc.iy);
  double v10 = vertex_value(loc.ix + 1, loc.iy);
  double v11 = vertex_value(loc.ix + 1, loc.iy + 1);
  double v01 = vertex_value(loc.ix, loc.iy + 1);
  double hx = cell_width(), hy = cell_height();
  if (loc.lower) return {(v10 - v00) / hx, (v11 - v10) / hy};
  return {(v11 - v01) / hx, (v01 - v00) / hy};
}

double ScalarGrid::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double ScalarGrid::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

GridBounds padded_bounds(const Matrix<double>& points) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  GridBounds b{kInf, kInf, -kInf, -kInf};
  for (int i = 0; i < points.rows(); ++i) {
    b.xmin = std::min(b.xmin, points(i, 0));
    b.xmax = std::max(b.xmax, points(i, 0));
    b.ymin = std::min(b.ymin, points(i, 1));
    b.ymax = std::max(b.ymax, points(i, 1));
  }
  double w = b.xmax - b.xmin;
  double h = b.ymax - b.ymin;
  if (w <= 0.0) {
    b.xmin -= 0.5;
    b.xmax += 0.5;
    w = 1.0;
  }
  if (h <= 0.0) {
    b.ymin -= 0.5;
    b.ymax += 0.5;
    h = 1.0;
  }
  b.xmin -= 0.05 * w;
  b.xmax += 0.05 * w;
  b.ymin -= 0.05 * h;
  b.ymax += 0.05 * h;
  return b;
}

FieldFit fit_scalar_field(const Matrix<double>& points, const Matrix<double>& vectors,
                          int resolution, double reg_weight) {
  if (points.rows() != vectors.rows() || points.cols() != 2 || vectors.cols() != 2)
    throw ConfigError("fit_scalar_field expects n x 2 points and vectors");
  if (resolution < 1) throw ConfigError("grid resolution must be positive");
  const int n = points.rows();

  FieldFit fit;
  fit.grid.resolution = resolution;
  fit.grid.bounds = padded_bounds(points);
  fit.grid.values.assign(fit.grid.vertex_count(), 0.0);

  double mean_mag = 0.0;
  for (int i = 0; i < n; ++i)
    mean_mag += std::hypot(vectors(i, 0), vectors(i, 1));
  mean_mag /= n;
  if (mean_mag == 0.0) {
    fit.warnings.push_back("EmptyConstraints: all perturbation vectors are zero; flat field");
    return fit;
  }
  if (reg_weight <= 0.0) reg_weight = 0.01 * mean_mag;

  const int m = fit.grid.vertex_count();
  const int res = resolution;
  const double hx = fit.grid.cell_width();
  const double hy = fit.grid.cell_height();

  // Normal equations assembled row by row: N += a a^T, rhs += a * b.
  Matrix<double> normal(m, m, 0.0);
  std::vector<double> rhs(m, 0.0);
  auto add_row = [&](const std::array<std::pair<int, double>, 3>& coeffs, int nnz,
                     double b) {
    for (int p = 0; p < nnz; ++p) {
      rhs[coeffs[p].first] += coeffs[p].second * b;
      for (int q = 0; q < nnz; ++q)
        normal(coeffs[p].first, coeffs[q].first) +=
            coeffs[p].second * coeffs[q].second;
    }
  };

  for (int i = 0; i < n; ++i) {
    CellLocation loc = locate(fit.grid, points(i, 0), points(i, 1));
    int v00 = fit.grid.vertex_index(loc.ix, loc.iy);
    int v10 = fit.grid.vertex_index(loc.ix + 1, loc.iy);
    int v11 = fit.grid.vertex_index(loc.ix + 1, loc.iy + 1);
    int v01 = fit.grid.vertex_index(loc.ix, loc.iy + 1);
    if (loc.lower) {
      add_row({{{v10, 1.0 / hx}, {v00, -1.0 / hx}, {0, 0.0}}}, 2, vectors(i, 0));
      add_row({{{v11, 1.0 / hy}, {v10, -1.0 / hy}, {0, 0.0}}}, 2, vectors(i, 1));
    } else {
      add_row({{{v11, 1.0 / hx}, {v01, -1.0 / hx}, {0, 0.0}}}, 2, vectors(i, 0));
      add_row({{{v01, 1.0 / hy}, {v00, -1.0 / hy}, {0, 0.0}}}, 2, vectors(i, 1));
    }
  }

  // Smoothness rows: the change of the value difference across each
  // pair of collinear grid edges (a second difference along every grid
  // line). Linear ramps are in the penalty's null space, so the fill in
  // data-free regions extends the fitted field instead of flattening
  // it, which is what keeps a linear projection's isolines parallel
  // across the whole plot. A 1-cell grid has no collinear pairs and
  // falls back to plain edge differences.
  if (res >= 2) {
    for (int iy = 0; iy <= res; ++iy)
      for (int ix = 1; ix < res; ++ix)
        add_row({{{fit.grid.vertex_index(ix - 1, iy), reg_weight},
                  {fit.grid.vertex_index(ix, iy), -2.0 * reg_weight},
                  {fit.grid.vertex_index(ix + 1, iy), reg_weight}}},
                3, 0.0);
    for (int iy = 1; iy < res; ++iy)
      for (int ix = 0; ix <= res; ++ix)
        add_row({{{fit.grid.vertex_index(ix, iy - 1), reg_weight},
                  {fit.grid.vertex_index(ix, iy), -2.0 * reg_weight},
                  {fit.grid.vertex_index(ix, iy + 1), reg_weight}}},
                3, 0.0);
  } else {
    for (int iy = 0; iy <= res; ++iy)
      for (int ix = 0; ix < res; ++ix)
        add_row({{{fit.grid.vertex_index(ix + 1, iy), reg_weight},
                  {fit.grid.vertex_index(ix, iy), -reg_weight},
                  {0, 0.0}}},
                2, 0.0);
    for (int iy = 0; iy < res; ++iy)
      for (int ix = 0; ix <= res; ++ix)
        add_row({{{fit.grid.vertex_index(ix, iy + 1), reg_weight},
                  {fit.grid.vertex_index(ix, iy), -reg_weight},
                  {0, 0.0}}},
                2, 0.0);
  }

  // The normal matrix annihilates constants (gradient rows and second
  // differences both do); the rhs is orthogonal to them, so CG starting
  // from zero stays in the solvable complement. Gradient rows carry 1/h
  // factors while smoothness rows are O(reg_weight), so the system is
  // symmetrically rescaled by its diagonal before the solve.
  std::vector<double> rescale(m, 1.0);
  for (int i = 0; i < m; ++i)
    if (normal(i, i) > 0.0) rescale[i] = 1.0 / std::sqrt(normal(i, i));
  Matrix<double> scaled(m, m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) scaled(i, j) = rescale[i] * normal(i, j) * rescale[j];
  std::vector<double> scaled_rhs(m);
  for (int i = 0; i < m; ++i) scaled_rhs[i] = rescale[i] * rhs[i];

  MatVecOracle<double> oracle = dense_oracle(scaled);
  // 1e-10 relative: comfortably below anything the geometry notices
  // and reachable even when the fourth-order normal system is at its
  // worst conditioning.
  fit.grid.values = conjugate_gradients(oracle, scaled_rhs, 1e-10, 40 * m);
  for (int i = 0; i < m; ++i) fit.grid.values[i] *= rescale[i];

  double mean = 0.0;
  for (double v : fit.grid.values) mean += v;
  mean /= m;
  for (double& v : fit.grid.values) v -= mean;
  return fit;
}

namespace {

// Edge keys: horizontal edge (ix..ix+1, iy) and vertical edge
// (ix, iy..iy+1), disambiguated by a flag bit.
long long edge_key(int res, bool horizontal, int ix, int iy) {
  long long base = static_cast<long long>(iy) * (res + 2) + ix;
  return horizontal ? base : base + (res + 2) * (res + 2);
}

struct Segment {
  long long a, b;  // edge keys of the two endpoints
};

}  // namespace

IsolineSet extract_isolines(const ScalarGrid& grid, const std::vector<double>& levels) {
  const int res = grid.resolution;
  const double hx = grid.cell_width();
  const double hy = grid.cell_height();
  IsolineSet out;

  for (double level : levels) {
    // Crossing coordinates per edge key.
    std::map<long long, std::array<double, 2>> crossings;
    std::vector<Segment> segments;

    auto cross_x = [&](int ix, int iy) {
      // horizontal edge from (ix, iy) to (ix+1, iy)
      double va = grid.vertex_value(ix, iy);
      double vb = grid.vertex_value(ix + 1, iy);
      double t = (level - va) / (vb - va);
      long long key = edge_key(res, true, ix, iy);
      crossings[key] = {grid.bounds.xmin + (ix + t) * hx, grid.bounds.ymin + iy * hy};
      return key;
    };
    auto cross_y = [&](int ix, int iy) {
      double va = grid.vertex_value(ix, iy);
      double vb = grid.vertex_value(ix, iy + 1);
      double t = (level - va) / (vb - va);
      long long key = edge_key(res, false, ix, iy);
      crossings[key] = {grid.bounds.xmin + ix * hx, grid.bounds.ymin + (iy + t) * hy};
      return key;
    };

    for (int iy = 0; iy < res; ++iy) {
      for (int ix = 0; ix < res; ++ix) {
        double c0 = grid.vertex_value(ix, iy);          // bottom-left
        double c1 = grid.vertex_value(ix + 1, iy);      // bottom-right
        double c2 = grid.vertex_value(ix + 1, iy + 1);  // top-right
        double c3 = grid.vertex_value(ix, iy + 1);      // top-left
        int idx = (c0 > level ? 1 : 0) | (c1 > level ? 2 : 0) | (c2 > level ? 4 : 0) |
                  (c3 > level ? 8 : 0);
        if (idx == 0 || idx == 15) continue;

        // Edge crossings by case. E0 bottom, E1 right, E2 top, E3 left.
        auto e0 = [&] { return cross_x(ix, iy); };
        auto e1 = [&] { return cross_y(ix + 1, iy); };
        auto e2 = [&] { return cross_x(ix, iy + 1); };
        auto e3 = [&] { return cross_y(ix, iy); };

        switch (idx) {
          case 1: segments.push_back({e3(), e0()}); break;
          case 2: segments.push_back({e0(), e1()}); break;
          case 3: segments.push_back({e3(), e1()}); break;
          case 4: segments.push_back({e1(), e2()}); break;
          case 6: segments.push_back({e0(), e2()}); break;
          case 7: segments.push_back({e3(), e2()}); break;
          case 8: segments.push_back({e2(), e3()}); break;
          case 9: segments.push_back({e0(), e2()}); break;
          case 11: segments.push_back({e1(), e2()}); break;
          case 12: segments.push_back({e1(), e3()}); break;
          case 13: segments.push_back({e0(), e1()}); break;
          case 14: segments.push_back({e3(), e0()}); break;
          case 5: {  // c0 and c2 inside: saddle
            double center = 0.25 * (c0 + c1 + c2 + c3);
            if (center > level) {
              segments.push_back({e0(), e1()});
              segments.push_back({e2(), e3()});
            } else {
              segments.push_back({e0(), e3()});
              segments.push_back({e1(), e2()});
            }
            break;
          }
          case 10: {  // c1 and c3 inside: saddle
            double center = 0.25 * (c0 + c1 + c2 + c3);
            if (center > level) {
              segments.push_back({e0(), e3()});
              segments.push_back({e1(), e2()});
            } else {
              segments.push_back({e0(), e1()});
              segments.push_back({e2(), e3()});
            }
            break;
          }
          default: break;
        }
      }
    }

    if (segments.empty()) continue;

    // Join segments into chains. Nodes are edge keys; each node carries
    // at most two incident segments away from degenerate saddles.
    std::map<long long, std::vector<int>> incident;
    for (size_t s = 0; s < segments.size(); ++s) {
      incident[segments[s].a].push_back(static_cast<int>(s));
      incident[segments[s].b].push_back(static_cast<int>(s));
    }

    std::vector<bool> used(segments.size(), false);
    auto walk = [&](long long start) {
      std::vector<long long> chain{start};
      long long node = start;
      while (true) {
        int next_seg = -1;
        for (int s : incident[node])
          if (!used[s]) {
            next_seg = s;
            break;
          }
        if (next_seg < 0) break;
        used[next_seg] = true;
        node = segments[next_seg].a == node ? segments[next_seg].b : segments[next_seg].a;
        chain.push_back(node);
      }
      return chain;
    };

    auto emit = [&](const std::vector<long long>& chain) {
      if (chain.size() < 2) return;
      Isoline iso;
      iso.level = level;
      iso.closed = chain.front() == chain.back();
      for (size_t t = 0; t + (iso.closed ? 1 : 0) < chain.size(); ++t)
        iso.polyline.push_back(crossings[chain[t]]);
      if (iso.closed) iso.polyline.push_back(crossings[chain.front()]);
      out.isolines.push_back(std::move(iso));
    };

    // Open chains first (start at degree-1 nodes, ascending key order),
    // then the remaining closed loops.
    for (const auto& [node, segs] : incident) {
      int unused = 0;
      for (int s : segs)
        if (!used[s]) ++unused;
      if (unused == 1) emit(walk(node));
    }
    for (size_t s = 0; s < segments.size(); ++s)
      if (!used[s]) {
        used[s] = true;
        std::vector<long long> chain{segments[s].a, segments[s].b};
        long long node = segments[s].b;
        while (true) {
          int next_seg = -1;
          for (int t : incident[node])
            if (!used[t]) {
              next_seg = t;
              break;
            }
          if (next_seg < 0) break;
          used[next_seg] = true;
          node =
              segments[next_seg].a == node ? segments[next_seg].b : segments[next_seg].a;
          chain.push_back(node);
        }
        emit(chain);
      }
  }
  return out;
}

IsolineSet marching_squares(const ScalarGrid& grid, int n_levels) {
  double lo = grid.min_value();
  double hi = grid.max_value();
  std::vector<double> levels;
  if (hi > lo) {
    for (int k = 1; k <= n_levels; ++k)
      levels.push_back(lo + k * (hi - lo) / (n_levels + 1));
  }
  return extract_isolines(grid, levels);
}

}  // namespace dimreader
