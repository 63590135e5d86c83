#pragma once

#include "dimreader/graph.hpp"
#include "dimreader/linalg.hpp"
#include "dimreader/projection.hpp"

namespace dimreader {

/// Isomap: kNN graph with Euclidean edge weights, all-pairs shortest
/// paths, classical MDS of the geodesic metric. The whole chain runs
/// over the Scalar abstraction; Dijkstra's comparisons and the kNN
/// topology read the value channel only, so the derivative channel
/// rides along the same paths the plain run takes.
template <Scalar S>
ProjectionResult<S> isomap_project(const Matrix<S>& data, const ProjectionConfig& config) {
  config.validate(data.rows());
  WeightedGraph<S> graph = knn_graph(data, config.k_neighbors);
  require_connected(graph);
  Matrix<S> geodesics = all_pairs_shortest_paths(graph);

  SolverOptions opt;
  opt.seed = config.seed;
  opt.max_iter = std::max(10 * data.rows(), 1000);
  MdsResult<S> mds = classical_mds(geodesics, 2, opt);

  ProjectionResult<S> result;
  result.coords = std::move(mds.coords);
  result.warnings = std::move(mds.warnings);
  return result;
}

}  // namespace dimreader
