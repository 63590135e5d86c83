#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "dimreader/errors.hpp"
#include "dimreader/matrix.hpp"
#include "dimreader/scalar.hpp"

namespace dimreader {

/// Undirected weighted graph in adjacency-list form. Edge weights carry
/// the scalar type so geodesic distances can flow derivative channels;
/// the topology itself is always decided on the value channel.
template <Scalar S>
struct WeightedGraph {
  struct Edge {
    int to;
    S weight;
  };
  std::vector<std::vector<Edge>> adjacency;

  int size() const { return static_cast<int>(adjacency.size()); }
};

/// k-nearest-neighbour graph with union symmetrization: an edge exists
/// when either endpoint selects the other. Neighbour selection reads
/// the value channel only (ties broken by index), so a dual run and the
/// plain run always agree on the topology; the perturbation only enters
/// through the edge weights.
template <Scalar S>
WeightedGraph<S> knn_graph(const Matrix<S>& points, int k) {
  const int n = points.rows();
  WeightedGraph<S> g;
  g.adjacency.resize(n);

  std::vector<std::vector<int>> chosen(n);
  std::vector<std::pair<double, int>> candidates(n - 1);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      candidates[m++] = {value_of(squared_distance(points.row(i), points.row(j))), j};
    }
    std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end());
    chosen[i].reserve(k);
    for (int t = 0; t < k; ++t) chosen[i].push_back(candidates[t].second);
  }

  for (int i = 0; i < n; ++i) {
    for (int j : chosen[i]) {
      bool mutual_back = std::find(chosen[j].begin(), chosen[j].end(), i) != chosen[j].end();
      if (mutual_back && j < i) continue;  // already added from j's side
      S w = euclidean_distance(points.row(i), points.row(j));
      g.adjacency[i].push_back({j, w});
      g.adjacency[j].push_back({i, w});
    }
  }
  for (auto& edges : g.adjacency)
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a.to < b.to; });
  return g;
}

/// Sizes of the connected components, largest first.
template <Scalar S>
std::vector<int> component_sizes(const WeightedGraph<S>& g) {
  const int n = g.size();
  std::vector<int> comp(n, -1);
  std::vector<int> sizes;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    int id = static_cast<int>(sizes.size());
    int count = 0;
    stack.push_back(s);
    comp[s] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      ++count;
      for (const auto& e : g.adjacency[u]) {
        if (comp[e.to] < 0) {
          comp[e.to] = id;
          stack.push_back(e.to);
        }
      }
    }
    sizes.push_back(count);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

template <Scalar S>
void require_connected(const WeightedGraph<S>& g) {
  auto sizes = component_sizes(g);
  if (sizes.size() > 1) {
    std::string msg = "kNN graph is disconnected (component sizes:";
    for (int s : sizes) msg += " " + std::to_string(s);
    msg += "); raise k_neighbors or subset the data";
    throw DisconnectedGraph(msg, sizes);
  }
}

/// Single-source shortest paths. The priority queue and all relaxation
/// comparisons read the value channel; the accumulated path sums carry
/// the scalar type, so the derivative of each geodesic distance is the
/// derivative of the value-channel-optimal path length. Zero-weight
/// edges (duplicate points) are fine.
template <Scalar S>
std::vector<S> dijkstra(const WeightedGraph<S>& g, int source) {
  const int n = g.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<S> dist(n, S(kInf));
  std::vector<bool> done(n, false);

  // (value-channel distance, vertex); the index tiebreak keeps the
  // visit order deterministic and identical across instantiations.
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[source] = S(0);
  queue.push({0.0, source});

  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = true;
    for (const auto& e : g.adjacency[u]) {
      if (done[e.to]) continue;
      S candidate = dist[u] + e.weight;
      if (value_of(candidate) < value_of(dist[e.to])) {
        dist[e.to] = candidate;
        queue.push({value_of(candidate), e.to});
      }
    }
  }
  return dist;
}

/// All-pairs geodesic matrix by one Dijkstra per source. The result is
/// symmetrized by averaging d(i,j) and d(j,i): they are equal up to
/// summation order, and downstream double-centering expects an exactly
/// symmetric matrix.
template <Scalar S>
Matrix<S> all_pairs_shortest_paths(const WeightedGraph<S>& g) {
  const int n = g.size();
  Matrix<S> d(n, n, S(0));
  for (int s = 0; s < n; ++s) {
    std::vector<S> row = dijkstra(g, s);
    for (int j = 0; j < n; ++j) d(s, j) = row[j];
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      S avg = (d(i, j) + d(j, i)) / S(2.0);
      d(i, j) = avg;
      d(j, i) = avg;
    }
  return d;
}

}  // namespace dimreader
