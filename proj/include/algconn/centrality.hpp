#pragma once

// Nodal scores used by the baseline link-addition strategies.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <vector>

#include "algconn/error.hpp"
#include "algconn/graph.hpp"
#include "algconn/spectral.hpp"

namespace algconn {

enum class ScoreKind { degree, eigenvector, betweenness };

struct NodeScores {
  std::vector<double> values;
  ScoreKind kind = ScoreKind::degree;
};

/// Degree, or total (in + out) degree for directed graphs.
inline NodeScores degrees(const Graph& g) {
  NodeScores s{std::vector<double>(g.node_count()), ScoreKind::degree};
  for (std::size_t i = 0; i < g.node_count(); ++i) s.values[i] = static_cast<double>(g.degree(i));
  return s;
}

/// Perron vector of A (of A^T for directed graphs, so a node inherits
/// importance from its predecessors). Nonnegative with unit 2-norm.
inline NodeScores eigenvector_centrality(const Graph& g, double tol = 1e-12) {
  const std::size_t n = g.node_count();
  if (n == 0) return {{}, ScoreKind::eigenvector};
  Matrix a = adjacency_matrix(g);
  if (g.directed()) a.transposeInPlace();
  PowerOptions opt;
  opt.tol = tol;
  opt.shift = 1.0;  // breaks the +-lambda tie of bipartite graphs
  const auto pair = power_iteration(a, opt);
  if (!pair.converged)
    throw NumericalError("eigenvector_centrality: power iteration did not converge");
  Vector v = pair.vector;
  if (v.sum() < 0) v = -v;
  NodeScores s{std::vector<double>(n), ScoreKind::eigenvector};
  for (std::size_t i = 0; i < n; ++i)
    s.values[i] = std::max(0.0, v(static_cast<Eigen::Index>(i)));
  double norm = 0.0;
  for (double x : s.values) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : s.values) x /= norm;
  return s;
}

/// Brandes' betweenness: unnormalized, endpoints excluded. Undirected graphs
/// count each unordered source-target pair once; directed graphs count
/// ordered pairs along directed shortest paths.
inline NodeScores betweenness(const Graph& g) {
  const std::size_t n = g.node_count();
  NodeScores s{std::vector<double>(n, 0.0), ScoreKind::betweenness};
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  std::deque<std::size_t> queue;

  for (std::size_t src = 0; src < n; ++src) {
    order.clear();
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1L);
    sigma[src] = 1.0;
    dist[src] = 0;
    queue.push_back(src);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (std::size_t w : g.out_neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != src) s.values[w] += delta[w];
    }
  }
  if (!g.directed())
    for (double& x : s.values) x *= 0.5;
  return s;
}

inline NodeScores node_scores(const Graph& g, ScoreKind kind) {
  switch (kind) {
    case ScoreKind::degree: return degrees(g);
    case ScoreKind::eigenvector: return eigenvector_centrality(g);
    case ScoreKind::betweenness: return betweenness(g);
  }
  throw UsageError("unknown score kind");
}

}  // namespace algconn
