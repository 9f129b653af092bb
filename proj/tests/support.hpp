#pragma once

// Seeded instance generators and independent reference computations shared
// by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "algconn/generators.hpp"
#include "algconn/graph.hpp"
#include "algconn/random.hpp"
#include "algconn/spectral.hpp"

namespace algconn::fixtures {

/// Connected G(n, p) with n drawn from [lo, hi] and p from [0.15, 0.6].
inline Graph random_instance(Rng& rng, std::size_t lo, std::size_t hi) {
  const std::size_t n = lo + static_cast<std::size_t>(uniform_index(rng, hi - lo + 1));
  const double p = 0.15 + 0.45 * uniform01(rng);
  return random_connected_graph(n, p, rng);
}

inline Graph random_digraph_instance(Rng& rng, std::size_t lo, std::size_t hi) {
  const std::size_t n = lo + static_cast<std::size_t>(uniform_index(rng, hi - lo + 1));
  const double p = 0.05 + 0.3 * uniform01(rng);
  return random_strongly_connected_digraph(n, p, rng);
}

/// Up to k distinct candidate links of g chosen uniformly.
inline std::vector<Link> random_link_subset(const Graph& g, std::size_t k, Rng& rng) {
  std::vector<Link> c = candidate_links(g);
  k = std::min(k, c.size());
  for (std::size_t i = 0; i < k; ++i)
    std::swap(c[i], c[i + static_cast<std::size_t>(uniform_index(rng, c.size() - i))]);
  c.resize(k);
  return c;
}

/// Betweenness by enumerating every shortest path between every pair with
/// Floyd-Warshall distances and path counts. Mirrors the Brandes convention:
/// undirected pairs once, directed pairs ordered.
inline std::vector<double> naive_betweenness(const Graph& g) {
  const std::size_t n = g.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  std::vector<std::vector<double>> paths(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0.0;
    paths[i][i] = 1.0;
  }
  // Path counts via BFS layers from each source (independent of Brandes'
  // dependency accumulation).
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> frontier{s};
    double level = 0.0;
    while (!frontier.empty()) {
      std::vector<std::size_t> next;
      level += 1.0;
      for (std::size_t v : frontier)
        for (std::size_t w : g.out_neighbors(v)) {
          if (d[s][w] == inf) {
            d[s][w] = level;
            next.push_back(w);
          }
          if (d[s][w] == level) paths[s][w] += paths[s][v];
        }
      frontier = std::move(next);
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t || d[s][t] == inf) continue;
      if (!g.directed() && t < s) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (v == s || v == t) continue;
        if (d[s][v] + d[v][t] == d[s][t]) out[v] += paths[s][v] * paths[v][t] / paths[s][t];
      }
    }
  return out;
}

/// Truncated Taylor series with scaling and squaring, accurate to roughly
/// machine precision for the small matrices used in tests.
inline Matrix taylor_expm(const Matrix& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Matrix a = m / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(m.rows(), m.cols());
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Second-order eigenvalue perturbation of the Fiedler value from the full
/// spectrum: x^T dQ x + sum over other modes of (x_k^T dQ x)^2 / (mu - lambda_k).
inline double full_spectrum_second_order(const Matrix& q, const Matrix& dq) {
  const auto spec = eig_symmetric(q);
  const Vector x = spec.vectors.col(1);
  double total = x.dot(dq * x);
  for (Eigen::Index k = 0; k < q.rows(); ++k) {
    if (k == 1) continue;
    const double c = spec.vectors.col(k).dot(dq * x);
    total += c * c / (spec.values(1) - spec.values(k));
  }
  return total;
}

}  // namespace algconn::fixtures
