#pragma once

// Small deterministic and seeded graph families used by tests, the CLI and
// the brute-force witness searches.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "algconn/error.hpp"
#include "algconn/graph.hpp"
#include "algconn/random.hpp"

namespace algconn {

inline Graph path_graph(std::size_t n, bool directed = false) {
  std::vector<Link> links;
  for (std::size_t i = 0; i + 1 < n; ++i) links.push_back({i, i + 1});
  return Graph::from_links(n, directed, links);
}

/// Cycle 0 - 1 - ... - (n-1) - 0; the directed version runs i -> i+1.
inline Graph cycle_graph(std::size_t n, bool directed = false) {
  if (n < 3) throw UsageError("cycle needs at least 3 nodes");
  std::vector<Link> links;
  for (std::size_t i = 0; i < n; ++i) links.push_back({i, (i + 1) % n});
  return Graph::from_links(n, directed, links);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Link> links;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) links.push_back({i, j});
  return Graph::from_links(n, false, links);
}

/// Star on n nodes with hub 0.
inline Graph star_graph(std::size_t n) {
  std::vector<Link> links;
  for (std::size_t i = 1; i < n; ++i) links.push_back({0, i});
  return Graph::from_links(n, false, links);
}

/// G(n, p) conditioned on connectivity by resampling.
inline Graph random_connected_graph(std::size_t n, double p, Rng& rng) {
  for (;;) {
    std::vector<Link> links;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (uniform01(rng) < p) links.push_back({i, j});
    Graph g = Graph::from_links(n, false, links);
    if (is_connected(g)) return g;
  }
}

/// Random Hamiltonian cycle plus independent extra arcs with probability p.
inline Graph random_strongly_connected_digraph(std::size_t n, double p, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
  std::vector<Link> links;
  for (std::size_t i = 0; i < n; ++i) links.push_back({perm[i], perm[(i + 1) % n]});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && uniform01(rng) < p) links.push_back({i, j});
  return Graph::from_links(n, true, links);
}

/// Undirected graph with exactly k links drawn uniformly from the pairs of
/// n nodes (n (n-1) / 2 >= k).
inline Graph random_k_link_graph(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<Link> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
  if (k > pairs.size()) throw UsageError("too many links for node count");
  for (std::size_t i = 0; i < k; ++i)
    std::swap(pairs[i], pairs[i + uniform_index(rng, pairs.size() - i)]);
  pairs.resize(k);
  return Graph::from_links(n, false, pairs);
}

/// Every link set on n nodes, in increasing bitmask order over the
/// lexicographic candidate list. fn(Graph) returning true stops the scan.
template <class Fn>
bool for_each_graph(std::size_t n, bool directed, Fn&& fn) {
  const std::vector<Link> all = candidate_links(Graph(n, directed));
  if (all.size() >= 63) throw UsageError("for_each_graph: too many node pairs");
  const std::uint64_t count = std::uint64_t{1} << all.size();
  std::vector<Link> links;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    links.clear();
    for (std::size_t b = 0; b < all.size(); ++b)
      if (mask >> b & 1U) links.push_back(all[b]);
    if (fn(Graph::from_links(n, directed, links))) return true;
  }
  return false;
}

/// Parses a generator spec: path:N, cycle:N, dcycle:N, dpath:N, complete:N,
/// star:N. Returns false if `spec` is not a generator name.
inline bool generate_named(const std::string& spec, Graph& out) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return false;
  const std::string kind = spec.substr(0, colon);
  std::size_t n = 0;
  try {
    n = std::stoul(spec.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("bad generator size in '" + spec + "'");
  }
  if (kind == "path") out = path_graph(n);
  else if (kind == "dpath") out = path_graph(n, true);
  else if (kind == "cycle") out = cycle_graph(n);
  else if (kind == "dcycle") out = cycle_graph(n, true);
  else if (kind == "complete") out = complete_graph(n);
  else if (kind == "star") out = star_graph(n);
  else return false;
  return true;
}

}  // namespace algconn
