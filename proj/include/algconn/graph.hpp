#pragma once

// Unweighted graphs with stable dense node indexing, edge-list ingestion,
// component extraction and Laplacian construction.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "algconn/error.hpp"

namespace algconn {

/// A link (i, j). Directed graphs read it as the arc i -> j; undirected
/// graphs keep it in canonical order source < target.
struct Link {
  std::size_t source = 0;
  std::size_t target = 0;

  auto operator<=>(const Link&) const = default;
};

inline Link reversed(Link l) { return {l.target, l.source}; }

class Graph {
 public:
  Graph() = default;

  /// Empty graph on n nodes. Missing labels default to the decimal index.
  Graph(std::size_t n, bool directed, std::vector<std::string> labels = {})
      : n_(n), directed_(directed), labels_(std::move(labels)), out_(n), in_(n) {
    if (labels_.empty()) {
      labels_.reserve(n);
      for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
    }
    if (labels_.size() != n) throw UsageError("label count does not match node count");
  }

  /// Builds a graph from links; duplicates collapse, self-loops are rejected.
  static Graph from_links(std::size_t n, bool directed, std::span<const Link> links,
                          std::vector<std::string> labels = {}) {
    Graph g(n, directed, std::move(labels));
    for (const Link& l : links) {
      g.check_endpoints(l);
      if (!g.has_link(l.source, l.target)) g.insert(l);
    }
    return g;
  }

  std::size_t node_count() const noexcept { return n_; }
  std::size_t link_count() const noexcept { return links_.size(); }
  bool directed() const noexcept { return directed_; }

  /// Symmetric for undirected graphs.
  bool has_link(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) return false;
    const auto& row = out_[i];
    return std::binary_search(row.begin(), row.end(), j);
  }
  bool has_link(Link l) const { return has_link(l.source, l.target); }

  /// Sorted; undirected links appear once with source < target.
  const std::vector<Link>& links() const noexcept { return links_; }

  /// Successors for directed graphs, neighbours for undirected ones.
  const std::vector<std::size_t>& out_neighbors(std::size_t i) const { return out_.at(i); }
  /// Predecessors for directed graphs, neighbours for undirected ones.
  const std::vector<std::size_t>& in_neighbors(std::size_t i) const { return in_.at(i); }

  std::size_t out_degree(std::size_t i) const { return out_.at(i).size(); }
  std::size_t in_degree(std::size_t i) const { return in_.at(i).size(); }
  std::size_t degree(std::size_t i) const {
    return directed_ ? in_degree(i) + out_degree(i) : out_degree(i);
  }

  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Canonical storage form of a link for this graph's directedness.
  Link canonical(Link l) const {
    if (!directed_ && l.source > l.target) std::swap(l.source, l.target);
    return l;
  }

  /// Copy of this graph with one more link.
  Graph with_link(Link l) const {
    check_endpoints(l);
    if (has_link(l)) throw UsageError("link already present: " + describe(l));
    Graph g = *this;
    g.insert(l);
    return g;
  }

  std::string describe(Link l) const {
    return label(l.source) + (directed_ ? "->" : "--") + label(l.target);
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.directed_ == b.directed_ && a.links_ == b.links_ &&
           a.labels_ == b.labels_;
  }

 private:
  void check_endpoints(Link l) const {
    if (l.source >= n_ || l.target >= n_) throw UsageError("link endpoint out of range");
    if (l.source == l.target) throw UsageError("self-loop at node " + label(l.source));
  }

  static void sorted_insert(std::vector<std::size_t>& v, std::size_t x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  }

  void insert(Link l) {
    l = canonical(l);
    links_.insert(std::lower_bound(links_.begin(), links_.end(), l), l);
    sorted_insert(out_[l.source], l.target);
    sorted_insert(in_[l.target], l.source);
    if (!directed_) {
      sorted_insert(out_[l.target], l.source);
      sorted_insert(in_[l.source], l.target);
    }
  }

  std::size_t n_ = 0;
  bool directed_ = false;
  std::vector<std::string> labels_;
  std::vector<Link> links_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

/// Value-semantic link insertion; throws UsageError on duplicates or self-loops.
inline Graph add_link(const Graph& g, Link c) { return g.with_link(c); }

// ---------------------------------------------------------------------------
// Edge-list ingestion

struct EdgeListResult {
  Graph graph;
  std::size_t self_loops_skipped = 0;
  std::size_t duplicates_collapsed = 0;
};

/// Reads whitespace-separated "source target" label pairs, one per line.
/// Lines starting with '#' or '%' and blank lines are ignored; CRLF and a
/// leading UTF-8 BOM are tolerated. Labels get dense indices in first-seen
/// order.
inline EdgeListResult parse_edge_list(std::istream& in, bool directed) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> labels;
  std::vector<Link> raw;
  EdgeListResult result;

  auto intern = [&](const std::string& s) {
    auto [it, fresh] = index.try_emplace(s, labels.size());
    if (fresh) labels.push_back(s);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == '%') continue;

    std::istringstream tokens(line);
    std::vector<std::string> fields;
    for (std::string tok; tokens >> tok;) fields.push_back(std::move(tok));
    if (fields.size() != 2)
      throw ParseError(line_no, "expected 2 tokens, found " + std::to_string(fields.size()));

    const std::size_t a = intern(fields[0]);
    const std::size_t b = intern(fields[1]);
    if (a == b) {
      ++result.self_loops_skipped;
      continue;
    }
    raw.push_back({a, b});
  }

  const std::size_t n = labels.size();
  Graph g = Graph::from_links(n, directed, raw, std::move(labels));
  result.duplicates_collapsed = raw.size() - g.link_count();
  result.graph = std::move(g);
  return result;
}

inline EdgeListResult parse_edge_list(const std::string& text, bool directed) {
  std::istringstream in(text);
  return parse_edge_list(in, directed);
}

/// Writes the graph back in edge-list form using its labels.
inline std::string to_edge_list(const Graph& g) {
  std::string out;
  for (const Link& l : g.links()) out += g.label(l.source) + ' ' + g.label(l.target) + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Structure

/// Subgraph induced on `nodes` (any order; relative index order is kept).
inline Graph induced_subgraph(const Graph& g, std::vector<std::size_t> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<std::size_t> remap(g.node_count(), SIZE_MAX);
  std::vector<std::string> labels;
  labels.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    remap.at(nodes[k]) = k;
    labels.push_back(g.label(nodes[k]));
  }
  std::vector<Link> links;
  for (const Link& l : g.links())
    if (remap[l.source] != SIZE_MAX && remap[l.target] != SIZE_MAX)
      links.push_back({remap[l.source], remap[l.target]});
  return Graph::from_links(nodes.size(), g.directed(), links, std::move(labels));
}

/// Connected components of an undirected graph (weak components of a
/// directed one), each sorted, listed by smallest member.
inline std::vector<std::vector<std::size_t>> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (auto* nbrs : {&g.out_neighbors(u), &g.in_neighbors(u)})
        for (std::size_t v : *nbrs)
          if (!seen[v]) {
            seen[v] = 1;
            stack.push_back(v);
          }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

/// Strongly connected components (iterative Tarjan), each sorted, listed by
/// smallest member.
inline std::vector<std::vector<std::size_t>> strongly_connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kUnvisited = SIZE_MAX;
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;

  struct Frame {
    std::size_t node;
    std::size_t next;
  };
  std::vector<Frame> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& succ = g.out_neighbors(f.node);
      if (f.next < succ.size()) {
        const std::size_t v = succ[f.next++];
        if (index[v] == kUnvisited) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = 1;
          call.push_back({v, 0});
        } else if (on_stack[v]) {
          low[f.node] = std::min(low[f.node], index[v]);
        }
        continue;
      }
      const std::size_t u = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[u]);
      if (low[u] == index[u]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != u);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

namespace detail {
inline const std::vector<std::size_t>& largest_of(
    const std::vector<std::vector<std::size_t>>& comps) {
  // comps are listed by smallest member, so the first maximum wins ties.
  auto best = comps.begin();
  for (auto it = comps.begin(); it != comps.end(); ++it)
    if (it->size() > best->size()) best = it;
  return *best;
}
}  // namespace detail

inline bool is_connected(const Graph& g) {
  return g.node_count() > 0 && connected_components(g).size() == 1;
}

inline bool is_strongly_connected(const Graph& g) {
  if (g.node_count() == 0) return false;
  if (!g.directed()) return is_connected(g);
  return strongly_connected_components(g).size() == 1;
}

/// Largest connected component of an undirected graph, relabelled densely.
inline Graph giant_component(const Graph& g) {
  if (g.directed()) throw UsageError("giant_component expects an undirected graph");
  if (g.node_count() == 0) throw DataError("empty graph has no giant component");
  return induced_subgraph(g, detail::largest_of(connected_components(g)));
}

/// Largest strongly connected component of a directed graph.
inline Graph largest_scc(const Graph& g) {
  if (!g.directed()) throw UsageError("largest_scc expects a directed graph");
  if (g.node_count() == 0) throw DataError("empty graph has no strongly connected component");
  return induced_subgraph(g, detail::largest_of(strongly_connected_components(g)));
}

/// Directed graph carrying both arcs for every undirected link.
inline Graph bidirected(const Graph& g) {
  if (g.directed()) return g;
  std::vector<Link> arcs;
  arcs.reserve(2 * g.link_count());
  for (const Link& l : g.links()) {
    arcs.push_back(l);
    arcs.push_back(reversed(l));
  }
  return Graph::from_links(g.node_count(), true, arcs, g.labels());
}

/// Undirected graph with a link wherever either arc is present.
inline Graph underlying_undirected(const Graph& g) {
  if (!g.directed()) return g;
  return Graph::from_links(g.node_count(), false, g.links(), g.labels());
}

// ---------------------------------------------------------------------------
// Laplacian and candidates

enum class LaplacianKind { undirected, generalized };

struct LaplacianMatrix {
  Eigen::MatrixXd q;
  LaplacianKind kind = LaplacianKind::undirected;

  std::size_t size() const { return static_cast<std::size_t>(q.rows()); }
};

/// Undirected: Q = diag(d) - A. Directed: Q = diag(d_in) - A^T, so the arc
/// i -> j contributes +1 at (j, j) and -1 at (j, i).
inline LaplacianMatrix laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  // Integer assembly keeps row sums exactly zero.
  Eigen::MatrixXi qi = Eigen::MatrixXi::Zero(n, n);
  for (const Link& l : g.links()) {
    const auto i = static_cast<Eigen::Index>(l.source);
    const auto j = static_cast<Eigen::Index>(l.target);
    qi(j, j) += 1;
    qi(j, i) -= 1;
    if (!g.directed()) {
      qi(i, i) += 1;
      qi(i, j) -= 1;
    }
  }
  return {qi.cast<double>(),
          g.directed() ? LaplacianKind::generalized : LaplacianKind::undirected};
}

/// Recovers the link pattern encoded by a Laplacian's off-diagonal entries.
inline Graph structure_of(const LaplacianMatrix& lap) {
  const auto n = lap.q.rows();
  const bool directed = lap.kind == LaplacianKind::generalized;
  std::vector<Link> links;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j && lap.q(j, i) != 0.0)
        links.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
  return Graph::from_links(static_cast<std::size_t>(n), directed, links);
}

/// All absent non-loop links in lexicographic order.
inline std::vector<Link> candidate_links(const Graph& g) {
  std::vector<Link> out;
  const std::size_t n = g.node_count();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = g.directed() ? 0 : i + 1; j < n; ++j)
      if (i != j && !g.has_link(i, j)) out.push_back({i, j});
  return out;
}

/// Largest in-degree; equal to the largest degree for undirected graphs.
inline std::size_t max_in_degree(const Graph& g) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i)
    d = std::max(d, g.directed() ? g.in_degree(i) : g.degree(i));
  return d;
}

}  // namespace algconn
