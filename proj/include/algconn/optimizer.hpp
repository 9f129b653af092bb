#pragma once

// Link-addition strategies: exact and metric greedy for mu and Re(mu),
// direction variants, centrality baselines and exhaustive search.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algconn/centrality.hpp"
#include "algconn/error.hpp"
#include "algconn/graph.hpp"
#include "algconn/parallel.hpp"
#include "algconn/perturb_directed.hpp"
#include "algconn/perturb_undirected.hpp"
#include "algconn/random.hpp"
#include "algconn/spectral.hpp"

namespace algconn {

enum class Strategy {
  exact_mu,
  metric_omega,
  exact_remu,
  metric_lower,
  metric_lower_inverse,
  metric_upper,
  undirected_handling,
  min_degree_product,
  min_eigcent_product,
  min_betweenness_product,
  brute_force,
};

inline constexpr std::string_view tag(Strategy s) {
  switch (s) {
    case Strategy::exact_mu: return "exact-mu";
    case Strategy::metric_omega: return "metric-omega";
    case Strategy::exact_remu: return "exact-remu";
    case Strategy::metric_lower: return "metric-lower";
    case Strategy::metric_lower_inverse: return "metric-lower-inverse";
    case Strategy::metric_upper: return "metric-upper";
    case Strategy::undirected_handling: return "undirected-handling";
    case Strategy::min_degree_product: return "min-degree-product";
    case Strategy::min_eigcent_product: return "min-eigcent-product";
    case Strategy::min_betweenness_product: return "min-betweenness-product";
    case Strategy::brute_force: return "brute-force";
  }
  return "?";
}

/// Accepts the canonical tags plus the short baseline names degree,
/// eigenvector and betweenness.
inline Strategy parse_strategy(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Strategy::brute_force); ++i) {
    const auto s = static_cast<Strategy>(i);
    if (tag(s) == name) return s;
  }
  if (name == "degree") return Strategy::min_degree_product;
  if (name == "eigenvector") return Strategy::min_eigcent_product;
  if (name == "betweenness") return Strategy::min_betweenness_product;
  throw UsageError("unknown strategy '" + std::string(name) + "'");
}

inline bool requires_directed(Strategy s) {
  switch (s) {
    case Strategy::exact_remu:
    case Strategy::metric_lower:
    case Strategy::metric_lower_inverse:
    case Strategy::metric_upper:
    case Strategy::undirected_handling: return true;
    default: return false;
  }
}

/// brute-force works on either kind; everything else is kind-specific.
inline void require_compatible(Strategy s, const Graph& g) {
  if (s == Strategy::brute_force) return;
  if (requires_directed(s) != g.directed())
    throw UsageError("strategy " + std::string(tag(s)) + " requires a " +
                     (requires_directed(s) ? "directed" : "undirected") + " graph");
}

struct OptimizerOptions {
  unsigned threads = 1;
  std::uint64_t seed = 42;
  std::optional<double> epsilon;
  std::optional<double> alpha;
  bool exact_w = false;
  LowerMetricForm lower_form = LowerMetricForm::published;
  /// Baselines: score nodes once on the input graph instead of every step.
  bool frozen_scores = false;
  PowerOptions power;
};

struct GreedyStep {
  std::size_t iteration = 0;
  Link link;
  double score = 0.0;
  double objective = 0.0;  // exact mu or Re(mu) after the addition
  double wall_ms = 0.0;
  bool fallback = false;   // inverse-direction strategy inserted the original arc
};

struct GreedyTrace {
  Strategy strategy = Strategy::exact_mu;
  std::size_t k = 0;
  double initial_objective = 0.0;
  std::vector<GreedyStep> steps;
  bool truncated = false;  // ran out of candidates before k steps
  Graph graph;             // input graph plus every inserted link
};

/// Relative tolerance under which two scores count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Index of the maximum score; near-ties within kTieTolerance keep the
/// earliest index, and candidates are lexicographically ordered.
inline std::size_t select_best(const std::vector<double>& scores) {
  if (scores.empty()) throw UsageError("select_best: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best] + kTieTolerance * std::max(1.0, std::abs(scores[best])))
      best = i;
  return best;
}

/// Exact mu or Re(mu), matching the graph kind.
inline double exact_objective(const Graph& g) {
  if (g.directed()) return generalized_algebraic_connectivity(g);
  const auto mu = algebraic_connectivity(g);
  if (!mu.connected) throw DataError("graph is not connected");
  return mu.value;
}

namespace detail {

inline double mu_with_link(const Matrix& q, Link c) {
  Matrix m = q;
  const auto i = static_cast<Eigen::Index>(c.source);
  const auto j = static_cast<Eigen::Index>(c.target);
  m(i, i) += 1.0;
  m(j, j) += 1.0;
  m(i, j) -= 1.0;
  m(j, i) -= 1.0;
  return eig_symmetric(m, false).values(1);
}

inline double remu_with_arc(const Matrix& q, Link c) {
  Matrix m = q;
  const auto i = static_cast<Eigen::Index>(c.source);
  const auto j = static_cast<Eigen::Index>(c.target);
  m(j, j) += 1.0;
  m(j, i) -= 1.0;
  return remu_from_laplacian(m);
}

inline void require_start(const Graph& g) {
  if (g.directed() ? !is_strongly_connected(g) : !is_connected(g))
    throw DataError(g.directed() ? "graph is not strongly connected" : "graph is not connected");
}

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

/// Shared loop: score every candidate (higher is better), insert the best.
template <class Scorer>
GreedyTrace greedy_loop(const Graph& start, std::size_t k, Strategy strategy, Scorer&& scorer) {
  require_start(start);
  GreedyTrace trace;
  trace.strategy = strategy;
  trace.k = k;
  trace.graph = start;
  trace.initial_objective = exact_objective(start);
  for (std::size_t it = 1; it <= k; ++it) {
    const auto t0 = Clock::now();
    const auto cands = candidate_links(trace.graph);
    if (cands.empty()) {
      trace.truncated = true;
      break;
    }
    const std::vector<double> scores = scorer(trace.graph, cands);
    const std::size_t best = select_best(scores);
    trace.graph = trace.graph.with_link(cands[best]);
    GreedyStep step;
    step.iteration = it;
    step.link = cands[best];
    step.score = scores[best];
    step.objective = exact_objective(trace.graph);
    step.wall_ms = elapsed_ms(t0);
    trace.steps.push_back(step);
  }
  return trace;
}

}  // namespace detail

/// Greedy on the exact algebraic connectivity of every candidate graph.
inline GreedyTrace greedy_exact_undirected(const Graph& g, std::size_t k,
                                           const OptimizerOptions& opt = {}) {
  require_compatible(Strategy::exact_mu, g);
  return detail::greedy_loop(g, k, Strategy::exact_mu, [&](const Graph& cur, const auto& cands) {
    const Matrix q = laplacian(cur).q;
    return parallel_map(cands.size(), opt.threads,
                        [&](std::size_t c) { return detail::mu_with_link(q, cands[c]); });
  });
}

/// Greedy on |z_i - z_j| with z recomputed from the current graph each step.
inline GreedyTrace greedy_metric_undirected(const Graph& g, std::size_t k,
                                            const OptimizerOptions& opt = {}) {
  require_compatible(Strategy::metric_omega, g);
  return detail::greedy_loop(g, k, Strategy::metric_omega,
                             [&](const Graph& cur, const auto& cands) {
                               const ShiftOperator op =
                                   build_shift_operator(cur, opt.epsilon, opt.power);
                               return parallel_map(cands.size(), opt.threads, [&](std::size_t c) {
                                 return link_score_undirected(op, cands[c]);
                               });
                             });
}

/// Greedy on the exact Re(mu) of every candidate digraph.
inline GreedyTrace greedy_exact_directed(const Graph& g, std::size_t k,
                                         const OptimizerOptions& opt = {}) {
  require_compatible(Strategy::exact_remu, g);
  return detail::greedy_loop(g, k, Strategy::exact_remu, [&](const Graph& cur, const auto& cands) {
    const Matrix q = laplacian(cur).q;
    return parallel_map(cands.size(), opt.threads,
                        [&](std::size_t c) { return detail::remu_with_arc(q, cands[c]); });
  });
}

enum class DirectedMetric { lower, upper };

namespace detail {
inline DirectedContextOptions context_options(const OptimizerOptions& opt) {
  return {opt.epsilon, opt.alpha, opt.exact_w};
}

inline std::vector<double> directed_scores(const Graph& cur, const std::vector<Link>& cands,
                                           DirectedMetric metric, const OptimizerOptions& opt) {
  const DirectedBoundContext ctx = build_directed_context(cur, context_options(opt));
  return parallel_map(cands.size(), opt.threads, [&](std::size_t c) {
    return metric == DirectedMetric::lower ? link_score_lower(ctx, cands[c], opt.lower_form)
                                           : link_score_upper(ctx, cands[c]);
  });
}
}  // namespace detail

/// Greedy on the lower- or upper-bound arc metric, context rebuilt each step.
/// The exact objective is not monotone along the trace.
inline GreedyTrace greedy_metric_directed(const Graph& g, std::size_t k, DirectedMetric metric,
                                          const OptimizerOptions& opt = {}) {
  const Strategy s = metric == DirectedMetric::lower ? Strategy::metric_lower
                                                     : Strategy::metric_upper;
  require_compatible(s, g);
  return detail::greedy_loop(g, k, s, [&](const Graph& cur, const auto& cands) {
    return detail::directed_scores(cur, cands, metric, opt);
  });
}

/// Selects i -> j by the lower metric and inserts j -> i instead. When the
/// reverse arc already exists the original is inserted and flagged.
inline GreedyTrace greedy_inverse_direction(const Graph& g, std::size_t k,
                                            const OptimizerOptions& opt = {}) {
  require_compatible(Strategy::metric_lower_inverse, g);
  detail::require_start(g);
  GreedyTrace trace;
  trace.strategy = Strategy::metric_lower_inverse;
  trace.k = k;
  trace.graph = g;
  trace.initial_objective = exact_objective(g);
  for (std::size_t it = 1; it <= k; ++it) {
    const auto t0 = detail::Clock::now();
    const auto cands = candidate_links(trace.graph);
    if (cands.empty()) {
      trace.truncated = true;
      break;
    }
    const auto scores = detail::directed_scores(trace.graph, cands, DirectedMetric::lower, opt);
    const std::size_t best = select_best(scores);
    GreedyStep step;
    step.iteration = it;
    step.score = scores[best];
    const Link rev = reversed(cands[best]);
    step.fallback = trace.graph.has_link(rev);
    step.link = step.fallback ? cands[best] : rev;
    trace.graph = trace.graph.with_link(step.link);
    step.objective = exact_objective(trace.graph);
    step.wall_ms = detail::elapsed_ms(t0);
    trace.steps.push_back(step);
  }
  return trace;
}

/// Picks the best pair by |z_i - z_j| on the underlying undirected graph,
/// then orients it by a seeded coin flip. A pair whose drawn orientation is
/// already present is skipped in favour of the next best.
inline GreedyTrace greedy_undirected_handling(const Graph& g, std::size_t k,
                                              const OptimizerOptions& opt = {}) {
  require_compatible(Strategy::undirected_handling, g);
  detail::require_start(g);
  Rng rng(opt.seed);
  GreedyTrace trace;
  trace.strategy = Strategy::undirected_handling;
  trace.k = k;
  trace.graph = g;
  trace.initial_objective = exact_objective(g);
  for (std::size_t it = 1; it <= k; ++it) {
    const auto t0 = detail::Clock::now();
    const Graph und = underlying_undirected(trace.graph);
    const auto cands = candidate_links(und);
    // Once every pair is joined in one direction the underlying graph is
    // complete and offers nothing; the missing reverse arcs stay unused.
    if (cands.empty()) {
      trace.truncated = true;
      break;
    }
    const ShiftOperator op = build_shift_operator(und, opt.epsilon, opt.power);
    std::vector<double> scores = parallel_map(cands.size(), opt.threads, [&](std::size_t c) {
      return link_score_undirected(op, cands[c]);
    });
    std::optional<GreedyStep> step;
    for (std::size_t tries = 0; tries < cands.size() && !step; ++tries) {
      const std::size_t best = select_best(scores);
      const Link pair = cands[best];
      const Link arc = coin_flip(rng) ? pair : reversed(pair);
      const double score = scores[best];
      scores[best] = -std::numeric_limits<double>::infinity();
      if (trace.graph.has_link(arc)) continue;
      step = GreedyStep{it, arc, score, 0.0, 0.0, false};
    }
    if (!step) {
      trace.truncated = true;
      break;
    }
    trace.graph = trace.graph.with_link(step->link);
    step->objective = exact_objective(trace.graph);
    step->wall_ms = detail::elapsed_ms(t0);
    trace.steps.push_back(*step);
  }
  return trace;
}

/// Inserts the candidate with the smallest product of endpoint scores.
inline GreedyTrace greedy_baseline(const Graph& g, std::size_t k, ScoreKind kind,
                                   const OptimizerOptions& opt = {}) {
  const Strategy s = kind == ScoreKind::degree        ? Strategy::min_degree_product
                     : kind == ScoreKind::eigenvector ? Strategy::min_eigcent_product
                                                      : Strategy::min_betweenness_product;
  require_compatible(s, g);
  const std::optional<NodeScores> frozen =
      opt.frozen_scores ? std::optional<NodeScores>(node_scores(g, kind)) : std::nullopt;
  return detail::greedy_loop(g, k, s, [&](const Graph& cur, const auto& cands) {
    const NodeScores ns = frozen ? *frozen : node_scores(cur, kind);
    std::vector<double> out(cands.size());
    for (std::size_t c = 0; c < cands.size(); ++c)
      out[c] = -(ns.values[cands[c].source] * ns.values[cands[c].target]);
    return out;
  });
}

// ---------------------------------------------------------------------------
// Exhaustive search

enum class BruteObjective { exact_mu, exact_remu, impact };

struct BruteForceResult {
  std::vector<Link> links;
  double value = 0.0;
  std::size_t evaluated = 0;
};

inline constexpr double kBruteForceLimit = 1e6;

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// Best k-subset of candidate links by exhaustive enumeration in
/// lexicographic subset order (earliest subset wins near-ties). The impact
/// objective uses the shift operator of the input graph throughout.
inline BruteForceResult brute_force_optimal(const Graph& g, std::size_t k, BruteObjective objective,
                                            const OptimizerOptions& opt = {}) {
  if ((objective == BruteObjective::exact_remu) != g.directed())
    throw UsageError("brute-force objective does not match graph kind");
  detail::require_start(g);
  const auto cands = candidate_links(g);
  if (k > cands.size()) throw UsageError("k exceeds the number of candidate links");
  const double subsets = binomial(cands.size(), k);
  if (subsets > kBruteForceLimit)
    throw UsageError("brute force would enumerate " + std::to_string(subsets) +
                     " subsets (limit 1e6); instance too large");

  const std::size_t n = g.node_count();
  const Matrix q = laplacian(g).q;
  std::optional<ShiftOperator> op;
  if (objective == BruteObjective::impact) op = build_shift_operator(g, opt.epsilon, opt.power);

  auto evaluate = [&](const std::vector<Link>& set) {
    if (objective == BruteObjective::impact) return impact(*op, make_perturbation(n, set));
    const SubgraphPerturbation p = make_perturbation(n, set, g.directed());
    const Matrix m = q + p.dq;
    return objective == BruteObjective::exact_mu ? eig_symmetric(m, false).values(1)
                                                 : remu_from_laplacian(m);
  };

  BruteForceResult best;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<Link> set(k);
  bool first = true;
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) set[i] = cands[idx[i]];
    const double v = evaluate(set);
    ++best.evaluated;
    if (first || v > best.value + kTieTolerance * std::max(1.0, std::abs(best.value))) {
      best.value = v;
      best.links = set;
      first = false;
    }
    // next combination
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == cands.size() - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return best;
}

/// Runs any greedy strategy by tag.
inline GreedyTrace run_strategy(const Graph& g, std::size_t k, Strategy s,
                                const OptimizerOptions& opt = {}) {
  require_compatible(s, g);
  switch (s) {
    case Strategy::exact_mu: return greedy_exact_undirected(g, k, opt);
    case Strategy::metric_omega: return greedy_metric_undirected(g, k, opt);
    case Strategy::exact_remu: return greedy_exact_directed(g, k, opt);
    case Strategy::metric_lower: return greedy_metric_directed(g, k, DirectedMetric::lower, opt);
    case Strategy::metric_upper: return greedy_metric_directed(g, k, DirectedMetric::upper, opt);
    case Strategy::metric_lower_inverse: return greedy_inverse_direction(g, k, opt);
    case Strategy::undirected_handling: return greedy_undirected_handling(g, k, opt);
    case Strategy::min_degree_product: return greedy_baseline(g, k, ScoreKind::degree, opt);
    case Strategy::min_eigcent_product: return greedy_baseline(g, k, ScoreKind::eigenvector, opt);
    case Strategy::min_betweenness_product:
      return greedy_baseline(g, k, ScoreKind::betweenness, opt);
    case Strategy::brute_force: {
      const auto r = brute_force_optimal(
          g, k, g.directed() ? BruteObjective::exact_remu : BruteObjective::exact_mu, opt);
      GreedyTrace trace;
      trace.strategy = s;
      trace.k = k;
      trace.graph = g;
      trace.initial_objective = exact_objective(g);
      for (std::size_t i = 0; i < r.links.size(); ++i) {
        trace.graph = trace.graph.with_link(r.links[i]);
        trace.steps.push_back({i + 1, r.links[i], r.value, exact_objective(trace.graph), 0.0, false});
      }
      return trace;
    }
  }
  throw UsageError("unknown strategy");
}

}  // namespace algconn
