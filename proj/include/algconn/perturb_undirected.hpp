#pragma once

// Shift operator R = I - eps Q - J/N and the perturbation estimates of the
// algebraic connectivity built on its dominant eigenpair.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "algconn/error.hpp"
#include "algconn/generators.hpp"
#include "algconn/graph.hpp"
#include "algconn/spectral.hpp"

namespace algconn {

/// R = I - eps Q - J/N with J the all-ones matrix, together with its largest
/// eigenvalue lambda1 and unit eigenvector z (orthogonal to the ones vector).
struct ShiftOperator {
  double epsilon = 0.0;
  Matrix r;
  double lambda1 = 0.0;
  Vector z;
  double theta = 0.0;  // epsilon / lambda1
  std::size_t iterations = 0;

  std::size_t size() const { return static_cast<std::size_t>(z.size()); }
  /// Algebraic connectivity recovered from the shift: (1 - lambda1) / eps.
  double mu() const { return (1.0 - lambda1) / epsilon; }
};

/// A set of added links and its Laplacian Delta Q.
struct SubgraphPerturbation {
  std::vector<Link> links;
  Matrix dq;
  bool directed = false;

  std::size_t k() const { return links.size(); }
};

/// Laplacian of a link set on n nodes. Undirected links are canonicalised;
/// directed links i -> j add +1 at (j, j) and -1 at (j, i).
inline SubgraphPerturbation make_perturbation(std::size_t n, std::vector<Link> links,
                                              bool directed = false) {
  const Graph pattern = Graph::from_links(n, directed, links);
  if (pattern.link_count() != links.size()) throw UsageError("perturbation has duplicate links");
  return {pattern.links(), laplacian(pattern).q, directed};
}

inline double default_epsilon(std::size_t max_degree) {
  return 1.0 / (static_cast<double>(max_degree) + 1.0);
}

namespace detail {
/// Anderson-Morley bound max over links of d_i + d_j on the largest
/// Laplacian eigenvalue, read off an undirected Laplacian.
inline double laplacian_norm_bound(const Matrix& q) {
  double bound = 0.0;
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = i + 1; j < q.cols(); ++j)
      if (q(i, j) != 0.0) bound = std::max(bound, q(i, i) + q(j, j));
  return bound;
}
}  // namespace detail

/// Builds R and its dominant eigenpair by power iteration with the all-ones
/// direction deflated each step. eps defaults to 1 / (d_max + 1).
inline ShiftOperator build_shift_operator(const LaplacianMatrix& lap,
                                          std::optional<double> epsilon = std::nullopt,
                                          PowerOptions power = {}) {
  if (lap.kind != LaplacianKind::undirected)
    throw UsageError("build_shift_operator expects an undirected Laplacian");
  const auto n = lap.q.rows();
  if (n < 2) throw DataError("shift operator needs at least two nodes");
  if (!is_connected(structure_of(lap))) throw DataError("graph is not connected");

  const double dmax = lap.q.diagonal().maxCoeff();
  const double eps = epsilon.value_or(1.0 / (dmax + 1.0));
  if (!(eps > 0.0)) throw UsageError("epsilon must be positive");

  ShiftOperator s;
  s.epsilon = eps;
  s.r = Matrix::Identity(n, n) - eps * lap.q -
        Matrix::Constant(n, n, 1.0 / static_cast<double>(n));

  // Every non-deflated eigenvalue of R is >= 1 - eps * bound; shifting by
  // that amount makes the largest one dominant in magnitude.
  power.shift = std::max(0.0, eps * detail::laplacian_norm_bound(lap.q) - 1.0);
  power.deflate = {Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)))};
  const DominantPair pair = power_iteration(s.r, power);
  if (!pair.converged)
    throw NumericalError("shift operator: power iteration did not converge after " +
                         std::to_string(pair.iterations) + " iterations (residual " +
                         std::to_string(pair.residual) + ")");
  if (pair.value <= 1e-12)
    throw NumericalError("shift operator: lambda1(R) = " + std::to_string(pair.value) +
                         " is not positive; use a smaller epsilon");
  s.lambda1 = pair.value;
  s.z = pair.vector;
  s.theta = eps / s.lambda1;
  s.iterations = pair.iterations;
  return s;
}

inline ShiftOperator build_shift_operator(const Graph& g,
                                          std::optional<double> epsilon = std::nullopt,
                                          PowerOptions power = {}) {
  return build_shift_operator(laplacian(g), epsilon, std::move(power));
}

namespace detail {
inline void require_undirected(const SubgraphPerturbation& p, std::size_t n) {
  if (p.directed) throw UsageError("expected an undirected perturbation");
  if (static_cast<std::size_t>(p.dq.rows()) != n)
    throw UsageError("perturbation size does not match operator");
}

/// Delta Q z evaluated link by link.
inline Vector dq_times(const SubgraphPerturbation& p, const Vector& z) {
  Vector w = Vector::Zero(z.size());
  for (const Link& l : p.links) {
    const auto i = static_cast<Eigen::Index>(l.source);
    const auto j = static_cast<Eigen::Index>(l.target);
    const double d = z(i) - z(j);
    w(i) += d;
    w(j) -= d;
  }
  return w;
}
}  // namespace detail

/// z^T dQ z = sum over added links of (z_i - z_j)^2.
inline double estimate_mu_first_order(const ShiftOperator& s, const SubgraphPerturbation& p) {
  detail::require_undirected(p, s.size());
  double sum = 0.0;
  for (const Link& l : p.links) {
    const double d = s.z(static_cast<Eigen::Index>(l.source)) - s.z(static_cast<Eigen::Index>(l.target));
    sum += d * d;
  }
  return sum;
}

/// z^T dQ z - theta z^T dQ^2 z.
inline double estimate_mu_second_order(const ShiftOperator& s, const SubgraphPerturbation& p) {
  const double first = estimate_mu_first_order(s, p);
  return first - s.theta * detail::dq_times(p, s.z).squaredNorm();
}

/// Impact of an added subgraph; identical to the second-order estimate.
inline double impact(const ShiftOperator& s, const SubgraphPerturbation& p) {
  return estimate_mu_second_order(s, p);
}

struct CrossTermBreakdown {
  double link_term = 0.0;   // 2 sum_links (z_i - z_j)^2
  double cross_term = 0.0;  // 2 sum over link pairs sharing j of (z_i - z_j)(z_k - z_j)
  double total = 0.0;
  double direct = 0.0;      // z^T dQ^2 z from the matrix
};

/// Expanded evaluation of z^T dQ^2 z: each link once in the first sum, each
/// unordered pair of distinct links sharing a node once in the second.
/// Throws NumericalError when it disagrees with the matrix product.
inline CrossTermBreakdown multi_link_cross_term(const ShiftOperator& s,
                                                const SubgraphPerturbation& p) {
  detail::require_undirected(p, s.size());
  const Vector& z = s.z;
  CrossTermBreakdown out;
  std::vector<std::vector<std::size_t>> others(s.size());
  for (const Link& l : p.links) {
    const double d = z(static_cast<Eigen::Index>(l.source)) - z(static_cast<Eigen::Index>(l.target));
    out.link_term += 2.0 * d * d;
    others[l.source].push_back(l.target);
    others[l.target].push_back(l.source);
  }
  for (std::size_t j = 0; j < others.size(); ++j) {
    const double zj = z(static_cast<Eigen::Index>(j));
    const auto& o = others[j];
    for (std::size_t a = 0; a < o.size(); ++a)
      for (std::size_t b = a + 1; b < o.size(); ++b)
        out.cross_term += 2.0 * (z(static_cast<Eigen::Index>(o[a])) - zj) *
                          (z(static_cast<Eigen::Index>(o[b])) - zj);
  }
  out.total = out.link_term + out.cross_term;
  out.direct = z.dot(p.dq * (p.dq * z));
  if (std::abs(out.total - out.direct) > 1e-10 * std::max(1.0, std::abs(out.direct)))
    throw NumericalError("multi_link_cross_term: expansion disagrees with matrix evaluation");
  return out;
}

/// |z_i - z_j|.
inline double link_score_undirected(const ShiftOperator& s, Link c) {
  return std::abs(s.z(static_cast<Eigen::Index>(c.source)) - s.z(static_cast<Eigen::Index>(c.target)));
}

/// delta = 1 - theta (K + 1); may be <= 0.
inline double delta_constant(double theta, std::size_t k) {
  return 1.0 - theta * (static_cast<double>(k) + 1.0);
}
inline double delta_constant(const ShiftOperator& s, std::size_t k) {
  return delta_constant(s.theta, k);
}

/// True when the greedy guarantee applies: 0 < delta <= 1 and
/// (1 - delta) / (1 + delta) <= 1 / K.
inline bool performance_bound_applies(double delta, std::size_t k) {
  return k >= 1 && delta > 0.0 && delta <= 1.0 &&
         (1.0 - delta) / (1.0 + delta) <= 1.0 / static_cast<double>(k);
}

/// Approximation ratio of greedy maximisation of the impact function over K
/// links; nullopt when the applicability condition fails.
inline std::optional<double> performance_bound(double delta, std::size_t k) {
  if (!performance_bound_applies(delta, k)) return std::nullopt;
  const double kk = static_cast<double>(k);
  const double d2 = delta * delta;
  const double lead = 1.0 / (1.0 + kk * (1.0 - d2) / d2);
  const double tail = std::pow(delta, 2.0 * kk) * std::pow(1.0 - 1.0 / kk, kk);
  return lead * (1.0 - tail);
}

// ---------------------------------------------------------------------------
// Non-submodularity witness

/// Link sets A subset B and an extra link s with
/// E(A + s) - E(A) < E(B + s) - E(B) under the operator of `graph`.
struct SubmodularityWitness {
  Graph graph;
  std::vector<Link> a;
  std::vector<Link> b;
  Link extra;
  double gain_small = 0.0;
  double gain_large = 0.0;
};

inline double impact_of(const ShiftOperator& s, std::size_t n, std::vector<Link> links) {
  return impact(s, make_perturbation(n, std::move(links)));
}

/// Exhaustive search over connected graphs on 3..max_nodes nodes with a
/// simple Fiedler value, trying A = {} and B = {y}. The first violation by
/// more than `margin` in enumeration order is returned.
inline std::optional<SubmodularityWitness> find_nonsubmodular_witness(std::size_t max_nodes,
                                                                      double margin = 1e-9) {
  std::optional<SubmodularityWitness> found;
  for (std::size_t n = 3; n <= max_nodes && !found; ++n) {
    for_each_graph(n, false, [&](const Graph& g) {
      if (!is_connected(g)) return false;
      const auto cands = candidate_links(g);
      if (cands.size() < 2) return false;
      const auto spec = eig_symmetric(laplacian(g).q, false);
      if (spec.values(2) - spec.values(1) < 1e-6) return false;
      const ShiftOperator op = build_shift_operator(g);
      for (const Link& y : cands) {
        const double ey = impact_of(op, n, {y});
        for (const Link& s : cands) {
          if (s == y) continue;
          const double small = impact_of(op, n, {s});
          const double large = impact_of(op, n, {y, s}) - ey;
          if (small < large - margin) {
            found = SubmodularityWitness{g, {}, {y}, s, small, large};
            return true;
          }
        }
      }
      return false;
    });
  }
  return found;
}

}  // namespace algconn
