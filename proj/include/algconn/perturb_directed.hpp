#pragma once

// Bounds on the change of the generalized algebraic connectivity Re(mu) of a
// directed network: the Hermitian-part lower bound, the exponential-operator
// identity and upper bound, and the two link metrics derived from them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "algconn/error.hpp"
#include "algconn/generators.hpp"
#include "algconn/graph.hpp"
#include "algconn/perturb_undirected.hpp"
#include "algconn/spectral.hpp"

namespace algconn {

enum class NormKind { one, two, inf };

inline std::string to_string(NormKind p) {
  switch (p) {
    case NormKind::one: return "1";
    case NormKind::two: return "2";
    case NormKind::inf: return "inf";
  }
  return "?";
}

struct DirectedContextOptions {
  std::optional<double> epsilon;
  std::optional<double> alpha;
  /// Use the true exponential for W instead of its quadratic expansion.
  bool exact_w = false;
};

struct DirectedBoundContext {
  double epsilon = 0.0;
  double alpha = 0.0;
  Matrix r;             // I - eps Q - J/N
  Matrix h;             // (R + R^T) / 2
  double lambda1_h = 0.0;
  double lambda_min_h = 0.0;
  Vector z;             // unit eigenvector of H at lambda1_h
  Matrix w;             // e^{I - eps Q}, quadratic expansion unless exact_w
  Matrix exp_op;        // e^{I - alpha Q}
  Matrix r_exp;         // e^{I - alpha Q} - e x_N x_N^T

  std::size_t size() const { return static_cast<std::size_t>(z.size()); }
  /// Weight eps / (4 lambda1(H)) of the quadratic penalty.
  double penalty() const { return epsilon / (4.0 * lambda1_h); }
};

inline DirectedBoundContext build_directed_context(const LaplacianMatrix& lap,
                                                   const DirectedContextOptions& opt = {}) {
  if (lap.kind != LaplacianKind::generalized)
    throw UsageError("build_directed_context expects a generalized Laplacian");
  const auto n = lap.q.rows();
  if (n < 2) throw DataError("directed context needs at least two nodes");
  if (!is_strongly_connected(structure_of(lap)))
    throw DataError("graph is not strongly connected");

  const double din_max = lap.q.diagonal().maxCoeff();
  DirectedBoundContext c;
  c.epsilon = opt.epsilon.value_or(1.0 / (din_max + 1.0));
  c.alpha = opt.alpha.value_or(1.0 / (din_max + 1.0));
  if (!(c.epsilon > 0.0) || !(c.alpha > 0.0))
    throw UsageError("epsilon and alpha must be positive");

  const Matrix id = Matrix::Identity(n, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  c.r = id - c.epsilon * lap.q - Matrix::Constant(n, n, inv_n);
  c.h = 0.5 * (c.r + c.r.transpose());
  const auto hs = eig_symmetric(c.h);
  c.lambda1_h = hs.values(n - 1);
  c.lambda_min_h = hs.values(0);
  if (!(c.lambda1_h > 1e-12))
    throw NumericalError("lambda1(H) is not positive; use a smaller epsilon");
  c.z = hs.vectors.col(n - 1);
  detail::flip_to_positive_lead(c.z);

  const Matrix s = id - c.epsilon * lap.q;
  c.w = opt.exact_w ? expm(s) : Matrix(2.0 * id - c.epsilon * lap.q + 0.5 * s * s);

  c.exp_op = expm(id - c.alpha * lap.q);
  c.r_exp = c.exp_op - std::numbers::e * Matrix::Constant(n, n, inv_n);
  return c;
}

inline DirectedBoundContext build_directed_context(const Graph& g,
                                                   const DirectedContextOptions& opt = {}) {
  return build_directed_context(laplacian(g), opt);
}

/// Smallest eigenvalue of Q + Q^T.
inline double hermitian_part_min_eigenvalue(const LaplacianMatrix& lap) {
  return eig_symmetric(lap.q + lap.q.transpose(), false).values(0);
}

/// Whether Q + Q^T is positive semi-definite (min eigenvalue >= -1e-9).
inline bool psd_check(const LaplacianMatrix& lap) {
  return hermitian_part_min_eigenvalue(lap) >= -1e-9;
}

namespace detail {
inline void require_directed(const SubgraphPerturbation& p, std::size_t n) {
  if (!p.directed) throw UsageError("expected a directed perturbation");
  if (static_cast<std::size_t>(p.dq.rows()) != n)
    throw UsageError("perturbation size does not match context");
}
}  // namespace detail

/// (1/2) z^T dQ* z - eps / (4 lambda1(H)) z^T dQ*^2 z with dQ* = dQ + dQ^T.
inline double lower_bound_increment(const DirectedBoundContext& ctx,
                                    const SubgraphPerturbation& p) {
  detail::require_directed(p, ctx.size());
  const Matrix sym = p.dq + p.dq.transpose();
  const Vector sz = sym * ctx.z;
  return 0.5 * ctx.z.dot(sz) - ctx.penalty() * sz.squaredNorm();
}

enum class LowerMetricForm {
  /// (1/2) z_j (z_j - z_i) - c ((2 z_j - z_i)^2 + z_j^2), as published.
  published,
  /// z_j (z_j - z_i) - c (...): the single-arc value of lower_bound_increment.
  substituted,
};

/// Lower-bound metric of the arc i -> j.
inline double link_score_lower(const DirectedBoundContext& ctx, Link c,
                               LowerMetricForm form = LowerMetricForm::published) {
  const double zi = ctx.z(static_cast<Eigen::Index>(c.source));
  const double zj = ctx.z(static_cast<Eigen::Index>(c.target));
  const double lead = zj * (zj - zi) * (form == LowerMetricForm::published ? 0.5 : 1.0);
  const double t = 2.0 * zj - zi;
  return lead - ctx.penalty() * (t * t + zj * zj);
}

/// Upper-bound metric of the arc i -> j: max_k |W_ik - W_jk|.
inline double link_score_upper(const DirectedBoundContext& ctx, Link c) {
  const auto i = static_cast<Eigen::Index>(c.source);
  const auto j = static_cast<Eigen::Index>(c.target);
  return (ctx.w.row(i) - ctx.w.row(j)).cwiseAbs().maxCoeff();
}

/// Largest eigenvalue modulus of the exponential operator.
inline double exponential_spectral_radius(const DirectedBoundContext& ctx) {
  const auto values = eig_general(ctx.r_exp).values;
  std::size_t top = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i]) > std::abs(values[top])) top = i;
  if (detail::has_neighbour(values, top, detail::defect_radius(ctx.r_exp)))
    return std::abs(refined_eigenvalue(ctx.r_exp, values[top]));
  return std::abs(values[top]);
}

/// Re(mu) = (1 - log max_i |lambda_i(R_exp)|) / alpha.
inline double remu_via_exponential(const DirectedBoundContext& ctx) {
  const double rho = exponential_spectral_radius(ctx);
  if (!(rho > 0.0)) throw NumericalError("exponential operator has zero spectral radius");
  return (1.0 - std::log(rho)) / ctx.alpha;
}

inline double remu_via_exponential(const DirectedBoundContext& ctx, const LaplacianMatrix& lap) {
  if (static_cast<std::size_t>(lap.q.rows()) != ctx.size())
    throw UsageError("Laplacian size does not match context");
  return remu_via_exponential(ctx);
}

inline double matrix_norm(const Eigen::MatrixXcd& m, NormKind p) {
  switch (p) {
    case NormKind::one: return m.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::inf: return m.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::two: {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
      return svd.singularValues()(0);
    }
  }
  throw UsageError("unknown norm");
}

struct UpperBoundValue {
  double value = 0.0;  // +infinity when vacuous
  bool vacuous = false;
  double kappa = 0.0;
  double lambda_hat = 0.0;
  double perturbation_norm = 0.0;
};

/// Largest size accepted by upper_bound_increment.
inline constexpr std::size_t kUpperBoundMaxNodes = 200;

/// (1/alpha) log( lambda_hat / (lambda_hat - kappa(Z) ||alpha dQ e^{I - alpha Q}||_p) ),
/// with Z the eigenvector matrix of R_exp. Reports a vacuous bound when the
/// denominator is not positive.
inline UpperBoundValue upper_bound_increment(const DirectedBoundContext& ctx,
                                             const LaplacianMatrix& lap,
                                             const SubgraphPerturbation& p,
                                             NormKind norm = NormKind::one) {
  detail::require_directed(p, ctx.size());
  if (ctx.size() > kUpperBoundMaxNodes)
    throw UsageError("upper_bound_increment is limited to " +
                     std::to_string(kUpperBoundMaxNodes) + " nodes");
  if (static_cast<std::size_t>(lap.q.rows()) != ctx.size())
    throw UsageError("Laplacian size does not match context");

  UpperBoundValue out;
  const Spectrum spec = eig_general(ctx.r_exp, true);
  for (const Complex& v : spec.values) out.lambda_hat = std::max(out.lambda_hat, std::abs(v));
  const Eigen::MatrixXcd& zmat = spec.right;
  out.kappa = matrix_norm(zmat, norm) * matrix_norm(zmat.inverse(), norm);
  const Matrix dr = ctx.alpha * p.dq * ctx.exp_op;
  out.perturbation_norm = matrix_norm(dr.cast<Complex>(), norm);
  const double denom = out.lambda_hat - out.kappa * out.perturbation_norm;
  if (!(denom > 0.0)) {
    out.vacuous = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = std::log(out.lambda_hat / denom) / ctx.alpha;
  return out;
}

/// First-order prediction of the change in the real part of the eigenvalue
/// that currently attains Re(mu), from its right and left eigenvectors.
/// Diagnostic only: the minimizing eigenvalue can change identity.
inline double predict_remu_change_first_order(const LaplacianMatrix& lap,
                                              const SubgraphPerturbation& p) {
  const Spectrum spec = eig_general(lap.q, true);
  const std::size_t n = spec.values.size();
  if (n < 2) throw DataError("need at least two nodes");
  std::size_t zero = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(spec.values[i]) < std::abs(spec.values[zero])) zero = i;
  std::size_t pick = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == zero) continue;
    if (pick == n || spec.values[i].real() < spec.values[pick].real() - 1e-12 ||
        (std::abs(spec.values[i].real() - spec.values[pick].real()) <= 1e-12 &&
         spec.values[i].imag() > spec.values[pick].imag()))
      pick = i;
  }
  const auto col = static_cast<Eigen::Index>(pick);
  const Vector xr = spec.right.col(col).real(), xi = spec.right.col(col).imag();
  const Vector yr = spec.left.col(col).real(), yi = spec.left.col(col).imag();
  return (yr.dot(p.dq * xr) + yi.dot(p.dq * xi)) / (yr.dot(xr) + yi.dot(xi));
}

// ---------------------------------------------------------------------------
// Non-monotonicity witness

struct NonMonotoneWitness {
  Graph graph;
  Link arc;
  double before = 0.0;
  double after = 0.0;
};

/// Exhaustive scan of strongly connected digraphs on 2..max_nodes nodes for
/// a single added arc that lowers Re(mu) by more than `margin`.
inline std::optional<NonMonotoneWitness> find_nonmonotone_arc(std::size_t max_nodes,
                                                              double margin = 1e-9) {
  std::optional<NonMonotoneWitness> found;
  for (std::size_t n = 2; n <= max_nodes && !found; ++n) {
    for_each_graph(n, true, [&](const Graph& g) {
      if (!is_strongly_connected(g)) return false;
      const double before = generalized_algebraic_connectivity(g);
      for (const Link& arc : candidate_links(g)) {
        const double after = generalized_algebraic_connectivity(g.with_link(arc));
        if (after < before - margin) {
          found = NonMonotoneWitness{g, arc, before, after};
          return true;
        }
      }
      return false;
    });
  }
  return found;
}

}  // namespace algconn
