#pragma once

// Dense eigen-kernels. The symmetric and nonsymmetric solvers and the
// matrix exponential delegate to Eigen; power iteration is implemented here
// because the shift-operator machinery depends on its exact behaviour
// (deterministic start, spectral shift, deflation, sign convention).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "algconn/error.hpp"
#include "algconn/graph.hpp"
#include "algconn/log.hpp"
#include "algconn/random.hpp"

namespace algconn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending and
/// eigenvectors (columns) orthonormal.
struct SymmetricSpectrum {
  Vector values;
  Matrix vectors;
};

/// Eigenvalues of a general real matrix sorted by (real, imag) ascending.
/// When requested, `right` holds unit right eigenvectors as columns and
/// `left` the matching left eigenvectors scaled so that left_k^H right_k = 1.
/// Eigenvalues sorted by (real, imag). Column k of `right` holds a unit-norm
/// right eigenvector for values[k] and column k of `left` a left one, scaled
/// so that left^H right is the identity. Where that is impossible (a
/// defective or nearly defective eigenvalue) the left vectors of that
/// eigenvalue stay unit-norm and `biorthogonal` is false.
struct Spectrum {
  std::vector<Complex> values;
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
  bool has_vectors = false;
  bool biorthogonal = false;
};

namespace detail {
inline void require_finite(const Matrix& m, const char* who) {
  if (!m.allFinite()) throw NumericalError(std::string(who) + ": non-finite matrix entry");
}
inline void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) throw UsageError(std::string(who) + ": matrix is not square");
}
}  // namespace detail

inline SymmetricSpectrum eig_symmetric(const Matrix& m, bool with_vectors = true) {
  detail::require_square(m, "eig_symmetric");
  detail::require_finite(m, "eig_symmetric");
  const double asym = m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff());
  Matrix sym = m;
  if (asym > 1e-10 * scale) {
    warn("eig_symmetric: input asymmetric by " + std::to_string(asym) + ", symmetrizing");
    sym = 0.5 * (m + m.transpose());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      sym, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eig_symmetric: QL iteration failed");
  SymmetricSpectrum out;
  out.values = es.eigenvalues();
  if (with_vectors) out.vectors = es.eigenvectors();
  return out;
}

namespace detail {

/// Left eigenvectors from the transpose: y^H m = lambda y^H iff
/// m^T conj(y) = lambda conj(y). Each eigenvalue is matched to the nearest
/// unused eigenvalue of m^T, then clusters are biorthogonalised.
inline void attach_left_vectors(const Matrix& m, Spectrum& out) {
  const auto n = m.rows();
  Eigen::EigenSolver<Matrix> et(m.transpose(), true);
  if (et.info() != Eigen::Success)
    throw NumericalError("eig_general: shifted QR did not converge on the transpose");
  const Eigen::VectorXcd tv = et.eigenvalues();
  const Eigen::MatrixXcd tz = et.eigenvectors();
  out.left.resize(n, n);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index best = -1;
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(tv(j) - out.values[static_cast<std::size_t>(c)]);
      if (d < gap) {
        gap = d;
        best = j;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    out.left.col(c) = tz.col(best).conjugate().normalized();
  }

  // Inside a defective block of size m the eigenvalues of m and m^T agree
  // only to about eps^(1/m). For such poorly matched vectors, the left
  // singular vector of m - lambda I for its smallest singular value is a
  // left eigenvector with residual sigma_min, i.e. at rounding level.
  const Eigen::MatrixXcd mc = m.cast<Complex>();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index c = 0; c < n; ++c) {
    const Complex lambda = out.values[static_cast<std::size_t>(c)];
    const Eigen::VectorXcd y = out.left.col(c);
    if ((mc.adjoint() * y - std::conj(lambda) * y).norm() <= 1e-12 * scale) continue;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(mc - lambda * Eigen::MatrixXcd::Identity(n, n),
                                        Eigen::ComputeFullU);
    out.left.col(c) = svd.matrixU().col(n - 1);
  }

  // Left and right vectors of distinct eigenvalues are orthogonal already.
  // Within a cluster of (numerically) repeated eigenvalues the Gram matrix
  // G = Y^H X is inverted when the unit vectors are far from orthogonal. A
  // defective eigenvalue leaves G near zero and the pairing is abandoned.
  out.biorthogonal = true;
  const double tol = 1e-10 * scale;
  std::vector<bool> grouped(static_cast<std::size_t>(n), false);
  for (Eigen::Index first = 0; first < n; ++first) {
    if (grouped[static_cast<std::size_t>(first)]) continue;
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = first; j < n; ++j) {
      if (grouped[static_cast<std::size_t>(j)]) continue;
      if (std::abs(out.values[static_cast<std::size_t>(j)] -
                   out.values[static_cast<std::size_t>(first)]) <= tol) {
        grouped[static_cast<std::size_t>(j)] = true;
        idx.push_back(j);
      }
    }
    const auto size = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd y(n, size), x(n, size);
    for (Eigen::Index c = 0; c < size; ++c) {
      y.col(c) = out.left.col(idx[static_cast<std::size_t>(c)]);
      x.col(c) = out.right.col(idx[static_cast<std::size_t>(c)]);
    }
    const Eigen::MatrixXcd g = y.adjoint() * x;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
    if (svd.singularValues()(size - 1) <= 1e-6) {
      out.biorthogonal = false;
      continue;
    }
    y = y * g.inverse().adjoint();
    for (Eigen::Index c = 0; c < size; ++c) out.left.col(idx[static_cast<std::size_t>(c)]) = y.col(c);
  }
}

}  // namespace detail

inline Spectrum eig_general(const Matrix& m, bool with_vectors = false) {
  detail::require_square(m, "eig_general");
  detail::require_finite(m, "eig_general");
  Spectrum out;
  const auto n = m.rows();
  if (n == 0) return out;
  Eigen::EigenSolver<Matrix> es(m, with_vectors);
  if (es.info() != Eigen::Success)
    throw NumericalError("eig_general: shifted QR did not converge (n=" + std::to_string(n) +
                         ")");
  const Eigen::VectorXcd vals = es.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (vals(a).real() != vals(b).real()) return vals(a).real() < vals(b).real();
    return vals(a).imag() < vals(b).imag();
  });
  out.values.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i : order) out.values.push_back(vals(i));
  if (with_vectors) {
    const Eigen::MatrixXcd z = es.eigenvectors();
    out.right.resize(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      out.right.col(c) = z.col(order[static_cast<std::size_t>(c)]);
      out.right.col(c).normalize();
    }
    detail::attach_left_vectors(m, out);
    out.has_vectors = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Power iteration

struct PowerOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1'000'000;
  std::uint64_t seed = 42;
  /// Iterates on (m + shift I); pick it so the wanted eigenvalue dominates
  /// in magnitude. The reported value is always for m itself.
  double shift = 0.0;
  /// Directions projected out of the iterate every step.
  std::vector<Vector> deflate;
};

struct DominantPair {
  double value = 0.0;
  Vector vector;
  std::size_t iterations = 0;
  bool converged = false;
  double residual = std::numeric_limits<double>::infinity();
};

namespace detail {
inline void flip_to_positive_lead(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-10) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

inline std::vector<Vector> orthonormalize(const std::vector<Vector>& vs, Eigen::Index n) {
  std::vector<Vector> basis;
  for (Vector v : vs) {
    if (v.size() != n) throw UsageError("power_iteration: deflation vector has wrong length");
    for (const Vector& b : basis) v -= b.dot(v) * b;
    const double nv = v.norm();
    if (nv > 1e-12) basis.push_back(v / nv);
  }
  return basis;
}

inline void project_out(Vector& x, const std::vector<Vector>& basis) {
  for (const Vector& b : basis) x -= b.dot(x) * b;
}
}  // namespace detail

/// Dominant eigenpair by power iteration with Rayleigh-quotient estimate.
/// Stops when ||m z - value z||_2 <= tol. A run that exhausts max_iter is
/// reported with converged = false; the caller decides whether that is fatal.
/// The returned vector has unit norm and its first nonzero entry positive.
inline DominantPair power_iteration(const Matrix& m, const PowerOptions& opt) {
  detail::require_square(m, "power_iteration");
  detail::require_finite(m, "power_iteration");
  const auto n = m.rows();
  DominantPair out;
  if (n == 0) throw UsageError("power_iteration: empty matrix");
  const auto basis = detail::orthonormalize(opt.deflate, n);

  Rng rng(opt.seed);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = 2.0 * uniform01(rng) - 1.0;
  detail::project_out(x, basis);
  if (x.norm() < 1e-300) throw UsageError("power_iteration: deflation removes the whole space");
  x.normalize();

  Vector mx(n);
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    mx.noalias() = m * x;
    const double lambda = x.dot(mx);
    const double res = (mx - lambda * x).norm();
    out.value = lambda;
    out.iterations = it;
    out.residual = res;
    if (res <= opt.tol) {
      out.converged = true;
      break;
    }
    Vector y = mx + opt.shift * x;
    detail::project_out(y, basis);
    const double ny = y.norm();
    if (!(ny > 0.0) || !std::isfinite(ny)) break;
    x = y / ny;
  }
  detail::flip_to_positive_lead(x);
  out.vector = std::move(x);
  return out;
}

inline DominantPair power_iteration(const Matrix& m, double tol, std::size_t max_iter,
                                    std::uint64_t seed) {
  PowerOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  opt.seed = seed;
  return power_iteration(m, opt);
}

/// Matrix exponential (scaling and squaring with Pade approximants).
inline Matrix expm(const Matrix& m) {
  detail::require_square(m, "expm");
  detail::require_finite(m, "expm");
  if (m.size() == 0) return m;
  return m.exp();
}

// ---------------------------------------------------------------------------
// Graph spectra

inline Matrix adjacency_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Matrix a = Matrix::Zero(n, n);
  for (const Link& l : g.links()) {
    a(static_cast<Eigen::Index>(l.source), static_cast<Eigen::Index>(l.target)) = 1.0;
    if (!g.directed())
      a(static_cast<Eigen::Index>(l.target), static_cast<Eigen::Index>(l.source)) = 1.0;
  }
  return a;
}

struct ConnectivityValue {
  double value = 0.0;
  bool connected = false;
};

/// Second-smallest Laplacian eigenvalue; 0 with connected = false when the
/// graph is disconnected.
inline ConnectivityValue algebraic_connectivity(const Graph& g) {
  if (g.directed()) throw UsageError("algebraic_connectivity expects an undirected graph");
  if (g.node_count() < 2) return {0.0, g.node_count() == 1};
  if (!is_connected(g)) return {0.0, false};
  const auto spec = eig_symmetric(laplacian(g).q, false);
  return {spec.values(1), true};
}

/// Zero-eigenvalue threshold used to identify the Laplacian kernel.
inline double zero_threshold(std::size_t n) { return 1e-9 * static_cast<double>(n); }

namespace detail {
inline double defect_radius(const Matrix& m) {
  return 1e-4 * std::max(1.0, m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff());
}

inline bool has_neighbour(const std::vector<Complex>& values, std::size_t k, double radius) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (i != k && std::abs(values[i] - values[k]) <= radius) return true;
  return false;
}
}  // namespace detail

/// The eigenvalue of m nearest `approx`, corrected for defectiveness. Rounding
/// splits a Jordan block of size b into b eigenvalues about eps^(1/b) apart
/// (1e-5 for b = 3), but their mean stays accurate to rounding level. So when
/// several eigenvalues near `approx` are ill-conditioned, the mean of those
/// is returned. Well-conditioned close eigenvalues are left alone.
inline Complex refined_eigenvalue(const Matrix& m, Complex approx) {
  const Spectrum spec = eig_general(m, true);
  const double radius = detail::defect_radius(m);
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    if (std::abs(spec.values[i] - approx) < std::abs(spec.values[nearest] - approx)) nearest = i;
  Complex sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    if (std::abs(spec.values[i] - spec.values[nearest]) > radius) continue;
    const auto c = static_cast<Eigen::Index>(i);
    const double overlap = std::abs(spec.left.col(c).dot(spec.right.col(c)));
    const double kappa = spec.left.col(c).norm() * spec.right.col(c).norm() / overlap;
    if (kappa > 1e6) {
      sum += spec.values[i];
      ++count;
    }
  }
  return count >= 2 ? sum / static_cast<double>(count) : spec.values[nearest];
}

/// Smallest real part among the nonzero eigenvalues of a generalized
/// Laplacian whose kernel is one-dimensional.
inline double remu_from_laplacian(const Matrix& q) {
  const auto spec = eig_general(q, false);
  const auto n = spec.values.size();
  if (n < 2) throw DataError("generalized algebraic connectivity needs at least two nodes");
  std::size_t zero = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(spec.values[i]) < std::abs(spec.values[zero])) zero = i;
  if (std::abs(spec.values[zero]) > zero_threshold(n))
    throw NumericalError("Laplacian has no numerically zero eigenvalue");
  std::size_t slow = n;
  for (std::size_t i = 0; i < n; ++i)
    if (i != zero && (slow == n || spec.values[i].real() < spec.values[slow].real())) slow = i;
  if (detail::has_neighbour(spec.values, slow, detail::defect_radius(q)))
    return refined_eigenvalue(q, spec.values[slow]).real();
  return spec.values[slow].real();
}

/// Re(mu): second-smallest real part of the generalized Laplacian spectrum.
/// Undirected graphs fall back to the algebraic connectivity.
inline double generalized_algebraic_connectivity(const Graph& g) {
  if (!g.directed()) {
    const auto mu = algebraic_connectivity(g);
    if (!mu.connected) throw DataError("graph is not connected");
    return mu.value;
  }
  if (g.node_count() < 2) throw DataError("generalized algebraic connectivity needs two nodes");
  if (!is_strongly_connected(g)) throw DataError("graph is not strongly connected");
  return remu_from_laplacian(laplacian(g).q);
}

/// Largest adjacency eigenvalue modulus.
inline double spectral_radius_adjacency(const Graph& g) {
  if (g.node_count() == 0) return 0.0;
  const Matrix a = adjacency_matrix(g);
  if (g.directed()) {
    double best = 0.0;
    for (const Complex& v : eig_general(a).values) best = std::max(best, std::abs(v));
    return best;
  }
  // A + I keeps the Perron value dominant on bipartite graphs.
  PowerOptions opt;
  opt.tol = 1e-12;
  opt.max_iter = 200'000;
  opt.shift = 1.0;
  const auto pair = power_iteration(a, opt);
  if (pair.converged) return std::abs(pair.value);
  return eig_symmetric(a, false).values.cwiseAbs().maxCoeff();
}

}  // namespace algconn
