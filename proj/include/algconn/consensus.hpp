#pragma once

// Continuous-time consensus dv/dt = -Q v integrated with fixed-step RK4, and
// the exponential decay-rate fit used to check convergence-rate bounds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "algconn/error.hpp"
#include "algconn/graph.hpp"
#include "algconn/random.hpp"
#include "algconn/spectral.hpp"

namespace algconn {

struct Trajectory {
  std::vector<double> times;
  Matrix states;             // one row per sample
  Vector steady;             // consensus value pi
  std::vector<double> rates; // per-node decay rates, NaN where not fittable
};

struct SimulateOptions {
  /// Upper bound on stored samples; the integrator still takes every step.
  std::size_t max_samples = 5001;
  /// Window used for the per-node rates stored in the trajectory.
  double rate_window = 0.5;
};

/// Consensus value reached from v0. Undirected: the mean. Directed: the
/// left kernel vector y of Q normalised to sum 1, giving pi = 1 (y^T v0).
inline Vector consensus_value(const Graph& g, const Vector& v0) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (v0.size() != n) throw UsageError("initial state has the wrong dimension");
  if (!g.directed()) return Vector::Constant(n, v0.mean());
  const Matrix qt = laplacian(g).q.transpose();
  Eigen::JacobiSVD<Matrix> svd(qt, Eigen::ComputeFullV);
  Vector y = svd.matrixV().col(n - 1);
  const double s = y.sum();
  if (std::abs(s) < 1e-12) throw NumericalError("left kernel vector sums to zero");
  y /= s;
  return Vector::Constant(n, y.dot(v0));
}

/// Step size 0.01 / lambda_max(Q), for which RK4 matches the exponential
/// solution to about 1e-6.
inline double default_step(const Graph& g) {
  const Matrix q = laplacian(g).q;
  double lmax = 0.0;
  if (g.directed()) {
    for (const Complex& v : eig_general(q).values) lmax = std::max(lmax, std::abs(v));
  } else {
    lmax = eig_symmetric(q, false).values.maxCoeff();
  }
  return lmax > 0.0 ? 0.01 / lmax : 0.01;
}

namespace detail {

/// (Q v)_j = sum over in-neighbours i of (v_j - v_i).
inline void apply_laplacian(const Graph& g, const Vector& v, Vector& out) {
  for (std::size_t j = 0; j < g.node_count(); ++j) {
    double acc = 0.0;
    const double vj = v(static_cast<Eigen::Index>(j));
    for (std::size_t i : g.in_neighbors(j)) acc += vj - v(static_cast<Eigen::Index>(i));
    out(static_cast<Eigen::Index>(j)) = acc;
  }
}

inline double gap_norm(const Matrix& states, Eigen::Index row, const Vector& pi) {
  return (states.row(row).transpose() - pi).norm();
}

inline constexpr double kDecayFloor = 1e-13;

}  // namespace detail

inline double node_decay_rate(const Trajectory& traj, std::size_t node, double window);

/// Integrates from t = 0 to t_end with h = t_end / ceil(t_end / dt).
inline Trajectory simulate(const Graph& g, const Vector& v0, double t_end, double dt,
                           const SimulateOptions& opt = {}) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (v0.size() != n) throw UsageError("initial state has the wrong dimension");
  if (!(dt > 0.0) || !(t_end >= dt)) throw UsageError("need dt > 0 and t_end >= dt");
  if (g.directed() ? !is_strongly_connected(g) : !is_connected(g))
    throw DataError(g.directed() ? "graph is not strongly connected" : "graph is not connected");

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
  const double h = t_end / static_cast<double>(steps);
  const std::size_t slots = std::max<std::size_t>(2, opt.max_samples);
  const std::size_t stride = (steps + slots - 2) / (slots - 1);
  const std::size_t rows = (steps + stride - 1) / stride + 1;

  Trajectory traj;
  traj.steady = consensus_value(g, v0);
  traj.states.resize(static_cast<Eigen::Index>(rows), n);
  traj.times.reserve(rows);

  Vector v = v0, k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double limit = 1e6 * std::max(1.0, v0.norm());
  Eigen::Index row = 0;
  traj.states.row(row++) = v.transpose();
  traj.times.push_back(0.0);
  for (std::size_t s = 1; s <= steps; ++s) {
    detail::apply_laplacian(g, v, k1);
    tmp = v - 0.5 * h * k1;
    detail::apply_laplacian(g, tmp, k2);
    tmp = v - 0.5 * h * k2;
    detail::apply_laplacian(g, tmp, k3);
    tmp = v - h * k3;
    detail::apply_laplacian(g, tmp, k4);
    v -= (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!v.allFinite() || v.norm() > limit)
      throw NumericalError("integration became unstable; use a smaller dt");
    if (s % stride == 0 || s == steps) {
      traj.states.row(row++) = v.transpose();
      traj.times.push_back(static_cast<double>(s) * h);
    }
  }
  traj.states.conservativeResize(row, n);

  traj.rates.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    try {
      traj.rates[i] = node_decay_rate(traj, i, opt.rate_window);
    } catch (const DataError&) {
    }
  }
  return traj;
}

namespace detail {

/// Negated least-squares slope of log(gap) over the last `window` fraction of
/// samples. `gap(row)` returns the deviation at a sample.
template <class Gap>
double fit_log_slope(const Trajectory& traj, double window, Gap&& gap) {
  if (!(window > 0.0) || window > 1.0) throw UsageError("window must lie in (0, 1]");
  const auto rows = static_cast<Eigen::Index>(traj.times.size());
  if (rows < 3) throw DataError("trajectory has too few samples to fit");
  const double initial = gap(0);
  if (!(initial > 0.0)) throw DataError("initial state is already at consensus");
  auto first = static_cast<Eigen::Index>(std::floor(static_cast<double>(rows) * (1.0 - window)));
  first = std::min(first, rows - 2);
  if (gap(first) > 1e-2 * initial)
    throw DataError("trajectory too short for the fit window; increase t_end");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double m = 0.0;
  for (Eigen::Index r = first; r < rows; ++r) {
    const double e = gap(r);
    if (!(e > kDecayFloor * initial))
      throw DataError("deviation reached the numerical floor; use a shorter t_end");
    const double x = traj.times[static_cast<std::size_t>(r)];
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1.0;
  }
  const double denom = m * sxx - sx * sx;
  if (!(denom > 0.0)) throw DataError("fit window spans no time");
  return -(m * sxy - sx * sy) / denom;
}

}  // namespace detail

/// Decay rate of ||v(t) - pi||.
inline double fit_decay_rate(const Trajectory& traj, double window = 0.5) {
  return detail::fit_log_slope(traj, window, [&](Eigen::Index r) {
    return detail::gap_norm(traj.states, r, traj.steady);
  });
}

/// Decay rate of |v_i(t) - pi_i|.
inline double node_decay_rate(const Trajectory& traj, std::size_t node, double window) {
  const auto c = static_cast<Eigen::Index>(node);
  return detail::fit_log_slope(traj, window, [&](Eigen::Index r) {
    return std::abs(traj.states(r, c) - traj.steady(c));
  });
}

/// Seeded standard Gaussian state whose projection on the slowest mode is
/// at least 1e-3 of its norm, so the fitted rate reflects that mode.
inline Vector generic_initial_state(const Graph& g, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (n < 2) throw DataError("need at least two nodes");
  const Matrix q = laplacian(g).q;
  Eigen::MatrixXcd slow;  // columns spanning the left slow-mode directions
  if (g.directed()) {
    const Spectrum spec = eig_general(q, true);
    std::size_t zero = 0;
    for (std::size_t i = 1; i < spec.values.size(); ++i)
      if (std::abs(spec.values[i]) < std::abs(spec.values[zero])) zero = i;
    std::size_t pick = spec.values.size();
    for (std::size_t i = 0; i < spec.values.size(); ++i)
      if (i != zero && (pick == spec.values.size() ||
                        spec.values[i].real() < spec.values[pick].real()))
        pick = i;
    slow = spec.left.col(static_cast<Eigen::Index>(pick));
  } else {
    slow = eig_symmetric(q).vectors.col(1).cast<Complex>();
  }
  const Eigen::VectorXcd y = slow.col(0) / slow.col(0).norm();
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = standard_normal(rng);
    if (std::abs(y.dot(v.cast<Complex>())) >= 1e-3 * v.norm()) return v;
  }
  throw NumericalError("could not draw an initial state exciting the slow mode");
}

/// CSV with header t,v_0,...,v_{n-1}.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto n = traj.states.cols();
  out << "t";
  for (Eigen::Index i = 0; i < n; ++i) out << ",v_" << i;
  out << '\n';
  char buf[40];
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.12g", traj.times[r]);
    out << buf;
    for (Eigen::Index i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.12g", traj.states(static_cast<Eigen::Index>(r), i));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace algconn
