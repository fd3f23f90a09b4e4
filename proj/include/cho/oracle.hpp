#pragma once

// Brute-force purity: sample the two-particle wavefunction on a uniform grid,
// integrate out one particle with composite Simpson weights to get
// rho(X, X'), and trace rho^2. Shares nothing with the analytic routes except
// the wavefunction evaluators in states.hpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "cho/errors.hpp"
#include "cho/model.hpp"
#include "cho/result.hpp"
#include "cho/states.hpp"

namespace cho {

inline constexpr int kMinGridPoints = 64;
inline constexpr double kBoundaryTolerance = 1e-10;
inline constexpr double kConvergenceTolerance = 1e-4;

/// Uniform grid over (X1, X2). Axis a spans center[a] +- half_width_sigmas *
/// sigma[a]. An even n_points is bumped to the next odd node count, as
/// Simpson's rule needs an even number of intervals.
struct GridSpec
{
  int n_points = 400;
  double half_width_sigmas = 8.0;
  std::array<double, 2> center{0.0, 0.0};
  std::array<double, 2> sigma{1.0, 1.0};

  int nodes() const { return n_points % 2 == 0 ? n_points + 1 : n_points; }
  double half_width(int axis) const { return half_width_sigmas * sigma[axis]; }
  double step(int axis) const { return 2.0 * half_width(axis) / (nodes() - 1); }

  GridSpec refined() const
  {
    GridSpec g = *this;
    g.n_points = 2 * n_points;
    return g;
  }
};

/// Which particle survives the partial trace.
enum class Subsystem { first, second };

/// Samples rho(X, X') of the kept particle together with the quadrature weights
/// of its axis.
struct ReducedDensity
{
  Eigen::MatrixXd matrix;
  Eigen::VectorXd weights;
  double step = 0.0;
  double norm = 0.0;  // Tr rho
};

/// Real-valued two-particle wavefunction in physical coordinates.
using StateEvaluator = std::function<double(double, double)>;

namespace detail {

inline Eigen::VectorXd simpson_weights(int nodes, double h)
{
  Eigen::VectorXd w(nodes);
  for (int i = 0; i < nodes; ++i) w[i] = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  return w * (h / 3.0);
}

inline Eigen::VectorXd axis_nodes(const GridSpec& g, int axis)
{
  const int n = g.nodes();
  Eigen::VectorXd x(n);
  const double h = g.step(axis);
  const double lo = g.center[axis] - g.half_width(axis);
  for (int i = 0; i < n; ++i) x[i] = lo + h * i;
  return x;
}

/// Worker count for row-parallel loops; CHO_THREADS overrides the hardware
/// default.
inline unsigned parallel_width()
{
  if (const char* env = std::getenv("CHO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(row) for row in [0, rows). Rows are split into contiguous
/// chunks; each row is written by exactly one worker.
template <class Body>
void parallel_rows(int rows, Body&& body)
{
  const unsigned width = std::min<unsigned>(parallel_width(), static_cast<unsigned>(rows));
  if (width <= 1) {
    for (int r = 0; r < rows; ++r) body(r);
    return;
  }
  std::vector<std::jthread> workers;
  const int chunk = (rows + static_cast<int>(width) - 1) / static_cast<int>(width);
  for (unsigned w = 0; w < width; ++w) {
    const int lo = static_cast<int>(w) * chunk;
    const int hi = std::min(rows, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([lo, hi, &body] {
      for (int r = lo; r < hi; ++r) body(r);
    });
  }
}

}  // namespace detail

/// rho(X, X') = integral psi(X, Y) psi(X', Y) dY over the traced particle.
inline ReducedDensity reduce(const StateEvaluator& psi, const GridSpec& grid,
                             Subsystem keep = Subsystem::first)
{
  if (grid.n_points < kMinGridPoints) {
    throw std::invalid_argument("oracle grid needs at least " + std::to_string(kMinGridPoints) +
                                " points per axis");
  }
  const int kept_axis = keep == Subsystem::first ? 0 : 1;
  const int traced_axis = 1 - kept_axis;
  const int n = grid.nodes();
  const Eigen::VectorXd kept = detail::axis_nodes(grid, kept_axis);
  const Eigen::VectorXd traced = detail::axis_nodes(grid, traced_axis);

  // samples(a, b) = psi at kept node a, traced node b.
  Eigen::MatrixXd samples(n, n);
  detail::parallel_rows(n, [&](int a) {
    for (int b = 0; b < n; ++b) {
      samples(a, b) = keep == Subsystem::first ? psi(kept[a], traced[b]) : psi(traced[b], kept[a]);
    }
  });

  const double peak = samples.cwiseAbs().maxCoeff();
  const double edge = std::max({samples.row(0).cwiseAbs().maxCoeff(),
                                samples.row(n - 1).cwiseAbs().maxCoeff(),
                                samples.col(0).cwiseAbs().maxCoeff(),
                                samples.col(n - 1).cwiseAbs().maxCoeff()});
  if (!(peak > 0.0) || edge * edge > kBoundaryTolerance * peak * peak) {
    throw grid_too_narrow("boundary density is " + std::to_string(edge * edge / (peak * peak)) +
                          " of the peak (limit " + std::to_string(kBoundaryTolerance) +
                          "); widen the grid");
  }

  const Eigen::VectorXd traced_w = detail::simpson_weights(n, grid.step(traced_axis));
  const Eigen::MatrixXd scaled = samples * traced_w.cwiseSqrt().asDiagonal();

  // Only the lower triangle is accumulated, so the result is exactly
  // symmetric.
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
  lower.selfadjointView<Eigen::Lower>().rankUpdate(scaled);

  ReducedDensity rd;
  rd.matrix = lower.selfadjointView<Eigen::Lower>();
  rd.step = grid.step(kept_axis);
  rd.weights = detail::simpson_weights(n, rd.step);
  rd.norm = rd.weights.dot(rd.matrix.diagonal());
  return rd;
}

/// Tr rho^2 = sum_ab w_a w_b rho_ab rho_ba. The error estimate is a
/// floating-point roundoff bound; discretization error is estimated by
/// purity_numeric_refined.
inline PurityResult purity_numeric(const ReducedDensity& rd)
{
  const Eigen::MatrixXd weighted = rd.weights.asDiagonal() * rd.matrix;
  // (W rho) : (W rho)^T summed in a fixed order.
  double sum = 0.0;
  const auto n = weighted.rows();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) sum += weighted(a, b) * weighted(b, a);
  const double roundoff = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * std::abs(sum);
  return {sum, Route::oracle, roundoff};
}

/// purity_numeric at n_points and 2 n_points. Returns the finer value; the
/// error estimate is the difference plus the roundoff bound.
inline PurityResult purity_numeric_refined(const StateEvaluator& psi, const GridSpec& grid,
                                           Subsystem keep = Subsystem::first)
{
  const auto coarse = purity_numeric(reduce(psi, grid, keep));
  auto fine = purity_numeric(reduce(psi, grid.refined(), keep));
  const double diff = std::abs(fine.value - coarse.value);
  if (diff > kConvergenceTolerance) {
    throw not_converged("oracle purity changed by " + std::to_string(diff) +
                        " under grid refinement (limit " + std::to_string(kConvergenceTolerance) + ")");
  }
  fine.error_estimate += diff;
  return fine;
}

/// A real two-particle state the oracle can sample.
struct OracleState
{
  enum class Kind { coherent, number };

  Kind kind = Kind::coherent;
  double alpha = 0.0;  // real displacements, coherent states only
  double beta = 0.0;
  QuantumNumbers n{};

  static OracleState coherent(double alpha, double beta) { return {Kind::coherent, alpha, beta, {}}; }
  static OracleState number(int n1, int n2) { return {Kind::number, 0.0, 0.0, {n1, n2}}; }
};

inline StateEvaluator make_evaluator(const CanonicalParams& p, double hbar, const OracleState& state)
{
  if (state.kind == OracleState::Kind::number) {
    return [p, hbar, n = state.n](double X1, double X2) {
      return number_wavefunction_x(p, hbar, n, X1, X2);
    };
  }
  const CoherentLabel label{{state.alpha, 0.0}, {state.beta, 0.0}};
  return [p, hbar, label](double X1, double X2) {
    return coherent_wavefunction_x(p, hbar, label, X1, X2).real();
  };
}

/// Grid centered on the state's mean position. The half width is 8 times the
/// widest normal-mode length 1 / min(lambda1, lambda2), mapped to each
/// physical axis by the mass rescaling, inflated by sqrt(1 + 2 max(n1, n2))
/// for excited states and padded by |alpha| + |beta| lengths for displaced
/// ones.
inline GridSpec default_grid(const CanonicalParams& p, double hbar, const OracleState& state,
                             int n_points = 400)
{
  const auto [l1, l2] = width_params(p, hbar);
  const double length = 1.0 / std::min(l1, l2);

  GridSpec g;
  g.n_points = n_points;
  double inflation = 1.0;
  if (state.kind == OracleState::Kind::number) {
    inflation = std::sqrt(1.0 + 2.0 * std::max(state.n.n1, state.n.n2));
  } else {
    // Mean of the displaced Gaussian, taken back to physical coordinates.
    const double y1 = std::sqrt(2.0) * state.alpha / l1;
    const double y2 = std::sqrt(2.0) * state.beta / l2;
    const double c = std::cos(0.5 * p.theta);
    const double s = std::sin(0.5 * p.theta);
    const double x1 = c * y1 + s * y2;
    const double x2 = -s * y1 + c * y2;
    g.center = {x1 / p.mu, x2 * p.mu};
    inflation = 1.0 + (std::abs(state.alpha) + std::abs(state.beta)) / 8.0;
  }
  g.half_width_sigmas = 8.0 * inflation;
  g.sigma = {length / p.mu, length * p.mu};
  return g;
}

/// Refined oracle purity of `state` on its default grid.
inline PurityResult oracle_purity(const CanonicalParams& p, double hbar, const OracleState& state,
                                  int n_points = 400, Subsystem keep = Subsystem::first)
{
  return purity_numeric_refined(make_evaluator(p, hbar, state), default_grid(p, hbar, state, n_points),
                                keep);
}

}  // namespace cho
