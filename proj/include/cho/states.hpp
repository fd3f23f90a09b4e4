#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "cho/model.hpp"

namespace cho {

/// Inverse lengths of the two normal modes.
struct WidthParams
{
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};

inline WidthParams width_params(const CanonicalParams& p, double hbar = 1.0)
{
  const double base = std::pow(p.mk_over_hbar2(hbar), 0.25);
  return {std::exp(0.5 * p.eta) * base, std::exp(-0.5 * p.eta) * base};
}

/// Dimensionless displacements of the two normal modes.
struct CoherentLabel
{
  std::complex<double> alpha{0.0, 0.0};
  std::complex<double> beta{0.0, 0.0};
};

/// Rotation by theta/2 from the rescaled frame (x1, x2) to the normal-mode
/// frame (y1, y2).
inline std::pair<double, double> rotate_to_normal(double theta, double x1, double x2)
{
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  return {c * x1 - s * x2, s * x1 + c * x2};
}

/// Physical coordinates (X1, X2) to normal-mode coordinates. Composes the mass
/// rescaling x1 = mu X1, x2 = X2 / mu with the rotation. The rescaling has unit
/// Jacobian, so a state normalized in y is normalized in X.
inline std::pair<double, double> physical_to_normal(const CanonicalParams& p, double X1, double X2)
{
  return rotate_to_normal(p.theta, p.mu * X1, X2 / p.mu);
}

inline double ground_wavefunction_y(const CanonicalParams& p, double hbar, double y1, double y2)
{
  const double scale = p.m * p.omega / hbar;
  return std::sqrt(scale / std::numbers::pi) *
         std::exp(-0.5 * scale * (std::exp(p.eta) * y1 * y1 + std::exp(-p.eta) * y2 * y2));
}

/// Ground state in the rescaled frame; it does not factorize in (x1, x2) once
/// theta is inside (0, pi) and eta != 0.
inline double ground_wavefunction_x(const CanonicalParams& p, double hbar, double x1, double x2)
{
  const auto [y1, y2] = rotate_to_normal(p.theta, x1, x2);
  return ground_wavefunction_y(p, hbar, y1, y2);
}

/// Coherent state in the normal-mode frame. The exponent keeps the
/// -alpha^2/2 - |alpha|^2/2 pair (likewise for beta), which is the standard
/// position-space coherent state; for real labels it is square normalized.
inline std::complex<double> coherent_wavefunction_y(const CanonicalParams& p, double hbar,
                                                    const CoherentLabel& label, double y1,
                                                    double y2)
{
  const auto [l1, l2] = width_params(p, hbar);
  const auto& a = label.alpha;
  const auto& b = label.beta;
  const std::complex<double> exponent =
      -0.5 * l1 * l1 * y1 * y1 - 0.5 * std::norm(a) - 0.5 * a * a + std::numbers::sqrt2 * a * l1 * y1 -
      0.5 * l2 * l2 * y2 * y2 - 0.5 * std::norm(b) - 0.5 * b * b + std::numbers::sqrt2 * b * l2 * y2;
  return std::sqrt(l1 * l2 / std::numbers::pi) * std::exp(exponent);
}

/// Coherent state as a function of the physical coordinates (X1, X2).
inline std::complex<double> coherent_wavefunction_x(const CanonicalParams& p, double hbar,
                                                    const CoherentLabel& label, double X1,
                                                    double X2)
{
  const auto [y1, y2] = physical_to_normal(p, X1, X2);
  return coherent_wavefunction_y(p, hbar, label, y1, y2);
}

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
inline double hermite(int n, double x)
{
  if (n <= 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int i = 1; i < n; ++i) {
    const double next = 2.0 * x * cur - 2.0 * i * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// n-th eigenfunction of a 1D oscillator with inverse length lambda.
inline double oscillator_eigenfunction(int n, double lambda, double y)
{
  const double xi = lambda * y;
  double norm = std::sqrt(lambda / std::sqrt(std::numbers::pi));
  for (int i = 1; i <= n; ++i) norm /= std::sqrt(2.0 * i);
  return norm * hermite(n, xi) * std::exp(-0.5 * xi * xi);
}

inline double number_wavefunction_y(const CanonicalParams& p, double hbar, QuantumNumbers n,
                                    double y1, double y2)
{
  const auto [l1, l2] = width_params(p, hbar);
  return oscillator_eigenfunction(n.n1, l1, y1) * oscillator_eigenfunction(n.n2, l2, y2);
}

inline double number_wavefunction_x(const CanonicalParams& p, double hbar, QuantumNumbers n,
                                    double X1, double X2)
{
  const auto [y1, y2] = physical_to_normal(p, X1, X2);
  return number_wavefunction_y(p, hbar, n, y1, y2);
}

}  // namespace cho
