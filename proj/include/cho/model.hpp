#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "cho/errors.hpp"

namespace cho {

/// Two particles with masses m1, m2 in the potential
///   V = (C1 X1^2 + C2 X2^2 + C3 X1 X2) / 2.
struct OscillatorSystem
{
  double m1 = 1.0;
  double m2 = 1.0;
  double C1 = 1.0;
  double C2 = 1.0;
  double C3 = 0.0;
};

/// Parameters after mass rescaling (x1 = mu X1, x2 = X2 / mu) and the
/// rotation by theta/2 that decouples the pair.
///
/// Every purity depends only on (eta, theta). The remaining fields carry the
/// dimensional scales needed to evaluate wavefunctions and energies.
///
/// Note: eta follows exp(2 eta) = (c1 + c2 + sqrt((c1 - c2)^2 + c3^2)) / (2k)
/// literally, so c3 = 0 with c1 != c2 still gives eta != 0. In that case
/// theta = 0 and every purity is 1 regardless of eta.
struct CanonicalParams
{
  double mu = 1.0;
  double m = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 0.0;
  double theta = 0.0;
  double k = 1.0;
  double eta = 0.0;
  double omega = 1.0;

  /// m k / hbar^2, the only dimensional combination entering the kernel.
  double mk_over_hbar2(double hbar = 1.0) const { return m * k / (hbar * hbar); }
};

struct QuantumNumbers
{
  int n1 = 0;
  int n2 = 0;

  int total() const { return n1 + n2; }
  friend bool operator==(const QuantumNumbers&, const QuantumNumbers&) = default;
};

namespace detail {

inline double normalize_angle(double theta)
{
  // atan2 returns (-pi, pi]; fold into [0, pi).
  if (theta < 0.0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  return theta;
}

}  // namespace detail

/// Mass rescaling followed by the decoupling rotation.
///
/// theta = atan2(c3, c2 - c1) folded into [0, pi). For c1 == c2 this gives
/// pi/2 whenever c3 != 0 and 0 for c3 == 0.
inline CanonicalParams rescale(const OscillatorSystem& sys)
{
  if (!(sys.m1 > 0.0) || !(sys.m2 > 0.0)) {
    throw non_positive_mass("masses must be positive (m1 = " + std::to_string(sys.m1) +
                            ", m2 = " + std::to_string(sys.m2) + ")");
  }

  CanonicalParams p;
  p.mu = std::pow(sys.m1 / sys.m2, 0.25);
  p.m = std::sqrt(sys.m1 * sys.m2);
  p.c1 = sys.C1 * std::sqrt(sys.m2 / sys.m1);
  p.c2 = sys.C2 * std::sqrt(sys.m1 / sys.m2);
  p.c3 = sys.C3;

  const double disc = 4.0 * p.c1 * p.c2 - p.c3 * p.c3;
  if (!(disc > 0.0)) {
    throw unstable_potential("the condition 4*c1*c2 > c3^2 must be fulfilled (4*c1*c2 = " +
                             std::to_string(4.0 * p.c1 * p.c2) +
                             ", c3^2 = " + std::to_string(p.c3 * p.c3) + ")");
  }
  // 4 c1 c2 > c3^2 also holds for two negative stiffnesses.
  if (!(p.c1 > 0.0)) {
    throw unstable_potential("the potential must be bounded below (c1, c2 > 0)");
  }

  p.k = std::sqrt(p.c1 * p.c2 - 0.25 * p.c3 * p.c3);
  const double spread = std::hypot(p.c1 - p.c2, p.c3);
  p.eta = 0.5 * std::log((p.c1 + p.c2 + spread) / (2.0 * p.k));
  p.theta = detail::normalize_angle(std::atan2(p.c3, p.c2 - p.c1));
  p.omega = std::sqrt(p.k / p.m);
  return p;
}

/// Build parameters directly from (eta, theta) with the given mass scale and
/// stiffness. With division_safe set, theta must lie strictly inside (0, pi);
/// otherwise the closed interval [0, pi] is accepted.
///
/// The stiffnesses are back-filled so that rescale() of a unit-mass system
/// with C = (c1, c2, c3) reproduces (|eta|, theta).
inline CanonicalParams from_synthetic(double eta, double theta, double m = 1.0, double k = 1.0,
                                      bool division_safe = true)
{
  if (!(m > 0.0)) throw non_positive_mass("reduced mass must be positive");
  if (!(k > 0.0)) throw unstable_potential("effective stiffness k must be positive");
  if (!std::isfinite(eta)) throw domain_error("eta must be finite");
  const bool inside = division_safe ? (theta > 0.0 && theta < std::numbers::pi)
                                    : (theta >= 0.0 && theta <= std::numbers::pi);
  if (!inside) {
    throw domain_error("theta = " + std::to_string(theta) + " outside " +
                       (division_safe ? "(0, pi)" : "[0, pi]"));
  }

  CanonicalParams p;
  p.mu = 1.0;
  p.m = m;
  p.k = k;
  p.eta = eta;
  p.theta = theta;
  p.omega = std::sqrt(k / m);
  const double spread = 2.0 * k * std::sinh(2.0 * eta);
  p.c1 = k * std::cosh(2.0 * eta) - 0.5 * spread * std::cos(theta);
  p.c2 = k * std::cosh(2.0 * eta) + 0.5 * spread * std::cos(theta);
  p.c3 = spread * std::sin(theta);
  return p;
}

/// E(n1, n2) = hbar omega (e^eta n1 + e^-eta n2 + cosh eta).
inline double energy(const CanonicalParams& p, QuantumNumbers n, double hbar = 1.0)
{
  return hbar * p.omega *
         (std::exp(p.eta) * n.n1 + std::exp(-p.eta) * n.n2 + std::cosh(p.eta));
}

}  // namespace cho
