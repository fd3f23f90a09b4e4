#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "cho/coefficients.hpp"
#include "cho/errors.hpp"
#include "cho/model.hpp"
#include "cho/polyalg.hpp"
#include "cho/result.hpp"

namespace cho {

/// Scalars entering the number-state generating function. All carry a factor
/// m k / hbar^2, which cancels in every ratio.
struct PurityKernelParams
{
  double rho = 0.0;
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double t = 0.0;
  double s = 0.0;
};

/// Knobs shared by the analytic number-state routes.
struct RouteOptions
{
  int cap = 4;
  double mk_over_hbar2 = 1.0;
  /// Multiplies u before use. Only the validation negative control sets it.
  double u_scale = 1.0;
};

namespace detail {

inline void require_open_angle(double theta)
{
  if (!(theta > 0.0 && theta < std::numbers::pi)) {
    throw domain_error("theta = " + std::to_string(theta) +
                       " must lie strictly inside (0, pi): sin(theta) = 0 is a pole of the "
                       "number-state purity formulas");
  }
}

/// 2 cosh(2 eta) + tan^2(theta/2) + cot^2(theta/2).
inline double angular_sum(double eta, double theta)
{
  const double tan2 = std::pow(std::tan(0.5 * theta), 2);
  return 2.0 * std::cosh(2.0 * eta) + tan2 + 1.0 / tan2;
}

inline double factorial_d(int n)
{
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace detail

/// Closed-form purity of every coherent state (and of the ground state):
///   P = 1 / sqrt(2 cosh(2 eta) sin^2 cos^2 + cos^4 + sin^4), half angles.
/// Defined for every theta; equals 1 at theta = 0 and pi.
inline PurityResult purity_coherent(double eta, double theta)
{
  const double c2 = std::pow(std::cos(0.5 * theta), 2);
  const double s2 = std::pow(std::sin(0.5 * theta), 2);
  const double d = 2.0 * std::cosh(2.0 * eta) * s2 * c2 + c2 * c2 + s2 * s2;
  return {1.0 / std::sqrt(d), Route::closed_form, 0.0};
}

inline PurityKernelParams kernel_params(double eta, double theta, double mk_over_hbar2 = 1.0)
{
  detail::require_open_angle(theta);
  if (!(mk_over_hbar2 > 0.0)) throw domain_error("m k / hbar^2 must be positive");
  const double L = mk_over_hbar2;
  const double tan2 = std::pow(std::tan(0.5 * theta), 2);
  const double cot2 = 1.0 / tan2;
  const double ch2 = std::cosh(2.0 * eta);
  PurityKernelParams k;
  k.rho = 4.0 * L * (2.0 * ch2 + cot2 + tan2);
  k.u = 2.0 * L * std::sinh(2.0 * eta);
  k.v = 2.0 * L * (ch2 + tan2);
  k.w = 2.0 * L * (ch2 + cot2);
  k.t = 4.0 * L * std::cosh(eta) / std::sin(theta);
  k.s = -4.0 * L * std::sinh(eta) * std::cos(theta) / std::sin(theta);
  return k;
}

/// P_{01}(eta, theta); also P_{10} by the n1 <-> n2 symmetry.
inline PurityResult purity_p01(double eta, double theta)
{
  detail::require_open_angle(theta);
  const double tan2 = std::pow(std::tan(0.5 * theta), 2);
  const double cot2 = 1.0 / tan2;
  const double num = 3.0 * std::cosh(4.0 * eta) + 4.0 * (tan2 + cot2) * std::cosh(2.0 * eta) +
                     2.0 * tan2 * tan2 + 2.0 * cot2 * cot2 + 1.0;
  const double den = std::sin(theta) * std::pow(detail::angular_sum(eta, theta), 2.5);
  return {num / den, Route::closed_form, 0.0};
}

inline PurityResult purity_p11(double eta, double theta)
{
  detail::require_open_angle(theta);
  const double tan2 = std::pow(std::tan(0.5 * theta), 2);
  const double cot2 = 1.0 / tan2;
  const double tan4 = tan2 * tan2;
  const double cot4 = cot2 * cot2;
  const double num = 9.0 * std::cosh(8.0 * eta) + 16.0 * (tan2 + cot2) * std::cosh(6.0 * eta) +
                     (96.0 * tan4 + 96.0 * cot4 - 36.0) * std::cosh(4.0 * eta) +
                     240.0 * (tan2 + cot2) * std::cosh(2.0 * eta) + 8.0 * tan4 * tan4 +
                     8.0 * cot4 * cot4 - 64.0 * tan4 - 64.0 * cot4 + 459.0;
  const double den = 4.0 * std::sin(theta) * std::pow(detail::angular_sum(eta, theta), 4.5);
  return {num / den, Route::closed_form, 0.0};
}

/// Closed form for the states that have one: (0,0), (0,1), (1,0), (1,1).
inline PurityResult purity_closed_form(QuantumNumbers n, double eta, double theta)
{
  if (n.n1 == 0 && n.n2 == 0) return purity_coherent(eta, theta);
  if ((n.n1 == 0 && n.n2 == 1) || (n.n1 == 1 && n.n2 == 0)) return purity_p01(eta, theta);
  if (n.n1 == 1 && n.n2 == 1) return purity_p11(eta, theta);
  throw domain_error("no closed form for (n1, n2) = (" + std::to_string(n.n1) + ", " +
                     std::to_string(n.n2) + ")");
}

/// General number-state purity as a finite sum over principal labels:
///   P = 2 (n1! n2!)^2 / (sin(theta) sqrt(S))
///       * sum C(i,j,k,l,r) (2u/rho)^i (2v/rho)^j (2w/rho)^k (2t/rho)^l (2s/rho)^r
/// with S = 2 cosh(2 eta) + tan^2 + cot^2. Working with the ratios makes the
/// dimensional factor of the kernel cancel before any power is taken.
inline PurityResult purity_number_appendix(int n1, int n2, double eta, double theta,
                                           const RouteOptions& opts = {})
{
  detail::check_quantum_numbers(n1, n2, opts.cap);
  const auto k = kernel_params(eta, theta, opts.mk_over_hbar2);
  const double ratio = 2.0 / k.rho;
  const std::array<double, 5> base = {ratio * k.u * opts.u_scale, ratio * k.v, ratio * k.w,
                                      ratio * k.t, ratio * k.s};

  double sum = 0.0;
  for (const auto& term : coefficient_table(n1, n2)) {
    const auto& x = term.index;
    sum += term.value * std::pow(base[0], x.i) * std::pow(base[1], x.j) * std::pow(base[2], x.k) *
           std::pow(base[3], x.l) * std::pow(base[4], x.r);
  }
  const double fact = detail::factorial_d(n1) * detail::factorial_d(n2);
  const double prefactor =
      2.0 * fact * fact / (std::sin(theta) * std::sqrt(detail::angular_sum(eta, theta)));
  return {prefactor * sum, Route::appendix_a, 0.0};
}

/// Exponent of the generating function, every coefficient already divided by
/// rho:
///   u(a1^2 + a2^2 + a3^2 + a4^2 - b1^2 - b2^2 - b3^2 - b4^2)
///   + 2v(a1a2 + a3a4 + b1b4 + b2b3) + 2w(a1a4 + a2a3 + b1b2 + b3b4)
///   - 2u(a1a3 + a2a4) + 2u(b1b3 + b2b4)
///   + 2t(a1b4 - a1b2 - a2b1 + a2b3 + a3b2 - a3b4 + a4b1 - a4b3)
///   + 2s(a1b1 - a1b3 + a2b2 - a2b4 - a3b1 + a3b3 - a4b2 + a4b4)
inline QuadraticForm8<double> generating_form(const PurityKernelParams& k)
{
  const double u = k.u / k.rho;
  const double v = 2.0 * k.v / k.rho;
  const double w = 2.0 * k.w / k.rho;
  const double t = 2.0 * k.t / k.rho;
  const double s = 2.0 * k.s / k.rho;
  const auto a = [](int i) { return alpha_slot(i); };
  const auto b = [](int i) { return beta_slot(i); };

  QuadraticForm8<double> q;
  q.set(a(1), a(1), u);
  q.set(a(1), a(2), v);
  q.set(a(1), a(3), -2.0 * u);
  q.set(a(1), a(4), w);
  q.set(a(1), b(1), s);
  q.set(a(1), b(2), -t);
  q.set(a(1), b(3), -s);
  q.set(a(1), b(4), t);
  q.set(a(2), a(2), u);
  q.set(a(2), a(3), w);
  q.set(a(2), a(4), -2.0 * u);
  q.set(a(2), b(1), -t);
  q.set(a(2), b(2), s);
  q.set(a(2), b(3), t);
  q.set(a(2), b(4), -s);
  q.set(a(3), a(3), u);
  q.set(a(3), a(4), v);
  q.set(a(3), b(1), -s);
  q.set(a(3), b(2), t);
  q.set(a(3), b(3), s);
  q.set(a(3), b(4), -t);
  q.set(a(4), a(4), u);
  q.set(a(4), b(1), t);
  q.set(a(4), b(2), -s);
  q.set(a(4), b(3), -t);
  q.set(a(4), b(4), s);
  q.set(b(1), b(1), -u);
  q.set(b(1), b(2), w);
  q.set(b(1), b(3), 2.0 * u);
  q.set(b(1), b(4), v);
  q.set(b(2), b(2), -u);
  q.set(b(2), b(3), v);
  q.set(b(2), b(4), 2.0 * u);
  q.set(b(3), b(3), -u);
  q.set(b(3), b(4), w);
  q.set(b(4), b(4), -u);
  return q;
}

namespace detail {

/// (lambda1 lambda2 / pi)^2 J, the Gaussian-integral prefactor with the
/// Jacobian J = 1 / (lambda1 lambda2 sqrt(A B)),
///   A = lambda1^2 cos^2 + lambda2^2 sin^2,  B = lambda1^2 sin^2 + lambda2^2 cos^2.
inline double gaussian_prefactor(double eta, double theta, double mk_over_hbar2)
{
  const double base = std::pow(mk_over_hbar2, 0.25);
  const double l1 = std::exp(0.5 * eta) * base;
  const double l2 = std::exp(-0.5 * eta) * base;
  const double c2 = std::pow(std::cos(0.5 * theta), 2);
  const double s2 = std::pow(std::sin(0.5 * theta), 2);
  const double A = l1 * l1 * c2 + l2 * l2 * s2;
  const double B = l1 * l1 * s2 + l2 * l2 * c2;
  const double jacobian = 1.0 / (l1 * l2 * std::sqrt(A * B));
  return std::pow(l1 * l2 / std::numbers::pi, 2) * jacobian;
}

/// Generating-function purity before the overall constant is fixed.
inline double gf_uncalibrated(int n1, int n2, double eta, double theta, const RouteOptions& opts)
{
  auto k = kernel_params(eta, theta, opts.mk_over_hbar2);
  k.u *= opts.u_scale;
  const auto q = generating_form(k);

  MultiDegree target{};
  for (int i = 1; i <= 4; ++i) {
    target[alpha_slot(i)] = static_cast<std::uint8_t>(n1);
    target[beta_slot(i)] = static_cast<std::uint8_t>(n2);
  }
  const Truncation trunc{.cap = 4 * (n1 + n2), .box = target};
  const double coeff = extract_coefficient(exp_truncated(q, trunc), target);

  // prod_i d^n1/d alpha_i d^n2/d beta_i at 0 = coefficient * (n1!)^4 (n2!)^4,
  // and the number-state normalization contributes 1 / (n1! n2!)^2.
  const double f1 = factorial_d(n1);
  const double f2 = factorial_d(n2);
  const double derivative = coeff * std::pow(f1, 4) * std::pow(f2, 4) / std::pow(f1 * f2, 2);
  return gaussian_prefactor(eta, theta, opts.mk_over_hbar2) * derivative;
}

}  // namespace detail

inline constexpr double kCalibrationEta = 0.5;
inline constexpr double kCalibrationTheta = std::numbers::pi / 2;

/// Overall constant of the generating-function route, fixed once by requiring
/// P_00 to equal the coherent closed form at (eta, theta) = (0.5, pi/2).
/// Analytically this is pi^2, the value of the remaining four-dimensional
/// Gaussian integral.
inline double gf_normalization()
{
  static const double constant =
      purity_coherent(kCalibrationEta, kCalibrationTheta).value /
      detail::gf_uncalibrated(0, 0, kCalibrationEta, kCalibrationTheta, RouteOptions{});
  return constant;
}

/// Number-state purity by expanding exp(q) as a truncated polynomial and
/// reading off the coefficient of prod alpha_i^n1 beta_i^n2.
inline PurityResult purity_number_gf(int n1, int n2, double eta, double theta,
                                     const RouteOptions& opts = {})
{
  detail::check_quantum_numbers(n1, n2, opts.cap);
  detail::require_open_angle(theta);
  return {gf_normalization() * detail::gf_uncalibrated(n1, n2, eta, theta, opts),
          Route::generating_function, 0.0};
}

}  // namespace cho
