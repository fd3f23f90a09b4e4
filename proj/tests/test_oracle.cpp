#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cho/oracle.hpp"
#include "cho/purity.hpp"

using namespace cho;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Reduce, TraceAndSymmetry)
{
  const auto p = from_synthetic(1.0, kPi / 2);
  const auto state = OracleState::coherent(0, 0);
  const auto rd = reduce(make_evaluator(p, 1, state), default_grid(p, 1, state, 400));
  EXPECT_NEAR(rd.norm, 1.0, 1e-8);
  EXPECT_EQ(rd.matrix, rd.matrix.transpose());
}

TEST(Reduce, RejectsTinyGrids)
{
  const auto p = from_synthetic(1.0, kPi / 2);
  const auto state = OracleState::coherent(0, 0);
  EXPECT_THROW(reduce(make_evaluator(p, 1, state), default_grid(p, 1, state, 32)), std::invalid_argument);
}

TEST(Reduce, NarrowGridIsReported)
{
  const auto p = from_synthetic(1.0, kPi / 2);
  const auto state = OracleState::coherent(0, 0);
  auto grid = default_grid(p, 1, state, 200);
  grid.half_width_sigmas = 3.0;
  EXPECT_THROW(reduce(make_evaluator(p, 1, state), grid), grid_too_narrow);
}

TEST(Oracle, DecoupledGroundStateIsExactlyPure)
{
  const auto p = from_synthetic(0.0, 1.0);
  const auto r = oracle_purity(p, 1, OracleState::coherent(0, 0));
  EXPECT_NEAR(r.value, 1.0, 1e-10);
  EXPECT_LT(r.error_estimate, 1e-10);
  EXPECT_EQ(r.route, Route::oracle);
}

TEST(Oracle, MatchesClosedForms)
{
  EXPECT_NEAR(oracle_purity(from_synthetic(1.0, kPi / 2), 1, OracleState::coherent(0, 0)).value,
              1 / std::cosh(1.0), 1e-6);
  EXPECT_NEAR(oracle_purity(from_synthetic(0.0, kPi / 2), 1, OracleState::number(0, 1)).value, 0.5, 1e-6);
  const auto r = oracle_purity(from_synthetic(1.5, kPi / 4), 1, OracleState::number(1, 1));
  EXPECT_NEAR(r.value, purity_p11(1.5, kPi / 4).value, 1e-5);
  EXPECT_LE(std::abs(r.value - purity_p11(1.5, kPi / 4).value), 2 * r.error_estimate + 1e-12);
}

TEST(Oracle, DisplacementIndependence)
{
  const auto p = from_synthetic(0.8, kPi / 3);
  EXPECT_NEAR(oracle_purity(p, 1, OracleState::coherent(0.9, -0.4)).value, purity_coherent(0.8, kPi / 3).value,
              1e-6);
}

TEST(Oracle, SubsystemChoiceDoesNotMatter)
{
  const auto p = from_synthetic(0.7, 1.0);
  for (auto state : {OracleState::coherent(0.3, 0.5), OracleState::number(2, 1)}) {
    const double a = oracle_purity(p, 1, state, 300, Subsystem::first).value;
    const double b = oracle_purity(p, 1, state, 300, Subsystem::second).value;
    EXPECT_NEAR(a, b, 1e-9);
  }
}

TEST(Oracle, UnitsAndMassRatioDoNotMatter)
{
  const auto base = oracle_purity(from_synthetic(0.9, 1.2), 1, OracleState::number(1, 0));
  const auto scaled = oracle_purity(from_synthetic(0.9, 1.2, 3.0, 0.2), 0.4, OracleState::number(1, 0));
  EXPECT_NEAR(base.value, scaled.value, 2 * (base.error_estimate + scaled.error_estimate) + 1e-12);

  // Unequal masses: the physical-frame oracle must track the canonical (eta, theta).
  const auto p = rescale({3.0, 0.5, 1.0, 2.0, 0.9});
  ASSERT_NE(p.mu, 1.0);
  EXPECT_NEAR(oracle_purity(p, 1, OracleState::number(1, 1)).value, purity_p11(p.eta, p.theta).value, 1e-6);
  EXPECT_NEAR(oracle_purity(p, 1, OracleState::coherent(0.5, 0.2)).value,
              purity_coherent(p.eta, p.theta).value, 1e-6);
}

TEST(Oracle, AgreesWithAnalyticRoutesBeyondClosedForms)
{
  for (auto [a, b] : {std::pair{2, 0}, std::pair{2, 1}}) {
    const double exact = purity_number_gf(a, b, 0.6, 1.1).value;
    EXPECT_NEAR(oracle_purity(from_synthetic(0.6, 1.1), 1, OracleState::number(a, b)).value, exact, 1e-6);
  }
}

TEST(Oracle, ConfirmsNonMonotoneSecondExcitedState)
{
  const double at0 = oracle_purity(from_synthetic(0.0, kPi / 2), 1, OracleState::number(2, 1)).value;
  const double at03 = oracle_purity(from_synthetic(0.3, kPi / 2), 1, OracleState::number(2, 1)).value;
  EXPECT_NEAR(at0, 0.3125, 1e-9);
  EXPECT_NEAR(at03, purity_number_appendix(2, 1, 0.3, kPi / 2).value, 1e-9);
  EXPECT_GT(at03, at0);
}
