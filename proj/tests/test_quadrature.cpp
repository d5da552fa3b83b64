#include <cmath>

#include <gtest/gtest.h>

#include "archlab/distribution.hpp"
#include "archlab/quadrature.hpp"

using namespace archlab;

TEST(Integrate, Constant) { EXPECT_NEAR(integrate([](double) { return 1.0; }, 0.0, 3.0), 3.0, 1e-12); }

TEST(Integrate, ExponentialUnitMass) {
  const auto d = Distribution::exponential(1.0);
  const double top = d.quantile(1.0 - 1e-12);
  EXPECT_NEAR(integrate([](double t) { return std::exp(-t); }, 0.0, top), 1.0, 1e-8);
}

TEST(Integrate, UniformPdfAcrossBreakpoint) {
  const auto d = Distribution::uniform(2.0);
  QuadratureConfig cfg;
  cfg.breakpoints = {2.0};
  EXPECT_NEAR(integrate([&](double t) { return d.pdf(t); }, 0.0, 3.0, cfg), 1.0, 1e-12);
}

TEST(Integrate, Polynomials) {
  // Simpson is exact for cubics.
  EXPECT_NEAR(integrate([](double x) { return x * x * x - 2.0 * x; }, -1.0, 2.0), 3.75 - 3.0, 1e-13);
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, M_PI), 2.0, 1e-8);
}

TEST(Integrate, KinkWithoutBreakpointStillConverges) {
  EXPECT_NEAR(integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0), 0.045 + 0.245, 1e-8);
}

TEST(Integrate, EmptyInterval) { EXPECT_EQ(integrate([](double) { return 5.0; }, 1.0, 1.0), 0.0); }

TEST(Integrate, ConvergenceErrorCarriesEstimate) {
  QuadratureConfig cfg;
  cfg.max_depth = 2;
  cfg.abs_tol = 1e-14;
  try {
    integrate([](double x) { return std::sin(40.0 * x); }, 0.0, 3.0, cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.best_estimate()));
  }
}

TEST(Integrate, InvalidArguments) {
  auto one = [](double) { return 1.0; };
  EXPECT_THROW(integrate(one, 2.0, 1.0), DomainError);
  EXPECT_THROW(integrate(one, 0.0, INFINITY), DomainError);
  QuadratureConfig bad;
  bad.abs_tol = 0.0;
  EXPECT_THROW(integrate(one, 0.0, 1.0, bad), DomainError);
  QuadratureConfig unsorted;
  unsorted.breakpoints = {0.5, 0.2};
  EXPECT_THROW(integrate(one, 0.0, 1.0, unsorted), DomainError);
  QuadratureConfig depth;
  depth.max_depth = 0;
  EXPECT_THROW(integrate(one, 0.0, 1.0, depth), DomainError);
}
