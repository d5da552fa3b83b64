#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "archlab/rng.hpp"
#include "archlab/stats.hpp"

using namespace archlab;
using namespace archlab::stats;

// Reference values below come from SciPy (special.kolmogorov, chi2.sf,
// ks_2samp, chi2_contingency, chisquare, numpy.cov).

TEST(Moments, Welford) {
  RunningMoments m;
  for (double x : {1.0, 2.0, 4.0, 7.0}) m.add(x);
  EXPECT_EQ(m.count(), 4u);
  EXPECT_DOUBLE_EQ(m.mean(), 3.5);
  EXPECT_DOUBLE_EQ(m.variance(), 7.0);
  EXPECT_DOUBLE_EQ(m.stderr_of_mean(), std::sqrt(7.0 / 4.0));
}

TEST(Moments, BinomialStderr) {
  EXPECT_DOUBLE_EQ(binomial_stderr(0.5, 100), 0.05);
  EXPECT_EQ(binomial_stderr(0.5, 0), 0.0);
}

TEST(Covariance, MatchesReference) {
  const std::vector<double> x{1, 2, 3, 4, 5.5}, y{2, 1, 4, 3, 7};
  EXPECT_NEAR(covariance(x, y).covariance, 3.45, 1e-14);
  EXPECT_THROW(covariance(std::vector<double>{1.0}, std::vector<double>{1.0}), DomainError);
  EXPECT_THROW(covariance(x, std::vector<double>{1.0, 2.0}), DomainError);
}

TEST(Covariance, StderrCalibrated) {
  // Independent normals-ish: covariance within a few stderr of zero.
  std::vector<double> x, y;
  for (std::uint64_t i = 0; i < 100'000; ++i) {
    RngStream r(1, i);
    x.push_back(r.uniform());
    y.push_back(r.uniform());
  }
  const auto c = covariance(x, y);
  EXPECT_NEAR(c.stderr, 1.0 / 12.0 / std::sqrt(100'000.0), 2e-5);
  EXPECT_LE(std::abs(c.covariance), 4.0 * c.stderr);
}

TEST(Kolmogorov, TailValues) {
  EXPECT_NEAR(kolmogorov_tail(1.0), 0.26999967167735456, 1e-12);
  EXPECT_NEAR(kolmogorov_tail(0.5), 0.9639452436648751, 1e-12);
  EXPECT_NEAR(kolmogorov_tail(1.36), 0.049485876755377876, 1e-12);
  EXPECT_EQ(kolmogorov_tail(0.0), 1.0);
}

TEST(Ks, TwoSampleStatistic) {
  const std::vector<double> a{0.1, 0.4, 0.7, 1.2, 2.0}, b{0.3, 0.5, 0.9, 1.5, 2.5, 3.0};
  EXPECT_NEAR(ks_two_sample(a, b).statistic, 1.0 / 3.0, 1e-15);
  EXPECT_THROW(ks_two_sample({}, b), DomainError);
}

TEST(Ks, TwoSampleTies) {
  const std::vector<double> a{1, 1, 2, 2}, b{1, 1, 2, 2};
  EXPECT_EQ(ks_two_sample(a, b).statistic, 0.0);
}

TEST(Ks, NullCalibration) {
  // Under the null, p-values are roughly uniform: check the rejection rate.
  int rejections = 0;
  for (std::uint64_t rep = 0; rep < 400; ++rep) {
    std::vector<double> a, b;
    for (std::uint64_t i = 0; i < 500; ++i) {
      RngStream r(rep, i);
      a.push_back(r.uniform());
      b.push_back(r.uniform());
    }
    rejections += ks_two_sample(a, b).p_value < 0.05;
  }
  EXPECT_NEAR(rejections / 400.0, 0.05, 0.035);
}

TEST(Ks, OneSampleDetectsShift) {
  std::vector<double> a;
  for (std::uint64_t i = 0; i < 5000; ++i) {
    RngStream r(2, i);
    a.push_back(r.uniform());
  }
  EXPECT_GT(ks_one_sample(a, [](double x) { return x; }).p_value, 0.001);
  EXPECT_LT(ks_one_sample(a, [](double x) { return std::min(1.0, x * 1.1); }).p_value, 1e-6);
}

TEST(ChiSquared, TailValues) {
  EXPECT_NEAR(chi_squared_upper_tail(3.84, 1), 0.05004352124870519, 1e-12);
  EXPECT_NEAR(chi_squared_upper_tail(10.0, 5), 0.07523524614651217, 1e-12);
}

TEST(ChiSquared, Homogeneity) {
  const std::vector<std::size_t> a{10, 20, 30}, b{15, 15, 30};
  const auto r = chi_squared_homogeneity(a, b);
  EXPECT_NEAR(r.statistic, 1.7142857142857144, 1e-12);
  EXPECT_NEAR(r.p_value, 0.42437284567695, 1e-10);
  const std::vector<std::size_t> short_b{1, 2};
  EXPECT_THROW(chi_squared_homogeneity(a, short_b), DomainError);
}

TEST(ChiSquared, GoodnessOfFit) {
  const std::vector<std::size_t> c{18, 22, 20, 40};
  const std::vector<double> p{0.25, 0.25, 0.25, 0.25};
  const auto r = chi_squared_gof(c, p);
  EXPECT_NEAR(r.statistic, 12.32, 1e-12);
  EXPECT_NEAR(r.p_value, 0.006363629995195269, 1e-10);
}
