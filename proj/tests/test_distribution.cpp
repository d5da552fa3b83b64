#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "archlab/distribution.hpp"
#include "archlab/rng.hpp"

using namespace archlab;

namespace {

const double e1 = std::exp(-1.0);

Distribution draw_family(RngStream& rng, int family) {
  const double scale = std::exp(std::log(0.2) + rng.uniform() * std::log(50.0));
  if (family == 0) return Distribution::weibull(std::exp(std::log(0.3) + rng.uniform() * std::log(4.0 / 0.3)), scale);
  if (family == 1) return Distribution::exponential(scale);
  return Distribution::uniform(scale);
}

}  // namespace

TEST(Pdf, PointValues) {
  EXPECT_DOUBLE_EQ(Distribution::exponential(1.0).pdf(0.0), 1.0);
  EXPECT_NEAR(Distribution::weibull(2.0, 1.0).pdf(1.0), 2.0 * e1, 1e-15);
  EXPECT_NEAR(Distribution::weibull(2.0, 1.0).pdf(1.0), 0.73576, 5e-6);
  EXPECT_EQ(Distribution::uniform(2.0).pdf(3.0), 0.0);
  EXPECT_DOUBLE_EQ(Distribution::uniform(2.0).pdf(0.5), 0.5);
}

TEST(Cdf, PointValues) {
  EXPECT_NEAR(Distribution::exponential(1.0).cdf(1.0), 1.0 - e1, 1e-15);
  EXPECT_NEAR(Distribution::exponential(1.0).cdf(1.0), 0.63212, 5e-6);
  EXPECT_DOUBLE_EQ(Distribution::uniform(2.0).cdf(1.0), 0.5);
  for (const auto& d : {Distribution::weibull(0.4, 3.0), Distribution::exponential(2.0), Distribution::uniform(1.5)}) {
    EXPECT_EQ(d.cdf(0.0), 0.0);
    EXPECT_EQ(d.survival(0.0), 1.0);
  }
}

TEST(Cdf, MatchesIntegralOfPdf) {
  using boost::math::quadrature::gauss_kronrod;
  for (const auto& d : {Distribution::weibull(2.5, 0.7), Distribution::weibull(1.3, 4.0), Distribution::exponential(0.3)}) {
    for (double q : {0.1, 0.5, 0.9}) {
      const double t = d.quantile(q);
      const double integral = gauss_kronrod<double, 61>::integrate([&](double x) { return d.pdf(x); }, 0.0, t, 15, 1e-13);
      EXPECT_NEAR(integral, d.cdf(t), 1e-10) << d.to_string() << " t=" << t;
    }
  }
}

TEST(Survival, PointValues) {
  EXPECT_NEAR(Distribution::exponential(1.0).survival(1.0), e1, 1e-15);
  EXPECT_EQ(Distribution::uniform(2.0).survival(2.0), 0.0);
}

TEST(Hazard, PointValues) {
  EXPECT_DOUBLE_EQ(Distribution::exponential(3.0).hazard(0.0), 3.0);
  EXPECT_DOUBLE_EQ(Distribution::exponential(3.0).hazard(17.0), 3.0);
  EXPECT_DOUBLE_EQ(Distribution::uniform(2.0).hazard(1.0), 1.0);
  EXPECT_DOUBLE_EQ(Distribution::weibull(2.0, 1.0).hazard(0.5), 1.0);
}

TEST(Hazard, ExhaustedSurvivalIsAnError) {
  const auto u = Distribution::uniform(2.0);
  EXPECT_THROW(u.hazard(2.0), DomainError);
  EXPECT_THROW(u.hazard(5.0), DomainError);
  try {
    u.hazard(2.0);
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("exhausted survival"), std::string::npos);
  }
  EXPECT_THROW(Distribution::weibull(0.5, 1.0).hazard(0.0), DomainError);
}

TEST(Hazard, Monotonicity) {
  const auto dec = Distribution::weibull(0.6, 1.3);
  const auto inc = Distribution::weibull(2.2, 0.8);
  const auto uni = Distribution::uniform(3.0);
  double prev_dec = dec.hazard(0.01), prev_inc = inc.hazard(0.01), prev_uni = uni.hazard(0.0);
  for (int i = 1; i < 200; ++i) {
    const double t = 0.01 + i * 0.0149;
    EXPECT_LT(dec.hazard(t), prev_dec);
    EXPECT_GT(inc.hazard(t), prev_inc);
    EXPECT_GT(uni.hazard(t), prev_uni);
    prev_dec = dec.hazard(t);
    prev_inc = inc.hazard(t);
    prev_uni = uni.hazard(t);
  }
}

TEST(CumHazard, PointValues) {
  EXPECT_DOUBLE_EQ(Distribution::exponential(2.0).cum_hazard(3.0), 6.0);
  EXPECT_DOUBLE_EQ(Distribution::weibull(2.0, 1.0).cum_hazard(2.0), 4.0);
  EXPECT_NEAR(Distribution::uniform(2.0).cum_hazard(1.0), std::numbers::ln2, 1e-15);
  for (const auto& d : {Distribution::weibull(0.4, 3.0), Distribution::exponential(2.0), Distribution::uniform(1.5)}) {
    EXPECT_EQ(d.cum_hazard(0.0), 0.0);
  }
  EXPECT_THROW(Distribution::uniform(2.0).cum_hazard(2.0), DomainError);
}

// u (u t)^(k-1) t, the written form, agrees with (u t)^k.
TEST(CumHazard, WrittenWeibullFormEquivalent) {
  for (double k : {0.3, 1.0, 2.0, 4.5}) {
    for (double u : {0.5, 2.0}) {
      const auto d = Distribution::weibull(k, u);
      for (double t : {0.1, 1.0, 3.7}) {
        EXPECT_NEAR(d.cum_hazard(t), u * std::pow(u * t, k - 1.0) * t, 1e-12 * (1.0 + d.cum_hazard(t)));
      }
    }
  }
}

TEST(CumHazard, MatchesIntegralOfHazard) {
  using boost::math::quadrature::gauss_kronrod;
  for (const auto& d : {Distribution::weibull(1.7, 0.9), Distribution::uniform(2.0)}) {
    for (double t : {0.3, 1.2, 1.8}) {
      const double integral = gauss_kronrod<double, 61>::integrate([&](double x) { return d.hazard(x); }, 0.0, t, 15, 1e-13);
      EXPECT_NEAR(integral, d.cum_hazard(t), 1e-9);
    }
  }
}

TEST(Quantile, PointValues) {
  EXPECT_NEAR(Distribution::exponential(1.0).quantile(1.0 - e1), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(Distribution::uniform(2.0).quantile(0.25), 0.5);
  EXPECT_NEAR(Distribution::weibull(2.0, 1.0).quantile(1.0 - e1), 1.0, 1e-14);
  EXPECT_EQ(Distribution::exponential(1.0).quantile(0.0), 0.0);
}

TEST(Quantile, OutOfRange) {
  const auto d = Distribution::exponential(1.0);
  EXPECT_THROW(d.quantile(1.0), DomainError);
  EXPECT_THROW(d.quantile(-0.1), DomainError);
  EXPECT_THROW(d.quantile(std::nan("")), DomainError);
}

TEST(Errors, NonFiniteOrNegativeTime) {
  const auto d = Distribution::weibull(2.0, 1.0);
  EXPECT_THROW(d.pdf(std::nan("")), DomainError);
  EXPECT_THROW(d.cdf(std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(d.survival(-1.0), DomainError);
  EXPECT_THROW(Distribution::weibull(0.0, 1.0), DomainError);
  EXPECT_THROW(Distribution::exponential(-1.0), DomainError);
  EXPECT_THROW(Distribution::uniform(0.0), DomainError);
}

TEST(Invariants, FunctionalIdentitiesOnRandomDraws) {
  for (int family = 0; family < 3; ++family) {
    for (std::uint64_t draw = 0; draw < 200; ++draw) {
      RngStream rng(77, draw * 3 + family);
      const auto d = draw_family(rng, family);
      const double top = d.quantile(0.999);
      for (int i = 1; i <= 50; ++i) {
        const double t = top * i / 51.0;
        const double S = d.survival(t);
        ASSERT_LE(std::abs(S - (1.0 - d.cdf(t))), 1e-12) << d.to_string() << " t=" << t;
        if (S > 1e-12) { ASSERT_LE(std::abs(d.cum_hazard(t) + std::log(S)), 1e-10) << d.to_string() << " t=" << t; }
        const double h = d.hazard(t);
        ASSERT_LE(std::abs(h - d.pdf(t) / S), 1e-10 * (1.0 + h)) << d.to_string() << " t=" << t;
      }
    }
  }
}

TEST(Invariants, QuantileInvertsCdf) {
  for (int family = 0; family < 3; ++family) {
    for (std::uint64_t draw = 0; draw < 20; ++draw) {
      RngStream rng(78, draw * 3 + family);
      const auto d = draw_family(rng, family);
      for (int i = 1; i <= 99; ++i) {
        const double q = i / 100.0;
        ASSERT_NEAR(d.cdf(d.quantile(q)), q, 1e-8) << d.to_string();
      }
    }
  }
}

TEST(Invariants, CdfNonDecreasing) {
  for (const auto& d : {Distribution::weibull(0.3, 2.0), Distribution::weibull(5.0, 0.5), Distribution::uniform(1.0)}) {
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double F = d.cdf(i * 0.01);
      ASSERT_GE(F, prev);
      prev = F;
    }
    EXPECT_NEAR(d.cdf(1e6), 1.0, 1e-15);
  }
}

TEST(Invariants, WeibullShapeOneIsExponential) {
  for (double u : {0.1, 1.0, 7.5}) {
    const auto w = Distribution::weibull(1.0, u);
    const auto e = Distribution::exponential(u);
    for (double t : {0.0, 0.01, 0.5, 1.0, 3.0, 10.0}) {
      EXPECT_NEAR(w.pdf(t), e.pdf(t), 1e-12);
      EXPECT_NEAR(w.cdf(t), e.cdf(t), 1e-12);
      EXPECT_NEAR(w.survival(t), e.survival(t), 1e-12);
      EXPECT_NEAR(w.hazard(t), e.hazard(t), 1e-12);
      EXPECT_NEAR(w.cum_hazard(t), e.cum_hazard(t), 1e-12);
    }
  }
}

TEST(Moments, AgainstQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  const auto d = Distribution::weibull(1.8, 2.0);
  const double m = gauss_kronrod<double, 61>::integrate([&](double x) { return x * d.pdf(x); }, 0.0, 20.0, 15, 1e-13);
  const double m2 = gauss_kronrod<double, 61>::integrate([&](double x) { return x * x * d.pdf(x); }, 0.0, 20.0, 15, 1e-13);
  EXPECT_NEAR(d.mean(), m, 1e-10);
  EXPECT_NEAR(d.variance(), m2 - m * m, 1e-10);
  EXPECT_DOUBLE_EQ(Distribution::uniform(1.0).variance(), 1.0 / 12.0);
  EXPECT_DOUBLE_EQ(Distribution::exponential(2.0).variance(), 0.25);
}

TEST(Custom, DerivesHazardAndQuantile) {
  // Triangular density 2(1 - t) on [0, 1).
  CustomDistribution c;
  c.pdf = [](double t) { return 2.0 * (1.0 - t); };
  c.cdf = [](double t) { return t * (2.0 - t); };
  c.upper = 1.0;
  c.name = "triangular";
  const Distribution d(c);
  EXPECT_EQ(d.family(), Family::custom);
  EXPECT_NEAR(d.hazard(0.5), 1.0 / 0.25, 1e-12);
  EXPECT_NEAR(d.cum_hazard(0.5), -std::log(0.25), 1e-12);
  EXPECT_NEAR(d.quantile(0.75), 0.5, 1e-9);
  EXPECT_THROW(d.hazard(1.0), DomainError);
  EXPECT_THROW(d.mean(), DomainError);
  EXPECT_THROW(Distribution(CustomDistribution{}), DomainError);
}

TEST(Parse, ValidSpecs) {
  const auto w = parse_distribution("weibull:k=2,u=1.5");
  ASSERT_EQ(w.family(), Family::weibull);
  EXPECT_DOUBLE_EQ(std::get<Weibull>(w.params()).shape, 2.0);
  EXPECT_DOUBLE_EQ(std::get<Weibull>(w.params()).rate, 1.5);
  EXPECT_EQ(parse_distribution("weibull:u=1.5,k=2").family(), Family::weibull);
  EXPECT_DOUBLE_EQ(std::get<Exponential>(parse_distribution("exp:u=3").params()).rate, 3.0);
  EXPECT_DOUBLE_EQ(std::get<Uniform>(parse_distribution("uniform:v=2").params()).upper, 2.0);
}

namespace {

std::string parse_message(const std::string& spec) {
  try {
    parse_distribution(spec);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Parse, ErrorsNameTheToken) {
  EXPECT_NE(parse_message("gamma:k=1").find("gamma"), std::string::npos);
  EXPECT_NE(parse_message("exp:u").find("'u'"), std::string::npos);
  EXPECT_NE(parse_message("exp:rate=1").find("rate=1"), std::string::npos);
  EXPECT_NE(parse_message("exp:u=abc").find("u=abc"), std::string::npos);
  EXPECT_NE(parse_message("exp:u=-1").find("u=-1"), std::string::npos);
  EXPECT_NE(parse_message("exp:u=1,u=2").find("u=2"), std::string::npos);
  EXPECT_NE(parse_message("weibull:k=2").find("'u'"), std::string::npos);
  EXPECT_NE(parse_message("weibull").find("weibull"), std::string::npos);
  EXPECT_FALSE(parse_message("uniform:v=").empty());
}
