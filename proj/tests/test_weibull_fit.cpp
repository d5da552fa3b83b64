#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "archlab/distribution.hpp"
#include "archlab/rng.hpp"
#include "archlab/weibull_fit.hpp"

using namespace archlab;

namespace {

std::vector<double> draw(const Distribution& d, std::size_t n, std::uint64_t seed) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(seed, i);
    out[i] = sample(d, rng);
  }
  return out;
}

}  // namespace

TEST(Loglik, SpecValues) {
  const std::vector<double> one{1.0};
  EXPECT_DOUBLE_EQ(loglik_weibull(one, 1.0, 1.0), -1.0);
  const std::vector<double> data{0.2, 1.5, 3.0, 0.7};
  for (double u : {0.3, 1.0, 2.0}) {
    double expo = 0.0;
    for (double t : data) expo += std::log(u) - u * t;
    EXPECT_NEAR(loglik_weibull(data, 1.0, u), expo, 1e-12);
  }
}

TEST(Loglik, MatchesLogPdf) {
  const auto d = Distribution::weibull(2.3, 0.6);
  const std::vector<double> data{0.1, 0.9, 2.0, 4.4};
  double ref = 0.0;
  for (double t : data) ref += std::log(d.pdf(t));
  EXPECT_NEAR(loglik_weibull(data, 2.3, 0.6), ref, 1e-12);
}

// Scaling data by c and the rate by 1/c shifts the log-likelihood by -n log c.
TEST(Loglik, ScaleEquivariance) {
  const std::vector<double> data{0.3, 0.8, 1.1, 5.0, 2.2};
  for (double c : {0.1, 3.0, 250.0}) {
    std::vector<double> scaled;
    for (double t : data) scaled.push_back(c * t);
    EXPECT_NEAR(loglik_weibull(scaled, 1.7, 0.9 / c), loglik_weibull(data, 1.7, 0.9) - data.size() * std::log(c), 1e-10);
  }
}

TEST(Loglik, DomainErrors) {
  const std::vector<double> bad{1.0, -0.5};
  EXPECT_THROW(loglik_weibull(bad, 1.0, 1.0), DomainError);
  const std::vector<double> good{1.0};
  EXPECT_THROW(loglik_weibull(good, 0.0, 1.0), DomainError);
  EXPECT_THROW(loglik_weibull(good, 1.0, -1.0), DomainError);
}

TEST(Mle, RecoversParameters) {
  const auto data = draw(Distribution::weibull(0.7, 2.0), 10'000, kDefaultSeed);
  const auto fit = weibull_mle(data);
  EXPECT_TRUE(fit.converged);
  EXPECT_GE(fit.k_hat, 0.68);
  EXPECT_LE(fit.k_hat, 0.72);
  EXPECT_GE(fit.u_hat, 1.96);
  EXPECT_LE(fit.u_hat, 2.04);
}

TEST(Mle, ExponentialDataGivesShapeNearOne) {
  const std::size_t n = 10'000;
  const auto data = draw(Distribution::exponential(3.0), n, 17);
  const auto fit = weibull_mle(data);
  // Asymptotic sd of k_hat is about 0.78 k / sqrt(n).
  EXPECT_NEAR(fit.k_hat, 1.0, 3.0 * 0.78 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(fit.u_hat, 3.0, 0.1);
}

TEST(Mle, IsAStationaryMaximum) {
  const auto data = draw(Distribution::weibull(2.5, 0.4), 2'000, 18);
  const auto fit = weibull_mle(data);
  const double hk = 1e-4 * fit.k_hat, hu = 1e-4 * fit.u_hat;
  auto L = [&](double k, double u) { return loglik_weibull(data, k, u); };
  const double gk = (L(fit.k_hat + hk, fit.u_hat) - L(fit.k_hat - hk, fit.u_hat)) / (2 * hk);
  const double gu = (L(fit.k_hat, fit.u_hat + hu) - L(fit.k_hat, fit.u_hat - hu)) / (2 * hu);
  const double hkk = (L(fit.k_hat + hk, fit.u_hat) - 2 * fit.loglik + L(fit.k_hat - hk, fit.u_hat)) / (hk * hk);
  const double huu = (L(fit.k_hat, fit.u_hat + hu) - 2 * fit.loglik + L(fit.k_hat, fit.u_hat - hu)) / (hu * hu);
  EXPECT_LT(hkk, 0.0);
  EXPECT_LT(huu, 0.0);
  // Gradient relative to curvature times the parameter scale.
  EXPECT_LT(std::abs(gk), 1e-4 * std::abs(hkk) * fit.k_hat);
  EXPECT_LT(std::abs(gu), 1e-4 * std::abs(huu) * fit.u_hat);
  for (double dk : {-0.01, 0.01}) {
    for (double du : {-0.01, 0.01}) {
      EXPECT_LE(L(fit.k_hat * (1 + dk), fit.u_hat * (1 + du)), fit.loglik);
    }
  }
}

TEST(Mle, ExtremeScalesDoNotOverflow) {
  auto data = draw(Distribution::weibull(8.0, 1e-6), 500, 19);
  const auto fit = weibull_mle(data);
  EXPECT_NEAR(fit.k_hat, 8.0, 1.0);
  EXPECT_NEAR(fit.u_hat * 1e6, 1.0, 0.05);
}

TEST(Mle, DegenerateAndTooFew) {
  EXPECT_THROW(weibull_mle(std::vector<double>{1.0, 1.0}), DomainError);
  EXPECT_THROW(weibull_mle(std::vector<double>{1.0}), DomainError);
  EXPECT_THROW(weibull_mle(std::vector<double>{1.0, 0.0}), DomainError);
}

TEST(Mle, JsonKeys) {
  MleFit f{0.5, 2.0, -3.25, true, 40};
  EXPECT_EQ(to_json(f, 10, 7), "{\"k_hat\":0.5, \"u_hat\":2, \"loglik\":-3.25, \"converged\":true, \"n\":10, \"seed\":7}");
}
