#pragma once

// Small statistics toolbox used by the simulation estimators and the
// verification suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "archlab/error.hpp"

namespace archlab::stats {

// Welford accumulator.
class RunningMoments {
 public:
  void add(double x) noexcept {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stderr_of_mean() const noexcept {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline double binomial_stderr(double p, std::size_t n) {
  return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

struct CovarianceResult {
  double covariance;
  double stderr;  // plug-in standard error of the covariance estimate
};

// Sample covariance of paired data with the standard error of
// mean[(x - mx)(y - my)].
inline CovarianceResult covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("covariance: need two equally sized samples with n >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  RunningMoments prod;
  for (std::size_t i = 0; i < x.size(); ++i) prod.add((x[i] - mx) * (y[i] - my));
  return {prod.mean() * n / (n - 1.0), prod.stderr_of_mean()};
}

// Limiting Kolmogorov distribution tail, P(K > lambda).
inline double kolmogorov_tail(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct TestResult {
  double statistic;
  double p_value;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
// (Stephens' small-sample correction on the effective size).
inline TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d)};
}

// One-sample KS against a continuous cdf.
template <class Cdf>
TestResult ks_one_sample(std::vector<double> a, Cdf&& cdf) {
  if (a.empty()) throw DomainError("ks_one_sample: empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double rn = std::sqrt(n);
  return {d, kolmogorov_tail((rn + 0.12 + 0.11 / rn) * d)};
}

inline double chi_squared_upper_tail(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

// Chi-squared test of homogeneity for two count vectors over the same
// categories. Categories empty in both samples are dropped.
inline TestResult chi_squared_homogeneity(std::span<const std::size_t> a,
                                          std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw DomainError("chi_squared_homogeneity: category count mismatch");
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += static_cast<double>(a[i]);
    nb += static_cast<double>(b[i]);
  }
  if (na == 0.0 || nb == 0.0) throw DomainError("chi_squared_homogeneity: empty sample");
  double stat = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double total = static_cast<double>(a[i] + b[i]);
    if (total == 0.0) continue;
    ++used;
    const double ea = total * na / (na + nb);
    const double eb = total * nb / (na + nb);
    stat += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
  }
  return {stat, chi_squared_upper_tail(stat, used - 1)};
}

// Chi-squared goodness of fit of counts against expected probabilities.
inline TestResult chi_squared_gof(std::span<const std::size_t> counts, std::span<const double> probs) {
  if (counts.size() != probs.size()) throw DomainError("chi_squared_gof: size mismatch");
  double n = 0.0;
  for (auto c : counts) n += static_cast<double>(c);
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = n * probs[i];
    stat += (counts[i] - e) * (counts[i] - e) / e;
  }
  return {stat, chi_squared_upper_tail(stat, static_cast<double>(counts.size()) - 1.0)};
}

}  // namespace archlab::stats
