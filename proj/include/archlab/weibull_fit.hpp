#pragma once

// Maximum-likelihood fit of a Weibull(k, u) to observed completion times.
//
// For fixed k the rate has the closed form u(k) = mean(t^k)^(-1/k), so the
// search is one-dimensional: golden section on the profile log-likelihood
// over log k. Data are rescaled by their maximum so t^k never overflows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "archlab/error.hpp"
#include "archlab/format.hpp"

namespace archlab {

inline constexpr double kShapeMin = 0.05;
inline constexpr double kShapeMax = 50.0;

struct MleFit {
  double k_hat = 0.0;
  double u_hat = 0.0;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
};

namespace detail {

inline void require_data(std::span<const double> data) {
  for (double t : data) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw DomainError("weibull likelihood: data must be positive and finite, got " + format_number(t));
    }
  }
}

}  // namespace detail

// sum_i log f(t_i), f(t) = k u (u t)^(k-1) exp[-(u t)^k].
inline double loglik_weibull(std::span<const double> data, double k, double u) {
  if (!(k > 0.0) || !(u > 0.0)) throw DomainError("loglik_weibull: k and u must be > 0");
  detail::require_data(data);
  const double base = std::log(k) + std::log(u);
  double sum = 0.0;
  for (double t : data) {
    const double lx = std::log(u * t);
    sum += base + (k - 1.0) * lx - std::exp(k * lx);
  }
  return sum;
}

namespace detail {

class WeibullProfile {
 public:
  explicit WeibullProfile(std::span<const double> data) : n_(static_cast<double>(data.size())) {
    tmax_ = *std::max_element(data.begin(), data.end());
    log_tmax_ = std::log(tmax_);
    logs_.reserve(data.size());
    for (double t : data) {
      logs_.push_back(std::log(t / tmax_));
      sum_log_t_ += std::log(t);
    }
  }

  // log mean((t / tmax)^k)
  double log_mean_power(double k) const {
    double s = 0.0;
    for (double lx : logs_) s += std::exp(k * lx);
    return std::log(s / n_);
  }

  double rate(double k) const { return std::exp(-log_mean_power(k) / k - log_tmax_); }

  double value(double k) const {
    return n_ * std::log(k) - n_ * log_mean_power(k) - n_ * k * log_tmax_ + (k - 1.0) * sum_log_t_ - n_;
  }

  // Moment heuristic: Var(log T) = pi^2 / (6 k^2).
  double initial_shape() const {
    double mean = 0.0;
    for (double lx : logs_) mean += lx;
    mean /= n_;
    double var = 0.0;
    for (double lx : logs_) var += (lx - mean) * (lx - mean);
    var /= (n_ - 1.0);
    return std::clamp(std::numbers::pi / std::sqrt(6.0 * var), kShapeMin, kShapeMax);
  }

 private:
  double n_;
  double tmax_ = 0.0;
  double log_tmax_ = 0.0;
  double sum_log_t_ = 0.0;
  std::vector<double> logs_;
};

struct GoldenResult {
  double arg;
  double value;
  int iterations;
};

// Maximizes fn on [lo, hi] until hi - lo < tol.
template <class Fn>
GoldenResult golden_maximize(Fn&& fn, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = fn(x1), f2 = fn(x2);
  int it = 0;
  while (hi - lo > tol && it < 500) {
    ++it;
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = fn(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = fn(x1);
    }
  }
  return f1 >= f2 ? GoldenResult{x1, f1, it} : GoldenResult{x2, f2, it};
}

}  // namespace detail

inline MleFit weibull_mle(std::span<const double> data) {
  if (data.size() < 2) throw DomainError("weibull_mle: need at least 2 data points");
  detail::require_data(data);
  const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
  if (*mn == *mx) throw DomainError("weibull_mle: degenerate data (all values identical, k_hat -> inf)");

  const detail::WeibullProfile profile(data);
  const double log_min = std::log(kShapeMin), log_max = std::log(kShapeMax);
  constexpr double kTol = 1e-8;  // width in log k, i.e. relative width in k
  auto objective = [&](double log_k) { return profile.value(std::exp(log_k)); };

  // Bracket around the moment estimate first; widen to the full range if the
  // optimum lands on an inner bracket edge.
  const double k0 = profile.initial_shape();
  double lo = std::max(log_min, std::log(k0 / 4.0));
  double hi = std::min(log_max, std::log(k0 * 4.0));
  auto best = detail::golden_maximize(objective, lo, hi, kTol);
  int iterations = best.iterations;
  const bool at_lo = best.arg - lo < 10 * kTol && lo > log_min;
  const bool at_hi = hi - best.arg < 10 * kTol && hi < log_max;
  if (at_lo || at_hi) {
    best = detail::golden_maximize(objective, log_min, log_max, kTol);
    iterations += best.iterations;
  }
  MleFit fit;
  fit.k_hat = std::exp(best.arg);
  fit.u_hat = profile.rate(fit.k_hat);
  fit.loglik = loglik_weibull(data, fit.k_hat, fit.u_hat);
  fit.iterations = iterations;
  fit.converged = best.arg - log_min > 10 * kTol && log_max - best.arg > 10 * kTol;
  return fit;
}

inline std::string to_json(const MleFit& fit, std::size_t n, std::uint64_t seed) {
  return JsonObject()
      .add("k_hat", fit.k_hat)
      .add("u_hat", fit.u_hat)
      .add("loglik", fit.loglik)
      .add("converged", fit.converged)
      .add("n", static_cast<std::uint64_t>(n))
      .add("seed", seed)
      .str();
}

}  // namespace archlab
