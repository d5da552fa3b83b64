#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "archlab/distribution.hpp"
#include "archlab/quadrature.hpp"

namespace archlab {

enum class ConvolutionPath {
  automatic,    // closed form when the family has one, else numerical
  closed_form,  // exponential and uniform only
  numerical,
};

namespace detail {

inline double convolve_closed_form(const Distribution& dist, double tau) {
  if (const auto* e = std::get_if<Exponential>(&dist.params())) {
    // 1 - e^{-u tau} - u tau e^{-u tau}, i.e. the Erlang(2, u) cdf.
    return boost::math::gamma_p(2.0, e->rate * tau);
  }
  if (const auto* un = std::get_if<Uniform>(&dist.params())) {
    const double v = un->upper;
    const double r = tau / v;
    if (tau < v) return 0.5 * r * r;
    if (tau < 2.0 * v) return 2.0 * r - 0.5 * r * r - 1.0;
    return 1.0;
  }
  throw DomainError("convolve_cdf: no closed form for " + dist.to_string());
}

inline double convolve_numerical(const Distribution& dist, double tau, const QuadratureConfig& cfg) {
  const double full = dist.cdf(tau);
  if (full == 0.0) return 0.0;
  QuadratureConfig local = cfg;
  local.abs_tol = cfg.abs_tol * std::min(1.0, full * full);
  const double ub = dist.upper();

  if (const auto* w = std::get_if<Weibull>(&dist.params()); w && w->shape > 1.0) {
    // Same halving identity in the time scale. f(x) ~ x^(k-1) at 0 has an
    // unbounded derivative for non-integer k; x = (tau/2) s^p with p k >= 5
    // makes the integrand smooth enough for Simpson at the left end.
    const double half = 0.5 * tau;
    const double half_mass = dist.cdf(half);
    if (half_mass == 0.0) return 0.0;
    const double p = std::max(1.0, std::ceil(5.0 / w->shape));
    local.abs_tol *= 0.5;
    const double inner = integrate(
        [&](double s) {
          if (s <= 0.0) return 0.0;
          const double x = half * std::pow(s, p);
          return dist.pdf(x) * dist.cdf(tau - x) * half * p * std::pow(s, p - 1.0);
        },
        0.0, 1.0, local);
    return std::clamp(2.0 * inner - half_mass * half_mass, 0.0, full);
  }

  if (dist.has_closed_form_quantile()) {
    // P(za + zb <= tau) = 2 P(za <= tau/2, za + zb <= tau) - F(tau/2)^2, and
    // the remaining integral over za is taken in the probability scale
    // y = F(za), which keeps the integrand bounded when f is singular at 0.
    const double half_mass = dist.cdf(0.5 * tau);
    if (half_mass == 0.0) return 0.0;
    std::vector<double> kinks;
    if (std::isfinite(ub) && tau > ub) kinks.push_back(dist.cdf(tau - ub));
    local.breakpoints = kinks;
    local.abs_tol *= 0.5;
    const double inner = integrate(
        [&](double y) {
          const double x = dist.quantile(y);
          return x >= tau ? 0.0 : dist.cdf(tau - x);
        },
        0.0, half_mass, local);
    return std::clamp(2.0 * inner - half_mass * half_mass, 0.0, full);
  }

  std::vector<double> kinks;
  if (std::isfinite(ub)) {
    if (tau > ub) kinks.push_back(tau - ub);
    if (ub < tau) kinks.push_back(ub);
  }
  std::sort(kinks.begin(), kinks.end());
  local.breakpoints = kinks;
  const double direct = integrate([&](double x) { return dist.pdf(x) * dist.cdf(tau - x); }, 0.0,
                                  tau, local);
  return std::clamp(direct, 0.0, full);
}

}  // namespace detail

inline bool has_closed_form_convolution(const Distribution& dist) noexcept {
  return dist.family() == Family::exponential || dist.family() == Family::uniform;
}

// f * F (tau) = P(za + zb <= tau) = int_0^tau f(x) F(tau - x) dx for iid za, zb.
inline double convolve_cdf(const Distribution& dist, double tau,
                           ConvolutionPath path = ConvolutionPath::automatic,
                           const QuadratureConfig& cfg = {}) {
  detail::require_time(tau, "convolve_cdf");
  if (tau == 0.0) return 0.0;
  switch (path) {
    case ConvolutionPath::closed_form:
      return detail::convolve_closed_form(dist, tau);
    case ConvolutionPath::numerical:
      return detail::convolve_numerical(dist, tau, cfg);
    case ConvolutionPath::automatic:
      break;
  }
  return has_closed_form_convolution(dist) ? detail::convolve_closed_form(dist, tau)
                                           : detail::convolve_numerical(dist, tau, cfg);
}

}  // namespace archlab
