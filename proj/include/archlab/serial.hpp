#pragma once

// Total-completion-time dependence for the standard two-process serial model:
// iid processing times za, zb; process a goes first with probability p.
//
//   P(Ta <= tau) = p F + (1 - p) f*F
//   P(Tb <= tau) = (1 - p) F + p f*F
//   P(Tb <= tau | Ta <= tau) - P(Tb <= tau)
//       = R { 1 - F - p(1-p) [ sqrt(f*F) - F / sqrt(f*F) ]^2 },
//   R   = f*F / P(Ta <= tau).

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "archlab/convolution.hpp"
#include "archlab/distribution.hpp"
#include "archlab/format.hpp"
#include "archlab/grid.hpp"
#include "archlab/rng.hpp"
#include "archlab/stats.hpp"

namespace archlab {

// Absolute tolerance under which a dependence value is classified as zero.
inline constexpr double kZeroTolerance = 1e-9;

enum class Sign { negative, zero, positive };

inline Sign classify_sign(double value, double tol = kZeroTolerance) noexcept {
  if (value > tol) return Sign::positive;
  if (value < -tol) return Sign::negative;
  return Sign::zero;
}

inline std::string_view to_string(Sign s) noexcept {
  switch (s) {
    case Sign::negative: return "negative";
    case Sign::zero: return "zero";
    case Sign::positive: return "positive";
  }
  return "?";
}

enum class Process { a, b };

struct SerialTwoModel {
  Distribution dist;
  double p = 0.5;  // probability that a is processed first

  SerialTwoModel(Distribution d, double p_first) : dist(std::move(d)), p(p_first) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DomainError("serial model: p must lie in [0, 1], got " + format_number(p));
    }
  }
};

// F(tau) and f*F(tau), the two ingredients of every serial functional.
struct CompletionTerms {
  double F;
  double conv;
};

inline CompletionTerms completion_terms(const Distribution& dist, double tau,
                                        ConvolutionPath path = ConvolutionPath::automatic) {
  detail::require_time(tau, "serial analysis");
  return {dist.cdf(tau), convolve_cdf(dist, tau, path)};
}

inline double marginal_from_terms(double p, Process which, CompletionTerms t) noexcept {
  return which == Process::a ? p * t.F + (1.0 - p) * t.conv : (1.0 - p) * t.F + p * t.conv;
}

inline double marginal_completion_cdf(const SerialTwoModel& model, Process which, double tau) {
  return marginal_from_terms(model.p, which, completion_terms(model.dist, tau));
}

// Direct quotient: f*F / P(Ta <= tau) - P(Tb <= tau).
inline double dependence_quotient(double p, CompletionTerms t) {
  const double ma = marginal_from_terms(p, Process::a, t);
  if (!(ma > 0.0)) throw ConditioningError("dependence: conditioning on null event P(Ta <= tau) = 0");
  return t.conv / ma - marginal_from_terms(p, Process::b, t);
}

// Factored form R{1 - F - p(1-p)[sqrt(c) - F/sqrt(c)]^2}. At c = 0 the
// product R * F^2 / c is replaced by its limit p(1-p) F^2 / P(Ta <= tau).
inline double dependence_factored(double p, CompletionTerms t) {
  const double ma = marginal_from_terms(p, Process::a, t);
  if (!(ma > 0.0)) throw ConditioningError("dependence: conditioning on null event P(Ta <= tau) = 0");
  if (t.conv == 0.0) return -p * (1.0 - p) * t.F * t.F / ma;
  const double r = t.conv / ma;
  const double root = std::sqrt(t.conv);
  const double bracket = root - t.F / root;
  return r * (1.0 - t.F - p * (1.0 - p) * bracket * bracket);
}

// P(Tb <= tau | Ta <= tau) - P(Tb <= tau), quotient form.
inline double dependence_difference(const SerialTwoModel& model, double tau) {
  return dependence_quotient(model.p, completion_terms(model.dist, tau));
}

inline double dependence_difference_factored(const SerialTwoModel& model, double tau) {
  return dependence_factored(model.p, completion_terms(model.dist, tau));
}

// The p = 1/2 bracket 1 - F - (1/4)[sqrt(c) - F/sqrt(c)]^2. Its sign is the
// sign of the dependence difference at p = 1/2.
inline double expression3(double F_val, double conv_val) {
  if (!(conv_val > 0.0)) throw DomainError("expression3: conv must be > 0 (division by sqrt(conv))");
  if (!(F_val <= 1.0) || conv_val > F_val * (1.0 + 1e-12)) {
    throw DomainError("expression3: ordering violated, need 0 < conv <= F <= 1 (F=" +
                      format_number(F_val) + ", conv=" + format_number(conv_val) + ")");
  }
  const double root = std::sqrt(conv_val);
  const double bracket = root - F_val / root;
  return 1.0 - F_val - 0.25 * bracket * bracket;
}

struct DependenceRecord {
  double tau;
  double F;
  double conv;
  double marginal_a;
  double marginal_b;
  double R;        // f*F / P(Ta <= tau)
  double R_prime;  // 1 / P(Ta <= tau)
  double difference;
  Sign sign;
  bool defined = true;  // false where P(Ta <= tau) = 0
};

inline DependenceRecord dependence_record(const SerialTwoModel& model, double tau,
                                          ConvolutionPath path = ConvolutionPath::automatic) {
  const auto t = completion_terms(model.dist, tau, path);
  const double ma = marginal_from_terms(model.p, Process::a, t);
  const double diff = dependence_quotient(model.p, t);
  return {tau, t.F, t.conv, ma, marginal_from_terms(model.p, Process::b, t), t.conv / ma, 1.0 / ma,
          diff, classify_sign(diff)};
}

struct DependenceProfile {
  std::vector<DependenceRecord> records;

  void write_csv(std::ostream& os) const {
    os << "tau,F,conv,marginal_a,marginal_b,R,difference,sign\n";
    for (const auto& r : records) {
      os << format_number(r.tau) << ',' << format_number(r.F) << ',' << format_number(r.conv) << ','
         << format_number(r.marginal_a) << ',' << format_number(r.marginal_b) << ','
         << format_number(r.R) << ',' << format_number(r.difference) << ','
         << (r.defined ? to_string(r.sign) : std::string_view("undefined")) << '\n';
    }
  }
};

inline DependenceProfile dependence_profile(const SerialTwoModel& model, const std::vector<double>& taus,
                                            unsigned workers = default_workers()) {
  DependenceProfile profile;
  profile.records = parallel_map<DependenceRecord>(
      taus.size(),
      [&](std::size_t i) {
        try {
          return dependence_record(model, taus[i]);
        } catch (const ConditioningError&) {
          const auto t = completion_terms(model.dist, taus[i]);
          const double nan = std::numeric_limits<double>::quiet_NaN();
          return DependenceRecord{taus[i], t.F, t.conv, 0.0, marginal_from_terms(model.p, Process::b, t),
                                  nan, nan, nan, Sign::zero, false};
        }
      },
      workers,
      [&](std::size_t i) { return "tau=" + format_number(taus[i]); });
  return profile;
}

inline DependenceProfile dependence_profile(const SerialTwoModel& model, const Axis& tau_axis,
                                            unsigned workers = default_workers()) {
  return dependence_profile(model, tau_axis.points(), workers);
}

struct FixedOrderCovariance {
  double cov_estimate;     // Cov(Ta, Tb) with Ta = za, Tb = za + zb
  double var_t1_estimate;  // Var(T1) = Var(za) from the same draws
  double diff_stderr;      // standard error of cov_estimate - var_t1_estimate
  std::optional<double> analytic_var;
};

// Case I only (a then b). Both estimates target Var(T1).
inline FixedOrderCovariance fixed_order_covariance(const Distribution& dist, std::uint64_t n_trials,
                                                   std::uint64_t seed = kDefaultSeed) {
  if (n_trials < 2) throw DomainError("fixed_order_covariance: need n_trials >= 2");
  std::vector<double> total_a(n_trials), total_b(n_trials), other(n_trials);
  for (std::uint64_t i = 0; i < n_trials; ++i) {
    RngStream rng(seed, i);
    const double za = sample(dist, rng);
    const double zb = sample(dist, rng);
    total_a[i] = za;
    total_b[i] = za + zb;
    other[i] = zb;
  }
  const auto cov = stats::covariance(total_a, total_b);
  const auto var = stats::covariance(total_a, total_a);
  // cov(za, za + zb) - var(za) = cov(za, zb); its spread sets the comparison scale.
  const auto cross = stats::covariance(total_a, other);
  std::optional<double> analytic;
  if (dist.family() != Family::custom) analytic = dist.variance();
  return {cov.covariance, var.covariance, cross.stderr, analytic};
}

}  // namespace archlab
