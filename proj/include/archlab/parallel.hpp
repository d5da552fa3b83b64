#pragma once

// Standard two-process parallel model: iid channels, Ta = za, Tb = zb.
// After relabelling so that a finishes first, the stage durations are
// T_a = za and T_b = zb - za.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "archlab/distribution.hpp"
#include "archlab/format.hpp"
#include "archlab/grid.hpp"
#include "archlab/serial.hpp"

namespace archlab {

struct ParallelTwoModel {
  Distribution dist;
};

// P(Tb <= tau | Ta <= tau) - P(Tb <= tau) evaluated as the literal quotient;
// it cancels to zero for any distribution.
inline double parallel_dependence_difference(const ParallelTwoModel& model, double tau) {
  const double F = model.dist.cdf(tau);
  if (!(F > 0.0)) throw ConditioningError("parallel dependence: conditioning on null event F(tau) = 0");
  const double joint = F * F;
  return joint / F - F;
}

// P(T_b > t | Tb > Ta) = S(T_a + t) / S(T_a).
inline double conditional_ict_survival(const ParallelTwoModel& model, double Ta, double t) {
  detail::require_time(Ta, "conditional_ict_survival");
  detail::require_time(t, "conditional_ict_survival");
  const auto& d = model.dist;
  const double s_first = d.survival(Ta);
  if (!(s_first > kSurvivalFloor)) {
    throw ConditioningError("conditional_ict_survival: S(Ta) exhausted at Ta = " + format_number(Ta));
  }
  if (t == 0.0) return 1.0;
  if (Ta + t >= d.upper()) return 0.0;
  if (d.family() == Family::weibull || d.family() == Family::exponential) {
    return std::exp(-(d.cum_hazard(Ta + t) - d.cum_hazard(Ta)));
  }
  return std::clamp(d.survival(Ta + t) / s_first, 0.0, 1.0);
}

// Relative tolerance for comparing two hazard values.
inline constexpr double kHazardTolerance = 1e-9;

// Sign of d/dTa [S(Ta + t)/S(Ta)], which is the sign of h(Ta) - h(Ta + t).
inline Sign ict_survival_trend(const ParallelTwoModel& model, double Ta, double t) {
  const double h0 = model.dist.hazard(Ta);
  const double h1 = model.dist.hazard(Ta + t);
  return classify_sign(h0 - h1, kHazardTolerance * std::max({1.0, std::abs(h0), std::abs(h1)}));
}

// alpha(t, Ta + t) = h(Ta + t) / h(t).
inline double hazard_ratio_alpha(const ParallelTwoModel& model, double t, double Ta) {
  const double ht = model.dist.hazard(t);
  if (!(ht > 0.0) || !std::isfinite(ht)) {
    throw DomainError("hazard_ratio_alpha: h(t) must be positive and finite at t = " + format_number(t));
  }
  return model.dist.hazard(Ta + t) / ht;
}

struct StageSurvivalGap {
  double gap;    // S^2(t) - S(Ta + t)/S(Ta)
  double expr4;  // -2H(t) + H(Ta + t) - H(Ta); same sign as gap
  // Sign of gap resolved in relative terms; nullopt when both terms
  // underflow and the difference cannot be represented.
  std::optional<Sign> gap_sign;
};

inline StageSurvivalGap stage_survival_gap(const ParallelTwoModel& model, double t, double Ta) {
  const auto& d = model.dist;
  const double h_t = d.cum_hazard(t);
  const double h_a = d.cum_hazard(Ta);
  const double first = std::exp(-2.0 * h_t);
  if (Ta + t >= d.upper()) {
    // Second-stage survival is exhausted: S(Ta + t) = 0 while S(Ta) > 0.
    return {first, std::numeric_limits<double>::infinity(),
            first > 0.0 ? std::optional<Sign>(Sign::positive) : std::nullopt};
  }
  const double h_sum = d.cum_hazard(Ta + t);
  const double expr4 = -2.0 * h_t + h_sum - h_a;
  const double second = std::exp(-(h_sum - h_a));
  const double gap = first - second;
  const double scale = std::max(first, second);
  std::optional<Sign> gs;
  if (scale > 0.0) gs = classify_sign(gap, kZeroTolerance * scale);
  return {gap, expr4, gs};
}

struct StageSurvivalRecord {
  double t;
  double Ta;
  double alpha;  // h(Ta + t)/h(t); NaN where undefined
  double expr4;
  double gap;
  Sign sign;                    // class of expr4
  std::optional<Sign> gap_sign; // class of gap, if resolvable
  double alpha_min;             // over s in (0, t] of h(Ta + s)/h(s)
  double alpha_max;
  // Prediction of the pointwise reading alpha(t, Ta + t) >= 2 matches the
  // computed sign (false only where the two readings disagree).
  bool pointwise_consistent;
};

namespace detail {

inline double safe_alpha(const ParallelTwoModel& model, double t, double Ta) {
  try {
    return hazard_ratio_alpha(model, t, Ta);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// alpha(s, Ta + s) sampled on s in (0, t], geometric near 0 and linear after.
inline std::pair<double, double> alpha_range(const ParallelTwoModel& model, double t, double Ta) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  if (!(t > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  auto visit = [&](double s) {
    const double a = safe_alpha(model, s, Ta);
    if (std::isnan(a)) return;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  };
  for (int i = 12; i >= 1; --i) visit(t * std::pow(10.0, -0.5 * i));
  for (int i = 1; i <= 32; ++i) visit(t * i / 32.0);
  if (lo > hi) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  return {lo, hi};
}

}  // namespace detail

inline StageSurvivalRecord stage_survival_record(const ParallelTwoModel& model, double t, double Ta) {
  const auto g = stage_survival_gap(model, t, Ta);
  const Sign s = classify_sign(g.expr4);
  const double alpha = detail::safe_alpha(model, t, Ta);
  const auto [amin, amax] = detail::alpha_range(model, t, Ta);
  bool consistent = true;
  if (!std::isnan(alpha) && s != Sign::zero) {
    const bool predicts_nonneg = alpha >= 2.0;
    consistent = predicts_nonneg == (s == Sign::positive);
  }
  return {t, Ta, alpha, g.expr4, g.gap, s, g.gap_sign, amin, amax, consistent};
}

struct StageSurvivalGrid {
  GridSpec spec;  // first axis t, second axis Ta
  std::vector<StageSurvivalRecord> records;

  void write_csv(std::ostream& os) const {
    os << "t,Ta,alpha,expr4,gap,sign\n";
    for (const auto& r : records) {
      os << format_number(r.t) << ',' << format_number(r.Ta) << ',' << format_number(r.alpha) << ','
         << format_number(r.expr4) << ',' << format_number(r.gap) << ',' << to_string(r.sign) << '\n';
    }
  }
};

inline StageSurvivalGrid stage_survival_grid(const ParallelTwoModel& model, const GridSpec& grid,
                                             unsigned workers = default_workers()) {
  grid.validate();
  StageSurvivalGrid out{grid, {}};
  const GridResult layout{grid, {}};
  out.records = parallel_map<StageSurvivalRecord>(
      grid.size(),
      [&](std::size_t i) {
        const auto p = layout.point(i);
        return stage_survival_record(model, p.x, p.y);
      },
      workers,
      [&](std::size_t i) {
        const auto p = layout.point(i);
        return "grid cell (t=" + format_number(p.x) + ", Ta=" + format_number(p.y) + ")";
      });
  return out;
}

enum class StageTrend { second_stage_slower, second_stage_faster, mixed };

inline std::string_view to_string(StageTrend t) noexcept {
  switch (t) {
    case StageTrend::second_stage_slower: return "second_stage_slower";
    case StageTrend::second_stage_faster: return "second_stage_faster";
    case StageTrend::mixed: return "mixed";
  }
  return "?";
}

struct StageTrendReport {
  StageTrend trend;
  std::optional<StageSurvivalRecord> negative_witness;  // gap < 0: survival rises into stage 2
  std::optional<StageSurvivalRecord> positive_witness;
  std::size_t n_negative = 0;
  std::size_t n_positive = 0;
  std::size_t n_zero = 0;
};

// second_stage_slower: gap < 0 at every signed point (zero points neutral);
// second_stage_faster: gap > 0 at every signed point; otherwise mixed.
inline StageTrendReport classify_stage_trend(const StageSurvivalGrid& grid) {
  StageTrendReport rep;
  rep.trend = StageTrend::mixed;
  for (const auto& r : grid.records) {
    switch (r.sign) {
      case Sign::negative:
        ++rep.n_negative;
        if (!rep.negative_witness) rep.negative_witness = r;
        break;
      case Sign::positive:
        ++rep.n_positive;
        if (!rep.positive_witness) rep.positive_witness = r;
        break;
      case Sign::zero:
        ++rep.n_zero;
        break;
    }
  }
  if (rep.n_negative == 0 && rep.n_positive == 0) {
    throw DomainError("classify_stage_trend: no grid point with a nonzero sign");
  }
  if (rep.n_positive == 0) rep.trend = StageTrend::second_stage_slower;
  else if (rep.n_negative == 0) rep.trend = StageTrend::second_stage_faster;
  return rep;
}

inline StageTrendReport classify_stage_trend(const ParallelTwoModel& model, const GridSpec& region,
                                             unsigned workers = default_workers()) {
  return classify_stage_trend(stage_survival_grid(model, region, workers));
}

}  // namespace archlab
