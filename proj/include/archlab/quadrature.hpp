#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "archlab/error.hpp"

namespace archlab {

struct QuadratureConfig {
  double abs_tol = 1e-8;
  int max_depth = 40;
  // Points where the integrand may jump or kink. Must be sorted ascending.
  std::vector<double> breakpoints;
};

namespace detail {

inline void validate(const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0)) throw DomainError("quadrature: abs_tol must be > 0");
  if (cfg.max_depth < 1) throw DomainError("quadrature: max_depth must be >= 1");
  if (!std::is_sorted(cfg.breakpoints.begin(), cfg.breakpoints.end())) {
    throw DomainError("quadrature: breakpoints must be sorted ascending");
  }
}

template <class Fn>
struct SimpsonState {
  Fn& fn;
  int max_depth;
  long evals = 0;
  bool failed = false;

  static constexpr long kEvalBudget = 20'000'000;

  double step(double a, double fa, double m, double fm, double b, double fb, double whole,
              double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    evals += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double sum = left + right;
    const double diff = sum - whole;
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() *
                            (std::abs(left) + std::abs(right));
    if (std::abs(diff) <= 15.0 * tol || std::abs(diff) <= roundoff || lm == a || rm == b) {
      return sum + diff / 15.0;
    }
    if (depth >= max_depth || evals > kEvalBudget) {
      failed = true;
      return sum + diff / 15.0;
    }
    return step(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
           step(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace detail

// Adaptive Simpson on [a, b], split at every breakpoint inside (a, b).
// Segment endpoints are sampled one ulp inside the segment so one-sided
// limits are used at jumps. Throws ConvergenceError (with the best estimate)
// when max_depth is hit before the local error target is met.
template <class Fn>
double integrate(Fn&& fn, double a, double b, const QuadratureConfig& cfg = {}) {
  detail::validate(cfg);
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: need finite a <= b");
  }
  if (a == b) return 0.0;

  std::vector<double> cuts{a};
  for (double p : cfg.breakpoints) {
    if (p > a && p < b && p > cuts.back()) cuts.push_back(p);
  }
  cuts.push_back(b);

  detail::SimpsonState<std::remove_reference_t<Fn>> state{fn, cfg.max_depth};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const double flo = fn(std::nextafter(lo, hi));
    const double fhi = fn(std::nextafter(hi, lo));
    const double mid = 0.5 * (lo + hi);
    const double fmid = fn(mid);
    state.evals += 3;
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    const double tol = cfg.abs_tol * (hi - lo) / (b - a);
    total += state.step(lo, flo, mid, fmid, hi, fhi, whole, tol, 1);
  }
  if (state.failed) {
    throw ConvergenceError("integrate: max_depth " + std::to_string(cfg.max_depth) +
                               " exceeded before reaching abs_tol",
                           total);
  }
  return total;
}

}  // namespace archlab
