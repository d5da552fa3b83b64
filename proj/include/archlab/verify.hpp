#pragma once

// Self-check suites run by `archlab verify`. Each check reports what it
// measured so a failing run can be read without a debugger.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "archlab/convolution.hpp"
#include "archlab/distribution.hpp"
#include "archlab/figures.hpp"
#include "archlab/monte_carlo.hpp"
#include "archlab/parallel.hpp"
#include "archlab/recall.hpp"
#include "archlab/serial.hpp"
#include "archlab/stats.hpp"
#include "archlab/weibull_fit.hpp"

namespace archlab::verify {

enum class Suite { all, analysis, mc, recall };

inline Suite parse_suite(std::string_view s) {
  if (s == "all") return Suite::all;
  if (s == "analysis") return Suite::analysis;
  if (s == "mc") return Suite::mc;
  if (s == "recall") return Suite::recall;
  throw ParseError("unknown verification suite '" + std::string(s) + "'");
}

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed;
  std::string measured;
};

namespace detail {

// Random member of one of the three families, parameters log-uniform.
inline Distribution random_distribution(RngStream& rng) {
  const double pick = rng.uniform();
  const double scale = std::exp(std::log(0.2) + rng.uniform() * std::log(50.0));
  if (pick < 1.0 / 3.0) {
    const double k = std::exp(std::log(0.3) + rng.uniform() * std::log(4.0 / 0.3));
    return Distribution::weibull(k, scale);
  }
  if (pick < 2.0 / 3.0) return Distribution::exponential(scale);
  return Distribution::uniform(scale);
}

template <class Fn>
CheckResult run(std::string suite, std::string name, Fn&& fn) {
  try {
    auto [ok, measured] = fn();
    return {std::move(suite), std::move(name), ok, std::move(measured)};
  } catch (const std::exception& e) {
    return {std::move(suite), std::move(name), false, std::string("error: ") + e.what()};
  }
}

using Outcome = std::pair<bool, std::string>;

inline std::string kv(std::string_view key, double v) { return std::string(key) + "=" + format_number(v); }

}  // namespace detail

inline std::vector<CheckResult> run_analysis(std::uint64_t seed) {
  using detail::kv;
  using detail::Outcome;
  std::vector<CheckResult> out;
  const std::string suite = "analysis";

  out.push_back(detail::run(suite, "functional identities (S=1-F, H=-ln S, h=f/S)", [&]() -> Outcome {
    double worst_s = 0.0, worst_h = 0.0, worst_hz = 0.0;
    for (std::uint64_t d = 0; d < 200; ++d) {
      RngStream rng(seed, d);
      const auto dist = detail::random_distribution(rng);
      const double top = dist.quantile(0.999);
      for (int i = 1; i <= 50; ++i) {
        const double t = top * i / 51.0;
        const double S = dist.survival(t);
        worst_s = std::max(worst_s, std::abs(S - (1.0 - dist.cdf(t))));
        if (S > 1e-12) worst_h = std::max(worst_h, std::abs(dist.cum_hazard(t) + std::log(S)));
        const double h = dist.hazard(t);
        worst_hz = std::max(worst_hz, std::abs(h - dist.pdf(t) / S) / (1.0 + h));
      }
    }
    return {worst_s <= 1e-12 && worst_h <= 1e-10 && worst_hz <= 1e-10,
            kv("max|S-(1-F)|", worst_s) + " " + kv("max|H+lnS|", worst_h) + " " + kv("max rel|h-f/S|", worst_hz)};
  }));

  out.push_back(detail::run(suite, "quantile inverts cdf", [&]() -> Outcome {
    double worst = 0.0;
    for (std::uint64_t d = 0; d < 50; ++d) {
      RngStream rng(seed + 1, d);
      const auto dist = detail::random_distribution(rng);
      for (int i = 1; i <= 99; ++i) {
        const double q = i / 100.0;
        worst = std::max(worst, std::abs(dist.cdf(dist.quantile(q)) - q));
      }
    }
    return {worst <= 1e-8, kv("max|F(Q(q))-q|", worst)};
  }));

  out.push_back(detail::run(suite, "closed-form vs numerical convolution", [&]() -> Outcome {
    double worst = 0.0;
    for (const auto& dist : {Distribution::exponential(1.0), Distribution::exponential(5.0),
                             Distribution::uniform(1.0), Distribution::uniform(3.0)}) {
      const double top = std::isfinite(dist.upper()) ? 2.5 * dist.upper() : dist.quantile(0.999);
      for (int i = 1; i <= 100; ++i) {
        const double tau = top * i / 100.0;
        worst = std::max(worst, std::abs(convolve_cdf(dist, tau, ConvolutionPath::closed_form) -
                                         convolve_cdf(dist, tau, ConvolutionPath::numerical)));
      }
    }
    return {worst <= 1e-7, kv("max abs diff", worst)};
  }));

  out.push_back(detail::run(suite, "quotient vs factored dependence agreement", [&]() -> Outcome {
    double worst = 0.0;
    for (std::uint64_t d = 0; d < 500; ++d) {
      RngStream rng(seed + 2, d);
      const auto dist = detail::random_distribution(rng);
      const double p = rng.uniform();
      const double tau = dist.quantile(0.01 + 0.98 * rng.uniform());
      const auto terms = completion_terms(dist, tau);
      worst = std::max(worst, std::abs(dependence_quotient(p, terms) - dependence_factored(p, terms)));
    }
    return {worst <= 1e-9, kv("max abs diff", worst)};
  }));

  out.push_back(detail::run(suite, "fixed order: difference >= 0 and equals R(1-F)", [&]() -> Outcome {
    double worst_neg = 0.0, worst_eq = 0.0;
    for (std::uint64_t d = 0; d < 200; ++d) {
      RngStream rng(seed + 3, d);
      const auto dist = detail::random_distribution(rng);
      const double tau = dist.quantile(0.02 + 0.97 * rng.uniform());
      for (double p : {0.0, 1.0}) {
        const SerialTwoModel m(dist, p);
        const auto rec = dependence_record(m, tau);
        worst_neg = std::min(worst_neg, rec.difference);
        worst_eq = std::max(worst_eq, std::abs(rec.difference - rec.R * (1.0 - rec.F)));
      }
    }
    return {worst_neg >= -1e-9 && worst_eq <= 1e-9, kv("min diff", worst_neg) + " " + kv("max|diff-R(1-F)|", worst_eq)};
  }));

  out.push_back(detail::run(suite, "exponential serial dependence positive", [&]() -> Outcome {
    double lowest = 1.0;
    for (double u : {0.5, 1.0, 5.0}) {
      const SerialTwoModel m(Distribution::exponential(u), 0.5);
      for (int i = 0; i < 100; ++i) {
        const double q = 0.01 + (0.999 - 0.01) * i / 99.0;
        lowest = std::min(lowest, dependence_difference(m, m.dist.quantile(q)));
      }
    }
    return {lowest > 0.0, kv("min difference", lowest)};
  }));

  out.push_back(detail::run(suite, "uniform three-regime signs", [&]() -> Outcome {
    const double v = 1.7;
    const SerialTwoModel m(Distribution::uniform(v), 0.5);
    const double at_half = dependence_difference(m, v / 2.0);
    const double at_56 = dependence_difference(m, 5.0 * v / 6.0);
    double upper_mid = -1.0;
    for (int i = 0; i < 50; ++i) upper_mid = std::max(upper_mid, dependence_difference(m, v * (1.0 + i / 50.0)));
    const double beyond = dependence_difference(m, 2.5 * v);
    const bool ok = std::abs(at_half - 0.0875) < 1e-9 && at_56 < 0.0 && upper_mid <= 0.0 && std::abs(beyond) <= 1e-9;
    return {ok, kv("tau=v/2", at_half) + " " + kv("tau=5v/6", at_56) + " " + kv("max on [v,2v)", upper_mid) + " " +
                    kv("tau=2.5v", beyond)};
  }));

  out.push_back(detail::run(suite, "parallel dependence vanishes", [&]() -> Outcome {
    double worst = 0.0;
    for (std::uint64_t d = 0; d < 500; ++d) {
      RngStream rng(seed + 4, d);
      const ParallelTwoModel m{detail::random_distribution(rng)};
      const double tau = m.dist.quantile(0.001 + 0.998 * rng.uniform());
      worst = std::max(worst, std::abs(parallel_dependence_difference(m, tau)));
    }
    return {worst <= 1e-12, kv("max |difference|", worst)};
  }));

  out.push_back(detail::run(suite, "sign(gap) = sign(expr4) on figure grids", [&]() -> Outcome {
    std::size_t checked = 0, mismatched = 0, unresolved = 0;
    for (auto [id, k] : {std::pair{FigureId::fig6, 2.0}, std::pair{FigureId::fig6, 4.0}, std::pair{FigureId::fig7, 0.0}}) {
      FigureOverrides ov;
      if (k > 0.0) ov.k = k;
      ov.steps = 60;
      const auto setup = figure_setup(id, ov);
      const auto grid = stage_survival_grid(ParallelTwoModel{setup.dist}, setup.grid);
      for (const auto& r : grid.records) {
        if (!r.gap_sign) {
          ++unresolved;
          continue;
        }
        ++checked;
        if (*r.gap_sign != r.sign) ++mismatched;
      }
    }
    return {mismatched == 0 && checked > 0,
            "checked=" + std::to_string(checked) + " mismatched=" + std::to_string(mismatched) +
                " unresolved=" + std::to_string(unresolved)};
  }));

  out.push_back(detail::run(suite, "hazard-ratio threshold (integrated reading)", [&]() -> Outcome {
    std::size_t violations = 0, disagreements = 0, points = 0;
    for (const auto& dist : {Distribution::weibull(2.0, 1.0), Distribution::weibull(4.0, 1.0),
                             Distribution::weibull(0.5, 1.0), Distribution::uniform(2.0)}) {
      const double top = std::isfinite(dist.upper()) ? 0.49 * dist.upper() : 3.0;
      const GridSpec g{Axis{"t", 0.0, top, 40}, Axis{"Ta", 0.0, top, 40}};
      const auto grid = stage_survival_grid(ParallelTwoModel{dist}, g);
      for (const auto& r : grid.records) {
        ++points;
        if (!r.pointwise_consistent) ++disagreements;
        if (std::isnan(r.alpha_min)) continue;
        if (r.alpha_min >= 2.0 && r.gap < -1e-9) ++violations;
        if (r.alpha_max < 2.0 && r.gap >= 1e-9) ++violations;
      }
    }
    return {violations == 0, "points=" + std::to_string(points) + " violations=" + std::to_string(violations) +
                                 " pointwise-reading disagreements=" + std::to_string(disagreements)};
  }));

  out.push_back(detail::run(suite, "conditional survival monotone in Ta for decreasing hazard", [&]() -> Outcome {
    double worst = 0.0;
    for (double k : {0.3, 0.5, 0.8, 1.0}) {
      const ParallelTwoModel m{Distribution::weibull(k, 1.3)};
      for (double t : {0.1, 0.5, 1.0, 3.0}) {
        double prev = conditional_ict_survival(m, 0.0, t);
        for (int i = 1; i < 50; ++i) {
          const double cur = conditional_ict_survival(m, 5.0 * i / 49.0, t);
          worst = std::min(worst, cur - prev);
          prev = cur;
        }
      }
    }
    return {worst >= -1e-12, kv("largest decrease", worst)};
  }));

  return out;
}

inline std::vector<CheckResult> run_mc(std::uint64_t seed) {
  using detail::kv;
  using detail::Outcome;
  std::vector<CheckResult> out;
  const std::string suite = "mc";

  out.push_back(detail::run(suite, "random-pair procedure gives 62% +- 1%", [&]() -> Outcome {
    const auto r = run_theorem1_mc(1'000'000, seed);
    return {std::abs(r.fraction_positive - 0.62) <= 0.01,
            kv("fraction", r.fraction_positive) + " " + kv("stderr", r.stderr) +
                " n_conditioned=" + std::to_string(r.n_conditioned)};
  }));

  out.push_back(detail::run(suite, "random-pair procedure stable across seeds", [&]() -> Outcome {
    std::vector<Theorem1Result> runs;
    for (std::uint64_t s = 0; s < 5; ++s) runs.push_back(run_theorem1_mc(200'000, seed + 1000 + s));
    double worst = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      for (std::size_t j = i + 1; j < runs.size(); ++j) {
        const double se = std::hypot(runs[i].stderr, runs[j].stderr);
        worst = std::max(worst, std::abs(runs[i].fraction_positive - runs[j].fraction_positive) / se);
      }
    }
    return {worst <= 4.0, kv("max pairwise z", worst)};
  }));

  out.push_back(detail::run(suite, "serial simulation matches analytic dependence", [&]() -> Outcome {
    double worst = 0.0;
    for (const auto& dist : {Distribution::exponential(1.0), Distribution::weibull(2.0, 1.0), Distribution::uniform(1.0)}) {
      const SerialTwoModel m(dist, 0.5);
      std::vector<DependenceAccumulator> accs;
      std::vector<double> taus;
      for (int i = 1; i <= 5; ++i) taus.push_back(dist.quantile(0.15 * i));
      for (double tau : taus) accs.emplace_back(tau);
      simulate_serial(m, 400'000, seed, [&](std::uint64_t, const TrialRecord& r) {
        for (auto& a : accs) a.add(r);
      });
      for (std::size_t i = 0; i < taus.size(); ++i) {
        const auto e = accs[i].result();
        worst = std::max(worst, std::abs(e.estimate - dependence_difference(m, taus[i])) / e.stderr);
      }
    }
    return {worst <= 3.5, kv("max |z|", worst)};
  }));

  out.push_back(detail::run(suite, "parallel totals uncorrelated", [&]() -> Outcome {
    const auto trials = simulate_parallel(ParallelTwoModel{Distribution::weibull(0.7, 2.0)}, 300'000, seed);
    std::vector<double> a, b;
    for (const auto& r : trials) {
      a.push_back(r.total_a);
      b.push_back(r.total_b);
    }
    const auto c = stats::covariance(a, b);
    return {std::abs(c.covariance) <= 3.0 * c.stderr, kv("cov", c.covariance) + " " + kv("stderr", c.stderr)};
  }));

  out.push_back(detail::run(suite, "fixed-order covariance equals Var(T1)", [&]() -> Outcome {
    double worst = 0.0;
    for (const auto& dist : {Distribution::exponential(1.0), Distribution::uniform(1.0), Distribution::weibull(1.5, 2.0)}) {
      const auto c = fixed_order_covariance(dist, 300'000, seed);
      worst = std::max(worst, std::abs(c.cov_estimate - c.var_t1_estimate) / c.diff_stderr);
    }
    return {worst <= 3.0, kv("max |z|", worst)};
  }));

  return out;
}

inline std::vector<CheckResult> run_recall(std::uint64_t seed) {
  using detail::kv;
  using detail::Outcome;
  std::vector<CheckResult> out;
  const std::string suite = "recall";

  out.push_back(detail::run(suite, "order probabilities sum to one", [&]() -> Outcome {
    double worst = 0.0;
    for (std::size_t n = 1; n <= 6; ++n) {
      RngStream rng(seed, n);
      std::vector<double> rates(n);
      for (auto& r : rates) r = 0.1 + 5.0 * rng.uniform();
      const RecallModel m(rates);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      double total = 0.0;
      do total += vu_order_probability(m, perm);
      while (std::next_permutation(perm.begin(), perm.end()));
      worst = std::max(worst, std::abs(total - 1.0));
    }
    return {worst <= 1e-12, kv("max |sum-1|", worst)};
  }));

  out.push_back(detail::run(suite, "serial and parallel exponential races agree", [&]() -> Outcome {
    double min_p = 1.0;
    for (std::size_t n = 2; n <= 4; ++n) {
      RngStream prng(seed + 7, n);
      std::vector<double> rates(n);
      for (auto& r : rates) r = 0.2 + 3.0 * prng.uniform();
      const RecallModel m(rates);
      constexpr std::uint64_t trials = 50'000;
      std::vector<std::vector<double>> sa(n), sb(n);
      std::map<std::vector<std::size_t>, std::size_t> index;
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      do index.emplace(perm, index.size());
      while (std::next_permutation(perm.begin(), perm.end()));
      std::vector<std::size_t> ca(index.size()), cb(index.size());
      for (std::uint64_t i = 0; i < trials; ++i) {
        RngStream ra(seed + 11, i), rb(seed + 13, i);
        const auto a = sample_vu_serial(m, ra);
        const auto b = sample_parallel_expo(m, rb);
        ++ca[index.at(a.order)];
        ++cb[index.at(b.order)];
        for (std::size_t j = 0; j < n; ++j) {
          sa[j].push_back(a.icts[j]);
          sb[j].push_back(b.icts[j]);
        }
      }
      min_p = std::min(min_p, stats::chi_squared_homogeneity(ca, cb).p_value);
      for (std::size_t j = 0; j < n; ++j) min_p = std::min(min_p, stats::ks_two_sample(sa[j], sb[j]).p_value);
    }
    return {min_p >= 0.001, kv("min p-value", min_p)};
  }));

  out.push_back(detail::run(suite, "equal-rate stage means follow the McGill convention", [&]() -> Outcome {
    const std::size_t n = 5;
    const double u = 1.5;
    const RecallModel m = RecallModel::equal(n, u);
    std::vector<stats::RunningMoments> mom(n);
    for (std::uint64_t i = 0; i < 100'000; ++i) {
      RngStream rng(seed + 17, i);
      const auto tr = sample_vu_serial(m, rng);
      for (std::size_t j = 0; j < n; ++j) mom[j].add(tr.icts[j]);
    }
    double worst = 0.0;
    std::string detail;
    for (std::size_t j = 1; j <= n; ++j) {
      const double z = (mom[j - 1].mean() - rw_mean_ict(n, u, j, RwConvention::mcgill)) / mom[j - 1].stderr_of_mean();
      worst = std::max(worst, std::abs(z));
      detail += " j" + std::to_string(j) + "=" + format_number(mom[j - 1].mean());
    }
    return {worst <= 3.0, kv("max |z|", worst) + detail};
  }));

  out.push_back(detail::run(suite, "Weibull MLE recovers k=0.7, u=2", [&]() -> Outcome {
    const auto dist = Distribution::weibull(0.7, 2.0);
    std::vector<double> data(10'000);
    for (std::uint64_t i = 0; i < data.size(); ++i) {
      RngStream rng(seed, i);
      data[i] = sample(dist, rng);
    }
    const auto fit = weibull_mle(data);
    const bool ok = fit.converged && fit.k_hat >= 0.68 && fit.k_hat <= 0.72 && fit.u_hat >= 1.96 && fit.u_hat <= 2.04;
    return {ok, kv("k_hat", fit.k_hat) + " " + kv("u_hat", fit.u_hat)};
  }));

  return out;
}

inline std::vector<CheckResult> run_suite(Suite suite, std::uint64_t seed = kDefaultSeed) {
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> part) {
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  };
  if (suite == Suite::all || suite == Suite::analysis) append(run_analysis(seed));
  if (suite == Suite::all || suite == Suite::mc) append(run_mc(seed));
  if (suite == Suite::all || suite == Suite::recall) append(run_recall(seed));
  return out;
}

inline void write_report(std::ostream& os, const std::vector<CheckResult>& results) {
  std::size_t failed = 0;
  for (const auto& r : results) {
    os << (r.passed ? "PASS" : "FAIL") << "  [" << r.suite << "] " << r.name << "  (" << r.measured << ")\n";
    if (!r.passed) ++failed;
  }
  os << results.size() - failed << "/" << results.size() << " checks passed\n";
}

}  // namespace archlab::verify
