#pragma once

// Seeded simulation of the two-process models and the random-pair procedure
// that probes the sign of the p = 1/2 dependence bracket.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "archlab/format.hpp"
#include "archlab/grid.hpp"
#include "archlab/parallel.hpp"
#include "archlab/rng.hpp"
#include "archlab/serial.hpp"
#include "archlab/stats.hpp"

namespace archlab {

// ---------------------------------------------------------------------------
// Random (alpha, beta) procedure.
//
// alpha ~ U[0, 1] stands in for f*F(tau), beta ~ U[alpha, 1] for F(tau).
// Pairs with beta^2 / alpha >= 1 are kept and expression3(beta, alpha) is
// tested for strict positivity.

// nullopt when the pair is rejected by the beta^2 >= alpha condition.
inline std::optional<bool> theorem1_step(double alpha, double beta) {
  if (beta * beta < alpha) return std::nullopt;
  return expression3(beta, alpha) > 0.0;
}

struct Theorem1Result {
  std::uint64_t n_samples;
  std::uint64_t n_conditioned;
  std::uint64_t n_positive;
  double fraction_positive;
  double stderr;
  std::uint64_t seed;

  std::string to_json() const {
    return JsonObject()
        .add("n_samples", n_samples)
        .add("n_conditioned", n_conditioned)
        .add("fraction_positive", fraction_positive)
        .add("stderr", stderr)
        .add("seed", seed)
        .str();
  }
};

inline Theorem1Result run_theorem1_mc(std::uint64_t n_samples, std::uint64_t seed = kDefaultSeed,
                                      unsigned workers = 1) {
  if (n_samples < 1) throw DomainError("theorem1: n_samples must be >= 1");
  struct Counts {
    std::uint64_t conditioned = 0;
    std::uint64_t positive = 0;
  };
  const unsigned shards = std::max(1u, workers);
  std::vector<Counts> per_shard(shards);
  auto run_shard = [&](unsigned s) {
    const std::uint64_t begin = n_samples * s / shards;
    const std::uint64_t end = n_samples * (s + 1) / shards;
    Counts c;
    for (std::uint64_t i = begin; i < end; ++i) {
      RngStream rng(seed, i);
      const double alpha = rng.uniform();
      const double beta = alpha + (1.0 - alpha) * rng.uniform();
      if (const auto pos = theorem1_step(alpha, beta)) {
        ++c.conditioned;
        if (*pos) ++c.positive;
      }
    }
    per_shard[s] = c;
  };
  if (shards == 1) {
    run_shard(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned s = 0; s < shards; ++s) pool.emplace_back(run_shard, s);
    for (auto& th : pool) th.join();
  }
  Counts total;
  for (const auto& c : per_shard) {
    total.conditioned += c.conditioned;
    total.positive += c.positive;
  }
  if (total.conditioned == 0) throw DomainError("theorem1: no conditioned samples");
  const double frac = static_cast<double>(total.positive) / static_cast<double>(total.conditioned);
  return {n_samples, total.conditioned, total.positive, frac,
          stats::binomial_stderr(frac, total.conditioned), seed};
}

// ---------------------------------------------------------------------------
// Two-process trial simulation.

enum class Order { a_first, b_first };

inline std::string_view to_string(Order o) noexcept { return o == Order::a_first ? "a_first" : "b_first"; }

struct TrialRecord {
  Order order;
  double t1;  // first intercompletion time
  double t2;  // second intercompletion time
  double total_a;
  double total_b;
};

// Case I (a first): Ta = za, Tb = za + zb. Case II: Tb = zb, Ta = zb + za.
inline TrialRecord serial_trial(const SerialTwoModel& model, std::uint64_t seed, std::uint64_t index) {
  RngStream rng(seed, index);
  const bool a_first = rng.uniform() < model.p;
  const double za = sample(model.dist, rng);
  const double zb = sample(model.dist, rng);
  if (a_first) return {Order::a_first, za, zb, za, za + zb};
  return {Order::b_first, zb, za, zb + za, zb};
}

namespace detail {

// hi - lo, nudged by ulps so that lo + result == hi holds in floating point.
// When hi has an odd last bit the sum can land on a rounding tie and no
// double gap works; callers then report lo + gap as the later total.
inline double exact_gap(double lo, double hi) noexcept {
  double d = hi - lo;
  for (int i = 0; i < 4 && lo + d != hi; ++i) {
    d = std::nextafter(d, lo + d < hi ? std::numeric_limits<double>::infinity() : 0.0);
  }
  return d;
}

}  // namespace detail

// Ties go to a.
inline TrialRecord parallel_trial(const ParallelTwoModel& model, std::uint64_t seed, std::uint64_t index) {
  RngStream rng(seed, index);
  const double za = sample(model.dist, rng);
  const double zb = sample(model.dist, rng);
  if (za <= zb) {
    const double gap = detail::exact_gap(za, zb);
    return {Order::a_first, za, gap, za, za + gap};
  }
  const double gap = detail::exact_gap(zb, za);
  return {Order::b_first, zb, gap, zb + gap, zb};
}

template <class Visitor>
void simulate_serial(const SerialTwoModel& model, std::uint64_t n_trials, std::uint64_t seed, Visitor&& visit) {
  if (n_trials < 1) throw DomainError("simulate_serial: n_trials must be >= 1");
  for (std::uint64_t i = 0; i < n_trials; ++i) visit(i, serial_trial(model, seed, i));
}

template <class Visitor>
void simulate_parallel(const ParallelTwoModel& model, std::uint64_t n_trials, std::uint64_t seed,
                       Visitor&& visit) {
  if (n_trials < 1) throw DomainError("simulate_parallel: n_trials must be >= 1");
  for (std::uint64_t i = 0; i < n_trials; ++i) visit(i, parallel_trial(model, seed, i));
}

inline std::vector<TrialRecord> simulate_serial(const SerialTwoModel& model, std::uint64_t n_trials,
                                                std::uint64_t seed = kDefaultSeed) {
  std::vector<TrialRecord> out;
  out.reserve(n_trials);
  simulate_serial(model, n_trials, seed, [&](std::uint64_t, const TrialRecord& r) { out.push_back(r); });
  return out;
}

inline std::vector<TrialRecord> simulate_parallel(const ParallelTwoModel& model, std::uint64_t n_trials,
                                                  std::uint64_t seed = kDefaultSeed) {
  std::vector<TrialRecord> out;
  out.reserve(n_trials);
  simulate_parallel(model, n_trials, seed, [&](std::uint64_t, const TrialRecord& r) { out.push_back(r); });
  return out;
}

inline void write_trace_header(std::ostream& os) { os << "trial,order,t1,t2,total_a,total_b\n"; }

inline void write_trace_row(std::ostream& os, std::uint64_t trial, const TrialRecord& r) {
  os << trial << ',' << to_string(r.order) << ',' << format_number(r.t1) << ',' << format_number(r.t2)
     << ',' << format_number(r.total_a) << ',' << format_number(r.total_b) << '\n';
}

// ---------------------------------------------------------------------------
// Empirical P(Tb <= tau | Ta <= tau) - P(Tb <= tau) with a delta-method
// standard error over the four (Ta <= tau, Tb <= tau) cells.

struct EmpiricalEstimate {
  double estimate;
  double stderr;
};

class DependenceAccumulator {
 public:
  explicit DependenceAccumulator(double tau) : tau_(tau) {}

  void add(const TrialRecord& r) noexcept {
    const bool a = r.total_a <= tau_;
    const bool b = r.total_b <= tau_;
    ++n_;
    if (a && b) ++n11_;
    else if (a) ++n10_;
    else if (b) ++n01_;
  }

  EmpiricalEstimate result() const {
    const std::uint64_t na = n11_ + n10_;
    if (na == 0) {
      throw ConditioningError("empirical_dependence: no trial with total_a <= tau = " + format_number(tau_));
    }
    const double n = static_cast<double>(n_);
    const double q11 = n11_ / n, q10 = n10_ / n, q01 = n01_ / n;
    const double q00 = 1.0 - q11 - q10 - q01;
    const double pa = q11 + q10;
    const double est = q11 / pa - (q11 + q01);
    // Gradient of g(q) = q11 / (q11 + q10) - q11 - q01.
    const double g11 = q10 / (pa * pa) - 1.0;
    const double g10 = -q11 / (pa * pa);
    const double g01 = -1.0;
    const double m = q11 * g11 + q10 * g10 + q01 * g01;
    const double second = q11 * g11 * g11 + q10 * g10 * g10 + q01 * g01 * g01 + q00 * 0.0;
    return {est, std::sqrt(std::max(0.0, second - m * m) / n)};
  }

 private:
  double tau_;
  std::uint64_t n_ = 0, n11_ = 0, n10_ = 0, n01_ = 0;
};

inline EmpiricalEstimate empirical_dependence(const std::vector<TrialRecord>& trials, double tau) {
  DependenceAccumulator acc(tau);
  for (const auto& r : trials) acc.add(r);
  return acc.result();
}

}  // namespace archlab
