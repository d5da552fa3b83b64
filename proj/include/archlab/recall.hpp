#pragma once

// n-item free-recall models with exponential stages.
//
// Serial (unequal accessibility): at each stage the next item is chosen with
// probability u_i / sum of remaining rates, and the stage lasts an
// exponential time whose rate is that remaining sum. With equal rates this is
// the classic equal-accessibility model with stage rate (n - j + 1) u. The
// same law arises from n independent exponential channels racing in parallel.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "archlab/error.hpp"
#include "archlab/format.hpp"
#include "archlab/rng.hpp"

namespace archlab {

struct RecallModel {
  std::vector<double> rates;

  explicit RecallModel(std::vector<double> r) : rates(std::move(r)) {
    if (rates.empty()) throw DomainError("recall model: need at least one item");
    for (double u : rates) {
      if (!(u > 0.0) || !std::isfinite(u)) {
        throw DomainError("recall model: rates must be positive, got " + format_number(u));
      }
    }
  }

  static RecallModel equal(std::size_t n, double u) { return RecallModel(std::vector<double>(n, u)); }

  std::size_t size() const noexcept { return rates.size(); }
};

// One recall protocol: items in output order (0-based) and the stage
// durations between successive outputs.
struct RecallTrial {
  std::vector<std::size_t> order;
  std::vector<double> icts;
};

namespace detail {

inline void require_permutation(std::span<const std::size_t> order, std::size_t n) {
  if (order.size() != n) {
    throw DomainError("recall: order has " + std::to_string(order.size()) + " entries, expected " +
                      std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (std::size_t i : order) {
    if (i >= n || seen[i]) throw DomainError("recall: order is not a permutation of the items");
    seen[i] = true;
  }
}

// Sums of the rates still unrecalled before each stage.
inline std::vector<double> remaining_rates(const RecallModel& model, std::span<const std::size_t> order) {
  std::vector<double> rem(order.size());
  double acc = 0.0;
  for (std::size_t j = order.size(); j-- > 0;) {
    acc += model.rates[order[j]];
    rem[j] = acc;
  }
  return rem;
}

}  // namespace detail

// prod_j u_{i_j} / sum_{l >= j} u_{i_l}
inline double vu_order_probability(const RecallModel& model, std::span<const std::size_t> order) {
  detail::require_permutation(order, model.size());
  const auto rem = detail::remaining_rates(model, order);
  double p = 1.0;
  for (std::size_t j = 0; j < order.size(); ++j) p *= model.rates[order[j]] / rem[j];
  return p;
}

// Conditional density of the stage durations given the order:
// prod_j r_j exp(-r_j t_j), r_j the remaining-rate sum.
inline double vu_ict_density(const RecallModel& model, std::span<const std::size_t> order,
                             std::span<const double> icts) {
  detail::require_permutation(order, model.size());
  if (icts.size() != order.size()) {
    throw DomainError("vu_ict_density: got " + std::to_string(icts.size()) + " stage durations for " +
                      std::to_string(order.size()) + " items");
  }
  const auto rem = detail::remaining_rates(model, order);
  double log_density = 0.0;
  for (std::size_t j = 0; j < icts.size(); ++j) {
    if (!(icts[j] >= 0.0) || !std::isfinite(icts[j])) {
      throw DomainError("vu_ict_density: stage durations must be finite and >= 0");
    }
    log_density += std::log(rem[j]) - rem[j] * icts[j];
  }
  return std::exp(log_density);
}

inline RecallTrial sample_vu_serial(const RecallModel& model, RngStream& rng) {
  const std::size_t n = model.size();
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  RecallTrial trial;
  trial.order.reserve(n);
  trial.icts.reserve(n);
  while (!pool.empty()) {
    double total = 0.0;
    for (std::size_t i : pool) total += model.rates[i];
    const double pick = rng.uniform() * total;
    std::size_t k = 0;
    double acc = model.rates[pool[0]];
    while (acc < pick && k + 1 < pool.size()) acc += model.rates[pool[++k]];
    trial.icts.push_back(sample_exponential(total, rng));
    trial.order.push_back(pool[k]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return trial;
}

// n independent exponential channels; ties broken by lower index.
inline RecallTrial sample_parallel_expo(const RecallModel& model, RngStream& rng) {
  const std::size_t n = model.size();
  std::vector<double> finish(n);
  for (std::size_t i = 0; i < n; ++i) finish[i] = sample_exponential(model.rates[i], rng);
  RecallTrial trial;
  trial.order.resize(n);
  std::iota(trial.order.begin(), trial.order.end(), std::size_t{0});
  std::stable_sort(trial.order.begin(), trial.order.end(),
                   [&](std::size_t a, std::size_t b) { return finish[a] < finish[b]; });
  trial.icts.resize(n);
  double prev = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    trial.icts[j] = finish[trial.order[j]] - prev;
    prev = finish[trial.order[j]];
  }
  return trial;
}

enum class RwConvention {
  as_printed,  // 1 / (u (n - j)), defined for j < n
  mcgill,      // 1 / (u (n - j + 1)), the stage-j mean of the equal-rate model
};

// Mean of the j-th intercompletion time (1-based j) for n items at rate u.
inline double rw_mean_ict(std::size_t n, double u, std::size_t j, RwConvention convention) {
  if (!(u > 0.0)) throw DomainError("rw_mean_ict: rate must be > 0");
  if (j < 1 || j > n) throw DomainError("rw_mean_ict: stage index must satisfy 1 <= j <= n");
  if (convention == RwConvention::as_printed) {
    if (j == n) throw DomainError("rw_mean_ict: as_printed convention divides by zero at j = n");
    return 1.0 / (u * static_cast<double>(n - j));
  }
  return 1.0 / (u * static_cast<double>(n - j + 1));
}

inline void write_recall_header(std::ostream& os) { os << "trial,position,item,ict,cumulative_time\n"; }

// Positions and item labels are written 1-based.
inline void write_recall_rows(std::ostream& os, std::uint64_t trial, const RecallTrial& r) {
  double cumulative = 0.0;
  for (std::size_t j = 0; j < r.order.size(); ++j) {
    cumulative += r.icts[j];
    os << trial << ',' << (j + 1) << ',' << (r.order[j] + 1) << ',' << format_number(r.icts[j]) << ','
       << format_number(cumulative) << '\n';
  }
}

}  // namespace archlab
