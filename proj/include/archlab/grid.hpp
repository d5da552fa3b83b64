#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "archlab/error.hpp"
#include "archlab/format.hpp"

namespace archlab {

// A linearly spaced axis: `steps` points from min to max inclusive.
struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  std::size_t steps = 2;

  void validate() const {
    if (!(min < max)) throw DomainError("axis " + name + ": min must be < max");
    if (steps < 2) throw DomainError("axis " + name + ": need at least 2 steps");
  }

  double at(std::size_t i) const {
    if (i + 1 == steps) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }

  std::vector<double> points() const {
    validate();
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i) out[i] = at(i);
    return out;
  }
};

struct GridSpec {
  Axis first;
  Axis second;

  void validate() const {
    first.validate();
    second.validate();
  }
  std::size_t size() const { return first.steps * second.steps; }
};

struct GridPoint {
  std::size_t index;
  double x;  // first axis
  double y;  // second axis
};

// Values in row-major order: first axis outer, second axis inner.
struct GridResult {
  GridSpec spec;
  std::vector<double> values;

  GridPoint point(std::size_t index) const {
    const std::size_t i = index / spec.second.steps;
    const std::size_t j = index % spec.second.steps;
    return {index, spec.first.at(i), spec.second.at(j)};
  }

  void write_csv(std::ostream& os) const {
    os << spec.first.name << ',' << spec.second.name << ",value\n";
    for (std::size_t n = 0; n < values.size(); ++n) {
      const auto p = point(n);
      os << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(values[n])
         << '\n';
    }
  }
};

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {

// Re-raises `err` with `context` prefixed, keeping the library error category.
[[noreturn]] inline void rethrow_with_context(std::exception_ptr err, const std::string& context) {
  try {
    std::rethrow_exception(err);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(context + ": " + e.what(), e.best_estimate());
  } catch (const ConditioningError& e) {
    throw ConditioningError(context + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(context + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(context + ": " + e.what());
  } catch (const Error& e) {
    throw Error(context + ": " + e.what());
  }
}

}  // namespace detail

// Evaluates fn(i) for i in [0, count) on up to `workers` threads. Results are
// stored by index, so the output does not depend on the worker count. If any
// cell throws, the error of the lowest failing index is rethrown with
// `describe(i)` prefixed.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn, unsigned workers,
                            const std::function<std::string(std::size_t)>& describe) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  const unsigned n_workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(count, 1)));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failed) {
    for (std::size_t i = 0; i < count; ++i) {
      if (errors[i]) detail::rethrow_with_context(errors[i], describe(i));
    }
  }
  return out;
}

// One value per grid point, deterministic regardless of `workers`.
template <class Fn>
GridResult grid_eval(Fn&& fn, const GridSpec& grid, unsigned workers = default_workers()) {
  grid.validate();
  GridResult result{grid, {}};
  result.values = parallel_map<double>(
      grid.size(), [&](std::size_t i) { return static_cast<double>(fn(result.point(i))); }, workers,
      [&](std::size_t i) {
        const auto p = result.point(i);
        return "grid cell (" + grid.first.name + "=" + format_number(p.x) + ", " + grid.second.name +
               "=" + format_number(p.y) + ")";
      });
  return result;
}

}  // namespace archlab
