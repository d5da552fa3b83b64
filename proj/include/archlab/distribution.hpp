#pragma once

// Processing-time distributions on [0, upper) and their five functionals:
// density f, distribution F, survival S = 1 - F, hazard h = f / S and
// cumulative hazard H = -ln S.
//
// Three closed-form families are built in (Weibull, exponential, uniform).
// Anything else can be plugged in as a CustomDistribution that supplies
// only f and F; h, H and the quantile are then derived numerically.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "archlab/error.hpp"
#include "archlab/format.hpp"

namespace archlab {

// Survival below this is treated as exhausted: hazard and cumulative hazard
// raise instead of returning inf for distributions whose hazard diverges.
inline constexpr double kSurvivalFloor = 1e-300;

// Shape k, rate u: f(t) = k u (u t)^(k-1) exp[-(u t)^k].
struct Weibull {
  double shape;
  double rate;
};

struct Exponential {
  double rate;
};

// Uniform(0, upper).
struct Uniform {
  double upper;
};

// User-supplied distribution. Only pdf and cdf are required.
struct CustomDistribution {
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  // Right end of the support; +inf when unbounded.
  double upper = std::numeric_limits<double>::infinity();
  // Characteristic time scale, used for quantile tolerances and bracketing.
  double scale = 1.0;
  // Optional closed-form inverse cdf. When absent the quantile is bisected.
  std::function<double(double)> quantile;
  std::string name = "custom";
};

enum class Family { weibull, exponential, uniform, custom };

namespace detail {

inline std::string format_double(double x) { return format_number(x); }

inline void require_time(double t, const char* op) {
  if (!std::isfinite(t)) {
    throw DomainError(std::string(op) + ": time must be finite");
  }
  if (t < 0.0) {
    throw DomainError(std::string(op) + ": time must be >= 0, got " + format_double(t));
  }
}

inline void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + " must be a positive finite number, got " +
                      format_double(x));
  }
}

}  // namespace detail

class Distribution {
 public:
  using Variant = std::variant<Weibull, Exponential, Uniform, CustomDistribution>;

  Distribution(Weibull w) : impl_(w) {
    detail::require_positive(w.shape, "weibull shape k");
    detail::require_positive(w.rate, "weibull rate u");
  }
  Distribution(Exponential e) : impl_(e) { detail::require_positive(e.rate, "exponential rate u"); }
  Distribution(Uniform un) : impl_(un) { detail::require_positive(un.upper, "uniform upper bound v"); }
  Distribution(CustomDistribution c) : impl_(std::move(c)) {
    const auto& cd = std::get<CustomDistribution>(impl_);
    if (!cd.pdf || !cd.cdf) throw DomainError("custom distribution needs both pdf and cdf");
    if (!(cd.upper > 0.0)) throw DomainError("custom distribution upper bound must be > 0");
    detail::require_positive(cd.scale, "custom distribution scale");
  }

  static Distribution weibull(double k, double u) { return Distribution(Weibull{k, u}); }
  static Distribution exponential(double u) { return Distribution(Exponential{u}); }
  static Distribution uniform(double v) { return Distribution(Uniform{v}); }

  Family family() const noexcept {
    switch (impl_.index()) {
      case 0: return Family::weibull;
      case 1: return Family::exponential;
      case 2: return Family::uniform;
      default: return Family::custom;
    }
  }

  const Variant& params() const noexcept { return impl_; }

  // Right end of the support (exclusive).
  double upper() const noexcept {
    if (auto* u = std::get_if<Uniform>(&impl_)) return u->upper;
    if (auto* c = std::get_if<CustomDistribution>(&impl_)) return c->upper;
    return std::numeric_limits<double>::infinity();
  }

  // 1/u for the rate families, v for the uniform.
  double scale() const noexcept {
    return std::visit(
        [](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Weibull>) return 1.0 / d.rate;
          else if constexpr (std::is_same_v<T, Exponential>) return 1.0 / d.rate;
          else if constexpr (std::is_same_v<T, Uniform>) return d.upper;
          else return d.scale;
        },
        impl_);
  }

  bool has_closed_form_quantile() const noexcept {
    if (auto* c = std::get_if<CustomDistribution>(&impl_)) return static_cast<bool>(c->quantile);
    return true;
  }

  double pdf(double t) const {
    detail::require_time(t, "pdf");
    return std::visit(
        [t](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Weibull>) {
            const double x = d.rate * t;
            return d.shape * d.rate * std::pow(x, d.shape - 1.0) * std::exp(-std::pow(x, d.shape));
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return d.rate * std::exp(-d.rate * t);
          } else if constexpr (std::is_same_v<T, Uniform>) {
            return t < d.upper ? 1.0 / d.upper : 0.0;
          } else {
            return t < d.upper ? d.pdf(t) : 0.0;
          }
        },
        impl_);
  }

  double cdf(double t) const {
    detail::require_time(t, "cdf");
    return std::visit(
        [t](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Weibull>) {
            return -std::expm1(-std::pow(d.rate * t, d.shape));
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return -std::expm1(-d.rate * t);
          } else if constexpr (std::is_same_v<T, Uniform>) {
            return t < d.upper ? t / d.upper : 1.0;
          } else {
            return t < d.upper ? d.cdf(t) : 1.0;
          }
        },
        impl_);
  }

  double survival(double t) const {
    detail::require_time(t, "survival");
    return std::visit(
        [t](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Weibull>) {
            return std::exp(-std::pow(d.rate * t, d.shape));
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return std::exp(-d.rate * t);
          } else if constexpr (std::is_same_v<T, Uniform>) {
            return t < d.upper ? 1.0 - t / d.upper : 0.0;
          } else {
            return t < d.upper ? 1.0 - d.cdf(t) : 0.0;
          }
        },
        impl_);
  }

  // Throws DomainError where survival is exhausted (uniform t -> v) and, for
  // Weibull with k < 1, at t = 0 where the hazard is unbounded.
  double hazard(double t) const {
    detail::require_time(t, "hazard");
    return std::visit(
        [this, t](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Weibull>) {
            if (t == 0.0 && d.shape < 1.0) {
              throw DomainError("hazard undefined: weibull hazard is unbounded at t = 0 for k < 1");
            }
            return d.rate * d.shape * std::pow(d.rate * t, d.shape - 1.0);
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return d.rate;
          } else {
            const double s = survival(t);
            if (s <= kSurvivalFloor) {
              throw DomainError("hazard undefined: exhausted survival at t = " + detail::format_double(t));
            }
            if constexpr (std::is_same_v<T, Uniform>) {
              return 1.0 / (d.upper - t);
            } else {
              return d.pdf(t) / s;
            }
          }
        },
        impl_);
  }

  // H(t) = -ln S(t). For Weibull this is written u (u t)^(k-1) t in some
  // texts; that is algebraically (u t)^k, which is what is evaluated here.
  double cum_hazard(double t) const {
    detail::require_time(t, "cum_hazard");
    return std::visit(
        [this, t](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Weibull>) {
            return std::pow(d.rate * t, d.shape);
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return d.rate * t;
          } else {
            if (t >= d.upper) {
              throw DomainError("cum_hazard: t = " + detail::format_double(t) +
                                " is outside the support [0, " + detail::format_double(d.upper) + ")");
            }
            if constexpr (std::is_same_v<T, Uniform>) {
              // -ln(v - t) + ln v
              return -std::log1p(-t / d.upper);
            } else {
              const double s = survival(t);
              if (s <= kSurvivalFloor) {
                throw DomainError("cum_hazard undefined: exhausted survival at t = " +
                                  detail::format_double(t));
              }
              return -std::log(s);
            }
          }
        },
        impl_);
  }

  // Smallest t with F(t) >= q.
  double quantile(double q) const {
    if (!(q >= 0.0 && q < 1.0)) {
      throw DomainError("quantile: probability must lie in [0, 1), got " + detail::format_double(q));
    }
    return std::visit(
        [this, q](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Weibull>) {
            return std::pow(-std::log1p(-q), 1.0 / d.shape) / d.rate;
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return -std::log1p(-q) / d.rate;
          } else if constexpr (std::is_same_v<T, Uniform>) {
            return q * d.upper;
          } else {
            if (d.quantile) return d.quantile(q);
            return bisect_quantile(q);
          }
        },
        impl_);
  }

  double mean() const {
    return std::visit(
        [this](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Weibull>) return std::tgamma(1.0 + 1.0 / d.shape) / d.rate;
          else if constexpr (std::is_same_v<T, Exponential>) return 1.0 / d.rate;
          else if constexpr (std::is_same_v<T, Uniform>) return d.upper / 2.0;
          else throw DomainError("mean: not available for " + d.name + " distributions");
        },
        impl_);
  }

  double variance() const {
    return std::visit(
        [](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Weibull>) {
            const double g1 = std::tgamma(1.0 + 1.0 / d.shape);
            const double g2 = std::tgamma(1.0 + 2.0 / d.shape);
            return (g2 - g1 * g1) / (d.rate * d.rate);
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return 1.0 / (d.rate * d.rate);
          } else if constexpr (std::is_same_v<T, Uniform>) {
            return d.upper * d.upper / 12.0;
          } else {
            throw DomainError("variance: not available for " + d.name + " distributions");
          }
        },
        impl_);
  }

  // Round-trips through parse_distribution for the built-in families.
  std::string to_string() const {
    using detail::format_double;
    return std::visit(
        [](const auto& d) -> std::string {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Weibull>)
            return "weibull:k=" + format_double(d.shape) + ",u=" + format_double(d.rate);
          else if constexpr (std::is_same_v<T, Exponential>)
            return "exp:u=" + format_double(d.rate);
          else if constexpr (std::is_same_v<T, Uniform>)
            return "uniform:v=" + format_double(d.upper);
          else
            return d.name;
        },
        impl_);
  }

 private:
  double bisect_quantile(double q) const {
    if (q == 0.0) return 0.0;
    const double s = scale();
    double lo = 0.0;
    double hi = std::isfinite(upper()) ? upper() : s;
    while (std::isinf(upper()) && cdf(hi) < q) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) throw ConvergenceError("quantile: could not bracket q", lo);
    }
    const double tol = 1e-10 * s;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (cdf(mid) >= q) hi = mid;
      else lo = mid;
    }
    return hi;
  }

  Variant impl_;
};

// Parses `weibull:k=<float>,u=<float>` | `exp:u=<float>` | `uniform:v=<float>`.
// Errors name the offending token.
inline Distribution parse_distribution(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("distribution spec '" + std::string(spec) +
                     "': expected '<family>:<key>=<value>,...'");
  }
  const std::string family(spec.substr(0, colon));
  std::vector<std::string> required;
  if (family == "weibull") required = {"k", "u"};
  else if (family == "exp") required = {"u"};
  else if (family == "uniform") required = {"v"};
  else throw ParseError("unknown distribution family '" + family + "'");

  std::vector<std::pair<std::string, double>> values;
  std::string_view rest = spec.substr(colon + 1);
  while (true) {
    const auto comma = rest.find(',');
    const std::string token(rest.substr(0, comma));
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError("malformed parameter token '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string text = token.substr(eq + 1);
    bool known = false;
    for (const auto& r : required) known = known || r == key;
    if (!known) throw ParseError("unknown parameter '" + key + "' in token '" + token + "'");
    for (const auto& [k, v] : values) {
      if (k == key) throw ParseError("duplicate parameter in token '" + token + "'");
    }
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value)) {
      throw ParseError("invalid number in token '" + token + "'");
    }
    if (!(value > 0.0)) throw ParseError("parameter must be positive in token '" + token + "'");
    values.emplace_back(key, value);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  auto get = [&](const std::string& key) {
    for (const auto& [k, v] : values) {
      if (k == key) return v;
    }
    throw ParseError("missing parameter '" + key + "' for family '" + family + "'");
  };
  if (family == "weibull") return Distribution::weibull(get("k"), get("u"));
  if (family == "exp") return Distribution::exponential(get("u"));
  return Distribution::uniform(get("v"));
}

}  // namespace archlab
