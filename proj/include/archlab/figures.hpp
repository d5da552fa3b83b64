#pragma once

// Data grids behind the four published surfaces.
//
//   fig4, fig5: p = 1/2 dependence bracket over (u, tau) for Weibull(k, u),
//               u in [0.5, 10], tau in [0.01, 5]; fig4 defaults to k = 0.5
//               (other panel k = 1.5), fig5 to k = 0.2 (other panel k = 2).
//   fig6:       stage-survival grid over (t, Ta) in [0, 10]^2 for
//               Weibull(k, u = 1); k = 2 by default (other panel k = 4).
//   fig7:       stage-survival grid over (t, Ta) in [0, 1]^2 for Uniform(0, 2).

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "archlab/convolution.hpp"
#include "archlab/grid.hpp"
#include "archlab/parallel.hpp"
#include "archlab/serial.hpp"

namespace archlab {

enum class FigureId { fig4, fig5, fig6, fig7 };

inline FigureId parse_figure_id(std::string_view s) {
  if (s == "fig4") return FigureId::fig4;
  if (s == "fig5") return FigureId::fig5;
  if (s == "fig6") return FigureId::fig6;
  if (s == "fig7") return FigureId::fig7;
  throw ParseError("unknown figure id '" + std::string(s) + "' (expected fig4..fig7)");
}

struct FigureOverrides {
  std::optional<double> k;
  std::optional<double> u;  // fig6 only
  std::optional<double> v;  // fig7 only
  std::optional<std::size_t> steps;
  std::optional<std::pair<double, double>> first_range;
  std::optional<std::pair<double, double>> second_range;
};

struct FigureSetup {
  FigureId id;
  Distribution dist;  // for fig4/5 the rate is a grid axis; dist holds rate 1
  GridSpec grid;
};

namespace detail {

inline void check_axis_within(const Axis& axis, double lo, bool lo_open, double hi) {
  const bool bad_lo = lo_open ? !(axis.min > lo) : !(axis.min >= lo);
  if (bad_lo) {
    throw DomainError("axis " + axis.name + ": min " + format_number(axis.min) + " is outside the support (" +
                      (lo_open ? std::string("> ") : std::string(">= ")) + format_number(lo) + " required)");
  }
  if (!(axis.max < hi)) {
    throw DomainError("axis " + axis.name + ": max " + format_number(axis.max) + " is outside the support (< " +
                      format_number(hi) + " required)");
  }
}

}  // namespace detail

inline FigureSetup figure_setup(FigureId id, const FigureOverrides& ov = {}) {
  const std::size_t steps = ov.steps.value_or(100);
  auto axis = [&](std::string name, double lo, double hi, const auto& range) {
    Axis a{std::move(name), lo, hi, steps};
    if (range) {
      a.min = range->first;
      a.max = range->second;
    }
    a.validate();
    return a;
  };
  const double inf = std::numeric_limits<double>::infinity();
  switch (id) {
    case FigureId::fig4:
    case FigureId::fig5: {
      const double k = ov.k.value_or(id == FigureId::fig4 ? 0.5 : 0.2);
      GridSpec g{axis("u", 0.5, 10.0, ov.first_range), axis("tau", 0.01, 5.0, ov.second_range)};
      detail::check_axis_within(g.first, 0.0, true, inf);
      detail::check_axis_within(g.second, 0.0, true, inf);
      return {id, Distribution::weibull(k, 1.0), g};
    }
    case FigureId::fig6: {
      const auto dist = Distribution::weibull(ov.k.value_or(2.0), ov.u.value_or(1.0));
      GridSpec g{axis("t", 0.0, 10.0, ov.first_range), axis("Ta", 0.0, 10.0, ov.second_range)};
      detail::check_axis_within(g.first, 0.0, false, inf);
      detail::check_axis_within(g.second, 0.0, false, inf);
      return {id, dist, g};
    }
    case FigureId::fig7: {
      const double v = ov.v.value_or(2.0);
      GridSpec g{axis("t", 0.0, 1.0, ov.first_range), axis("Ta", 0.0, 1.0, ov.second_range)};
      detail::check_axis_within(g.first, 0.0, false, v);
      detail::check_axis_within(g.second, 0.0, false, v);
      return {id, Distribution::uniform(v), g};
    }
  }
  throw DomainError("unknown figure");
}

// p = 1/2 bracket over (u, tau) for Weibull shape k, numerical convolution.
inline GridResult expression3_surface(double k, const GridSpec& grid, unsigned workers = default_workers()) {
  return grid_eval(
      [k](const GridPoint& p) {
        const auto dist = Distribution::weibull(k, p.x);
        const double F = dist.cdf(p.y);
        const double conv = convolve_cdf(dist, p.y, ConvolutionPath::numerical);
        return expression3(F, conv);
      },
      grid, workers);
}

inline double figure_shape(const FigureSetup& setup) {
  if (const auto* w = std::get_if<Weibull>(&setup.dist.params())) return w->shape;
  throw DomainError("figure has no Weibull shape");
}

}  // namespace archlab
