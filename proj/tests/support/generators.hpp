#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mo/interpolation.hpp"
#include "mo/measure_grid.hpp"
#include "mo/musielak.hpp"
#include "mo/orlicz_curve.hpp"

namespace mo::testing {

using Rng = std::mt19937_64;

inline double uni(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }
inline int uint_in(Rng& r, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(r); }

// Raw description of a curve; oracles read these numbers directly.
struct CurveSpec {
  OrliczCurve::Kind kind = OrliczCurve::Kind::Power;
  double p = 2.0;
  double c = 1.0;
  std::vector<double> bp, sl;

  OrliczCurve build() const {
    switch (kind) {
      case OrliczCurve::Kind::Power: return OrliczCurve::power(p);
      case OrliczCurve::Kind::Linear: return OrliczCurve::linear(c);
      case OrliczCurve::Kind::Indicator: return OrliczCurve::indicator(c);
      default: return OrliczCurve::piecewise_linear(bp, sl);
    }
  }
};

// Piecewise linear curve with breakpoint and slope gaps of at least min_gap.
inline CurveSpec random_pl(Rng& r, double min_gap = 0.1) {
  CurveSpec s;
  s.kind = OrliczCurve::Kind::PiecewiseLinear;
  const int k = uint_in(r, 1, 4);
  const bool finite_end = uni(r, 0, 1) < 0.5;
  const bool zero_first = uni(r, 0, 1) < 0.25;
  s.bp = {0.0};
  double slope = zero_first ? 0.0 : uni(r, min_gap, 2.0);
  for (int j = 0; j < k; ++j) {
    s.sl.push_back(slope);
    slope += uni(r, min_gap, 2.0);
    s.bp.push_back(s.bp.back() + uni(r, min_gap, 2.0));
  }
  if (!finite_end && !(k == 1 && zero_first)) s.bp.back() = INFINITY;
  return s;
}

inline CurveSpec random_curve_spec(Rng& r, int family = -1) {
  if (family < 0) family = uint_in(r, 0, 3);
  CurveSpec s;
  switch (family) {
    case 0:
      s.kind = OrliczCurve::Kind::Power;
      s.p = uni(r, 1.25, 4.0);
      break;
    case 1:
      s.kind = OrliczCurve::Kind::Linear;
      s.c = uni(r, 0.2, 5.0);
      break;
    case 2:
      s.kind = OrliczCurve::Kind::Indicator;
      s.c = uni(r, 0.2, 5.0);
      break;
    default:
      s = random_pl(r);
  }
  return s;
}

inline OrliczCurve random_curve(Rng& r, int family = -1) { return random_curve_spec(r, family).build(); }

inline GridPtr random_grid(Rng& r, int n, double lo = 0.05, double hi = 2.0) {
  std::vector<double> w;
  for (int i = 0; i < n; ++i) w.push_back(uni(r, lo, hi));
  return MeasureGrid::create(w);
}

inline MusielakField random_field(Rng& r, const GridPtr& g) {
  std::vector<OrliczCurve> c;
  for (std::size_t i = 0; i < g->size(); ++i) c.push_back(random_curve(r));
  return MusielakField(g, c);
}

inline StepFunction random_x(Rng& r, const GridPtr& g, double scale = 3.0, double zero_prob = 0.2) {
  std::vector<double> v;
  for (std::size_t i = 0; i < g->size(); ++i) v.push_back(uni(r, 0, 1) < zero_prob ? 0.0 : uni(r, -scale, scale));
  if (std::all_of(v.begin(), v.end(), [](double t) { return t == 0.0; })) v[0] = 1.0;
  return StepFunction(g, v);
}

inline CellSet random_gamma(Rng& r, const GridPtr& g, double keep_prob) {
  CellSet s = CellSet::none(g);
  for (std::size_t i = 0; i < g->size(); ++i)
    if (uni(r, 0, 1) < keep_prob) s.insert(i);
  if (s.empty()) s.insert(static_cast<std::size_t>(uint_in(r, 0, static_cast<int>(g->size()) - 1)));
  return s;
}

inline StepFunction random_positive(Rng& r, const GridPtr& g, double lo, double hi) {
  std::vector<double> v;
  for (std::size_t i = 0; i < g->size(); ++i) v.push_back(uni(r, lo, hi));
  return StepFunction(g, v);
}

inline SumSpaceSpec random_sum_spec(Rng& r, const GridPtr& g, double keep_prob) {
  return {g, random_gamma(r, g, keep_prob), random_positive(r, g, 0.2, 3.0), random_positive(r, g, 0.2, 3.0)};
}

inline IntSpaceSpec random_int_spec(Rng& r, const GridPtr& g, double keep_prob) {
  return {g, random_gamma(r, g, keep_prob), random_positive(r, g, 0.2, 3.0), random_positive(r, g, 0.2, 3.0)};
}

}  // namespace mo::testing
