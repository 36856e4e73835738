#include "mo/musielak.hpp"

#include <algorithm>
#include <cmath>

#include "mo/errors.hpp"
#include "mo/numeric.hpp"

namespace mo {

namespace {

constexpr double kGolden = 0.6180339887498949;

void check_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tolerance must be positive");
}

// modular of x scaled by 1/lambda, dividing per cell to keep the argument exact
double modular_div(const MusielakField& f, const StepFunction& x, double lambda) {
  ExactAccumulator acc;
  const auto& mu = f.grid()->weights();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (x[i] == 0.0) continue;
    const double m = f.curve(i).eval(std::fabs(x[i]) / lambda);
    if (std::isinf(m)) return kInf;
    acc.add_product(m, mu[i]);
  }
  return acc.value();
}

double modular_mul(const MusielakField& f, const StepFunction& x, double k) {
  ExactAccumulator acc;
  const auto& mu = f.grid()->weights();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (x[i] == 0.0) continue;
    const double m = f.curve(i).eval(std::fabs(x[i]) * k);
    if (std::isinf(m)) return kInf;
    acc.add_product(m, mu[i]);
  }
  return acc.value();
}

}  // namespace

MusielakField::MusielakField(GridPtr grid, std::vector<OrliczCurve> curves)
    : grid_(std::move(grid)), curves_(std::move(curves)) {
  if (!grid_) throw DomainError("field without grid");
  if (curves_.size() != grid_->size()) throw DomainError("curve count differs from cell count");
}

MusielakField MusielakField::constant(GridPtr grid, const OrliczCurve& curve) {
  std::vector<OrliczCurve> c(grid->size(), curve);
  return MusielakField(std::move(grid), std::move(c));
}

MusielakField MusielakField::nakano(GridPtr grid, const std::vector<double>& exponents) {
  if (exponents.size() != grid->size()) throw DomainError("exponent count differs from cell count");
  std::vector<OrliczCurve> c;
  c.reserve(exponents.size());
  for (double p : exponents) {
    if (std::isnan(p) || p < 1.0) throw DomainError("Nakano exponent must lie in [1, inf]");
    if (p == 1.0)
      c.push_back(OrliczCurve::linear(1.0));
    else if (std::isinf(p))
      c.push_back(OrliczCurve::indicator(1.0));
    else
      c.push_back(OrliczCurve::power(p));
  }
  return MusielakField(std::move(grid), std::move(c));
}

double modular(const MusielakField& field, const StepFunction& x) {
  check_same_grid(field.grid(), x.grid());
  return modular_mul(field, x, 1.0);
}

double luxemburg_norm(const MusielakField& field, const StepFunction& x, double tol) {
  check_same_grid(field.grid(), x.grid());
  check_tol(tol);
  if (x.is_zero()) return 0.0;
  auto feasible = [&](double lambda) { return modular_div(field, x, lambda) <= 1.0; };
  double lo, hi;
  const double start = x.max_abs();
  if (feasible(start)) {
    hi = start;
    lo = 0.5 * start;
    while (feasible(lo)) {
      hi = lo;
      lo *= 0.5;
      if (lo == 0.0) throw BracketError("luxemburg_norm: modular stays below 1 at every scale");
    }
  } else {
    lo = start;
    hi = 2.0 * start;
    while (!feasible(hi)) {
      lo = hi;
      hi *= 2.0;
      if (std::isinf(hi)) throw BracketError("luxemburg_norm: unbounded norm");
    }
  }
  while (hi - lo > tol * hi) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

MusielakField conjugate_field(const MusielakField& field) {
  std::vector<OrliczCurve> c;
  c.reserve(field.size());
  for (const auto& curve : field.curves()) c.push_back(curve.conjugate());
  return MusielakField(field.grid(), std::move(c));
}

double amemiya_norm(const MusielakField& field, const StepFunction& x, double tol) {
  check_same_grid(field.grid(), x.grid());
  check_tol(tol);
  if (x.is_zero()) return 0.0;
  auto h = [&](double k) {
    const double r = modular_mul(field, x, k);
    return std::isinf(r) ? kInf : (1.0 + r) / k;
  };
  const double lux = luxemburg_norm(field, x, 1e-6);
  // h(k) > 1/k and the minimum is at most 2*lux, so the minimiser is >= 1/(2 lux).
  const double k_lo = 0.25 / lux;

  double k_max = kInf;
  for (std::size_t i = 0; i < field.size(); ++i)
    if (x[i] != 0.0) k_max = std::min(k_max, field.params(i).b / std::fabs(x[i]));

  double best = h(k_lo);
  double k_hi;
  double h_limit = kInf;
  if (std::isfinite(k_max)) {
    k_hi = k_max;
    for (int n = 0; n <= 60 && std::isinf(h(k_hi)); ++n) k_hi = k_max * (1.0 - std::ldexp(1.0, n - 52));
    if (std::isinf(h(k_hi))) throw BracketError("amemiya_norm: no finite right bracket");
  } else {
    ExactAccumulator acc;
    const auto& mu = field.grid()->weights();
    for (std::size_t i = 0; i < field.size(); ++i)
      if (x[i] != 0.0) acc.add_product(std::fabs(x[i]) * field.curve(i).asymptotic_slope(), mu[i]);
    h_limit = acc.value();
    k_hi = 1.0 / lux;
    double h_hi = h(k_hi);
    for (int n = 0; n < 200; ++n) {
      const double h_next = h(2.0 * k_hi);
      if (!(h_next < h_hi)) break;
      k_hi *= 2.0;
      h_hi = h_next;
    }
    k_hi *= 2.0;
  }
  best = std::min({best, h(k_hi), h_limit});

  double a = std::log(k_lo), b = std::log(k_hi);
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  double hc = h(std::exp(c)), hd = h(std::exp(d));
  const double width = std::max(0.1 * tol, 1e-15);
  for (int it = 0; it < 300 && (b - a) > width; ++it) {
    if (hc <= hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - kGolden * (b - a);
      hc = h(std::exp(c));
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + kGolden * (b - a);
      hd = h(std::exp(d));
    }
    best = std::min({best, hc, hd});
  }
  return best;
}

OracleResult orlicz_norm_sup_oracle(const MusielakField& field, const StepFunction& x, const OracleEffort& effort) {
  check_same_grid(field.grid(), x.grid());
  const std::size_t n = field.size();
  const auto& mu = field.grid()->weights();
  OracleResult res;
  res.y.assign(n, 0.0);
  std::vector<std::size_t> act;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] != 0.0) act.push_back(i);
  if (act.empty()) return res;

  auto y_of = [&](std::size_t i, double beta) { return field.curve(i).inverse(std::max(beta, 0.0) / mu[i]); };
  auto gain = [&](std::size_t i, double beta) { return std::fabs(x[i]) * mu[i] * y_of(i, beta); };
  auto value_of = [&](const std::vector<double>& y) {
    ExactAccumulator acc;
    for (std::size_t i : act) acc.add_product(std::fabs(x[i]) * y[i], mu[i]);
    return acc.value();
  };
  // Final polish: shrink until the modular is <= 1 despite rounding.
  auto make_feasible = [&](std::vector<double> y) {
    for (int it = 0; it < 200; ++it) {
      ExactAccumulator acc;
      for (std::size_t i : act) acc.add_product(field.curve(i).eval(y[i]), mu[i]);
      if (acc.value() <= 1.0) break;
      for (double& v : y) v *= (1.0 - std::ldexp(1.0, it - 50));
    }
    return y;
  };

  std::vector<double> beta(n, 0.0);
  for (std::size_t i : act) beta[i] = 1.0 / static_cast<double>(act.size());
  auto total = [&] {
    ExactAccumulator acc;
    for (std::size_t i : act) acc.add(gain(i, beta[i]));
    return acc.value();
  };
  double cur = total();
  bool converged = act.size() == 1;
  int sweeps = 0;
  for (; !converged && sweeps < effort.max_sweeps; ++sweeps) {
    const double before = cur;
    for (std::size_t ia = 0; ia < act.size(); ++ia) {
      for (std::size_t ib = ia + 1; ib < act.size(); ++ib) {
        const std::size_t i = act[ia], j = act[ib];
        const double budget = beta[i] + beta[j];
        if (budget <= 0.0) continue;
        auto g = [&](double t) { return gain(i, t) + gain(j, budget - t); };
        double lo = 0.0, hi = budget;
        double c = hi - kGolden * (hi - lo), d = lo + kGolden * (hi - lo);
        double gc = g(c), gd = g(d);
        for (int it = 0; it < effort.line_iterations; ++it) {
          if (gc >= gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - kGolden * (hi - lo);
            gc = g(c);
          } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + kGolden * (hi - lo);
            gd = g(d);
          }
        }
        double best_t = beta[i], best_g = g(beta[i]);
        for (double t : {0.0, budget, c, d}) {
          const double gt = g(t);
          if (gt > best_g) {
            best_g = gt;
            best_t = t;
          }
        }
        beta[i] = best_t;
        beta[j] = budget - best_t;
      }
    }
    cur = total();
    if (cur - before <= 1e-15 * cur) converged = true;
  }

  std::vector<double> y(n, 0.0);
  for (std::size_t i : act) y[i] = y_of(i, beta[i]);
  y = make_feasible(std::move(y));
  res.y = y;
  res.value = value_of(y);

  bool all_power = true;
  for (std::size_t i : act) all_power = all_power && field.curve(i).kind() == OrliczCurve::Kind::Power;
  if (all_power) {
    // Stationarity: |x_i| = lambda * y_i^(p_i - 1).
    auto y_at = [&](double lambda) {
      std::vector<double> yy(n, 0.0);
      for (std::size_t i : act) yy[i] = std::pow(std::fabs(x[i]) / lambda, 1.0 / (field.curve(i).p() - 1.0));
      return yy;
    };
    auto mod_at = [&](double lambda) {
      const auto yy = y_at(lambda);
      ExactAccumulator acc;
      for (std::size_t i : act) acc.add_product(field.curve(i).eval(yy[i]), mu[i]);
      return acc.value();
    };
    double lo = 1.0, hi = 1.0;
    while (mod_at(lo) <= 1.0 && lo > 1e-300) lo *= 0.5;
    while (mod_at(hi) > 1.0 && hi < 1e300) hi *= 2.0;
    for (int it = 0; it < 400; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (mid <= lo || mid >= hi) break;
      if (mod_at(mid) > 1.0)
        lo = mid;
      else
        hi = mid;
    }
    auto yk = make_feasible(y_at(hi));
    const double vk = value_of(yk);
    if (vk > res.value) {
      res.value = vk;
      res.y = yk;
    }
    converged = true;
  }
  res.sweeps = sweeps;
  res.approximate = !converged;
  return res;
}

Partition partition(const MusielakField& field) {
  const GridPtr& g = field.grid();
  Partition p{CellSet::none(g), CellSet::none(g), CellSet::none(g), CellSet::none(g)};
  for (std::size_t i = 0; i < field.size(); ++i) {
    const CurveParams& c = field.params(i);
    if (c.a == c.b)
      p.omega_inf.insert(i);
    else if (c.d == c.b && std::isinf(c.b))
      p.omega_1.insert(i);
    else if (c.d == c.b)
      p.omega_1inf.insert(i);
    else
      p.remainder.insert(i);
  }
  return p;
}

WeightPair weights(const MusielakField& field) {
  const std::size_t n = field.size();
  const Partition part = partition(field);
  std::vector<double> v(n, 0.0), w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const CurveParams& c = field.params(i);
    v[i] = std::isinf(c.b) ? 0.0 : 1.0 / c.b;
    if (part.omega_1.contains(i) || part.omega_1inf.contains(i)) w[i] = field.curve(i).right_derivative(0.0);
    if (!part.remainder.contains(i) && w[i] != field.curve(i).conjugate().params().a)
      throw std::logic_error("weights: w disagrees with the zero set of the conjugate curve at cell " +
                             field.grid()->id(i));
  }
  return {StepFunction(field.grid(), std::move(v)), StepFunction(field.grid(), std::move(w))};
}

DecompositionResult decomposition_norm(const MusielakField& field, const StepFunction& x, double tol) {
  check_same_grid(field.grid(), x.grid());
  const Partition part = partition(field);
  const WeightPair wp = weights(field);
  DecompositionResult r;
  double inf_part = 0.0;
  for (std::size_t i : part.omega_inf.indices()) inf_part = std::max(inf_part, std::fabs(x[i]) * wp.v[i]);
  const CellSet rest = part.omega_inf.complement();
  r.split_value = std::max(inf_part, luxemburg_norm(field, restrict(x, rest), tol));
  r.value = r.split_value;
  if (part.remainder.empty()) {
    double sup_part = inf_part;
    for (std::size_t i : part.omega_1inf.indices()) sup_part = std::max(sup_part, std::fabs(x[i]) * wp.v[i]);
    ExactAccumulator acc;
    for (std::size_t i : rest.indices()) acc.add_product(wp.w[i] * std::fabs(x[i]), field.grid()->weight(i));
    r.closed_form = std::max(sup_part, acc.value());
    r.value = *r.closed_form;
    r.formula = DecompositionFormula::ClosedForm;
  }
  return r;
}

bool finite_elements_nontrivial(const MusielakField& field) {
  for (std::size_t i = 0; i < field.size(); ++i)
    if (std::isinf(field.params(i).b)) return true;
  return false;
}

std::vector<CellSet> bounded_level_sets(const MusielakField& field, double u) {
  if (std::isnan(u) || u < 0.0) throw DomainError("level must be >= 0");
  CellSet s = CellSet::where(field.grid(), [&](std::size_t i) { return std::isinf(field.params(i).b); });
  if (s.empty()) throw PreconditionError("bounded_level_sets: no cell with b = inf");
  return {s};
}

double modular_at_b(const MusielakField& field) {
  ExactAccumulator acc;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const CurveParams& c = field.params(i);
    if (std::isinf(c.b)) return kInf;
    acc.add_product(c.value_at_b, field.grid()->weight(i));
  }
  return acc.value();
}

MusielakField restrict_field(const MusielakField& field, const CellSet& cells) {
  check_same_grid(field.grid(), cells.grid());
  std::vector<OrliczCurve> c;
  for (std::size_t i : cells.indices()) c.push_back(field.curve(i));
  return MusielakField(subgrid(cells), std::move(c));
}

MusielakField refine_field(const MusielakField& field, std::size_t cell, std::size_t parts) {
  GridPtr g = refine(field.grid(), cell, parts);
  std::vector<OrliczCurve> c;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const std::size_t k = i == cell ? parts : 1;
    for (std::size_t j = 0; j < k; ++j) c.push_back(field.curve(i));
  }
  return MusielakField(std::move(g), std::move(c));
}

}  // namespace mo
