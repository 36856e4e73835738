#include "doctest.h"

#include <cmath>

#include "generators.hpp"
#include "mo/errors.hpp"
#include "mo/interpolation.hpp"
#include "mo/musielak.hpp"
#include "mo/probes.hpp"

using namespace mo;
using namespace mo::testing;

namespace {
GridPtr ones(int n) { return MeasureGrid::create(std::vector<double>(n, 1.0)); }

struct Norms {
  MusielakField field, conj;
  NormOracle primal, dual;
  explicit Norms(MusielakField f)
      : field(std::move(f)),
        conj(conjugate_field(field)),
        primal([this](const StepFunction& x) { return luxemburg_norm(field, x, 1e-13); }),
        dual([this](const StepFunction& x) { return amemiya_norm(conj, x, 1e-13); }) {}
  Norms(const Norms&) = delete;
};
}  // namespace

TEST_CASE("slice diameter: L1 disjoint atoms give 2") {
  // exact L1 norm and its dual
  NormOracle l1 = [](const StepFunction& x) {
    std::vector<double> a(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) a[k] = std::fabs(x[k]);
    return integrate(StepFunction(x.grid(), a));
  };
  NormOracle linf = [](const StepFunction& f) { return f.max_abs(); };
  auto g = ones(2);
  auto r = slice_diameter_lb(l1, linf, {StepFunction(g, {1, 1}), 0.1}, 200, 1);
  CHECK(r.lower_bound == 2.0);
  CHECK(r.members > 2);

  // non-unit weights: atoms e_k/mu_k
  auto gw = MeasureGrid::create({0.5, 0.25, 2.0});
  auto rw = slice_diameter_lb(l1, linf, {StepFunction::constant(gw, 1.0), 0.05}, 200, 2);
  CHECK(rw.lower_bound == 2.0);

  // the same through the Luxemburg norm of the Linear field
  Norms n(MusielakField::constant(gw, OrliczCurve::linear(1)));
  auto rn = slice_diameter_lb(n.primal, n.dual, {StepFunction::constant(gw, 1.0), 0.05}, 200, 2);
  CHECK(rn.lower_bound == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("slice diameter: quadratic norm shrinks slices") {
  auto g = ones(3);
  Norms n(MusielakField::constant(g, OrliczCurve::power(2)));
  // |x| = |x|_2 / sqrt 2; f normalised in the dual norm
  StepFunction f(g, {1, 2, -1});
  f = f.scaled(1.0 / n.dual(f));
  for (double eps : {0.05, 0.2}) {
    auto r = slice_diameter_lb(n.primal, n.dual, {f, eps}, 2000, 3);
    // cap of a Hilbert ball: diameter 2 sqrt(1 - (1 - eps)^2)
    const double exact = 2.0 * std::sqrt(1.0 - (1.0 - eps) * (1.0 - eps));
    CHECK(r.lower_bound <= exact + 1e-9);
    CHECK(r.lower_bound > 0.8 * exact);
  }
  auto wide = slice_diameter_lb(n.primal, n.dual, {f, 0.999}, 2000, 3);
  CHECK(wide.lower_bound > 1.8);
  CHECK(wide.max_distance <= 2.0 + 1e-9);
}

TEST_CASE("slice diameter preconditions") {
  auto g = ones(2);
  Norms n(MusielakField::constant(g, OrliczCurve::linear(1)));
  CHECK_THROWS_AS(slice_diameter_lb(n.primal, n.dual, {StepFunction(g, {2, 2}), 0.1}, 10, 1), PreconditionError);
  CHECK_THROWS_AS(slice_diameter_lb(n.primal, n.dual, {StepFunction(g, {1, 1}), 0.0}, 10, 1), PreconditionError);
}

TEST_CASE("slice diameter never exceeds 2") {
  Rng r(5);
  for (int t = 0; t < 10; ++t) {
    auto g = random_grid(r, uint_in(r, 1, 5));
    Norms n(random_field(r, g));
    StepFunction f = random_x(r, g, 1.0, 0.0);
    const double nf = n.dual(f);
    if (!(nf > 0.0) || !std::isfinite(nf)) continue;
    f = f.scaled(1.0 / nf);
    try {
      auto res = slice_diameter_lb(n.primal, n.dual, {f, 0.3}, 300, t);
      CHECK(res.max_distance <= 2.0 + 1e-9);
      CHECK(res.lower_bound <= 2.0);
    } catch (const PreconditionError&) {
      // dual norm rounding off one, or an empty slice at this budget
    }
  }
}

TEST_CASE("roughness") {
  auto g = ones(3);
  Norms l1(MusielakField::constant(g, OrliczCurve::linear(1)));
  const StepFunction atom(g, {1, 0, 0});
  auto r = roughness_probe(l1.primal, atom, {1e-1, 1e-2, 1e-3}, 40, 1);
  CHECK(r.lower_bound >= 2.0 - 1e-9);
  CHECK(r.h[0] == 0.0);

  Norms l2(MusielakField::constant(g, OrliczCurve::power(2)));
  const StepFunction x = StepFunction(g, {1, 1, 0}).scaled(1.0 / l2.primal(StepFunction(g, {1, 1, 0})));
  auto q = roughness_probe(l2.primal, x, {1e-3, 1e-4}, 400, 1);
  // second-order: (|x+h| + |x-h| - 2)/|h| ~ |h| for a smooth norm
  CHECK(q.lower_bound < 1e-2);
  CHECK_THROWS_AS(roughness_probe(l2.primal, x.scaled(2), {1e-3}, 4, 1), PreconditionError);
  CHECK_THROWS_AS(roughness_probe(l2.primal, x, {}, 4, 1), PreconditionError);
}

TEST_CASE("daugavet condition probe") {
  auto g = ones(2);
  Norms l1(MusielakField::constant(g, OrliczCurve::linear(1)));
  auto r = daugavet_condition_probe(l1.primal, l1.dual, StepFunction(g, {1, 0}), StepFunction(g, {1, 1}), 0.2, 100);
  CHECK(r.found);
  CHECK(r.pairing > 0.8);
  CHECK(r.norm_sum > 1.8);

  auto g3 = ones(3);
  Norms l2(MusielakField::constant(g3, OrliczCurve::power(2)));
  StepFunction x(g3, {1, 0.5, -0.2});
  x = x.scaled(1.0 / l2.primal(x));
  StepFunction f(g3, {0.3, -1, 0.4});
  f = f.scaled(1.0 / l2.dual(f));
  CHECK_FALSE(daugavet_condition_probe(l2.primal, l2.dual, x, f, 0.1, 2000).found);

  // eps >= 1: y = x works once f(x) > 0
  StepFunction fx = x.scaled(1.0 / l2.dual(x));
  auto t = daugavet_condition_probe(l2.primal, l2.dual, x, fx, 1.0, 10);
  CHECK(t.found);
  CHECK(t.norm_sum == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("daugavet condition probe agrees with interpolation certificates") {
  auto g = ones(4);
  const IntSpaceSpec spec{g, CellSet::all(g), StepFunction::constant(g, 1), StepFunction::constant(g, 1)};
  const auto cert = witness_int(spec);
  NormOracle primal = [&](const StepFunction& y) { return wint_norm(spec, y); };
  NormOracle dual = [&](const StepFunction& h) { return int_dual_norm(spec, h); };
  auto r = daugavet_condition_probe(primal, dual, cert.x, cert.f, cert.epsilon, 5000);
  CHECK_FALSE(r.found);
  CHECK(r.evaluations >= 5000);

  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    auto gr = random_grid(rng, uint_in(rng, 2, 6));
    auto s = random_int_spec(rng, gr, 1.0);
    FailureCertificate c;
    try {
      c = witness_int(s);
    } catch (const PreconditionError&) {
      continue;
    }
    NormOracle p = [&](const StepFunction& y) { return wint_norm(s, y); };
    NormOracle d = [&](const StepFunction& h) { return int_dual_norm(s, h); };
    CHECK_FALSE(daugavet_condition_probe(p, d, c.x, c.f, c.epsilon, 1000).found);
  }
}
