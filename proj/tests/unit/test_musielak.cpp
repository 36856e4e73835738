#include "doctest.h"

#include <cmath>

#include "generators.hpp"
#include "mo/errors.hpp"
#include "mo/musielak.hpp"

using namespace mo;
using namespace mo::testing;

namespace {
GridPtr ones(int n) { return MeasureGrid::create(std::vector<double>(n, 1.0)); }
}  // namespace

TEST_CASE("modular examples") {
  auto g = ones(2);
  CHECK(modular(MusielakField::constant(g, OrliczCurve::power(2)), StepFunction(g, {1, 1})) == 1.0);
  const auto ind = MusielakField::constant(g, OrliczCurve::indicator(1));
  CHECK(modular(ind, StepFunction(g, {1, 0.5})) == 0.0);
  CHECK(std::isinf(modular(ind, StepFunction(g, {1.1, 0}))));
  CHECK(modular(ind, StepFunction::zeros(g)) == 0.0);
  CHECK_THROWS_AS(modular(ind, StepFunction::zeros(ones(2))), GridMismatch);
}

TEST_CASE("luxemburg examples") {
  auto g1 = ones(1);
  // (3/lambda)^2/2 = 1
  CHECK(luxemburg_norm(MusielakField::constant(g1, OrliczCurve::power(2)), StepFunction(g1, {3}), 1e-13) ==
        doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-12));
  auto g2 = ones(2);
  CHECK(luxemburg_norm(MusielakField::constant(g2, OrliczCurve::indicator(1)), StepFunction(g2, {3, 1}), 1e-13) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(luxemburg_norm(MusielakField::constant(g2, OrliczCurve::power(3)), StepFunction::zeros(g2)) == 0.0);
}

TEST_CASE("conjugate field examples") {
  auto g = ones(2);
  const auto c = conjugate_field(MusielakField::constant(g, OrliczCurve::linear(1)));
  CHECK(c.curve(0) == OrliczCurve::indicator(1));
  CHECK(c.curve(1) == OrliczCurve::indicator(1));
  const auto n = conjugate_field(MusielakField::nakano(g, {2, 2}));
  CHECK(n.curve(0) == OrliczCurve::power(2));
  const auto m = conjugate_field(MusielakField::nakano(g, {kInf, 1}));
  CHECK(m.curve(0) == OrliczCurve::linear(1));
  CHECK(m.curve(1) == OrliczCurve::indicator(1));
}

TEST_CASE("amemiya examples") {
  auto g1 = ones(1);
  // (1 + k^2/2)/k is minimal at k = sqrt(2)
  CHECK(amemiya_norm(MusielakField::constant(g1, OrliczCurve::power(2)), StepFunction(g1, {1}), 1e-12) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(amemiya_norm(MusielakField::constant(g1, OrliczCurve::indicator(1)), StepFunction(g1, {1}), 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(amemiya_norm(MusielakField::constant(g1, OrliczCurve::indicator(1)), StepFunction::zeros(g1)) == 0.0);
  auto g2 = ones(2);
  CHECK(amemiya_norm(MusielakField::constant(g2, OrliczCurve::linear(1)), StepFunction(g2, {1, -1})) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sup oracle examples") {
  auto g1 = ones(1);
  const auto p2 = MusielakField::constant(g1, OrliczCurve::power(2));
  const auto r = orlicz_norm_sup_oracle(p2, StepFunction(g1, {1}));
  CHECK(r.value == doctest::Approx(amemiya_norm(p2, StepFunction(g1, {1}))).epsilon(1e-6));
  CHECK(r.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(orlicz_norm_sup_oracle(p2, StepFunction::zeros(g1)).value == 0.0);

  auto g2 = ones(2);
  StepFunction x(g2, {1, 1});
  // sup over |y| <= 1 of sum x y is the l1 norm, the Orlicz norm of the Linear(1) field
  const auto ind = MusielakField::constant(g2, OrliczCurve::indicator(1));
  CHECK(orlicz_norm_sup_oracle(ind, x).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(amemiya_norm(conjugate_field(ind), x) == doctest::Approx(2.0).epsilon(1e-12));
  // sup over sum |y| <= 1 is the max norm
  const auto lin = MusielakField::constant(g2, OrliczCurve::linear(1));
  CHECK(orlicz_norm_sup_oracle(lin, x).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(amemiya_norm(conjugate_field(lin), x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partition and weights examples") {
  auto g = ones(2);
  const auto nk = MusielakField::nakano(g, {1, kInf});
  const auto p = partition(nk);
  CHECK(p.omega_1.contains(0));
  CHECK(p.omega_inf.contains(1));
  CHECK(partition(MusielakField::constant(g, OrliczCurve::power(2))).remainder.count() == 2);
  const auto lb = OrliczCurve::piecewise_linear({0, 2}, {1});
  CHECK(lb.params().a == 0.0);
  CHECK(lb.params().d == 2.0);
  CHECK(lb.params().b == 2.0);
  const auto mixed = MusielakField(g, {OrliczCurve::linear(3), OrliczCurve::indicator(2)});
  auto w = weights(mixed);
  CHECK(w.w[0] == 3.0);
  CHECK(w.v[0] == 0.0);
  CHECK(w.v[1] == 0.5);
  CHECK(w.w[1] == 0.0);
  const auto f1 = MusielakField(ones(1), {lb});
  CHECK(partition(f1).omega_1inf.contains(0));
  w = weights(f1);
  CHECK(w.w[0] == 1.0);
  CHECK(w.v[0] == 0.5);
}

TEST_CASE("weights agree with the zero set of the conjugate off the remainder") {
  Rng r(21);
  int remainder_mismatch = 0;
  for (int rep = 0; rep < 300; ++rep) {
    auto g = random_grid(r, 6);
    const auto f = random_field(r, g);
    const auto p = partition(f);
    const auto w = weights(f);
    const auto n = conjugate_field(f);
    for (std::size_t i = 0; i < g->size(); ++i) {
      if (!p.remainder.contains(i))
        CHECK(w.w[i] == n.params(i).a);
      else if (w.w[i] != n.params(i).a)
        ++remainder_mismatch;
    }
  }
  // piecewise linear remainder cells with a positive first slope have a_N > 0 = w
  CHECK(remainder_mismatch > 0);
}

TEST_CASE("decomposition examples") {
  auto g = ones(2);
  const auto f = MusielakField(g, {OrliczCurve::indicator(1), OrliczCurve::linear(1)});
  const auto r = decomposition_norm(f, StepFunction(g, {3, 2}));
  CHECK(r.formula == DecompositionFormula::ClosedForm);
  CHECK(r.value == 3.0);
  const auto all_inf = MusielakField(g, {OrliczCurve::indicator(1), OrliczCurve::indicator(4)});
  CHECK(decomposition_norm(all_inf, StepFunction(g, {3, 2})).value == 3.0);
  const auto mix = MusielakField(g, {OrliczCurve::indicator(2), OrliczCurve::power(2)});
  StepFunction x(g, {1.5, 0.7});
  const auto d = decomposition_norm(mix, x, 1e-13);
  CHECK(d.formula == DecompositionFormula::LuxemburgSplit);
  CHECK(d.value == doctest::Approx(luxemburg_norm(mix, x, 1e-13)).epsilon(1e-9));
}

TEST_CASE("finite elements and level sets") {
  auto g = ones(2);
  CHECK_FALSE(finite_elements_nontrivial(MusielakField::constant(g, OrliczCurve::indicator(1))));
  CHECK(finite_elements_nontrivial(MusielakField(g, {OrliczCurve::indicator(1), OrliczCurve::linear(1)})));
  CHECK(finite_elements_nontrivial(MusielakField::constant(g, OrliczCurve::power(3))));
  auto ls = bounded_level_sets(MusielakField::constant(g, OrliczCurve::power(2)), 5);
  REQUIRE(ls.size() == 1);
  CHECK(ls[0].count() == 2);
  ls = bounded_level_sets(MusielakField(g, {OrliczCurve::power(2), OrliczCurve::indicator(1)}), 5);
  CHECK(ls[0].indices() == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(bounded_level_sets(MusielakField::constant(g, OrliczCurve::indicator(1)), 5), PreconditionError);
}

TEST_CASE("norm properties on random fields") {
  Rng r(22);
  for (int rep = 0; rep < 300; ++rep) {
    auto g = random_grid(r, uint_in(r, 1, 8));
    const auto f = random_field(r, g);
    const auto x = random_x(r, g), y = random_x(r, g);
    const double lx = luxemburg_norm(f, x, 1e-13), ax = amemiya_norm(f, x, 1e-12);
    CHECK(ax / lx >= 1.0 - 1e-12);
    CHECK(ax / lx <= 2.0 + 1e-8);
    // unit ball characterisation
    CHECK(modular(f, x.scaled(1.0 / lx)) <= 1.0);
    CHECK(modular(f, x.scaled(1.0 / (lx * (1 - 1e-9)))) > 1.0);
    const double t = uni(r, -4, 4);
    CHECK(luxemburg_norm(f, x.scaled(t), 1e-13) == doctest::Approx(std::fabs(t) * lx).epsilon(1e-8));
    CHECK(amemiya_norm(f, x.scaled(t), 1e-12) == doctest::Approx(std::fabs(t) * ax).epsilon(1e-8));
    CHECK(luxemburg_norm(f, x + y, 1e-13) <= (lx + luxemburg_norm(f, y, 1e-13)) * (1 + 1e-8));
    CHECK(amemiya_norm(f, x + y, 1e-12) <= (ax + amemiya_norm(f, y, 1e-12)) * (1 + 1e-8));
    CHECK(decomposition_norm(f, x, 1e-13).value == doctest::Approx(lx).epsilon(1e-9));
  }
}

TEST_CASE("Orlicz norm equals the sup over the modular ball of the conjugate") {
  Rng r(23);
  for (int rep = 0; rep < 40; ++rep) {
    auto g = random_grid(r, uint_in(r, 1, 6));
    const auto f = random_field(r, g);
    const auto x = random_x(r, g);
    const auto o = orlicz_norm_sup_oracle(f, x);
    CHECK(o.value == doctest::Approx(amemiya_norm(conjugate_field(f), x, 1e-12)).epsilon(1e-6));
  }
}
