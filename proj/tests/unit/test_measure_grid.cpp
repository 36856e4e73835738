#include "doctest.h"

#include <random>

#include "mo/errors.hpp"
#include "mo/measure_grid.hpp"
#include "mo/numeric.hpp"

using namespace mo;

TEST_CASE("integrate examples") {
  auto g = MeasureGrid::create({1, 1});
  CHECK(integrate(*g, StepFunction(g, {0, 0})) == 0.0);
  CHECK(integrate(*g, StepFunction(g, {3, 1})) == 4.0);
  auto h = MeasureGrid::create({0.5, 0.5});
  CHECK(integrate(*h, StepFunction(h, {2, 2})) == 2.0);
  CHECK_THROWS_AS(integrate(*g, StepFunction(h, {2, 2})), GridMismatch);
}

TEST_CASE("measure examples") {
  auto g = MeasureGrid::create({1, 1});
  CHECK(measure(*g, CellSet::none(g)) == 0.0);
  CHECK(measure(*g, CellSet::all(g)) == 2.0);
  auto h = MeasureGrid::create({0.25, 0.75}, {"left", "right"});
  CHECK(measure(*h, CellSet::from_ids(h, {"right"})) == 0.75);
  CHECK_THROWS_AS(CellSet::from_ids(h, {"middle"}), DomainError);
}

TEST_CASE("restrict examples") {
  auto g = MeasureGrid::create({1, 1});
  StepFunction x(g, {3, 1});
  CHECK(restrict(x, CellSet::from_indices(g, {0})).values() == std::vector<double>{3, 0});
  CHECK(restrict(x, CellSet::all(g)).values() == std::vector<double>{3, 1});
  CHECK(restrict(x, CellSet::none(g)).values() == std::vector<double>{0, 0});
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(MeasureGrid::create({1, 0}), DomainError);
  CHECK_THROWS_AS(MeasureGrid::create({1, -2}), DomainError);
  CHECK_THROWS_AS(MeasureGrid::create({1, kInf}), DomainError);
  CHECK_THROWS_AS(MeasureGrid::create({1, 1}, {"a", "a"}), DomainError);
  CHECK_THROWS_AS(MeasureGrid::create({}), DomainError);
  auto g = MeasureGrid::create({1});
  CHECK_THROWS_AS(StepFunction(g, {kInf}), DomainError);
  CHECK_THROWS_AS(StepFunction(g, {1, 2}), DomainError);
}

TEST_CASE("exact summation") {
  std::vector<double> t{1e16, 1.0, -1e16};
  CHECK(exact_sum(t) == 1.0);
  std::vector<double> u{0.1, 0.2, 0.3, -0.6};
  // correctly rounded sum of the four doubles
  CHECK(exact_sum(u) == 2.7755575615628914e-17);
}

// Dyadic values keep every partial sum representable, so additivity must hold bit for bit.
TEST_CASE("integrate is additive over disjoint restrictions") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> cells(1, 40), num(-1 << 10, 1 << 10), den(0, 8);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = cells(rng);
    std::vector<double> w, v;
    for (int i = 0; i < n; ++i) {
      w.push_back(std::ldexp(std::abs(num(rng)) + 1.0, -den(rng)));
      v.push_back(std::ldexp(static_cast<double>(num(rng)), -den(rng)));
    }
    auto g = MeasureGrid::create(w);
    StepFunction x(g, v);
    std::vector<std::size_t> a, b;
    for (int i = 0; i < n; ++i) {
      const int r = static_cast<int>(rng() % 3);
      if (r == 0) a.push_back(i);
      if (r == 1) b.push_back(i);
    }
    CellSet A = CellSet::from_indices(g, a), B = CellSet::from_indices(g, b);
    CHECK(integrate(*g, restrict(x, A)) + integrate(*g, restrict(x, B)) == integrate(*g, restrict(x, A | B)));
    CHECK(measure(A) + measure(B) == measure(A | B));
    CHECK(measure(A) <= measure(A | B));
  }
}
