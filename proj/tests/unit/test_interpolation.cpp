#include "doctest.h"

#include <cmath>

#include "generators.hpp"
#include "lp_oracle.hpp"
#include "mo/errors.hpp"
#include "mo/interpolation.hpp"

using namespace mo;
using namespace mo::testing;

namespace {
GridPtr ones(int n) { return MeasureGrid::create(std::vector<double>(n, 1.0)); }
SumSpaceSpec unit_sum(const GridPtr& g) {
  return {g, CellSet::all(g), StepFunction::constant(g, 1), StepFunction::constant(g, 1)};
}
IntSpaceSpec unit_int(const GridPtr& g) {
  return {g, CellSet::all(g), StepFunction::constant(g, 1), StepFunction::constant(g, 1)};
}
}  // namespace

TEST_CASE("wsum norm examples") {
  auto g = ones(2);
  const auto s = unit_sum(g);
  CHECK(wsum_norm(s, StepFunction(g, {3, 1})) == 3.0);
  CHECK(lp_wsum_norm(s, StepFunction(g, {3, 1})) == doctest::Approx(3.0).epsilon(1e-12));
  SumSpaceSpec half{g, CellSet::from_indices(g, {0}), StepFunction::constant(g, 1), StepFunction::constant(g, 1)};
  CHECK(wsum_norm(half, StepFunction(g, {0, 2})) == 2.0);
  CHECK(wsum_norm(s, StepFunction::zeros(g)) == 0.0);
}

TEST_CASE("wint norm examples") {
  auto g = ones(2);
  CHECK(wint_norm(unit_int(g), StepFunction(g, {0.3, 0.3})) == doctest::Approx(0.6).epsilon(1e-15));
  auto h = MeasureGrid::create({0.5, 2.0});
  IntSpaceSpec s{h, CellSet::from_indices(h, {1}), StepFunction(h, {3, 1}), StepFunction(h, {1, 1})};
  CHECK(wint_norm(s, StepFunction(h, {2, 0})) == 2.0 * 0.5 * 3.0);
  CHECK(wint_norm(s, StepFunction::zeros(h)) == 0.0);
}

TEST_CASE("dual norm examples") {
  auto g = ones(2);
  CHECK(sum_dual_norm(unit_sum(g), StepFunction(g, {1, 0})) == 1.0);
  CHECK(sum_dual_norm(unit_sum(g), StepFunction::zeros(g)) == 0.0);
  // f0 = v on A with integral of v/w over A at most 1
  auto h = MeasureGrid::create({0.5, 1.0, 2.0});
  SumSpaceSpec s{h, CellSet::all(h), StepFunction(h, {2, 1, 1}), StepFunction(h, {4, 1, 1})};
  CHECK(sum_dual_norm(s, StepFunction(h, {2, 0, 0})) == 1.0);
  // f = -(c/gamma) w on A with gamma = c * integral_A w/v
  IntSpaceSpec t{h, CellSet::all(h), StepFunction(h, {1, 2, 1}), StepFunction(h, {1, 1, 4})};
  const double c = 0.5, gamma = c * (1.0 * 0.5 / 1.0);
  CHECK(int_dual_norm(t, StepFunction(h, {-(c / gamma) * 1.0, 0, 0})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(int_dual_norm(t, StepFunction::zeros(h)) == 0.0);
  // f = -w on A1 with integral of w/v over A1 equal to 1
  auto g4 = ones(4);
  CHECK(int_dual_norm(unit_int(g4), StepFunction(g4, {-1, 0, 0, 0})) == 1.0);
}

TEST_CASE("order continuity examples") {
  auto g = ones(2);
  CHECK(order_continuity_check(unit_sum(g)).order_continuous);
  SumSpaceSpec s{g, CellSet::from_indices(g, {0}), StepFunction::constant(g, 1), StepFunction::constant(g, 1)};
  const auto oc = order_continuity_check(s);
  CHECK_FALSE(oc.order_continuous);
  CHECK(oc.complement_measure == 1.0);
  auto h = MeasureGrid::create({1.0, 2.0});
  SumSpaceSpec t{h, CellSet::all(h), StepFunction(h, {2.3, 2.5}), StepFunction(h, {1, 1})};
  CHECK(order_continuity_check(t).integral_v_over_w == doctest::Approx(7.3).epsilon(1e-15));
}

TEST_CASE("classification examples") {
  auto half = MeasureGrid::create({0.25, 0.25});
  auto r = classify_sum(unit_sum(half));
  CHECK(r.verdict == Verdict::Daugavet);
  CHECK(r.canonical_form == CanonicalForm::L1v);
  r = classify_sum(unit_sum(ones(2)));
  CHECK(r.verdict == Verdict::NotDaugavet);
  CHECK(std::holds_alternative<FailureCertificate>(r.witness));
  SumSpaceSpec proper{half, CellSet::from_indices(half, {0}), StepFunction::constant(half, 1),
                      StepFunction::constant(half, 1)};
  r = classify_sum(proper);
  CHECK(r.verdict == Verdict::NotDaugavet);
  CHECK(std::holds_alternative<std::monostate>(r.witness));

  auto ri = classify_int(unit_int(half));
  CHECK(ri.verdict == Verdict::Daugavet);
  CHECK(ri.canonical_form == CanonicalForm::LinfV);
  ri = classify_int(unit_int(ones(4)));
  CHECK(ri.verdict == Verdict::NotDaugavet);
  IntSpaceSpec iproper{half, CellSet::from_indices(half, {1}), StepFunction::constant(half, 1),
                       StepFunction::constant(half, 1)};
  ri = classify_int(iproper);
  CHECK(ri.verdict == Verdict::NotDaugavet);
  CHECK(std::holds_alternative<FailureCertificate>(ri.witness));
}

TEST_CASE("intersection witness on four unit cells") {
  auto g = ones(4);
  const auto spec = unit_int(g);
  const auto cert = witness_int(spec);
  CHECK(cert.sets.at("A").size() == 2);
  CHECK(cert.sets.at("A1").size() == 1);
  CHECK(cert.constants.at("c") == 0.5);
  // half of min{2c(1-c)/(1+c), 1-c} = half of min{1/3, 1/2}
  CHECK(cert.epsilon == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(wint_norm(spec, cert.x) == 1.0);
  CHECK(int_dual_norm(spec, cert.f) == 1.0);
  const auto rec = verify_certificate(spec, cert, 10000, 99);
  CHECK(rec.samples_checked == 10000);
  CHECK(rec.max_observed <= 2.0 - cert.epsilon + 1e-9);
}

TEST_CASE("intersection witness with Gamma missing a cell") {
  auto g = MeasureGrid::create({0.7, 1.3, 0.4});
  IntSpaceSpec spec{g, CellSet::from_indices(g, {0, 1}), StepFunction(g, {1.0, 2.0, 0.5}),
                    StepFunction(g, {1.5, 1.0, 1.0})};
  const auto cert = witness_int(spec);
  CHECK(cert.constants.at("case") == 1.0);
  CHECK(cert.sets.at("A2") == std::vector<std::string>{"c2"});
  CHECK(wint_norm(spec, cert.x) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(int_dual_norm(spec, cert.f) == doctest::Approx(1.0).epsilon(1e-14));
  const auto rec = verify_certificate(spec, cert, 10000, 5);
  CHECK(rec.samples_checked == 10000);
}

TEST_CASE("intersection witness refuses Daugavet spaces") {
  auto g = MeasureGrid::create({0.25, 0.25});
  CHECK_THROWS_AS(witness_int(unit_int(g)), PreconditionError);
}

TEST_CASE("sum witness on two unit cells") {
  auto g = ones(2);
  const auto spec = unit_sum(g);
  const auto cert = witness_sum(spec);
  CHECK(cert.constants.at("b") == 0.5);
  CHECK(cert.constants.at("c") == 2.0);
  CHECK(cert.epsilon == 0.125);
  CHECK(wsum_norm(spec, cert.x) == 1.0);
  CHECK(sum_dual_norm(spec, *cert.g) == 1.0);
  const auto rec = verify_certificate(spec, cert, 10000, 3);
  CHECK(rec.samples_checked == 10000);
  CHECK(rec.max_observed <= 2.0 - cert.epsilon + 1e-9);
}

TEST_CASE("sum witness refusals") {
  CHECK_THROWS_AS(witness_sum(unit_sum(MeasureGrid::create({0.25, 0.25}))), PreconditionError);
  auto g = ones(2);
  SumSpaceSpec proper{g, CellSet::from_indices(g, {0}), StepFunction::constant(g, 1), StepFunction::constant(g, 1)};
  CHECK_THROWS_WITH_AS(witness_sum(proper), doctest::Contains("not representable on finite grid"), PreconditionError);
}

TEST_CASE("classifiers split a cell when the grid is too coarse") {
  // one cell carrying all of Gamma, mass 2
  auto g = MeasureGrid::create({2.0});
  const auto ispec = unit_int(g);
  CHECK_THROWS_AS(witness_int(ispec), PreconditionError);
  const auto ri = classify_int(ispec, {2000, 4});
  REQUIRE(std::holds_alternative<FailureCertificate>(ri.witness));
  const auto& ci = std::get<FailureCertificate>(ri.witness);
  CHECK(ci.sets.at("split_cell") == std::vector<std::string>{"c0"});
  CHECK(ci.x.grid()->ids() == std::vector<std::string>{"c0.0", "c0.1"});
  CHECK(ci.verification.samples_checked == 2000);
  CHECK(verify_certificate(ispec, ci, 500, 8).violations == 0);

  // every cell with v mu / w > 1
  auto g2 = MeasureGrid::create({3.0, 5.0});
  const auto sspec = unit_sum(g2);
  CHECK_THROWS_AS(witness_sum(sspec), PreconditionError);
  const auto rs = classify_sum(sspec, {2000, 4});
  REQUIRE(std::holds_alternative<FailureCertificate>(rs.witness));
  const auto& cs = std::get<FailureCertificate>(rs.witness);
  CHECK(cs.sets.at("split_cell") == std::vector<std::string>{"c1"});
  CHECK(cs.constants.at("split_parts") == 8.0);
  CHECK(verify_certificate(sspec, cs, 500, 8).violations == 0);

  auto bad = cs;
  bad.constants["split_parts"] = 4.0;
  CHECK_THROWS_AS(verify_certificate(sspec, bad, 10, 1), GridMismatch);
  bad.constants["split_parts"] = 1.5;
  CHECK_THROWS_AS(verify_certificate(sspec, bad, 10, 1), VerificationError);
  auto wide = ci;
  wide.epsilon *= 2.5;
  CHECK_THROWS_AS(verify_certificate(ispec, wide, 10, 1), VerificationError);
}

TEST_CASE("tampered certificate is rejected") {
  auto g = ones(4);
  const auto spec = unit_int(g);
  auto cert = witness_int(spec);
  cert.epsilon *= 2.0;
  CHECK_THROWS_AS(verify_certificate(spec, cert, 1000, 1), VerificationError);
}

TEST_CASE("wsum norm matches the LP and ternary oracles") {
  Rng r(31);
  for (int rep = 0; rep < 200; ++rep) {
    auto g = random_grid(r, uint_in(r, 1, 6));
    const auto spec = random_sum_spec(r, g, 0.7);
    const auto x = random_x(r, g);
    const double v = wsum_norm(spec, x);
    CHECK(v == doctest::Approx(lp_wsum_norm(spec, x)).epsilon(1e-9));
    CHECK(v == doctest::Approx(ternary_wsum_norm(spec, x)).epsilon(1e-8));
  }
}

TEST_CASE("duality identities and Hoelder") {
  Rng r(32);
  for (int rep = 0; rep < 300; ++rep) {
    auto g = random_grid(r, uint_in(r, 1, 12));
    const auto s = random_sum_spec(r, g, 0.6);
    const auto t = random_int_spec(r, g, 0.6);
    const auto f = random_x(r, g), x = random_x(r, g);
    CHECK(sum_dual_norm(s, f) == wint_norm(reciprocal(s), f));
    CHECK(int_dual_norm(t, f) == wsum_norm(reciprocal(t), f));
    const double pair = std::fabs(integrate(StepFunction(g, [&] {
      std::vector<double> p;
      for (std::size_t i = 0; i < g->size(); ++i) p.push_back(x[i] * f[i]);
      return p;
    }())));
    CHECK(pair <= wsum_norm(s, x) * sum_dual_norm(s, f) * (1 + 1e-9) + 1e-12);
    CHECK(pair <= wint_norm(t, x) * int_dual_norm(t, f) * (1 + 1e-9) + 1e-12);
  }
}
