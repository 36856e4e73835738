#include "mo/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mo/errors.hpp"
#include "mo/numeric.hpp"
#include "mo/sampling.hpp"

namespace mo {

std::string to_string(Verdict v) { return v == Verdict::Daugavet ? "Daugavet" : "NotDaugavet"; }

std::string to_string(CanonicalForm f) {
  switch (f) {
    case CanonicalForm::L1w: return "L1w";
    case CanonicalForm::LinfV: return "LinfV";
    case CanonicalForm::SumInftyL1Linf: return "SumInftyL1Linf";
    case CanonicalForm::IntersectionCollapse: return "IntersectionCollapse";
    case CanonicalForm::L1v: return "L1v";
    case CanonicalForm::None: return "None";
  }
  return "None";
}

namespace {

struct SliceSampler {
  const NormOracle& norm;
  const StepFunction& point;
  const StepFunction& functional;
  double eps;
  StepFunction anchor_unit;
  std::vector<double> atom_scale;  // 1/norm(e_k)
  std::uint64_t seed;

  double pairing(const StepFunction& y) const {
    ExactAccumulator acc;
    const auto& mu = y.grid()->weights();
    for (std::size_t k = 0; k < y.size(); ++k) acc.add_product(functional[k] * y[k], mu[k]);
    return acc.value();
  }

  // Unnormalised candidate for sample i.
  StepFunction draw(std::size_t i) const {
    auto eng = sample_engine(seed, i);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    const std::size_t n = point.size();
    std::vector<double> y(n, 0.0);
    const double t = 2.0 * std::pow(unif(eng), 3.0);
    auto aligned = [&](std::size_t k) { return point[k] < 0 ? -1.0 : 1.0; };
    switch (i % 5) {
      case 0:
        for (std::size_t k = 0; k < n; ++k) y[k] = anchor_unit[k] + t * gauss(eng) * atom_scale[k];
        break;
      case 1:
        for (std::size_t k = 0; k < n; ++k) {
          const double r = functional[k] == 0.0 ? aligned(k) * std::fabs(gauss(eng)) * atom_scale[k] : 0.0;
          y[k] = anchor_unit[k] + t * r;
        }
        break;
      case 2:
        for (std::size_t k = 0; k < n; ++k)
          y[k] = anchor_unit[k] + t * aligned(k) * std::fabs(gauss(eng)) * atom_scale[k];
        break;
      case 3:
        for (std::size_t k = 0; k < n; ++k) {
          if (functional[k] != 0.0)
            y[k] = (functional[k] > 0 ? 1.0 : -1.0) * unif(eng) * atom_scale[k];
          else
            y[k] = unif(eng) < 0.5 ? aligned(k) * unif(eng) * atom_scale[k] : 0.0;
        }
        break;
      default:
        for (std::size_t k = 0; k < n; ++k) y[k] = gauss(eng) * atom_scale[k];
    }
    return StepFunction(point.grid(), std::move(y));
  }

  struct Outcome {
    bool accepted = false;
    double value = 0.0;
  };

  Outcome evaluate(std::size_t i, StepFunction* keep = nullptr) const {
    StepFunction y = draw(i);
    const double ny = norm(y);
    if (!(ny > 0.0) || !std::isfinite(ny)) return {};
    y = y.scaled(1.0 / ny);
    if (!(pairing(y) > 1.0 - eps)) return {};
    if (keep) *keep = y;
    return {true, norm(point + y)};
  }
};

}  // namespace

VerificationRecord verify_slice_bound(const NormOracle& norm, const StepFunction& point,
                                      const StepFunction& functional, double eps, const StepFunction& anchor,
                                      std::size_t samples, std::uint64_t seed) {
  check_same_grid(point.grid(), functional.grid());
  check_same_grid(point.grid(), anchor.grid());
  const double an = norm(anchor);
  if (!(an > 0.0)) throw PreconditionError("slice anchor must be nonzero");
  const std::size_t n = point.size();
  std::vector<double> atom_scale(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> e(n, 0.0);
    e[k] = 1.0;
    atom_scale[k] = 1.0 / norm(StepFunction(point.grid(), e));
  }
  SliceSampler s{norm, point, functional, eps, anchor.scaled(1.0 / an), atom_scale, seed};

  VerificationRecord rec;
  rec.performed = true;
  rec.seed = seed;
  rec.samples_requested = samples;
  rec.bound = 2.0 - eps;
  const std::size_t block = 2048;
  const std::size_t max_draws = std::max<std::size_t>(400 * samples, block);
  std::vector<SliceSampler::Outcome> out(block);
  for (std::size_t start = 0; rec.samples_checked < samples && start < max_draws; start += block) {
    parallel_for(0, block, [&](std::size_t j) { out[j] = s.evaluate(start + j); });
    for (std::size_t j = 0; j < block && rec.samples_checked < samples; ++j) {
      ++rec.samples_drawn;
      if (!out[j].accepted) continue;
      ++rec.samples_checked;
      rec.max_observed = std::max(rec.max_observed, out[j].value);
      if (out[j].value > rec.bound + 1e-9) {
        StepFunction y;
        s.evaluate(start + j, &y);
        throw VerificationError("slice member exceeds 2 - eps", y.values(), out[j].value, rec.bound);
      }
    }
  }
  return rec;
}

}  // namespace mo
