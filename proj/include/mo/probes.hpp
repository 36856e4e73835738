#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mo/measure_grid.hpp"
#include "mo/norm_oracle.hpp"

namespace mo {

// S(f; eps) = {x in B(X) : <f, x> > 1 - eps}
struct Slice {
  StepFunction f;
  double eps = 0.0;
};

// Every probe is one-sided: values are lower bounds found by search, and a
// failed search proves nothing.
struct SliceDiameterResult {
  double lower_bound = 0.0;  // min(max_distance, 2): the ball has diameter 2
  double max_distance = 0.0;
  StepFunction a, b;  // slice members with |a - b| = max_distance
  std::size_t members = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Throws PreconditionError when the dual norm of f is not 1 or when no slice
// member turns up within the budget.
SliceDiameterResult slice_diameter_lb(const NormOracle& primal, const NormOracle& dual, const Slice& s,
                                      std::size_t samples, std::uint64_t seed);

struct RoughnessResult {
  double lower_bound = 0.0;  // best (|x+h| + |x-h| - 2)/|h|
  StepFunction h;
  double scale = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Directions: atoms, directions off supp x, sign patterns and Gaussians, each
// tried at every scale. Needs |x| = 1.
RoughnessResult roughness_probe(const NormOracle& norm, const StepFunction& x, const std::vector<double>& h_scales,
                                std::size_t samples, std::uint64_t seed);

struct DaugavetConditionResult {
  bool found = false;  // false means inconclusive
  StepFunction y;
  double pairing = 0.0;
  double norm_sum = 0.0;
  std::size_t evaluations = 0;
};

// Looks for unit y with <f, y> > 1 - eps and |x + y| > 2 - eps by coordinate
// ascent from extremal slice points. Needs |x| = 1 and |f|* = 1.
DaugavetConditionResult daugavet_condition_probe(const NormOracle& primal, const NormOracle& dual,
                                                 const StepFunction& x, const StepFunction& f, double eps,
                                                 std::size_t budget, std::uint64_t seed = 0);

}  // namespace mo
