#pragma once

#include "mo/certificates.hpp"
#include "mo/measure_grid.hpp"

namespace mo {

// L_{inf,w}(Omega) + L_{1,v}(Gamma)
struct SumSpaceSpec {
  GridPtr grid;
  CellSet gamma;
  StepFunction v;  // read on gamma only
  StepFunction w;
  void validate() const;
};

// L_{1,w}(Omega) intersected with L_{inf,v}(Gamma)
struct IntSpaceSpec {
  GridPtr grid;
  CellSet gamma;
  StepFunction w;
  StepFunction v;  // read on gamma only
  void validate() const;
};

// Koethe duals: weights 1/w and 1/v (zero off gamma).
IntSpaceSpec reciprocal(const SumSpaceSpec& spec);
SumSpaceSpec reciprocal(const IntSpaceSpec& spec);

double wsum_norm(const SumSpaceSpec& spec, const StepFunction& x);
double wint_norm(const IntSpaceSpec& spec, const StepFunction& x);
double sum_dual_norm(const SumSpaceSpec& spec, const StepFunction& f);
double int_dual_norm(const IntSpaceSpec& spec, const StepFunction& f);

struct OrderContinuity {
  bool order_continuous = false;
  double complement_measure = 0.0;
  double integral_v_over_w = 0.0;
};
OrderContinuity order_continuity_check(const SumSpaceSpec& spec);

ClassificationReport classify_sum(const SumSpaceSpec& spec, const VerifyOptions& opts = {});
ClassificationReport classify_int(const IntSpaceSpec& spec, const VerifyOptions& opts = {});

FailureCertificate witness_int(const IntSpaceSpec& spec);
FailureCertificate witness_sum(const SumSpaceSpec& spec);

// Re-checks the norms, the eps bound recomputed from the recorded constants,
// and samples the slice. Throws VerificationError on any failure.
VerificationRecord verify_certificate(const IntSpaceSpec& spec, const FailureCertificate& cert, std::size_t samples,
                                      std::uint64_t seed);
VerificationRecord verify_certificate(const SumSpaceSpec& spec, const FailureCertificate& cert, std::size_t samples,
                                      std::uint64_t seed);

// Admissible eps bound of the intersection witness for constants c, m1.
double intersection_eps_bound(double c, double m1);
// Admissible eps bound of the sum witness.
double sum_eps_bound(double c, double r, double b);

}  // namespace mo
