#pragma once

#include <cstdint>
#include <vector>

#include "mo/certificates.hpp"
#include "mo/interpolation.hpp"
#include "mo/musielak.hpp"
#include "mo/norm_oracle.hpp"

namespace mo {

struct ClassifyOptions {
  std::size_t samples = 0;  // witness verification samples; 0 skips
  std::uint64_t seed = 0;
};

ClassificationReport classify(const MusielakField& field, const ClassifyOptions& opts = {});

// Constant field; also checks the two-case form for Orlicz spaces.
ClassificationReport classify_orlicz(const OrliczCurve& curve, const GridPtr& grid, const ClassifyOptions& opts = {});

// Verdict read off the complementary field N alone: b_M is the asymptotic
// slope of N and M(b_M) = lim (b_M u - N(u)).
struct DualClassification {
  Verdict verdict = Verdict::NotDaugavet;
  std::string dual_form;
  double modular_at_b = 0.0;
};
DualClassification classify_dual(const MusielakField& complementary);

struct NonsquareSetup {
  std::size_t cell = 0;
  double a = 0.0;
  double b = 0.0;  // right end of the interval where (1+eps) a may move
  double upper = 0.0;  // largest value a unit vector can take on the cell
  double sigma1 = 0.0, sigma2 = 0.0, sigma0 = 0.0;
};
// Half-ratio constants for level a on a remainder cell.
NonsquareSetup find_nonsquare_setup(const MusielakField& field, std::size_t cell, double a);

NonsquareWitness build_nonsquare_witness(const MusielakField& field);

// Re-derives the constants from x and samples unit vectors y. Throws
// VerificationError with the offending y on any failure.
VerificationRecord verify_nonsquare(const MusielakField& field, const NonsquareWitness& wit, std::size_t samples,
                                    std::uint64_t seed);

// Checks an intersection certificate produced by classify (leaf 5) on the
// full grid, with the decomposition norm.
VerificationRecord verify_field_certificate(const MusielakField& field, const FailureCertificate& cert,
                                            std::size_t samples, std::uint64_t seed);

struct NonsquareProbe {
  std::vector<StepFunction> points;
  std::vector<double> best;  // best min(|x+y|, |x-y|) found per point
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Lower bounds on sup_y min(|x+y|, |x-y|) over unit y for unit points x.
// With no points given, uses normalised atoms, the constant function and
// a few random points. On a fixed grid only points that leave room (atoms,
// sign-balanced vectors) can reach 2; full-support points of l_1^n cannot.
NonsquareProbe no_nonsquare_probe(const NormOracle& norm, const GridPtr& grid, std::size_t samples,
                                  std::uint64_t seed, std::vector<StepFunction> points = {});

}  // namespace mo
