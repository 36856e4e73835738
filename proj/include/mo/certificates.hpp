#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mo/measure_grid.hpp"
#include "mo/norm_oracle.hpp"

namespace mo {

enum class Verdict { Daugavet, NotDaugavet };
enum class CanonicalForm { L1w, LinfV, SumInftyL1Linf, IntersectionCollapse, L1v, None };

std::string to_string(Verdict v);
std::string to_string(CanonicalForm f);

struct VerificationRecord {
  bool performed = false;
  std::uint64_t seed = 0;
  std::size_t samples_requested = 0;
  std::size_t samples_drawn = 0;
  std::size_t samples_checked = 0;
  double max_observed = 0.0;
  double bound = 0.0;
  std::size_t violations = 0;
};

enum class CertificateKind { Sum, Intersection };

// Intersection kind: unit x, functional f and eps such that every unit y
// with f(y) > 1 - eps has |x + y| <= 2 - eps.
// Sum kind: unit x, dual functionals f (anchor, f(x) = 1) and g of dual norm
// one such that every dual-unit h with h(x) > 1 - eps has |h + g|* <= 2 - eps.
struct FailureCertificate {
  CertificateKind kind = CertificateKind::Intersection;
  StepFunction x;
  StepFunction f;
  std::optional<StepFunction> g;
  double epsilon = 0.0;
  std::map<std::string, double> constants;
  std::map<std::string, std::vector<std::string>> sets;
  VerificationRecord verification;
};

// cell indexes the witness grid; when parts > 1 that grid is the field's
// grid with split_cell cut into `parts` equal cells.
struct NonsquareRecord {
  std::size_t split_cell = 0;
  std::size_t parts = 1;
  std::size_t cell = 0;
  std::string cell_id;
  double a = 0.0, b = 0.0;
  double sigma0 = 0.0, sigma1 = 0.0, sigma2 = 0.0;
  double eta = 0.0, gamma = 0.0;
  double delta_modular = 0.0;
  double epsilon = 0.0;
  std::string filler_kind;  // "none", "level_d0" or "scaled_b"
  double filler_level = 0.0;
  std::vector<std::string> filler_cells;
};

// Unit x with min(|x + y|, |x - y|) <= 2 - delta for every unit y.
struct NonsquareWitness {
  StepFunction x;
  double delta = 0.0;
  NonsquareRecord record;
  VerificationRecord verification;
};

struct ClassificationReport {
  Verdict verdict = Verdict::NotDaugavet;
  CanonicalForm canonical_form = CanonicalForm::None;
  std::map<std::string, double> evidence;
  std::variant<std::monostate, NonsquareWitness, FailureCertificate> witness;
  std::string dual_form;
  std::string note;
  int leaf = 0;
};

struct VerifyOptions {
  std::size_t samples = 0;  // 0 skips sampling
  std::uint64_t seed = 0;
};

// Samples unit vectors y (for `norm`) with <functional, y> > 1 - eps,
// starting from perturbations of `anchor`, and checks
// norm(point + y) <= 2 - eps + 1e-9. Stops after `samples` slice members.
// Throws VerificationError on the first violation (lowest sample index).
VerificationRecord verify_slice_bound(const NormOracle& norm, const StepFunction& point,
                                      const StepFunction& functional, double eps, const StepFunction& anchor,
                                      std::size_t samples, std::uint64_t seed);

}  // namespace mo
