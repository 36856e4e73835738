#include "mo/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mo/errors.hpp"
#include "mo/numeric.hpp"

namespace mo {

namespace {

void validate_common(const GridPtr& grid, const CellSet& gamma, const StepFunction& v, const StepFunction& w) {
  if (!grid) throw DomainError("space without grid");
  check_same_grid(grid, gamma.grid());
  check_same_grid(grid, v.grid());
  check_same_grid(grid, w.grid());
  if (gamma.empty()) throw DomainError("Gamma must have positive measure");
  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (!(w[i] > 0.0)) throw DomainError("w must be positive on every cell");
    if (gamma.contains(i) && !(v[i] > 0.0)) throw DomainError("v must be positive on Gamma");
  }
}

StepFunction reciprocal_on(const StepFunction& f, const CellSet* only) {
  std::vector<double> r(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!only || only->contains(i)) r[i] = 1.0 / f[i];
  return StepFunction(f.grid(), std::move(r));
}

// integral over s of num/den
double ratio_mass(const CellSet& s, const StepFunction& num, const StepFunction& den) {
  ExactAccumulator acc;
  for (std::size_t i : s.indices()) acc.add_product(num[i] / den[i], s.grid()->weight(i));
  return acc.value();
}

std::vector<std::string> ids_of(const CellSet& s) {
  std::vector<std::string> r;
  for (std::size_t i : s.indices()) r.push_back(s.grid()->id(i));
  return r;
}

// Cell of s whose mass m_i is closest to 1 (lowest index on ties).
std::size_t closest_to_one(const CellSet& s, const std::vector<double>& m) {
  std::size_t best = s.indices().front();
  for (std::size_t i : s.indices())
    if (std::fabs(std::log(m[i])) < std::fabs(std::log(m[best]))) best = i;
  return best;
}

// Values on a grid where `cell` was split into `parts` cells.
std::vector<double> split_values(const StepFunction& f, std::size_t cell, std::size_t parts) {
  std::vector<double> out;
  for (std::size_t i = 0; i < f.size(); ++i) out.insert(out.end(), i == cell ? parts : 1, f[i]);
  return out;
}

template <class Spec>
Spec refine_spec(const Spec& spec, std::size_t cell, std::size_t parts) {
  const GridPtr fine = refine(spec.grid, cell, parts);
  std::vector<std::size_t> idx;
  std::size_t k = 0;
  for (std::size_t i = 0; i < spec.grid->size(); ++i)
    for (std::size_t j = 0; j < (i == cell ? parts : 1); ++j, ++k)
      if (spec.gamma.contains(i)) idx.push_back(k);
  Spec out = spec;
  out.grid = fine;
  out.gamma = CellSet::from_indices(fine, idx);
  out.v = StepFunction(fine, split_values(spec.v, cell, parts));
  out.w = StepFunction(fine, split_values(spec.w, cell, parts));
  return out;
}

// Builds the witness, splitting the heaviest Gamma cell into 2, 4, ... equal
// cells when the grid is too coarse for the construction.
template <class Spec>
FailureCertificate refined_witness(const Spec& spec, FailureCertificate (*build)(const Spec&),
                                   const std::vector<double>& mass) {
  std::string first;
  try {
    return build(spec);
  } catch (const PreconditionError& e) {
    first = e.what();
  }
  std::size_t heavy = spec.gamma.indices().front();
  for (std::size_t i : spec.gamma.indices())
    if (mass[i] > mass[heavy]) heavy = i;
  for (std::size_t parts = 2; parts <= (std::size_t{1} << 20); parts *= 2) {
    try {
      FailureCertificate cert = build(refine_spec(spec, heavy, parts));
      cert.sets["split_cell"] = {spec.grid->id(heavy)};
      cert.constants["split_parts"] = static_cast<double>(parts);
      return cert;
    } catch (const PreconditionError&) {
    }
  }
  throw PreconditionError(first + "; splitting a cell did not help");
}

// Undoes the split record of a certificate: refined spec, rebound vectors.
template <class Spec>
bool apply_split(const Spec& spec, const FailureCertificate& cert, Spec& fine, FailureCertificate& local) {
  const auto split = cert.sets.find("split_cell");
  if (split == cert.sets.end()) return false;
  const auto parts = cert.constants.find("split_parts");
  if (split->second.size() != 1 || parts == cert.constants.end() || !(parts->second >= 2.0) ||
      parts->second != std::floor(parts->second) || parts->second > 1e9)
    throw VerificationError("malformed split record", cert.x.values(), 0.0, 0.0);
  fine = refine_spec(spec, spec.grid->index_of(split->second.front()), static_cast<std::size_t>(parts->second));
  local = cert;
  local.sets.erase("split_cell");
  local.constants.erase("split_parts");
  local.x = rebind(cert.x, fine.grid);
  local.f = rebind(cert.f, fine.grid);
  if (cert.g) local.g = rebind(*cert.g, fine.grid);
  return true;
}

}  // namespace

void SumSpaceSpec::validate() const { validate_common(grid, gamma, v, w); }
void IntSpaceSpec::validate() const { validate_common(grid, gamma, v, w); }

IntSpaceSpec reciprocal(const SumSpaceSpec& spec) {
  spec.validate();
  return {spec.grid, spec.gamma, reciprocal_on(spec.w, nullptr), reciprocal_on(spec.v, &spec.gamma)};
}

SumSpaceSpec reciprocal(const IntSpaceSpec& spec) {
  spec.validate();
  return {spec.grid, spec.gamma, reciprocal_on(spec.v, &spec.gamma), reciprocal_on(spec.w, nullptr)};
}

double wsum_norm(const SumSpaceSpec& spec, const StepFunction& x) {
  spec.validate();
  check_same_grid(spec.grid, x.grid());
  const std::size_t n = x.size();
  const auto& mu = spec.grid->weights();
  double c0 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (!spec.gamma.contains(i)) c0 = std::max(c0, std::fabs(x[i]) * spec.w[i]);
  auto g = [&](double c) {
    ExactAccumulator acc;
    acc.add(c);
    for (std::size_t i : spec.gamma.indices()) {
      const double excess = std::fabs(x[i]) - c / spec.w[i];
      if (excess > 0.0) acc.add_product(spec.v[i] * mu[i], excess);
    }
    return acc.value();
  };
  double best = g(c0);
  for (std::size_t i : spec.gamma.indices()) {
    const double c = std::fabs(x[i]) * spec.w[i];
    if (c > c0) best = std::min(best, g(c));
  }
  return best;
}

double wint_norm(const IntSpaceSpec& spec, const StepFunction& x) {
  spec.validate();
  check_same_grid(spec.grid, x.grid());
  ExactAccumulator acc;
  const auto& mu = spec.grid->weights();
  for (std::size_t i = 0; i < x.size(); ++i) acc.add_product(spec.w[i] * std::fabs(x[i]), mu[i]);
  double sup = 0.0;
  for (std::size_t i : spec.gamma.indices()) sup = std::max(sup, std::fabs(x[i]) * spec.v[i]);
  return std::max(acc.value(), sup);
}

double sum_dual_norm(const SumSpaceSpec& spec, const StepFunction& f) {
  spec.validate();
  check_same_grid(spec.grid, f.grid());
  ExactAccumulator acc;
  const auto& mu = spec.grid->weights();
  for (std::size_t i = 0; i < f.size(); ++i) acc.add_product((1.0 / spec.w[i]) * std::fabs(f[i]), mu[i]);
  double sup = 0.0;
  for (std::size_t i : spec.gamma.indices()) sup = std::max(sup, std::fabs(f[i]) * (1.0 / spec.v[i]));
  return std::max(acc.value(), sup);
}

double int_dual_norm(const IntSpaceSpec& spec, const StepFunction& f) { return wsum_norm(reciprocal(spec), f); }

OrderContinuity order_continuity_check(const SumSpaceSpec& spec) {
  spec.validate();
  OrderContinuity oc;
  oc.complement_measure = measure(spec.gamma.complement());
  oc.integral_v_over_w = ratio_mass(spec.gamma, spec.v, spec.w);
  oc.order_continuous = oc.complement_measure == 0.0 && std::isfinite(oc.integral_v_over_w);
  return oc;
}

double intersection_eps_bound(double c, double m1) {
  const double e = m1 <= 1.0 ? 2.0 * c * m1 * (1.0 - c) / (1.0 - c + 2.0 * c * m1)
                             : 2.0 * c * (1.0 - c * m1) / (1.0 + c);
  return std::min(e, 1.0 - c);
}

double sum_eps_bound(double c, double r, double b) { return std::min(r / (1.0 + r), 1.0 - b) / c; }

FailureCertificate witness_int(const IntSpaceSpec& spec) {
  spec.validate();
  const GridPtr& g = spec.grid;
  const std::size_t n = g->size();
  const CellSet outside = spec.gamma.complement();
  const double total = ratio_mass(spec.gamma, spec.w, spec.v);
  if (outside.empty() && total <= 1.0)
    throw PreconditionError("witness_int: the space has the Daugavet property");
  std::vector<double> m(n, 0.0);
  for (std::size_t i : spec.gamma.indices()) m[i] = spec.w[i] * g->weight(i) / spec.v[i];

  FailureCertificate cert;
  cert.kind = CertificateKind::Intersection;
  std::vector<double> x(n, 0.0), f(n, 0.0);
  const std::size_t j = closest_to_one(spec.gamma, m);
  const double m1 = m[j];
  const double kappa = 1.0 / std::min(1.0, m1);
  CellSet A = CellSet::from_indices(g, {j});
  double c = 0.0;

  if (!outside.empty()) {
    // A = A1 = {j}; the rest of the L1 mass sits outside Gamma.
    const double c_max = std::min(1.0, 1.0 / m1);
    double best = -1.0;
    for (int k = 1; k < 1000; ++k) {
      const double cc = c_max * k / 1000.0;
      const double e = intersection_eps_bound(cc, m1);
      if (e > best) {
        best = e;
        c = cc;
      }
    }
    ExactAccumulator wm;
    for (std::size_t i : outside.indices()) wm.add_product(spec.w[i], g->weight(i));
    const double c2 = (1.0 - c * m1) / wm.value();
    x[j] = c / spec.v[j];
    for (std::size_t i : outside.indices()) x[i] = c2;
    cert.constants["c2"] = c2;
    cert.constants["gamma"] = c * m1;
    cert.constants["case"] = 1;
    cert.sets["A2"] = ids_of(outside);
  } else {
    if (spec.gamma.count() < 2)
      throw PreconditionError("witness_int: grid too coarse (a single cell carries all of Gamma)");
    double mass = m1;
    for (std::size_t i = 0; i < n && !(mass > std::max(1.0, m1)); ++i) {
      if (i == j) continue;
      A.insert(i);
      mass += m[i];
    }
    mass = ratio_mass(A, spec.w, spec.v);
    c = 1.0 / mass;
    if (!(c * m1 < 1.0)) throw PreconditionError("witness_int: grid too coarse for a proper subset A1");
    for (std::size_t i : A.indices()) x[i] = c / spec.v[i];
    cert.constants["case"] = 2;
  }
  f[j] = -kappa * spec.w[j];
  const double bound = intersection_eps_bound(c, m1);
  if (!(bound > 0.0)) throw PreconditionError("witness_int: no admissible eps for this grid");
  cert.x = StepFunction(g, x);
  cert.f = StepFunction(g, f);
  cert.epsilon = 0.5 * bound;
  cert.constants["c"] = c;
  cert.constants["m1"] = m1;
  cert.constants["kappa"] = kappa;
  cert.constants["eps_bound"] = bound;
  cert.sets["A"] = ids_of(A);
  cert.sets["A1"] = {g->id(j)};
  return cert;
}

FailureCertificate witness_sum(const SumSpaceSpec& spec) {
  spec.validate();
  const GridPtr& g = spec.grid;
  const std::size_t n = g->size();
  if (spec.gamma.count() != n)
    throw PreconditionError("witness_sum: requires non-order-continuous space; not representable on finite grid");
  const double total = ratio_mass(spec.gamma, spec.v, spec.w);
  if (total <= 1.0) throw PreconditionError("witness_sum: the space has the Daugavet property");
  std::vector<double> m(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = spec.v[i] * g->weight(i) / spec.w[i];
    r[i] = g->weight(i) * std::min(spec.v[i], spec.w[i]) / std::max(spec.v[i], spec.w[i]);
  }
  std::size_t j = n;
  for (std::size_t i = 0; i < n; ++i)
    if (m[i] <= 1.0 && (j == n || r[i] > r[j])) j = i;
  if (j == n) throw PreconditionError("witness_sum: grid too coarse (every cell has v mu / w > 1)");

  CellSet C = CellSet::all(g);
  double b = 1.0 / total;
  if (total > 2.0) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return m[p] < m[q]; });
    C = CellSet::from_indices(g, {j});
    double mass = m[j];
    for (std::size_t i : order) {
      if (mass > 1.0) break;
      if (i == j) continue;
      C.insert(i);
      mass += m[i];
    }
    mass = ratio_mass(C, spec.v, spec.w);
    if (!(mass > 1.0 && mass <= 2.0)) throw PreconditionError("witness_sum: grid too coarse for a block C");
    b = 1.0 / mass;
  }
  const double c = 2.0;
  const double bound = sum_eps_bound(c, r[j], b);

  FailureCertificate cert;
  cert.kind = CertificateKind::Sum;
  std::vector<double> x(n, 0.0), f0(n, 0.0), gg(n, 0.0);
  x[j] = 1.0 / (g->weight(j) * spec.v[j]);
  f0[j] = spec.v[j];
  for (std::size_t i : C.indices()) gg[i] = -b * spec.v[i];
  cert.x = StepFunction(g, x);
  cert.f = StepFunction(g, f0);
  cert.g = StepFunction(g, gg);
  cert.epsilon = 0.5 * bound;
  cert.constants["b"] = b;
  cert.constants["c"] = c;
  cert.constants["r"] = r[j];
  cert.constants["eps_bound"] = bound;
  cert.sets["A"] = {g->id(j)};
  cert.sets["C"] = ids_of(C);
  return cert;
}

namespace {

void require_unit(double value, const char* what) {
  if (std::fabs(value - 1.0) > 1e-9)
    throw VerificationError(std::string(what) + " is not of norm one", {}, value, 1.0);
}

double constant(const FailureCertificate& c, const char* key) {
  auto it = c.constants.find(key);
  if (it == c.constants.end()) throw VerificationError(std::string("certificate lacks constant ") + key, {}, 0, 0);
  return it->second;
}

void require_eps(const FailureCertificate& cert, double bound) {
  if (!(cert.epsilon > 0.0 && cert.epsilon < 1.0 && cert.epsilon < bound))
    throw VerificationError("eps is outside the certified range", {}, cert.epsilon, bound);
}

}  // namespace

VerificationRecord verify_certificate(const IntSpaceSpec& spec, const FailureCertificate& cert, std::size_t samples,
                                      std::uint64_t seed) {
  if (cert.kind != CertificateKind::Intersection) throw PreconditionError("certificate kind mismatch");
  IntSpaceSpec fine;
  FailureCertificate local;
  if (apply_split(spec, cert, fine, local)) return verify_certificate(fine, local, samples, seed);
  require_unit(wint_norm(spec, cert.x), "x");
  require_unit(int_dual_norm(spec, cert.f), "F");
  require_eps(cert, intersection_eps_bound(constant(cert, "c"), constant(cert, "m1")));
  NormOracle norm = [&](const StepFunction& y) { return wint_norm(spec, y); };
  // the slice anchor: the extremal point -(1/v) on the support of f
  std::vector<double> anchor(cert.f.size(), 0.0);
  for (std::size_t i = 0; i < anchor.size(); ++i)
    if (cert.f[i] != 0.0) anchor[i] = (cert.f[i] < 0 ? -1.0 : 1.0) / spec.v[i];
  VerificationRecord rec = verify_slice_bound(norm, cert.x, cert.f, cert.epsilon,
                                              StepFunction(spec.grid, anchor), samples, seed);
  return rec;
}

VerificationRecord verify_certificate(const SumSpaceSpec& spec, const FailureCertificate& cert, std::size_t samples,
                                      std::uint64_t seed) {
  if (cert.kind != CertificateKind::Sum || !cert.g) throw PreconditionError("certificate kind mismatch");
  SumSpaceSpec fine;
  FailureCertificate local;
  if (apply_split(spec, cert, fine, local)) return verify_certificate(fine, local, samples, seed);
  require_unit(wsum_norm(spec, cert.x), "x");
  require_unit(sum_dual_norm(spec, cert.f), "F0");
  require_unit(sum_dual_norm(spec, *cert.g), "G");
  require_eps(cert, sum_eps_bound(constant(cert, "c"), constant(cert, "r"), constant(cert, "b")));
  NormOracle dual = [&](const StepFunction& h) { return sum_dual_norm(spec, h); };
  return verify_slice_bound(dual, *cert.g, cert.x, cert.epsilon, cert.f, samples, seed);
}

ClassificationReport classify_sum(const SumSpaceSpec& spec, const VerifyOptions& opts) {
  const OrderContinuity oc = order_continuity_check(spec);
  ClassificationReport rep;
  rep.evidence["complement_measure"] = oc.complement_measure;
  rep.evidence["integral_v_over_w"] = oc.integral_v_over_w;
  rep.evidence["order_continuous"] = oc.order_continuous ? 1.0 : 0.0;
  if (oc.order_continuous && oc.integral_v_over_w <= 1.0) {
    rep.verdict = Verdict::Daugavet;
    rep.canonical_form = CanonicalForm::L1v;
    rep.dual_form = "X' = L_{inf,1/v}";
    rep.leaf = 1;
    return rep;
  }
  rep.verdict = Verdict::NotDaugavet;
  rep.dual_form = "none";
  if (!oc.order_continuous) {
    rep.leaf = 2;
    rep.note = "Gamma is a proper subset: the failure needs singular functionals, which a finite grid lacks; no certificate";
    return rep;
  }
  rep.leaf = 3;
  try {
    std::vector<double> m(spec.grid->size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = spec.v[i] * spec.grid->weight(i) / spec.w[i];
    FailureCertificate cert = refined_witness<SumSpaceSpec>(spec, witness_sum, m);
    if (opts.samples > 0) cert.verification = verify_certificate(spec, cert, opts.samples, opts.seed);
    rep.witness = std::move(cert);
  } catch (const PreconditionError& e) {
    rep.note = e.what();
  }
  return rep;
}

ClassificationReport classify_int(const IntSpaceSpec& spec, const VerifyOptions& opts) {
  spec.validate();
  ClassificationReport rep;
  const double comp = measure(spec.gamma.complement());
  const double integral = ratio_mass(spec.gamma, spec.w, spec.v);
  rep.evidence["complement_measure"] = comp;
  rep.evidence["integral_w_over_v"] = integral;
  if (comp == 0.0 && integral <= 1.0) {
    rep.verdict = Verdict::Daugavet;
    rep.canonical_form = CanonicalForm::LinfV;
    rep.dual_form = "X' = L_{1,1/v}";
    rep.leaf = 1;
    return rep;
  }
  rep.verdict = Verdict::NotDaugavet;
  rep.dual_form = "none";
  rep.leaf = comp > 0.0 ? 2 : 3;
  try {
    std::vector<double> m(spec.grid->size(), 0.0);
    for (std::size_t i : spec.gamma.indices()) m[i] = spec.w[i] * spec.grid->weight(i) / spec.v[i];
    FailureCertificate cert = refined_witness<IntSpaceSpec>(spec, witness_int, m);
    if (opts.samples > 0) cert.verification = verify_certificate(spec, cert, opts.samples, opts.seed);
    rep.witness = std::move(cert);
  } catch (const PreconditionError& e) {
    rep.note = e.what();
  }
  return rep;
}

}  // namespace mo
