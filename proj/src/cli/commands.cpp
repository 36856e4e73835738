#include "mo/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mo/classifier.hpp"
#include "mo/cli/report.hpp"
#include "mo/errors.hpp"
#include "mo/probes.hpp"
#include "mo/sampling.hpp"

namespace mo::cli {

namespace {

constexpr std::size_t kDefaultSamples = 10000;
constexpr double kDefaultTol = 1e-10;

struct Settings {
  std::optional<std::uint64_t> seed;
  std::size_t samples = kDefaultSamples;
  double tol = kDefaultTol;
};

Settings settings(const SpaceConfig& c, const Overrides& o) {
  Settings s;
  s.seed = o.seed ? o.seed : c.seed;
  if (o.samples)
    s.samples = *o.samples;
  else if (c.samples)
    s.samples = *c.samples;
  if (o.tol)
    s.tol = *o.tol;
  else if (c.tolerance)
    s.tol = *c.tolerance;
  if (!(s.tol > 0.0) || !std::isfinite(s.tol)) throw ConfigError("tolerance", "must be positive and finite");
  return s;
}

std::uint64_t need_seed(const Settings& s) {
  if (!s.seed) throw ConfigError("seed", "randomized commands need an explicit seed (config \"seed\" or --seed)");
  return *s.seed;
}

bool field_kind(const SpaceConfig& c) { return c.field.has_value(); }

json header(const char* command, const SpaceConfig& c, const Settings& s) {
  return {{"command", command},
          {"config_hash", config_hash(c)},
          {"space_kind", to_string(c.kind)},
          {"versions", {{"mocli", kVersion}, {"report_format", kReportFormat}}},
          {"seed", s.seed ? json(*s.seed) : json(nullptr)},
          {"samples", s.samples},
          {"tolerance", s.tol},
          {"grid", grid_to_json(c.grid)}};
}

json violation(const VerificationError& e) {
  return {{"status", "fail"},
          {"message", e.what()},
          {"offending_sample", write_vector(e.sample)},
          {"observed", write_number(e.observed)},
          {"bound", write_number(e.bound)}};
}

const char* formula_name(DecompositionFormula f) {
  return f == DecompositionFormula::ClosedForm ? "closed_form" : "luxemburg_split";
}

json params_to_json(const CurveParams& p) {
  return {{"a", write_number(p.a)}, {"b", write_number(p.b)}, {"d", write_number(p.d)},
          {"value_at_b", write_number(p.value_at_b)}};
}

json gamma_ids(const CellSet& s) {
  json out = json::array();
  for (std::size_t i : s.indices()) out.push_back(s.grid()->id(i));
  return out;
}

struct Oracles {
  NormOracle primal, dual;
};

Oracles oracles(const SpaceConfig& c, double tol) {
  if (field_kind(c)) {
    auto field = std::make_shared<MusielakField>(*c.field);
    auto conj = std::make_shared<MusielakField>(conjugate_field(*c.field));
    return {[field, tol](const StepFunction& x) { return luxemburg_norm(*field, x, tol); },
            [conj, tol](const StepFunction& x) { return amemiya_norm(*conj, x, tol); }};
  }
  if (c.sum) {
    auto spec = std::make_shared<SumSpaceSpec>(*c.sum);
    return {[spec](const StepFunction& x) { return wsum_norm(*spec, x); },
            [spec](const StepFunction& x) { return sum_dual_norm(*spec, x); }};
  }
  auto spec = std::make_shared<IntSpaceSpec>(*c.inter);
  return {[spec](const StepFunction& x) { return wint_norm(*spec, x); },
          [spec](const StepFunction& x) { return int_dual_norm(*spec, x); }};
}

json classification(const SpaceConfig& c, std::size_t samples, std::uint64_t seed) {
  if (field_kind(c)) {
    const ClassifyOptions opts{samples, seed};
    const ClassificationReport r =
        c.kind == SpaceKind::Orlicz ? classify_orlicz(c.field->curve(0), c.grid, opts) : classify(*c.field, opts);
    json j = to_json(r);
    const DualClassification d = classify_dual(conjugate_field(*c.field));
    j["dual_route"] = {{"verdict", to_string(d.verdict)},
                       {"dual_form", d.dual_form},
                       {"modular_at_b", write_number(d.modular_at_b)},
                       {"agrees", d.verdict == r.verdict}};
    return j;
  }
  const VerifyOptions opts{samples, seed};
  return to_json(c.sum ? classify_sum(*c.sum, opts) : classify_int(*c.inter, opts));
}

// Probe vectors are scaled onto the unit sphere of the given norm.
StepFunction unit_vector(const json& j, const std::string& path, const GridPtr& g, const NormOracle& norm) {
  std::vector<double> v = read_vector(j, path);
  if (v.size() != g->size()) throw ConfigError(path, "length differs from the grid");
  StepFunction x(g, std::move(v));
  const double n = norm(x);
  if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError(path, "cannot be normalised (norm is zero or infinite)");
  return x.scaled(1.0 / n);
}

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing field");
  return j.at(key);
}

std::size_t count_or(const json& j, const std::string& path, const char* key, std::size_t dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError(path + "." + key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

void only(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(path + "." + it.key(), "unknown field");
  }
}

json run_probe(const json& p, const std::string& path, const SpaceConfig& c, const Oracles& n, std::size_t samples,
               std::uint64_t seed) {
  if (!p.is_object()) throw ConfigError(path, "expected an object");
  const std::string kind = need(p, path, "kind").get<std::string>();
  json out{{"kind", kind}, {"seed", seed}};
  if (kind == "slice_diameter") {
    only(p, path, {"kind", "f", "eps", "samples"});
    const StepFunction f = unit_vector(need(p, path, "f"), path + ".f", c.grid, n.dual);
    const double eps = read_number(need(p, path, "eps"), path + ".eps");
    const std::size_t m = count_or(p, path, "samples", samples);
    const auto r = slice_diameter_lb(n.primal, n.dual, {f, eps}, m, seed);
    out.update({{"one_sided", "lower bound on the slice diameter"},
                {"samples", m},
                {"eps", eps},
                {"f", write_vector(f.values())},
                {"lower_bound", write_number(r.lower_bound)},
                {"max_distance", write_number(r.max_distance)},
                {"members", r.members},
                {"a", write_vector(r.a.values())},
                {"b", write_vector(r.b.values())}});
  } else if (kind == "roughness") {
    only(p, path, {"kind", "x", "scales", "samples"});
    const StepFunction x = unit_vector(need(p, path, "x"), path + ".x", c.grid, n.primal);
    const std::vector<double> scales =
        p.contains("scales") ? read_vector(p.at("scales"), path + ".scales") : std::vector<double>{1e-1, 1e-2, 1e-3};
    const std::size_t m = count_or(p, path, "samples", samples);
    const auto r = roughness_probe(n.primal, x, scales, m, seed);
    out.update({{"one_sided", "lower bound on the roughness constant at x"},
                {"samples", m},
                {"x", write_vector(x.values())},
                {"scales", write_vector(scales)},
                {"lower_bound", write_number(r.lower_bound)},
                {"scale", r.scale},
                {"h", write_vector(r.h.values())}});
  } else if (kind == "daugavet_condition") {
    only(p, path, {"kind", "x", "f", "eps", "budget"});
    const StepFunction x = unit_vector(need(p, path, "x"), path + ".x", c.grid, n.primal);
    const StepFunction f = unit_vector(need(p, path, "f"), path + ".f", c.grid, n.dual);
    const double eps = read_number(need(p, path, "eps"), path + ".eps");
    const std::size_t budget = count_or(p, path, "budget", samples);
    const auto r = daugavet_condition_probe(n.primal, n.dual, x, f, eps, budget, seed);
    out.update({{"one_sided", r.found ? "found y in the slice with |x + y| > 2 - eps"
                                      : "no such y within the budget; inconclusive"},
                {"budget", budget},
                {"eps", eps},
                {"x", write_vector(x.values())},
                {"f", write_vector(f.values())},
                {"found", r.found},
                {"evaluations", r.evaluations}});
    if (r.found)
      out.update({{"y", write_vector(r.y.values())}, {"pairing", r.pairing}, {"norm_sum", r.norm_sum}});
  } else if (kind == "no_nonsquare") {
    only(p, path, {"kind", "points", "samples"});
    std::vector<StepFunction> pts;
    if (p.contains("points")) {
      const json& a = p.at("points");
      if (!a.is_array()) throw ConfigError(path + ".points", "expected an array of vectors");
      for (std::size_t k = 0; k < a.size(); ++k)
        pts.push_back(unit_vector(a[k], path + ".points[" + std::to_string(k) + "]", c.grid, n.primal));
    }
    const std::size_t m = count_or(p, path, "samples", samples);
    const auto r = no_nonsquare_probe(n.primal, c.grid, m, seed, pts);
    json points = json::array();
    for (const StepFunction& x : r.points) points.push_back(write_vector(x.values()));
    out.update({{"one_sided", "lower bounds on sup over unit y of min(|x + y|, |x - y|)"},
                {"samples", m},
                {"points", points},
                {"best", write_vector(r.best)}});
  } else {
    throw ConfigError(path + ".kind", "unknown probe kind " + kind);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Outcome cmd_norm(const SpaceConfig& c, const Overrides& o) {
  const Settings s = settings(c, o);
  if (!c.x) throw ConfigError("x", "norm needs x (inline or generator)");
  const StepFunction& x = *c.x;
  json norms;
  if (field_kind(c)) {
    const MusielakField& f = *c.field;
    const DecompositionResult d = decomposition_norm(f, x, s.tol);
    json dj{{"value", write_number(d.value)},
            {"formula", formula_name(d.formula)},
            {"split_value", write_number(d.split_value)}};
    if (d.closed_form) dj["closed_form"] = write_number(*d.closed_form);
    norms = {{"luxemburg", write_number(luxemburg_norm(f, x, s.tol))},
             {"amemiya", write_number(amemiya_norm(f, x, s.tol))},
             {"modular", write_number(modular(f, x))},
             {"decomposition", dj},
             {"dual_amemiya", write_number(amemiya_norm(conjugate_field(f), x, s.tol))}};
    if (c.grid->size() <= 8) {
      const OracleResult r = orlicz_norm_sup_oracle(f, x);
      norms["orlicz_sup_oracle"] = {{"value", write_number(r.value)}, {"approximate", r.approximate},
                                    {"sweeps", r.sweeps}};
    }
  } else if (c.sum) {
    norms = {{"wsum", write_number(wsum_norm(*c.sum, x))}, {"dual", write_number(sum_dual_norm(*c.sum, x))}};
  } else {
    norms = {{"wint", write_number(wint_norm(*c.inter, x))}, {"dual", write_number(int_dual_norm(*c.inter, x))}};
  }
  json rep = header("norm", c, s);
  rep["result"] = {{"x", write_vector(x.values())}, {"norms", norms}};
  return {kOk, rep, ""};
}

Outcome cmd_classify(const SpaceConfig& c, const Overrides& o) {
  const Settings s = settings(c, o);
  const std::uint64_t seed = s.samples > 0 ? need_seed(s) : s.seed.value_or(0);
  json rep = header("classify", c, s);
  try {
    rep["result"] = {{"status", "ok"}, {"classification", classification(c, s.samples, seed)}};
  } catch (const VerificationError& e) {
    rep["result"] = violation(e);
    return {kViolation, rep, e.what()};
  }
  return {kOk, rep, ""};
}

Outcome cmd_verify(const SpaceConfig& c, const json& certificate, const Overrides& o) {
  Settings s = settings(c, o);
  const std::string hash = config_hash(c);
  const std::string found = certificate.value("config_hash", std::string());
  if (found != hash) {
    json rep = header("verify", c, s);
    rep["result"] = {{"status", "error"}, {"message", "config hash mismatch"}, {"expected", hash}, {"found", found}};
    return {kPreconditionError, rep, "config hash mismatch: certificate has " + found + ", config is " + hash};
  }
  const json* wj = nullptr;
  if (certificate.contains("result") && certificate["result"].contains("classification") &&
      certificate["result"]["classification"].contains("witness"))
    wj = &certificate["result"]["classification"]["witness"];
  if (!wj) throw PreconditionError("certificate report carries no witness");
  const std::string path = "result.classification.witness";

  // fresh seed unless one is given
  if (!o.seed) {
    const std::uint64_t old = certificate.contains("seed") && certificate["seed"].is_number_unsigned()
                                  ? certificate["seed"].get<std::uint64_t>()
                                  : s.seed.value_or(0);
    s.seed = splitmix64(old + 1);
  }
  json rep = header("verify", c, s);
  const std::string type = need(*wj, path, "type").get<std::string>();
  VerificationRecord rec;
  try {
    if (type == "nonsquare") {
      if (!field_kind(c)) throw PreconditionError("nonsquare witness needs a Musielak-Orlicz space");
      rec = verify_nonsquare(*c.field, nonsquare_from_json(*wj, c.grid, path), s.samples, *s.seed);
    } else if (type == "certificate") {
      const FailureCertificate cert = certificate_from_json(*wj, c.grid, path);
      if (field_kind(c))
        rec = verify_field_certificate(*c.field, cert, s.samples, *s.seed);
      else if (c.sum)
        rec = verify_certificate(*c.sum, cert, s.samples, *s.seed);
      else
        rec = verify_certificate(*c.inter, cert, s.samples, *s.seed);
    } else {
      throw ConfigError(path + ".type", "unknown witness type " + type);
    }
  } catch (const VerificationError& e) {
    rep["result"] = violation(e);
    return {kViolation, rep, e.what()};
  }
  json rederived = classification(c, 0, 0);
  json mine = *wj;
  mine.erase("verification");
  if (rederived.contains("witness")) rederived["witness"].erase("verification");
  rep["result"] = {{"status", "pass"},
                   {"witness_type", type},
                   {"verification", to_json(rec)},
                   {"matches_rederived", rederived.contains("witness") && rederived["witness"] == mine}};
  return {kOk, rep, ""};
}

Outcome cmd_probe(const SpaceConfig& c, const Overrides& o) {
  const Settings s = settings(c, o);
  json rep = header("probe", c, s);
  json results = json::array();
  if (!c.probes.empty()) {
    const std::uint64_t seed = need_seed(s);
    const Oracles n = oracles(c, s.tol);
    for (std::size_t i = 0; i < c.probes.size(); ++i)
      results.push_back(run_probe(c.probes[i], "probes[" + std::to_string(i) + "]", c, n, s.samples,
                                  splitmix64(seed + i)));
  }
  rep["result"] = {{"probes", results}};
  return {kOk, rep, ""};
}

Outcome cmd_conjugate(const SpaceConfig& c, const Overrides& o) {
  const Settings s = settings(c, o);
  json rep = header("conjugate", c, s);
  if (field_kind(c)) {
    json cells = json::array();
    for (std::size_t i = 0; i < c.field->size(); ++i) {
      const OrliczCurve& m = c.field->curve(i);
      const OrliczCurve n = m.conjugate();
      cells.push_back({{"id", c.grid->id(i)},
                       {"curve", curve_to_json(m)},
                       {"describe", m.describe()},
                       {"params", params_to_json(m.params())},
                       {"conjugate", curve_to_json(n)},
                       {"conjugate_describe", n.describe()},
                       {"conjugate_params", params_to_json(n.params())}});
    }
    rep["result"] = {{"cells", cells}};
  } else if (c.sum) {
    const IntSpaceSpec d = reciprocal(*c.sum);
    rep["result"] = {{"koethe_dual",
                      {{"kind", "weighted_intersection"},
                       {"gamma", gamma_ids(d.gamma)},
                       {"w", write_vector(d.w.values())},
                       {"v", write_vector(d.v.values())}}}};
  } else {
    const SumSpaceSpec d = reciprocal(*c.inter);
    rep["result"] = {{"koethe_dual",
                      {{"kind", "weighted_sum"},
                       {"gamma", gamma_ids(d.gamma)},
                       {"v", write_vector(d.v.values())},
                       {"w", write_vector(d.w.values())}}}};
  }
  return {kOk, rep, ""};
}

Outcome run_command(const std::string& command, const std::string& config_path, const std::string& certificate_path,
                    const Overrides& o) {
  try {
    const SpaceConfig c = load_config(config_path);
    if (command == "norm") return cmd_norm(c, o);
    if (command == "classify") return cmd_classify(c, o);
    if (command == "probe") return cmd_probe(c, o);
    if (command == "conjugate") return cmd_conjugate(c, o);
    if (command == "verify") {
      if (certificate_path.empty()) throw ConfigError("--certificate", "verify needs a certificate report");
      return cmd_verify(c, parse_json_text(read_file(certificate_path), certificate_path), o);
    }
    return {kParseError, nullptr, "unknown command " + command};
  } catch (const ConfigError& e) {
    return {kParseError, nullptr, e.what()};
  } catch (const PreconditionError& e) {
    return {kPreconditionError, nullptr, e.what()};
  } catch (const DomainError& e) {
    return {kPreconditionError, nullptr, e.what()};
  } catch (const GridMismatch& e) {
    return {kPreconditionError, nullptr, e.what()};
  } catch (const VerificationError& e) {
    return {kViolation, nullptr, e.what()};
  } catch (const std::exception& e) {
    return {kFailure, nullptr, e.what()};
  }
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

}  // namespace mo::cli
