#include "mo/cli/report.hpp"

namespace mo::cli {

namespace {

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(path + "." + key, "missing field");
  return j.at(key);
}

std::size_t read_size(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<std::string> read_ids(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of ids");
  std::vector<std::string> out;
  for (const json& e : j) {
    if (!e.is_string()) throw ConfigError(path, "expected an array of ids");
    out.push_back(e.get<std::string>());
  }
  return out;
}

StepFunction read_step(const json& j, const GridPtr& g, const std::string& path) {
  std::vector<double> v = read_vector(j, path);
  if (v.size() != g->size()) throw ConfigError(path, "length differs from the witness grid");
  return StepFunction(g, std::move(v));
}

}  // namespace

json grid_to_json(const GridPtr& g) { return {{"ids", g->ids()}, {"weights", write_vector(g->weights())}}; }

GridPtr grid_from_json(const json& j, const GridPtr& known, const std::string& path) {
  const std::vector<std::string> ids = read_ids(need(j, path, "ids"), path + ".ids");
  const std::vector<double> w = read_vector(need(j, path, "weights"), path + ".weights");
  if (known && ids == known->ids() && w == known->weights()) return known;
  try {
    return MeasureGrid::create(w, ids);
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

json to_json(const VerificationRecord& r) {
  return {{"performed", r.performed},
          {"seed", r.seed},
          {"samples_requested", r.samples_requested},
          {"samples_drawn", r.samples_drawn},
          {"samples_checked", r.samples_checked},
          {"max_observed", r.max_observed},
          {"bound", r.bound},
          {"violations", r.violations}};
}

VerificationRecord verification_from_json(const json& j, const std::string& path) {
  VerificationRecord r;
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  r.performed = j.value("performed", false);
  r.seed = j.value("seed", std::uint64_t{0});
  r.samples_requested = j.value("samples_requested", std::size_t{0});
  r.samples_drawn = j.value("samples_drawn", std::size_t{0});
  r.samples_checked = j.value("samples_checked", std::size_t{0});
  r.max_observed = j.contains("max_observed") ? read_number(j.at("max_observed"), path + ".max_observed") : 0.0;
  r.bound = j.contains("bound") ? read_number(j.at("bound"), path + ".bound") : 0.0;
  r.violations = j.value("violations", std::size_t{0});
  return r;
}

json to_json(const NonsquareWitness& w) {
  const NonsquareRecord& r = w.record;
  return {{"type", "nonsquare"},
          {"grid", grid_to_json(w.x.grid())},
          {"x", write_vector(w.x.values())},
          {"delta", w.delta},
          {"record",
           {{"split_cell", r.split_cell},
            {"parts", r.parts},
            {"cell", r.cell},
            {"cell_id", r.cell_id},
            {"a", r.a},
            {"b", r.b},
            {"sigma0", r.sigma0},
            {"sigma1", r.sigma1},
            {"sigma2", r.sigma2},
            {"eta", r.eta},
            {"gamma", r.gamma},
            {"delta_modular", r.delta_modular},
            {"epsilon", r.epsilon},
            {"filler_kind", r.filler_kind},
            {"filler_level", r.filler_level},
            {"filler_cells", r.filler_cells}}},
          {"verification", to_json(w.verification)}};
}

NonsquareWitness nonsquare_from_json(const json& j, const GridPtr& known, const std::string& path) {
  NonsquareWitness w;
  const GridPtr g = grid_from_json(need(j, path, "grid"), known, path + ".grid");
  w.x = read_step(need(j, path, "x"), g, path + ".x");
  w.delta = read_number(need(j, path, "delta"), path + ".delta");
  const std::string rp = path + ".record";
  const json& r = need(j, path, "record");
  NonsquareRecord& rec = w.record;
  rec.split_cell = read_size(need(r, rp, "split_cell"), rp + ".split_cell");
  rec.parts = read_size(need(r, rp, "parts"), rp + ".parts");
  rec.cell = read_size(need(r, rp, "cell"), rp + ".cell");
  rec.cell_id = need(r, rp, "cell_id").get<std::string>();
  rec.a = read_number(need(r, rp, "a"), rp + ".a");
  rec.b = read_number(need(r, rp, "b"), rp + ".b");
  rec.sigma0 = read_number(need(r, rp, "sigma0"), rp + ".sigma0");
  rec.sigma1 = read_number(need(r, rp, "sigma1"), rp + ".sigma1");
  rec.sigma2 = read_number(need(r, rp, "sigma2"), rp + ".sigma2");
  rec.eta = read_number(need(r, rp, "eta"), rp + ".eta");
  rec.gamma = read_number(need(r, rp, "gamma"), rp + ".gamma");
  rec.delta_modular = read_number(need(r, rp, "delta_modular"), rp + ".delta_modular");
  rec.epsilon = read_number(need(r, rp, "epsilon"), rp + ".epsilon");
  rec.filler_kind = need(r, rp, "filler_kind").get<std::string>();
  rec.filler_level = read_number(need(r, rp, "filler_level"), rp + ".filler_level");
  rec.filler_cells = read_ids(need(r, rp, "filler_cells"), rp + ".filler_cells");
  if (j.contains("verification")) w.verification = verification_from_json(j.at("verification"), path + ".verification");
  return w;
}

json to_json(const FailureCertificate& c) {
  json consts = json::object();
  for (const auto& [k, v] : c.constants) consts[k] = write_number(v);
  json j{{"type", "certificate"},
         {"kind", c.kind == CertificateKind::Sum ? "sum" : "intersection"},
         {"grid", grid_to_json(c.x.grid())},
         {"x", write_vector(c.x.values())},
         {"f", write_vector(c.f.values())},
         {"epsilon", c.epsilon},
         {"constants", consts},
         {"sets", c.sets},
         {"verification", to_json(c.verification)}};
  if (c.g) j["g"] = write_vector(c.g->values());
  return j;
}

FailureCertificate certificate_from_json(const json& j, const GridPtr& known, const std::string& path) {
  FailureCertificate c;
  const std::string kind = need(j, path, "kind").get<std::string>();
  if (kind == "sum")
    c.kind = CertificateKind::Sum;
  else if (kind == "intersection")
    c.kind = CertificateKind::Intersection;
  else
    throw ConfigError(path + ".kind", "unknown certificate kind " + kind);
  const GridPtr g = grid_from_json(need(j, path, "grid"), known, path + ".grid");
  c.x = read_step(need(j, path, "x"), g, path + ".x");
  c.f = read_step(need(j, path, "f"), g, path + ".f");
  if (j.contains("g")) c.g = read_step(j.at("g"), g, path + ".g");
  c.epsilon = read_number(need(j, path, "epsilon"), path + ".epsilon");
  const json& consts = need(j, path, "constants");
  if (!consts.is_object()) throw ConfigError(path + ".constants", "expected an object");
  for (auto it = consts.begin(); it != consts.end(); ++it)
    c.constants[it.key()] = read_number(it.value(), path + ".constants." + it.key());
  const json& sets = need(j, path, "sets");
  if (!sets.is_object()) throw ConfigError(path + ".sets", "expected an object");
  for (auto it = sets.begin(); it != sets.end(); ++it)
    c.sets[it.key()] = read_ids(it.value(), path + ".sets." + it.key());
  if (j.contains("verification")) c.verification = verification_from_json(j.at("verification"), path + ".verification");
  return c;
}

json to_json(const ClassificationReport& r) {
  json ev = json::object();
  for (const auto& [k, v] : r.evidence) ev[k] = write_number(v);
  json j{{"verdict", to_string(r.verdict)},
         {"canonical_form", to_string(r.canonical_form)},
         {"leaf", r.leaf},
         {"evidence", ev},
         {"dual_form", r.dual_form}};
  if (!r.note.empty()) j["note"] = r.note;
  if (const auto* w = std::get_if<NonsquareWitness>(&r.witness)) j["witness"] = to_json(*w);
  if (const auto* c = std::get_if<FailureCertificate>(&r.witness)) j["witness"] = to_json(*c);
  return j;
}

}  // namespace mo::cli
