#include "mo/cli/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "mo/errors.hpp"
#include "mo/numeric.hpp"
#include "mo/sampling.hpp"

namespace mo::cli {

std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::Musielak: return "musielak";
    case SpaceKind::Nakano: return "nakano";
    case SpaceKind::Orlicz: return "orlicz";
    case SpaceKind::WeightedSum: return "weighted_sum";
    case SpaceKind::WeightedIntersection: return "weighted_intersection";
  }
  return "?";
}

double read_number(const json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInf;
  if (!j.is_number()) throw ConfigError(path, "expected a number or \"inf\"");
  const double v = j.get<double>();
  if (std::isnan(v)) throw ConfigError(path, "NaN is not allowed");
  return v;
}

json write_number(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  if (std::isinf(v)) return "-inf";
  return v;
}

std::vector<double> read_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

json write_vector(const std::vector<double>& v) {
  json a = json::array();
  for (double t : v) a.push_back(write_number(t));
  return a;
}

namespace {

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
}

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(path.empty() ? key : path + "." + key, "missing field");
  return j.at(key);
}

std::string sub(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

std::uint64_t read_u64(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

// Turns module errors into config errors at `path`.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  }
}

GridPtr build_grid(const json& j) {
  only_keys(j, "grid", {"weights", "ids", "generator"});
  std::vector<std::string> ids;
  if (j.contains("ids")) {
    const json& a = j.at("ids");
    if (!a.is_array()) throw ConfigError("grid.ids", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) ids.push_back(read_string(a[i], "grid.ids[" + std::to_string(i) + "]"));
  }
  std::vector<double> w;
  if (j.contains("weights") == j.contains("generator"))
    throw ConfigError("grid", "give exactly one of weights or generator");
  if (j.contains("weights")) {
    w = read_vector(j.at("weights"), "grid.weights");
  } else {
    const json& g = j.at("generator");
    only_keys(g, "grid.generator", {"cells", "lo", "hi", "seed"});
    const std::uint64_t n = read_u64(need(g, "grid.generator", "cells"), "grid.generator.cells");
    const double lo = read_number(need(g, "grid.generator", "lo"), "grid.generator.lo");
    const double hi = read_number(need(g, "grid.generator", "hi"), "grid.generator.hi");
    const std::uint64_t seed = read_u64(need(g, "grid.generator", "seed"), "grid.generator.seed");
    if (n == 0 || n > 100000) throw ConfigError("grid.generator.cells", "must be in [1, 100000]");
    if (!(lo > 0.0 && lo <= hi && std::isfinite(hi))) throw ConfigError("grid.generator", "need 0 < lo <= hi < inf");
    for (std::uint64_t i = 0; i < n; ++i) {
      auto eng = sample_engine(seed, i);
      w.push_back(std::uniform_real_distribution<double>(lo, hi)(eng));
    }
  }
  return at_path("grid", [&] { return MeasureGrid::create(w, ids); });
}

json canonical_grid(const json& j) {
  json out;
  if (j.contains("ids")) out["ids"] = j.at("ids");
  if (j.contains("weights")) {
    out["weights"] = write_vector(read_vector(j.at("weights"), "grid.weights"));
  } else {
    const json& g = j.at("generator");
    out["generator"] = {{"cells", g.at("cells").get<std::uint64_t>()},
                        {"lo", read_number(g.at("lo"), "")},
                        {"hi", read_number(g.at("hi"), "")},
                        {"seed", g.at("seed").get<std::uint64_t>()}};
  }
  return out;
}

OrliczCurve random_curve(std::uint64_t seed, std::size_t cell, const std::vector<std::string>& families) {
  auto eng = sample_engine(seed, cell);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::string fam = families[eng() % families.size()];
  if (fam == "power") return OrliczCurve::power(1.2 + 2.8 * u(eng));
  if (fam == "linear") return OrliczCurve::linear(0.2 + 2.8 * u(eng));
  if (fam == "indicator") return OrliczCurve::indicator(0.2 + 2.8 * u(eng));
  const std::size_t k = 1 + eng() % 4;
  std::vector<double> bp{0.0}, sl;
  double slope = u(eng) < 0.3 ? 0.0 : 0.1 + u(eng);
  for (std::size_t j = 0; j < k; ++j) {
    bp.push_back(bp.back() + 0.1 + 2.0 * u(eng));
    sl.push_back(slope);
    slope += 0.1 + 2.0 * u(eng);
  }
  if (u(eng) < 0.5) bp.back() = kInf;
  return OrliczCurve::piecewise_linear(bp, sl);
}

const std::vector<std::string> kFamilies{"power", "linear", "indicator", "piecewise_linear"};

std::vector<OrliczCurve> build_curves(const json& j, const std::string& path, std::size_t n) {
  std::vector<OrliczCurve> out;
  if (j.contains("curves") == j.contains("generator"))
    throw ConfigError(path, "give exactly one of curves or generator");
  if (j.contains("curves")) {
    const json& a = j.at("curves");
    const std::string p = sub(path, "curves");
    if (!a.is_array()) throw ConfigError(p, "expected an array");
    if (a.size() != n) throw ConfigError(p, "need one curve per cell (" + std::to_string(n) + ")");
    for (std::size_t i = 0; i < n; ++i) out.push_back(curve_from_json(a[i], p + "[" + std::to_string(i) + "]"));
    return out;
  }
  const json& g = j.at("generator");
  const std::string p = sub(path, "generator");
  only_keys(g, p, {"seed", "families"});
  const std::uint64_t seed = read_u64(need(g, p, "seed"), sub(p, "seed"));
  std::vector<std::string> fam = kFamilies;
  if (g.contains("families")) {
    fam.clear();
    const json& a = g.at("families");
    if (!a.is_array() || a.empty()) throw ConfigError(sub(p, "families"), "expected a non-empty array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string q = sub(p, "families") + "[" + std::to_string(i) + "]";
      fam.push_back(read_string(a[i], q));
      if (std::find(kFamilies.begin(), kFamilies.end(), fam.back()) == kFamilies.end())
        throw ConfigError(q, "unknown family " + fam.back());
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_curve(seed, i, fam));
  return out;
}

CellSet read_gamma(const json& j, const std::string& path, const GridPtr& g) {
  if (j.is_string() && j.get<std::string>() == "all") return CellSet::all(g);
  if (!j.is_array()) throw ConfigError(path, "expected \"all\" or an array of cell ids");
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < j.size(); ++i) ids.push_back(read_string(j[i], path + "[" + std::to_string(i) + "]"));
  return at_path(path, [&] { return CellSet::from_ids(g, ids); });
}

StepFunction read_step(const json& j, const std::string& path, const GridPtr& g) {
  const std::vector<double> v = read_vector(j, path);
  if (v.size() != g->size()) throw ConfigError(path, "need one value per cell (" + std::to_string(g->size()) + ")");
  return StepFunction(g, v);
}

StepFunction build_x(const json& j, const GridPtr& g) {
  if (j.is_array()) return read_step(j, "x", g);
  only_keys(j, "x", {"generator"});
  const json& gen = need(j, "x", "generator");
  only_keys(gen, "x.generator", {"seed", "scale"});
  const std::uint64_t seed = read_u64(need(gen, "x.generator", "seed"), "x.generator.seed");
  const double scale = gen.contains("scale") ? read_number(gen.at("scale"), "x.generator.scale") : 1.0;
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("x.generator.scale", "must be positive and finite");
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto eng = sample_engine(seed, i);
    v[i] = std::uniform_real_distribution<double>(-scale, scale)(eng);
  }
  return StepFunction(g, v);
}

}  // namespace

json curve_to_json(const OrliczCurve& c) {
  switch (c.kind()) {
    case OrliczCurve::Kind::Power: return {{"family", "power"}, {"p", c.p()}};
    case OrliczCurve::Kind::Linear: return {{"family", "linear"}, {"c", c.scale()}};
    case OrliczCurve::Kind::Indicator: return {{"family", "indicator"}, {"c", c.scale()}};
    case OrliczCurve::Kind::PiecewiseLinear:
      return {{"family", "piecewise_linear"},
              {"breakpoints", write_vector(c.breakpoints())},
              {"slopes", write_vector(c.slopes())}};
  }
  return {};
}

OrliczCurve curve_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected a curve object");
  const std::string fam = read_string(need(j, path, "family"), sub(path, "family"));
  return at_path(path, [&] {
    if (fam == "power") {
      only_keys(j, path, {"family", "p"});
      return OrliczCurve::power(read_number(need(j, path, "p"), sub(path, "p")));
    }
    if (fam == "linear" || fam == "indicator") {
      only_keys(j, path, {"family", "c"});
      const double c = read_number(need(j, path, "c"), sub(path, "c"));
      return fam == "linear" ? OrliczCurve::linear(c) : OrliczCurve::indicator(c);
    }
    if (fam == "piecewise_linear") {
      only_keys(j, path, {"family", "breakpoints", "slopes"});
      return OrliczCurve::piecewise_linear(read_vector(need(j, path, "breakpoints"), sub(path, "breakpoints")),
                                           read_vector(need(j, path, "slopes"), sub(path, "slopes")));
    }
    throw ConfigError(sub(path, "family"), "unknown family " + fam);
  });
}

SpaceConfig parse_config(const json& j) {
  only_keys(j, "", {"grid", "space", "x", "probes", "seed", "samples", "tolerance"});
  SpaceConfig c;
  c.grid_source = need(j, "", "grid");
  c.space_source = need(j, "", "space");
  c.grid = build_grid(c.grid_source);
  const std::size_t n = c.grid->size();

  const json& s = c.space_source;
  if (!s.is_object()) throw ConfigError("space", "expected an object");
  const std::string kind = read_string(need(s, "space", "kind"), "space.kind");
  json canon{{"kind", kind}};
  if (kind == "musielak") {
    c.kind = SpaceKind::Musielak;
    only_keys(s, "space", {"kind", "curves", "generator"});
    c.field = MusielakField(c.grid, build_curves(s, "space", n));
    if (s.contains("curves")) {
      canon["curves"] = json::array();
      for (const OrliczCurve& cv : c.field->curves()) canon["curves"].push_back(curve_to_json(cv));
    } else {
      canon["generator"] = s.at("generator");
    }
  } else if (kind == "nakano") {
    c.kind = SpaceKind::Nakano;
    only_keys(s, "space", {"kind", "exponents"});
    const std::vector<double> p = read_vector(need(s, "space", "exponents"), "space.exponents");
    if (p.size() != n) throw ConfigError("space.exponents", "need one exponent per cell (" + std::to_string(n) + ")");
    for (std::size_t i = 0; i < n; ++i)
      if (!(p[i] >= 1.0)) throw ConfigError("space.exponents[" + std::to_string(i) + "]", "exponent must lie in [1, inf]");
    c.field = at_path("space.exponents", [&] { return MusielakField::nakano(c.grid, p); });
    canon["exponents"] = write_vector(p);
  } else if (kind == "orlicz") {
    c.kind = SpaceKind::Orlicz;
    only_keys(s, "space", {"kind", "curve"});
    const OrliczCurve cv = curve_from_json(need(s, "space", "curve"), "space.curve");
    c.field = MusielakField::constant(c.grid, cv);
    canon["curve"] = curve_to_json(cv);
  } else if (kind == "weighted_sum" || kind == "weighted_intersection") {
    only_keys(s, "space", {"kind", "gamma", "v", "w"});
    const CellSet gamma = read_gamma(need(s, "space", "gamma"), "space.gamma", c.grid);
    const StepFunction v = read_step(need(s, "space", "v"), "space.v", c.grid);
    const StepFunction w = read_step(need(s, "space", "w"), "space.w", c.grid);
    canon["gamma"] = s.at("gamma");
    canon["v"] = write_vector(v.values());
    canon["w"] = write_vector(w.values());
    if (kind == "weighted_sum") {
      c.kind = SpaceKind::WeightedSum;
      c.sum = SumSpaceSpec{c.grid, gamma, v, w};
      at_path("space", [&] { c.sum->validate(); });
    } else {
      c.kind = SpaceKind::WeightedIntersection;
      c.inter = IntSpaceSpec{c.grid, gamma, w, v};
      at_path("space", [&] { c.inter->validate(); });
    }
  } else {
    throw ConfigError("space.kind", "unknown space kind " + kind);
  }
  c.grid_source = canonical_grid(c.grid_source);
  c.space_source = std::move(canon);

  if (j.contains("x")) {
    c.x_source = j.at("x");
    c.x = build_x(*c.x_source, c.grid);
  }
  if (j.contains("probes")) {
    if (!j.at("probes").is_array()) throw ConfigError("probes", "expected an array");
    c.probes = j.at("probes");
  }
  if (j.contains("seed")) c.seed = read_u64(j.at("seed"), "seed");
  if (j.contains("samples")) c.samples = static_cast<std::size_t>(read_u64(j.at("samples"), "samples"));
  if (j.contains("tolerance")) {
    c.tolerance = read_number(j.at("tolerance"), "tolerance");
    if (!(*c.tolerance > 0.0 && *c.tolerance < 1.0)) throw ConfigError("tolerance", "must lie in (0, 1)");
  }
  return c;
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line and column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col), "invalid JSON");
  }
}

SpaceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(parse_json_text(ss.str(), path));
}

json to_json(const SpaceConfig& c) {
  json j;
  j["grid"] = c.grid_source;
  j["space"] = c.space_source;
  if (c.x_source) j["x"] = *c.x_source;
  if (!c.probes.empty()) j["probes"] = c.probes;
  if (c.seed) j["seed"] = *c.seed;
  if (c.samples) j["samples"] = *c.samples;
  if (c.tolerance) j["tolerance"] = *c.tolerance;
  return j;
}

std::string config_hash(const SpaceConfig& c) {
  const std::string text = json{{"grid", c.grid_source}, {"space", c.space_source}}.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

}  // namespace mo::cli
