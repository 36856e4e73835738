#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mo/interpolation.hpp"
#include "mo/musielak.hpp"

namespace mo::cli {

using json = nlohmann::json;

// Bad config content; `path` points at the offending field ("space.curves[2].p").
struct ConfigError : std::runtime_error {
  ConfigError(std::string path, const std::string& msg)
      : std::runtime_error(path.empty() ? msg : path + ": " + msg), path(std::move(path)) {}
  std::string path;
};

enum class SpaceKind { Musielak, Nakano, Orlicz, WeightedSum, WeightedIntersection };
std::string to_string(SpaceKind k);

// Parsed config. The *_source members keep the original form (explicit list
// or generator) so that serialisation round-trips.
struct SpaceConfig {
  json grid_source;
  json space_source;
  std::optional<json> x_source;
  json probes = json::array();
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> tolerance;

  GridPtr grid;
  SpaceKind kind = SpaceKind::Musielak;
  std::optional<MusielakField> field;  // Musielak, Nakano, Orlicz
  std::optional<SumSpaceSpec> sum;
  std::optional<IntSpaceSpec> inter;
  std::optional<StepFunction> x;
};

SpaceConfig parse_config(const json& j);
// Reads a file; JSON syntax errors become ConfigError with line and column.
SpaceConfig load_config(const std::string& path);
json parse_json_text(const std::string& text, const std::string& origin);

// Canonical form: sorted keys, "inf" for infinities.
json to_json(const SpaceConfig& c);
// SHA-256 (hex) of the canonical grid and space sections.
std::string config_hash(const SpaceConfig& c);

// Number or the string "inf".
double read_number(const json& j, const std::string& path);
json write_number(double v);
std::vector<double> read_vector(const json& j, const std::string& path);
json write_vector(const std::vector<double>& v);

json curve_to_json(const OrliczCurve& c);
OrliczCurve curve_from_json(const json& j, const std::string& path);

}  // namespace mo::cli
