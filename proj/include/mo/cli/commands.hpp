#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mo/cli/config.hpp"

namespace mo::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kReportFormat = 1;

enum ExitCode : int { kOk = 0, kFailure = 1, kParseError = 2, kPreconditionError = 3, kViolation = 4 };

// Command-line overrides; they win over the config values.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> tol;
};

struct Outcome {
  int exit_code = kOk;
  json report;        // null when the command failed before a report existed
  std::string error;  // empty on success
};

Outcome cmd_norm(const SpaceConfig& c, const Overrides& o);
Outcome cmd_classify(const SpaceConfig& c, const Overrides& o);
// `certificate` is a report written by classify.
Outcome cmd_verify(const SpaceConfig& c, const json& certificate, const Overrides& o);
Outcome cmd_probe(const SpaceConfig& c, const Overrides& o);
Outcome cmd_conjugate(const SpaceConfig& c, const Overrides& o);

// Loads the config (and certificate for verify) and maps exceptions to exit codes.
Outcome run_command(const std::string& command, const std::string& config_path, const std::string& certificate_path,
                    const Overrides& o);

// Pretty JSON with a trailing newline.
std::string render(const json& report);

}  // namespace mo::cli
