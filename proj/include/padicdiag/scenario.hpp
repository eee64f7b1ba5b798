#pragma once

// Scenario configuration, orchestration of the check suites and run reports.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace padicdiag {

using ordered_json = nlohmann::ordered_json;

/// Sectioned key-value configuration. Keys are addressed as "section.key".
struct ScenarioConfig {
  // [field]
  uint64_t p = 3;
  std::string extension = "auto";  // auto | trivial | a polynomial such as x^2-3
  int precision = 30;              // p-adic digits; a ramified field gets e times as many pi-digits
  // [representation]
  int k = 3;
  int c = 1;
  std::string theta1 = "trivial";  // trivial | quadratic | <conductor>:<value at the generator>
  std::string theta2 = "trivial";
  std::string lambda = "theorem";  // theorem | explicit | random | random-normalized
  int sign = 1;
  std::string lambda1 = "1", lambda2 = "1";  // rationals, used by lambda = explicit
  // [deformation]
  std::string x = "auto";  // auto (x = 1 + p^(a+j)) or a comma separated list of rationals
  int steps = 2;
  // [tree]
  int radius = 1;
  int reduction_n = 3;
  int reduction_radius = 2;  // reduction checks only up to this radius
  // [phimod]
  int approx_a = 1;
  int approx_j = 4;
  // [run]
  uint64_t seed = 20240601;
  int samples = 100;
  std::string mutation = "none";  // none | boundary-sign | pi-identity
  std::string label;
  // [suites]
  std::map<std::string, bool> suites = {{"axioms", true},  {"integral", true}, {"deformation", true},
                                        {"tree", true},    {"reduction", true}, {"phimod", true},
                                        {"approximation", true}};

  /// InvalidArgument for unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  static std::vector<std::string> keys();
  /// Consistency checks; InvalidArgument naming the offending field.
  void validate() const;
  /// Parses the sectioned file format on top of the current values;
  /// errors carry the line number.
  void load_string(const std::string& text, const std::string& origin = "<string>");
  void load_file(const std::string& path);
  void apply_preset(const std::string& name);
  static std::vector<std::string> presets();
  ordered_json to_json() const;
  std::string describe() const;
};

enum class CheckStatus { Pass, Fail, Skipped };
const char* status_name(CheckStatus s);
CheckStatus status_from_name(const std::string& s);

struct CheckRecord {
  std::string name;
  std::string suite;
  std::string scenario;
  ordered_json parameters = ordered_json::object();
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  ordered_json witnesses = ordered_json::object();
  double time_ms = 0;
  bool operator==(const CheckRecord&) const = default;
};

inline constexpr int kReportSchemaVersion = 1;

struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string kind = "scenario";  // scenario | verify
  std::string label;
  uint64_t seed = 0;
  ordered_json scenarios = ordered_json::array();  // configurations that were run
  std::vector<CheckRecord> checks;
  double total_ms = 0;

  bool passed() const;
  size_t count(CheckStatus s) const;
  ordered_json to_json(bool timing = true) const;
  static RunReport from_json(const ordered_json& j);
  static RunReport parse(const std::string& text);
  std::string to_text(bool timing = true) const;
  /// IoError with the path on failure.
  void write(const std::string& path, bool json, bool timing = true) const;
  void append(const RunReport& other);
  bool operator==(const RunReport&) const = default;
};

RunReport run_scenario(const ScenarioConfig& config);

enum class VerifyLevel { Quick, Full };
/// Scenario configurations making up a verification level.
std::vector<ScenarioConfig> verify_grid(VerifyLevel level, uint64_t seed, const std::string& mutation);
RunReport verify_suite(VerifyLevel level, uint64_t seed, const std::string& mutation = "none");

}  // namespace padicdiag
