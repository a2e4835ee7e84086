#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rikitake/integrate.hpp"
#include "rikitake/systems.hpp"

namespace rikitake::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInvalidInput = 2, kRuntimeDomain = 3 };

/// Invalid configuration; field() is the dotted path of the offending key.
class ConfigError : public ParameterError {
public:
  ConfigError(std::string field, const std::string& what)
      : ParameterError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

struct EmitFlags {
  bool csv = true;
  bool svg = true;
  bool report = true;
};

/// Config for `simulate`:
///   { "system": id, "params": {..}, "initial": [..],
///     "integrator": { "method", "h", "abs_tol", "rel_tol", "t_end", "max_steps", "sample_dt", "sample_stride" },
///     "output": { "dir", "name", "csv", "svg", "report", "projections": ["xz", ...] } }
/// Only "system" is required. For `couple` the "system"/"params" pair is replaced by "lambda" and "eta",
/// and the start may be given as "initial" (two-copy state) or "initial_cluster" (x+, y+, z+, x1', y1', z1').
struct RunConfig {
  std::string system;
  Params params;
  std::optional<Vector> initial;
  IntegratorConfig integrator;
  std::string out_dir = "out";
  std::string name;
  EmitFlags emit;
  std::vector<std::string> projections;

  // couple only
  int lambda = 1;
  double eta = 1;
  bool initial_is_cluster = false;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig parse_couple_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path, bool couple);
nlohmann::json to_json(const RunConfig& c, bool couple);
/// FNV-1a of the canonical JSON of the effective config.
std::string config_hash(const RunConfig& c, bool couple);

/// Splits "xz", "x'z'" or "x:z" into two coordinate indices.
std::pair<int, int> parse_projection(const std::string& proj, const std::vector<std::string>& coords);

struct Preset {
  std::string name;
  std::string system;
  std::vector<double> etas;
  std::vector<std::string> projections;
};
const std::vector<Preset>& presets();

struct VerifyResult {
  std::string scope;
  std::string property;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
  std::string detail;
};
/// scope is "all" or a catalog id; inject_broken adds a fixture with a non-Poisson bracket.
std::vector<VerifyResult> verify(const std::string& scope, bool inject_broken = false);

/// Entry point shared by the executable and the tests; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rikitake::cli
