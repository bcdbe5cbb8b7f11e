#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmult/model.hpp"
#include "pmult/pseudomult.hpp"
#include "pmult/report.hpp"

namespace pmult {

/// Schema violations in a run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-system failures (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputConfig {
  std::string format = "json";  // "json" or "text"
  std::string path;             // empty = stdout
};

struct RunConfig {
  Json space;                          // validated space section
  std::optional<Json> pseudomultiplier;  // validated symbol section
  std::vector<Json> queries;           // validated query records, in order
  ToleranceConfig tolerances;
  OutputConfig output;
  std::string config_hash;  // FNV-1a of the source text
};

/// Parses and schema-validates a config document. Unknown keys anywhere in
/// the tree are rejected.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Builds the model described by the space section.
ModelSpace build_model_from_config(const RunConfig& cfg);

/// Builds the symbol description; requires the pseudomultiplier section.
PseudomultiplierSpec build_spec_from_config(const RunConfig& cfg,
                                            const ModelSpace& model);

/// Executes the queries in order against one built model (and one analysis,
/// when a pseudomultiplier section is present). Deterministic given the
/// config and tolerances. Numerical failures mark the query and clear `ok`.
Report run_config(const RunConfig& cfg);

}  // namespace pmult
