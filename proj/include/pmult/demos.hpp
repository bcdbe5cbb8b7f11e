#pragma once

#include <string>
#include <vector>

#include "pmult/report.hpp"

namespace pmult {

struct DemoResult {
  std::string name;
  bool passed = false;
  Json report;          // computed values next to the stored expectations
  std::string message;  // first failed expectation, empty when passed
};

/// Names of the bundled worked-example fixtures, in catalog order.
std::vector<std::string> demo_names();

/// Runs one fixture and grades it against its stored expected values.
/// Unknown names raise ConfigError with the catalog in the message.
DemoResult run_demo(const std::string& name);

}  // namespace pmult
