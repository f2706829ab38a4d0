#pragma once

#include <string>

#include "mohanet/scenario.hpp"
#include <json.hpp>

namespace mohanet {

/// Scenario validation failed; carries every violation.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Parses scenario text without validating. Unknown keys and malformed
/// syntax raise ParseError with line and column.
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& base_dir = ".");

/// Reads, parses and validates a scenario file. Relative paths inside the
/// file resolve against its directory.
ScenarioConfig parse_scenario(const std::string& path);

/// Fully resolved configuration, defaults included.
nlohmann::ordered_json scenario_to_json(const ScenarioConfig& config);

}  // namespace mohanet
