#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace tpa {

enum class ValidationLevel { fast, full };

ValidationLevel parse_validation_level(const std::string& text);

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  ValidationLevel level = ValidationLevel::fast;
  std::vector<CheckResult> checks;

  bool passed() const;
  nlohmann::ordered_json to_json() const;
};

/// fast: closed form against quadrature at a few dozen points plus the
/// exact identities. full: adds the dense oracle grids, the three-way Psi~
/// agreement, Plancherel norms, scaling-law fits and the T >> tau study.
/// Failures are report content; nothing throws.
ValidationReport run_validate(ValidationLevel level);

} // namespace tpa
