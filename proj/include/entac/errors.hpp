#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace entac {

// Input outside its documented domain (out-of-range probability, negative bound, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Unknown node or other failed lookup.
struct LookupError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Numerical failure: non-finite integrand, quadrature depth exhaustion,
// non-converging inversion.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller broke a structural contract (e.g. a path set that is not edge-disjoint).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// Scenario file could not be parsed; position is 1-based.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line(line), column(column) {}
  std::size_t line = 0;
  std::size_t column = 0;
};

// Scenario parsed but violates invariants; every violation is listed.
struct ScenarioValidationError : std::runtime_error {
  explicit ScenarioValidationError(std::vector<std::string> violations_in)
      : std::runtime_error(join(violations_in)), violations(std::move(violations_in)) {}
  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "scenario validation failed:";
    for (const auto& s : v) {
      out += "\n  - " + s;
    }
    return out;
  }
};

}  // namespace entac
