#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "msk/catalog.hpp"

namespace msk {

struct SamplingSpec {
  std::uint64_t seed = 1;
  std::size_t count = 10;
  long box = 10;
};

struct Scenario {
  std::string name;
  std::vector<ChartPtr> charts;
  std::vector<NamedObject> objects;
  SamplingSpec sampling;
  std::vector<CheckSpec> checks;

  const ObjectValue* find(const std::string& object) const;
};

/// Throws SyntaxError (with byte offsets), UnknownName, ScenarioError and the grammar errors of
/// the payload strings. Every check is validated (operation, argument kinds, mode) before returning.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);

/// Objects, charts and default checks of a catalog instance.
Scenario scenario_from_instance(const CatalogInstance& inst, const std::string& name);
/// `msk catalog`: the instance as scenario JSON. Throws UnknownCatalogName, BadParameters.
std::string catalog_command(const std::string& name, const std::map<std::string, std::string>& params);

enum class Outcome { Pass, Fail, Error };

struct CheckResult {
  CheckSpec spec;
  Outcome outcome = Outcome::Error;
  Verdict verdict;
  std::string error;
  double millis = 0;
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<CheckResult> results;

  /// 0 when every check passes, 1 otherwise.
  int exit_code() const;
  std::string to_json(bool timing = true) const;
  std::string render() const;
};

Report run_scenario(const Scenario& s, Exec exec = Exec::Parallel);

/// Operation names accepted in checks.
std::vector<std::string> scenario_operations();

}  // namespace msk
