#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "msk/error.hpp"
#include "msk/scenario.hpp"

namespace {

int run_check(const std::string& file, const std::optional<std::uint64_t>& seed, const std::optional<std::size_t>& samples,
              const std::string& json_out) {
  msk::Scenario s = msk::load_scenario(file);
  if (seed) s.sampling.seed = *seed;
  if (samples) s.sampling.count = *samples;
  msk::Report rep = msk::run_scenario(s);
  if (json_out == "-") {
    std::cout << rep.to_json();
  } else {
    std::cout << rep.render();
    if (!json_out.empty()) {
      std::ofstream out(json_out, std::ios::binary);
      if (!out) throw msk::Error(msk::ErrorKind::ScenarioError, "cannot write '" + json_out + "'");
      out << rep.to_json();
    }
  }
  return rep.exit_code();
}

int run_catalog(const std::string& name, const std::vector<std::string>& assignments) {
  std::map<std::string, std::string> params;
  for (const auto& a : assignments) {
    auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0)
      throw msk::Error(msk::ErrorKind::BadParameters, "expected key=value, got '" + a + "'");
    params[a.substr(0, eq)] = a.substr(eq + 1);
  }
  std::cout << msk::catalog_command(name, params);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for multisymplectic and higher Poisson structures"};
  app.require_subcommand(1);

  std::string file, json_out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  auto* check = app.add_subcommand("check", "Run the checks of a scenario file");
  check->add_option("file", file, "Scenario JSON")->required();
  check->add_option("--seed", seed, "Override the sampling seed");
  check->add_option("--samples", samples, "Override the number of sample points");
  check->add_option("--json", json_out, "Write the JSON report to this path (- for stdout)");

  std::string name;
  std::vector<std::string> assignments;
  auto* catalog = app.add_subcommand("catalog", "Print a catalog example as a scenario");
  catalog->add_option("name", name, "Catalog name")->required();
  catalog->add_option("params", assignments, "key=value parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check(file, seed, samples, json_out);
    return run_catalog(name, assignments);
  } catch (const msk::Error& e) {
    std::cerr << "msk: " << e.what() << "\n";
    return 2;
  }
}
