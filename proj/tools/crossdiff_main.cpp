#include "harness/commands.hpp"
#include "harness/config.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <string>

namespace {

std::string key_table() {
  std::string text = "Config file keys (key = value, # starts a comment):\n";
  char line[200];
  for (const auto& k : crossdiff::harness::config_keys()) {
    std::snprintf(line, sizeof line, "  %-18s default %-18s [%s] %s\n", k.key, k.fallback, k.unit,
                  k.help);
    text += line;
  }
  text += "\nExit codes: 0 ok, 1 config or domain error, 2 invariant violation.\n";
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upwind finite-volume solver and admissibility diagnostics for the two-species "
               "cross-diffusion system"};
  app.footer(key_table());
  app.require_subcommand(1);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "run one trajectory and write snapshots");
  simulate->add_option("config", config_path, "config file")->required();

  auto* ladder = app.add_subcommand("ladder", "run a refinement ladder and its diagnostics");
  ladder->add_option("config", config_path, "config file")->required();

  double nu = 2.0;
  std::vector<double> s_values{0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3};
  int n_nodes = 201;
  std::string out_path = "phi_table.csv";
  auto* table = app.add_subcommand("phi-table", "tabulate phi_s on equispaced activities");
  table->add_option("--nu", nu, "mobility ratio")->capture_default_str();
  table->add_option("--s", s_values, "entropy indices")->delimiter(',')->capture_default_str();
  table->add_option("--nodes", n_nodes, "activities per curve")->capture_default_str();
  table->add_option("--out", out_path, "output CSV")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR " << crossdiff::harness::kExitConfig << ": " << e.what() << '\n';
    return crossdiff::harness::kExitConfig;
  }

  if (simulate->parsed()) {
    return crossdiff::harness::cli_simulate(config_path, std::cout, std::cerr);
  }
  if (ladder->parsed()) {
    return crossdiff::harness::cli_ladder(config_path, std::cout, std::cerr);
  }
  return crossdiff::harness::cli_phi_table(nu, s_values, n_nodes, out_path, std::cerr);
}
