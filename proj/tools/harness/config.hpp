#pragma once

// Flat "key = value" run configuration shared by every harness command.

#include "crossdiff/diagnostics/report.hpp"
#include "crossdiff/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace crossdiff::harness {

struct RunConfig {
  double nu = 2.0;
  double epsilon = 4e-3;
  std::size_t n_cells = 128;
  double t_final = 0.25;
  double cfl = 0.4;
  double rho_floor = 1e-10;
  std::string scenario = "mixed_oscillatory";
  ScenarioParams scenario_params;
  /// Empty selects the default entropy indices.
  std::vector<double> s_list;
  std::size_t ladder_rungs = 3;
  std::size_t window_t = 4;
  std::size_t window_x = 8;
  /// nullopt means "auto".
  std::optional<double> xi_threshold;
  std::size_t snapshot_every = 100;
  std::size_t n_outputs = 40;
  int test_modes = 4;
  std::filesystem::path output_dir = "crossdiff_out";
  bool emit_phi_table = false;

  [[nodiscard]] Parameters parameters() const;
  /// Single-run scheme settings (snapshot stride, no fixed output times).
  [[nodiscard]] SchemeConfig scheme() const;
  /// Ladder base settings (n_outputs shared output times).
  [[nodiscard]] SchemeConfig ladder_scheme() const;
  [[nodiscard]] diagnostics::DiagnosticsConfig diagnostics() const;
};

struct KeyDoc {
  const char* key;
  const char* fallback;
  const char* unit;
  const char* help;
};

/// Every accepted key, in --help order.
[[nodiscard]] const std::vector<KeyDoc>& config_keys();

/// Throws ConfigError on syntax errors, unknown or repeated keys and values
/// that violate a module precondition.
[[nodiscard]] RunConfig parse_config(std::istream& in);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Comma-separated list of numbers.
[[nodiscard]] std::vector<double> parse_number_list(const std::string& text);

}  // namespace crossdiff::harness
