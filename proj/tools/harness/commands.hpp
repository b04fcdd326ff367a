#pragma once

// Harness commands. Each returns the process exit code: 0 success, 1 config
// or domain error, 2 invariant violation or a failed hard ladder check.
// Errors are reported on `err` as a single "ERROR <code>: <message>" line.

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace crossdiff::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInvariant = 2;

/// Writes snapshot_<k>.csv, snapshot_times.csv, step_log.csv and
/// basic_checks.csv into output_dir.
int cli_simulate(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

/// Writes admissibility.csv, residuals.csv and measures.csv into output_dir
/// and prints the check table on `out`.
int cli_ladder(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

/// CSV a,s,phi on n_nodes equispaced activities per s.
int cli_phi_table(double nu, const std::vector<double>& s_values, int n_nodes,
                  const std::filesystem::path& out_path, std::ostream& err);

}  // namespace crossdiff::harness
