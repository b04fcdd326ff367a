#include "commands.hpp"

#include "config.hpp"

#include "crossdiff/diagnostics/report.hpp"
#include "crossdiff/entropy_family.hpp"
#include "crossdiff/io.hpp"

#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>

namespace crossdiff::harness {

namespace {

int report_error(std::ostream& err, int code, const std::string& message) {
  err << "ERROR " << code << ": " << message << '\n';
  return code;
}

// Maps the library exceptions onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InvariantViolation& e) {
    return report_error(err, kExitInvariant, e.what());
  } catch (const InvalidDensity& e) {
    return report_error(err, kExitInvariant, e.what());
  } catch (const ConfigError& e) {
    return report_error(err, kExitConfig, e.what());
  } catch (const DomainError& e) {
    return report_error(err, kExitConfig, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(err, kExitConfig, e.what());
  }
}

void write_phi_tables(const RunConfig& config, const Parameters& params) {
  std::vector<EntropyIndex> indices;
  if (config.s_list.empty()) {
    indices = default_entropy_indices(params);
  } else {
    for (double s : config.s_list) {
      indices.emplace_back(s, params);
    }
  }
  for (const EntropyIndex& s : indices) {
    std::ostringstream os;
    EntropyTable(s, params).write_csv(os);
    char name[64];
    std::snprintf(name, sizeof name, "phi_table_s%g.csv", s.value());
    io::write_file_atomically(config.output_dir / name, os.str());
  }
}

template <class Writer>
void write_csv(const std::filesystem::path& path, Writer writer) {
  std::ostringstream os;
  writer(os);
  io::write_file_atomically(path, os.str());
}

}  // namespace

int cli_simulate(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = load_config(config_path);
    const Parameters params = config.parameters();
    const Trajectory traj = run(config.scheme(), params);
    const diagnostics::BasicChecks basic = diagnostics::check_basic(traj, params);

    std::filesystem::create_directories(config.output_dir);
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
      char name[40];
      std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
      write_csv(config.output_dir / name,
                [&](std::ostream& os) { io::write_snapshot(os, traj.snapshots[k], params); });
    }
    write_csv(config.output_dir / "snapshot_times.csv", [&](std::ostream& os) {
      os << "index,t\n";
      for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        os << k << ',' << io::format_double(traj.snapshots[k].t) << '\n';
      }
    });
    write_csv(config.output_dir / "step_log.csv",
              [&](std::ostream& os) { io::write_step_log(os, traj); });
    write_csv(config.output_dir / "basic_checks.csv", [&](std::ostream& os) {
      os << "check,value\n";
      os << "mass_drift," << io::format_double(basic.mass_drift) << '\n';
      os << "max_rho_growth," << io::format_double(basic.max_rho_growth) << '\n';
      os << "entropy_step_increase," << io::format_double(basic.entropy_increase) << '\n';
      os << "initial_entropy," << io::format_double(basic.initial_entropy) << '\n';
      os << "activity_clamp," << io::format_double(traj.max_clamp) << '\n';
      os << "clipped_mass," << io::format_double(traj.clipped_mass) << '\n';
    });
    if (config.emit_phi_table && !params.equal_mobility()) {
      write_phi_tables(config, params);
    }
    out << "steps " << traj.step_log.size() << ", snapshots " << traj.snapshots.size()
        << ", mass drift " << io::format_double(basic.mass_drift) << '\n';
    return kExitOk;
  });
}

int cli_ladder(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = load_config(config_path);
    if (config.ladder_rungs < 3) {
      throw ConfigError("ladder_rungs must be at least 3");
    }
    const Parameters params = config.parameters();
    if (params.equal_mobility()) {
      throw ConfigError("ladder diagnostics need nu != 1");
    }
    const RefinementLadder ladder =
        refine_sequence(config.ladder_scheme(), params, config.ladder_rungs, true);
    const diagnostics::AdmissibilityReport report =
        diagnostics::build_report(ladder, params, config.diagnostics());

    std::filesystem::create_directories(config.output_dir);
    write_csv(config.output_dir / "admissibility.csv",
              [&](std::ostream& os) { diagnostics::write_admissibility_csv(os, report); });
    write_csv(config.output_dir / "residuals.csv",
              [&](std::ostream& os) { diagnostics::write_residuals_csv(os, report); });
    write_csv(config.output_dir / "measures.csv",
              [&](std::ostream& os) { diagnostics::write_measures_csv(os, report); });
    if (config.emit_phi_table) {
      write_phi_tables(config, params);
    }

    char line[160];
    out << "status rung  kind   check                                   value\n";
    for (const diagnostics::Check& c : report.checks) {
      const std::string rung = c.rung ? std::to_string(*c.rung) : std::string("all");
      std::snprintf(line, sizeof line, "%-6s %-5s %-6s %-39s %.6g\n", c.pass ? "PASS" : "FAIL",
                    rung.c_str(), c.hard ? "hard" : "trend", c.name.c_str(), c.value);
      out << line;
    }
    out << "hard checks " << (report.hard_pass() ? "PASS" : "FAIL") << ", all checks "
        << (report.all_pass() ? "PASS" : "FAIL") << '\n';
    if (!report.hard_pass()) {
      return report_error(err, kExitInvariant, "hard admissibility check failed");
    }
    return kExitOk;
  });
}

int cli_phi_table(double nu, const std::vector<double>& s_values, int n_nodes,
                  const std::filesystem::path& out_path, std::ostream& err) {
  return guarded(err, [&] {
    if (n_nodes < 2) {
      throw ConfigError("n_nodes must be at least 2");
    }
    if (s_values.empty()) {
      throw ConfigError("empty s list");
    }
    const Parameters params = Parameters::make(nu);
    if (params.equal_mobility()) {
      throw ConfigError("the entropy family needs nu != 1");
    }
    std::vector<EntropyIndex> indices;
    for (double s : s_values) {
      if (!in_strip(s, params)) {
        throw ConfigError("s = " + io::format_double(s) + " lies outside the entropy strip");
      }
      indices.emplace_back(s, params);
    }
    const double step = params.width() / static_cast<double>(n_nodes - 1);
    std::ostringstream os;
    os << "a,s,phi\n";
    for (const EntropyIndex& s : indices) {
      for (int j = 0; j < n_nodes; ++j) {
        const double a = j + 1 == n_nodes ? params.beta : params.alpha + j * step;
        io::write_row(os, {a, s.value(), phi(s, a, params)});
      }
    }
    if (out_path.has_parent_path()) {
      std::filesystem::create_directories(out_path.parent_path());
    }
    io::write_file_atomically(out_path, os.str());
    return kExitOk;
  });
}

}  // namespace crossdiff::harness
