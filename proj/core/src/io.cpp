#include "crossdiff/io.hpp"

#include "crossdiff/solver.hpp"
#include "crossdiff/state.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <system_error>

namespace crossdiff::io {

std::string format_double(double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return {buf, static_cast<std::size_t>(len)};
}

void write_row(std::ostream& out, std::span<const double> values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) {
      out << ',';
    }
    out << format_double(values[k]);
  }
  out << '\n';
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  write_row(out, std::span<const double>(values.begin(), values.size()));
}

void write_snapshot(std::ostream& out, const SpeciesState& state, const Parameters& params) {
  const DerivedState d = to_rho_a(state, params);
  const Grid1D grid(state.size());
  out << "x,m,n,rho,a,xi\n";
  for (std::size_t i = 0; i < state.size(); ++i) {
    write_row(out, {grid.center(i), state.m[i], state.n[i], d.rho[i], d.a[i], d.xi[i]});
  }
}

void write_step_log(std::ostream& out, const Trajectory& traj) {
  out << "t,dt,mass_m,mass_n,entropy,max_rho\n";
  for (const StepRecord& r : traj.step_log) {
    write_row(out, {r.t, r.dt, r.mass_m, r.mass_n, r.entropy, r.max_rho});
  }
}

void write_file_atomically(const std::filesystem::path& path, std::string_view contents) {
  const std::filesystem::path tmp = path.string() + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::system_error(errno, std::generic_category(), "cannot open " + tmp.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace crossdiff::io
