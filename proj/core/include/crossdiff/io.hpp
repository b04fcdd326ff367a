#pragma once

/// @file io.hpp
/// @brief Bit-stable CSV output: fixed column order, %.17g floats, '\n' rows.

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace crossdiff {
struct SpeciesState;
struct Parameters;
struct Trajectory;
}  // namespace crossdiff

namespace crossdiff::io {

[[nodiscard]] std::string format_double(double value);

void write_row(std::ostream& out, std::initializer_list<double> values);
void write_row(std::ostream& out, std::span<const double> values);

/// Columns x,m,n,rho,a,xi.
void write_snapshot(std::ostream& out, const SpeciesState& state, const Parameters& params);

/// Columns t,dt,mass_m,mass_n,entropy,max_rho.
void write_step_log(std::ostream& out, const Trajectory& traj);

/// Writes to `path` through a temporary file and a rename, so a reader never
/// sees a partial file.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace crossdiff::io
