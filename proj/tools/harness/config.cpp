#include "config.hpp"

#include "crossdiff/entropy_family.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace crossdiff::harness {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  return value;
}

std::size_t to_count(const std::string& key, const std::string& text, std::size_t minimum) {
  std::size_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  if (value < minimum) {
    throw ConfigError(key + " must be at least " + std::to_string(minimum));
  }
  return value;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no" || text == "off") {
    return false;
  }
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw ConfigError(message);
  }
}

}  // namespace

const std::vector<KeyDoc>& config_keys() {
  static const std::vector<KeyDoc> keys = {
      {"nu", "2", "dimensionless", "mobility ratio of species n, > 0"},
      {"epsilon", "0.004", "length^2/time", "artificial viscosity (coarsest rung in a ladder)"},
      {"n_cells", "128", "cells", "grid size (coarsest rung in a ladder), >= 8"},
      {"t_final", "0.25", "time", "horizon, > 0"},
      {"cfl", "0.4", "dimensionless", "Courant factor in (0, 1)"},
      {"rho_floor", "1e-10", "density", "vacuum threshold, > 0"},
      {"scenario", "mixed_oscillatory", "name",
       "constant | segregated | mixed_oscillatory | gaussian_bump"},
      {"scenario.<name>", "preset", "density / length", "scenario parameter, e.g. scenario.rho_mean"},
      {"s_list", "auto", "dimensionless", "comma-separated entropy indices inside S"},
      {"ladder_rungs", "3", "rungs", "refinement levels, >= 3 for ladder"},
      {"window_t", "4", "snapshots", "macro-cell length in time, >= 4"},
      {"window_x", "8", "cells", "macro-cell width in cells, >= 4, divides n_cells"},
      {"xi_threshold", "auto", "density/length",
       "|xi| mask; auto = 0.1 x space-time RMS of xi on the finest rung"},
      {"snapshot_every", "100", "steps", "snapshot stride for simulate"},
      {"n_outputs", "40", "snapshots", "shared output times of a ladder, >= 3"},
      {"test_modes", "4", "modes", "Fourier modes per direction in the weak-form test family"},
      {"output_dir", "crossdiff_out", "path", "directory for CSV outputs"},
      {"emit_phi_table", "false", "bool", "also write a,phi,phi_prime,M tables for s_list"},
  };
  return keys;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_double("list", trim(item)));
  }
  if (out.empty()) {
    throw ConfigError("empty number list");
  }
  return out;
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("repeated key '" + key + "'");
    }

    if (key == "nu") {
      c.nu = to_double(key, value);
      require(c.nu > 0.0 && std::isfinite(c.nu), "nu must be positive");
    } else if (key == "epsilon") {
      c.epsilon = to_double(key, value);
      require(c.epsilon >= 0.0 && std::isfinite(c.epsilon), "epsilon must be nonnegative");
    } else if (key == "n_cells") {
      c.n_cells = to_count(key, value, 8);
    } else if (key == "t_final") {
      c.t_final = to_double(key, value);
      require(c.t_final > 0.0 && std::isfinite(c.t_final), "t_final must be positive");
    } else if (key == "cfl") {
      c.cfl = to_double(key, value);
      require(c.cfl > 0.0 && c.cfl < 1.0, "cfl must lie in (0, 1)");
    } else if (key == "rho_floor") {
      c.rho_floor = to_double(key, value);
      require(c.rho_floor > 0.0 && std::isfinite(c.rho_floor), "rho_floor must be positive");
    } else if (key == "scenario") {
      const auto& names = scenario_names();
      require(std::find(names.begin(), names.end(), value) != names.end(),
              "unknown scenario '" + value + "'");
      c.scenario = value;
    } else if (key.rfind("scenario.", 0) == 0 && key.size() > 9) {
      // Range checks belong to the preset; NaN passes through so that it
      // surfaces as an invalid density.
      c.scenario_params[key.substr(9)] = to_double(key, value);
    } else if (key == "s_list") {
      c.s_list = parse_number_list(value);
    } else if (key == "ladder_rungs") {
      c.ladder_rungs = to_count(key, value, 1);
    } else if (key == "window_t") {
      c.window_t = to_count(key, value, 4);
    } else if (key == "window_x") {
      c.window_x = to_count(key, value, 4);
    } else if (key == "xi_threshold") {
      if (value == "auto") {
        c.xi_threshold.reset();
      } else {
        c.xi_threshold = to_double(key, value);
        require(*c.xi_threshold >= 0.0, "xi_threshold must be nonnegative or auto");
      }
    } else if (key == "snapshot_every") {
      c.snapshot_every = to_count(key, value, 1);
    } else if (key == "n_outputs") {
      c.n_outputs = to_count(key, value, 3);
    } else if (key == "test_modes") {
      c.test_modes = static_cast<int>(to_count(key, value, 1));
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "emit_phi_table") {
      c.emit_phi_table = to_bool(key, value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }

  const Parameters p = c.parameters();
  for (double s : c.s_list) {
    require(!p.equal_mobility() && in_strip(s, p),
            "s_list entry " + std::to_string(s) + " lies outside the entropy strip");
  }
  require(c.n_cells % c.window_x == 0, "window_x must divide n_cells");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file '" + path.string() + "'");
  }
  return parse_config(in);
}

Parameters RunConfig::parameters() const {
  return Parameters::make(nu, epsilon, t_final, rho_floor);
}

SchemeConfig RunConfig::scheme() const {
  SchemeConfig s;
  s.epsilon = epsilon;
  s.cfl = cfl;
  s.t_final = t_final;
  s.n_cells = n_cells;
  s.snapshot_every = snapshot_every;
  s.scenario = scenario;
  s.scenario_params = scenario_params;
  return s;
}

SchemeConfig RunConfig::ladder_scheme() const {
  SchemeConfig s = scheme();
  s.output_times = uniform_output_times(t_final, n_outputs);
  return s;
}

diagnostics::DiagnosticsConfig RunConfig::diagnostics() const {
  diagnostics::DiagnosticsConfig d;
  d.s_list = s_list;
  d.window_t = window_t;
  d.window_x = window_x;
  d.xi_threshold = xi_threshold;
  d.test_modes = test_modes;
  return d;
}

}  // namespace crossdiff::harness
