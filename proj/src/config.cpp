#include "branchsolve/config.hpp"

#include <fmt/core.h>
#include <fstream>
#include <set>
#include <sstream>

#include "branchsolve/error.hpp"

namespace branchsolve {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int as_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  int out = 0;
  try {
    out = std::stoi(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw IoError(fmt::format("config key {}: expected an integer, got '{}'", key, v));
  return out;
}

double as_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw IoError(fmt::format("config key {}: expected a number, got '{}'", key, v));
  return out;
}

cplx as_complex(const std::string& key, const std::string& v) {
  const auto slash = v.find('/');
  if (slash == std::string::npos) return as_double(key, v);
  return {as_double(key, v.substr(0, slash)), as_double(key, v.substr(slash + 1))};
}

template <class T, class Conv>
std::vector<T> as_list(const std::string& key, const std::string& v, Conv conv) {
  std::vector<T> out;
  for (const auto& item : split(v, ',')) out.push_back(conv(key, item));
  return out;
}

}  // namespace

std::vector<ManufacturedMode> parse_manufactured(const std::string& spec, int y_dims) {
  std::vector<ManufacturedMode> modes;
  for (const auto& term : split(spec, ';')) {
    ManufacturedMode mode;
    mode.z.assign(y_dims, 0);
    for (const auto& kv : split(term, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw IoError("manufactured mode entry without '=': " + kv);
      const std::string k = trim(kv.substr(0, eq)), v = trim(kv.substr(eq + 1));
      if (k == "m") {
        mode.m = as_int(k, v);
      } else if (k == "z") {
        // z=1 sets the first y-dimension, z=1:0 sets several
        std::vector<int> parsed;
        for (const auto& part : split(v, ':')) parsed.push_back(as_int(k, part));
        if (parsed.size() > static_cast<std::size_t>(y_dims)) throw IoError("manufactured z has too many entries");
        for (std::size_t d = 0; d < parsed.size(); ++d) mode.z[d] = parsed[d];
      } else if (k == "amp") {
        mode.amplitude = as_complex(k, v);
      } else if (k == "beta") {
        mode.beta = as_double(k, v);
      } else if (k == "fr") {
        mode.flux_r = as_complex(k, v);
      } else if (k == "ft") {
        mode.flux_theta = as_complex(k, v);
      } else if (k == "fy") {
        mode.flux_y.assign(y_dims, 0.0);
        if (y_dims > 0) mode.flux_y[0] = as_complex(k, v);
      } else {
        throw IoError("unknown manufactured mode key " + k);
      }
    }
    modes.push_back(std::move(mode));
  }
  return modes;
}

RunConfig parse_config(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError(fmt::format("config line {}: expected key = value", lineno));
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  RunConfig c;
  std::string manufactured;
  for (const auto& [key, v] : kv) {
    if (key == "command") c.command = v;
    else if (key == "q") c.grid.q = as_int(key, v);
    else if (key == "k") c.grid.k = as_int(key, v);
    else if (key == "n") c.grid.n = as_int(key, v);
    else if (key == "N_r") c.grid.n_rhat = as_int(key, v);
    else if (key == "N_theta") c.grid.n_theta_hat = as_int(key, v);
    else if (key == "N_y") c.grid.n_y = as_list<int>(key, v, as_int);
    else if (key == "rho") c.grid.rho = as_list<double>(key, v, as_double);
    else if (key == "boundary") c.boundary = v;
    else if (key == "boundary_m") c.boundary_m = as_int(key, v);
    else if (key == "boundary_amp") c.boundary_amp = as_double(key, v);
    else if (key == "boundary_ymod") c.boundary_ymod = as_list<int>(key, v, as_int);
    else if (key == "kernel_a") c.kernel_a = as_double(key, v);
    else if (key == "boundary_file") c.boundary_file = v;
    else if (key == "g_file") c.g_file = v;
    else if (key == "f_file") c.f_file = v;
    else if (key == "field_file") c.field_file = v;
    else if (key == "manufactured") manufactured = v;
    else if (key == "nonlinearity") c.nonlinearity = v;
    else if (key == "epsilon") c.epsilon = as_double(key, v);
    else if (key == "tol") c.tol = as_double(key, v);
    else if (key == "residual_tol") c.residual_tol = as_double(key, v);
    else if (key == "max_iters") c.max_iters = as_int(key, v);
    else if (key == "relaxation") c.relaxation = as_double(key, v);
    else if (key == "mu") c.mu = as_double(key, v);
    else if (key == "decay_rmin") c.decay_rmin = as_double(key, v);
    else if (key == "decay_rmax") c.decay_rmax = as_double(key, v);
    else if (key == "freq_radii") c.freq_radii = as_list<double>(key, v, as_double);
    else if (key == "cauchy_pmax") c.cauchy_pmax = as_int(key, v);
    else if (key == "cauchy_R") c.cauchy_R = as_double(key, v);
    else if (key == "threads") c.threads = as_int(key, v);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(as_int(key, v));
    else if (key == "out") c.out = v;
    else throw IoError("unknown config key " + key);
  }
  const int ydims = c.grid.n - 2;
  if (ydims >= 1) {
    if (!kv.count("N_y")) c.grid.n_y.assign(ydims, c.grid.n_y.empty() ? 16 : c.grid.n_y.front());
    if (!kv.count("rho")) c.grid.rho.assign(ydims, c.grid.rho.empty() ? 6.283185307179586 : c.grid.rho.front());
  }
  if (!manufactured.empty()) c.manufactured = parse_manufactured(manufactured, ydims);
  if (c.tol <= 0.0 || c.residual_tol <= 0.0 || c.max_iters < 1)
    throw InvalidProblem("tolerances and max_iters must be positive");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  return parse_config(is);
}

}  // namespace branchsolve
