#include "branchsolve/field_io.hpp"

#include <charconv>
#include <fmt/core.h>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "branchsolve/error.hpp"

namespace branchsolve {

namespace {

void write_header(std::ostream& os, const Grid& g, const char* representation, int m) {
  os << "representation = " << representation << '\n';
  os << "q = " << g.q() << '\n';
  os << "k = " << g.k() << '\n';
  os << "n = " << g.n() << '\n';
  os << "N_r = " << g.n_rhat() << '\n';
  os << "N_theta = " << g.n_theta_hat() << '\n';
  for (int d = 0; d < g.y_dims(); ++d) os << "N_y_" << d + 1 << " = " << g.n_y(d) << '\n';
  for (int d = 0; d < g.y_dims(); ++d) os << fmt::format("rho_{} = {:.17g}\n", d + 1, g.rho(d));
  os << "m = " << m << "\n\n";
}

void write_row(std::ostream& os, int sheet, int ir, int it, const Grid& g, std::size_t y,
               const std::vector<double>& values) {
  std::string line = fmt::format("{}, {}, {}", sheet, ir, it);
  const auto idx = g.y_multi_index(y);
  for (int i : idx) line += fmt::format(", {}", i + 1);
  for (double v : values) line += fmt::format(", {:.17g}", v);
  os << line << '\n';
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int to_int(const std::map<std::string, std::string>& h, const std::string& key) {
  auto it = h.find(key);
  if (it == h.end()) throw IoError("field header is missing " + key);
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw IoError("bad integer for " + key + ": " + it->second);
  }
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw IoError("bad number in field file: " + s);
  return v;
}

}  // namespace

void write_field(std::ostream& os, const SheetedField& f) {
  const Grid& g = f.grid();
  write_header(os, g, "sheeted", f.components());
  std::vector<double> values(f.components());
  if (f.axis()) {
    for (std::size_t y = 0; y < g.y_count(); ++y) {
      for (int c = 0; c < f.components(); ++c) values[c] = (*f.axis())[c * g.y_count() + y];
      write_row(os, 0, 0, 0, g, y, values);
    }
  }
  for (int l = 0; l < g.q(); ++l)
    for (int i = 0; i < g.rings(); ++i)
      for (int j = 0; j < g.n_theta(); ++j)
        for (std::size_t y = 0; y < g.y_count(); ++y) {
          for (int c = 0; c < f.components(); ++c) values[c] = f.at(c, l, i, j, y);
          write_row(os, l + 1, i + 1, j + 1, g, y, values);
        }
}

void write_field(std::ostream& os, const UnfoldedField& f) {
  const Grid& g = f.grid();
  write_header(os, g, "unfolded", f.components());
  std::vector<double> values(f.components());
  for (std::size_t y = 0; y < g.y_count(); ++y) {
    for (int c = 0; c < f.components(); ++c) values[c] = f.axis(c, y);
    write_row(os, 0, 0, 0, g, y, values);
  }
  for (int i = 0; i < g.rings(); ++i)
    for (int b = 0; b < g.n_theta_hat(); ++b)
      for (std::size_t y = 0; y < g.y_count(); ++y) {
        for (int c = 0; c < f.components(); ++c) values[c] = f.at(c, i, b, y);
        write_row(os, 1, i + 1, b + 1, g, y, values);
      }
}

AnyField read_field(std::istream& is) {
  std::map<std::string, std::string> header;
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) {
      if (header.empty()) continue;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("malformed header line: " + line);
    header[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  if (header.empty()) throw IoError("field file has no header");

  GridSpec spec;
  spec.q = to_int(header, "q");
  spec.k = to_int(header, "k");
  spec.n = to_int(header, "n");
  spec.n_rhat = to_int(header, "N_r");
  spec.n_theta_hat = to_int(header, "N_theta");
  spec.n_y.clear();
  spec.rho.clear();
  for (int d = 0; d < spec.n - 2; ++d) {
    spec.n_y.push_back(to_int(header, fmt::format("N_y_{}", d + 1)));
    const auto it = header.find(fmt::format("rho_{}", d + 1));
    if (it == header.end()) throw IoError(fmt::format("field header is missing rho_{}", d + 1));
    spec.rho.push_back(to_double(it->second));
  }
  const int m = to_int(header, "m");
  const std::string rep = header.count("representation") ? header["representation"] : "sheeted";
  if (rep != "sheeted" && rep != "unfolded") throw IoError("unknown representation " + rep);

  Grid grid(spec);
  const bool sheeted = rep == "sheeted";
  SheetedField sf(grid, sheeted ? m : 1);
  UnfoldedField uf(grid, sheeted ? 1 : m);
  std::vector<double> axis(static_cast<std::size_t>(m) * grid.y_count());
  bool has_axis = false;
  const std::size_t expected = 3 + grid.y_dims() + m;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() != expected) throw IoError("record has the wrong number of fields: " + line);
    const int sheet = static_cast<int>(to_double(cells[0]));
    const int ir = static_cast<int>(to_double(cells[1]));
    const int it = static_cast<int>(to_double(cells[2]));
    std::vector<int> yi(grid.y_dims());
    for (int d = 0; d < grid.y_dims(); ++d) {
      yi[d] = static_cast<int>(to_double(cells[3 + d])) - 1;
      if (yi[d] < 0 || yi[d] >= grid.n_y(d)) throw IoError("y index out of range: " + line);
    }
    const std::size_t y = grid.y_flat_index(yi);
    if (sheet == 0) {
      has_axis = true;
      for (int c = 0; c < m; ++c) axis[c * grid.y_count() + y] = to_double(cells[3 + grid.y_dims() + c]);
      continue;
    }
    const int n_angle = sheeted ? grid.n_theta() : grid.n_theta_hat();
    if (ir < 1 || ir > grid.rings() || it < 1 || it > n_angle || sheet > (sheeted ? grid.q() : 1))
      throw IoError("node index out of range: " + line);
    for (int c = 0; c < m; ++c) {
      const double v = to_double(cells[3 + grid.y_dims() + c]);
      if (sheeted) {
        sf.at(c, sheet - 1, ir - 1, it - 1, y) = v;
      } else {
        uf.at(c, ir - 1, it - 1, y) = v;
      }
    }
  }
  if (sheeted) {
    if (has_axis) sf.set_axis(std::move(axis));
    return sf;
  }
  std::copy(axis.begin(), axis.end(), uf.axis_values().begin());
  return uf;
}

void save_field(const std::filesystem::path& path, const SheetedField& f) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_field(os, f);
  if (!os) throw IoError("write failed for " + path.string());
}

SheetedField load_sheeted(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  AnyField f = read_field(is);
  if (auto* s = std::get_if<SheetedField>(&f)) return std::move(*s);
  throw IoError(path.string() + " holds an unfolded field, expected sheeted");
}

}  // namespace branchsolve
