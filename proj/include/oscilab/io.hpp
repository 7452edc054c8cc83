// Text formats: grid CSV, profile CSV, K-profile CSV, packing JSON.
#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscilab/grid.hpp"
#include "oscilab/kfunctional.hpp"
#include "oscilab/rearrangement.hpp"

namespace oscilab::io {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form.
inline std::string fmt(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

/// Header `# oscilab d=<d> N=<N>`, then one value per line (1D) or N rows of
/// N comma-separated values (2D).
inline GridFunction read_grid_csv(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  static const std::regex header(R"(^\s*#\s*oscilab\s+d=(\d+)\s+N=(\d+)\s*$)");
  std::smatch m;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (!std::regex_match(line, m, header)) throw ConfigError("missing grid header '# oscilab d=<d> N=<N>'");
  const GridShape g{std::stoi(m[1]), std::stoi(m[2])};
  validate(g);
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t cols = 0;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ConfigError("bad grid value '" + cell + "' on data row " + std::to_string(rows + 1));
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos)
        throw ConfigError("bad grid value '" + cell + "' on data row " + std::to_string(rows + 1));
      values.push_back(v);
      ++cols;
    }
    const std::size_t want = g.dim == 1 ? 1 : std::size_t(g.res);
    if (cols != want)
      throw ConfigError("data row " + std::to_string(rows + 1) + " has " + std::to_string(cols) + " values, expected " +
                        std::to_string(want));
    ++rows;
  }
  return GridFunction(g, std::move(values));
}

inline GridFunction load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return read_grid_csv(in);
}

inline void write_grid_csv(std::ostream& out, const GridFunction& f) {
  out << "# oscilab d=" << f.dim() << " N=" << f.res() << "\n";
  if (f.dim() == 1) {
    for (double v : f.values()) out << fmt(v) << "\n";
    return;
  }
  for (int r = 0; r < f.res(); ++r) {
    for (int c = 0; c < f.res(); ++c) out << (c ? "," : "") << fmt(f.at({r, c}));
    out << "\n";
  }
}

/// One row per step (left endpoint, value) and a closing row at t = 1.
inline void write_profile_csv(std::ostream& out, const StepProfile& p) {
  out << "t,value\n";
  for (std::size_t k = 0; k < p.steps(); ++k) out << fmt(p.breakpoints()[k]) << "," << fmt(p.values()[k]) << "\n";
  out << "1," << fmt(p.values().back()) << "\n";
}

inline void write_kprofile_csv(std::ostream& out, const std::vector<KProfile>& ks) {
  out << "t,value,method\n";
  for (const KProfile& k : ks)
    for (std::size_t i = 0; i < k.t_grid.size(); ++i)
      out << fmt(k.t_grid[i]) << "," << fmt(k.values[i]) << "," << k.label() << "\n";
}

/// Reads profiles back from the K-profile CSV, grouped by method label in
/// order of first appearance.
inline std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> read_kprofile_csv(std::istream& in) {
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("t,", 0) == 0) continue;
    }
    std::stringstream ss(line);
    std::string t, v, label;
    if (!std::getline(ss, t, ',') || !std::getline(ss, v, ',')) throw ConfigError("bad profile row: " + line);
    if (!std::getline(ss, label)) label = "profile";
    auto it = std::find_if(out.begin(), out.end(), [&](auto& e) { return e.first == label; });
    if (it == out.end()) {
      out.push_back({label, {}});
      it = out.end() - 1;
    }
    it->second.emplace_back(std::stod(t), std::stod(v));
  }
  return out;
}

inline json to_json(const Cube& q, int dim) {
  json origin = json::array();
  for (int j = 0; j < dim; ++j) origin.push_back(q.origin[j]);
  return json{{"origin", origin}, {"side", q.side}};
}

inline json to_json(const Packing& p, int dim) {
  json a = json::array();
  for (const Cube& q : p.cubes) a.push_back(to_json(q, dim));
  return a;
}

inline Packing packing_from_json(const json& a, const GridShape& g) {
  Packing p;
  for (const auto& e : a) {
    Cube q;
    const auto& o = e.at("origin");
    if (int(o.size()) != g.dim) throw ConfigError("cube origin has wrong dimension");
    for (int j = 0; j < g.dim; ++j) q.origin[j] = o.at(j).get<int>();
    q.side = e.at("side").get<int>();
    validate(q, g);
    p.cubes.push_back(q);
  }
  if (!p.is_disjoint(g)) throw ConfigError("packing cubes overlap");
  return p;
}

inline json to_json(const KProfile& k) {
  return json{{"method", k.label()}, {"t", k.t_grid}, {"value", k.values}};
}

}  // namespace oscilab::io
