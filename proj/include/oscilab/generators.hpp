// Deterministic builtin grid functions.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oscilab/grid.hpp"

namespace oscilab {

/// Platform-stable draws on top of mt19937_64 (the std distributions are not
/// specified bit-for-bit).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + int(eng_() % std::uint64_t(hi - lo + 1)); }

  double normal() {
    if (spare_) {
      spare_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * std::numbers::pi * u2);
    spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 eng_;
  bool spare_ = false;
  double cached_ = 0.0;
};

namespace gen {

inline GridFunction constant(GridShape g, double c) { return GridFunction::constant(g, c); }

inline GridFunction indicator(GridShape g, const Cube& q, double height = 1.0) {
  validate(g);
  validate(q, g);
  std::vector<double> v(g.cells(), 0.0);
  for_each_cell(q, g, [&](std::size_t i) { v[i] = height; });
  return GridFunction(g, std::move(v));
}

/// f_a(x) = d ln(a^{1/d} / |x|_inf) on |x|_inf < a^{1/d}, sampled at cell
/// centers; its rearrangement is ln(a/t) on (0,a).
inline GridFunction logspike(GridShape g, double a) {
  validate(g);
  if (!(a > 0.0 && a <= 1.0)) throw ConfigError("logspike needs 0 < a <= 1");
  const double r = std::pow(a, 1.0 / double(g.dim));
  std::vector<double> v(g.cells());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const CellIndex x = cell_of(i, g);
    double norm = (double(x[0]) + 0.5) / double(g.res);
    if (g.dim == 2) norm = std::max(norm, (double(x[1]) + 0.5) / double(g.res));
    v[i] = norm < r ? double(g.dim) * std::log(r / norm) : 0.0;
  }
  return GridFunction(g, std::move(v));
}

namespace detail {

/// Random partition of [0, n) into at most `pieces` runs; returns run id per index.
inline std::vector<int> random_runs(Rng& rng, int n, int pieces) {
  std::vector<int> cuts;
  for (int k = 1; k < pieces; ++k) cuts.push_back(rng.integer(1, std::max(1, n - 1)));
  std::vector<int> id(n, 0);
  for (int i = 0; i < n; ++i)
    for (int c : cuts)
      if (i >= c) ++id[i];
  return id;
}

}  // namespace detail

/// Piecewise constant with random breakpoints and Gaussian levels. In 2D
/// the pieces form a random tensor tiling.
inline GridFunction random_steps(GridShape g, std::uint64_t seed, int pieces = 6) {
  validate(g);
  Rng rng(seed);
  const auto rows = detail::random_runs(rng, g.res, pieces);
  const auto cols = g.dim == 2 ? detail::random_runs(rng, g.res, pieces) : std::vector<int>(1, 0);
  std::vector<double> level(std::size_t(pieces) * std::size_t(pieces));
  for (double& x : level) x = rng.normal();
  std::vector<double> v(g.cells());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const CellIndex x = cell_of(i, g);
    v[i] = level[std::size_t(rows[x[0]]) * std::size_t(pieces) + std::size_t(g.dim == 2 ? cols[x[1]] : 0)];
  }
  return GridFunction(g, std::move(v));
}

/// Sum of a few random low-frequency cosines, sampled at cell centers.
inline GridFunction cosine_mix(GridShape g, std::uint64_t seed, int terms = 3) {
  validate(g);
  Rng rng(seed);
  struct Term {
    double amp, phase;
    int k0, k1;
  };
  std::vector<Term> ts;
  for (int j = 0; j < terms; ++j)
    ts.push_back({rng.normal(), rng.uniform(0.0, 2.0 * std::numbers::pi), rng.integer(0, 3),
                  g.dim == 2 ? rng.integer(0, 3) : 0});
  for (Term& t : ts)
    if (t.k0 == 0 && t.k1 == 0) t.k0 = 1;
  std::vector<double> v(g.cells());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const CellIndex x = cell_of(i, g);
    const double u0 = (double(x[0]) + 0.5) / double(g.res), u1 = (double(x[1]) + 0.5) / double(g.res);
    double s = 0.0;
    for (const Term& t : ts) s += t.amp * std::cos(2.0 * std::numbers::pi * (t.k0 * u0 + t.k1 * u1) + t.phase);
    v[i] = s;
  }
  return GridFunction(g, std::move(v));
}

/// +-1 blocks of `block` cells per side.
inline GridFunction checkerboard(GridShape g, int block = 1) {
  validate(g);
  if (block < 1) throw ConfigError("checkerboard block must be >= 1");
  std::vector<double> v(g.cells());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const CellIndex x = cell_of(i, g);
    v[i] = ((x[0] / block + x[1] / block) % 2 == 0) ? 1.0 : -1.0;
  }
  return GridFunction(g, std::move(v));
}

using Params = std::map<std::string, double>;

inline double param(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

/// Dispatch by name. Indicator params: lo, hi as fractions of the side
/// (the subcube [lo, hi)^d, snapped to cells).
inline GridFunction generate(const std::string& kind, GridShape g, const Params& p = {}, std::uint64_t seed = 0) {
  if (kind == "constant") return constant(g, param(p, "c", 1.0));
  if (kind == "indicator") {
    validate(g);
    const int lo = int(std::floor(param(p, "lo", 0.0) * g.res + 1e-9));
    const int hi = int(std::ceil(param(p, "hi", 0.5) * g.res - 1e-9));
    if (!(hi > lo)) throw ConfigError("indicator needs hi > lo");
    return indicator(g, Cube{{lo, g.dim == 2 ? lo : 0}, hi - lo}, param(p, "height", 1.0));
  }
  if (kind == "logspike") return logspike(g, param(p, "a", 0.25));
  if (kind == "random_steps") return random_steps(g, seed, int(param(p, "pieces", 6)));
  if (kind == "cosine_mix") return cosine_mix(g, seed, int(param(p, "terms", 3)));
  if (kind == "checkerboard") return checkerboard(g, int(param(p, "block", 1)));
  throw ConfigError("unknown generator kind: " + kind);
}

}  // namespace gen

}  // namespace oscilab
