// Hardy-Littlewood, sharp, and local (quantile) maximal operators over grid cubes.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "oscilab/grid.hpp"
#include "oscilab/parallel.hpp"
#include "oscilab/rearrangement.hpp"
#include "oscilab/ri_space.hpp"

namespace oscilab {

inline constexpr double default_local_s = 0.05;

/// Which cubes a supremum ranges over. `automatic` uses every grid cube up to
/// N = 256 (1D) / 48 (2D) and dyadic cubes beyond.
enum class CubeFamily { automatic, full, dyadic };

inline bool full_enumeration_allowed(const GridShape& g) { return g.dim == 1 ? g.res <= 256 : g.res <= 48; }

inline std::vector<Cube> cube_family(const GridShape& g, CubeFamily family = CubeFamily::automatic) {
  switch (family) {
    case CubeFamily::full:
      return enumerate_cubes(g, false);
    case CubeFamily::dyadic:
      return enumerate_cubes(g, true);
    case CubeFamily::automatic:
      break;
  }
  if (full_enumeration_allowed(g)) return enumerate_cubes(g, false);
  if (!is_power_of_two(g.res))
    throw ConfigError("grid too large for full cube enumeration and not a power of two");
  return enumerate_cubes(g, true);
}

/// Per-cube statistic pushed to every cell of the cube by max.
template <class Stat>
GridFunction cube_supremum(const GridFunction& f, std::span<const Cube> cubes, Stat&& stat) {
  std::vector<double> per_cube(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t c) {
    std::vector<double> v;
    v.reserve(cubes[c].cell_count(f.dim()));
    for_each_cell(cubes[c], f.shape(), [&](std::size_t i) { v.push_back(f[i]); });
    per_cube[c] = stat(v);
  });
  std::vector<double> out(f.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < cubes.size(); ++c) {
    const double val = per_cube[c];
    for_each_cell(cubes[c], f.shape(), [&](std::size_t i) { out[i] = std::max(out[i], val); });
  }
  for (double& x : out)
    if (std::isinf(x)) x = 0.0;
  return GridFunction(f.shape(), std::move(out));
}

/// M f(x) = max over cubes containing x of the mean of |f|.
inline GridFunction hl_maximal(const GridFunction& f, CubeFamily family = CubeFamily::automatic) {
  const auto cubes = cube_family(f.shape(), family);
  return cube_supremum(f, cubes, [](std::vector<double>& v) {
    CompensatedSum s;
    for (double x : v) s.add(std::abs(x));
    return s.value() / double(v.size());
  });
}

/// f#(x) = max over cubes containing x of the mean oscillation.
inline GridFunction sharp_maximal(const GridFunction& f, CubeFamily family = CubeFamily::automatic) {
  const auto cubes = cube_family(f.shape(), family);
  return cube_supremum(f, cubes, [](std::vector<double>& v) {
    return detail::mean_abs_deviation(v, detail::mean_of(v));
  });
}

/// Number of cells allowed to deviate: the largest k with k < s*m.
inline std::size_t allowed_exceedances(std::size_t m, double s) {
  const double bound = std::ceil(s * double(m) - 1e-9);
  return bound <= 0.0 ? 0 : std::size_t(bound) - 1;
}

/// inf_c inf{ a >= 0 : #{|v - c| > a} < s m } for values sorted ascending:
/// the narrowest window of m - k consecutive order statistics, halved.
inline double quantile_oscillation_sorted(std::span<const double> sorted, double s) {
  const std::size_t m = sorted.size();
  const std::size_t k = allowed_exceedances(m, s);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= k; ++j) best = std::min(best, (sorted[j + m - k - 1] - sorted[j]) / 2.0);
  return best;
}

inline double quantile_oscillation(const GridFunction& f, const Cube& q, double s) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("local maximal parameter s must lie in (0,1)");
  auto v = cube_values(f, q);
  std::sort(v.begin(), v.end());
  return quantile_oscillation_sorted(v, s);
}

inline bool is_monotone_1d(const GridFunction& f) {
  if (f.dim() != 1) return false;
  const auto& v = f.values();
  return std::is_sorted(v.begin(), v.end()) || std::is_sorted(v.begin(), v.end(), std::greater<>());
}

/// M#_s over all intervals for a monotone 1D function. Every interval is
/// already sorted, so each quantile window costs O(s m), and the max-push
/// uses suffix maxima instead of touching every cell of every interval.
inline GridFunction local_maximal_monotone(const GridFunction& f, double s) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("local maximal parameter s must lie in (0,1)");
  if (!is_monotone_1d(f)) throw ConfigError("local_maximal_monotone needs a monotone 1D function");
  const int n = f.res();
  std::vector<double> v(f.values());
  if (v.size() > 1 && v.front() > v.back()) std::reverse(v.begin(), v.end());
  // A[o][i]: max over intervals [o, e) with e > i; out[i] = max_{o <= i} A[o][i].
  std::vector<double> out(n, 0.0);
  std::vector<double> suffix(n + 1);
  for (int o = 0; o < n; ++o) {
    suffix[n] = 0.0;
    for (int e = n; e > o; --e) {
      const std::size_t m = std::size_t(e - o);
      const double q = quantile_oscillation_sorted(std::span<const double>(v.data() + o, m), s);
      suffix[e - 1] = std::max(suffix[e], q);
    }
    for (int i = o; i < n; ++i) out[i] = std::max(out[i], suffix[i]);
  }
  if (f.values().size() > 1 && f.values().front() > f.values().back()) std::reverse(out.begin(), out.end());
  return GridFunction(f.shape(), std::move(out));
}

/// Local maximal function M#_s f.
inline GridFunction local_maximal(const GridFunction& f, double s, CubeFamily family = CubeFamily::automatic) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("local maximal parameter s must lie in (0,1)");
  if (family == CubeFamily::full && is_monotone_1d(f)) return local_maximal_monotone(f, s);
  const auto cubes = cube_family(f.shape(), family);
  return cube_supremum(f, cubes, [s](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    return quantile_oscillation_sorted(v, s);
  });
}

/// M#_s f for several s at once; each cube is sorted once.
inline std::vector<GridFunction> local_maximal_sweep(const GridFunction& f, std::span<const double> s_values,
                                                     CubeFamily family = CubeFamily::automatic) {
  for (double s : s_values)
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("local maximal parameter s must lie in (0,1)");
  const auto cubes = cube_family(f.shape(), family);
  const std::size_t ns = s_values.size();
  std::vector<double> per_cube(cubes.size() * ns);
  parallel_for(cubes.size(), [&](std::size_t c) {
    auto v = cube_values(f, cubes[c]);
    std::sort(v.begin(), v.end());
    for (std::size_t j = 0; j < ns; ++j) per_cube[c * ns + j] = quantile_oscillation_sorted(v, s_values[j]);
  });
  std::vector<std::vector<double>> out(ns, std::vector<double>(f.size(), 0.0));
  for (std::size_t c = 0; c < cubes.size(); ++c) {
    for_each_cell(cubes[c], f.shape(), [&](std::size_t i) {
      for (std::size_t j = 0; j < ns; ++j) out[j][i] = std::max(out[j][i], per_cube[c * ns + j]);
    });
  }
  std::vector<GridFunction> result;
  for (auto& v : out) result.emplace_back(f.shape(), std::move(v));
  return result;
}

/// ||f||_{X#} = || f# ||_X
inline double sharp_norm(const GridFunction& f, const RISpace& x, CubeFamily family = CubeFamily::automatic) {
  return norm(x, rearrange(sharp_maximal(f, family)));
}

/// BMO norm: largest mean oscillation over all cubes.
inline double bmo_norm(const GridFunction& f, CubeFamily family = CubeFamily::automatic) {
  double best = 0.0;
  for (const Cube& q : cube_family(f.shape(), family)) best = std::max(best, mean_oscillation(f, q));
  return best;
}

}  // namespace oscilab
