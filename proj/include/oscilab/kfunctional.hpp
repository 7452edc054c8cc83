// K-functionals for (L1, Linf) and (L1, BMO): Bennett-Sharpley, Jawerth-
// Torchinsky, packing (F_{f,#}) routes, and an LP value on tiny grids.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oscilab/functionals.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/lp.hpp"
#include "oscilab/maximal.hpp"
#include "oscilab/packing.hpp"
#include "oscilab/rearrangement.hpp"

namespace oscilab {

enum class KMethod { L1Linf, BS, JT, PACK, PACK_P, LP };

inline std::string to_string(KMethod m) {
  switch (m) {
    case KMethod::L1Linf: return "L1Linf";
    case KMethod::BS: return "BS";
    case KMethod::JT: return "JT";
    case KMethod::PACK: return "PACK";
    case KMethod::PACK_P: return "PACK_P";
    case KMethod::LP: return "LP";
  }
  return "?";
}

inline KMethod parse_kmethod(const std::string& s) {
  for (KMethod m : {KMethod::L1Linf, KMethod::BS, KMethod::JT, KMethod::PACK, KMethod::PACK_P, KMethod::LP})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown K method: " + s);
}

struct KProfile {
  std::vector<double> t_grid;
  std::vector<double> values;
  /// Pointwise values before the monotone envelope (BS, PACK, PACK_P).
  std::vector<double> raw;
  KMethod method = KMethod::L1Linf;
  double p = 1.0;

  std::string label() const {
    if (method != KMethod::PACK_P) return to_string(method);
    return "PACK_P(" + std::to_string(p) + ")";
  }
};

struct ProfileCheck {
  bool nonnegative = true;
  bool monotone = true;
  bool ratio_antitone = true;
  double worst_violation = 0.0;
  bool ok() const { return nonnegative && monotone && ratio_antitone; }
};

/// values >= 0, K non-decreasing, K/t non-increasing on the grid, up to a
/// relative slack.
inline ProfileCheck check_profile(const KProfile& k, double slack = 1e-12) {
  ProfileCheck c;
  for (std::size_t i = 0; i < k.values.size(); ++i) {
    if (k.values[i] < -slack) c.nonnegative = false;
    if (i == 0) continue;
    const double scale = slack * (1.0 + std::abs(k.values[i]));
    const double drop = k.values[i - 1] - k.values[i];
    if (drop > scale) {
      c.monotone = false;
      c.worst_violation = std::max(c.worst_violation, drop);
    }
    const double rise = k.values[i] / k.t_grid[i] - k.values[i - 1] / k.t_grid[i - 1];
    if (rise > slack * (1.0 + k.values[i - 1] / k.t_grid[i - 1])) {
      c.ratio_antitone = false;
      c.worst_violation = std::max(c.worst_violation, rise);
    }
  }
  return c;
}

namespace detail {

inline void check_t_grid(const std::vector<double>& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0 && t[i] <= 1.0)) throw ConfigError("t grid must lie in (0,1]");
    if (i > 0 && !(t[i] > t[i - 1])) throw ConfigError("t grid must be increasing");
  }
}

/// K(t_j) = max_{i <= j} raw_i: the least non-decreasing majorant on the grid.
/// For raw_i = t_i g(t_i) with g non-increasing it also keeps K/t antitone.
inline std::vector<double> monotone_envelope(const std::vector<double>& raw) {
  std::vector<double> out(raw.size());
  double run = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = run = std::max(run, raw[i]);
  return out;
}

}  // namespace detail

/// Breakpoints of (f#)* together with a 64-point geometric grid from one
/// cell measure to 1.
inline std::vector<double> default_t_grid(const GridFunction& f) {
  std::vector<double> t = detail::log_grid(f.cell_measure(), 64);
  const StepProfile fs = rearrange(sharp_maximal(f.mean_zero()));
  for (std::size_t k = 1; k < fs.breakpoints().size(); ++k) t.push_back(fs.breakpoints()[k]);
  std::sort(t.begin(), t.end());
  std::vector<double> out;
  for (double x : t)
    if (out.empty() || x > out.back() * (1.0 + 1e-12)) out.push_back(x);
  return out;
}

/// K(t, f; L1, Linf) = \int_0^t f*
inline KProfile k_l1_linf(const GridFunction& f, const std::vector<double>& t_grid) {
  detail::check_t_grid(t_grid);
  const StepProfile fs = rearrange(f);
  KProfile k{t_grid, {}, {}, KMethod::L1Linf};
  for (double t : t_grid) k.values.push_back(fs.integral(t));
  return k;
}

/// Packing kernel F_{f,#} as a list of steps: F(t) = levels[j] for the first
/// j with reach[j] > t, and 0 if there is none. reach[j] is the largest
/// measure of a packing of cubes whose statistic is >= levels[j].
struct SharpPackingProfile {
  std::vector<double> levels;  // decreasing, > 0
  std::vector<double> reach;   // non-decreasing
  bool exact = true;

  double operator()(double t) const {
    for (std::size_t j = 0; j < levels.size(); ++j)
      if (reach[j] > t) return levels[j];
    return 0.0;
  }
};

inline constexpr std::size_t max_sharp_levels_2d = 128;

/// Lambda sweep for F over the finite set of cube statistic values.
template <class Stat>
SharpPackingProfile sharp_packing_profile(const GridFunction& f, Stat&& stat) {
  const GridShape g = f.shape();
  const auto cubes = enumerate_cubes(g);
  std::vector<double> value(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t c) { value[c] = stat(f, cubes[c]); });
  std::vector<double> levels;
  for (double v : value)
    if (v > 0.0) levels.push_back(v);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  SharpPackingProfile out;
  const bool exact_2d = g.dim == 1 || packing_enumeration_allowed(g);
  if (!exact_2d && levels.size() > max_sharp_levels_2d) {
    // Keep the top level, the level of Q0 and an even subsample; dropping
    // levels only lowers F, so the result stays a lower bound.
    const double top = value.back();
    std::vector<double> keep;
    for (std::size_t i = 0; i < max_sharp_levels_2d; ++i)
      keep.push_back(levels[i * (levels.size() - 1) / (max_sharp_levels_2d - 1)]);
    if (top > 0.0) keep.push_back(top);
    std::sort(keep.begin(), keep.end(), std::greater<>());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    levels = std::move(keep);
    out.exact = false;
  }
  out.levels = levels;
  out.reach.resize(levels.size());
  parallel_for(levels.size(), [&](std::size_t j) {
    std::vector<Cube> cand;
    for (std::size_t c = 0; c < cubes.size(); ++c)
      if (value[c] >= levels[j]) cand.push_back(cubes[c]);
    out.reach[j] = max_measure_packing(cand, g).measure;
  });
  if (!exact_2d) out.exact = false;
  // Reach is monotone in the level for the exact solvers; keep it so for greedy.
  for (std::size_t j = 1; j < out.reach.size(); ++j) out.reach[j] = std::max(out.reach[j], out.reach[j - 1]);
  return out;
}

inline SharpPackingProfile sharp_packing_profile(const GridFunction& f) {
  return sharp_packing_profile(f, [](const GridFunction& g, const Cube& q) { return mean_oscillation(g, q); });
}

namespace detail {

/// ((1/|Q|) \int_Q |f - f_Q|^p)^{1/p}
inline double mean_oscillation_p(const GridFunction& f, const Cube& q, double p) {
  const auto v = cube_values(f, q);
  const double c = mean_of(v);
  CompensatedSum s;
  for (double x : v) s.add(std::pow(std::abs(x - c), p));
  return std::pow(s.value() / double(v.size()), 1.0 / p);
}

inline void check_t(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw ConfigError("t must lie in (0,1]");
}

/// (S_pi)*(t) for S_pi = sum stat(Q_i) chi_{Q_i}, right-continuous convention.
inline double packing_step_rearrangement(std::span<const Cube> cubes, std::span<const double> stat, const GridShape& g,
                                         double t) {
  std::vector<std::pair<double, double>> steps;  // (value, measure)
  for (std::size_t i = 0; i < cubes.size(); ++i) steps.emplace_back(stat[i], measure(cubes[i], g));
  std::sort(steps.begin(), steps.end(), std::greater<>());
  double cum = 0.0;
  for (auto [v, m] : steps) {
    if (!(v > 0.0)) break;
    cum += m;
    if (cum > t * (1.0 + 1e-12) + 1e-15) return v;
  }
  return 0.0;
}

}  // namespace detail

/// F_{f,#}(t) = sup over packings of (S_pi)*(t).
inline double f_sharp_profile(const GridFunction& f, double t, bool exact_small = false) {
  detail::check_t(t);
  if (!exact_small) return sharp_packing_profile(f)(t);
  double best = 0.0;
  const GridShape g = f.shape();
  std::vector<double> stat;
  for_each_packing(g, [&](std::span<const Cube> pk) {
    stat.clear();
    for (const Cube& q : pk) stat.push_back(mean_oscillation(f, q));
    best = std::max(best, detail::packing_step_rearrangement(pk, stat, g, t));
  });
  return best;
}

/// Same kernel with the L^p statistic, 0 < p < 1.
inline double f_sharp_profile_p(const GridFunction& f, double t, double p) {
  detail::check_t(t);
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0,1)");
  return sharp_packing_profile(f, [p](const GridFunction& g, const Cube& q) {
    return detail::mean_oscillation_p(g, q, p);
  })(t);
}

/// Lower bound for F(t) built as in the covering argument: cubes with
/// osc(Q) >= (f#)*(min(5^d t, 1)) (the level set of f# at that height),
/// Vitali selection, then the rearranged step function at t.
inline double vitali_threshold_estimate(const GridFunction& f, double t) {
  detail::check_t(t);
  const GridShape g = f.shape();
  const double u = std::min(1.0, std::pow(5.0, g.dim) * t);
  const double tau = rearrange(sharp_maximal(f))(u);
  if (!(tau > 0.0)) return 0.0;
  std::vector<Cube> cand;
  for (const Cube& q : enumerate_cubes(g))
    if (mean_oscillation(f, q) >= tau) cand.push_back(q);
  const Packing sel = vitali_select(cand, g);
  std::vector<double> stat;
  for (const Cube& q : sel.cubes) stat.push_back(mean_oscillation(f, q));
  return detail::packing_step_rearrangement(sel.cubes, stat, g, t);
}

inline constexpr int k_lp_max_res_1d = 8;
inline constexpr int k_lp_max_res_2d = 4;

/// inf_g ||f - g||_1 + t ||g||_BMO by linear programming (tiny grids).
inline double k_l1_bmo_lp(const GridFunction& f, double t) {
  detail::check_t(t);
  const GridShape g = f.shape();
  if (g.res > (g.dim == 1 ? k_lp_max_res_1d : k_lp_max_res_2d))
    throw ConfigError("LP K-functional limited to tiny grids");
  const std::size_t n = g.cells();
  const double h = g.cell_measure();
  const auto cubes = enumerate_cubes(g);
  // Layout: g+ [0,n), g- [n,2n), d [2n,3n), beta, then e_{Q,i}.
  std::size_t e_count = 0;
  for (const Cube& q : cubes) e_count += q.cell_count(g.dim);
  LinearProgram lp;
  lp.vars = 3 * n + 1 + e_count;
  lp.cost.assign(lp.vars, 0.0);
  for (std::size_t i = 0; i < n; ++i) lp.cost[2 * n + i] = h;
  const std::size_t beta = 3 * n;
  lp.cost[beta] = t;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> a(lp.vars, 0.0), b(lp.vars, 0.0);
    a[2 * n + i] = 1.0, a[i] = 1.0, a[n + i] = -1.0;
    b[2 * n + i] = 1.0, b[i] = -1.0, b[n + i] = 1.0;
    lp.add_row(std::move(a), f[i]);
    lp.add_row(std::move(b), -f[i]);
  }
  std::size_t e = beta + 1;
  for (const Cube& q : cubes) {
    std::vector<std::size_t> cells;
    for_each_cell(q, g, [&](std::size_t i) { cells.push_back(i); });
    const double w = 1.0 / double(cells.size());
    std::vector<double> avg(lp.vars, 0.0);
    avg[beta] = 1.0;
    for (std::size_t i : cells) {
      // e >= +-(g_i - g_Q)
      std::vector<double> up(lp.vars, 0.0), dn(lp.vars, 0.0);
      up[e] = 1.0, dn[e] = 1.0;
      for (std::size_t j : cells) {
        up[j] += w, up[n + j] -= w;
        dn[j] -= w, dn[n + j] += w;
      }
      up[i] -= 1.0, up[n + i] += 1.0;
      dn[i] += 1.0, dn[n + i] -= 1.0;
      lp.add_row(std::move(up), 0.0);
      lp.add_row(std::move(dn), 0.0);
      avg[e] = -w;
      ++e;
    }
    lp.add_row(std::move(avg), 0.0);
  }
  const LPSolution sol = solve_lp(lp);
  if (sol.primal_infeasibility > 1e-9 || sol.duality_gap > 1e-9 * (1.0 + sol.objective))
    throw InvariantViolation("K-functional LP certificate check failed: infeasibility " + std::to_string(sol.primal_infeasibility) + ", gap " + std::to_string(sol.duality_gap) + ", pivots " + std::to_string(sol.pivots));
  return sol.objective;
}

/// K(t, f; L1, BMO) profile by the selected route; f is centered first.
/// `s` is the local maximal parameter (JT), `p` the exponent for PACK_P.
inline KProfile k_l1_bmo(const GridFunction& f_in, const std::vector<double>& t_grid, KMethod method,
                         double s = default_local_s, double p = 0.5) {
  detail::check_t_grid(t_grid);
  const GridFunction f = f_in.mean_zero();
  KProfile k{t_grid, {}, {}, method, p};
  switch (method) {
    case KMethod::BS: {
      const StepProfile fs = rearrange(sharp_maximal(f));
      for (double t : t_grid) k.raw.push_back(t * fs(t));
      k.values = detail::monotone_envelope(k.raw);
      break;
    }
    case KMethod::JT: {
      const StepProfile ms = rearrange(local_maximal(f, s));
      for (double t : t_grid) k.values.push_back(ms.integral(t));
      break;
    }
    case KMethod::PACK:
    case KMethod::PACK_P: {
      const SharpPackingProfile F =
          method == KMethod::PACK
              ? sharp_packing_profile(f)
              : sharp_packing_profile(f, [p](const GridFunction& g, const Cube& q) {
                  return detail::mean_oscillation_p(g, q, p);
                });
      for (double t : t_grid) k.raw.push_back(t * F(t));
      k.values = detail::monotone_envelope(k.raw);
      break;
    }
    case KMethod::LP:
      for (double t : t_grid) k.values.push_back(k_l1_bmo_lp(f, t));
      break;
    case KMethod::L1Linf:
      throw ConfigError("L1Linf is not an (L1, BMO) route");
  }
  return k;
}

}  // namespace oscilab
