// Packing functionals (John-Nirenberg, Garsia-Rodemich), Gamma_f majorants,
// GaRo_X norms, Campanato and fractional Sobolev seminorms.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "oscilab/grid.hpp"
#include "oscilab/lp.hpp"
#include "oscilab/maximal.hpp"
#include "oscilab/packing.hpp"
#include "oscilab/rearrangement.hpp"
#include "oscilab/ri_space.hpp"

namespace oscilab {

/// Value of a sup-over-packings functional with the packing attaining it.
/// `exact` is false when the 2D greedy fallback was used (then value is a
/// lower bound).
struct PackingValue {
  double value = 0.0;
  Packing witness;
  bool exact = true;
};

namespace detail {

/// Per-cube table of a statistic, keyed by (flat origin, side).
class CubeTable {
 public:
  template <class Stat>
  CubeTable(const GridFunction& f, Stat&& stat) : shape_(f.shape()), data_(f.size() * std::size_t(f.res() + 1), 0.0) {
    const auto cubes = enumerate_cubes(shape_);
    parallel_for(cubes.size(), [&](std::size_t c) { data_[key(cubes[c])] = stat(f, cubes[c]); });
  }
  double operator()(const Cube& q) const { return data_[key(q)]; }

 private:
  std::size_t key(const Cube& q) const {
    return flat_index(q.origin, shape_) * std::size_t(shape_.res + 1) + std::size_t(q.side);
  }
  GridShape shape_;
  std::vector<double> data_;
};

inline void require_p(double p, const char* what) {
  if (!(p > 1.0)) throw ConfigError(std::string(what) + " needs p > 1");
}

}  // namespace detail

/// sup over packings of { sum |Q_i| osc(Q_i)^p }^{1/p}
inline PackingValue jn_norm(const GridFunction& f, double p) {
  detail::require_p(p, "JN_p");
  if (std::isinf(p)) throw ConfigError("JN_p needs finite p");
  const detail::CubeTable osc(f, [](const GridFunction& g, const Cube& q) { return mean_oscillation(g, q); });
  const GridShape g = f.shape();
  auto r = max_additive_packing(g, [&](const Cube& q) { return measure(q, g) * std::pow(osc(q), p); });
  return {std::pow(r.value, 1.0 / p), r.packing, r.exact};
}

/// sup over packings of sum D(Q_i) / (sum |Q_i|)^{1/p'}, D the double
/// oscillation. For p = inf the ratio is subadditive, so single cubes suffice.
inline PackingValue gp_norm(const GridFunction& f, double p) {
  detail::require_p(p, "G_p");
  const GridShape g = f.shape();
  const detail::CubeTable dosc(f, [](const GridFunction& h, const Cube& q) { return double_oscillation(h, q); });
  PackingValue out;
  if (std::isinf(p)) {
    for (const Cube& q : enumerate_cubes(g)) {
      const double v = dosc(q) / measure(q, g);
      if (v > out.value) {
        out.value = v;
        out.witness = Packing{{q}};
      }
    }
    return out;
  }
  const double theta = 1.0 - 1.0 / p;
  auto r = max_additive_packing(g, [&](const Cube& q) { return dosc(q); }, int(g.cells()));
  out.exact = r.exact;
  for (std::size_t m = 1; m < r.profile.size(); ++m) {
    if (!std::isfinite(r.profile[m])) continue;
    const double v = r.profile[m] / std::pow(double(m) * g.cell_measure(), theta);
    if (v > out.value) {
      out.value = v;
      out.witness = r.profile_witness[m];
    }
  }
  return out;
}

/// sup over packings of sum D(Q_i) / (sum |Q_i|^{1+lambda/d})^{1/p'}.
///
/// The optimum over the (B, N) cloud of packings lies on a vertex of its
/// upper concave hull (level sets N = c B^theta are concave). Hull vertices
/// are found by maximizing the additive weight N - mu B for slopes mu between
/// known vertices.
inline PackingValue garo_p_lambda(const GridFunction& f, double p, double lambda) {
  detail::require_p(p, "GaRo_{p,lambda}");
  const GridShape g = f.shape();
  if (!(lambda > -double(g.dim) && lambda <= 0.0)) throw ConfigError("lambda must lie in (-d, 0]");
  const double expo = 1.0 + lambda / double(g.dim);
  const detail::CubeTable dosc(f, [](const GridFunction& h, const Cube& q) { return double_oscillation(h, q); });
  auto bw = [&](const Cube& q) { return std::pow(measure(q, g), expo); };
  PackingValue out;
  if (std::isinf(p)) {
    for (const Cube& q : enumerate_cubes(g)) {
      const double v = dosc(q) / bw(q);
      if (v > out.value) {
        out.value = v;
        out.witness = Packing{{q}};
      }
    }
    return out;
  }
  const double theta = 1.0 - 1.0 / p;
  struct Vertex {
    double b, n;
    Packing pk;
  };
  auto evaluate = [&](const Packing& pk) {
    CompensatedSum b, n;
    for (const Cube& q : pk.cubes) {
      b.add(bw(q));
      n.add(dosc(q));
    }
    return Vertex{b.value(), n.value(), pk};
  };
  auto consider = [&](const Vertex& v) {
    if (!(v.b > 0.0)) return;
    const double r = v.n / std::pow(v.b, theta);
    if (r > out.value) {
      out.value = r;
      out.witness = v.pk;
    }
  };
  auto solve = [&](double mu) {
    auto r = max_additive_packing(g, [&](const Cube& q) { return dosc(q) - mu * bw(q); });
    out.exact = out.exact && r.exact;
    return evaluate(r.packing);
  };
  const Vertex origin{0.0, 0.0, {}};
  const Vertex right = solve(0.0);
  consider(right);
  std::vector<std::pair<Vertex, Vertex>> stack{{origin, right}};
  int guard = 0;
  while (!stack.empty() && ++guard < 100000) {
    auto [a, c] = stack.back();
    stack.pop_back();
    if (!(c.b > a.b)) continue;
    const double mu = (c.n - a.n) / (c.b - a.b);
    const Vertex v = solve(mu);
    const double gain = (v.n - mu * v.b) - (a.n - mu * a.b);
    if (gain > 1e-12 * (1.0 + std::abs(c.n))) {
      consider(v);
      stack.push_back({a, v});
      stack.push_back({v, c});
    }
  }
  return out;
}

struct GammaCheck {
  bool member = true;
  Cube worst;
  double slack = std::numeric_limits<double>::infinity();  // min_Q (int_Q gamma - D(Q))
};

/// gamma in Gamma_f iff D(Q) <= int_Q gamma for every cube; both sides are
/// additive over packing members, so cubes suffice.
inline GammaCheck gamma_membership(const GridFunction& f, const GridFunction& gamma) {
  if (!(f.shape() == gamma.shape())) throw ConfigError("gamma must live on the grid of f");
  GammaCheck out;
  const double h = f.cell_measure();
  for (const Cube& q : enumerate_cubes(f.shape())) {
    CompensatedSum s;
    for_each_cell(q, f.shape(), [&](std::size_t i) { s.add(gamma[i]); });
    const double d = double_oscillation(f, q);
    const double slack = s.value() * h - d;
    if (slack < out.slack) {
      out.slack = slack;
      out.worst = q;
    }
    if (slack < -1e-12 * (1.0 + d)) out.member = false;
  }
  return out;
}

struct GaRoEstimate {
  double upper = 0.0;
  std::optional<double> exact;
  double lower = 0.0;
  std::optional<Packing> witness_packing;
  double s_used = default_local_s;
  /// Optimal majorant from the exact route.
  std::optional<GridFunction> gamma;
};

inline constexpr int garo_exact_max_res_1d = 16;
inline constexpr int garo_exact_max_res_2d = 4;

/// Exact GaRo value with its optimality certificate: the majorant gamma and
/// one dual multiplier per cube.
struct GaRoLP {
  double value = 0.0;
  GridFunction gamma;
  std::vector<Cube> cubes;
  std::vector<double> dual;
};

/// min ||gamma||_X over gamma >= 0 with int_Q gamma >= D(Q) for all cubes,
/// X in {L1, Linf}.
inline GaRoLP garo_exact(const GridFunction& f, const RISpace& x) {
  const GridShape g = f.shape();
  if (!(x.is_l1() || x.is_linf())) throw ConfigError("exact GaRo norm only for L1 and Linf");
  if (g.res > (g.dim == 1 ? garo_exact_max_res_1d : garo_exact_max_res_2d))
    throw ConfigError("exact GaRo norm limited to N <= " +
                      std::to_string(g.dim == 1 ? garo_exact_max_res_1d : garo_exact_max_res_2d));
  const std::size_t n = g.cells();
  const double h = g.cell_measure();
  GaRoLP out;
  out.cubes = enumerate_cubes(g);
  LinearProgram lp;
  lp.vars = x.is_l1() ? n : n + 1;
  lp.cost.assign(lp.vars, 0.0);
  if (x.is_l1())
    std::fill(lp.cost.begin(), lp.cost.end(), h);
  else
    lp.cost[n] = 1.0;
  for (const Cube& q : out.cubes) {
    std::vector<double> row(lp.vars, 0.0);
    for_each_cell(q, g, [&](std::size_t i) { row[i] = h; });
    lp.add_row(std::move(row), double_oscillation(f, q));
  }
  if (x.is_linf()) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(lp.vars, 0.0);
      row[n] = 1.0;
      row[i] = -1.0;
      lp.add_row(std::move(row), 0.0);
    }
  }
  const LPSolution sol = solve_lp(lp);
  if (sol.primal_infeasibility > 1e-9 || sol.duality_gap > 1e-9 * (1.0 + sol.objective))
    throw InvariantViolation("GaRo LP certificate check failed");
  out.value = sol.objective;
  out.gamma = GridFunction(g, std::vector<double>(sol.x.begin(), sol.x.begin() + std::ptrdiff_t(n)));
  out.dual.assign(sol.y.begin(), sol.y.begin() + std::ptrdiff_t(out.cubes.size()));
  return out;
}

/// GaRo_X norm: upper bound 16 ||M#_s f||_X, packing lower bound
/// max_pi (sum D) phi_X(|E|)/|E| (Holder against chi_E, E the union), and the
/// LP value on tiny grids for L1 / Linf.
inline GaRoEstimate garo_norm(const GridFunction& f, const RISpace& x, double s = default_local_s,
                              bool exact_small = false) {
  GaRoEstimate est;
  est.s_used = s;
  est.upper = 16.0 * norm(x, rearrange(local_maximal(f, s)));
  const GridShape g = f.shape();
  const detail::CubeTable dosc(f, [](const GridFunction& h, const Cube& q) { return double_oscillation(h, q); });
  auto r = max_additive_packing(g, [&](const Cube& q) { return dosc(q); }, int(g.cells()));
  for (std::size_t m = 1; m < r.profile.size(); ++m) {
    if (!std::isfinite(r.profile[m])) continue;
    const double e = double(m) * g.cell_measure();
    const double v = r.profile[m] * fundamental_function(x, e) / e;
    if (v > est.lower) {
      est.lower = v;
      est.witness_packing = r.profile_witness[m];
    }
  }
  if (exact_small) {
    GaRoLP lp = garo_exact(f, x);
    est.exact = lp.value;
    est.gamma = std::move(lp.gamma);
  }
  return est;
}

/// max_Q |Q|^{-lambda/d} osc(Q)
inline double campanato_norm(const GridFunction& f, double lambda) {
  const GridShape g = f.shape();
  if (!(lambda > -double(g.dim) && lambda <= 0.0)) throw ConfigError("lambda must lie in (-d, 0]");
  const auto cubes = enumerate_cubes(g);
  std::vector<double> v(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t c) {
    v[c] = std::pow(measure(cubes[c], g), -lambda / double(g.dim)) * mean_oscillation(f, cubes[c]);
  });
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

/// { sum_{x != y} |f(x)-f(y)|^p / |x-y|^{d+alpha p} h^2 }^{1/p} with |x-y|
/// the Euclidean distance of cell centers.
inline double sobolev_seminorm(const GridFunction& f, double alpha, double p) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  if (!(p >= 1.0) || std::isinf(p)) throw ConfigError("p must be finite and >= 1");
  const GridShape g = f.shape();
  const std::size_t n = g.cells();
  const double h = g.cell_measure(), step = 1.0 / double(g.res);
  const double expo = double(g.dim) + alpha * p;
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const CellIndex xi = cell_of(i, g);
    CompensatedSum s;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const CellIndex xj = cell_of(j, g);
      const double dr = double(xi[0] - xj[0]) * step, dc = double(xi[1] - xj[1]) * step;
      const double dist = std::sqrt(dr * dr + dc * dc);
      s.add(std::pow(std::abs(f[i] - f[j]), p) / std::pow(dist, expo));
    }
    rows[i] = s.value();
  });
  return std::pow(compensated_sum(rows) * h * h, 1.0 / p);
}

}  // namespace oscilab
