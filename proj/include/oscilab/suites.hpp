// Verification suites: oracle equalities, exact inequalities, and measured
// equivalence constants over a generated corpus. Each check records the
// statement it exercises, the measured constant and the tolerance it is
// held to.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscilab/functionals.hpp"
#include "oscilab/generators.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/kfunctional.hpp"
#include "oscilab/maximal.hpp"
#include "oscilab/packing.hpp"
#include "oscilab/rearrangement.hpp"
#include "oscilab/ri_space.hpp"

namespace oscilab::verify {

inline constexpr int schema_version = 1;

struct Check {
  std::string name;
  std::string anchor;  // the statement exercised
  bool hard = true;    // false: measured and reported only
  bool passed = true;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string note;

  std::string status() const { return hard ? (passed ? "pass" : "fail") : "report"; }
};

struct Config {
  std::uint64_t seed = 20240917;
  double s = default_local_s;
  int blowup_log_res = 20;  // 1D resolution 2^k for the blow-up family
  int l1_log_res = 16;      // 1D resolution for the L1 logspike sequence
};

inline nlohmann::ordered_json to_json(const Config& c) {
  return {{"seed", c.seed}, {"s", c.s}, {"blowup_log_res", c.blowup_log_res}, {"l1_log_res", c.l1_log_res}};
}

inline bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return !c.hard || c.passed; });
}

// ---------------------------------------------------------------- corpus

struct Sample {
  std::string id;
  GridFunction f;
};

inline std::vector<Sample> build_corpus(std::uint64_t seed) {
  std::vector<Sample> out;
  auto add = [&](std::string id, GridFunction f) { out.push_back({std::move(id), std::move(f)}); };
  std::uint64_t k = 0;
  auto grids = [](int d) { return d == 1 ? std::vector<int>{8, 16, 24, 32, 48, 64} : std::vector<int>{8, 12, 16, 24, 32}; };
  for (int d = 1; d <= 2; ++d) {
    const int per_grid = d == 1 ? 20 : 16;
    for (int n : grids(d)) {
      const GridShape g{d, n};
      const std::string tag = std::to_string(d) + "d_N" + std::to_string(n) + "_";
      for (int i = 0; i < per_grid; ++i, ++k) {
        const std::uint64_t sd = seed * 1000003ULL + k;
        switch (i % 8) {
          case 0:
          case 1:
          case 2:
            add(tag + "steps" + std::to_string(i), gen::random_steps(g, sd, 2 + i % 7));
            break;
          case 3:
          case 4:
            add(tag + "cos" + std::to_string(i), gen::cosine_mix(g, sd, 1 + i % 4));
            break;
          case 5:
            add(tag + "spike" + std::to_string(i), gen::logspike(g, std::ldexp(1.0, -(1 + i % 4))));
            break;
          case 6:
            add(tag + "checker" + std::to_string(i), gen::checkerboard(g, 1 + (i / 8) % 3));
            break;
          default: {
            // Rough: independent Gaussian cells.
            Rng rng(sd);
            std::vector<double> v(g.cells());
            for (double& x : v) x = rng.normal();
            add(tag + "noise" + std::to_string(i), GridFunction(g, std::move(v)));
          }
        }
      }
    }
  }
  add("1d_N8_indicator", gen::indicator({1, 8}, Cube{{0, 0}, 4}));
  add("2d_N8_indicator", gen::indicator({2, 8}, Cube{{2, 2}, 4}));
  add("1d_N16_constant", gen::constant({1, 16}, 2.0));
  add("2d_N8_constant", gen::constant({2, 8}, -1.0));
  return out;
}

// ---------------------------------------------------------------- helpers

namespace detail {

/// Running worst-case tracker for a family of inequalities lhs <= C rhs.
struct Ratio {
  double worst = 0.0;
  std::size_t cases = 0, violations = 0;
  std::string where;

  /// Records lhs / rhs; `bound` is the constant the inequality is held to.
  void add(double lhs, double rhs, double bound, const std::string& id, double slack = 1e-12) {
    ++cases;
    double r;
    if (rhs > 0.0)
      r = lhs / rhs;
    else
      r = lhs > slack ? std::numeric_limits<double>::infinity() : 0.0;
    if (r > worst) {
      worst = r;
      where = id;
    }
    if (lhs > bound * rhs + slack * (1.0 + std::abs(bound * rhs))) ++violations;
  }
};

inline Check make(std::string name, std::string anchor, const Ratio& r, double tolerance, bool hard = true) {
  Check c{std::move(name), std::move(anchor), hard, r.violations == 0, r.worst, tolerance, {}};
  c.note = std::to_string(r.cases) + " cases, " + std::to_string(r.violations) + " violations";
  if (!r.where.empty()) c.note += ", worst at " + r.where;
  return c;
}

inline std::vector<RISpace> space_family() {
  return {RISpace::lp(1), RISpace::lp(2), RISpace::lp(3), RISpace::linf(), RISpace::weak_lp(2),
          RISpace::marcinkiewicz(Phi::log_slow())};
}

/// inf_c ||f - c||_X: golden-section search of the convex map c -> ||f - c||_X,
/// seeded with the mean and the median.
inline double min_shift_norm(const RISpace& x, const GridFunction& f) {
  auto phi = [&](double c) { return norm(x, rearrange(f.shifted(c))); };
  const auto [lo_it, hi_it] = std::minmax_element(f.values().begin(), f.values().end());
  double lo = *lo_it, hi = *hi_it;
  double best = std::min({phi(f.mean()), phi(median(f)), phi(lo), phi(hi)});
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
  double fa = phi(a), fb = phi(b);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
    if (fa <= fb) {
      hi = b, b = a, fb = fa;
      a = hi - r * (hi - lo);
      fa = phi(a);
    } else {
      lo = a, a = b, fa = fb;
      b = lo + r * (hi - lo);
      fb = phi(b);
    }
  }
  return std::min({best, fa, fb});
}

/// inf_c (f - c)*(t): the narrowest window holding n - floor(t n) values, halved.
inline double min_shift_rearrangement(const GridFunction& f, double t) {
  std::vector<double> v(f.values());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const std::size_t k = std::min(n - 1, std::size_t(std::floor(t * double(n) + 1e-9)));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= k; ++j) best = std::min(best, (v[j + n - k - 1] - v[j]) / 2.0);
  return best;
}

/// Conditional expectation on a partition into aligned cubes of side b
/// (edge cubes truncated to rectangles in 2D are split into unit cells).
inline GridFunction block_average(const GridFunction& f, int b) {
  const GridShape g = f.shape();
  std::vector<double> v(f.values());
  for (int r = 0; r + b <= g.res; r += b) {
    const int c_end = g.dim == 1 ? 1 : g.res;
    for (int c = 0; c + (g.dim == 1 ? 1 : b) <= c_end; c += (g.dim == 1 ? 1 : b)) {
      const Cube q{{r, g.dim == 1 ? 0 : c}, b};
      const double m = cube_mean(f, q);
      for_each_cell(q, g, [&](std::size_t i) { v[i] = m; });
    }
  }
  return GridFunction(g, std::move(v));
}

/// Brute-force packing quantities, all from one pass over every packing.
struct BruteForce {
  double jn2 = 0, jn3 = 0, g2 = 0, g3 = 0, ginf = 0, dsum = 0;
  std::vector<double> ts, F;
};

inline BruteForce brute_force(const GridFunction& f, const std::vector<double>& ts) {
  const GridShape g = f.shape();
  BruteForce b;
  b.ts = ts;
  b.F.assign(ts.size(), 0.0);
  std::vector<std::pair<double, double>> steps;
  for_each_packing(g, [&](std::span<const Cube> pk) {
    double a2 = 0, a3 = 0, ds = 0, meas = 0;
    steps.clear();
    for (const Cube& q : pk) {
      const double mo = mean_oscillation(f, q), m = measure(q, g);
      a2 += m * mo * mo;
      a3 += m * mo * mo * mo;
      ds += double_oscillation(f, q);
      meas += m;
      steps.emplace_back(mo, m);
    }
    b.jn2 = std::max(b.jn2, std::sqrt(a2));
    b.jn3 = std::max(b.jn3, std::cbrt(a3));
    b.g2 = std::max(b.g2, ds / std::pow(meas, 0.5));
    b.g3 = std::max(b.g3, ds / std::pow(meas, 2.0 / 3.0));
    b.ginf = std::max(b.ginf, ds / meas);
    b.dsum = std::max(b.dsum, ds);
    std::sort(steps.begin(), steps.end(), std::greater<>());
    for (std::size_t j = 0; j < ts.size(); ++j) {
      double cum = 0.0, val = 0.0;
      for (auto [v, m] : steps) {
        if (!(v > 0.0)) break;
        cum += m;
        if (cum > ts[j] * (1.0 + 1e-12) + 1e-15) {
          val = v;
          break;
        }
      }
      b.F[j] = std::max(b.F[j], val);
    }
  });
  return b;
}

/// Largest |a - b| relative to 1 + |b|.
struct Deviation {
  double worst = 0.0;
  std::size_t cases = 0;
  std::string where;
  void add(double a, double b, const std::string& id) {
    ++cases;
    const double d = std::abs(a - b) / (1.0 + std::abs(b));
    if (d > worst || !std::isfinite(d)) {
      worst = std::isfinite(d) ? d : std::numeric_limits<double>::infinity();
      where = id;
    }
  }
};

inline Check make(std::string name, std::string anchor, const Deviation& d, double tolerance) {
  Check c{std::move(name), std::move(anchor), true, d.worst <= tolerance, d.worst, tolerance, {}};
  c.note = std::to_string(d.cases) + " comparisons";
  if (!d.where.empty()) c.note += ", worst at " + d.where;
  return c;
}

inline std::vector<double> cell_t_grid(std::size_t n, double t_max, bool strict) {
  std::vector<double> ts;
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = double(k) / double(n);
    if (strict ? t < t_max : t <= t_max) ts.push_back(t);
  }
  return ts;
}

}  // namespace detail

// ---------------------------------------------------------------- criterion 1

/// Packing functionals and the LP norm against exhaustive enumeration.
inline std::vector<Check> oracle_packings(const Config& cfg) {
  const double tol = 1e-9;
  detail::Deviation jn, gp, gpinf, lam0, garo1, garoinf, cert, F, hand;
  std::vector<GridShape> grids;
  for (int n = 1; n <= 10; ++n) grids.push_back({1, n});
  for (int n = 1; n <= 4; ++n) grids.push_back({2, n});
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < 100; ++i) {
    const GridShape g = grids[std::size_t(i) % grids.size()];
    std::vector<double> v(g.cells());
    const int levels = 1 + i % 4;  // few distinct values produce ties
    for (double& x : v) x = i % 2 ? rng.normal() : double(rng.integer(0, levels));
    const GridFunction f(g, v);
    const std::string id = "rand" + std::to_string(i) + "_" + std::to_string(g.dim) + "d_N" + std::to_string(g.res);
    std::vector<double> ts;
    const std::size_t n = g.cells();
    for (std::size_t k = 1; k <= 2 * n; ++k) ts.push_back(double(k) / double(2 * n));
    const auto b = detail::brute_force(f, ts);

    jn.add(jn_norm(f, 2).value, b.jn2, id);
    jn.add(jn_norm(f, 3).value, b.jn3, id);
    gp.add(gp_norm(f, 2).value, b.g2, id);
    gp.add(gp_norm(f, 3).value, b.g3, id);
    gpinf.add(gp_norm(f, std::numeric_limits<double>::infinity()).value, b.ginf, id);
    lam0.add(garo_p_lambda(f, 2, 0.0).value, b.g2, id);
    lam0.add(garo_p_lambda(f, 3, 0.0).value, b.g3, id);

    const GaRoLP l1 = garo_exact(f, RISpace::lp(1));
    const GaRoLP linf = garo_exact(f, RISpace::linf());
    garoinf.add(linf.value, b.ginf, id);
    if (g.dim == 1) {
      // Interval incidence matrices are totally unimodular: the dual optimum
      // is an integral packing.
      garo1.add(l1.value, b.dsum, id);
    }
    // Optimality certificate: gamma feasible, dual feasible, equal objectives.
    const GammaCheck gm = gamma_membership(f, l1.gamma);
    cert.add(gm.member ? 0.0 : -gm.slack, 0.0, id);
    std::vector<double> load(n, 0.0);
    CompensatedSum dual_obj;
    double neg = 0.0;
    for (std::size_t c = 0; c < l1.cubes.size(); ++c) {
      neg = std::max(neg, -l1.dual[c]);
      for_each_cell(l1.cubes[c], g, [&](std::size_t j) { load[j] += l1.dual[c]; });
      dual_obj.add(l1.dual[c] * double_oscillation(f, l1.cubes[c]));
    }
    cert.add(neg, 0.0, id);
    cert.add(std::max(0.0, *std::max_element(load.begin(), load.end()) - 1.0), 0.0, id);
    cert.add(dual_obj.value(), l1.value, id);
    cert.add(l1.gamma.l1_norm(), l1.value, id);
    cert.add(std::min(0.0, l1.value - b.dsum), 0.0, id);

    const SharpPackingProfile sweep = sharp_packing_profile(f);
    for (std::size_t j = 0; j < ts.size(); ++j) F.add(sweep(ts[j]), b.F[j], id + " t=" + std::to_string(ts[j]));
  }

  const GridFunction two({1, 2}, {1.0, 0.0});
  hand.add(garo_exact(two, RISpace::lp(1)).value, 0.5, "[1,0] L1");
  hand.add(garo_exact(two, RISpace::linf()).value, 0.5, "[1,0] Linf");
  hand.add(jn_norm(two, 2).value, 0.5, "[1,0] JN_2");
  hand.add(gp_norm(two, 2).value, 0.5, "[1,0] G_2");
  hand.add(f_sharp_profile(two, 0.5), 0.5, "[1,0] F(1/2)");
  hand.add(f_sharp_profile(two, 1.0), 0.0, "[1,0] F(1)");

  return {
      detail::make("jn_norm = brute force (p=2,3)", "John-Nirenberg packing norm JN_p", jn, tol),
      detail::make("gp_norm = brute force (p=2,3)", "Garsia-Rodemich condition G_p", gp, tol),
      detail::make("gp_norm(p=inf) = brute force", "G_p at p = infinity (single-cube reduction)", gpinf, tol),
      detail::make("garo_p_lambda(lambda=0) = brute force G_p", "GaRo_{p,lambda} at lambda = 0", lam0, tol),
      detail::make("GaRo_L1 LP = max packing sum of D (1D)", "GaRo_X norm as inf over Gamma_f", garo1, tol),
      detail::make("GaRo_Linf LP = max D(Q)/|Q|", "GaRo_X norm as inf over Gamma_f", garoinf, tol),
      detail::make("GaRo_L1 LP primal/dual certificate", "GaRo_X norm as inf over Gamma_f", cert, tol),
      detail::make("F_{f,#} lambda sweep = brute force", "packing kernel F_{f,#}", F, tol),
      detail::make("hand-computed values for f=[1,0]", "two-cell example", hand, tol),
  };
}

// ---------------------------------------------------------------- criterion 2

inline std::vector<Check> exact_rearrangement(const std::vector<Sample>& corpus) {
  detail::Ratio dil, contraction, hlpc, med_t, med_t_open, med_norm;
  const auto spaces = detail::space_family();
  std::vector<StepProfile> battery;
  for (const Sample& s : corpus) battery.push_back(rearrange(s.f));
  for (const RISpace& x : spaces) {
    for (double s : {0.25, 0.5, 2.0, 4.0}) {
      const double est = dilation_norm_estimate(x, s, battery);
      dil.add(est, std::max(1.0, s), 1.0, x.name() + " s=" + std::to_string(s));
    }
  }
  for (std::size_t i = 0; i + 1 < corpus.size(); ++i) {
    const GridFunction& f = corpus[i].f;
    const GridFunction& g = corpus[i + 1].f;
    if (!(f.shape() == g.shape())) continue;
    std::vector<double> fa(f.values()), ga(g.values());
    for (double& x : fa) x = std::abs(x);
    for (double& x : ga) x = std::abs(x);
    std::sort(fa.begin(), fa.end(), std::greater<>());
    std::sort(ga.begin(), ga.end(), std::greater<>());
    CompensatedSum lhs, rhs;
    for (std::size_t k = 0; k < fa.size(); ++k) {
      lhs.add(std::abs(fa[k] - ga[k]));
      rhs.add(std::abs(f[k] - g[k]));
    }
    contraction.add(lhs.value(), rhs.value(), 1.0, corpus[i].id + " vs " + corpus[i + 1].id);
  }
  for (const Sample& s : corpus) {
    for (int b : {2, 4}) {
      if (s.f.res() < b) continue;
      const GridFunction avg = detail::block_average(s.f, b);
      const StepProfile pa = rearrange(avg), pf = rearrange(s.f);
      if (!hlpc_dominates(pa, pf, 1e-12)) {
        hlpc.add(1.0, 0.0, 1.0, s.id + " majorization");
        continue;
      }
      for (const RISpace& x : spaces) hlpc.add(norm(x, pa), norm(x, pf), 1.0, s.id + " " + x.name());
    }
    const double m = median(s.f);
    const GridFunction centered = s.f.shifted(m);
    const StepProfile pc = rearrange(centered);
    for (double t : detail::cell_t_grid(s.f.size(), 0.5, false)) {
      const double lhs = pc(t), rhs = detail::min_shift_rearrangement(s.f, t);
      med_t.add(lhs, rhs, 2.0, s.id + " t=" + std::to_string(t));
      // At t = 1/2 a non-unique median can sit on the wrong plateau: with
      // values A on half the cells, B on 7/16 and C < B on 1/16, m = B is a
      // median, (f - B)*(1/2) = |A - B| and (f - A)*(1/2) = 0.
      if (t < 0.5) med_t_open.add(lhs, rhs, 2.0, s.id + " t=" + std::to_string(t));
    }
    for (const RISpace& x : spaces) med_norm.add(norm(x, pc), detail::min_shift_norm(x, s.f), 4.0, s.id + " " + x.name());
  }
  return {
      detail::make("dilation norm <= max(1,s)", "dilation bound for sigma_s", dil, 1.0),
      detail::make("||f*-g*||_1 <= ||f-g||_1", "L1 contraction of rearrangement", contraction, 1.0),
      detail::make("HLPC majorization => norm monotone", "Hardy-Littlewood-Polya-Calderon principle", hlpc, 1.0),
      detail::make("(f-m_f)*(t) <= 2 inf_c (f-c)*(t), t<=1/2", "median optimality (rearrangement)", med_t, 2.0),
      detail::make("(f-m_f)*(t) <= 2 inf_c (f-c)*(t), t<1/2", "median optimality (rearrangement)", med_t_open, 2.0),
      detail::make("||f-m_f||_X <= 4 inf_c ||f-c||_X", "median optimality (norm)", med_norm, 4.0),
  };
}

inline std::vector<Check> exact_packing(const std::vector<Sample>& corpus) {
  detail::Ratio sand_lo, sand_hi, g_jn, x_garo, gam4, gam2;
  for (const Sample& s : corpus) {
    const GridFunction& f = s.f;
    const GridShape g = f.shape();
    for (const Cube& q : enumerate_cubes(g)) {
      const double mq = measure(q, g), mo = mean_oscillation(f, q), d = double_oscillation(f, q);
      sand_lo.add(mq * mo, d, 1.0, s.id);
      sand_hi.add(d, mq * mo, 2.0, s.id);
    }
    for (double p : {2.0, 3.0}) {
      const PackingValue G = gp_norm(f, p);
      PackingValue J = jn_norm(f, p);
      if (!J.exact) {
        // Greedy JN is a lower bound; the G witness gives another one.
        CompensatedSum a;
        for (const Cube& q : G.witness.cubes) a.add(measure(q, g) * std::pow(mean_oscillation(f, q), p));
        J.value = std::max(J.value, std::pow(a.value(), 1.0 / p));
      }
      g_jn.add(G.value, J.value, 2.0, s.id + " p=" + std::to_string(p));
    }
    auto abs4 = f.abs();
    std::vector<double> v4(abs4.values());
    for (double& x : v4) x *= 4.0;
    const GammaCheck c4 = gamma_membership(f, GridFunction(g, v4));
    gam4.add(c4.member ? 0.0 : 1.0, 1.0, 0.0, s.id);
    auto fs = sharp_maximal(f);
    std::vector<double> v2(fs.values());
    for (double& x : v2) x *= 2.0;
    const GammaCheck c2 = gamma_membership(f, GridFunction(g, v2));
    gam2.add(c2.member ? 0.0 : 1.0, 1.0, 0.0, s.id);
    for (const RISpace& x : detail::space_family()) {
      const double nx = norm(x, f);
      double garo_value = garo_norm(f, x).lower;
      if (g.dim == 1 && g.res <= garo_exact_max_res_1d && (x.is_l1() || x.is_linf()))
        garo_value = garo_exact(f, x).value;
      x_garo.add(garo_value, nx, 4.0, s.id + " " + x.name());
    }
  }
  return {
      detail::make("|Q| osc(Q) <= D(Q)", "double-oscillation sandwich (lower)", sand_lo, 1.0),
      detail::make("D(Q) <= 2 |Q| osc(Q)", "double-oscillation sandwich (upper)", sand_hi, 2.0),
      detail::make("||f||_{G_p} <= 2 ||f||_{JN_p}", "G_p <= 2 JN_p", g_jn, 2.0),
      detail::make("4|f| in Gamma_f", "X embeds in GaRo_X with factor 4", gam4, 0.0),
      detail::make("2 f# in Gamma_f", "X# embeds in GaRo_X", gam2, 0.0),
      detail::make("GaRo_X (exact or certified lower) <= 4 ||f||_X", "X embeds in GaRo_X with factor 4", x_garo, 4.0),
  };
}

inline std::vector<Check> exact_kfunctional(const std::vector<Sample>& corpus, const Config& cfg) {
  detail::Ratio mono, k1, f1;
  std::size_t profiles = 0, bad_profiles = 0;
  std::string bad_where;
  auto record = [&](const KProfile& k, const std::string& id) {
    ++profiles;
    if (!check_profile(k).ok()) {
      ++bad_profiles;
      bad_where = id + " " + k.label();
    }
  };
  for (const Sample& s : corpus) {
    const GridFunction f = s.f.mean_zero();
    const auto tg = default_t_grid(f);
    record(k_l1_linf(f, tg), s.id);
    for (KMethod m : {KMethod::BS, KMethod::JT, KMethod::PACK}) record(k_l1_bmo(f, tg, m, cfg.s), s.id);
    const double l1 = f.l1_norm();
    const double t_last = 1.0 - 0.5 * f.cell_measure();
    f1.add(l1, sharp_packing_profile(f)(t_last), 1.0, s.id);
  }
  // Exact K by linear programming where it is affordable.
  std::vector<Sample> tiny;
  for (const Sample& s : corpus)
    if (s.f.dim() == 1 && s.f.res() <= k_lp_max_res_1d) tiny.push_back(s);
  for (int i = 0; i < 10; ++i)
    tiny.push_back({"2d_N4_steps" + std::to_string(i), gen::random_steps({2, 4}, cfg.seed + 77 + std::uint64_t(i), 3)});
  for (const Sample& s : tiny) {
    const GridFunction f = s.f.mean_zero();
    const KProfile k = k_l1_bmo(f, {0.125, 0.25, 0.5, 0.75, 1.0}, KMethod::LP);
    record(k, s.id);
    k1.add(k.values.back(), f.l1_norm(), 1.0, s.id, 1e-9);
  }
  Check m{"K monotone and K/t antitone (L1Linf, BS, JT, PACK, LP)", "K(t) increases, K(t)/t decreases", true,
          bad_profiles == 0, double(bad_profiles), 0.0,
          std::to_string(profiles) + " profiles" + (bad_where.empty() ? "" : ", first bad " + bad_where)};
  return {
      m,
      detail::make("K(1) <= ||f||_1 (exact K by LP, mean zero)", "K(1) <= ||f||_1", k1, 1.0),
      detail::make("||f||_1 <= F(t) just below t=1", "F_{f,#}(1-) >= ||f||_1 via the packing {Q0}", f1, 1.0),
  };
}

/// Vitali selection: the thresholded selection recovers (f#)* at the dilated
/// argument, and is itself a packing value so it never exceeds F.
inline std::vector<Check> vitali_bounds(const std::vector<Sample>& corpus) {
  detail::Ratio lower, upper;
  for (const Sample& s : corpus) {
    if (s.f.res() > (s.f.dim() == 1 ? 32 : 12)) continue;
    const GridShape g = s.f.shape();
    const double dil = std::pow(5.0, g.dim);
    const StepProfile sh = rearrange(sharp_maximal(s.f));
    const SharpPackingProfile F = sharp_packing_profile(s.f);
    for (double t : detail::cell_t_grid(s.f.size(), 1.0 / dil, false)) {
      const double est = vitali_threshold_estimate(s.f, t);
      const std::string id = s.id + " t=" + std::to_string(t);
      lower.add(sh(std::min(1.0, dil * t)), est, 1.0, id);
      if (F.exact) upper.add(est, F(t), 1.0, id);
    }
  }
  return {
      detail::make("(f#)*(5^d t) <= Vitali estimate, t <= 5^-d", "Vitali selection with factor 5^d", lower, 1.0),
      detail::make("Vitali estimate <= F_{f,#}(t)", "packing kernel F_{f,#}", upper, 1.0),
  };
}

// ---------------------------------------------------------------- criterion 3

inline std::vector<Check> equivalence_kfunctional(const std::vector<Sample>& corpus, const Config& cfg) {
  std::vector<Check> out;
  for (int d = 1; d <= 2; ++d) {
    const double cap = std::pow(5.0, d) * 16.0;
    std::map<std::string, std::pair<double, double>> range;  // min, max ratio
    std::map<std::string, std::string> argmax;
    std::size_t zero_mismatch = 0;
    for (const Sample& s : corpus) {
      if (s.f.dim() != d) continue;
      const GridFunction f = s.f.mean_zero();
      const auto tg = default_t_grid(f);
      const KProfile bs = k_l1_bmo(f, tg, KMethod::BS, cfg.s), jt = k_l1_bmo(f, tg, KMethod::JT, cfg.s),
                     pk = k_l1_bmo(f, tg, KMethod::PACK, cfg.s);
      const std::pair<const KProfile*, const KProfile*> pairs[] = {{&bs, &jt}, {&bs, &pk}, {&jt, &pk}};
      for (auto [a, b] : pairs) {
        const std::string key = a->label() + "/" + b->label();
        auto& r = range.try_emplace(key, std::numeric_limits<double>::infinity(), 0.0).first->second;
        for (std::size_t i = 0; i < tg.size(); ++i) {
          const double x = a->values[i], y = b->values[i];
          if (x <= 1e-14 && y <= 1e-14) continue;
          if (x <= 1e-14 || y <= 1e-14) {
            ++zero_mismatch;
            continue;
          }
          const double q = x / y;
          if (q < r.first) r.first = q;
          if (q > r.second) {
            r.second = q;
            argmax[key] = s.id + " t=" + std::to_string(tg[i]);
          }
        }
      }
    }
    for (auto& [key, r] : range) {
      const double C = std::max(r.second, 1.0 / r.first);
      Check c{"K ratio " + key + " within [1/C, C], d=" + std::to_string(d),
              "equivalent K-functional formulas (Bennett-Sharpley, Jawerth-Torchinsky, packing)",
              true,
              C <= cap && zero_mismatch == 0,
              C,
              cap,
              "min " + std::to_string(r.first) + ", max " + std::to_string(r.second) + " at " + argmax[key]};
      if (zero_mismatch) c.note += ", " + std::to_string(zero_mismatch) + " zero/nonzero mismatches";
      out.push_back(c);
    }
  }
  return out;
}

inline std::vector<Check> equivalence_maximal(const std::vector<Sample>& corpus, const Config& cfg) {
  std::vector<Check> out;
  for (int d = 1; d <= 2; ++d) {
    const double cap = std::pow(5.0, d) * 16.0;
    detail::Ratio herz_up, herz_dn, locmax;
    for (const Sample& s : corpus) {
      if (s.f.dim() != d) continue;
      const GridFunction& f = s.f;
      const StepProfile fs = rearrange(f);
      const StepProfile mf = rearrange(hl_maximal(f));
      const RunningAverage fss(fs);
      for (double t : detail::cell_t_grid(f.size(), 1.0, false)) {
        herz_up.add(mf(t), fss(t), cap, s.id);
        herz_dn.add(fss(t), mf(t), cap, s.id);
      }
      // f* laid out as a decreasing function on a 1D grid, one cell per cell of f.
      std::vector<double> sorted(f.values());
      for (double& x : sorted) x = std::abs(x);
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      const GridFunction fst({1, int(sorted.size())}, sorted);
      const RunningAverage lhs(rearrange(local_maximal(fst, cfg.s, CubeFamily::full)));
      const RunningAverage rhs(rearrange(local_maximal(f, cfg.s)));
      for (double t : detail::cell_t_grid(f.size(), 1.0, false)) locmax.add(lhs(t), rhs(t), cap, s.id);
    }
    const std::string dd = ", d=" + std::to_string(d);
    out.push_back(detail::make("(Mf)*(t) <= C f**(t)" + dd, "Herz-Stein rearrangement inequality", herz_up, cap));
    out.push_back(detail::make("f**(t) <= C (Mf)*(t)" + dd, "Herz-Stein rearrangement inequality", herz_dn, cap));
    out.push_back(detail::make("(M#_s f*)**(t) <= C (M#_s f)**(t)" + dd,
                               "local maximal operator under rearrangement", locmax, cap));
  }
  return out;
}

// ---------------------------------------------------------------- criterion 4

inline std::vector<Check> pointwise_lemmas(const std::vector<Sample>& corpus, const Config& cfg) {
  std::vector<double> sweep;
  for (int j = 1; j <= 20; ++j) sweep.push_back(double(j) / 21.0);
  std::vector<bool> sweep_ok(sweep.size(), true);
  detail::Ratio hl, osc;
  for (const Sample& s : corpus) {
    const GridFunction& f = s.f;
    const GridShape g = f.shape();
    const double bound = 2.0 * std::pow(8.0, g.dim) / cfg.s;
    const GridFunction fsharp = sharp_maximal(f);
    const GridFunction ms = local_maximal(f, cfg.s);
    const GridFunction mms = hl_maximal(ms);
    for (std::size_t i = 0; i < f.size(); ++i) hl.add(mms[i], fsharp[i], bound, s.id);

    std::vector<double> all_s(sweep);
    all_s.push_back(cfg.s);
    const auto maps = local_maximal_sweep(f, all_s);
    const auto cubes = enumerate_cubes(g);
    std::vector<double> mo(cubes.size());
    for (std::size_t c = 0; c < cubes.size(); ++c) mo[c] = mean_oscillation(f, cubes[c]);
    for (std::size_t j = 0; j < all_s.size(); ++j) {
      for (std::size_t c = 0; c < cubes.size(); ++c) {
        CompensatedSum a;
        for_each_cell(cubes[c], g, [&](std::size_t i) { a.add(maps[j][i]); });
        const double avg = a.value() / double(cubes[c].cell_count(g.dim));
        if (j + 1 == all_s.size())
          osc.add(mo[c], avg, 8.0, s.id);
        else if (mo[c] > 8.0 * avg + 1e-12 * (1.0 + mo[c]))
          sweep_ok[j] = false;
      }
    }
  }
  double s0 = 0.0;
  for (std::size_t j = 0; j < sweep.size(); ++j)
    if (sweep_ok[j]) s0 = sweep[j];
  Check rep{"largest s on the 20-point sweep with the cube bound", "cube oscillation bounded by 8 M#_s f", false, true,
            s0, 0.0, "sweep j/21, j=1..20"};
  return {
      detail::make("M(M#_s f) <= (2 8^d / s) f# pointwise, s=" + std::to_string(cfg.s),
                   "Hardy-Littlewood maximal of M#_s bounded by f#", hl, 1.0),
      detail::make("osc(Q) <= 8 avg_Q M#_s f, s=" + std::to_string(cfg.s), "cube oscillation bounded by 8 M#_s f",
                   osc, 8.0),
      rep,
  };
}

// ---------------------------------------------------------------- criterion 5

inline std::vector<Check> oscillation_inequality(const std::vector<Sample>& corpus) {
  detail::Ratio r;
  for (const Sample& s : corpus) {
    const StepProfile fs = rearrange(s.f);
    const RunningAverage fss(fs);
    const StepProfile sh = rearrange(sharp_maximal(s.f));
    // Both sides are constant in f* and (f#)* on each cell interval while f**
    // decreases, so left endpoints carry the supremum.
    for (double t : detail::cell_t_grid(s.f.size(), 1.0 / 6.0, true)) r.add(fss(t) - fs(t), sh(t), 100.0, s.id);
  }
  Check c = detail::make("f**(t) - f*(t) <= c (f#)*(t), t < 1/6", "oscillation of f** - f* controlled by (f#)*", r,
                         100.0);
  c.note += "; the bound 100 is a sanity ceiling, not a sharp constant";
  return {c};
}

// ---------------------------------------------------------------- criterion 6

inline std::vector<Check> fefferman_stein(const std::vector<Sample>& corpus, const Config& cfg) {
  std::vector<Check> out;
  for (double p : {2.0, 3.0}) {
    const RISpace x = RISpace::lp(p);
    detail::Ratio fs, garo;
    for (const Sample& s : corpus) {
      const double sharp = sharp_norm(s.f, x);
      fs.add(detail::min_shift_norm(x, s.f), sharp, std::numeric_limits<double>::infinity(), s.id);
      garo.add(sharp, garo_norm(s.f, x, cfg.s).upper, std::numeric_limits<double>::infinity(), s.id);
    }
    const std::string nm = "L" + std::to_string(int(p));
    Check a = detail::make("inf_c ||f-c||_" + nm + " <= C ||f#||_" + nm, "Fefferman-Stein inequality (alpha_X > 0)", fs,
                           0.0, false);
    Check b = detail::make("||f#||_" + nm + " <= C' GaRo upper (16 ||M#_s f||)",
                           "X# contains GaRo_X when beta_X < 1", garo, 0.0, false);
    for (Check* c : {&a, &b}) {
      // The constants must at least be finite.
      Check fin = *c;
      fin.name += " (finite)";
      fin.hard = true;
      fin.passed = std::isfinite(c->measured);
      out.push_back(*c);
      out.push_back(fin);
    }
  }
  return out;
}

inline std::vector<Check> l1_sharp_blowup(const Config& cfg) {
  const GridShape g{1, 1 << cfg.l1_log_res};
  std::vector<double> ratios;
  std::string trace;
  for (int k = 2; k <= 8; ++k) {
    const GridFunction f = gen::logspike(g, std::ldexp(1.0, -k));
    const double r = sharp_norm(f, RISpace::lp(1)) / f.l1_norm();
    ratios.push_back(r);
    trace += (k > 2 ? ", " : "") + std::to_string(r);
  }
  bool increasing = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) increasing = increasing && ratios[i] > ratios[i - 1];
  return {Check{"||f_a#||_1 / ||f_a||_1 increases along a=2^-k, k=2..8",
                "X contained in X# fails for L1 (beta_X = 1)", true, increasing, ratios.back() / ratios.front(), 0.0,
                "N=2^" + std::to_string(cfg.l1_log_res) + "; ratios " + trace}};
}

// ---------------------------------------------------------------- criterion 7

inline std::vector<Check> blowup(const Config& cfg) {
  const GridShape g{1, 1 << cfg.blowup_log_res};
  const RISpace m = RISpace::marcinkiewicz(Phi::log_slow()), l2 = RISpace::lp(2);
  std::vector<double> rm, r2;
  std::string trace_m, trace_2;
  for (int k = 2; k <= 10; ++k) {
    const GridFunction f = gen::logspike(g, std::ldexp(1.0, -k));
    const StepProfile num = rearrange(f.shifted(median(f)));
    const StepProfile den = rearrange(local_maximal(f, cfg.s));
    rm.push_back(norm(m, num) / norm(m, den));
    r2.push_back(norm(l2, num) / norm(l2, den));
    trace_m += (k > 2 ? ", " : "") + std::to_string(rm.back());
    trace_2 += (k > 2 ? ", " : "") + std::to_string(r2.back());
  }
  bool increasing = true;
  for (std::size_t i = 1; i < rm.size(); ++i) increasing = increasing && rm[i] > rm[i - 1];
  const double growth = rm.back() / rm.front();
  const auto [lo, hi] = std::minmax_element(r2.begin(), r2.end());
  const double band = *hi / *lo;
  const std::string res = "N=2^" + std::to_string(cfg.blowup_log_res);
  return {
      Check{"log-slow Marcinkiewicz: ratio increases along a=2^-k, k=2..10", "failure of the median inequality when alpha_X = 0",
            true, increasing, growth, 0.0, res + "; ratios " + trace_m},
      Check{"log-slow Marcinkiewicz: last/first ratio > 3", "failure of the median inequality when alpha_X = 0", true,
            growth > 3.0, growth, 3.0, res},
      Check{"L2: max/min ratio < 2", "median inequality holds when alpha_X > 0", true, band < 2.0, band, 2.0,
            res + "; ratios " + trace_2},
  };
}

// ---------------------------------------------------------------- criterion 8

/// Morrey chain in 1D with alpha = 3/4, p = 4: the Campanato norm with
/// lambda = 1/p - alpha is at most the W^{alpha,p} seminorm. Cauchy-Schwarz
/// with |x - y| <= |Q| gives the constant 1 on every cube.
inline std::vector<Check> morrey(const Config& cfg) {
  const double alpha = 0.75, p = 4.0, lambda = 1.0 / p - alpha;
  detail::Ratio r;
  int idx = 0;
  for (int n : {16, 32, 64}) {
    for (int i = 0; i < 17 && idx < 50; ++i, ++idx) {
      const GridShape g{1, n};
      const std::uint64_t sd = cfg.seed + 5000 + std::uint64_t(idx);
      const GridFunction f = idx % 2 ? gen::random_steps(g, sd, 2 + i % 6) : gen::cosine_mix(g, sd, 1 + i % 4);
      r.add(campanato_norm(f, lambda), sobolev_seminorm(f, alpha, p), 1.0,
            (idx % 2 ? "steps" : "cos") + std::to_string(idx) + "_N" + std::to_string(n));
    }
  }
  Check c = detail::make("campanato(f, 1/p - alpha) <= C W^{alpha,p}(f), alpha=0.75, p=4, C=1",
                         "fractional Sobolev embedding into Campanato", r, 1.0);
  return {c};
}

// ---------------------------------------------------------------- criterion 9

inline std::vector<std::pair<std::string, double>> refinement_functionals(const GridFunction& f, const Config& cfg) {
  std::vector<std::pair<std::string, double>> r;
  const RISpace l1 = RISpace::lp(1), l2 = RISpace::lp(2);
  r.emplace_back("jn_norm p=2", jn_norm(f, 2).value);
  r.emplace_back("gp_norm p=2", gp_norm(f, 2).value);
  r.emplace_back("gp_norm p=inf", gp_norm(f, std::numeric_limits<double>::infinity()).value);
  r.emplace_back("bmo", bmo_norm(f));
  r.emplace_back("sharp L2", sharp_norm(f, l2));
  const GaRoEstimate e = garo_norm(f, l2, cfg.s);
  r.emplace_back("garo L2 upper", e.upper);
  r.emplace_back("garo L2 lower", e.lower);
  r.emplace_back("garo_p_lambda p=2 lambda=-1/2", garo_p_lambda(f, 2, -0.5).value);
  r.emplace_back("campanato lambda=-1/2", campanato_norm(f, -0.5));
  r.emplace_back("sobolev alpha=3/4 p=4", sobolev_seminorm(f, 0.75, 4));
  const GridFunction c = f.shifted(median(f));
  r.emplace_back("||f-m_f||_1", norm(l1, c));
  r.emplace_back("||f-m_f||_2", norm(l2, c));
  r.emplace_back("sup (f** - f*)", oscillation_gap(f).sup);
  const std::vector<double> tg{0.1, 0.25, 0.5};
  for (KMethod m : {KMethod::BS, KMethod::JT, KMethod::PACK}) {
    const KProfile k = k_l1_bmo(f, tg, m, cfg.s);
    for (std::size_t i = 0; i < tg.size(); ++i) r.emplace_back("K " + k.label() + " t=" + std::to_string(tg[i]), k.values[i]);
  }
  return r;
}

inline std::vector<Check> refinement(const Config& cfg) {
  double worst = 0.0;
  std::string where;
  std::size_t count = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto a = refinement_functionals(gen::cosine_mix({1, 64}, seed), cfg);
    const auto b = refinement_functionals(gen::cosine_mix({1, 128}, seed), cfg);
    for (std::size_t i = 0; i < a.size(); ++i, ++count) {
      const double rel = std::abs(b[i].second - a[i].second) / std::abs(a[i].second);
      if (!(rel <= worst)) {
        worst = rel;
        where = a[i].first + " (cosine_mix seed " + std::to_string(seed) + ")";
      }
    }
  }
  return {Check{"relative change N=64 -> 128 below 2%", "discretization stability", true, worst < 0.02, worst, 0.02,
                std::to_string(count) + " functionals, worst " + where}};
}

// ---------------------------------------------------------------- suites

inline const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{"rearr", "maximal", "garo", "kfun", "morrey", "blowup"};
  return ids;
}

inline std::vector<Check> run_suite(const std::string& id, const Config& cfg) {
  std::vector<Check> out;
  auto append = [&](std::vector<Check> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (id == "morrey") {
    append(morrey(cfg));
    return out;
  }
  if (id == "blowup") {
    append(blowup(cfg));
    append(l1_sharp_blowup(cfg));
    return out;
  }
  const auto corpus = build_corpus(cfg.seed);
  if (id == "rearr") {
    append(exact_rearrangement(corpus));
    append(oscillation_inequality(corpus));
  } else if (id == "maximal") {
    append(pointwise_lemmas(corpus, cfg));
    append(equivalence_maximal(corpus, cfg));
    append(fefferman_stein(corpus, cfg));
    append(refinement(cfg));
  } else if (id == "garo") {
    append(oracle_packings(cfg));
    append(exact_packing(corpus));
  } else if (id == "kfun") {
    append(vitali_bounds(corpus));
    append(exact_kfunctional(corpus, cfg));
    append(equivalence_kfunctional(corpus, cfg));
  } else {
    throw ConfigError("unknown suite: " + id);
  }
  return out;
}

inline nlohmann::ordered_json report(const std::string& suite, const Config& cfg, const std::vector<Check>& checks) {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["suite"] = suite;
  j["config"] = to_json(cfg);
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["paper_anchor"] = c.anchor;
    e["status"] = c.status();
    if (std::isfinite(c.measured))
      e["measured_constant"] = c.measured;
    else
      e["measured_constant"] = "inf";
    e["tolerance"] = c.tolerance;
    e["note"] = c.note;
    arr.push_back(e);
  }
  j["passed"] = all_passed(checks);
  return j;
}

}  // namespace oscilab::verify
