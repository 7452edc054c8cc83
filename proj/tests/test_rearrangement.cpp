#include <catch_amalgamated.hpp>

#include "oscilab/generators.hpp"
#include "oscilab/rearrangement.hpp"
#include "oscilab/ri_space.hpp"
#include "oscilab/suites.hpp"

using namespace oscilab;
using Catch::Approx;

namespace {
const GridFunction f10({1, 2}, {1.0, 0.0});

// Composite Simpson on [a, b] with many panels; integrands here are smooth
// away from the step breakpoints we integrate between.
template <class Fn>
double simpson(Fn&& fn, double a, double b, int panels = 2000) {
  const double h = (b - a) / panels;
  double s = fn(a) + fn(b);
  for (int i = 1; i < panels; ++i) s += fn(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}
}  // namespace

TEST_CASE("distribution function") {
  CHECK(distribution(f10, 0.5) == 0.5);
  CHECK(distribution(f10, 2.0) == 0.0);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const GridFunction f = gen::random_steps({2, 8}, seed, 4);
    const StepProfile p = rearrange(f);
    for (int k = 0; k < 64; ++k) {
      const double s = (k + 0.5) / 64.0;
      CHECK(distribution(f, p(s)) <= s + 1e-12);
    }
    // Equimeasurability on the value set.
    for (double v : f.values()) {
      double m = 0;
      for (std::size_t i = 0; i < p.steps(); ++i)
        if (p.values()[i] > std::abs(v)) m += p.breakpoints()[i + 1] - p.breakpoints()[i];
      CHECK(distribution(f, std::abs(v)) == Approx(m).margin(1e-14));
    }
  }
}

TEST_CASE("rearrangement of |f|") {
  const StepProfile p = rearrange(GridFunction({1, 4}, {-3, 1, 0, 2}));
  CHECK(p(0.0) == 3);
  CHECK(p(0.3) == 2);
  CHECK(p(0.5) == 1);
  CHECK(p(0.8) == 0);
  CHECK(p(1.0) == 0);
}

TEST_CASE("double_star") {
  CHECK(double_star(StepProfile::constant(2.0))(0.37) == Approx(2.0));
  const StepProfile g({0, 1.0 / 3, 2.0 / 3, 1}, {3, 2, 1});
  CHECK(double_star(g)(2.0 / 3) == Approx(2.5).epsilon(1e-14));
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const StepProfile p = rearrange(gen::cosine_mix({1, 32}, seed));
    const RunningAverage pp(p);
    for (int k = 1; k <= 100; ++k) CHECK(pp(k / 100.0) >= p(k / 100.0) - 1e-14);
  }
}

TEST_CASE("oscillation gap") {
  CHECK(oscillation_gap(GridFunction::constant({1, 8}, 3.0)).sup == 0.0);
  // f = [1, 0]: f* = chi_(0,1/2); f**(t) - f*(t) = 1/(2t) on [1/2, 1), sup 1 at t -> 1/2+.
  const OscillationGap g = oscillation_gap(f10);
  CHECK(g(0.25) == 0.0);
  CHECK(g(0.75) == Approx(2.0 / 3));
  CHECK(g.sup == Approx(1.0));
  // f_a: f** - f* = 1 on (0, a) for the continuum profile ln(a/t).
  const OscillationGap ga = oscillation_gap(gen::logspike({1, 4096}, 0.25));
  for (double t : {0.01, 0.05, 0.1, 0.2}) CHECK(ga(t) <= 1.0 + 16.0 / 4096);
}

TEST_CASE("dilation") {
  const StepProfile half = StepProfile::indicator(0.5);
  const StepProfile d1 = dilate(half, 1.0);
  CHECK(d1(0.4) == 1.0);
  CHECK(d1(0.6) == 0.0);
  const StepProfile q = dilate(half, 0.5);
  CHECK(q(0.2) == 1.0);
  CHECK(q(0.3) == 0.0);
  std::vector<StepProfile> battery;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) battery.push_back(rearrange(gen::random_steps({1, 16}, seed)));
  for (const RISpace& x : {RISpace::lp(1), RISpace::lp(2), RISpace::linf()})
    for (double s : {0.25, 0.5, 2.0, 3.0}) CHECK(dilation_norm_estimate(x, s, battery) <= std::max(1.0, s) + 1e-12);
}

TEST_CASE("Hardy operators") {
  CHECK(hardy_P(StepProfile::constant(1.0))(0.3) == Approx(1.0));
  const LogTail q1 = hardy_Q(StepProfile::constant(1.0));
  for (double t : {0.01, 0.3, 0.9}) CHECK(q1(t) == Approx(std::log(1.0 / t)).epsilon(1e-14));
  const StepProfile g({0, 0.2, 0.5, 1}, {4, 1.5, 0.25});
  const RunningAverage P(g);
  const LogTail Q(g);
  for (double t : {0.1, 0.2, 0.35, 0.5, 0.77}) {
    // Piecewise quadrature between breakpoints, midpoint value on each piece.
    double in = 0.0, lo = 0.0;
    for (double b : {0.2, 0.5, 1.0}) {
      const double hi = std::min(b, t);
      if (hi > lo) in += simpson([&](double) { return g(0.5 * (lo + hi)); }, lo, hi);
      lo = b;
    }
    CHECK(P(t) == Approx(in / t).epsilon(1e-9));
    // Q g(t) = int_t^1 g(u) du / u, integrated piecewise between breakpoints.
    double q = 0.0, from = t;
    for (double b : {0.2, 0.5, 1.0}) {
      if (b <= from) continue;
      q += simpson([&](double u) { return g(0.5 * (from + b)) / u; }, from, b);
      from = b;
    }
    CHECK(Q(t) == Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("median") {
  CHECK(median(f10) == 0.0);
  CHECK(median(GridFunction::constant({2, 3}, 4.0)) == 4.0);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const GridFunction f = gen::cosine_mix({1, 15}, seed);
    const double m = median(f);
    double above = 0, below = 0;
    for (double v : f.values()) {
      above += v > m;
      below += v < m;
    }
    CHECK(2 * above <= 15);
    CHECK(2 * below <= 15);
  }
}

TEST_CASE("median rearrangement factor 2 below t = 1/2") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GridFunction f = seed % 2 ? gen::cosine_mix({1, 24}, seed) : gen::random_steps({2, 6}, seed);
    const StepProfile p = rearrange(f.shifted(median(f)));
    for (double t : verify::detail::cell_t_grid(f.size(), 0.5, true)) {
      // inf over c in the candidate set of cell values and midpoints
      double best = std::numeric_limits<double>::infinity();
      for (double a : f.values())
        for (double b : f.values()) best = std::min(best, rearrange(f.shifted(0.5 * (a + b)))(t));
      CHECK(verify::detail::min_shift_rearrangement(f, t) == Approx(best).margin(1e-14));
      CHECK(p(t) <= 2 * best + 1e-12);
    }
  }
}

TEST_CASE("median rearrangement factor at t = 1/2 fails for a plateau median") {
  // Values A on half the cells, B on 7/16, C < B on 1/16: m = B is the
  // smallest median, (f - B)*(1/2) = |A - B| while (f - A)*(1/2) = 0.
  std::vector<double> v(16, 1.0);
  for (int i = 8; i < 15; ++i) v[i] = 0.0;
  v[15] = -2.0;
  const GridFunction f({1, 16}, v);
  CHECK(median(f) == 0.0);
  CHECK(rearrange(f.shifted(0.0))(0.5) == 1.0);
  CHECK(verify::detail::min_shift_rearrangement(f, 0.5) == 0.0);
}

TEST_CASE("HLPC majorization") {
  const StepProfile g = rearrange(gen::random_steps({1, 16}, 3));
  CHECK(hlpc_dominates(g, g));
  CHECK(hlpc_dominates(StepProfile::indicator(0.5), StepProfile::constant(1.0)));
  CHECK_FALSE(hlpc_dominates(StepProfile::constant(1.0), StepProfile::indicator(0.5)));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GridFunction f = gen::random_steps({1, 16}, seed);
    const StepProfile avg = rearrange(verify::detail::block_average(f, 4)), pf = rearrange(f);
    REQUIRE(hlpc_dominates(avg, pf, 1e-12));
    for (const RISpace& x : verify::detail::space_family()) CHECK(norm(x, avg) <= norm(x, pf) * (1 + 1e-12) + 1e-14);
  }
}

TEST_CASE("L1 contraction of rearrangement") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GridFunction f = gen::cosine_mix({1, 32}, seed), g = gen::random_steps({1, 32}, seed + 100);
    std::vector<double> diff(32);
    for (std::size_t i = 0; i < 32; ++i) diff[i] = f[i] - g[i];
    const StepProfile pf = rearrange(f), pg = rearrange(g);
    double lhs = 0;
    for (int k = 0; k < 32; ++k) lhs += std::abs(pf((k + 0.5) / 32) - pg((k + 0.5) / 32)) / 32;
    CHECK(lhs <= GridFunction({1, 32}, diff).l1_norm() + 1e-14);
  }
}
