#include <catch_amalgamated.hpp>

#include "oscilab/functionals.hpp"
#include "oscilab/generators.hpp"

using namespace oscilab;
using Catch::Approx;

namespace {
const GridFunction f10({1, 2}, {1.0, 0.0});
const double inf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("packing functionals on two cells") {
  for (double p : {1.5, 2.0, 4.0}) CHECK(jn_norm(f10, p).value == Approx(0.5));
  CHECK(gp_norm(f10, 2).value == Approx(0.5));
  CHECK(gp_norm(f10, inf).value == Approx(0.5));
  CHECK(garo_p_lambda(f10, 2, 0.0).value == Approx(0.5));
  const GridFunction c = GridFunction::constant({2, 4}, 3.0);
  CHECK(jn_norm(c, 2).value == 0.0);
  CHECK(gp_norm(c, 2).value == 0.0);
  CHECK(garo_p_lambda(c, 2, -0.5).value == 0.0);
}

TEST_CASE("G_p <= 2 JN_p") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GridFunction f = seed % 2 ? gen::cosine_mix({1, 24}, seed) : gen::random_steps({1, 32}, seed);
    for (double p : {1.5, 2.0, 3.0}) CHECK(gp_norm(f, p).value <= 2 * jn_norm(f, p).value * (1 + 1e-12));
  }
}

TEST_CASE("GaRo_{p,lambda} reduces to G_p at lambda = 0") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const GridFunction f = seed % 2 ? gen::random_steps({1, 20}, seed) : gen::random_steps({2, 4}, seed);
    for (double p : {2.0, 3.0, inf}) CHECK(garo_p_lambda(f, p, 0.0).value == Approx(gp_norm(f, p).value).epsilon(1e-12));
  }
}

TEST_CASE("GaRo_{inf,lambda} is comparable to Campanato") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const GridFunction f = gen::cosine_mix({1, 32}, seed);
    for (double lambda : {-0.75, -0.5, -0.1}) {
      const double g = garo_p_lambda(f, inf, lambda).value, c = campanato_norm(f, lambda);
      CHECK(c <= g * (1 + 1e-12));
      CHECK(g <= 2 * c * (1 + 1e-12));
    }
  }
}

TEST_CASE("Gamma_f membership") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const GridFunction f = gen::random_steps({seed % 2 ? 1 : 2, 8}, seed);
    std::vector<double> four(f.abs().values()), two(sharp_maximal(f).values());
    for (double& x : four) x *= 4;
    for (double& x : two) x *= 2;
    CHECK(gamma_membership(f, GridFunction(f.shape(), four)).member);
    CHECK(gamma_membership(f, GridFunction(f.shape(), two)).member);
    CHECK_FALSE(gamma_membership(f, GridFunction::constant(f.shape(), 0.0)).member);
  }
}

TEST_CASE("GaRo exact linear program") {
  const GaRoLP l1 = garo_exact(f10, RISpace::lp(1));
  CHECK(l1.value == Approx(0.5));
  CHECK(garo_exact(f10, RISpace::linf()).value == Approx(0.5));
  const GaRoEstimate e = garo_norm(f10, RISpace::lp(1), default_local_s, true);
  REQUIRE(e.exact);
  CHECK(*e.exact == Approx(0.5));
  CHECK(e.lower <= *e.exact + 1e-12);
  CHECK(*e.exact <= e.upper + 1e-12);
  const GaRoEstimate z = garo_norm(GridFunction::constant({1, 8}, 2.0), RISpace::lp(2));
  CHECK(z.upper == 0.0);
  CHECK(z.lower == 0.0);
  CHECK_THROWS_AS(garo_exact(gen::cosine_mix({1, 64}, 1), RISpace::lp(1)), ConfigError);
  CHECK_THROWS_AS(garo_exact(f10, RISpace::lp(2)), ConfigError);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const GridFunction f = gen::random_steps({1, 12}, seed);
    for (const RISpace& x : {RISpace::lp(1), RISpace::linf()}) {
      const double v = garo_exact(f, x).value;
      CHECK(v <= 4 * norm(x, f) * (1 + 1e-12));
      const GaRoEstimate est = garo_norm(f, x);
      CHECK(est.lower <= v * (1 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("Campanato norm") {
  CHECK(campanato_norm(GridFunction::constant({1, 8}, 1.0), -0.5) == 0.0);
  const GridFunction f = gen::random_steps({1, 16}, 4);
  CHECK(campanato_norm(f, 0.0) == Approx(bmo_norm(f)));
  // f(x) = x at cell centers: k cells have mean oscillation k h / 4 (k even) or (k^2 - 1) h / (4k) (k odd).
  const int n = 32;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = (i + 0.5) / n;
  const double lambda = -0.5;
  double expect = 0;
  for (int k = 1; k <= n; ++k) {
    const double len = double(k) / n;
    const double mo = (k % 2 ? (double(k * k) - 1) / (4.0 * k) : k / 4.0) / n;
    expect = std::max(expect, std::pow(len, -lambda) * mo);
  }
  CHECK(campanato_norm(GridFunction({1, n}, v), lambda) == Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(campanato_norm(f, 0.5), ConfigError);
}

TEST_CASE("Sobolev seminorm") {
  CHECK(sobolev_seminorm(GridFunction::constant({2, 4}, 5.0), 0.5, 2) == 0.0);
  for (int n : {2, 4, 6}) {
    std::vector<double> v(n, 0.0);
    for (int i = 0; i < n / 2; ++i) v[i] = 1.0;
    const GridFunction f({1, n}, v);
    const double alpha = 0.75, p = 4, h = 1.0 / n;
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += std::pow(std::abs(v[i] - v[j]), p) / std::pow(std::abs(i - j) * h, 1 + alpha * p) * h * h;
    CHECK(sobolev_seminorm(f, alpha, p) == Approx(std::pow(s, 1 / p)).epsilon(1e-12));
  }
}

TEST_CASE("Morrey chain on one smooth function") {
  const GridFunction f = gen::cosine_mix({1, 32}, 3);
  CHECK(campanato_norm(f, 0.25 - 0.75) <= sobolev_seminorm(f, 0.75, 4));
}
