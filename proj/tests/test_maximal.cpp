#include <catch_amalgamated.hpp>

#include "oscilab/generators.hpp"
#include "oscilab/maximal.hpp"

using namespace oscilab;
using Catch::Approx;

namespace {
const GridFunction f10({1, 2}, {1.0, 0.0});

std::vector<double> vals(const GridFunction& f) { return f.values(); }

// inf_c inf{a : #{|v - c| > a} < s m} by brute force over centers c at
// midpoints of value pairs.
double quantile_brute(const std::vector<double>& v, double s) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> centers;
  for (double x : v)
    for (double y : v) centers.push_back(0.5 * (x + y));
  for (double c : centers) {
    std::vector<double> dev;
    for (double x : v) dev.push_back(std::abs(x - c));
    std::sort(dev.begin(), dev.end());
    for (std::size_t j = 0; j <= dev.size(); ++j) {
      const double a = j == 0 ? 0.0 : dev[j - 1];
      std::size_t over = 0;
      for (double d : dev) over += d > a;
      if (double(over) < s * double(v.size())) {
        best = std::min(best, a);
        break;
      }
    }
  }
  return best;
}
}  // namespace

TEST_CASE("Hardy-Littlewood maximal") {
  CHECK(vals(hl_maximal(GridFunction::constant({2, 4}, -3.0))) == std::vector<double>(16, 3.0));
  CHECK(vals(hl_maximal(f10)) == std::vector<double>{1.0, 0.5});
}

TEST_CASE("sharp maximal") {
  CHECK(vals(sharp_maximal(GridFunction::constant({1, 5}, 2.0))) == std::vector<double>(5, 0.0));
  CHECK(vals(sharp_maximal(f10)) == std::vector<double>{0.5, 0.5});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GridFunction f = gen::random_steps({2, 6}, seed);
    const auto fs = sharp_maximal(f);
    CHECK(*std::max_element(fs.values().begin(), fs.values().end()) == Approx(bmo_norm(f)));
  }
}

TEST_CASE("quantile oscillation") {
  CHECK(quantile_oscillation(GridFunction({1, 4}, {0, 0, 1, 5}), Cube{{0, 0}, 4}, 0.3) == 0.5);
  CHECK(quantile_oscillation(GridFunction::constant({1, 4}, 1.0), Cube{{0, 0}, 4}, 0.3) == 0.0);
  CHECK(quantile_oscillation(GridFunction({1, 4}, {0, 0, 1, 5}), Cube{{0, 0}, 4}, 1e-6) == 2.5);
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> v(3 + trial % 9);
    for (double& x : v) x = double(rng.integer(0, 10));
    const double s = 0.05 + 0.9 * rng.uniform();
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(quantile_oscillation_sorted(sorted, s) == Approx(quantile_brute(v, s)).margin(1e-9));
  }
}

TEST_CASE("local maximal") {
  CHECK(vals(local_maximal(f10, 0.4)) == std::vector<double>{0.5, 0.5});
  CHECK(vals(local_maximal(f10, 0.6)) == std::vector<double>{0.0, 0.0});
  CHECK_THROWS_AS(local_maximal(f10, 1.5), ConfigError);
  // Chebyshev: M#_s f <= f# / s.
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const GridFunction f = seed % 2 ? gen::cosine_mix({1, 40}, seed) : gen::random_steps({2, 10}, seed);
    for (double s : {0.05, 0.2, 0.5}) {
      const auto m = local_maximal(f, s);
      const auto fs = sharp_maximal(f);
      for (std::size_t i = 0; i < f.size(); ++i) CHECK(m[i] <= fs[i] / s + 1e-12);
    }
  }
}

TEST_CASE("local maximal sweep matches single evaluations") {
  const GridFunction f = gen::random_steps({2, 8}, 11);
  const std::vector<double> ss{0.05, 0.3, 0.6};
  const auto sweep = local_maximal_sweep(f, ss);
  for (std::size_t j = 0; j < ss.size(); ++j) CHECK(vals(sweep[j]) == vals(local_maximal(f, ss[j])));
}

TEST_CASE("monotone fast path agrees with the generic path") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto v = gen::cosine_mix({1, 37}, seed).values();
    std::sort(v.begin(), v.end(), seed % 2 ? std::function<bool(double, double)>(std::less<>())
                                           : std::function<bool(double, double)>(std::greater<>()));
    const GridFunction f({1, 37}, v);
    for (double s : {0.05, 0.25}) {
      const auto fast = local_maximal_monotone(f, s);
      const auto slow = cube_supremum(f, enumerate_cubes(f.shape()), [s](std::vector<double>& w) {
        std::sort(w.begin(), w.end());
        return quantile_oscillation_sorted(w, s);
      });
      CHECK(vals(fast) == vals(slow));
    }
  }
}

TEST_CASE("sharp norms") {
  CHECK(sharp_norm(GridFunction::constant({1, 8}, 4.0), RISpace::lp(1)) == 0.0);
  CHECK(sharp_norm(f10, RISpace::lp(1)) == Approx(0.5));
  const GridFunction f = gen::random_steps({1, 16}, 5);
  CHECK(sharp_norm(f, RISpace::linf()) == Approx(bmo_norm(f)));
}

TEST_CASE("cube families") {
  CHECK(cube_family({1, 256}).size() == 256 * 257 / 2);
  CHECK(cube_family({1, 512}).size() == 1023);
  CHECK_THROWS_AS(cube_family({1, 300}), ConfigError);
  CHECK(cube_family({2, 8}, CubeFamily::dyadic).size() == 85);
}
