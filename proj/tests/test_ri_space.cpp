#include <catch_amalgamated.hpp>

#include <fstream>

#include "oscilab/generators.hpp"
#include "oscilab/ri_space.hpp"

using namespace oscilab;
using Catch::Approx;

TEST_CASE("norms of simple profiles") {
  const StepProfile half = StepProfile::indicator(0.5);
  CHECK(norm(RISpace::lp(1), half) == Approx(0.5));
  CHECK(norm(RISpace::lp(2), half) == Approx(std::sqrt(0.5)));
  CHECK(norm(RISpace::linf(), half) == 1.0);
  CHECK(norm(RISpace::linf(), StepProfile({0, 0.1, 1}, {7, 2})) == 7.0);
}

TEST_CASE("weak L2 of a truncated t^{-1/2}") {
  // Steps of t^{-1/2} averaged on dyadic pieces: the maximal average
  // sqrt(s) (1/s) int_0^s g tends to 2 as the truncation refines.
  std::vector<double> bp{0.0}, vals;
  const int levels = 60;
  for (int k = levels; k >= 1; --k) bp.push_back(std::ldexp(1.0, -k));
  bp.push_back(1.0);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i], b = bp[i + 1];
    vals.push_back(2 * (std::sqrt(b) - std::sqrt(a)) / (b - a));
  }
  CHECK(norm(RISpace::weak_lp(2), StepProfile(bp, vals)) == Approx(2.0).epsilon(1e-9));
}

TEST_CASE("fundamental function") {
  CHECK(fundamental_function(RISpace::lp(2), 0.25) == Approx(0.5));
  const Phi phi = Phi::log_slow();
  for (double s : {0.01, 0.2, 0.7, 1.0}) {
    CHECK(fundamental_function(RISpace::marcinkiewicz(phi), s) == Approx(phi(s)));
    for (const RISpace& x : {RISpace::lp(1), RISpace::lp(3), RISpace::linf(), RISpace::weak_lp(2),
                             RISpace::marcinkiewicz(phi)})
      CHECK(norm(x, StepProfile::indicator(s)) == Approx(fundamental_function(x, s)).epsilon(1e-12));
  }
}

TEST_CASE("Boyd indices") {
  const auto l3 = boyd_indices(RISpace::lp(3));
  CHECK(l3.alpha == Approx(1.0 / 3));
  CHECK(l3.beta == Approx(1.0 / 3));
  CHECK(l3.exact);
  const auto li = boyd_indices(RISpace::linf());
  CHECK(li.alpha == 0.0);
  CHECK(li.beta == 0.0);
  const auto m = boyd_indices(RISpace::marcinkiewicz(Phi::log_slow()));
  CHECK_FALSE(m.exact);
  CHECK(m.alpha < 0.05);
  const auto w = boyd_indices(RISpace::marcinkiewicz(Phi::power(2)));
  CHECK(w.alpha == Approx(0.5).margin(1e-6));
}

TEST_CASE("dilation estimate") {
  std::vector<StepProfile> battery{StepProfile::indicator(0.3)};
  CHECK(dilation_norm_estimate(RISpace::lp(1), 1.0, battery) == Approx(1.0));
  CHECK(dilation_norm_estimate(RISpace::lp(1), 0.5, battery) == Approx(0.5));
  for (std::uint64_t seed = 1; seed <= 8; ++seed) battery.push_back(rearrange(gen::cosine_mix({1, 16}, seed)));
  for (const RISpace& x : {RISpace::lp(2), RISpace::weak_lp(2), RISpace::marcinkiewicz(Phi::log_slow())})
    for (double s : {0.1, 0.5, 2.0, 8.0}) CHECK(dilation_norm_estimate(x, s, battery) <= std::max(1.0, s) + 1e-12);
}

TEST_CASE("space parsing") {
  CHECK(RISpace::parse("lp:2").name() == "lp:2");
  CHECK(RISpace::parse("lp:inf").is_linf());
  CHECK(RISpace::parse("weak:3").family() == RISpace::Family::weak_lp);
  CHECK(RISpace::parse("marcinkiewicz:log-slow").family() == RISpace::Family::marcinkiewicz);
  CHECK_THROWS_AS(RISpace::parse("lq:2"), ConfigError);
  CHECK_THROWS_AS(RISpace::parse("lp:0.5"), ConfigError);
  CHECK_THROWS_AS(RISpace::parse("marcinkiewicz:/nonexistent.csv"), ConfigError);

  const std::string path = "phi_table_test.csv";
  {
    std::ofstream out(path);
    out << "s,phi\n0.25,0.5\n1,1\n";
  }
  const RISpace x = RISpace::parse("marcinkiewicz:" + path);
  CHECK(fundamental_function(x, 0.125) == Approx(0.25));
  {
    std::ofstream out(path);
    out << "0.25,0.1\n1,1\n";  // convex
  }
  CHECK_THROWS_AS(RISpace::parse("marcinkiewicz:" + path), ConfigError);
  std::remove(path.c_str());
}
