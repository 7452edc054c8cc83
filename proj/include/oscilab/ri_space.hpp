// Rearrangement-invariant norm families evaluated on decreasing profiles:
// L^p, weak L^p and Marcinkiewicz spaces M(phi).
#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oscilab/rearrangement.hpp"

namespace oscilab {

/// Concave increasing function on [0,1] with phi(0+) = 0.
class Phi {
 public:
  enum class Kind { power, log_slow, table };

  /// s^{1/p}
  static Phi power(double p) {
    if (!(p >= 1.0)) throw ConfigError("power preset needs p >= 1");
    Phi phi;
    phi.kind_ = Kind::power;
    phi.p_ = p;
    return phi;
  }

  /// 1 / (1 + ln(1/s))
  static Phi log_slow() {
    Phi phi;
    phi.kind_ = Kind::log_slow;
    return phi;
  }

  /// Piecewise-linear interpolation of (s, phi(s)) knots, with phi(0) = 0.
  static Phi table(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw ConfigError("phi table is empty");
    std::sort(knots.begin(), knots.end());
    if (knots.front().first == 0.0) {
      if (knots.front().second != 0.0) throw ConfigError("phi(0) must be 0");
      knots.erase(knots.begin());
    }
    if (knots.empty() || knots.back().first != 1.0) throw ConfigError("phi table must end at s = 1");
    double prev_s = 0.0, prev_v = 0.0, prev_slope = std::numeric_limits<double>::infinity();
    for (auto [s, v] : knots) {
      if (!(s > prev_s) || !(s <= 1.0)) throw ConfigError("phi knots must be distinct and lie in (0,1]");
      if (!(v > prev_v)) throw ConfigError("phi must be increasing");
      const double slope = (v - prev_v) / (s - prev_s);
      if (slope > prev_slope * (1.0 + 1e-12)) throw ConfigError("phi must be concave");
      prev_s = s;
      prev_v = v;
      prev_slope = slope;
    }
    Phi phi;
    phi.kind_ = Kind::table;
    phi.knots_ = std::move(knots);
    return phi;
  }

  static Phi from_csv(std::istream& in) {
    std::vector<std::pair<double, double>> knots;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double s, v;
      if (!(ls >> s >> v)) {
        if (knots.empty()) continue;  // header row
        throw ConfigError("bad phi row: " + line);
      }
      knots.emplace_back(s, v);
    }
    return table(std::move(knots));
  }

  /// "power:p", "log-slow", or a path to a CSV table of (s, phi(s)).
  static Phi parse(const std::string& spec) {
    if (spec == "log-slow") return log_slow();
    if (spec.rfind("power:", 0) == 0) return power(std::stod(spec.substr(6)));
    std::ifstream in(spec);
    if (!in) throw ConfigError("unknown phi preset or unreadable file: " + spec);
    return from_csv(in);
  }

  Kind kind() const { return kind_; }

  double operator()(double s) const {
    if (s <= 0.0) return 0.0;
    s = std::min(s, 1.0);
    switch (kind_) {
      case Kind::power:
        return std::pow(s, 1.0 / p_);
      case Kind::log_slow:
        return 1.0 / (1.0 + std::log(1.0 / s));
      case Kind::table: {
        double prev_s = 0.0, prev_v = 0.0;
        for (auto [ks, kv] : knots_) {
          if (s <= ks) return prev_v + (kv - prev_v) * (s - prev_s) / (ks - prev_s);
          prev_s = ks;
          prev_v = kv;
        }
        return knots_.back().second;
      }
    }
    return 0.0;
  }

  std::vector<double> knots() const {
    std::vector<double> out;
    for (auto& k : knots_) out.push_back(k.first);
    return out;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::power: {
        std::ostringstream os;
        os << "power:" << p_;
        return os.str();
      }
      case Kind::log_slow:
        return "log-slow";
      case Kind::table:
        return "table(" + std::to_string(knots_.size()) + ")";
    }
    return "";
  }

 private:
  Kind kind_ = Kind::power;
  double p_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

/// An r.i. norm family, evaluated through the representation on (0,1).
class RISpace {
 public:
  enum class Family { lp, weak_lp, marcinkiewicz };

  static RISpace lp(double p) {
    if (!(p >= 1.0)) throw ConfigError("L^p needs p >= 1");
    RISpace x;
    x.family_ = Family::lp;
    x.p_ = p;
    return x;
  }

  static RISpace linf() { return lp(std::numeric_limits<double>::infinity()); }

  static RISpace weak_lp(double p) {
    if (!(p > 1.0) || std::isinf(p)) throw ConfigError("weak L^p needs 1 < p < inf");
    RISpace x;
    x.family_ = Family::weak_lp;
    x.p_ = p;
    x.phi_ = Phi::power(p);
    return x;
  }

  static RISpace marcinkiewicz(Phi phi) {
    RISpace x;
    x.family_ = Family::marcinkiewicz;
    x.phi_ = std::move(phi);
    return x;
  }

  /// "lp:<p>|lp:inf", "weak:<p>", "marcinkiewicz:<preset|csv path>"
  static RISpace parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("space spec needs a family prefix: " + spec);
    const std::string family = spec.substr(0, colon), arg = spec.substr(colon + 1);
    auto parse_p = [&](const std::string& s) {
      if (s == "inf") return std::numeric_limits<double>::infinity();
      return std::stod(s);
    };
    if (family == "lp") return lp(parse_p(arg));
    if (family == "weak") return weak_lp(parse_p(arg));
    if (family == "marcinkiewicz") return marcinkiewicz(Phi::parse(arg));
    throw ConfigError("unknown space family: " + family);
  }

  Family family() const { return family_; }
  double p() const { return p_; }
  const Phi& phi() const { return phi_; }
  bool is_l1() const { return family_ == Family::lp && p_ == 1.0; }
  bool is_linf() const { return family_ == Family::lp && std::isinf(p_); }

  std::string name() const {
    std::ostringstream os;
    switch (family_) {
      case Family::lp:
        os << "lp:";
        if (std::isinf(p_))
          os << "inf";
        else
          os << p_;
        break;
      case Family::weak_lp:
        os << "weak:" << p_;
        break;
      case Family::marcinkiewicz:
        os << "marcinkiewicz:" << phi_.name();
        break;
    }
    return os.str();
  }

 private:
  Family family_ = Family::lp;
  double p_ = 1.0;
  Phi phi_ = Phi::power(1.0);
};

namespace detail {

/// Geometric grid of n points from lo to 1.
inline std::vector<double> log_grid(double lo, int n) {
  std::vector<double> out;
  if (n < 2 || !(lo > 0.0) || lo >= 1.0) return {1.0};
  const double step = std::log(1.0 / lo) / double(n - 1);
  for (int i = 0; i < n; ++i) out.push_back(i + 1 == n ? 1.0 : lo * std::exp(step * i));
  return out;
}

inline constexpr int marcinkiewicz_log_points = 256;

/// sup_{0<s<=1} phi(s) (1/s) \int_0^s g*.
///
/// On a step of g* the objective is phi(s)(c/s + v) with c >= 0; for power,
/// log-slow, and piecewise-linear phi (between knots) it has no interior
/// maximum, so breakpoints plus knots certify the supremum. The log grid is
/// a guard for tabulated phi with dense curvature.
inline double marcinkiewicz_sup(const Phi& phi, const StepProfile& g, int log_points) {
  std::vector<double> samples(g.breakpoints().begin() + 1, g.breakpoints().end());
  for (double s : phi.knots()) samples.push_back(s);
  const auto grid = log_grid(g.breakpoints()[1], log_points);
  samples.insert(samples.end(), grid.begin(), grid.end());
  double best = 0.0;
  for (double s : samples) {
    if (!(s > 0.0) || s > 1.0) continue;
    best = std::max(best, phi(s) * g.integral(s) / s);
  }
  return best;
}

}  // namespace detail

inline double norm(const RISpace& x, const StepProfile& profile) {
  const StepProfile g = star(profile);
  const auto& b = g.breakpoints();
  const auto& v = g.values();
  switch (x.family()) {
    case RISpace::Family::lp: {
      if (std::isinf(x.p())) return v.front();
      CompensatedSum s;
      for (std::size_t k = 0; k < v.size(); ++k) s.add(std::pow(v[k], x.p()) * (b[k + 1] - b[k]));
      return std::pow(s.value(), 1.0 / x.p());
    }
    case RISpace::Family::weak_lp:
    case RISpace::Family::marcinkiewicz:
      return detail::marcinkiewicz_sup(x.phi(), g, detail::marcinkiewicz_log_points);
  }
  return 0.0;
}

inline double norm(const RISpace& x, const GridFunction& f) { return norm(x, rearrange(f)); }

/// phi_X(s) = ||chi_[0,s]||_X
inline double fundamental_function(const RISpace& x, double s) {
  if (!(s > 0.0) || s > 1.0) throw ConfigError("fundamental function needs s in (0,1]");
  switch (x.family()) {
    case RISpace::Family::lp:
      return std::isinf(x.p()) ? 1.0 : std::pow(s, 1.0 / x.p());
    case RISpace::Family::weak_lp:
    case RISpace::Family::marcinkiewicz:
      return x.phi()(s);
  }
  return 0.0;
}

struct BoydIndices {
  double alpha = 0.0;
  double beta = 0.0;
  bool exact = false;
};

namespace detail {

/// sup_{0 < u <= min(1, 1/t)} phi(t u) / phi(u), sampled on u = 2^{-j}.
inline double phi_dilation(const Phi& phi, double t) {
  double best = 0.0;
  const double umax = std::min(1.0, 1.0 / t);
  for (int j = 0; j <= 600; ++j) {
    const double u = umax * std::ldexp(1.0, -j);
    const double den = phi(u);
    if (!(den > 0.0)) break;
    best = std::max(best, phi(t * u) / den);
  }
  return best;
}

}  // namespace detail

/// Boyd indices. Exact for L^p and weak L^p; for Marcinkiewicz spaces the
/// dilation exponents of phi are reported, estimated by log-log slopes.
inline BoydIndices boyd_indices(const RISpace& x) {
  if (x.family() != RISpace::Family::marcinkiewicz) {
    const double r = std::isinf(x.p()) ? 0.0 : 1.0 / x.p();
    return {r, r, true};
  }
  const Phi& phi = x.phi();
  auto slope = [&](double t1, double t2) {
    const double m1 = detail::phi_dilation(phi, t1), m2 = detail::phi_dilation(phi, t2);
    return (std::log(m2) - std::log(m1)) / (std::log(t2) - std::log(t1));
  };
  const double alpha = slope(std::ldexp(1.0, -20), std::ldexp(1.0, -40));
  const double beta = slope(std::ldexp(1.0, 20), std::ldexp(1.0, 40));
  return {std::clamp(alpha, 0.0, 1.0), std::clamp(beta, 0.0, 1.0), false};
}

/// max over the battery of ||sigma_s g||_X / ||g||_X, a lower bound on the
/// operator norm of sigma_s. Zero-norm profiles are skipped.
inline double dilation_norm_estimate(const RISpace& x, double s, std::span<const StepProfile> battery) {
  if (battery.empty()) throw ConfigError("dilation estimate needs a nonempty battery");
  double best = 0.0;
  for (const StepProfile& g : battery) {
    const StepProfile gs = star(g);
    const double n = norm(x, gs);
    if (!(n > 0.0)) continue;
    best = std::max(best, norm(x, dilate(gs, s)) / n);
  }
  return best;
}

}  // namespace oscilab
