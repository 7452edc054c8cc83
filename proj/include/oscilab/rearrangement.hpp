// Decreasing rearrangements and the one-dimensional operators acting on them:
// maximal averages, dilations, Hardy operators, medians, majorization.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oscilab/grid.hpp"

namespace oscilab {

/// Non-increasing, right-continuous step function on (0,1].
///
/// Value `values[k]` is taken on [breakpoints[k], breakpoints[k+1]); the last
/// value also holds at t = 1. Adjacent equal values are merged so the
/// representation is canonical. Outside (0,1] the profile is extended by zero.
class StepProfile {
 public:
  StepProfile() : StepProfile({0.0, 1.0}, {0.0}) {}

  StepProfile(std::vector<double> breakpoints, std::vector<double> values) {
    if (breakpoints.size() != values.size() + 1 || values.empty())
      throw ConfigError("step profile needs one more breakpoint than values");
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
      throw ConfigError("step profile must span [0,1]");
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!(breakpoints[k] < breakpoints[k + 1])) throw ConfigError("breakpoints must increase");
      if (!std::isfinite(values[k])) throw ConfigError("profile values must be finite");
      if (k > 0 && values[k] > values[k - 1]) throw ConfigError("profile values must be non-increasing");
    }
    breaks_.push_back(0.0);
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!values_.empty() && values_.back() == values[k]) {
        breaks_.back() = breakpoints[k + 1];
      } else {
        values_.push_back(values[k]);
        breaks_.push_back(breakpoints[k + 1]);
      }
    }
    cumulative_.assign(values_.size() + 1, 0.0);
    CompensatedSum s;
    for (std::size_t k = 0; k < values_.size(); ++k) {
      s.add(values_[k] * (breaks_[k + 1] - breaks_[k]));
      cumulative_[k + 1] = s.value();
    }
  }

  static StepProfile constant(double c) { return StepProfile({0.0, 1.0}, {c}); }

  /// chi_(0,s)
  static StepProfile indicator(double s) {
    if (!(s > 0.0) || s > 1.0) throw ConfigError("indicator length must lie in (0,1]");
    if (s == 1.0) return constant(1.0);
    return StepProfile({0.0, s, 1.0}, {1.0, 0.0});
  }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t steps() const { return values_.size(); }

  /// Index of the step containing t, for t in [0,1].
  std::size_t step_at(double t) const {
    if (t >= 1.0) return values_.size() - 1;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    return std::size_t(it - breaks_.begin()) - 1;
  }

  double operator()(double t) const {
    if (t > 1.0) return 0.0;
    if (t <= 0.0) return values_.front();
    return values_[step_at(t)];
  }

  /// lim_{u -> t-} g(u)
  double left_limit(double t) const {
    if (t <= 0.0) return values_.front();
    if (t > 1.0) return 0.0;
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), t);
    return values_[std::size_t(it - breaks_.begin()) - 1];
  }

  /// \int_0^t g
  double integral(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return cumulative_.back();
    const std::size_t k = step_at(t);
    return cumulative_[k] + values_[k] * (t - breaks_[k]);
  }

  double total() const { return cumulative_.back(); }

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

/// Decreasing rearrangement of |g| for a profile whose values may change sign.
inline StepProfile star(const StepProfile& g) {
  std::vector<std::pair<double, double>> pieces;  // (|value|, length)
  const auto& b = g.breakpoints();
  for (std::size_t k = 0; k < g.steps(); ++k) pieces.emplace_back(std::abs(g.values()[k]), b[k + 1] - b[k]);
  std::stable_sort(pieces.begin(), pieces.end(), [](auto& x, auto& y) { return x.first > y.first; });
  std::vector<double> bp{0.0}, vals;
  double t = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    t += pieces[k].second;
    vals.push_back(pieces[k].first);
    bp.push_back(k + 1 == pieces.size() ? 1.0 : t);
  }
  return StepProfile(std::move(bp), std::move(vals));
}

/// f^*: cell values of |f| sorted descending, one cell measure per value.
inline StepProfile rearrange(const GridFunction& f) {
  std::vector<double> v(f.values().size());
  std::transform(f.values().begin(), f.values().end(), v.begin(), [](double x) { return std::abs(x); });
  std::sort(v.begin(), v.end(), std::greater<>());
  const std::size_t n = v.size();
  std::vector<double> bp(n + 1);
  for (std::size_t k = 0; k <= n; ++k) bp[k] = double(k) / double(n);
  return StepProfile(std::move(bp), std::move(v));
}

/// lambda_f(t) = |{ |f| > t }|
inline double distribution(const GridFunction& f, double t) {
  if (t < 0.0) throw ConfigError("distribution level must be >= 0");
  std::size_t count = 0;
  for (double x : f.values())
    if (std::abs(x) > t) ++count;
  return double(count) / double(f.size());
}

/// t -> (1/t) \int_0^t g, evaluated exactly from the step data.
class RunningAverage {
 public:
  explicit RunningAverage(StepProfile g) : g_(std::move(g)) {}

  double operator()(double t) const {
    if (!(t > 0.0)) throw std::domain_error("running average undefined at t <= 0");
    if (t > 1.0) return g_.total() / t;
    return g_.integral(t) / t;
  }

  std::vector<double> sample(std::span<const double> ts) const {
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) out.push_back((*this)(t));
    return out;
  }

  const StepProfile& base() const { return g_; }

 private:
  StepProfile g_;
};

/// Hardy operator P g(t) = (1/t) \int_0^t g.
inline RunningAverage hardy_P(const StepProfile& g) { return RunningAverage(g); }

/// f^{**} for a decreasing rearrangement.
inline RunningAverage double_star(const StepProfile& g) { return RunningAverage(g); }

/// Hardy operator Q g(t) = \int_t^1 g(s) ds / s, closed form per step.
class LogTail {
 public:
  explicit LogTail(StepProfile g) : g_(std::move(g)) {}

  double operator()(double t) const {
    if (!(t > 0.0)) throw std::domain_error("Q g undefined at t <= 0");
    if (t >= 1.0) return 0.0;
    const auto& b = g_.breakpoints();
    const auto& v = g_.values();
    CompensatedSum s;
    for (std::size_t k = g_.step_at(t); k < v.size(); ++k) {
      const double lo = std::max(t, b[k]);
      s.add(v[k] * std::log(b[k + 1] / lo));
    }
    return s.value();
  }

  std::vector<double> sample(std::span<const double> ts) const {
    std::vector<double> out;
    for (double t : ts) out.push_back((*this)(t));
    return out;
  }

 private:
  StepProfile g_;
};

inline LogTail hardy_Q(const StepProfile& g) { return LogTail(g); }

/// f^{**} - f^* with its supremum over (0,1].
///
/// On each step the gap decreases in t, so the supremum is reached just to the
/// right of a breakpoint.
struct OscillationGap {
  StepProfile star;
  double sup = 0.0;
  double argsup = 1.0;

  double operator()(double t) const {
    if (!(t > 0.0)) throw std::domain_error("gap undefined at t <= 0");
    return star.integral(t) / t - star(t);
  }
};

inline OscillationGap oscillation_gap(const GridFunction& f) {
  OscillationGap gap{rearrange(f)};
  const auto& b = gap.star.breakpoints();
  const auto& v = gap.star.values();
  for (std::size_t k = 1; k < v.size(); ++k) {
    const double value = gap.star.integral(b[k]) / b[k] - v[k];
    if (value > gap.sup) {
      gap.sup = value;
      gap.argsup = b[k];
    }
  }
  return gap;
}

/// sigma_s g(t) = g(t/s) on (0, min(s,1)), zero on [s,1).
inline StepProfile dilate(const StepProfile& g, double s) {
  if (!(s > 0.0)) throw ConfigError("dilation factor must be positive");
  if (s == 1.0) return g;
  const auto& b = g.breakpoints();
  const auto& v = g.values();
  std::vector<double> bp{0.0}, vals;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double right = b[k + 1] * s;
    vals.push_back(v[k]);
    if (right >= 1.0) {
      bp.push_back(1.0);
      break;
    }
    bp.push_back(right);
  }
  if (bp.back() < 1.0) {
    if (vals.back() < 0.0) throw ConfigError("dilation of a profile with negative tail is not non-increasing");
    vals.push_back(0.0);
    bp.push_back(1.0);
  }
  return StepProfile(std::move(bp), std::move(vals));
}

/// Smallest median value of f on q among its cell values: both
/// |{f > m}| and |{f < m}| are at most |Q|/2.
inline double median(const GridFunction& f, const Cube& q) {
  auto v = cube_values(f, q);
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && v[i] == v[i - 1]) continue;
    const auto below = std::size_t(std::lower_bound(v.begin(), v.end(), v[i]) - v.begin());
    const auto above = n - std::size_t(std::upper_bound(v.begin(), v.end(), v[i]) - v.begin());
    if (2 * below <= n && 2 * above <= n) return v[i];
  }
  throw InvariantViolation("no median among cell values");
}

inline double median(const GridFunction& f) { return median(f, Cube{{0, 0}, f.res()}); }

/// Hardy-Littlewood-Polya-Calderon majorization: \int_0^t g1* <= \int_0^t g2*
/// for all t, checked at the union of breakpoints (both sides are piecewise
/// linear between them).
inline bool hlpc_dominates(const StepProfile& g1, const StepProfile& g2, double slack = 0.0) {
  const StepProfile a = star(g1), b = star(g2);
  std::vector<double> ts(a.breakpoints());
  ts.insert(ts.end(), b.breakpoints().begin(), b.breakpoints().end());
  for (double t : ts)
    if (a.integral(t) > b.integral(t) + slack) return false;
  return true;
}

/// Decreasing rearrangement at t using the right-continuous convention
/// f*(t) = inf{ y : |{|f| > y}| <= t }.
inline double rearrangement_at(const GridFunction& f, double t) { return rearrange(f)(t); }

}  // namespace oscilab
