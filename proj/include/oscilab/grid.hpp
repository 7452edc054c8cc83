// Cell-constant functions on a uniform grid over the unit cube [0,1]^d,
// grid-aligned subcubes, and the two cube oscillation integrals.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oscilab {

struct GeometryError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a harness-level guarantee (not an input condition) fails.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class Range>
double compensated_sum(const Range& r) {
  CompensatedSum s;
  for (double x : r) s.add(x);
  return s.value();
}

struct GridShape {
  int dim = 1;
  int res = 1;

  std::size_t cells() const {
    return dim == 1 ? std::size_t(res) : std::size_t(res) * std::size_t(res);
  }
  double cell_measure() const { return 1.0 / double(cells()); }
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

inline void validate(const GridShape& g) {
  if (g.dim != 1 && g.dim != 2) throw ConfigError("dimension must be 1 or 2");
  if (g.res < 1) throw ConfigError("resolution must be >= 1");
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

using CellIndex = std::array<int, 2>;

/// Axis-aligned grid cube: origin cell and side length in cells.
struct Cube {
  CellIndex origin{0, 0};
  int side = 1;

  std::size_t cell_count(int dim) const {
    return dim == 1 ? std::size_t(side) : std::size_t(side) * std::size_t(side);
  }
  friend bool operator==(const Cube&, const Cube&) = default;
};

inline double measure(const Cube& q, const GridShape& g) {
  return double(q.cell_count(g.dim)) / double(g.cells());
}

inline void validate(const Cube& q, const GridShape& g) {
  if (q.side < 1) throw GeometryError("cube side must be >= 1");
  for (int j = 0; j < g.dim; ++j) {
    if (q.origin[j] < 0 || q.origin[j] + q.side > g.res)
      throw GeometryError("cube exceeds grid bounds");
  }
  if (g.dim == 1 && q.origin[1] != 0) throw GeometryError("1D cube with nonzero second origin");
}

inline bool contains(const Cube& q, const CellIndex& x, int dim) {
  for (int j = 0; j < dim; ++j)
    if (x[j] < q.origin[j] || x[j] >= q.origin[j] + q.side) return false;
  return true;
}

inline bool overlaps(const Cube& a, const Cube& b, int dim) {
  for (int j = 0; j < dim; ++j) {
    if (a.origin[j] + a.side <= b.origin[j] || b.origin[j] + b.side <= a.origin[j]) return false;
  }
  return true;
}

inline std::size_t flat_index(const CellIndex& x, const GridShape& g) {
  return g.dim == 1 ? std::size_t(x[0]) : std::size_t(x[0]) * std::size_t(g.res) + std::size_t(x[1]);
}

inline CellIndex cell_of(std::size_t i, const GridShape& g) {
  if (g.dim == 1) return {int(i), 0};
  return {int(i / std::size_t(g.res)), int(i % std::size_t(g.res))};
}

/// Calls fn(flat index) for every cell of q in row-major order.
template <class Fn>
void for_each_cell(const Cube& q, const GridShape& g, Fn&& fn) {
  if (g.dim == 1) {
    for (int i = q.origin[0]; i < q.origin[0] + q.side; ++i) fn(std::size_t(i));
    return;
  }
  for (int r = q.origin[0]; r < q.origin[0] + q.side; ++r) {
    const std::size_t row = std::size_t(r) * std::size_t(g.res);
    for (int c = q.origin[1]; c < q.origin[1] + q.side; ++c) fn(row + std::size_t(c));
  }
}

/// Real function constant on each cell of a uniform grid over [0,1]^d.
/// Values are stored in row-major order; Q0 has measure 1.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridShape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
    validate(shape_);
    if (values_.size() != shape_.cells())
      throw ConfigError("expected " + std::to_string(shape_.cells()) + " values, got " +
                        std::to_string(values_.size()));
    for (double v : values_)
      if (!std::isfinite(v)) throw ConfigError("grid values must be finite");
  }

  static GridFunction constant(GridShape shape, double c) {
    validate(shape);
    return GridFunction(shape, std::vector<double>(shape.cells(), c));
  }

  const GridShape& shape() const { return shape_; }
  int dim() const { return shape_.dim; }
  int res() const { return shape_.res; }
  std::size_t size() const { return values_.size(); }
  double cell_measure() const { return shape_.cell_measure(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(const CellIndex& x) const { return values_[flat_index(x, shape_)]; }

  double mean() const { return compensated_sum(values_) / double(values_.size()); }

  GridFunction abs() const {
    std::vector<double> v(values_);
    for (double& x : v) x = std::abs(x);
    return GridFunction(shape_, std::move(v));
  }

  GridFunction shifted(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x -= c;
    return GridFunction(shape_, std::move(v));
  }

  GridFunction mean_zero() const { return shifted(mean()); }

  double l1_norm() const {
    CompensatedSum s;
    for (double x : values_) s.add(std::abs(x));
    return s.value() / double(values_.size());
  }

 private:
  GridShape shape_{};
  std::vector<double> values_;
};

/// Values of f on the cells of q, in row-major order.
inline std::vector<double> cube_values(const GridFunction& f, const Cube& q) {
  validate(q, f.shape());
  std::vector<double> out;
  out.reserve(q.cell_count(f.dim()));
  for_each_cell(q, f.shape(), [&](std::size_t i) { out.push_back(f[i]); });
  return out;
}

namespace detail {

inline double mean_of(const std::vector<double>& v) { return compensated_sum(v) / double(v.size()); }

inline double mean_abs_deviation(const std::vector<double>& v, double c) {
  CompensatedSum s;
  for (double x : v) s.add(std::abs(x - c));
  return s.value() / double(v.size());
}

/// sum_{x,y} |v_x - v_y| over ordered pairs; v is sorted ascending in place.
inline double pair_abs_difference_sum(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const double m = double(v.size());
  CompensatedSum s;
  for (std::size_t i = 0; i < v.size(); ++i) s.add((2.0 * double(i) - m + 1.0) * v[i]);
  return 2.0 * s.value();
}

}  // namespace detail

inline double cube_mean(const GridFunction& f, const Cube& q) { return detail::mean_of(cube_values(f, q)); }

/// |Q|^{-1} \int_Q |f - f_Q|
inline double mean_oscillation(const GridFunction& f, const Cube& q) {
  const auto v = cube_values(f, q);
  return detail::mean_abs_deviation(v, detail::mean_of(v));
}

/// |Q|^{-1} \iint_{Q x Q} |f(x) - f(y)| dx dy
inline double double_oscillation(const GridFunction& f, const Cube& q) {
  auto v = cube_values(f, q);
  const double h = f.cell_measure();
  return h / double(v.size()) * detail::pair_abs_difference_sum(v);
}

/// All grid cubes, ordered by side, then origin lexicographically.
inline std::vector<Cube> enumerate_cubes(const GridShape& g, bool dyadic_only = false) {
  validate(g);
  if (dyadic_only && !is_power_of_two(g.res))
    throw ConfigError("dyadic cubes need a power-of-two resolution, got N=" + std::to_string(g.res));
  std::vector<Cube> out;
  for (int k = 1; k <= g.res; dyadic_only ? k *= 2 : ++k) {
    const int step = dyadic_only ? k : 1;
    if (g.dim == 1) {
      for (int o = 0; o + k <= g.res; o += step) out.push_back(Cube{{o, 0}, k});
    } else {
      for (int r = 0; r + k <= g.res; r += step)
        for (int c = 0; c + k <= g.res; c += step) out.push_back(Cube{{r, c}, k});
    }
  }
  return out;
}

inline std::vector<Cube> cubes_containing(const GridShape& g, const CellIndex& x, bool dyadic_only = false) {
  validate(g);
  for (int j = 0; j < g.dim; ++j)
    if (x[j] < 0 || x[j] >= g.res) throw GeometryError("cell index out of range");
  std::vector<Cube> out;
  for (const Cube& q : enumerate_cubes(g, dyadic_only))
    if (contains(q, x, g.dim)) out.push_back(q);
  return out;
}

/// Finite family of grid cubes with pairwise disjoint cell sets.
struct Packing {
  std::vector<Cube> cubes;

  double measure(const GridShape& g) const {
    std::size_t cells = 0;
    for (const Cube& q : cubes) cells += q.cell_count(g.dim);
    return double(cells) / double(g.cells());
  }

  bool is_disjoint(const GridShape& g) const {
    std::vector<char> used(g.cells(), 0);
    for (const Cube& q : cubes) {
      bool clash = false;
      for_each_cell(q, g, [&](std::size_t i) {
        if (used[i]) clash = true;
        used[i] = 1;
      });
      if (clash) return false;
    }
    return true;
  }
};

}  // namespace oscilab
