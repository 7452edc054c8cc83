// Optimization over packings of grid cubes: exhaustive enumeration for tiny
// grids, exact dynamic programs in 1D, greedy selection in 2D.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oscilab/grid.hpp"

namespace oscilab {

inline constexpr int max_enumeration_res_1d = 12;
inline constexpr int max_enumeration_res_2d = 4;

inline bool packing_enumeration_allowed(const GridShape& g) {
  return g.dim == 1 ? g.res <= max_enumeration_res_1d : g.res <= max_enumeration_res_2d;
}

namespace detail {

/// Enumerates packings drawn from `by_origin` (candidate cubes indexed by the
/// flat index of their origin cell). Cells are scanned in row-major order; a
/// free cell is either left uncovered or becomes the origin of a candidate,
/// so every packing is produced exactly once.
class PackingEnumerator {
 public:
  PackingEnumerator(const GridShape& g, std::vector<std::vector<Cube>> by_origin)
      : shape_(g), by_origin_(std::move(by_origin)), used_(g.cells(), 0) {}

  template <class Visitor>
  std::size_t run(Visitor&& visit, bool include_empty) {
    count_ = 0;
    current_.clear();
    recurse(0, visit, include_empty);
    return count_;
  }

 private:
  bool fits(const Cube& q) const {
    bool ok = true;
    for_each_cell(q, shape_, [&](std::size_t i) { ok = ok && !used_[i]; });
    return ok;
  }

  void mark(const Cube& q, char v) {
    for_each_cell(q, shape_, [&](std::size_t i) { used_[i] = v; });
  }

  template <class Visitor>
  void recurse(std::size_t cell, Visitor& visit, bool include_empty) {
    while (cell < used_.size() && used_[cell]) ++cell;
    if (cell == used_.size()) {
      if (!current_.empty() || include_empty) {
        ++count_;
        visit(std::span<const Cube>(current_));
      }
      return;
    }
    recurse(cell + 1, visit, include_empty);
    for (const Cube& q : by_origin_[cell]) {
      if (!fits(q)) continue;
      mark(q, 1);
      current_.push_back(q);
      recurse(cell + 1, visit, include_empty);
      current_.pop_back();
      mark(q, 0);
    }
  }

  GridShape shape_;
  std::vector<std::vector<Cube>> by_origin_;
  std::vector<char> used_;
  std::vector<Cube> current_;
  std::size_t count_ = 0;
};

inline std::vector<std::vector<Cube>> index_by_origin(const GridShape& g, std::span<const Cube> cubes) {
  std::vector<std::vector<Cube>> out(g.cells());
  for (const Cube& q : cubes) {
    validate(q, g);
    out[flat_index(q.origin, g)].push_back(q);
  }
  return out;
}

inline void guard_enumeration(const GridShape& g) {
  validate(g);
  if (!packing_enumeration_allowed(g))
    throw ConfigError("packing enumeration limited to N <= " +
                      std::to_string(g.dim == 1 ? max_enumeration_res_1d : max_enumeration_res_2d) + " in " +
                      std::to_string(g.dim) + "D, got N=" + std::to_string(g.res));
}

}  // namespace detail

/// Streams every nonempty packing of grid cubes to visit(span<const Cube>).
/// Returns the number of packings visited.
template <class Visitor>
std::size_t for_each_packing(const GridShape& g, Visitor&& visit) {
  detail::guard_enumeration(g);
  const auto cubes = enumerate_cubes(g);
  detail::PackingEnumerator e(g, detail::index_by_origin(g, cubes));
  return e.run(visit, false);
}

/// Same as for_each_packing, restricted to a candidate family.
template <class Visitor>
std::size_t for_each_packing(const GridShape& g, std::span<const Cube> candidates, Visitor&& visit) {
  detail::guard_enumeration(g);
  detail::PackingEnumerator e(g, detail::index_by_origin(g, candidates));
  return e.run(visit, false);
}

inline std::vector<Packing> enumerate_packings(const GridShape& g) {
  std::vector<Packing> out;
  for_each_packing(g, [&](std::span<const Cube> cubes) { out.push_back(Packing{{cubes.begin(), cubes.end()}}); });
  return out;
}

inline std::size_t count_packings(const GridShape& g) {
  return for_each_packing(g, [](std::span<const Cube>) {});
}

struct MeasurePackingResult {
  Packing packing;
  double measure = 0.0;
  bool exact = true;
};

/// Largest total measure of a packing drawn from `candidates`. Exact in 1D
/// (interval scheduling) and for 2D grids with N <= 4; greedy by size
/// otherwise.
inline MeasurePackingResult max_measure_packing(std::span<const Cube> candidates, const GridShape& g) {
  validate(g);
  MeasurePackingResult result;
  if (g.dim == 1) {
    const int n = g.res;
    std::vector<std::vector<const Cube*>> ending(n + 1);
    for (const Cube& q : candidates) {
      validate(q, g);
      ending[q.origin[0] + q.side].push_back(&q);
    }
    std::vector<int> best(n + 1, 0);
    std::vector<const Cube*> choice(n + 1, nullptr);
    for (int e = 1; e <= n; ++e) {
      best[e] = best[e - 1];
      for (const Cube* q : ending[e]) {
        const int v = best[q->origin[0]] + q->side;
        if (v > best[e]) {
          best[e] = v;
          choice[e] = q;
        }
      }
    }
    for (int e = n; e > 0;) {
      if (choice[e] && best[e] != best[e - 1]) {
        result.packing.cubes.push_back(*choice[e]);
        e = choice[e]->origin[0];
      } else {
        --e;
      }
    }
    std::reverse(result.packing.cubes.begin(), result.packing.cubes.end());
    result.measure = double(best[n]) / double(n);
    return result;
  }

  if (packing_enumeration_allowed(g)) {
    std::size_t best_cells = 0;
    for_each_packing(g, candidates, [&](std::span<const Cube> cubes) {
      std::size_t cells = 0;
      for (const Cube& q : cubes) cells += q.cell_count(2);
      if (cells > best_cells) {
        best_cells = cells;
        result.packing.cubes.assign(cubes.begin(), cubes.end());
      }
    });
    result.measure = double(best_cells) / double(g.cells());
    return result;
  }

  std::vector<Cube> sorted(candidates.begin(), candidates.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Cube& a, const Cube& b) { return a.side > b.side; });
  std::vector<char> used(g.cells(), 0);
  std::size_t cells = 0;
  for (const Cube& q : sorted) {
    validate(q, g);
    bool free = true;
    for_each_cell(q, g, [&](std::size_t i) { free = free && !used[i]; });
    if (!free) continue;
    for_each_cell(q, g, [&](std::size_t i) { used[i] = 1; });
    result.packing.cubes.push_back(q);
    cells += q.cell_count(2);
  }
  result.measure = double(cells) / double(g.cells());
  result.exact = false;
  return result;
}

struct AdditivePackingResult {
  Packing packing;
  double value = 0.0;
  /// With a budget: profile[m] = best value over packings covering exactly m
  /// cells (-inf where none was found), witnesses alongside.
  std::vector<double> profile;
  std::vector<Packing> profile_witness;
  bool exact = true;
};

/// Maximizes sum weight(Q_i) over packings. The empty packing (value 0) is
/// always admissible.
template <class WeightFn>
AdditivePackingResult max_additive_packing(const GridShape& g, WeightFn&& weight,
                                           std::optional<int> measure_budget = std::nullopt) {
  validate(g);
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  AdditivePackingResult result;
  const int budget = measure_budget ? std::clamp(*measure_budget, 0, int(g.cells())) : -1;

  if (g.dim == 1) {
    const int n = g.res;
    // w[o][k]: weight of the interval starting at o with side k
    std::vector<std::vector<double>> w(n, std::vector<double>(n + 1, neg_inf));
    for (int k = 1; k <= n; ++k)
      for (int o = 0; o + k <= n; ++o) w[o][k] = weight(Cube{{o, 0}, k});

    if (budget < 0) {
      std::vector<double> best(n + 1, 0.0);
      std::vector<int> choice(n + 1, 0);
      for (int i = 1; i <= n; ++i) {
        best[i] = best[i - 1];
        for (int k = 1; k <= i; ++k) {
          const double v = best[i - k] + w[i - k][k];
          if (v > best[i]) {
            best[i] = v;
            choice[i] = k;
          }
        }
      }
      for (int i = n; i > 0;) {
        if (choice[i] > 0 && best[i] != best[i - 1]) {
          result.packing.cubes.push_back(Cube{{i - choice[i], 0}, choice[i]});
          i -= choice[i];
        } else {
          --i;
        }
      }
      std::reverse(result.packing.cubes.begin(), result.packing.cubes.end());
      result.value = best[n];
      return result;
    }

    // dp[i][m]: best value on cells [0,i) with exactly m cells covered.
    std::vector<std::vector<double>> dp(n + 1, std::vector<double>(budget + 1, neg_inf));
    std::vector<std::vector<int>> choice(n + 1, std::vector<int>(budget + 1, 0));
    dp[0][0] = 0.0;
    for (int i = 1; i <= n; ++i) {
      for (int m = 0; m <= std::min(i, budget); ++m) {
        double bestv = dp[i - 1][m];
        int bestk = 0;
        for (int k = 1; k <= std::min(i, m); ++k) {
          if (dp[i - k][m - k] == neg_inf) continue;
          const double v = dp[i - k][m - k] + w[i - k][k];
          if (v > bestv) {
            bestv = v;
            bestk = k;
          }
        }
        dp[i][m] = bestv;
        choice[i][m] = bestk;
      }
    }
    result.profile.assign(budget + 1, neg_inf);
    result.profile_witness.assign(budget + 1, Packing{});
    result.value = 0.0;
    for (int m = 0; m <= budget; ++m) {
      result.profile[m] = dp[n][m];
      if (dp[n][m] == neg_inf) continue;
      Packing p;
      for (int i = n, mm = m; i > 0;) {
        const int k = choice[i][mm];
        if (k > 0) {
          p.cubes.push_back(Cube{{i - k, 0}, k});
          i -= k;
          mm -= k;
        } else {
          --i;
        }
      }
      std::reverse(p.cubes.begin(), p.cubes.end());
      result.profile_witness[m] = p;
      if (dp[n][m] > result.value) {
        result.value = dp[n][m];
        result.packing = p;
      }
    }
    return result;
  }

  const auto cubes = enumerate_cubes(g);
  if (packing_enumeration_allowed(g)) {
    std::vector<double> wc(cubes.size());
    std::vector<std::size_t> index_of(g.cells() * std::size_t(g.res + 1), 0);
    for (std::size_t c = 0; c < cubes.size(); ++c) {
      wc[c] = weight(cubes[c]);
      index_of[flat_index(cubes[c].origin, g) * std::size_t(g.res + 1) + std::size_t(cubes[c].side)] = c;
    }
    if (budget >= 0) {
      result.profile.assign(budget + 1, neg_inf);
      result.profile_witness.assign(budget + 1, Packing{});
      result.profile[0] = 0.0;
    }
    for_each_packing(g, [&](std::span<const Cube> pk) {
      double v = 0.0;
      std::size_t cells = 0;
      for (const Cube& q : pk) {
        v += wc[index_of[flat_index(q.origin, g) * std::size_t(g.res + 1) + std::size_t(q.side)]];
        cells += q.cell_count(2);
      }
      if (budget >= 0) {
        if (int(cells) > budget) return;
        if (v > result.profile[cells]) {
          result.profile[cells] = v;
          result.profile_witness[cells].cubes.assign(pk.begin(), pk.end());
        }
      }
      if (v > result.value) {
        result.value = v;
        result.packing.cubes.assign(pk.begin(), pk.end());
      }
    });
    return result;
  }

  // Greedy by weight; every prefix and every single cube is a certified
  // lower bound for the profile.
  result.exact = false;
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t c = 0; c < cubes.size(); ++c) order.emplace_back(weight(cubes[c]), c);
  std::stable_sort(order.begin(), order.end(), [](auto& a, auto& b) { return a.first > b.first; });
  if (budget >= 0) {
    result.profile.assign(budget + 1, neg_inf);
    result.profile_witness.assign(budget + 1, Packing{});
    result.profile[0] = 0.0;
    for (auto [v, c] : order) {
      const int cells = int(cubes[c].cell_count(2));
      if (cells <= budget && v > result.profile[cells]) {
        result.profile[cells] = v;
        result.profile_witness[cells] = Packing{{cubes[c]}};
      }
    }
  }
  std::vector<char> used(g.cells(), 0);
  double total = 0.0;
  std::size_t cells = 0;
  for (auto [v, c] : order) {
    if (!(v > 0.0)) break;
    const Cube& q = cubes[c];
    bool free = true;
    for_each_cell(q, g, [&](std::size_t i) { free = free && !used[i]; });
    if (!free) continue;
    for_each_cell(q, g, [&](std::size_t i) { used[i] = 1; });
    result.packing.cubes.push_back(q);
    total += v;
    cells += q.cell_count(2);
    if (budget >= 0 && int(cells) <= budget && total > result.profile[cells]) {
      result.profile[cells] = total;
      result.profile_witness[cells] = result.packing;
    }
  }
  result.value = total;
  return result;
}

/// Vitali-type selection: largest cubes first, keeping those disjoint from
/// the ones already kept. The union of the input is checked to have measure
/// at most 5^d times the selected measure.
inline Packing vitali_select(std::span<const Cube> cubes, const GridShape& g) {
  validate(g);
  std::vector<Cube> sorted(cubes.begin(), cubes.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Cube& a, const Cube& b) { return a.side > b.side; });
  std::vector<char> used(g.cells(), 0), covered(g.cells(), 0);
  Packing out;
  std::size_t selected_cells = 0;
  for (const Cube& q : sorted) {
    validate(q, g);
    for_each_cell(q, g, [&](std::size_t i) { covered[i] = 1; });
    bool free = true;
    for_each_cell(q, g, [&](std::size_t i) { free = free && !used[i]; });
    if (!free) continue;
    for_each_cell(q, g, [&](std::size_t i) { used[i] = 1; });
    out.cubes.push_back(q);
    selected_cells += q.cell_count(g.dim);
  }
  const auto union_cells = std::size_t(std::count(covered.begin(), covered.end(), 1));
  const double factor = std::pow(5.0, g.dim);
  if (double(union_cells) > factor * double(selected_cells))
    throw InvariantViolation("Vitali selection covers less than 5^-d of the union");
  return out;
}

/// |union of cubes| / sum of selected measures.
inline double vitali_coverage_factor(std::span<const Cube> cubes, const Packing& selected, const GridShape& g) {
  std::vector<char> covered(g.cells(), 0);
  for (const Cube& q : cubes) for_each_cell(q, g, [&](std::size_t i) { covered[i] = 1; });
  const double u = double(std::count(covered.begin(), covered.end(), 1));
  const double s = selected.measure(g) * double(g.cells());
  return s > 0.0 ? u / s : (u > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
}

}  // namespace oscilab
