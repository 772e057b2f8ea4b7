#include "lpdisc/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lpdisc/errors.hpp"

namespace lpdisc {

namespace {

// Sorted distinct values of {0, 1} and the j-th coordinate of every point,
// plus each point's index into that grid.
struct CoordinateGrid {
  std::vector<std::vector<double>> values;  // per dimension
  std::vector<std::vector<std::size_t>> rank;  // rank[j][k]
};

CoordinateGrid build_grid(const PointSet& points) {
  const std::size_t d = points.dimension();
  const std::size_t n = points.size();
  CoordinateGrid grid;
  grid.values.resize(d);
  grid.rank.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    auto& v = grid.values[j];
    v = {0.0, 1.0};
    for (std::size_t k = 0; k < n; ++k) v.push_back(points.point(k)[j]);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    grid.rank[j].resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      grid.rank[j][k] = static_cast<std::size_t>(
          std::lower_bound(v.begin(), v.end(), points.point(k)[j]) - v.begin());
    }
  }
  return grid;
}

double cell_count(const PointSet& points) {
  double cells = 1.0;
  const auto grid = build_grid(points);
  for (const auto& v : grid.values) cells *= static_cast<double>(v.size() - 1);
  return cells;
}

bool next_index(std::vector<std::size_t>& index, const std::vector<std::size_t>& limit) {
  for (std::size_t j = index.size(); j-- > 0;) {
    if (++index[j] < limit[j]) return true;
    index[j] = 0;
  }
  return false;
}

// Weighted count of points whose grid ranks are all <= corner (closed box
// at the lower corner of the cell).
double closed_count(const PointSet& points, const CoordinateGrid& grid,
                    const std::vector<std::size_t>& corner) {
  double count = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    bool inside = true;
    for (std::size_t j = 0; j < corner.size() && inside; ++j) {
      inside = grid.rank[j][k] <= corner[j];
    }
    if (inside) count += points.weight(k);
  }
  return count;
}

}  // namespace

std::string to_string(DiscrepancyMethod method) {
  switch (method) {
    case DiscrepancyMethod::exact_l2: return "exact-l2";
    case DiscrepancyMethod::cell_exact: return "cell-exact";
    case DiscrepancyMethod::star_exact: return "star-exact";
    case DiscrepancyMethod::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

DiscrepancyMethod parse_discrepancy_method(const std::string& name) {
  if (name == "exact-l2") return DiscrepancyMethod::exact_l2;
  if (name == "cell-exact") return DiscrepancyMethod::cell_exact;
  if (name == "star-exact") return DiscrepancyMethod::star_exact;
  if (name == "monte-carlo") return DiscrepancyMethod::monte_carlo;
  throw ValidationError("unknown discrepancy method '" + name + "'");
}

double local_discrepancy(const PointSet& points, std::span<const double> t) {
  const std::size_t d = points.dimension();
  if (t.size() != d) {
    throw ValidationError("local_discrepancy: t has " + std::to_string(t.size()) +
                          " coordinates, point set has dimension " + std::to_string(d));
  }
  double volume = 1.0;
  for (double tj : t) {
    if (!(tj >= 0.0 && tj <= 1.0)) throw ValidationError("local_discrepancy: t outside [0,1]^d");
    volume *= tj;
  }
  double count = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto x = points.point(k);
    bool inside = true;
    for (std::size_t j = 0; j < d && inside; ++j) inside = x[j] < t[j];
    if (inside) count += points.weight(k);
  }
  return count - volume;
}

double initial_discrepancy(double p, std::size_t d) {
  if (!(p >= 1.0)) throw ValidationError("initial_discrepancy requires p >= 1");
  if (std::isinf(p)) return 1.0;
  return std::pow(p + 1.0, -static_cast<double>(d) / p);
}

DiscrepancyEstimate l2_exact(const PointSet& points) {
  const std::size_t d = points.dimension();
  const std::size_t n = points.size();
  if (n == 0) return {initial_discrepancy(2.0, d), DiscrepancyMethod::exact_l2, 0.0, 0, std::nullopt};
  double pair_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto xk = points.point(k);
    const double wk = points.weight(k);
    // diagonal once, off-diagonal twice
    double diag = 1.0;
    for (std::size_t j = 0; j < d; ++j) diag *= 1.0 - xk[j];
    pair_sum += wk * wk * diag;
    for (std::size_t l = k + 1; l < n; ++l) {
      const auto xl = points.point(l);
      double prod = 1.0;
      for (std::size_t j = 0; j < d; ++j) prod *= 1.0 - std::max(xk[j], xl[j]);
      pair_sum += 2.0 * wk * points.weight(l) * prod;
    }
  }
  double single_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto xk = points.point(k);
    double prod = 1.0;
    for (std::size_t j = 0; j < d; ++j) prod *= 0.5 * (1.0 - xk[j] * xk[j]);
    single_sum += points.weight(k) * prod;
  }
  const double squared = pair_sum - 2.0 * single_sum + std::pow(3.0, -static_cast<double>(d));
  return {std::sqrt(std::max(squared, 0.0)), DiscrepancyMethod::exact_l2, 0.0, 0, std::nullopt};
}

DiscrepancyEstimate lp_monte_carlo(const PointSet& points, double p, std::size_t samples,
                                   std::uint64_t seed) {
  if (!(p >= 1.0) || std::isinf(p)) throw ValidationError("lp_monte_carlo requires finite p >= 1");
  if (samples < 100) throw ValidationError("lp_monte_carlo requires at least 100 samples");
  const std::size_t d = points.dimension();
  std::vector<double> t(d);
  // Welford accumulation of Y = |Delta(t)|^p
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < d; ++j) t[j] = counter_uniform(seed, i, j);
    const double y = std::pow(std::abs(local_discrepancy(points, t)), p);
    const double delta = y - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (y - mean);
  }
  const double n = static_cast<double>(samples);
  const double variance = m2 / (n - 1.0);
  const double mean_error = std::sqrt(variance / n);
  const double value = std::pow(mean, 1.0 / p);
  // d/dm m^(1/p) = m^(1/p - 1) / p
  const double std_error = mean > 0.0 ? value / (p * mean) * mean_error : 0.0;
  return {value, DiscrepancyMethod::monte_carlo, std_error, samples, seed};
}

DiscrepancyEstimate lp_cell_exact(const PointSet& points, int p, std::size_t budget) {
  if (p < 2 || p % 2 != 0) throw ValidationError("lp_cell_exact requires an even integer p >= 2");
  const double work = cell_count(points) * static_cast<double>(p + 1);
  if (work > static_cast<double>(budget)) {
    throw ResourceError("lp_cell_exact needs " + std::to_string(work) + " cell terms, budget is " +
                        std::to_string(budget));
  }
  const std::size_t d = points.dimension();
  if (points.size() == 0) {
    return {initial_discrepancy(p, d), DiscrepancyMethod::cell_exact, 0.0, 0, std::nullopt};
  }
  const auto grid = build_grid(points);

  std::vector<double> binom(p + 1, 1.0);
  for (int m = 1; m <= p; ++m) binom[m] = binom[m - 1] * (p - m + 1) / m;

  std::vector<std::size_t> limit(d);
  for (std::size_t j = 0; j < d; ++j) limit[j] = grid.values[j].size() - 1;
  std::vector<std::size_t> cell(d, 0);
  std::vector<double> moment(p + 1);
  double total = 0.0;
  do {
    const double count = closed_count(points, grid, cell);
    // prod_j of integral t^m over the cell side, for m = 0..p
    for (int m = 0; m <= p; ++m) {
      double prod = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double lo = grid.values[j][cell[j]];
        const double hi = grid.values[j][cell[j] + 1];
        prod *= (std::pow(hi, m + 1) - std::pow(lo, m + 1)) / (m + 1);
      }
      moment[m] = prod;
    }
    double cell_integral = 0.0;
    for (int m = 0; m <= p; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      cell_integral += sign * binom[m] * std::pow(count, p - m) * moment[m];
    }
    total += cell_integral;
  } while (next_index(cell, limit));
  const double value = std::pow(std::max(total, 0.0), 1.0 / p);
  return {value, DiscrepancyMethod::cell_exact, 0.0, 0, std::nullopt};
}

DiscrepancyEstimate star_exact(const PointSet& points, std::size_t budget) {
  const double cells = cell_count(points);
  if (cells > static_cast<double>(budget)) {
    throw ResourceError("star_exact needs " + std::to_string(cells) + " grid cells, budget is " +
                        std::to_string(budget));
  }
  const std::size_t d = points.dimension();
  const auto grid = build_grid(points);
  std::vector<std::size_t> limit(d);
  for (std::size_t j = 0; j < d; ++j) limit[j] = grid.values[j].size() - 1;
  std::vector<std::size_t> cell(d, 0);
  double sup = 0.0;
  // On the cell (l, r] the count of [0,t) is the closed count at l, while
  // the volume sweeps (vol(l), vol(r)].
  do {
    const double count = closed_count(points, grid, cell);
    double lower_volume = 1.0;
    double upper_volume = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      lower_volume *= grid.values[j][cell[j]];
      upper_volume *= grid.values[j][cell[j] + 1];
    }
    sup = std::max({sup, std::abs(count - lower_volume), std::abs(count - upper_volume)});
  } while (next_index(cell, limit));
  return {sup, DiscrepancyMethod::star_exact, 0.0, 0, std::nullopt};
}

}  // namespace lpdisc
