#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "lpdisc/pointset.hpp"

namespace lpdisc {

enum class DiscrepancyMethod { exact_l2, cell_exact, star_exact, monte_carlo };

std::string to_string(DiscrepancyMethod method);
DiscrepancyMethod parse_discrepancy_method(const std::string& name);

struct DiscrepancyEstimate {
  double value = 0.0;
  DiscrepancyMethod method = DiscrepancyMethod::exact_l2;
  double std_error = 0.0;  // zero for exact methods
  std::size_t samples = 0;  // zero for exact methods
  std::optional<std::uint64_t> seed;  // monte-carlo only
};

inline constexpr std::size_t kDefaultCellBudget = 10'000'000;

/// Weighted count of points in the half-open box [0,t) minus its volume.
double local_discrepancy(const PointSet& points, std::span<const double> t);

/// Discrepancy of the empty set: (p+1)^(-d/p), or 1 for p = infinity.
double initial_discrepancy(double p, std::size_t d);

/// Closed-form L2 discrepancy via the pairwise product sum. O(N^2 d).
DiscrepancyEstimate l2_exact(const PointSet& points);

/// Plain Monte-Carlo mean of |Delta|^p, then the p-th root. Sample i draws its
/// coordinates from a stream keyed by (seed, i), so the result does not
/// depend on evaluation order. std_error is the delta-method error of the root.
DiscrepancyEstimate lp_monte_carlo(const PointSet& points, double p, std::size_t samples,
                                   std::uint64_t seed);

/// Exact L_p for even integer p: the counting function is constant on each
/// cell of the coordinate grid, so (A - prod t_j)^p integrates through its
/// binomial expansion. Throws ResourceError when (N+1)^d (p+1) > budget.
DiscrepancyEstimate lp_cell_exact(const PointSet& points, int p,
                                  std::size_t budget = kDefaultCellBudget);

/// Exact star discrepancy by enumerating the critical grid with open and
/// closed counts. Throws ResourceError when (N+1)^d > budget.
DiscrepancyEstimate star_exact(const PointSet& points, std::size_t budget = kDefaultCellBudget);

}  // namespace lpdisc
