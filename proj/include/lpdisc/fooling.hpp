#pragma once

// The fooling function g_d built from a node set: the tensor expansion of
// h_d = prod_j (h11 + h120 + h121)(x_j) with every (u, v) term dropped whose
// support box contains a node. g_d vanishes on all nodes, so its integral
// bounds the error of any algorithm using those nodes from below.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lpdisc/decomposition.hpp"
#include "lpdisc/pointset.hpp"

namespace lpdisc {

inline constexpr std::size_t kMaxFoolingDimension = 12;

/// Coordinates are bitmasks over [d]; bit j set means coordinate j is in the set.
struct RestrictedSumIndex {
  std::uint32_t u;
  std::vector<std::uint32_t> admissible_v;  // v subset of u, ascending
};

/// For each u (ascending) the subsets v of u for which no node lies in
/// [0,a]^v x [a,1]^(u\v). Intervals are closed, so a coordinate equal to a
/// belongs to both. Throws ResourceError for d > 12.
std::vector<RestrictedSumIndex> enumerate_admissible(const PointSet& points, double a,
                                                     std::size_t d);

struct DerivativeValue {
  double value;
  bool on_breakpoint;  // x hit a breakpoint of some part; value is one-sided
};

class FoolingFunction {
 public:
  FoolingFunction(const PointSet& points, const ConjugatePair& cp,
                  const DecompositionParams& params);

  std::size_t dimension() const { return d_; }
  const Parts& parts() const { return parts_; }
  std::span<const RestrictedSumIndex> index() const { return index_; }

  double value(std::span<const double> x) const;
  DerivativeValue mixed_derivative(std::span<const double> x) const;

  /// Integral of g_d over the cube divided by ||h_d||, from the per-part
  /// integrals (no d-dimensional quadrature).
  double normalized_integral() const;

  /// max_k |g_d(x_k)|.
  double max_abs_on_nodes() const;

 private:
  template <typename PartEval>
  double restricted_sum(std::span<const double> x, PartEval eval) const;

  PointSet points_;
  ConjugatePair cp_;
  DecompositionParams params_;
  Parts parts_;
  std::size_t d_;
  std::vector<RestrictedSumIndex> index_;
};

double g_eval(const PointSet& points, const ConjugatePair& cp, const DecompositionParams& params,
              std::span<const double> x);

DerivativeValue g_mixed_derivative(const PointSet& points, const ConjugatePair& cp,
                                   const DecompositionParams& params, std::span<const double> x);

double fooling_integral(const PointSet& points, const ConjugatePair& cp,
                        const DecompositionParams& params, std::size_t d);

struct NormOptions {
  int order = 16;
  std::size_t max_evaluations = 10'000'000;
};

/// ||f||_{d,q}: tensor Gauss quadrature of |mixed derivative|^q over the grid
/// spanned by `breakpoints` in every dimension, then the q-th root.
double norm_dq(const std::function<double(std::span<const double>)>& mixed_derivative,
               const ConjugatePair& cp, std::size_t d, std::span<const double> breakpoints,
               const NormOptions& options = {});

struct NormComparison {
  double norm_g;
  double norm_h;
  bool dominated;  // norm_g <= norm_h * (1 + 1e-8)
};

/// ||g_d|| against ||h_d||, both through the same quadrature grid.
NormComparison compare_norms(const PointSet& points, const ConjugatePair& cp,
                             const DecompositionParams& params, const NormOptions& options = {});

}  // namespace lpdisc
