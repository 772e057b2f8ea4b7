#include "lpdisc/fooling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "lpdisc/errors.hpp"
#include "lpdisc/numkernel.hpp"

namespace lpdisc {

namespace {

void check_dimension(std::size_t d) {
  if (d > kMaxFoolingDimension) {
    throw ResourceError("fooling construction enumerates 3^d subset pairs; d = " +
                        std::to_string(d) + " exceeds the guard d <= 12");
  }
}

// products[m] = prod_{j in m} values[j]
void subset_products(std::span<const double> values, std::vector<double>& products) {
  const std::size_t d = values.size();
  products.assign(std::size_t{1} << d, 1.0);
  for (std::size_t m = 1; m < products.size(); ++m) {
    const auto low = static_cast<std::size_t>(std::countr_zero(m));
    products[m] = products[m & (m - 1)] * values[low];
  }
}

}  // namespace

std::vector<RestrictedSumIndex> enumerate_admissible(const PointSet& points, double a,
                                                     std::size_t d) {
  check_dimension(d);
  if (!points.is_empty() && points.dimension() != d) {
    throw ValidationError("point set dimension does not match d");
  }
  std::vector<std::uint32_t> below(points.size());
  std::vector<std::uint32_t> above(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto x = points.point(k);
    for (std::size_t j = 0; j < d; ++j) {
      if (x[j] <= a) below[k] |= 1U << j;
      if (x[j] >= a) above[k] |= 1U << j;
    }
  }
  const std::uint32_t count = 1U << d;
  std::vector<RestrictedSumIndex> index;
  index.reserve(count);
  for (std::uint32_t u = 0; u < count; ++u) {
    RestrictedSumIndex entry{u, {}};
    std::uint32_t v = 0;
    do {
      bool hit = false;
      for (std::size_t k = 0; k < points.size() && !hit; ++k) {
        hit = (v & ~below[k]) == 0 && ((u & ~v) & ~above[k]) == 0;
      }
      if (!hit) entry.admissible_v.push_back(v);
      v = (v - u) & u;  // next superset-order submask of u
    } while (v != 0);
    index.push_back(std::move(entry));
  }
  return index;
}

FoolingFunction::FoolingFunction(const PointSet& points, const ConjugatePair& cp,
                                 const DecompositionParams& params)
    : points_(points),
      cp_(cp),
      params_(params),
      parts_(build_parts(cp, params)),
      d_(points.dimension()),
      index_(enumerate_admissible(points, params.a.value(), points.dimension())) {}

template <typename PartEval>
double FoolingFunction::restricted_sum(std::span<const double> x, PartEval eval) const {
  if (x.size() != d_) throw ValidationError("evaluation point has the wrong dimension");
  std::vector<double> f11(d_), f120(d_), f121(d_);
  for (std::size_t j = 0; j < d_; ++j) {
    f11[j] = eval(parts_.h11, x[j]);
    f120[j] = eval(parts_.h120, x[j]);
    f121[j] = eval(parts_.h121, x[j]);
  }
  std::vector<double> p11, p120, p121;
  subset_products(f11, p11);
  subset_products(f120, p120);
  subset_products(f121, p121);
  const std::uint32_t full = (1U << d_) - 1U;
  double total = 0.0;
  for (const RestrictedSumIndex& entry : index_) {
    double inner = 0.0;
    for (std::uint32_t v : entry.admissible_v) inner += p120[v] * p121[entry.u & ~v];
    total += p11[full & ~entry.u] * inner;
  }
  return total;
}

double FoolingFunction::value(std::span<const double> x) const {
  return restricted_sum(x, [](const PiecewisePoly1D& f, double t) { return f.value(t); });
}

DerivativeValue FoolingFunction::mixed_derivative(std::span<const double> x) const {
  const auto breaks = parts_.breakpoints();
  bool on_breakpoint = false;
  for (double t : x) {
    on_breakpoint = on_breakpoint || std::binary_search(breaks.begin(), breaks.end(), t);
  }
  const double v =
      restricted_sum(x, [](const PiecewisePoly1D& f, double t) { return f.derivative(t); });
  return {v, on_breakpoint};
}

double FoolingFunction::normalized_integral() const {
  const double i11 = parts_.h11.integral();
  const double i120 = parts_.h120.integral();
  const double i121 = parts_.h121.integral();
  double total = 0.0;
  for (const RestrictedSumIndex& entry : index_) {
    const int size_u = std::popcount(entry.u);
    double inner = 0.0;
    for (std::uint32_t v : entry.admissible_v) {
      const int size_v = std::popcount(v);
      inner += std::pow(i120, size_v) * std::pow(i121, size_u - size_v);
    }
    total += std::pow(i11, static_cast<double>(d_) - size_u) * inner;
  }
  return total / std::pow(h1_norm(cp_), static_cast<double>(d_));
}

double FoolingFunction::max_abs_on_nodes() const {
  double m = 0.0;
  for (std::size_t k = 0; k < points_.size(); ++k) m = std::max(m, std::abs(value(points_.point(k))));
  return m;
}

double g_eval(const PointSet& points, const ConjugatePair& cp, const DecompositionParams& params,
              std::span<const double> x) {
  return FoolingFunction(points, cp, params).value(x);
}

DerivativeValue g_mixed_derivative(const PointSet& points, const ConjugatePair& cp,
                                   const DecompositionParams& params, std::span<const double> x) {
  return FoolingFunction(points, cp, params).mixed_derivative(x);
}

double fooling_integral(const PointSet& points, const ConjugatePair& cp,
                        const DecompositionParams& params, std::size_t d) {
  check_dimension(d);
  if (points.dimension() != d) throw ValidationError("point set dimension does not match d");
  return FoolingFunction(points, cp, params).normalized_integral();
}

double norm_dq(const std::function<double(std::span<const double>)>& mixed_derivative,
               const ConjugatePair& cp, std::size_t d, std::span<const double> breakpoints,
               const NormOptions& options) {
  // Substitute x = 1 - (1-t)^(q-1): every (1-x)^(k/(q-1)) becomes a
  // polynomial in t, so Gauss is exact cell by cell.
  const int m = cp.q - 1;
  std::vector<double> mapped;
  for (double b : breakpoints) {
    if (b > 0.0 && b < 1.0) mapped.push_back(1.0 - std::pow(1.0 - b, 1.0 / m));
  }
  std::vector<std::vector<double>> grid(d, mapped);
  BoxOptions box;
  box.order = options.order;
  box.max_evaluations = options.max_evaluations;
  std::vector<double> x(d);
  const auto result = integrate_box(
      [&](std::span<const double> t) {
        double jac = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double s = 1.0 - t[j];
          x[j] = 1.0 - std::pow(s, m);
          jac *= m * std::pow(s, m - 1);
        }
        return std::pow(std::abs(mixed_derivative(x)), cp.q) * jac;
      },
      grid, box);
  return std::pow(result.value, 1.0 / cp.q);
}

NormComparison compare_norms(const PointSet& points, const ConjugatePair& cp,
                             const DecompositionParams& params, const NormOptions& options) {
  const FoolingFunction g(points, cp, params);
  const auto breaks = g.parts().breakpoints();
  const std::size_t d = points.dimension();
  const double norm_g = norm_dq(
      [&](std::span<const double> x) { return g.mixed_derivative(x).value; }, cp, d, breaks, options);
  const double norm_h = norm_dq(
      [&](std::span<const double> x) {
        double v = 1.0;
        for (double t : x) v *= h1_derivative(cp, t);
        return v;
      },
      cp, d, breaks, options);
  return {norm_g, norm_h, norm_g <= norm_h * (1.0 + 1e-8)};
}

}  // namespace lpdisc
