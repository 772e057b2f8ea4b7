#pragma once

// Deterministic numeric primitives shared by every other module: adaptive
// quadrature that respects known kinks, tensor Gauss rules on small boxes,
// bracketed root finding and a cancellation-free 2^x - 1.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lpdisc {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute
  std::size_t evaluations = 0;
  bool converged = true;  // false when the budget ran out before tol
};

struct Bracket {
  double lo;
  double hi;
};

struct QuadratureOptions {
  double tol = 1e-12;  // absolute
  double rel_tol = 0.0;  // accepted when error <= rel_tol * |value|
  std::size_t max_evaluations = 10'000'000;
  int max_depth = 60;
};

/// Adaptive Simpson on [lo, hi]. The interval is first cut at every supplied
/// breakpoint, so no Simpson panel ever straddles one. Throws EvaluationError
/// on a non-finite sample; returns the best estimate with converged = false
/// if the evaluation budget is exhausted.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double lo,
                              double hi, std::span<const double> breakpoints,
                              const QuadratureOptions& options = {});

QuadratureResult integrate_1d(const std::function<double(double)>& f, double lo,
                              double hi, std::span<const double> breakpoints,
                              double tol);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

struct BoxOptions {
  int order = 16;
  std::size_t max_evaluations = 10'000'000;
};

/// Tensor Gauss rule applied inside every cell of the grid spanned by the
/// per-dimension breakpoints of [0,1]^d (0 and 1 are added implicitly).
/// Cells are summed in lexicographic cell order. Throws ResourceError when
/// cells * order^d exceeds the evaluation budget, ValidationError for d > 6.
QuadratureResult integrate_box(
    const std::function<double(std::span<const double>)>& f,
    const std::vector<std::vector<double>>& per_dim_breakpoints,
    const BoxOptions& options = {});

struct RootOptions {
  double tol = 1e-14;  // absolute bracket width
  double rel_tol = 0.0;  // or relative to |root|
  int max_iterations = 400;
};

/// Bisection safeguarded secant (Illinois-free, always keeps a sign-changing
/// bracket). Throws BracketError if f(lo) and f(hi) share a sign.
double find_root(const std::function<double(double)>& f, Bracket bracket,
                 const RootOptions& options = {});

/// Like find_root but also reports the final bracket.
struct RootResult {
  double root;
  Bracket bracket;
  int iterations;
};
RootResult find_root_bracketed(const std::function<double(double)>& f,
                               Bracket bracket, const RootOptions& options = {});

/// 2^x - 1 without cancellation for tiny |x|.
double pow2_minus_1(double x);

/// (1 - c)^e computed through log1p, accurate for tiny c.
double pow_one_minus(double c, double e);

/// 1 - (1 - c)^e, accurate for tiny c.
double one_minus_pow_one_minus(double c, double e);

/// Integral of y^e over [u, u + h] for u >= 0, h >= 0, e > -1, without
/// cancellation when h << u.
double power_integral(double u, double h, double e);

}  // namespace lpdisc
