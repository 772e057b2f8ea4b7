#include "lpdisc/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lpdisc/errors.hpp"

namespace lpdisc {

namespace {

class SimpsonIntegrator {
 public:
  SimpsonIntegrator(const std::function<double(double)>& f, const QuadratureOptions& options)
      : f_(f), options_(options) {}

  double eval(double x) {
    const double y = f_(x);
    ++evaluations_;
    if (!std::isfinite(y)) {
      throw EvaluationError("integrand is not finite at x = " + std::to_string(x));
    }
    return y;
  }

  // Sum over one breakpoint-free segment.
  double segment(double lo, double hi, double tol, double& error) {
    if (hi <= lo) return 0.0;
    const double mid = 0.5 * (lo + hi);
    const double flo = eval(lo);
    const double fmid = eval(mid);
    const double fhi = eval(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return refine(lo, hi, flo, fmid, fhi, whole, tol, 0, error);
  }

  std::size_t evaluations() const { return evaluations_; }
  bool exhausted() const { return exhausted_; }

 private:
  double refine(double lo, double hi, double flo, double fmid, double fhi, double whole,
                double tol, int depth, double& error) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double flmid = eval(lmid);
    const double frmid = eval(rmid);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
    const double delta = left + right - whole;
    const bool out_of_budget = evaluations_ >= options_.max_evaluations;
    if (out_of_budget) exhausted_ = true;
    if (std::abs(delta) <= 15.0 * tol || depth >= options_.max_depth || out_of_budget ||
        lmid <= lo || rmid >= hi) {
      if (std::abs(delta) > 15.0 * tol && !out_of_budget) exhausted_ = true;
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return refine(lo, mid, flo, flmid, fmid, left, 0.5 * tol, depth + 1, error) +
           refine(mid, hi, fmid, frmid, fhi, right, 0.5 * tol, depth + 1, error);
  }

  const std::function<double(double)>& f_;
  const QuadratureOptions& options_;
  std::size_t evaluations_ = 0;
  bool exhausted_ = false;
};

std::vector<double> cell_edges(double lo, double hi, std::span<const double> breakpoints) {
  std::vector<double> edges{lo};
  for (double b : breakpoints) {
    if (!(b >= lo && b <= hi)) {
      throw ValidationError("breakpoint " + std::to_string(b) + " outside [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (b > lo && b < hi) edges.push_back(b);
  }
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

// Odometer increment, last index fastest; false once every index wrapped.
template <typename Limit>
bool advance(std::vector<std::size_t>& index, Limit limit) {
  for (std::size_t j = index.size(); j-- > 0;) {
    if (++index[j] < limit(j)) return true;
    index[j] = 0;
  }
  return false;
}

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                              std::span<const double> breakpoints,
                              const QuadratureOptions& options) {
  if (!(lo <= hi)) throw ValidationError("integrate_1d requires lo <= hi");
  if (!(options.tol > 0.0)) throw ValidationError("integrate_1d requires tol > 0");
  const std::vector<double> edges = cell_edges(lo, hi, breakpoints);
  SimpsonIntegrator simpson(f, options);

  double tol = options.tol;
  if (options.rel_tol > 0.0) {
    // Coarse pass to turn the relative target into an absolute one.
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double a = edges[i];
      const double b = edges[i + 1];
      constexpr int panels = 16;
      const double h = (b - a) / panels;
      double s = 0.0;
      for (int k = 0; k < panels; ++k) {
        const double x0 = a + k * h;
        s += h / 6.0 * (simpson.eval(x0) + 4.0 * simpson.eval(x0 + 0.5 * h) + simpson.eval(x0 + h));
      }
      scale += std::abs(s);
    }
    tol = std::max(tol, options.rel_tol * scale);
  }

  QuadratureResult result;
  const double length = hi - lo;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    const double share = length > 0.0 ? tol * (b - a) / length : tol;
    result.value += simpson.segment(a, b, std::max(share, 1e-300), result.error_estimate);
  }
  if (edges.size() < 2 || length == 0.0) {
    result.value = 0.0;
  }
  result.evaluations = std::max<std::size_t>(simpson.evaluations(), 1);
  result.converged = !simpson.exhausted();
  return result;
}

QuadratureResult integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                              std::span<const double> breakpoints, double tol) {
  QuadratureOptions options;
  options.tol = tol;
  return integrate_1d(f, lo, hi, breakpoints, options);
}

GaussRule gauss_legendre(int order) {
  if (order < 2) throw ValidationError("Gauss order must be >= 2");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

QuadratureResult integrate_box(const std::function<double(std::span<const double>)>& f,
                               const std::vector<std::vector<double>>& per_dim_breakpoints,
                               const BoxOptions& options) {
  const std::size_t d = per_dim_breakpoints.size();
  if (d == 0) {
    std::vector<double> empty;
    return {f(empty), 0.0, 1, true};
  }
  if (d > 6) throw ValidationError("integrate_box supports d <= 6");
  if (options.order < 2) throw ValidationError("integrate_box requires order >= 2");

  std::vector<std::vector<double>> edges(d);
  double cells = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    edges[j] = cell_edges(0.0, 1.0, per_dim_breakpoints[j]);
    cells *= static_cast<double>(edges[j].size() - 1);
  }
  const double evaluations = cells * std::pow(static_cast<double>(options.order), static_cast<double>(d));
  if (evaluations > static_cast<double>(options.max_evaluations)) {
    throw ResourceError("integrate_box needs " + std::to_string(evaluations) +
                        " evaluations, budget is " + std::to_string(options.max_evaluations));
  }

  const GaussRule rule = gauss_legendre(options.order);
  const auto order = static_cast<std::size_t>(options.order);

  // Per-dimension, per-cell mapped nodes and weights.
  std::vector<std::vector<std::vector<double>>> nodes(d), weights(d);
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t n_cells = edges[j].size() - 1;
    nodes[j].resize(n_cells);
    weights[j].resize(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
      const double lo = edges[j][c];
      const double hi = edges[j][c + 1];
      const double half = 0.5 * (hi - lo);
      const double mid = 0.5 * (hi + lo);
      for (std::size_t k = 0; k < order; ++k) {
        nodes[j][c].push_back(mid + half * rule.nodes[k]);
        weights[j][c].push_back(half * rule.weights[k]);
      }
    }
  }

  QuadratureResult result;
  std::vector<std::size_t> cell(d, 0);
  std::vector<std::size_t> node(d, 0);
  std::vector<double> x(d);
  do {
    double cell_sum = 0.0;
    std::fill(node.begin(), node.end(), 0);
    do {
      double w = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = nodes[j][cell[j]][node[j]];
        w *= weights[j][cell[j]][node[j]];
      }
      const double y = f(x);
      if (!std::isfinite(y)) throw EvaluationError("box integrand is not finite");
      cell_sum += w * y;
      ++result.evaluations;
    } while (advance(node, [&](std::size_t) { return order; }));
    result.value += cell_sum;
  } while (advance(cell, [&](std::size_t j) { return edges[j].size() - 1; }));
  return result;
}

RootResult find_root_bracketed(const std::function<double(double)>& f, Bracket bracket,
                               const RootOptions& options) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!(lo < hi)) throw BracketError("bracket requires lo < hi");
  double flo = f(lo);
  double fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    throw EvaluationError("root function not finite at bracket endpoints");
  }
  if (flo == 0.0) return {lo, {lo, lo}, 0};
  if (fhi == 0.0) return {hi, {hi, hi}, 0};
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw BracketError("no sign change across [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }

  int iterations = 0;
  double previous_width = hi - lo;
  bool force_bisection = false;
  while (iterations < options.max_iterations) {
    const double width = hi - lo;
    const double mid = lo + 0.5 * width;
    if (width <= std::max(options.tol, options.rel_tol * std::abs(mid))) break;
    if (mid <= lo || mid >= hi) break;  // no representable interior point left

    double x = mid;
    if (!force_bisection) {
      const double secant = hi - fhi * (hi - lo) / (fhi - flo);
      if (secant > lo && secant < hi) x = secant;
    }
    const double fx = f(x);
    ++iterations;
    if (!std::isfinite(fx)) throw EvaluationError("root function not finite inside bracket");
    if (fx == 0.0) return {x, {x, x}, iterations};
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    const double new_width = hi - lo;
    // Secant steps that fail to halve the bracket trigger a bisection.
    force_bisection = new_width > 0.5 * previous_width;
    previous_width = new_width;
  }
  const double root = std::abs(flo) <= std::abs(fhi) ? lo : hi;
  return {root, {lo, hi}, iterations};
}

double find_root(const std::function<double(double)>& f, Bracket bracket,
                 const RootOptions& options) {
  return find_root_bracketed(f, bracket, options).root;
}

double pow2_minus_1(double x) { return std::expm1(x * std::numbers::ln2); }

double pow_one_minus(double c, double e) { return std::exp(e * std::log1p(-c)); }

double one_minus_pow_one_minus(double c, double e) { return -std::expm1(e * std::log1p(-c)); }

double power_integral(double u, double h, double e) {
  if (h <= 0.0) return 0.0;
  const double e1 = e + 1.0;
  if (u <= 0.0) return std::pow(h, e1) / e1;
  return std::pow(u, e1) / e1 * std::expm1(e1 * std::log1p(h / u));
}

}  // namespace lpdisc
