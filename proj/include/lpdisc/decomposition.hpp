#pragma once

// The univariate worst-case function h1(x) = 1 - (1-x)^p and its three-part
// splits h1 = h11 + h120 + h121, where h120 and h121 have disjoint supports
// on either side of a cut point a, plus the one-dimensional integrals that
// decide whether a split yields a valid lower-bound certificate.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lpdisc {

/// Conjugate exponents 1/p + 1/q = 1 with q an even integer.
struct ConjugatePair {
  int q;
  double p;

  /// Throws ValidationError unless q is even and >= 2.
  static ConjugatePair from_q(int q);
};

enum class Scheme {
  proof,      // plateau split with parameters (a, c)
  quadratic,  // q = 2 split with linear h11 and quadratic bumps
  candidate,  // general-q analogue of the quadratic split (domination unproven)
};

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);

/// A point of [0,1] together with 1 - x, so that evaluations near 1 keep
/// full relative precision in (1 - x).
struct Abscissa {
  double x;
  double complement;

  static Abscissa at(double x) { return {x, 1.0 - x}; }
  static Abscissa from_complement(double y) { return {1.0 - y, y}; }
};

/// Cut point a stored together with 1 - a. Constructing from the complement
/// keeps 1 - a exact, e.g. for a = 1 - 10^-q.
class CutPoint {
 public:
  static CutPoint at(double a) { return CutPoint(a, 1.0 - a); }
  static CutPoint from_complement(double one_minus_a) {
    return CutPoint(1.0 - one_minus_a, one_minus_a);
  }
  double value() const { return a_; }
  double complement() const { return one_minus_a_; }

 private:
  CutPoint(double a, double one_minus_a) : a_(a), one_minus_a_(one_minus_a) {}
  double a_;
  double one_minus_a_;
};

struct DecompositionParams {
  Scheme scheme = Scheme::proof;
  CutPoint a = CutPoint::at(0.5);
  std::optional<double> c;  // proof scheme only

  static DecompositionParams proof(CutPoint a, double c) { return {Scheme::proof, a, c}; }
  static DecompositionParams quadratic(CutPoint a) { return {Scheme::quadratic, a, std::nullopt}; }
  static DecompositionParams candidate(CutPoint a) { return {Scheme::candidate, a, std::nullopt}; }
};

/// Throws ValidationError when the parameters do not fit the scheme:
/// 0 < a < 1; proof: 0 < c < a/11; quadratic: q = 2; candidate: no c.
void validate(const ConjugatePair& cp, const DecompositionParams& params);

/// The proof scheme's default cut a* = 1 - 10^-q (built from its complement).
CutPoint default_proof_cut(int q);
/// a = 4^{1/3} / (1 + 4^{1/3}), where both bump integrals coincide for q = 2.
CutPoint quadratic_balanced_cut();
/// a = 2^{p/(p+1)} / (1 + 2^{p/(p+1)}), balancing the candidate split.
CutPoint candidate_balanced_cut(const ConjugatePair& cp);

/// One piece of a piecewise function on [lo, hi):
///   constant + power_coeff * (1-x)^p + slope * (x - anchor)
struct Segment {
  double lo;
  double hi;
  double lo_complement;
  double hi_complement;
  double constant = 0.0;
  double power_coeff = 0.0;
  double slope = 0.0;
  double anchor = 0.0;
  double anchor_complement = 1.0;
};

/// Piecewise closed-form function on [0,1]; the last segment is closed at 1.
class PiecewisePoly1D {
 public:
  PiecewisePoly1D(double p, std::vector<Segment> segments);

  double value(Abscissa x) const;
  double value(double x) const { return value(Abscissa::at(x)); }
  /// Right derivative (left derivative at x = 1).
  double derivative(Abscissa x) const;
  double derivative(double x) const { return derivative(Abscissa::at(x)); }
  /// Exact integral over [0,1].
  double integral() const;

  /// Interior segment boundaries.
  std::vector<double> breakpoints() const;
  std::span<const Segment> segments() const { return segments_; }
  double exponent() const { return p_; }

 private:
  const Segment& locate(Abscissa x) const;

  double p_;
  std::vector<Segment> segments_;
};

struct Parts {
  PiecewisePoly1D h11;
  PiecewisePoly1D h120;
  PiecewisePoly1D h121;

  /// Union of the interior breakpoints of all three parts, sorted.
  std::vector<double> breakpoints() const;
  /// Same, as (lower complement-aware) abscissae.
  std::vector<Abscissa> breakpoint_abscissae() const;
};

double h1(const ConjugatePair& cp, double x);
double h1_derivative(const ConjugatePair& cp, double x);
/// ||h1||_{1,q} = p (1+p)^{1/p - 1}.
double h1_norm(const ConjugatePair& cp);
PiecewisePoly1D h1_function(const ConjugatePair& cp);

Parts build_parts(const ConjugatePair& cp, const DecompositionParams& params);

/// Integral of h120 for the proof scheme (closed form).
double I120(const ConjugatePair& cp, CutPoint a, double c);
/// Integral of h121, (1-a)^{p+1} p/(p+1); shared by every scheme.
double I121(const ConjugatePair& cp, CutPoint a);

enum class CrossCheck { off, on };

/// Integral of h11'^alpha h120'^beta h121'^gamma over [0,1] with
/// alpha + beta + gamma = q. Closed form for the proof scheme; breakpoint-
/// aware quadrature for the other schemes. With CrossCheck::on the proof
/// scheme closed form is compared against quadrature and a relative
/// disagreement above 1e-10 raises ConsistencyError.
double I_integral(const ConjugatePair& cp, const DecompositionParams& params, int alpha, int beta,
                  int gamma, CrossCheck check = CrossCheck::off);

/// Quadrature route for I_integral (any scheme). Segments above 1/2 are
/// integrated in the variable 1 - x.
double I_integral_quadrature(const ConjugatePair& cp, const DecompositionParams& params,
                             int alpha, int beta, int gamma);

/// Balance condition of the proof scheme: the c in (0, a/11) with
/// I120(a, c) = I121(a). Throws NoBalanceError (with both endpoint
/// differences) when the difference does not change sign on the bracket,
/// ConsistencyError when the relative residual exceeds 1e-14.
double solve_c(const ConjugatePair& cp, CutPoint a);

/// Integral of h120 minus integral of h121 for the given parameters.
double balance_residual(const ConjugatePair& cp, const DecompositionParams& params);

enum class SignClass {
  pure,              // one exponent equals q: integrand is an even power
  disjoint_support,  // the product vanishes identically
  even_pair,         // alpha, beta even, gamma = 0
  special_choice,    // alpha, beta odd, gamma = 0: needs the parameter choice
};

std::string to_string(SignClass cls);

struct SignRow {
  int alpha;
  int beta;
  int gamma;
  double value;
  SignClass classification;
  bool ok;  // value >= -tolerance, and exactly 0 for disjoint-support rows
};

struct SignTable {
  std::vector<SignRow> rows;
  double tolerance = 1e-12;

  bool all_ok() const;
  /// Smallest I over the odd-alpha rows (the only ones that can go negative).
  double min_special() const;
};

enum class SignPolicy { report, throw_on_violation };

/// All (alpha, beta, gamma) with sum q, their integrals and classification.
SignTable sign_table(const ConjugatePair& cp, const DecompositionParams& params,
                     SignPolicy policy = SignPolicy::throw_on_violation);

/// Slack factor of the analytic sign bound at the default parameters:
/// (1 - 10^-q)^p - (32/100)^{q-1}, which the argument needs to be >= 0.6601.
double sign_bound_factor(const ConjugatePair& cp);

}  // namespace lpdisc
