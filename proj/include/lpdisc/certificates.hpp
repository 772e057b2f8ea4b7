#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpdisc/decomposition.hpp"

namespace lpdisc {

struct Alphas {
  double alpha1;  // integral of h11
  double alpha2;  // twice the integral of h120
  double alpha3;  // alpha2 / alpha1
  /// alpha3 / (1 + alpha3), evaluated as alpha2 / (alpha1 + alpha2).
  double share;
};

/// Requires a balanced split (both bump integrals equal); throws
/// ConsistencyError when |alpha1 + alpha2 - p/(p+1)| > 1e-12.
Alphas alphas(const ConjugatePair& cp, const DecompositionParams& params);

struct GrowthConstant {
  double C;
  double C_minus_1;
};

/// C = 2^{alpha3/(1+alpha3)}; C - 1 is computed directly so it keeps its
/// digits when alpha3 is ~1e-13.
GrowthConstant growth_constant(const ConjugatePair& cp, const DecompositionParams& params);
GrowthConstant growth_constant(const Alphas& a);

struct Check {
  std::string name;
  bool passed;
  double residual;
};

struct Tolerances {
  double alpha_identity = 1e-12;
  double balance_relative = 1e-14;
  double sign = 1e-12;
  double cross_check_relative = 1e-10;
};

struct CurseCertificate {
  int q;
  double p;
  Scheme scheme;
  double a;
  double one_minus_a;
  std::optional<double> c;
  double alpha1;
  double alpha2;
  double alpha3;
  double C;
  double C_minus_1;
  bool sign_checks_passed;
  double balance_residual;
  Tolerances tolerances;
  std::vector<Check> checks;
  /// Set when optimize_a found no feasible grid point and fell back to the
  /// default cut; also recorded as the "feasible_cut_found" check.
  bool fallback = false;

  ConjugatePair pair() const { return {q, p}; }
  DecompositionParams params() const;
};

struct CertificateOptions {
  /// Run the closed-form vs quadrature comparison of every I integral.
  bool cross_check = true;
  /// Lower limit for the sign-checked integrals (value >= -sign_tolerance).
  double sign_tolerance = 1e-12;
};

/// Full pipeline for explicit parameters. For the proof scheme with no c
/// the balance equation is solved first. Propagates NoBalanceError and
/// ConsistencyError; sign failures are recorded, not thrown.
CurseCertificate make_certificate(const ConjugatePair& cp, Scheme scheme,
                                  std::optional<CutPoint> a = std::nullopt,
                                  const CertificateOptions& options = {});

/// Proof scheme at a* = 1 - 10^-q with balanced c.
CurseCertificate default_certificate(int q, const CertificateOptions& options = {});

/// feasible(a): the balance equation has a root and every odd-alpha
/// integral I(alpha, q - alpha, 0) at that root is >= -1e-12.
bool feasible_cut(const ConjugatePair& cp, CutPoint a);

/// Smallest feasible a in (0, 1 - 10^-q]: scan `resolution` (rounded up to a
/// power of two) equally spaced points, then bisect between the last
/// infeasible and the first feasible one. Falls back to the default
/// certificate (fallback = true) if no grid point is feasible.
CurseCertificate optimize_a(int q, std::size_t resolution = 1024,
                            const CertificateOptions& options = {});

/// Right side of the normalized error bound
///   ((p+1)/p)^d alpha1^d sum_k C(d,k) alpha3^k (1 - N/2^k)_+
/// evaluated as ratio^d * sum_k Binom(d, w)(k) (1 - N/2^k)_+ with
/// w = alpha3/(1+alpha3), all in log space.
double normalized_error_lb(const CurseCertificate& cert, std::uint64_t n, std::size_t d);
/// Same with N given through log2(N); use -infinity for N = 0.
double normalized_error_lb_log2(const CurseCertificate& cert, double log2_n, std::size_t d);

struct CertifiedCount {
  double log_n;  // natural log of the certified lower bound
  std::optional<std::uint64_t> n;  // exact value when it fits in 62 bits
};

/// Conservative lower bound on the number of nodes needed to reach
/// normalized error eps: one more than the largest N whose bound still
/// exceeds eps.
CertifiedCount certified_min_N(const CurseCertificate& cert, double eps, std::size_t d);

enum class RateCheck { enforce, relaxed };

/// alpha(d) = sum_{k <= floor(rate d)} C(d,k) alpha3^k / (1+alpha3)^d.
/// Requires 0 < rate < alpha3/(1+alpha3) unless RateCheck::relaxed.
double alpha_decay(double alpha3, double rate, std::size_t d,
                   RateCheck check = RateCheck::enforce);

/// e_q(0,d) = (p+1)^{-d/p}.
double initial_error(const ConjugatePair& cp, std::size_t d);

/// Published reference values of 2^{alpha3/(1+alpha3)} for q = 2, 4, 6 next
/// to the closed form 4^{10^{-q(p+1)}} at a = 1 - 10^-q.
struct TableComparison {
  int q;
  std::string printed;
  double printed_value;
  double closed_form_C;
  double closed_form_C_minus_1;
  double pipeline_C_minus_1;
  double printed_minus_closed;
  bool matches;  // printed digits agree with the closed form
};
std::vector<TableComparison> compare_printed_table();

}  // namespace lpdisc
