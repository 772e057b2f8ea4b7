#include "lpdisc/certificates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>

#include "lpdisc/errors.hpp"
#include "lpdisc/numkernel.hpp"

namespace lpdisc {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// log of C(d,k) w^k (1-w)^{d-k} for k = 0..d.
std::vector<double> log_binomial_pmf(std::size_t d, double w) {
  const double lw = std::log(w);
  const double lv = std::log1p(-w);
  std::vector<double> out(d + 1);
  for (std::size_t k = 0; k <= d; ++k) {
    out[k] = log_binomial(d, k) + static_cast<double>(k) * lw + static_cast<double>(d - k) * lv;
  }
  return out;
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double share_of(const ConjugatePair& cp, const CurseCertificate& cert) {
  (void)cp;
  return cert.alpha2 / (cert.alpha1 + cert.alpha2);
}

// (p+1)(alpha1+alpha2)/p - 1, which is ~1e-16 for a balanced certificate.
double ratio_minus_one(const CurseCertificate& cert) {
  return ((cert.p + 1.0) * (cert.alpha1 + cert.alpha2) - cert.p) / cert.p;
}

CutPoint grid_cut(const ConjugatePair& cp, double s) {
  // a = (1 - 10^-q) s, stored through 1 - a = (1 - s) + s 10^-q
  const double tail = std::pow(10.0, -cp.q);
  return CutPoint::from_complement((1.0 - s) + s * tail);
}

}  // namespace

DecompositionParams CurseCertificate::params() const {
  const CutPoint cut = CutPoint::from_complement(one_minus_a);
  switch (scheme) {
    case Scheme::proof: return DecompositionParams::proof(cut, c.value_or(0.0));
    case Scheme::quadratic: return DecompositionParams::quadratic(cut);
    case Scheme::candidate: return DecompositionParams::candidate(cut);
  }
  return {};
}

Alphas alphas(const ConjugatePair& cp, const DecompositionParams& params) {
  const Parts parts = build_parts(cp, params);
  const double alpha1 = parts.h11.integral();
  const double i120 =
      params.scheme == Scheme::proof ? I120(cp, params.a, *params.c) : parts.h120.integral();
  const double alpha2 = 2.0 * i120;
  const double identity = alpha1 + alpha2 - cp.p / (cp.p + 1.0);
  if (!(std::abs(identity) <= 1e-12)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "alpha1 + alpha2 - p/(p+1) = " << identity
        << "; the split is not balanced at a = " << params.a.value();
    throw ConsistencyError(msg.str());
  }
  if (!(alpha1 > 0.0 && alpha2 > 0.0)) {
    throw ConsistencyError("alpha1 and alpha2 must both be positive");
  }
  return {alpha1, alpha2, alpha2 / alpha1, alpha2 / (alpha1 + alpha2)};
}

GrowthConstant growth_constant(const Alphas& a) {
  const double m = pow2_minus_1(a.share);
  return {1.0 + m, m};
}

GrowthConstant growth_constant(const ConjugatePair& cp, const DecompositionParams& params) {
  return growth_constant(alphas(cp, params));
}

CurseCertificate make_certificate(const ConjugatePair& cp, Scheme scheme,
                                  std::optional<CutPoint> a, const CertificateOptions& options) {
  DecompositionParams params;
  switch (scheme) {
    case Scheme::proof: {
      const CutPoint cut = a.value_or(default_proof_cut(cp.q));
      params = DecompositionParams::proof(cut, solve_c(cp, cut));
      break;
    }
    case Scheme::quadratic:
      params = DecompositionParams::quadratic(a.value_or(quadratic_balanced_cut()));
      break;
    case Scheme::candidate:
      params = DecompositionParams::candidate(a.value_or(candidate_balanced_cut(cp)));
      break;
  }
  validate(cp, params);

  const Alphas al = alphas(cp, params);
  const GrowthConstant g = growth_constant(al);

  CurseCertificate cert;
  cert.q = cp.q;
  cert.p = cp.p;
  cert.scheme = scheme;
  cert.a = params.a.value();
  cert.one_minus_a = params.a.complement();
  cert.c = params.c;
  cert.alpha1 = al.alpha1;
  cert.alpha2 = al.alpha2;
  cert.alpha3 = al.alpha3;
  cert.C = g.C;
  cert.C_minus_1 = g.C_minus_1;

  const double i121 = I121(cp, params.a);
  cert.balance_residual = balance_residual(cp, params);
  const Tolerances& tol = cert.tolerances;

  const double identity = std::abs(al.alpha1 + al.alpha2 - cp.p / (cp.p + 1.0));
  cert.checks.push_back({"alpha_identity", identity <= tol.alpha_identity, identity});
  const double balance_rel = std::abs(cert.balance_residual) / i121;
  const double balance_limit = scheme == Scheme::proof ? tol.balance_relative : 1e-12;
  cert.checks.push_back({"balance", balance_rel <= balance_limit, balance_rel});
  if (scheme == Scheme::proof) {
    const double closed = 2.0 * std::pow(params.a.complement(), cp.p + 1.0);
    const double r = std::abs(al.share - closed) / al.alpha3;
    cert.checks.push_back({"closed_form_share", r <= 1e-12, r});
  }

  SignTable table = sign_table(cp, params, SignPolicy::report);
  table.tolerance = options.sign_tolerance;
  cert.tolerances.sign = options.sign_tolerance;
  for (SignRow& row : table.rows) {
    if (row.classification != SignClass::disjoint_support) row.ok = row.value >= -table.tolerance;
  }
  for (const SignRow& row : table.rows) {
    if (row.classification != SignClass::special_choice) continue;
    std::ostringstream name;
    name << "sign_I(" << row.alpha << "," << row.beta << "," << row.gamma << ")";
    cert.checks.push_back({name.str(), row.ok, row.value});
  }
  double worst = 0.0;
  for (const SignRow& row : table.rows) worst = std::min(worst, row.value);
  cert.sign_checks_passed = table.all_ok();
  cert.checks.push_back({"sign_table", cert.sign_checks_passed, worst});

  if (options.cross_check && scheme == Scheme::proof) {
    double worst_rel = 0.0;
    bool ok = true;
    for (const SignRow& row : table.rows) {
      try {
        I_integral(cp, params, row.alpha, row.beta, row.gamma, CrossCheck::on);
      } catch (const ConsistencyError&) {
        ok = false;
      }
      const double quad = I_integral_quadrature(cp, params, row.alpha, row.beta, row.gamma);
      const double scale = std::max(std::abs(row.value), std::numeric_limits<double>::min());
      if (row.value != 0.0 || quad != 0.0) worst_rel = std::max(worst_rel, std::abs(quad - row.value) / scale);
    }
    cert.checks.push_back({"closed_form_vs_quadrature", ok, worst_rel});
  }
  if (scheme == Scheme::candidate) {
    // Norm domination of the fooling function is not established for this split.
    cert.checks.push_back({"domination_established", false, 0.0});
  }
  cert.checks.push_back({"C_greater_than_one", cert.C_minus_1 > 0.0, cert.C_minus_1});
  return cert;
}

CurseCertificate default_certificate(int q, const CertificateOptions& options) {
  return make_certificate(ConjugatePair::from_q(q), Scheme::proof, std::nullopt, options);
}

bool feasible_cut(const ConjugatePair& cp, CutPoint a) {
  if (!(a.value() > 0.0 && a.value() < 1.0)) return false;
  double c = 0.0;
  try {
    c = solve_c(cp, a);
  } catch (const NoBalanceError&) {
    return false;
  } catch (const ConsistencyError&) {
    return false;
  }
  const auto params = DecompositionParams::proof(a, c);
  for (int alpha = 1; alpha < cp.q; alpha += 2) {
    if (I_integral(cp, params, alpha, cp.q - alpha, 0) < -1e-12) return false;
  }
  return true;
}

CurseCertificate optimize_a(int q, std::size_t resolution, const CertificateOptions& options) {
  const ConjugatePair cp = ConjugatePair::from_q(q);
  if (resolution < 1) throw ValidationError("resolution must be >= 1");
  if (resolution > (std::size_t{1} << 30)) throw ResourceError("resolution above 2^30");
  const std::size_t r = std::bit_ceil(resolution);
  const double step = 1.0 / static_cast<double>(r);

  std::size_t first = 0;
  for (std::size_t k = 1; k <= r; ++k) {
    if (feasible_cut(cp, grid_cut(cp, static_cast<double>(k) * step))) {
      first = k;
      break;
    }
  }
  if (first == 0) {
    CurseCertificate cert = default_certificate(q, options);
    cert.fallback = true;
    cert.checks.push_back({"feasible_cut_found", false, 0.0});
    return cert;
  }
  // Bisect on the dyadic lattice of spacing 2^-40 so every resolution ends
  // at the same point when the feasible set is an interval.
  double lo = static_cast<double>(first - 1) * step;
  double hi = static_cast<double>(first) * step;
  while (hi - lo > 0x1p-40) {
    const double mid = 0.5 * (lo + hi);
    if (feasible_cut(cp, grid_cut(cp, mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  CurseCertificate cert = make_certificate(cp, Scheme::proof, grid_cut(cp, hi), options);
  cert.checks.push_back({"feasible_cut_found", true, hi - lo});
  return cert;
}

double normalized_error_lb_log2(const CurseCertificate& cert, double log2_n, std::size_t d) {
  if (std::isnan(log2_n)) throw ValidationError("log2(N) is NaN");
  const double w = share_of(cert.pair(), cert);
  const std::vector<double> lpmf = log_binomial_pmf(d, w);
  const double norm = log_sum_exp(lpmf);
  double sum = 0.0;
  for (std::size_t k = 0; k <= d; ++k) {
    const double kk = static_cast<double>(k);
    if (!(kk > log2_n)) continue;
    const double trunc = -std::expm1((log2_n - kk) * kLn2);
    sum += std::exp(lpmf[k] - norm) * trunc;
  }
  const double scale = std::exp(static_cast<double>(d) * std::log1p(ratio_minus_one(cert)));
  return std::clamp(sum * scale, 0.0, 1.0);
}

double normalized_error_lb(const CurseCertificate& cert, std::uint64_t n, std::size_t d) {
  const double l = n == 0 ? -std::numeric_limits<double>::infinity()
                          : std::log2(static_cast<double>(n));
  return normalized_error_lb_log2(cert, l, d);
}

CertifiedCount certified_min_N(const CurseCertificate& cert, double eps, std::size_t d) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0,1)");
  constexpr std::size_t kExactBits = 62;
  const std::uint64_t top = std::uint64_t{1} << std::min(d, kExactBits);
  if (normalized_error_lb(cert, top, d) <= eps) {
    // invariant: bound(lo) > eps >= bound(hi)
    std::uint64_t lo = 0;
    std::uint64_t hi = top;
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (normalized_error_lb(cert, mid, d) > eps) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return {std::log(static_cast<double>(lo + 1)), lo + 1};
  }
  double lo = static_cast<double>(kExactBits);
  double hi = static_cast<double>(d);
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (normalized_error_lb_log2(cert, mid, d) > eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo * kLn2, std::nullopt};
}

double alpha_decay(double alpha3, double rate, std::size_t d, RateCheck check) {
  if (!(alpha3 > 0.0)) throw ValidationError("alpha3 must be positive");
  const double w = alpha3 / (1.0 + alpha3);
  if (!(rate > 0.0)) throw ValidationError("rate must be positive");
  if (check == RateCheck::enforce && !(rate < w)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "rate " << rate << " must be below alpha3/(1+alpha3) = " << w;
    throw ValidationError(msg.str());
  }
  const auto k_max = static_cast<std::size_t>(std::floor(rate * static_cast<double>(d)));
  const std::vector<double> lpmf = log_binomial_pmf(d, w);
  if (k_max >= d) return 1.0;
  const double head = log_sum_exp(std::span<const double>(lpmf.data(), k_max + 1));
  return std::min(1.0, std::exp(head - log_sum_exp(lpmf)));
}

double initial_error(const ConjugatePair& cp, std::size_t d) {
  return std::pow(cp.p + 1.0, -static_cast<double>(d) / cp.p);
}

std::vector<TableComparison> compare_printed_table() {
  struct Printed {
    int q;
    const char* text;
    int decimals;
  };
  const Printed printed[] = {{2, "1.01396", 5}, {4, "1.000003482", 9}, {6, "1.00000000051675", 14}};
  std::vector<TableComparison> out;
  for (const Printed& row : printed) {
    const ConjugatePair cp = ConjugatePair::from_q(row.q);
    const double share = 2.0 * std::pow(10.0, -row.q * (cp.p + 1.0));
    const double closed_m1 = pow2_minus_1(share);
    const double value = std::stod(row.text);
    const CurseCertificate cert = default_certificate(row.q);
    // compare C - 1 directly; the printed digits are truncated
    const double printed_m1 = std::stod(std::string("0") + (row.text + 1));
    const double diff = printed_m1 - closed_m1;
    const double unit = std::pow(10.0, -row.decimals);
    out.push_back({row.q, row.text, value, 1.0 + closed_m1, closed_m1, cert.C_minus_1, diff,
                   diff <= 0.0 && diff > -unit});
  }
  return out;
}

}  // namespace lpdisc
