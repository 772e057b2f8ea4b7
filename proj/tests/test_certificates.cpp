#include <doctest.h>

#include <cmath>
#include <vector>

#include "lpdisc/certificates.hpp"
#include "lpdisc/discrepancy.hpp"
#include "lpdisc/errors.hpp"
#include "lpdisc/numkernel.hpp"
#include "lpdisc/pointset.hpp"

using namespace lpdisc;

namespace {

const double kQuadA = std::cbrt(4.0) / (1.0 + std::cbrt(4.0));

// Direct sum of the bound in long double:
// ((p+1)/p)^d alpha1^d sum_k C(d,k) alpha3^k (1 - N/2^k)_+
long double direct_bound(const CurseCertificate& c, long double n, int d) {
  long double sum = 0.0L, binom = 1.0L;
  const long double a3 = c.alpha3;
  for (int k = 0; k <= d; ++k) {
    const long double trunc = 1.0L - n / std::ldexp(1.0L, k);
    if (trunc > 0.0L) sum += binom * std::pow(a3, static_cast<long double>(k)) * trunc;
    binom = binom * (d - k) / (k + 1);
  }
  const long double scale = (c.p + 1.0L) / c.p * static_cast<long double>(c.alpha1);
  return std::pow(scale, static_cast<long double>(d)) * sum;
}

const CurseCertificate& quadratic() {
  static const CurseCertificate c = make_certificate(ConjugatePair::from_q(2), Scheme::quadratic);
  return c;
}

}  // namespace

TEST_CASE("quadratic alphas follow the piecewise closed forms") {
  const Alphas al = alphas(ConjugatePair::from_q(2), DecompositionParams::quadratic(quadratic_balanced_cut()));
  const double a = kQuadA;
  CHECK(al.alpha1 == doctest::Approx(a * (2 - a) * (2 - a) / 2).epsilon(1e-14));
  CHECK(al.alpha2 == doctest::Approx(a * a * a / 3).epsilon(1e-14));
  CHECK(std::abs(al.alpha1 + al.alpha2 - 2.0 / 3.0) <= 1e-12);
  CHECK(al.alpha3 > 0.0);
}

TEST_CASE("unbalanced splits are rejected") {
  CHECK_THROWS_AS(alphas(ConjugatePair::from_q(2), DecompositionParams::quadratic(CutPoint::at(0.5))),
                  ConsistencyError);
  CHECK_THROWS_AS(
      alphas(ConjugatePair::from_q(4), DecompositionParams::proof(CutPoint::at(0.95), 0.002)),
      ConsistencyError);
}

TEST_CASE("growth constants") {
  CHECK(std::abs(quadratic().C - 1.08332) <= 5e-5);
  CHECK(quadratic().sign_checks_passed);

  const CurseCertificate r =
      make_certificate(ConjugatePair::from_q(4), Scheme::proof, CutPoint::at(0.930338256));
  CHECK(std::abs(*r.c - 0.00186068) <= 1e-6);
  CHECK(std::abs(r.C - 1.00277) <= 5e-5);
  CHECK(r.sign_checks_passed);

  for (int q : {2, 4, 6}) {
    const CurseCertificate d = default_certificate(q);
    const double share = 2.0 * std::pow(10.0, -q * (d.p + 1.0));
    CHECK(std::abs(d.alpha3 / (1 + d.alpha3) - share) <= 1e-12 * d.alpha3);
    CHECK(std::abs(d.C_minus_1 - pow2_minus_1(share)) <= 1e-10 * pow2_minus_1(share));
    CHECK(d.C > 1.0);
    CHECK(d.C_minus_1 > 0.0);
    CHECK(d.sign_checks_passed);
    CHECK(std::abs(d.alpha1 + d.alpha2 - d.p / (d.p + 1)) <= 1e-12);
    for (const Check& ch : d.checks) {
      INFO(ch.name);
      CHECK(ch.passed);
    }
  }
  const CurseCertificate q4 = default_certificate(4);
  CHECK(*q4.c > 0.0);
  CHECK(*q4.c < 1e-4);

  // the quadratic split beats the proof split at q = 2
  CHECK(quadratic().C > default_certificate(2).C);
}

TEST_CASE("candidate scheme certificates carry the experimental flag") {
  const CurseCertificate c = make_certificate(ConjugatePair::from_q(2), Scheme::candidate);
  bool flagged = false;
  for (const Check& ch : c.checks) flagged = flagged || (ch.name == "domination_established" && !ch.passed);
  CHECK(flagged);
  CHECK(c.C == doctest::Approx(quadratic().C).epsilon(1e-12));
  // the prescribed candidate cut leaves the bumps unbalanced for q > 2
  CHECK_THROWS_AS(make_certificate(ConjugatePair::from_q(4), Scheme::candidate), ConsistencyError);
}

TEST_CASE("optimize_a") {
  const CurseCertificate d2 = default_certificate(2);
  const CurseCertificate o2 = optimize_a(2, 256);
  CHECK_FALSE(o2.fallback);
  CHECK(o2.C >= d2.C);
  CHECK(o2.sign_checks_passed);
  // nested grids: doubling the resolution never lowers C
  double prev = 0.0;
  for (std::size_t r : {64, 128, 256, 512}) {
    const double c = optimize_a(4, r).C;
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(feasible_cut(ConjugatePair::from_q(4), default_proof_cut(4)));
  CHECK_FALSE(feasible_cut(ConjugatePair::from_q(4), CutPoint::at(0.5)));
}

TEST_CASE("normalized error bound") {
  const CurseCertificate& c = quadratic();
  for (std::size_t d : {1, 10, 100, 1000}) CHECK(std::abs(normalized_error_lb(c, 0, d) - 1.0) <= 1e-12);
  for (std::size_t d : {1, 5, 20}) CHECK(normalized_error_lb(c, std::uint64_t{1} << d, d) == 0.0);
  CHECK(normalized_error_lb(c, 1000, 5) == 0.0);

  // log-space evaluation against the direct long double sum
  for (std::uint64_t n : {0ULL, 1ULL, 7ULL, 100ULL, 12345ULL, 1ULL << 20}) {
    const long double ref = direct_bound(c, static_cast<long double>(n), 30);
    const double got = normalized_error_lb(c, n, 30);
    CHECK(std::abs(got - static_cast<double>(ref)) <= 1e-10 * static_cast<double>(ref) + 1e-300);
  }
  const CurseCertificate r =
      make_certificate(ConjugatePair::from_q(4), Scheme::proof, CutPoint::at(0.930338256));
  for (std::uint64_t n : {3ULL, 50ULL, 4000ULL}) {
    const long double ref = direct_bound(r, static_cast<long double>(n), 30);
    CHECK(std::abs(normalized_error_lb(r, n, 30) - static_cast<double>(ref)) <= 1e-10 * static_cast<double>(ref));
  }

  const std::size_t d = 200;
  const auto n = static_cast<std::uint64_t>(std::floor(std::pow(1.08, 200.0)));
  const double v = normalized_error_lb(c, n, d);
  CHECK(v > 0.0);
  CHECK(v <= 1.0);

  double prev = 1.0;
  for (std::uint64_t m = 0; m < 5000; m += 37) {
    const double b = normalized_error_lb(c, m, 40);
    CHECK(b <= prev);
    prev = b;
  }
}

TEST_CASE("certified minimal N") {
  const CurseCertificate& c = quadratic();
  for (std::size_t d : {1, 5, 30}) {
    const CertifiedCount k = certified_min_N(c, 0.5, d);
    REQUIRE(k.n.has_value());
    CHECK(*k.n >= 1);
    CHECK(*k.n <= (std::uint64_t{1} << d));
    // conservative: the bound at n-1 exceeds eps, at n it does not
    CHECK(normalized_error_lb(c, *k.n - 1, d) > 0.5);
    CHECK(normalized_error_lb(c, *k.n, d) <= 0.5);
  }
  std::uint64_t prev = 0;
  for (std::size_t d = 10; d <= 200; d += 10) {
    const std::uint64_t n = *certified_min_N(c, 0.5, d).n;
    CHECK(n >= prev);
    prev = n;
  }
  CHECK(*certified_min_N(c, 0.3, 80).n >= *certified_min_N(c, 0.6, 80).n);
  const CertifiedCount big = certified_min_N(c, 0.5, 2000);
  CHECK_FALSE(big.n.has_value());
  CHECK(big.log_n > 100.0);
  CHECK_THROWS_AS(certified_min_N(c, 1.5, 10), ValidationError);
}

TEST_CASE("alpha decay") {
  const double a3 = quadratic().alpha3;
  const double w = a3 / (1 + a3);
  CHECK(alpha_decay(a3, 1.0, 50, RateCheck::relaxed) == 1.0);
  double prev = 1.0;
  for (std::size_t d : {10, 100, 1000}) {
    const double v = alpha_decay(a3, 0.5 * w, d);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(alpha_decay(a3, w, 10), ValidationError);
  CHECK_THROWS_AS(alpha_decay(a3, 0.0, 10), ValidationError);
}

TEST_CASE("initial error") {
  CHECK(initial_error(ConjugatePair::from_q(2), 1) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(initial_error(ConjugatePair::from_q(4), 0) == 1.0);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const int q = 2 * (1 + static_cast<int>(mix64(i) % 5));
    const std::size_t d = 1 + mix64(i + 100) % 40;
    const ConjugatePair cp = ConjugatePair::from_q(q);
    CHECK(initial_error(cp, d) == initial_discrepancy(cp.p, d));
  }
}

TEST_CASE("published table comparison is reported, not matched") {
  const auto rows = compare_printed_table();
  REQUIRE(rows.size() == 3);
  for (const TableComparison& r : rows) {
    CHECK(r.closed_form_C_minus_1 == doctest::Approx(r.pipeline_C_minus_1).epsilon(1e-10));
    CHECK(r.printed_value > 1.0);
  }
  CHECK(rows[0].closed_form_C_minus_1 == doctest::Approx(1.3862953e-6).epsilon(1e-7));
}
