#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lpdisc/certificates.hpp"
#include "lpdisc/cli.hpp"
#include "lpdisc/decomposition.hpp"
#include "lpdisc/discrepancy.hpp"
#include "lpdisc/fooling.hpp"
#include "lpdisc/numkernel.hpp"
#include "lpdisc/pointset.hpp"

#include <json.hpp>
#include <sstream>

using namespace lpdisc;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

void criterion1() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = run_cli({"constants", "--q", "2", "--scheme", "quadratic"}, out, err);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double C = code == 0 ? nlohmann::json::parse(out.str())["C"].get<double>() : 0.0;
  report(1, code == 0 && std::abs(C - 1.08332) <= 5e-5 && secs < 1.0,
         fmt("C=%.8f runtime=%.3fs", C, secs));
}

void criterion2() {
  const ConjugatePair cp = ConjugatePair::from_q(4);
  const CutPoint a = CutPoint::at(0.930338256);
  const double c = solve_c(cp, a);
  const CurseCertificate cert = make_certificate(cp, Scheme::proof, a);
  const bool reference = std::abs(c - 0.00186068) <= 1e-6 && std::abs(cert.C - 1.00277) <= 5e-5 &&
                         cert.sign_checks_passed;
  const CurseCertificate opt = optimize_a(4);
  const bool located = !opt.fallback && std::abs(opt.a - 0.9303) <= 1e-3;
  report(2, reference && located,
         fmt("c=%.10f C=%.8f optimize_a(4)=%.6f", c, cert.C, opt.a) +
             (cert.sign_checks_passed ? " signs=ok" : " signs=violated"));
}

void criterion3() {
  bool ok = true;
  std::string detail;
  for (int q : {2, 4, 6}) {
    const CurseCertificate d = default_certificate(q);
    const double share = 2.0 * std::pow(10.0, -q * (d.p + 1.0));
    const double ref = pow2_minus_1(share);
    const bool row = std::abs(d.alpha3 / (1 + d.alpha3) - share) <= 1e-12 * d.alpha3 &&
                     std::abs(d.C_minus_1 - ref) <= 1e-10 * ref;
    ok = ok && row;
    detail += fmt("q=%.0f C-1=%.6e ref=%.6e; ", q, d.C_minus_1, ref);
  }
  for (const TableComparison& r : compare_printed_table()) {
    detail += fmt("table q=%.0f printed-closed=%.3e; ", r.q, r.printed_minus_closed);
  }
  report(3, ok, detail);
}

void criterion4() {
  bool ok = true;
  std::string detail;
  const std::vector<double> none;
  for (int q : {2, 4, 6}) {
    const ConjugatePair cp = ConjugatePair::from_q(q);
    const double v =
        integrate_1d([&](double x) { return h1(cp, x) / h1_norm(cp); }, 0.0, 1.0, none, 1e-12).value;
    const double ref = std::pow(cp.p + 1.0, -1.0 / cp.p);
    ok = ok && std::abs(v - ref) <= 1e-8;
    detail += fmt("q=%.0f diff=%.2e; ", q, v - ref);
  }
  report(4, ok, detail);
}

void criterion5() {
  bool ok = true;
  std::string detail;
  for (int q : {2, 4, 6}) {
    const ConjugatePair cp = ConjugatePair::from_q(q);
    const double h = std::pow(10.0, -q);
    double worst = INFINITY;
    for (int i = 0; i < 20; ++i) {
      const CutPoint a = CutPoint::from_complement(h - 0.5 * h * i / 19.0);
      for (int j = 1; j <= 20; ++j) {
        const auto params = DecompositionParams::proof(a, h * j / 20.0);
        for (int alpha = 1; alpha < q; alpha += 2) {
          worst = std::min(worst, I_integral(cp, params, alpha, q - alpha, 0));
        }
      }
    }
    ok = ok && worst >= -1e-12;
    detail += fmt("q=%.0f min=%.3e; ", q, worst);
  }
  report(5, ok, detail);
}

void criterion6() {
  bool ok = true;
  double worst = 0.0;
  int norm_cases = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const int q = t % 2 == 0 ? 2 : 4;
    const ConjugatePair cp = ConjugatePair::from_q(q);
    const std::size_t d = 1 + mix64(t) % 6;
    const std::size_t n = mix64(t + 1000) % 9;
    const auto params = q == 2 ? DecompositionParams::quadratic(quadratic_balanced_cut())
                               : DecompositionParams::proof(default_proof_cut(q),
                                                            solve_c(cp, default_proof_cut(q)));
    const PointSet P = generate(GeneratorKind::random, n, d, t + 1);
    const FoolingFunction g(P, cp, params);
    worst = std::max(worst, g.max_abs_on_nodes());
    if (d <= 2) {
      ++norm_cases;
      ok = ok && compare_norms(P, cp, params).dominated;
    }
  }
  ok = ok && worst <= 1e-13;
  report(6, ok, fmt("max|g(x_k)|=%.3e norm cases=%.0f", worst, norm_cases));
}

void criterion7() {
  double worst = 0.0;
  int inside = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t n = mix64(t) % 6;
    const std::size_t d = 1 + mix64(t + 500) % 2;
    const PointSet P = generate(GeneratorKind::random, n, d, t + 1);
    const double l2 = l2_exact(P).value;
    worst = std::max(worst, std::abs(l2 - lp_cell_exact(P, 2).value));
    const DiscrepancyEstimate mc = lp_monte_carlo(P, 2.0, 20000, t + 1);
    if (std::abs(mc.value - l2) <= 3.0 * mc.std_error) ++inside;
  }
  bool empty = true;
  for (std::size_t d : {1, 2, 3, 5}) {
    for (int p : {2, 4}) {
      empty = empty && lp_cell_exact(PointSet::empty(d), p).value == initial_discrepancy(p, d);
    }
    empty = empty && l2_exact(PointSet::empty(d)).value == initial_discrepancy(2.0, d);
  }
  report(7, worst <= 1e-10 && inside >= 99 && empty,
         fmt("max|l2-cell|=%.3e mc within 3 sigma=%.0f/100", worst, inside) +
             (empty ? " empty=exact" : " empty=inexact"));
}

void criterion8() {
  const CurseCertificate c = make_certificate(ConjugatePair::from_q(2), Scheme::quadratic);
  bool at_zero = true;
  for (std::size_t d : {1, 10, 100, 1000}) {
    at_zero = at_zero && std::abs(normalized_error_lb(c, 0, d) - 1.0) <= 1e-12;
  }
  bool monotone = true;
  for (std::size_t d : {5, 20, 60}) {
    double prev = 1.0;
    for (std::uint64_t n = 0; n < 20000; n += 97) {
      const double v = normalized_error_lb(c, n, d);
      monotone = monotone && v <= prev;
      prev = v;
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t d = 50; d <= 200; d += 10) {
    const double y = certified_min_N(c, 0.5, d).log_n;
    sx += d;
    sy += y;
    sxx += static_cast<double>(d * d);
    sxy += d * y;
    ++m;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double target = 0.9 * std::log(c.C);
  report(8, at_zero && monotone && slope >= target,
         fmt("slope=%.5f target=%.5f", slope, target) + (monotone ? " monotone" : " not monotone"));
}

void criterion9() {
  const CurseCertificate c = make_certificate(ConjugatePair::from_q(2), Scheme::quadratic);
  const double rate = 0.5 * c.alpha3 / (1 + c.alpha3);
  const double a10 = alpha_decay(c.alpha3, rate, 10);
  const double a100 = alpha_decay(c.alpha3, rate, 100);
  const double a1000 = alpha_decay(c.alpha3, rate, 1000);
  report(9, a1000 < a100 && a100 < a10, fmt("a(10)=%.3e a(100)=%.3e a(1000)=%.3e", a10, a100, a1000));
}

template <typename F>
void guarded(int id, F f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  return failures == 0 ? 0 : 1;
}
