#include "lpdisc/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lpdisc/errors.hpp"
#include "lpdisc/numkernel.hpp"

namespace lpdisc {

namespace {

double segment_length(const Segment& s) {
  return s.lo > 0.5 ? s.lo_complement - s.hi_complement : s.hi - s.lo;
}

// x - anchor, taken through complements when both sit near 1.
double offset(const Segment& s, Abscissa x) {
  return s.anchor > 0.5 ? s.anchor_complement - x.complement : x.x - s.anchor;
}

double segment_value(const Segment& s, double p, Abscissa x) {
  double v = s.constant;
  if (s.power_coeff != 0.0) v += s.power_coeff * std::pow(x.complement, p);
  if (s.slope != 0.0) v += s.slope * offset(s, x);
  return v;
}

double segment_derivative(const Segment& s, double p, Abscissa x) {
  double v = s.slope;
  if (s.power_coeff != 0.0) v -= p * s.power_coeff * std::pow(x.complement, p - 1.0);
  return v;
}

double segment_integral(const Segment& s, double p) {
  const double len = segment_length(s);
  double v = s.constant * len;
  if (s.power_coeff != 0.0) v += s.power_coeff * power_integral(s.hi_complement, len, p);
  if (s.slope != 0.0) {
    const double from = offset(s, {s.lo, s.lo_complement});
    const double to = offset(s, {s.hi, s.hi_complement});
    v += s.slope * 0.5 * (to - from) * (to + from);
  }
  return v;
}

// Breakpoint of [0,1] remembered with its complement.
struct Edge {
  double x;
  double complement;
};

Segment make_segment(Edge lo, Edge hi) { return {lo.x, hi.x, lo.complement, hi.complement}; }

Segment constant_segment(Edge lo, Edge hi, double value) {
  Segment s = make_segment(lo, hi);
  s.constant = value;
  return s;
}

Segment linear_segment(Edge lo, Edge hi, double slope, Edge anchor, double constant = 0.0) {
  Segment s = make_segment(lo, hi);
  s.constant = constant;
  s.slope = slope;
  s.anchor = anchor.x;
  s.anchor_complement = anchor.complement;
  return s;
}

Segment power_segment(Edge lo, Edge hi, double constant, double power_coeff) {
  Segment s = make_segment(lo, hi);
  s.constant = constant;
  s.power_coeff = power_coeff;
  return s;
}

constexpr Edge kZero{0.0, 1.0};
constexpr Edge kOne{1.0, 0.0};

Edge edge_of(CutPoint a) { return {a.value(), a.complement()}; }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_exponents(const ConjugatePair& cp, int alpha, int beta, int gamma) {
  if (alpha < 0 || beta < 0 || gamma < 0 || alpha + beta + gamma != cp.q) {
    throw ValidationError("I_integral requires nonnegative exponents summing to q");
  }
}

// Closed form for the proof scheme; `scale` receives the sum of absolute
// values of the pieces (the magnitude the cross-check is relative to).
double proof_I_closed(const ConjugatePair& cp, CutPoint a, double c, int alpha, int beta,
                      int gamma, double& scale) {
  const double p = cp.p;
  const int q = cp.q;
  const double tail = a.complement();
  if (gamma > 0) {
    if (alpha > 0 || beta > 0) {
      scale = 0.0;
      return 0.0;
    }
    const double v = std::pow(p, q) * std::pow(tail, p + 1.0) / (p + 1.0);
    scale = v;
    return v;
  }
  // [0, c): h11' = h120' = (p/2)(1-x)^{p-1}, and (p-1) q = p.
  const double head = std::pow(0.5 * p, q) * one_minus_pow_one_minus(c, p + 1.0) / (p + 1.0);
  // [c, a - 10c): h120' = 0, h11' = h1'.
  double plateau = 0.0;
  if (beta == 0) plateau = std::pow(p, q) * power_integral(tail + 10.0 * c, a.value() - 11.0 * c, p);
  // [a - 10c, a): h11' = h1' + s, h120' = -s.
  const double s = one_minus_pow_one_minus(c, p) / (20.0 * c);
  double ramp = 0.0;
  for (int k = 0; k <= alpha; ++k) {
    ramp += binomial(alpha, k) * std::pow(p, k) * std::pow(s, alpha - k) *
            power_integral(tail, 10.0 * c, k * (p - 1.0));
  }
  ramp *= std::pow(-s, beta);
  scale = head + std::abs(plateau) + std::abs(ramp);
  return head + plateau + ramp;
}

}  // namespace

ConjugatePair ConjugatePair::from_q(int q) {
  if (q < 2 || q % 2 != 0) {
    throw ValidationError("q must be an even integer >= 2, got " + std::to_string(q));
  }
  return {q, static_cast<double>(q) / (q - 1)};
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::proof: return "proof";
    case Scheme::quadratic: return "quadratic";
    case Scheme::candidate: return "candidate";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "proof") return Scheme::proof;
  if (name == "quadratic") return Scheme::quadratic;
  if (name == "candidate") return Scheme::candidate;
  throw ValidationError("unknown decomposition scheme '" + name + "'");
}

void validate(const ConjugatePair& cp, const DecompositionParams& params) {
  const double a = params.a.value();
  if (!(a > 0.0 && a < 1.0 && params.a.complement() > 0.0)) {
    throw ValidationError("cut point a must lie in (0,1)");
  }
  switch (params.scheme) {
    case Scheme::proof: {
      if (!params.c) throw ValidationError("proof scheme requires a parameter c");
      const double c = *params.c;
      if (!(c > 0.0 && c < a / 11.0)) {
        throw ValidationError("proof scheme requires 0 < c < a/11");
      }
      break;
    }
    case Scheme::quadratic:
      if (cp.q != 2) throw ValidationError("quadratic scheme requires q = 2");
      [[fallthrough]];
    case Scheme::candidate:
      if (params.c) throw ValidationError(to_string(params.scheme) + " scheme takes no c");
      break;
  }
}

CutPoint default_proof_cut(int q) { return CutPoint::from_complement(std::pow(10.0, -q)); }

CutPoint quadratic_balanced_cut() {
  const double r = std::cbrt(4.0);
  return CutPoint::from_complement(1.0 / (1.0 + r));
}

CutPoint candidate_balanced_cut(const ConjugatePair& cp) {
  const double r = std::pow(2.0, cp.p / (cp.p + 1.0));
  return CutPoint::from_complement(1.0 / (1.0 + r));
}

PiecewisePoly1D::PiecewisePoly1D(double p, std::vector<Segment> segments)
    : p_(p), segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("piecewise function needs a segment");
  // Drop empty pieces (e.g. a zero-width plateau).
  std::erase_if(segments_, [](const Segment& s) { return !(s.hi > s.lo); });
  if (segments_.front().lo != 0.0 || segments_.back().hi != 1.0) {
    throw ValidationError("piecewise function must cover [0,1]");
  }
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    if (segments_[i].lo != segments_[i - 1].hi) {
      throw ValidationError("piecewise segments must be contiguous");
    }
  }
}

const Segment& PiecewisePoly1D::locate(Abscissa x) const {
  for (const Segment& s : segments_) {
    const bool below_hi = s.hi > 0.5 ? x.complement > s.hi_complement : x.x < s.hi;
    if (below_hi) return s;
  }
  return segments_.back();
}

double PiecewisePoly1D::value(Abscissa x) const { return segment_value(locate(x), p_, x); }

double PiecewisePoly1D::derivative(Abscissa x) const {
  return segment_derivative(locate(x), p_, x);
}

double PiecewisePoly1D::integral() const {
  double total = 0.0;
  for (const Segment& s : segments_) total += segment_integral(s, p_);
  return total;
}

std::vector<double> PiecewisePoly1D::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < segments_.size(); ++i) out.push_back(segments_[i].lo);
  return out;
}

std::vector<double> Parts::breakpoints() const {
  std::vector<double> out;
  for (const auto* f : {&h11, &h120, &h121}) {
    const auto b = f->breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Abscissa> Parts::breakpoint_abscissae() const {
  std::vector<Abscissa> out;
  for (const auto* f : {&h11, &h120, &h121}) {
    const auto segs = f->segments();
    for (std::size_t i = 1; i < segs.size(); ++i) out.push_back({segs[i].lo, segs[i].lo_complement});
  }
  std::sort(out.begin(), out.end(), [](Abscissa l, Abscissa r) { return l.x < r.x; });
  out.erase(std::unique(out.begin(), out.end(), [](Abscissa l, Abscissa r) { return l.x == r.x; }),
            out.end());
  return out;
}

double h1(const ConjugatePair& cp, double x) { return 1.0 - std::pow(1.0 - x, cp.p); }

double h1_derivative(const ConjugatePair& cp, double x) {
  return cp.p * std::pow(1.0 - x, cp.p - 1.0);
}

double h1_norm(const ConjugatePair& cp) { return cp.p * std::pow(1.0 + cp.p, 1.0 / cp.p - 1.0); }

PiecewisePoly1D h1_function(const ConjugatePair& cp) {
  return PiecewisePoly1D(cp.p, {power_segment(kZero, kOne, 1.0, -1.0)});
}

Parts build_parts(const ConjugatePair& cp, const DecompositionParams& params) {
  validate(cp, params);
  const double p = cp.p;
  const Edge a = edge_of(params.a);
  const double tail_p = std::pow(params.a.complement(), p);  // (1-a)^p
  const double h1_at_a = -std::expm1(p * std::log(params.a.complement()));

  const std::vector<Segment> h121{constant_segment(kZero, a, 0.0),
                                  power_segment(a, kOne, tail_p, -1.0)};

  switch (params.scheme) {
    case Scheme::proof: {
      const double c = *params.c;
      const Edge ec{c, 1.0 - c};
      const Edge ramp{a.x - 10.0 * c, a.complement + 10.0 * c};
      const double h1c = one_minus_pow_one_minus(c, p);
      const double s = h1c / (20.0 * c);
      PiecewisePoly1D h120(p, {power_segment(kZero, ec, 0.5, -0.5),
                               constant_segment(ec, ramp, 0.5 * h1c),
                               linear_segment(ramp, a, -s, a),
                               constant_segment(a, kOne, 0.0)});
      PiecewisePoly1D h11(p, {power_segment(kZero, ec, 0.5, -0.5),
                              power_segment(ec, ramp, 1.0 - 0.5 * h1c, -1.0),
                              [&] {
                                Segment seg = linear_segment(ramp, a, s, a, 1.0);
                                seg.power_coeff = -1.0;
                                return seg;
                              }(),
                              constant_segment(a, kOne, h1_at_a)});
      return {std::move(h11), std::move(h120), PiecewisePoly1D(p, h121)};
    }
    case Scheme::quadratic: {
      const double av = params.a.value();
      PiecewisePoly1D h11(p, {linear_segment(kZero, a, 2.0 - av, kZero),
                              constant_segment(a, kOne, (2.0 - av) * av)});
      Segment bump = power_segment(kZero, a, 1.0, -1.0);
      bump.slope = av - 2.0;
      PiecewisePoly1D h120(p, {bump, constant_segment(a, kOne, 0.0)});
      return {std::move(h11), std::move(h120), PiecewisePoly1D(p, h121)};
    }
    case Scheme::candidate: {
      const double slope = h1_at_a / params.a.value();
      PiecewisePoly1D h11(p, {linear_segment(kZero, a, slope, kZero),
                              constant_segment(a, kOne, h1_at_a)});
      Segment bump = power_segment(kZero, a, 1.0, -1.0);
      bump.slope = -slope;
      PiecewisePoly1D h120(p, {bump, constant_segment(a, kOne, 0.0)});
      return {std::move(h11), std::move(h120), PiecewisePoly1D(p, h121)};
    }
  }
  throw ValidationError("unknown scheme");
}

double I120(const ConjugatePair& cp, CutPoint a, double c) {
  const double p = cp.p;
  const double h1c = one_minus_pow_one_minus(c, p);
  // (p+1)(a - 5c) - 1 rewritten around 1 - a
  const double middle = p - (p + 1.0) * (a.complement() + 5.0 * c);
  return (h1c * middle + p * c * pow_one_minus(c, p)) / (2.0 * (p + 1.0));
}

double I121(const ConjugatePair& cp, CutPoint a) {
  return std::pow(a.complement(), cp.p + 1.0) * cp.p / (cp.p + 1.0);
}

double I_integral_quadrature(const ConjugatePair& cp, const DecompositionParams& params,
                             int alpha, int beta, int gamma) {
  check_exponents(cp, alpha, beta, gamma);
  const Parts parts = build_parts(cp, params);
  std::vector<Abscissa> edges{{0.0, 1.0}};
  for (Abscissa b : parts.breakpoint_abscissae()) edges.push_back(b);
  edges.push_back({1.0, 0.0});

  auto pick = [](const PiecewisePoly1D& f, double mid) -> const Segment& {
    for (const Segment& s : f.segments()) {
      if (mid < s.hi) return s;
    }
    return f.segments().back();
  };

  QuadratureOptions options;
  options.tol = 1e-300;
  options.rel_tol = 1e-13;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const Abscissa lo = edges[i];
    const Abscissa hi = edges[i + 1];
    const double mid = 0.5 * (lo.x + hi.x);
    const Segment& s11 = pick(parts.h11, mid);
    const Segment& s120 = pick(parts.h120, mid);
    const Segment& s121 = pick(parts.h121, mid);
    auto integrand = [&](Abscissa x) {
      double v = 1.0;
      if (alpha > 0) v *= std::pow(segment_derivative(s11, cp.p, x), alpha);
      if (beta > 0) v *= std::pow(segment_derivative(s120, cp.p, x), beta);
      if (gamma > 0) v *= std::pow(segment_derivative(s121, cp.p, x), gamma);
      return v;
    };
    const std::vector<double> none;
    if (lo.x > 0.5) {
      total += integrate_1d([&](double y) { return integrand(Abscissa::from_complement(y)); },
                            hi.complement, lo.complement, none, options)
                   .value;
    } else {
      total += integrate_1d([&](double x) { return integrand(Abscissa::at(x)); }, lo.x, hi.x, none,
                            options)
                   .value;
    }
  }
  return total;
}

double I_integral(const ConjugatePair& cp, const DecompositionParams& params, int alpha, int beta,
                  int gamma, CrossCheck check) {
  check_exponents(cp, alpha, beta, gamma);
  validate(cp, params);
  if (params.scheme != Scheme::proof) {
    return I_integral_quadrature(cp, params, alpha, beta, gamma);
  }
  double scale = 0.0;
  const double closed = proof_I_closed(cp, params.a, *params.c, alpha, beta, gamma, scale);
  if (check == CrossCheck::on) {
    const double quad = I_integral_quadrature(cp, params, alpha, beta, gamma);
    if (std::abs(quad - closed) > 1e-10 * scale) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "I(" << alpha << "," << beta << "," << gamma << "): closed form " << closed
          << " vs quadrature " << quad;
      throw ConsistencyError(msg.str());
    }
  }
  return closed;
}

double solve_c(const ConjugatePair& cp, CutPoint a) {
  if (!(a.value() > 0.0 && a.value() < 1.0)) throw ValidationError("solve_c requires a in (0,1)");
  const double target = I121(cp, a);
  auto difference = [&](double c) { return I120(cp, a, c) - target; };
  const double upper = std::nextafter(a.value() / 11.0, 0.0);
  const double at_lower = difference(0.0);
  const double at_upper = difference(upper);
  if (!(at_lower < 0.0 && at_upper > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no balancing c in (0, a/11) for a = " << a.value() << ": I120 - I121 is " << at_lower
        << " at c = 0 and " << at_upper << " at c = a/11";
    throw NoBalanceError(msg.str(), at_lower, at_upper);
  }
  RootOptions options;
  options.tol = 0.0;
  options.rel_tol = 1e-16;
  const double c = find_root(difference, {0.0, upper}, options);
  const double residual = std::abs(difference(c));
  if (residual > 1e-14 * target) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "balance residual " << residual << " exceeds 1e-14 * I121 = " << 1e-14 * target;
    throw ConsistencyError(msg.str());
  }
  return c;
}

double balance_residual(const ConjugatePair& cp, const DecompositionParams& params) {
  const Parts parts = build_parts(cp, params);
  if (params.scheme == Scheme::proof) return I120(cp, params.a, *params.c) - I121(cp, params.a);
  return parts.h120.integral() - parts.h121.integral();
}

std::string to_string(SignClass cls) {
  switch (cls) {
    case SignClass::pure: return "pure";
    case SignClass::disjoint_support: return "disjoint-support";
    case SignClass::even_pair: return "even-pair";
    case SignClass::special_choice: return "special-choice";
  }
  return "unknown";
}

bool SignTable::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const SignRow& r) { return r.ok; });
}

double SignTable::min_special() const {
  double m = std::numeric_limits<double>::infinity();
  for (const SignRow& r : rows) {
    if (r.classification == SignClass::special_choice) m = std::min(m, r.value);
  }
  return m;
}

SignTable sign_table(const ConjugatePair& cp, const DecompositionParams& params, SignPolicy policy) {
  validate(cp, params);
  SignTable table;
  const int q = cp.q;
  for (int alpha = q; alpha >= 0; --alpha) {
    for (int beta = q - alpha; beta >= 0; --beta) {
      const int gamma = q - alpha - beta;
      SignRow row{alpha, beta, gamma, 0.0, SignClass::pure, true};
      if (alpha == q || beta == q || gamma == q) {
        row.classification = SignClass::pure;
      } else if (gamma > 0) {
        row.classification = SignClass::disjoint_support;
      } else if (alpha % 2 == 0) {
        row.classification = SignClass::even_pair;
      } else {
        row.classification = SignClass::special_choice;
      }
      row.value = I_integral(cp, params, alpha, beta, gamma);
      row.ok = row.classification == SignClass::disjoint_support ? row.value == 0.0
                                                                  : row.value >= -table.tolerance;
      if (!row.ok && policy == SignPolicy::throw_on_violation) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "sign violation: I(" << alpha << "," << beta << "," << gamma
            << ") = " << row.value << " at a = " << params.a.value();
        if (params.c) msg << ", c = " << *params.c;
        throw SignViolationError(msg.str());
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

double sign_bound_factor(const ConjugatePair& cp) {
  return pow_one_minus(std::pow(10.0, -cp.q), cp.p) - std::pow(0.32, cp.q - 1);
}

}  // namespace lpdisc
