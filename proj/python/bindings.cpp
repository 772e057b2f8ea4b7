#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lpdisc/certificates.hpp"
#include "lpdisc/cli.hpp"
#include "lpdisc/decomposition.hpp"
#include "lpdisc/discrepancy.hpp"
#include "lpdisc/errors.hpp"
#include "lpdisc/fooling.hpp"
#include "lpdisc/numkernel.hpp"
#include "lpdisc/pointset.hpp"
#include "lpdisc/report.hpp"

#include <sstream>

namespace py = pybind11;
using namespace lpdisc;

namespace {

// (N, d) float array, optional length-N coefficients.
PointSet to_point_set(py::array_t<double, py::array::c_style | py::array::forcecast> coords,
                      std::optional<std::vector<double>> coefficients, std::size_t d_if_empty) {
  if (coords.ndim() != 2) throw ValidationError("points must be a 2-D array of shape (N, d)");
  const auto n = static_cast<std::size_t>(coords.shape(0));
  const auto d = static_cast<std::size_t>(coords.shape(1));
  std::vector<double> flat(coords.data(), coords.data() + n * d);
  if (n == 0) return PointSet(d == 0 ? d_if_empty : d, {}, std::nullopt);
  return PointSet(d, std::move(flat), std::move(coefficients));
}

py::array_t<double> to_array(const PointSet& points) {
  py::array_t<double> out({points.size(), points.dimension()});
  auto src = points.coordinates();
  std::copy(src.begin(), src.end(), out.mutable_data());
  return out;
}

CurseCertificate certificate_for(int q, const std::string& scheme, std::optional<double> a) {
  std::optional<CutPoint> cut;
  if (a) cut = CutPoint::at(*a);
  return make_certificate(ConjugatePair::from_q(q), parse_scheme(scheme), cut);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "L_p discrepancy and curse-of-dimensionality certificates";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());
  py::register_exception<NoBalanceError>(m, "NoBalanceError", base.ptr());

  m.def("pow2_minus_1", &pow2_minus_1, py::arg("x"));

  py::class_<CurseCertificate>(m, "Certificate")
      .def_readonly("q", &CurseCertificate::q)
      .def_readonly("p", &CurseCertificate::p)
      .def_property_readonly("scheme", [](const CurseCertificate& c) { return to_string(c.scheme); })
      .def_readonly("a", &CurseCertificate::a)
      .def_readonly("c", &CurseCertificate::c)
      .def_readonly("alpha1", &CurseCertificate::alpha1)
      .def_readonly("alpha2", &CurseCertificate::alpha2)
      .def_readonly("alpha3", &CurseCertificate::alpha3)
      .def_readonly("C", &CurseCertificate::C)
      .def_readonly("C_minus_1", &CurseCertificate::C_minus_1)
      .def_readonly("sign_checks_passed", &CurseCertificate::sign_checks_passed)
      .def_readonly("balance_residual", &CurseCertificate::balance_residual)
      .def_readonly("fallback", &CurseCertificate::fallback)
      .def("to_json", [](const CurseCertificate& c) { return to_json(c).dump(); })
      .def("__repr__", [](const CurseCertificate& c) {
        std::ostringstream s;
        s.precision(12);
        s << "Certificate(q=" << c.q << ", scheme=" << to_string(c.scheme) << ", a=" << c.a
          << ", C=" << c.C << ")";
        return s.str();
      });

  m.def("certificate", &certificate_for, py::arg("q"), py::arg("scheme") = "proof",
        py::arg("a") = std::nullopt);
  m.def("default_certificate", [](int q) { return default_certificate(q); }, py::arg("q"));
  m.def("optimize_a", [](int q, std::size_t r) { return optimize_a(q, r); }, py::arg("q"),
        py::arg("resolution") = 1024);
  m.def("normalized_error_lb", &normalized_error_lb, py::arg("cert"), py::arg("n"), py::arg("d"));
  m.def(
      "certified_min_n",
      [](const CurseCertificate& cert, double eps, std::size_t d) {
        const CertifiedCount c = certified_min_N(cert, eps, d);
        return py::make_tuple(c.log_n, c.n);
      },
      py::arg("cert"), py::arg("eps"), py::arg("d"), "(log of the certified N, exact N or None)");
  m.def(
      "alpha_decay",
      [](double alpha3, double rate, std::size_t d) { return alpha_decay(alpha3, rate, d); },
      py::arg("alpha3"), py::arg("rate"), py::arg("d"));
  m.def(
      "initial_error", [](int q, std::size_t d) { return initial_error(ConjugatePair::from_q(q), d); },
      py::arg("q"), py::arg("d"));

  m.def(
      "solve_c",
      [](int q, double a) { return solve_c(ConjugatePair::from_q(q), CutPoint::at(a)); },
      py::arg("q"), py::arg("a"));
  m.def(
      "I_integral",
      [](int q, double a, double c, int alpha, int beta, int gamma) {
        return I_integral(ConjugatePair::from_q(q), DecompositionParams::proof(CutPoint::at(a), c),
                          alpha, beta, gamma);
      },
      py::arg("q"), py::arg("a"), py::arg("c"), py::arg("alpha"), py::arg("beta"), py::arg("gamma"));
  m.def(
      "decompose",
      [](int q, const std::string& scheme, double a, std::optional<double> c,
         std::vector<double> xs) {
        const ConjugatePair cp = ConjugatePair::from_q(q);
        DecompositionParams params{parse_scheme(scheme), CutPoint::at(a), c};
        const Parts parts = build_parts(cp, params);
        py::array_t<double> out({xs.size(), std::size_t{4}});
        auto v = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < xs.size(); ++i) {
          v(i, 0) = h1(cp, xs[i]);
          v(i, 1) = parts.h11.value(xs[i]);
          v(i, 2) = parts.h120.value(xs[i]);
          v(i, 3) = parts.h121.value(xs[i]);
        }
        return out;
      },
      py::arg("q"), py::arg("scheme"), py::arg("a"), py::arg("c") = std::nullopt, py::arg("x"),
      "columns h1, h11, h120, h121 at each x");

  m.def(
      "generate",
      [](const std::string& kind, std::size_t n, std::size_t d, std::uint64_t seed) {
        return to_array(generate(parse_generator_kind(kind), n, d, seed));
      },
      py::arg("kind"), py::arg("n"), py::arg("d"), py::arg("seed") = 0);

  m.def(
      "discrepancy",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> points, double p,
         const std::string& method, std::optional<std::vector<double>> weights, std::size_t samples,
         std::uint64_t seed, std::size_t d) {
        const PointSet ps = to_point_set(points, std::move(weights), d);
        DiscrepancyEstimate est;
        switch (parse_discrepancy_method(method)) {
          case DiscrepancyMethod::exact_l2: est = l2_exact(ps); break;
          case DiscrepancyMethod::cell_exact: est = lp_cell_exact(ps, static_cast<int>(p)); break;
          case DiscrepancyMethod::star_exact: est = star_exact(ps); break;
          case DiscrepancyMethod::monte_carlo: est = lp_monte_carlo(ps, p, samples, seed); break;
        }
        py::dict out;
        out["value"] = est.value;
        out["method"] = to_string(est.method);
        out["std_error"] = est.std_error;
        out["samples"] = est.samples;
        out["seed"] = est.seed;
        return out;
      },
      py::arg("points"), py::arg("p") = 2.0, py::arg("method") = "exact-l2",
      py::arg("weights") = std::nullopt, py::arg("samples") = 100000, py::arg("seed") = 0,
      py::arg("d") = 1);
  m.def("initial_discrepancy", &initial_discrepancy, py::arg("p"), py::arg("d"));

  m.def(
      "fooling_check",
      [](int q, py::array_t<double, py::array::c_style | py::array::forcecast> points,
         const std::string& scheme) {
        const ConjugatePair cp = ConjugatePair::from_q(q);
        const PointSet ps = to_point_set(points, std::nullopt, 1);
        DecompositionParams params;
        switch (parse_scheme(scheme)) {
          case Scheme::proof: {
            const CutPoint cut = default_proof_cut(q);
            params = DecompositionParams::proof(cut, solve_c(cp, cut));
            break;
          }
          case Scheme::quadratic:
            params = DecompositionParams::quadratic(quadratic_balanced_cut());
            break;
          case Scheme::candidate:
            params = DecompositionParams::candidate(candidate_balanced_cut(cp));
            break;
        }
        const FoolingFunction g(ps, cp, params);
        py::dict out;
        out["vanishing_max_abs"] = g.max_abs_on_nodes();
        out["fooling_integral"] = g.normalized_integral();
        return out;
      },
      py::arg("q"), py::arg("points"), py::arg("scheme") = "proof");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "(exit code, stdout text, stderr text)");
}
