import json
import math

import numpy as np
import pytest

import lpdisc


def test_quadratic_constant():
    cert = lpdisc.certificate(2, "quadratic")
    assert abs(cert.C - 1.08332) < 5e-5
    assert cert.sign_checks_passed
    d = lpdisc.certificate_dict(cert)
    assert d["scheme"] == "quadratic"
    assert d["c"] is None
    assert {c["name"] for c in d["checks"]} >= {"alpha_identity", "balance"}


def test_q4_reference_cut():
    c = lpdisc.solve_c(4, 0.930338256)
    assert abs(c - 0.00186068) < 1e-6
    cert = lpdisc.certificate(4, "proof", 0.930338256)
    assert abs(cert.C - 1.00277) < 5e-5


def test_bound_endpoints():
    cert = lpdisc.certificate(2, "quadratic")
    assert lpdisc.normalized_error_lb(cert, 0, 50) == pytest.approx(1.0, abs=1e-12)
    assert lpdisc.normalized_error_lb(cert, 2**20, 20) == 0.0
    log_n, n = lpdisc.certified_min_n(cert, 0.5, 100)
    assert n is not None and n >= 1
    assert math.log(n) == pytest.approx(log_n)


def test_discrepancy_single_point():
    est = lpdisc.discrepancy(np.array([[0.5]]), 2.0, "exact-l2")
    assert est["value"] == pytest.approx(0.2886751345948129, abs=1e-12)
    assert est["seed"] is None
    empty = lpdisc.discrepancy(np.zeros((0, 3)), 2.0, "exact-l2")
    assert empty["value"] == lpdisc.initial_discrepancy(2.0, 3)


def test_generate_and_monte_carlo():
    pts = lpdisc.generate("hammersley", 16, 2)
    assert pts.shape == (16, 2)
    exact = lpdisc.discrepancy(pts, 2.0, "exact-l2")["value"]
    mc = lpdisc.discrepancy(pts, 2.0, "monte-carlo", samples=20000, seed=3)
    assert abs(mc["value"] - exact) <= 4 * mc["std_error"]


def test_fooling_vanishes():
    pts = lpdisc.generate("random", 5, 3, seed=11)
    report = lpdisc.fooling_check(2, pts, "quadratic")
    assert report["vanishing_max_abs"] <= 1e-13
    assert 0.0 < report["fooling_integral"] <= lpdisc.initial_error(2, 3)


def test_decompose_sums_to_h1():
    x = list(np.linspace(0.0, 1.0, 101))
    table = lpdisc.decompose(4, "proof", 0.8, 0.04, x)
    assert np.max(np.abs(table[:, 1:].sum(axis=1) - table[:, 0])) <= 1e-12


def test_errors_map_to_python():
    with pytest.raises(lpdisc.ValidationError):
        lpdisc.certificate(3)
    with pytest.raises(lpdisc.Error):
        lpdisc.solve_c(4, 0.5)


def test_cli_roundtrip():
    code, out, _ = lpdisc.run_cli(["constants", "--q", "2", "--scheme", "quadratic"])
    assert code == 0
    assert abs(json.loads(out)["C"] - 1.08332) < 5e-5
    code, out, _ = lpdisc.run_cli(["constants", "--q", "3"])
    assert code == 2
    assert json.loads(out)["error"] == "validation"
