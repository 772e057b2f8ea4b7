import json
import pathlib

import pytest

import lpdisc

jsonschema = pytest.importorskip("jsonschema")

SCHEMAS = pathlib.Path(__file__).resolve().parents[2] / "schemas"


def load(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(*args):
    code, out, _ = lpdisc.run_cli(list(args))
    return code, json.loads(out)


@pytest.mark.parametrize(
    "args",
    [
        ("constants", "--q", "2", "--scheme", "quadratic"),
        ("constants", "--q", "4", "--a", "0.930338256"),
        ("constants", "--q", "6"),
        ("constants", "--q", "2", "--scheme", "candidate"),
        ("constants", "--q", "4", "--a", "0.9"),
    ],
)
def test_certificate(args):
    _, doc = run(*args)
    jsonschema.validate(doc, load("certificate"))


def test_estimate(tmp_path):
    f = tmp_path / "pts.csv"
    f.write_text("0.2,0.7\n0.6,0.1\n")
    for method, p in [("exact-l2", "2"), ("cell-exact", "4"), ("star-exact", "inf"), ("monte-carlo", "1.5")]:
        _, doc = run("disc", "--file", str(f), "--p", p, "--method", method, "--samples", "500")
        jsonschema.validate(doc, load("estimate"))


@pytest.mark.parametrize("scheme", ["proof", "quadratic", "candidate"])
def test_verify(scheme):
    _, doc = run("verify", "--q", "2", "--d", "2", "--n", "3", "--seed", "5", "--scheme", scheme)
    jsonschema.validate(doc, load("verify_report"))


def test_table():
    _, doc = run("constants", "--compare-table")
    jsonschema.validate(doc, load("table_comparison"))


@pytest.mark.parametrize(
    "args",
    [
        ("constants", "--q", "3"),
        ("constants", "--q", "4", "--a", "0.3"),
        ("constants", "--q", "4", "--scheme", "candidate"),
        ("--budget", "10", "verify", "--q", "4", "--d", "3", "--n", "2"),
        ("nonsense",),
    ],
)
def test_errors(args):
    code, doc = run(*args)
    assert code in (2, 3)
    jsonschema.validate(doc, load("error"))
