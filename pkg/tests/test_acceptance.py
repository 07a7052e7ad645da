"""Acceptance gate: the ten end-to-end criteria, each under its time limit.

Every test records one ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary of a pytest run, and directly when this file is executed as
a script.
"""

import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

from morincob.checks import run_suite
from morincob.cli import Context, execute
from morincob.modelio import load_model
from morincob.morin import morin_rank

MODELS = Path(__file__).resolve().parent.parent / "models"
RESULTS: dict = {}


def record(number, title, ok, elapsed, limit, detail=""):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    line = f"[{status}] criterion {number:>2}: {title} ({elapsed:.2f}s, limit {limit:g}s)"
    if detail:
        line += f" {detail}"
    RESULTS[number] = line
    assert ok, line
    assert elapsed < limit, line


def run_command(model, cmd):
    return execute(Context(load_model(MODELS / model)), cmd)


def suite_ok(res, min_nontrivial=1):
    return res.ok and res.nontrivial >= min_nontrivial


def test_01_boy_triple_points():
    t = time.perf_counter()
    rep = run_command("boy.json", {"op": "multipoint", "immersion": "boy", "r": 3})
    ok = rep["result"] == {"[]": "1"} and rep["field"] == "F2" and rep["dim"] == 0
    record(1, "Boy's surface has an odd number of triple points", ok, time.perf_counter() - t, 1,
           f"result={rep['result']}")


def test_02_k3_euler_locus():
    t = time.perf_counter()
    rep = run_command("k3.json", {"op": "euler-locus", "space": "cp3", "bundle": "o4"})
    elapsed = time.perf_counter() - t
    # adjunction oracle: p(K) = (1 + h^2)^4 / (1 + 16 h^2) on K, <h^2, K> = 4
    h = sympy.Symbol("h")
    p1 = sympy.series((1 + h**2) ** 4 / (1 + 16 * h**2), h, 0, 3).removeO().coeff(h, 2)
    oracle = str(4 * p1)
    ok = rep["result"] == {"[1]": "-48"} == {"[1]": oracle}
    record(2, "K3 quartic via Euler locus gives p_1 = -48", ok, elapsed, 1, f"oracle={oracle}")


def test_03_sigma2_count_cp2():
    t = time.perf_counter()
    rep = run_command("cp2.json", {"op": "thom-sigma2", "map": "fc"})
    ok = Fraction(rep["result"]["number"]) == -3
    record(3, "Sigma^2 points of CP^2 -> R^4 pair to -3", ok, time.perf_counter() - t, 1,
           f"class={rep['result']['class']}")


def test_04_recursion_equals_closed_form():
    t = time.perf_counter()
    res = run_suite("recursion", 0, 200)
    record(4, "iterated recursion = closed form, 200 immersions, r = 2..4", suite_ok(res),
           time.perf_counter() - t, 30, f"nontrivial={res.nontrivial}")


def test_05_product_theorem():
    t = time.perf_counter()
    res = run_suite("product-multi", 0, 200)
    record(5, "r-fold product theorem, 200 pairs over Q and F2, r = 2..4", suite_ok(res),
           time.perf_counter() - t, 60, f"nontrivial={res.nontrivial}")


def test_06_double_point_product():
    t = time.perf_counter()
    res = run_suite("double-product", 0, 100)
    record(6, "double-point product theorem, 100 general-target pairs", suite_ok(res),
           time.perf_counter() - t, 30, f"nontrivial={res.nontrivial}")


def test_07_beta_multiplicative():
    t = time.perf_counter()
    res = run_suite("beta", 0, 500)
    record(7, "beta multiplicativity and inversion, 500 total classes", suite_ok(res),
           time.perf_counter() - t, 30, f"nontrivial={res.nontrivial}")


def test_08_cartan_products():
    t = time.perf_counter()
    s1 = run_suite("sigma1-product", 0, 200)
    s2 = run_suite("sigma2-product", 0, 200)
    ok = suite_ok(s1) and suite_ok(s2)
    record(8, "Sigma^1 and Sigma^2 product formulas, 200 pairs each", ok, time.perf_counter() - t, 30,
           f"nontrivial={s1.nontrivial}+{s2.nontrivial}")


def test_09_morin_ranks():
    t = time.perf_counter()
    ok = all(morin_rank(n, 1) == (n % 4 == 0) for n in range(41))
    ok = ok and morin_rank(8, 3) == 2
    ok = ok and all(morin_rank(0, k) == 1 for k in range(1, 21))
    record(9, "ranks of the Morin cobordism ring", ok, time.perf_counter() - t, 1)


def test_10_morin_ring_axioms():
    t = time.perf_counter()
    res = run_suite("morin-ring", 0, 100)
    needed = {
        "commutative",
        "associative",
        "bigrading (n, k+1) is additive",
        "distributive",
        "even codimension annihilates strata r >= 1",
    }
    ok = suite_ok(res) and needed <= set(res.passed)
    record(10, "ring axioms of the Morin cobordism ring, 100 triples", ok, time.perf_counter() - t, 30,
           f"nontrivial={res.nontrivial}")


def summary_lines():
    return [RESULTS[k] for k in sorted(RESULTS)]


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    print("\n".join(summary_lines()))
    sys.exit(1 if failed else 0)
