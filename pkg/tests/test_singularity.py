import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from morincob import (
    Field,
    IdentityCheckError,
    InvariantError,
    MapData,
    TotalClass,
    pair,
    sigma1_product,
    sigma2_product,
    stable_inverse,
    suspend,
    thom_sigma1,
    thom_sigma2,
)
from morincob.checks import random_map
from morincob.modelio import parse_poly

from conftest import space


def projective(n, field):
    if field is Field.F2:
        X = space([("a", 1, n + 1)], field, n)
        g = X.algebra.gen("a")
    else:
        X = space([("x", 2, n + 1)], field, 2 * n)
        g = X.algebra.gen("x")
    tangent = TotalClass.from_element((1 + g) ** (n + 1) if field is Field.F2 else (1 + g * g) ** (n + 1))
    return type(X)(X.algebra, tangent), g


def test_fold_of_rp2(rp2):
    f = MapData(rp2, 0, stable_inverse(rp2.tangent))
    assert thom_sigma1(f) == rp2.algebra.gen("a")


def test_cp2_sigma2_count(cp2):
    f = MapData(cp2, 0, stable_inverse(cp2.tangent))
    t = thom_sigma2(f)
    assert t == parse_poly("-3*x^2", cp2.algebra)
    assert pair(t) == -3


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("k", range(0, 5))
def test_sigma1_of_projective_space(n, k):
    # oracle: w(nu) = (1+a)^-(n+1), so w_{k+1}(nu) = C(n+k+1, k+1) a^{k+1} mod 2
    X, a = projective(n, Field.F2)
    f = MapData(X, k, stable_inverse(X.tangent))
    expect = a ** (k + 1) * (comb(n + k + 1, k + 1) % 2) if k + 1 <= n else X.algebra.zero()
    assert thom_sigma1(f) == expect


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("k", [0, 2, 4])
def test_sigma2_of_projective_space(n, k):
    # oracle: p(nu) = (1+x^2)^-(n+1), so p_t(nu) = (-1)^t C(n+t, t) x^{2t}
    X, x = projective(n, Field.RAT)
    t = k // 2 + 1
    f = MapData(X, k, stable_inverse(X.tangent))
    expect = x ** (2 * t) * ((-1) ** t * comb(n + t, t)) if 2 * t <= n else X.algebra.zero()
    assert thom_sigma2(f) == expect


def test_sigma2_needs_even_codim(cp2):
    with pytest.raises(InvariantError):
        thom_sigma2(MapData(cp2, 1, stable_inverse(cp2.tangent)))
    with pytest.raises(InvariantError):
        thom_sigma1(MapData(cp2, 1, stable_inverse(cp2.tangent)))


def test_suspension(rp2):
    f = MapData(rp2, 0, stable_inverse(rp2.tangent))
    up = suspend(f, 3)
    assert up.codim == 3 and up.normal == f.normal
    assert thom_sigma1(up).is_zero()
    down = suspend(f, -2)
    assert down.source.dim == 4
    assert down.codim == -2
    assert "s2" in down.source.algebra.generators


def test_products_of_examples(rp2, cp2):
    f = MapData(rp2, 0, stable_inverse(rp2.tangent))
    total, terms = sigma1_product(f, f)
    assert str(total) == "a_2 + a"
    g = MapData(cp2, 0, stable_inverse(cp2.tangent))
    total, _ = sigma2_product(g, g)
    assert str(total) == "-3*x_2^2 - 3*x^2"


@given(st.integers(0, 10**6))
def test_sigma1_product_theorem(seed):
    rng = random.Random(seed)
    f = random_map(rng, Field.F2, 6, range(-3, 5))
    g = random_map(rng, Field.F2, 6, range(-3, 5))
    total, terms = sigma1_product(f, g, verify=True)
    assert [j for j, _ in terms] == list(range(1, len(terms) + 1))


@given(st.integers(0, 10**6))
def test_sigma2_product_theorem(seed):
    rng = random.Random(seed)
    f = random_map(rng, Field.RAT, 12, range(-4, 7, 2))
    g = random_map(rng, Field.RAT, 12, range(-4, 7, 2))
    sigma2_product(f, g, verify=True)


def test_wrong_direct_side_is_detected(monkeypatch, rp2):
    import morincob.singularity as sg

    f = MapData(rp2, 0, stable_inverse(rp2.tangent))
    real = sg._direct_normal

    def skewed(a, b, P):
        u = real(a, b, P)
        return TotalClass(P, u.kind, {})

    monkeypatch.setattr(sg, "_direct_normal", skewed)
    with pytest.raises(IdentityCheckError):
        sg.sigma1_product(f, f)


def test_splitting_principle_top_class():
    # oracle for p_t = e^2: a rank-2t bundle split as line bundles with roots y_i has
    # p_t = prod y_i^2 and e = prod y_i; here two complex line bundles over CP^2 x CP^2
    P = space([("y", 2, 3), ("z", 2, 3)], Field.RAT, 8)
    y, z = P.algebra.gen("y"), P.algebra.gen("z")
    p = TotalClass.from_element((1 + y * y) * (1 + z * z))
    e = y * z
    assert p[2] == e * e
