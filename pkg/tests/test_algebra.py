import sympy
import pytest
from hypothesis import given, strategies as st

from morincob import Field, InvariantError, build_truncated_poly, cross, pair, sphere_model, tensor
from morincob.algebra import LinearMap, inclusions, render_element, restriction
from morincob.modelio import parse_poly


def test_cp2_model():
    A = build_truncated_poly([("x", 2, 3)], Field.RAT, 4)
    x = A.gen("x")
    assert A.labels == ("1", "x", "x^2")
    assert x * x == A.basis(2)
    assert x * x * x == A.zero()
    assert pair(x * x) == 1


def test_rp2_char_two():
    A = build_truncated_poly([("a", 1, 3)], Field.F2, 2)
    a = A.gen("a")
    assert (1 + a) * (1 + a) == 1 + a * a
    assert pair(a * a) == 1


def test_sphere_and_tensor():
    S = sphere_model(2, Field.RAT)
    assert S.labels == ("1", "s2")
    A = build_truncated_poly([("x", 2, 3)], Field.RAT, 4)
    P = tensor(A, A)
    assert P.top_degree == 8
    assert P.labels[P.fundamental] == "x^2*x_2^2"
    x, y = P.gen("x"), P.gen("x_2")
    assert pair(x * x * y * y) == 1


def test_rat_odd_degree_rejected():
    with pytest.raises(InvariantError, match="RAT algebras must be evenly graded"):
        build_truncated_poly([("a", 1, 3)], Field.RAT, 2)


def test_fundamental_must_be_unique():
    with pytest.raises(InvariantError, match="not unique"):
        build_truncated_poly([("x", 2, 2), ("y", 2, 2)], Field.RAT, 2)
    with pytest.raises(InvariantError, match="no monomial"):
        build_truncated_poly([("x", 4, 2)], Field.RAT, 2)


def test_owner_mismatch():
    A = build_truncated_poly([("x", 2, 3)], Field.RAT, 4)
    B = build_truncated_poly([("x", 2, 3)], Field.RAT, 4)
    with pytest.raises(InvariantError, match="owner mismatch"):
        A.gen("x") * B.gen("x")


gens_st = st.lists(
    st.tuples(st.sampled_from([2, 4]), st.integers(2, 4)), min_size=1, max_size=3
)


@given(gens_st, st.data())
def test_products_match_sympy_truncation(gens, data):
    # oracle: multiply as honest polynomials in sympy, then truncate
    names = ["x", "y", "z"][: len(gens)]
    spec = [(n, d, e) for n, (d, e) in zip(names, gens)]
    dim = sum(d * (e - 1) for d, e in gens)
    A = build_truncated_poly(spec, Field.RAT, dim)
    syms = sympy.symbols(names)

    def random_poly():
        terms = []
        for _ in range(data.draw(st.integers(1, 3))):
            exps = [data.draw(st.integers(0, e - 1)) for _, e in gens]
            c = data.draw(st.integers(-4, 4))
            terms.append((c, exps))
        return terms

    def to_alg(terms):
        out = A.zero()
        for c, exps in terms:
            m = A.scalar(c)
            for n, k in zip(names, exps):
                m = m * A.gen(n) ** k
            out = out + m
        return out

    def to_sym(terms):
        return sum(c * sympy.prod([s**k for s, k in zip(syms, exps)]) for c, exps in terms)

    f, g = random_poly(), random_poly()
    prod = sympy.Poly(sympy.expand(to_sym(f) * to_sym(g)), *syms)
    expect = A.zero()
    for monom, c in prod.terms():
        if all(k < e for k, (_, e) in zip(monom, gens)):
            m = A.scalar(int(c))
            for n, k in zip(names, monom):
                m = m * A.gen(n) ** k
            expect = expect + m
    assert to_alg(f) * to_alg(g) == expect


@given(st.integers(0, 10**6))
def test_ring_axioms_random(seed):
    import random

    from morincob.checks import random_algebra, random_element

    rng = random.Random(seed)
    field = rng.choice([Field.RAT, Field.F2])
    A = random_algebra(rng, field, 8)
    els = [sum((random_element(rng, A, d) for d in range(A.top_degree + 1)), A.zero()) for _ in range(3)]
    a, b, c = els
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_cross_and_inclusions():
    A = build_truncated_poly([("x", 2, 3)], Field.RAT, 4)
    S = sphere_model(2, Field.RAT)
    P = tensor(A, S)
    inl, inr = inclusions(P)
    assert inl(A.gen("x")) == P.gen("x")
    assert cross(A.gen("x") ** 2, S.gen("s2"), P) == P.fundamental_element()
    back = restriction(P)
    assert back(inl(A.gen("x") + 1)) == A.gen("x") + 1
    assert back(P.gen("s2")) == A.zero()


def test_linear_map_ring_check():
    A = build_truncated_poly([("x", 2, 3)], Field.RAT, 4)
    # x -> x, x^2 -> 2x^2 is linear and graded but not multiplicative
    with pytest.raises(InvariantError, match="not multiplicative"):
        LinearMap(A, A, {0: {0: 1}, 1: {1: 1}, 2: {2: 2}}, ring_map=True)


def test_render_parse_roundtrip():
    A = build_truncated_poly([("x", 2, 3), ("y", 4, 2)], Field.RAT, 8)
    for text in ["-3*x^2 + 1", "1/2*x^2*y - x*y + 7", "0", "x"]:
        e = parse_poly(text, A)
        assert parse_poly(render_element(e), A) == e
    assert render_element(parse_poly("1 - 3*x^2", A)) == "-3*x^2 + 1"
