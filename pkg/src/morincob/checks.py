"""Seeded random model generators and the built-in identity suites.

Every case draws from its own ``random.Random`` seeded with
``"<suite>:<seed>:<case>"`` so a failing case can be replayed alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .algebra import Field, GradedAlgebra, build_truncated_poly
from .charclass import (
    BetaSeries,
    BundleData,
    Kind,
    SpaceModel,
    TotalClass,
    beta_of,
    series_cross,
    series_mul,
    stable_inverse,
    whitney_sum,
)
from .cobordism import CobordismClass, class_product, cobordant, normal_numbers, zero_class
from .morin import MorinClass, morin_add, morin_mul
from .multipoint import (
    GeneralMapData,
    ImmersionData,
    double_point_numbers,
    herbert_step,
    iterate_herbert,
    multipoint_numbers,
    multipoint_series,
    product_double_points,
    product_immersion,
    synthetic_gysin,
)
from .partitions import partitions_up_to
from .singularity import MapData, sigma1_product, sigma2_product, suspend

# ---------------------------------------------------------------- generators

_NAMES = "xyzuv"


def random_algebra(rng: random.Random, field: Field, max_dim: int, min_dim: int = 1) -> GradedAlgebra:
    """A truncated polynomial model with one to three generators."""
    degrees = (2, 4) if field is Field.RAT else (1, 2, 3)
    while True:
        gens = []
        budget = rng.randint(max(min_dim, 1), max_dim)
        for t in range(rng.choice((1, 1, 2, 2, 3))):
            deg = rng.choice(degrees)
            most = budget // deg
            if most < 1:
                continue
            nil = rng.randint(2, most + 1)
            gens.append((_NAMES[t], deg, nil))
            budget -= deg * (nil - 1)
        dim = sum(d * (n - 1) for _, d, n in gens)
        if gens and dim >= min_dim:
            return build_truncated_poly(gens, field, dim)


def random_element(rng: random.Random, alg: GradedAlgebra, degree: int, spread: int = 3):
    coeffs = {i: rng.randint(-spread, spread) for i in alg.degree_basis(degree)}
    return alg.element(coeffs)


def random_total(rng: random.Random, alg: GradedAlgebra, kind: Kind | None = None) -> TotalClass:
    kind = kind or Kind.for_field(alg.field)
    comps = {i: random_element(rng, alg, kind.class_degree(i)) for i in range(1, alg.top_degree // kind.step + 1)}
    return TotalClass(alg, kind, comps)


def random_space(rng, field, max_dim, min_dim=1) -> SpaceModel:
    alg = random_algebra(rng, field, max_dim, min_dim)
    return SpaceModel(alg, random_total(rng, alg))


def random_codim(rng, field, dim, even: bool = False) -> int:
    if field is Field.RAT or even:
        ks = [k for k in (2, 4, 6) if k <= max(dim, 2)]
        if even:
            # half the time land the double-point manifold in a degree that carries numbers
            step = 4 if field is Field.RAT else 2
            aligned = [k for k in ks if (dim - k) % step == 0]
            if aligned and rng.random() < 0.5:
                return rng.choice(aligned)
        return rng.choice(ks)
    return rng.randint(1, max(1, min(3, dim)))


def random_euclidean_immersion(rng, field, max_dim, min_dim=1, even=False) -> ImmersionData:
    X = random_space(rng, field, max_dim, min_dim)
    k = random_codim(rng, field, X.dim, even)
    normal = stable_inverse(X.tangent)
    euler = random_element(rng, X.algebra, k) if field is Field.RAT else None
    return ImmersionData(X, k, BundleData(X.algebra, normal, k, euler))


def random_general_map(rng, field, max_dim, min_dim=1) -> tuple:
    """General-target immersion data together with the ``m_2`` it was built from."""
    X = random_space(rng, field, max_dim, min_dim)
    k = random_codim(rng, field, X.dim)
    alg = X.algebra
    normal = random_total(rng, alg)
    euler = random_element(rng, alg, k)
    kind = X.kind
    m2 = BetaSeries(
        alg,
        kind,
        {
            lam: random_element(rng, alg, kind.class_degree(lam) + k)
            for lam in partitions_up_to(max(0, (alg.top_degree - k) // kind.step))
        },
    )
    base = ImmersionData(X, k, BundleData(alg, normal, k, euler), euclidean=False)
    return GeneralMapData(base, synthetic_gysin(base, m2)), m2


def random_map(rng, field, max_dim, codims) -> MapData:
    X = random_space(rng, field, max_dim)
    return MapData(X, rng.choice(codims), random_total(rng, X.algebra))


def random_class(rng, field, dim, max_part=None, spread=3) -> CobordismClass:
    cls = zero_class(field, dim)
    numbers = {}
    for lam in cls.index_partitions():
        if max_part is not None and lam and lam[0] > max_part:
            continue
        numbers[lam] = rng.randint(-spread, spread)
    return CobordismClass(field, dim, numbers)


def random_morin(rng, n=None, k=None) -> MorinClass:
    """A random element of ``Mor(n, k) (x) Q`` inside the image of the strata maps."""
    if n is None:
        n = rng.choice((0, 4, 4, 8, 8, 12, 6, 10))
    if k is None:
        k = rng.choice((1, 1, 3, 3, 5, 2, 4))
    strata = {}
    shell = MorinClass(n, k, {})
    for r in shell.strata:
        if r >= 1 and k % 2 == 0:
            continue
        # draw normal numbers under the constraint, then convert back
        strata[r] = normal_numbers(random_class(rng, Field.RAT, shell.stratum_dim(r), k // 2))
    return MorinClass(n, k, strata)


# -------------------------------------------------------------------- suites


@dataclass
class SuiteResult:
    suite: str
    seed: int
    cases: int = 0
    nontrivial: int = 0
    passed: dict = dc_field(default_factory=dict)
    failed: dict = dc_field(default_factory=dict)

    def record(self, identity: str, ok: bool, case: int):
        self.passed.setdefault(identity, 0)
        self.failed.setdefault(identity, [])
        if ok:
            self.passed[identity] += 1
        else:
            self.failed[identity].append(case)

    @property
    def ok(self) -> bool:
        return self.cases > 0 and not any(self.failed.values())

    def checks(self) -> list:
        return [(name, not self.failed[name]) for name in self.passed]


def _case_rng(suite, seed, i):
    return random.Random(f"{suite}:{seed}:{i}")


def _field_for(i, field):
    if field is not None:
        return field
    return Field.RAT if i % 2 == 0 else Field.F2


def suite_beta(seed=0, cases=500, field=None) -> SuiteResult:
    res = SuiteResult("beta", seed)
    for i in range(cases):
        rng = _case_rng("beta", seed, i)
        fld = _field_for(i, field)
        alg = random_algebra(rng, fld, 16 if fld is Field.RAT else 8)
        u, v = random_total(rng, alg), random_total(rng, alg)
        bu, bv = beta_of(u), beta_of(v)
        res.record(
            "beta(u+v) = beta(u) beta(v)",
            beta_of(whitney_sum(u, v)) == series_mul(bu, bv, shortcut=False),
            i,
        )
        res.record(
            "beta(u) beta(u)^-1 = 1",
            series_mul(bu, beta_of(stable_inverse(u)), shortcut=False) == beta_of(TotalClass.trivial(alg)),
            i,
        )
        res.cases += 1
        res.nontrivial += len(bu.coeffs) > 1 and len(bv.coeffs) > 1
    return res


def suite_recursion(seed=0, cases=200, field=None, rs=(2, 3, 4)) -> SuiteResult:
    res = SuiteResult("recursion", seed)
    for i in range(cases):
        rng = _case_rng("recursion", seed, i)
        fld = _field_for(i, field)
        imm = random_euclidean_immersion(rng, fld, 16 if fld is Field.RAT else 10, min_dim=4)
        nontrivial = False
        for r in rs:
            closed = multipoint_series(imm, r)
            res.record(f"recursion = closed form (r={r})", iterate_herbert(imm, r) == closed, i)
            nontrivial |= not closed.is_zero()
        res.cases += 1
        res.nontrivial += nontrivial
    return res


def suite_product_multi(seed=0, cases=200, field=None, rs=(2, 3, 4)) -> SuiteResult:
    res = SuiteResult("product-multi", seed)
    for i in range(cases):
        rng = _case_rng("product-multi", seed, i)
        fld = _field_for(i, field)
        max_dim = 8 if fld is Field.RAT else 6
        g1 = random_euclidean_immersion(rng, fld, max_dim, even=True)
        g2 = random_euclidean_immersion(rng, fld, max_dim, even=True)
        f = product_immersion(g1, g2)
        nontrivial = False
        for r in rs:
            expected = class_product(multipoint_numbers(g1, r), multipoint_numbers(g2, r))
            if r % 2 == 0:
                expected = -expected
            direct = multipoint_numbers(f, r)
            res.record(f"M_r(g1 x g2) = (-1)^(r-1) M_r(g1) x M_r(g2) (r={r})", cobordant(direct, expected), i)
            nontrivial |= not direct.is_zero()
        res.cases += 1
        res.nontrivial += nontrivial
    return res


def suite_double_product(seed=0, cases=100, field=None) -> SuiteResult:
    res = SuiteResult("double-product", seed)
    for i in range(cases):
        rng = _case_rng("double-product", seed, i)
        fld = _field_for(i, field)
        max_dim = 8 if fld is Field.RAT else 5
        (g1, m21), (g2, m22) = (random_general_map(rng, fld, max_dim) for _ in range(2))
        for g, m2 in ((g1, m21), (g2, m22)):
            src = g.base.source
            res.record(
                "recursion recovers synthetic m_2",
                herbert_step(g, beta_of(src.tangent), g.gysin_pull, 2) == m2,
                i,
            )
        three_term = product_double_points(g1, g2, verify=False)
        f = product_immersion(g1.base, g2.base, euclidean=False)
        pulled = series_cross(g1.gysin_pull, g2.gysin_pull, f.source.algebra)
        direct = double_point_numbers(GeneralMapData(f, pulled))
        res.record("M_2(g1 x g2) = three-term formula", cobordant(direct, three_term), i)
        res.cases += 1
        res.nontrivial += not direct.is_zero()
    return res


def _sum_terms(P, terms):
    s = P.zero()
    for _, t in terms:
        s = s + t
    return s


def suite_sigma1(seed=0, cases=200) -> SuiteResult:
    res = SuiteResult("sigma1-product", seed)
    for i in range(cases):
        rng = _case_rng("sigma1-product", seed, i)
        f = random_map(rng, Field.F2, 6, range(-3, 5))
        g = random_map(rng, Field.F2, 6, range(-3, 5))
        total, terms = sigma1_product(f, g, verify=False)
        res.record("[Sigma^1(f x g)] = sum of suspended terms", _sum_terms(total.owner, terms) == total, i)
        j = rng.randint(0, 4)
        res.record(
            "suspension leaves w(nu) unchanged",
            suspend(f, j).normal == f.normal,
            i,
        )
        res.cases += 1
        res.nontrivial += not total.is_zero()
    return res


def suite_sigma2(seed=0, cases=200) -> SuiteResult:
    res = SuiteResult("sigma2-product", seed)
    for i in range(cases):
        rng = _case_rng("sigma2-product", seed, i)
        f = random_map(rng, Field.RAT, 12, range(-4, 7, 2))
        g = random_map(rng, Field.RAT, 12, range(-4, 7, 2))
        total, terms = sigma2_product(f, g, verify=False)
        res.record("[Sigma^2(f x g)] = sum of suspended terms", _sum_terms(total.owner, terms) == total, i)
        j = rng.randint(0, 4)
        res.record(
            "suspension leaves p(nu) unchanged",
            suspend(f, j).normal == f.normal,
            i,
        )
        res.cases += 1
        res.nontrivial += not total.is_zero()
    return res


def suite_morin_ring(seed=0, cases=100) -> SuiteResult:
    res = SuiteResult("morin-ring", seed)
    for i in range(cases):
        rng = _case_rng("morin-ring", seed, i)
        a, b, c = random_morin(rng), random_morin(rng), random_morin(rng)
        ab = morin_mul(a, b)
        res.record("commutative", ab == morin_mul(b, a), i)
        res.record("associative", morin_mul(ab, c) == morin_mul(a, morin_mul(b, c)), i)
        res.record(
            "bigrading (n, k+1) is additive",
            ab.bidegree == (a.n + b.n, a.k + 1 + b.k + 1),
            i,
        )
        b2 = random_morin(rng, b.n, b.k)
        res.record(
            "distributive",
            morin_mul(a, morin_add(b, b2)) == morin_add(ab, morin_mul(a, b2)),
            i,
        )
        if a.k % 2 == 0 or b.k % 2 == 0:
            res.record(
                "even codimension annihilates strata r >= 1",
                all(s.is_zero() for r, s in ab.strata.items() if r >= 1),
                i,
            )
        res.record("image constraint is closed under products", not ab.image_violations(), i)
        res.cases += 1
        res.nontrivial += any(not s.is_zero() for s in ab.strata.values())
    return res


SUITES = {
    "beta": suite_beta,
    "recursion": suite_recursion,
    "product-multi": suite_product_multi,
    "double-product": suite_double_product,
    "sigma1-product": suite_sigma1,
    "sigma2-product": suite_sigma2,
    "morin-ring": suite_morin_ring,
}

_FIELD_AWARE = {"beta", "recursion", "product-multi", "double-product"}


def run_suite(name: str, seed: int = 0, cases: int | None = None, field: Field | None = None) -> SuiteResult:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    kwargs = {"seed": seed}
    if cases is not None:
        kwargs["cases"] = cases
    if name in _FIELD_AWARE:
        kwargs["field"] = field
    return fn(**kwargs)
