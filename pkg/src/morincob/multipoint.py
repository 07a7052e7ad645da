"""Characteristic numbers of multiple-point manifolds of immersions.

For an immersion ``f: M^n -> R^{n+k}`` with normal bundle ``nu`` the series
``m_r`` (pushforward of the beta series of the r-fold point manifold) is
``(-e(nu))^{r-1} beta(M)^r``; pairing its coefficients with ``[M]`` gives the
Pontrjagin numbers of the r-fold point manifold.  For general targets the
one-step recursion ``m_r beta(nu) = f^* n_{r-1} - e(nu) m_{r-1}`` is exposed
with user-supplied pulled-back ``n`` series.  Over F_2 the same formulas give
Stiefel-Whitney numbers with ``w_k(nu)`` as Euler class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Field, LinearMap, cross, inclusions
from .charclass import (
    BetaSeries,
    BundleData,
    SpaceModel,
    beta_of,
    product_space,
    pullback_class,
    series_add,
    series_cross,
    series_mul,
    series_pow,
    series_scale,
    series_sub,
    stable_inverse,
    whitney_sum,
    zero_series,
)
from .cobordism import CobordismClass, class_product, cobordant, numbers_from_series, zero_class
from .errors import IdentityCheckError, InvariantError


@dataclass(frozen=True, eq=False)
class ImmersionData:
    """Source model, codimension and normal bundle of an immersion.

    With ``euclidean=True`` the target is a Euclidean space and the tangent and
    normal classes must be stably inverse to each other.
    """

    source: SpaceModel
    codim: int
    normal: BundleData
    euclidean: bool = True

    def __post_init__(self):
        if self.codim < 1:
            raise InvariantError("immersion codimension must be >= 1")
        if self.normal.owner is not self.source.algebra:
            raise InvariantError("owner mismatch: normal bundle is not over the source")
        if self.normal.total.kind is not self.source.kind:
            raise InvariantError("normal and tangent classes have different kinds")
        if self.normal.rank != self.codim:
            raise InvariantError(f"normal bundle rank {self.normal.rank} != codimension {self.codim}")
        if self.field is Field.RAT:
            if self.codim % 2:
                raise InvariantError("RAT immersion data requires even codimension")
            if self.normal.euler is None:
                raise InvariantError("RAT immersion data requires an Euler class")
        if self.euclidean:
            if not whitney_sum(self.source.tangent, self.normal.total).element() == 1:
                raise InvariantError("tangent (+) normal is not trivial (Whitney constraint)")

    @property
    def field(self) -> Field:
        return self.source.field

    @property
    def euler(self):
        return self.normal.euler_class()

    @property
    def dim(self) -> int:
        return self.source.dim


@dataclass(frozen=True, eq=False)
class GeneralMapData:
    """Immersion into an arbitrary target.

    ``gysin_pull`` is ``f^* n_1(f) = f^* f_!(beta(M))`` as a series over the
    source; ``None`` stands for a Euclidean target, where ``f^* = 0``.
    """

    base: ImmersionData
    gysin_pull: BetaSeries | None = None
    pullback: LinearMap | None = None

    def __post_init__(self):
        g = self.gysin_pull
        if g is not None:
            if g.owner is not self.base.source.algebra:
                raise InvariantError("owner mismatch: gysin series is not over the source")
            if g.kind is not self.base.source.kind:
                raise InvariantError("gysin series kind does not match the field")

    @classmethod
    def general(cls, source: SpaceModel, codim: int, normal: BundleData, gysin_pull=None, pullback=None):
        return cls(ImmersionData(source, codim, normal, euclidean=False), gysin_pull, pullback)

    def pulled_n1(self) -> BetaSeries:
        if self.gysin_pull is None:
            return zero_series(self.base.source.algebra, self.base.source.kind)
        return self.gysin_pull


def _as_general(data) -> GeneralMapData:
    return data if isinstance(data, GeneralMapData) else GeneralMapData(data)


def multipoint_series(imm: ImmersionData, r: int, shortcut: bool = True) -> BetaSeries:
    """``m_r = (-e)^{r-1} beta(M)^r`` over the source."""
    if r < 1:
        raise ValueError("r must be >= 1")
    e = imm.euler
    power = series_pow(beta_of(imm.source.tangent), r, shortcut=shortcut)
    return series_scale((-e) ** (r - 1), power)


def multipoint_numbers(imm: ImmersionData, r: int) -> CobordismClass:
    """Characteristic numbers of the r-fold point manifold (dimension ``n - (r-1)k``)."""
    if not imm.euclidean:
        raise InvariantError("closed form needs a Euclidean target; use herbert_step")
    dim = imm.dim - (r - 1) * imm.codim
    if dim < 0:
        return zero_class(imm.field, None)
    return numbers_from_series(multipoint_series(imm, r), dim)


def herbert_step(data, m_prev: BetaSeries, n_prev_pulled: BetaSeries, r: int) -> BetaSeries:
    """One step of the multiple-point recursion: ``m_r = (f^* n_{r-1} - e m_{r-1}) / beta(nu)``."""
    if r < 2:
        raise ValueError("herbert_step needs r >= 2")
    data = _as_general(data)
    base = data.base
    A = base.source.algebra
    if m_prev.owner is not A or n_prev_pulled.owner is not A:
        raise InvariantError("owner mismatch: series are not over the source")
    inv_normal = beta_of(stable_inverse(base.normal.total))
    rhs = series_sub(n_prev_pulled, series_scale(base.euler, m_prev))
    return series_mul(inv_normal, rhs)


def iterate_herbert(data, r: int, pulled: list | None = None) -> BetaSeries:
    """``m_r`` by iterating the recursion from ``m_1 = beta(M)``.

    ``pulled[i]`` is ``f^* n_{i+1}``; missing entries are zero (Euclidean target).
    """
    data = _as_general(data)
    src = data.base.source
    m = beta_of(src.tangent)
    for s in range(2, r + 1):
        if pulled is not None and len(pulled) >= s - 1:
            n_prev = pulled[s - 2]
        elif s == 2:
            n_prev = data.pulled_n1()
        else:
            n_prev = zero_series(src.algebra, src.kind)
        m = herbert_step(data, m, n_prev, s)
    return m


def double_point_numbers(data) -> CobordismClass:
    """Numbers of the double-point manifold from the recursion with ``f^* n_1`` data."""
    data = _as_general(data)
    base = data.base
    m2 = herbert_step(data, beta_of(base.source.tangent), data.pulled_n1(), 2)
    return numbers_from_series(m2, base.dim - base.codim)


def euler_locus(B: SpaceModel, xi: BundleData) -> CobordismClass:
    """Numbers of the zero set of a generic section: pair ``beta(B) e(xi) / beta(xi)``."""
    if xi.owner is not B.algebra:
        raise InvariantError("owner mismatch: bundle is not over the space")
    e = xi.euler_class()
    S = beta_of(whitney_sum(B.tangent, stable_inverse(xi.total)))
    return numbers_from_series(series_scale(e, S), B.dim - xi.rank)


def product_immersion(g1: ImmersionData, g2: ImmersionData, euclidean: bool | None = None) -> ImmersionData:
    """Tensor model of ``g1 x g2``: normal bundle ``nu_1 x nu_2``, Euler class ``e_1 (x) e_2``."""
    if g1.field is not g2.field:
        raise InvariantError("field mismatch")
    X = product_space(g1.source, g2.source)
    P = X.algebra
    inl, inr = inclusions(P)
    total = whitney_sum(pullback_class(inl, g1.normal.total), pullback_class(inr, g2.normal.total))
    normal = BundleData(P, total, g1.codim + g2.codim, cross(g1.euler, g2.euler, P))
    if euclidean is None:
        euclidean = g1.euclidean and g2.euclidean
    return ImmersionData(X, g1.codim + g2.codim, normal, euclidean=euclidean)


def product_immersion_multipoint(g1: ImmersionData, g2: ImmersionData, r: int, verify: bool = True) -> CobordismClass:
    """r-fold points of a product immersion: ``(-1)^{r-1}`` times the product of the factors' classes."""
    if g1.field is not g2.field:
        raise InvariantError("field mismatch")
    if g1.field is Field.RAT and (g1.codim % 2 or g2.codim % 2):
        raise InvariantError("oriented product theorem needs both codimensions even")
    result = class_product(multipoint_numbers(g1, r), multipoint_numbers(g2, r))
    if r % 2 == 0:
        result = -result
    if verify:
        direct = multipoint_numbers(product_immersion(g1, g2), r)
        if not cobordant(direct, result):
            raise IdentityCheckError(
                "r-fold points of a product immersion", f"r={r}: tensor model {direct} != {result}"
            )
    return result


def double_point_terms(g1, g2) -> dict:
    """The three summands of the double-point product formula."""
    g1, g2 = _as_general(g1), _as_general(g2)
    m1, m2 = double_point_numbers(g1), double_point_numbers(g2)
    d1 = euler_locus(g1.base.source, g1.base.normal)
    d2 = euler_locus(g2.base.source, g2.base.normal)
    return {
        "M2(g1) x M2(g2)": class_product(m1, m2),
        "M2(g1) x Delta(nu2)": class_product(m1, d2),
        "Delta(nu1) x M2(g2)": class_product(d1, m2),
    }


def product_double_points(g1, g2, verify: bool = True) -> CobordismClass:
    """Double points of ``g1 x g2`` for arbitrary targets, via the three-term formula.

    With ``verify`` the left side is recomputed on the tensor model from the
    recursion, with ``f^* n_1(f) = (g1^* n_1) x (g2^* n_1)``.
    """
    g1, g2 = _as_general(g1), _as_general(g2)
    b1, b2 = g1.base, g2.base
    if b1.field is not b2.field:
        raise InvariantError("field mismatch")
    if b1.field is Field.RAT and (b1.codim % 2 or b2.codim % 2):
        raise InvariantError("oriented double-point theorem needs both codimensions even")
    terms = list(double_point_terms(g1, g2).values())
    result = terms[0] + terms[1] + terms[2]
    if verify:
        f = product_immersion(b1, b2, euclidean=False)
        P = f.source.algebra
        pulled = series_cross(g1.pulled_n1(), g2.pulled_n1(), P)
        direct = double_point_numbers(GeneralMapData(f, pulled))
        if not cobordant(direct, result):
            raise IdentityCheckError(
                "double points of a product immersion", f"tensor model {direct} != {result}"
            )
    return result


def synthetic_gysin(data: ImmersionData, m2: BetaSeries) -> BetaSeries:
    """``f^* n_1`` consistent with a prescribed ``m_2``: ``beta(nu) m_2 + e beta(M)``."""
    return series_add(
        series_mul(beta_of(data.normal.total), m2),
        series_scale(data.euler, beta_of(data.source.tangent)),
    )
