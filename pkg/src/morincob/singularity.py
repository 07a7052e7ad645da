"""Thom polynomials of the Sigma^1 and Sigma^2 strata and their product formulas.

``[Sigma^1 f] = w_{k+1}(nu_f)`` over F_2 and ``[Sigma^2 f] = p_t(nu_f)`` over Q
for codimension ``k = 2t - 2``.  The product formulas are evaluated literally:
every term is obtained by suspending one factor (``f_j``), taking its Thom
class, and for negative ``j`` restricting from ``M x S^|j|`` back to ``M``.
The term sum is then compared with the Cartan expansion of the product's
normal class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraElement, Field, cross, inclusions, restriction, sphere_model, tensor
from .charclass import Kind, SpaceModel, TotalClass, pullback_class, whitney_sum
from .errors import IdentityCheckError, InvariantError


@dataclass(frozen=True, eq=False)
class MapData:
    """A generic map ``M^n -> N^{n+k}`` seen through its virtual normal class."""

    source: SpaceModel
    codim: int
    normal: TotalClass

    def __post_init__(self):
        if self.normal.owner is not self.source.algebra:
            raise InvariantError("owner mismatch: normal class is not over the source")

    @property
    def field(self) -> Field:
        return self.source.field

    @property
    def kind(self) -> Kind:
        return self.normal.kind


def thom_sigma1(f: MapData) -> AlgebraElement:
    if f.kind is not Kind.SW:
        raise InvariantError("Sigma^1 Thom polynomial needs Stiefel-Whitney data")
    return f.normal[f.codim + 1]


def thom_sigma2(f: MapData) -> AlgebraElement:
    if f.kind is not Kind.PONTRJAGIN:
        raise InvariantError("Sigma^2 Thom polynomial needs Pontrjagin data")
    if f.codim % 2:
        raise InvariantError("Sigma^2 Thom polynomial needs even codimension")
    return f.normal[f.codim // 2 + 1]


def suspend(f: MapData, j: int) -> MapData:
    """``f_j``: product with a point into ``S^j`` (j >= 0) or with ``S^|j| -> pt`` (j < 0)."""
    if j >= 0:
        return MapData(f.source, f.codim + j, f.normal)
    S = sphere_model(-j, f.field)
    P = tensor(f.source.algebra, S)
    inl, _ = inclusions(P)
    # spheres are stably parallelizable: the tangent class just moves along
    source = SpaceModel(P, pullback_class(inl, f.source.tangent))
    return MapData(source, f.codim + j, pullback_class(inl, f.normal))


def _pulled_back(g: MapData, j: int, thom) -> AlgebraElement:
    """``id_j^* [Sigma g_(-j)]`` as a class on the source of ``g``."""
    gs = suspend(g, -j)
    return restriction(gs.source.algebra)(thom(gs))


def _product_terms(f: MapData, g: MapData, thom, step: int, n_terms: int, P):
    terms = []
    for j in range(1, n_terms + 1):
        up = step * j - step  # suspension f_{j-1} or f_{2j-2}
        down = step * j
        left = cross(thom(suspend(f, up)), _pulled_back(g, down, thom), P)
        right = cross(_pulled_back(f, down, thom), thom(suspend(g, up)), P)
        terms.append((j, left + right))
    return terms


def _direct_normal(f: MapData, g: MapData, P) -> TotalClass:
    inl, inr = inclusions(P)
    return whitney_sum(pullback_class(inl, f.normal), pullback_class(inr, g.normal))


def sigma1_product(f: MapData, g: MapData, verify: bool = True):
    """``[Sigma^1(f x g)]`` and its term list ``[(j, term_j), ...]``."""
    if f.kind is not Kind.SW or g.kind is not Kind.SW:
        raise InvariantError("Sigma^1 product formula needs Stiefel-Whitney data")
    P = tensor(f.source.algebra, g.source.algebra)
    k1, k2 = f.codim, g.codim
    total = _direct_normal(f, g, P)[k1 + k2 + 1]
    # a term can be nonzero only while both class indices lie in [0, top]
    n1, n2 = f.source.dim, g.source.dim
    n_terms = max(min(n1 - k1, k2 + 1), min(k1 + 1, n2 - k2), 1)
    terms = _product_terms(f, g, thom_sigma1, 1, n_terms, P)
    if verify:
        s = P.zero()
        for _, t in terms:
            s = s + t
        if s != total:
            raise IdentityCheckError("Sigma^1 product formula", f"terms sum to {s}, expected {total}")
    return total, terms


def sigma2_product(f: MapData, g: MapData, verify: bool = True):
    """``[Sigma^2(f x g)]`` and its term list for two even-codimension maps."""
    if f.kind is not Kind.PONTRJAGIN or g.kind is not Kind.PONTRJAGIN:
        raise InvariantError("Sigma^2 product formula needs Pontrjagin data")
    if f.codim % 2 or g.codim % 2:
        raise InvariantError("Sigma^2 product formula needs even codimensions")
    P = tensor(f.source.algebra, g.source.algebra)
    h1, h2 = f.codim // 2, g.codim // 2
    total = _direct_normal(f, g, P)[h1 + h2 + 1]
    n1, n2 = f.source.dim // 4, g.source.dim // 4
    n_terms = max(min(n1 - h1, h2 + 1), min(h1 + 1, n2 - h2), 1)
    terms = _product_terms(f, g, thom_sigma2, 2, n_terms, P)
    if verify:
        s = P.zero()
        for _, t in terms:
            s = s + t
        if s != total:
            raise IdentityCheckError("Sigma^2 product formula", f"terms sum to {s}, expected {total}")
    return total, terms
