"""Total characteristic classes, Whitney sums and partition-indexed beta series.

A total class is either a total Pontrjagin class (over Q, component ``i`` in
degree ``4i``) or a total Stiefel-Whitney class (over F_2, component ``i`` in
degree ``i``).  The beta series of a class ``u`` is the symmetric power series
``prod_i (1 + u_1 t_i + u_2 t_i^2 + ...)``; it is stored in the monomial
symmetric basis, one coefficient per partition.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .algebra import AlgebraElement, Field, GradedAlgebra, LinearMap, inclusions, tensor
from .errors import InvariantError
from .partitions import is_partition, partitions_up_to, splittings


class Kind(enum.Enum):
    PONTRJAGIN = "p"
    SW = "w"

    @property
    def field(self) -> Field:
        return Field.RAT if self is Kind.PONTRJAGIN else Field.F2

    @property
    def step(self) -> int:
        """Cohomological degree of the index-1 class."""
        return 4 if self is Kind.PONTRJAGIN else 1

    def class_degree(self, lam) -> int:
        if isinstance(lam, int):
            return self.step * lam
        return self.step * sum(lam)

    @classmethod
    def for_field(cls, f: Field) -> "Kind":
        return cls.PONTRJAGIN if f is Field.RAT else cls.SW


@dataclass(frozen=True, eq=False)
class TotalClass:
    """``1 + c_1 + c_2 + ...`` with ``components[i]`` homogeneous of degree ``step*i``."""

    owner: GradedAlgebra
    kind: Kind
    components: Mapping = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.owner.field is not self.kind.field:
            raise InvariantError(f"{self.kind.name} classes need a {self.kind.field.value} algebra")
        clean = {}
        for i, c in self.components.items():
            i = int(i)
            if c.owner is not self.owner:
                raise InvariantError("owner mismatch in total class component")
            if c.is_zero():
                continue
            if i < 1:
                raise InvariantError("total class components are indexed from 1")
            if c.homogeneous_degree() != self.kind.class_degree(i):
                raise InvariantError(
                    f"component {i} must be homogeneous of degree {self.kind.class_degree(i)}"
                )
            clean[i] = c
        object.__setattr__(self, "components", clean)

    @classmethod
    def trivial(cls, owner: GradedAlgebra, kind: Kind | None = None) -> "TotalClass":
        return cls(owner, kind or Kind.for_field(owner.field), {})

    @classmethod
    def from_element(cls, x: AlgebraElement, kind: Kind | None = None) -> "TotalClass":
        """Split a total element (constant term 1) into graded components."""
        kind = kind or Kind.for_field(x.owner.field)
        if x.degree_part(0) != x.owner.one():
            raise InvariantError("a total class must have constant term 1")
        comps = {}
        for d in sorted(x.degrees()):
            if d == 0:
                continue
            if d % kind.step:
                raise InvariantError(f"{kind.name} total class has a component in degree {d}")
            comps[d // kind.step] = x.degree_part(d)
        return cls(x.owner, kind, comps)

    def __getitem__(self, i: int) -> AlgebraElement:
        """The class ``c_i``; ``c_0 = 1`` and negative or absent indices give 0."""
        if i == 0:
            return self.owner.one()
        if i < 0:
            return self.owner.zero()
        return self.components.get(i, self.owner.zero())

    def element(self) -> AlgebraElement:
        out = self.owner.one()
        for c in self.components.values():
            out = out + c
        return out

    def max_index(self) -> int:
        return max(self.components, default=0)

    def __eq__(self, other):
        if not isinstance(other, TotalClass):
            return NotImplemented
        return (
            self.owner is other.owner
            and self.kind is other.kind
            and self.components.keys() == other.components.keys()
            and all(self.components[i] == other.components[i] for i in self.components)
        )

    def __repr__(self):
        return f"TotalClass({self.kind.value}: {self.element()})"


def _check_pair(u, v):
    if u.owner is not v.owner:
        raise InvariantError("owner mismatch")
    if u.kind is not v.kind:
        raise InvariantError("kind mismatch")


def whitney_sum(u: TotalClass, v: TotalClass) -> TotalClass:
    _check_pair(u, v)
    return TotalClass.from_element(u.element() * v.element(), u.kind)


def stable_inverse(u: TotalClass) -> TotalClass:
    """The total class ``v`` with ``u (+) v`` trivial, by truncated geometric series."""
    x = u.element() - 1
    out = u.owner.one()
    power = u.owner.one()
    for _ in range(u.owner.top_degree // u.kind.step):
        power = -(power * x)
        if power.is_zero():
            break
        out = out + power
    return TotalClass.from_element(out, u.kind)


def pullback_class(phi: LinearMap, u: TotalClass) -> TotalClass:
    if not phi.ring_map:
        raise InvariantError("total classes can only be moved along ring maps")
    if u.owner is not phi.source:
        raise InvariantError("owner mismatch: class is not over the map's source")
    return TotalClass(phi.target, u.kind, {i: phi(c) for i, c in u.components.items()})


@dataclass(frozen=True, eq=False)
class BundleData:
    """A (possibly virtual) bundle: total class, rank and optional Euler class.

    Over F_2 the class ``w_rank`` serves as Euler class when none is given.
    """

    owner: GradedAlgebra
    total: TotalClass
    rank: int
    euler: AlgebraElement | None = None

    def __post_init__(self):
        if self.total.owner is not self.owner:
            raise InvariantError("owner mismatch: bundle total class")
        if self.euler is not None:
            if self.euler.owner is not self.owner:
                raise InvariantError("owner mismatch: bundle Euler class")
            if self.rank < 0:
                raise InvariantError("a bundle with an Euler class needs rank >= 0")
            d = self.euler.homogeneous_degree()
            if not self.euler.is_zero() and d != self.rank:
                raise InvariantError(f"Euler class must be homogeneous of degree rank={self.rank}")

    def euler_class(self) -> AlgebraElement:
        if self.euler is not None:
            return self.euler
        if self.total.kind is Kind.SW and self.rank >= 0:
            return self.total[self.rank]
        raise InvariantError("bundle has no Euler class")


@dataclass(frozen=True, eq=False)
class SpaceModel:
    """A closed manifold model: cohomology algebra plus total tangent class."""

    algebra: GradedAlgebra
    tangent: TotalClass

    def __post_init__(self):
        if self.tangent.owner is not self.algebra:
            raise InvariantError("owner mismatch: tangent class is not over the space's algebra")

    @property
    def dim(self) -> int:
        return self.algebra.top_degree

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def kind(self) -> Kind:
        return self.tangent.kind


def product_space(X: SpaceModel, Y: SpaceModel) -> SpaceModel:
    P = tensor(X.algebra, Y.algebra)
    inl, inr = inclusions(P)
    return SpaceModel(P, whitney_sum(pullback_class(inl, X.tangent), pullback_class(inr, Y.tangent)))


class BetaSeries:
    """Truncated symmetric series with algebra-element coefficients.

    ``coeffs`` maps a partition to its monomial coefficient.  Partitions whose
    class degree exceeds the owner's top degree are dropped, as are zero
    coefficients.  ``source`` records ``u`` when the series is ``beta_of(u)``
    and lets products take the Whitney-sum shortcut.
    """

    __slots__ = ("owner", "kind", "coeffs", "source")

    def __init__(self, owner: GradedAlgebra, kind: Kind, coeffs: Mapping, source: TotalClass | None = None):
        top = owner.top_degree
        clean = {}
        for lam, c in coeffs.items():
            if not is_partition(lam):
                raise InvariantError(f"{lam!r} is not a partition")
            if c.owner is not owner:
                raise InvariantError("owner mismatch in series coefficient")
            if c.is_zero() or kind.class_degree(lam) > top:
                continue
            clean[lam] = c
        self.owner = owner
        self.kind = kind
        self.coeffs = clean
        self.source = source

    def __getitem__(self, lam) -> AlgebraElement:
        return self.coeffs.get(lam, self.owner.zero())

    def max_weight(self) -> int:
        return self.owner.top_degree // self.kind.step

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, BetaSeries):
            return NotImplemented
        return (
            self.owner is other.owner
            and self.kind is other.kind
            and self.coeffs.keys() == other.coeffs.keys()
            and all(self.coeffs[k] == other.coeffs[k] for k in self.coeffs)
        )

    __hash__ = None

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_sub(self, other)

    def __neg__(self):
        return BetaSeries(self.owner, self.kind, {k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, BetaSeries):
            return series_mul(self, other)
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{list(k)}: {v}" for k, v in sorted(self.coeffs.items()))
        return f"BetaSeries({self.kind.value}; {inner})"


def zero_series(owner: GradedAlgebra, kind: Kind | None = None) -> BetaSeries:
    return BetaSeries(owner, kind or Kind.for_field(owner.field), {})


def beta_of(u: TotalClass) -> BetaSeries:
    """Coefficient at ``lam`` is ``prod_i u_{lam_i}``."""
    coeffs = {}
    max_part = u.max_index()
    for lam in partitions_up_to(u.owner.top_degree // u.kind.step, max_part):
        c = u.owner.one()
        for part in lam:
            c = c * u[part]
            if c.is_zero():
                break
        if not c.is_zero():
            coeffs[lam] = c
    return BetaSeries(u.owner, u.kind, coeffs, source=u)


def _check_series(S: BetaSeries, T: BetaSeries):
    if S.owner is not T.owner:
        raise InvariantError("owner mismatch")
    if S.kind is not T.kind:
        raise InvariantError("kind mismatch")


def series_mul(S: BetaSeries, T: BetaSeries, shortcut: bool = True) -> BetaSeries:
    """Product of symmetric series.

    The coefficient at ``lam`` is the sum, over exponent vectors ``b <= lam``,
    of ``S[sort(b)] * T[sort(lam - b)]``.  When both factors are tagged beta
    series (and ``shortcut`` is on) this reduces to a Whitney sum.
    """
    _check_series(S, T)
    if shortcut and S.source is not None and T.source is not None:
        return beta_of(whitney_sum(S.source, T.source))
    coeffs = {}
    zero = S.owner.zero()
    for lam in partitions_up_to(S.max_weight()):
        acc = zero
        for mu, nu, count in splittings(lam):
            a = S.coeffs.get(mu)
            if a is None:
                continue
            b = T.coeffs.get(nu)
            if b is None:
                continue
            acc = acc + (a * b) * count
        if not acc.is_zero():
            coeffs[lam] = acc
    return BetaSeries(S.owner, S.kind, coeffs)


def series_pow(S: BetaSeries, r: int, shortcut: bool = True) -> BetaSeries:
    out = beta_of(TotalClass.trivial(S.owner, S.kind))
    for _ in range(r):
        out = series_mul(out, S, shortcut=shortcut)
    return out


def series_scale(c, S: BetaSeries) -> BetaSeries:
    """Multiply every coefficient by an algebra element or scalar."""
    if isinstance(c, AlgebraElement) and c.owner is not S.owner:
        raise InvariantError("owner mismatch")
    return BetaSeries(S.owner, S.kind, {lam: x * c for lam, x in S.coeffs.items()})


def series_add(S: BetaSeries, T: BetaSeries) -> BetaSeries:
    _check_series(S, T)
    coeffs = dict(S.coeffs)
    for lam, c in T.coeffs.items():
        coeffs[lam] = coeffs[lam] + c if lam in coeffs else c
    return BetaSeries(S.owner, S.kind, coeffs)


def series_sub(S: BetaSeries, T: BetaSeries) -> BetaSeries:
    return series_add(S, -T)


def series_pushpull(phi: LinearMap, S: BetaSeries) -> BetaSeries:
    """Apply ``phi`` to every coefficient (pullbacks and Gysin maps alike)."""
    if S.owner is not phi.source:
        raise InvariantError("owner mismatch: series is not over the map's source")
    source = None
    if phi.ring_map and S.source is not None:
        source = pullback_class(phi, S.source)
    return BetaSeries(phi.target, S.kind, {lam: phi(c) for lam, c in S.coeffs.items()}, source=source)


def series_cross(S: BetaSeries, T: BetaSeries, P: GradedAlgebra | None = None, shortcut: bool = True) -> BetaSeries:
    """``S x T`` over the tensor model of the two owners."""
    if P is None:
        P = tensor(S.owner, T.owner)
    inl, inr = inclusions(P)
    return series_mul(series_pushpull(inl, S), series_pushpull(inr, T), shortcut=shortcut)
