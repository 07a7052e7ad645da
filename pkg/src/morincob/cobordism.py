"""Characteristic-number vectors of closed manifolds.

Over Q a class is its Pontrjagin numbers ``p_lam[M]`` (``4|lam| = dim``);
over F_2 its Stiefel-Whitney numbers ``w_lam[M]`` (``|lam| = dim``).  A class
of negative formal dimension is the canonical zero class ``VOID``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Mapping

from .algebra import Field, pair
from .charclass import Kind, SpaceModel
from .errors import InvariantError
from .partitions import is_partition, partitions, splittings

VOID = None


@dataclass(frozen=True, eq=False)
class CobordismClass:
    field: Field
    dim: int | None
    numbers: Mapping = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.dim is not None and self.dim < 0:
            object.__setattr__(self, "dim", VOID)
        kind = Kind.for_field(self.field)
        clean = {}
        for lam, v in self.numbers.items():
            if not is_partition(lam):
                raise InvariantError(f"{lam!r} is not a partition")
            v = self.field.scalar(v)
            if not v:
                continue
            if self.dim is VOID or kind.class_degree(lam) != self.dim:
                raise InvariantError(
                    f"partition {list(lam)} has class degree {kind.class_degree(lam)}, not {self.dim}"
                )
            clean[lam] = v
        object.__setattr__(self, "numbers", clean)

    @property
    def is_void(self) -> bool:
        return self.dim is VOID

    @property
    def kind(self) -> Kind:
        return Kind.for_field(self.field)

    def index_partitions(self) -> list:
        """All partitions of the right class degree (empty for VOID)."""
        if self.dim is VOID or self.dim % self.kind.step:
            return []
        return list(partitions(self.dim // self.kind.step))

    def entries(self) -> list:
        """``(partition, number)`` for every admissible partition, zeros included."""
        zero = self.field.scalar(0)
        return [(lam, self.numbers.get(lam, zero)) for lam in self.index_partitions()]

    def __getitem__(self, lam):
        return self.numbers.get(lam, self.field.scalar(0))

    def is_zero(self) -> bool:
        return not self.numbers

    def __eq__(self, other):
        if not isinstance(other, CobordismClass):
            return NotImplemented
        return self.field is other.field and self.dim == other.dim and self.numbers == other.numbers

    __hash__ = None

    def __add__(self, other: "CobordismClass") -> "CobordismClass":
        if other.field is not self.field:
            raise InvariantError("field mismatch")
        if self.dim != other.dim:
            raise InvariantError(f"cannot add classes of dimensions {self.dim} and {other.dim}")
        acc = dict(self.numbers)
        for lam, v in other.numbers.items():
            acc[lam] = acc.get(lam, 0) + v
        return CobordismClass(self.field, self.dim, acc)

    def __neg__(self):
        if self.field is Field.F2:
            return self
        return CobordismClass(self.field, self.dim, {k: -v for k, v in self.numbers.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "CobordismClass":
        c = self.field.scalar(c)
        return CobordismClass(self.field, self.dim, {k: v * c for k, v in self.numbers.items()})

    def __repr__(self):
        if self.dim is VOID:
            return f"CobordismClass({self.field.value}, VOID)"
        body = ", ".join(f"{list(k)}: {v}" for k, v in sorted(self.numbers.items()))
        return f"CobordismClass({self.field.value}, dim={self.dim}, {{{body}}})"


def cobordant(a: CobordismClass, b: CobordismClass) -> bool:
    """Equality in the graded cobordism ring: zero classes agree whatever their dimension."""
    if a.field is not b.field:
        return False
    if a.is_zero() and b.is_zero():
        return True
    return a == b


def zero_class(field: Field, dim: int | None) -> CobordismClass:
    return CobordismClass(field, dim, {})


def point_class(field: Field) -> CobordismClass:
    return CobordismClass(field, 0, {(): 1})


def numbers_from_series(S, dim: int | None) -> CobordismClass:
    """Pair each coefficient of class degree ``dim`` with the fundamental class."""
    field = S.owner.field
    if dim is VOID or dim < 0:
        return zero_class(field, VOID)
    cls = CobordismClass(field, dim, {})
    return CobordismClass(field, dim, {lam: pair(S[lam]) for lam in cls.index_partitions()})


def manifold_class(X: SpaceModel) -> CobordismClass:
    """Tangential characteristic numbers of a manifold model."""
    out = {}
    cls = zero_class(X.field, X.dim)
    for lam in cls.index_partitions():
        c = X.algebra.one()
        for part in lam:
            c = c * X.tangent[part]
        out[lam] = pair(c)
    return CobordismClass(X.field, X.dim, out)


def class_product(a: CobordismClass, b: CobordismClass) -> CobordismClass:
    """Numbers of ``A x B``: each ``p_j`` of the product splits as ``sum p_i(A) p_{j-i}(B)``."""
    if a.field is not b.field:
        raise InvariantError("field mismatch")
    if a.dim is VOID or b.dim is VOID:
        return zero_class(a.field, VOID)
    dim = a.dim + b.dim
    out = {}
    for lam in zero_class(a.field, dim).index_partitions():
        total = 0
        for mu, nu, count in splittings(lam):
            x = a.numbers.get(mu)
            if x is None:
                continue
            y = b.numbers.get(nu)
            if y is None:
                continue
            total += count * x * y
        out[lam] = total
    return CobordismClass(a.field, dim, out)


def _poly_mul(f: dict, g: dict) -> dict:
    out = {}
    for a, x in f.items():
        for b, y in g.items():
            lam = tuple(sorted(a + b, reverse=True))
            out[lam] = out.get(lam, 0) + x * y
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _dual_class(j: int) -> tuple:
    """The j-th class of the stable inverse, as a polynomial in the original classes.

    Monomials are partitions: ``(2, 1)`` stands for ``p_2 p_1``.
    """
    if j == 0:
        return (((), 1),)
    acc = {}
    for i in range(1, j + 1):
        for lam, c in _dual_class(j - i):
            mono = tuple(sorted(lam + (i,), reverse=True))
            acc[mono] = acc.get(mono, 0) - c
    return tuple(sorted((k, v) for k, v in acc.items() if v))


def normal_numbers(c: CobordismClass) -> CobordismClass:
    """Normal characteristic numbers ``pbar_lam[M]`` from tangential ones.

    Taking stable inverses is an involution, so applying this twice gives
    the tangential numbers back.
    """
    if c.dim is VOID:
        return c
    out = {}
    for mu in c.index_partitions():
        poly = {(): 1}
        for part in mu:
            poly = _poly_mul(poly, dict(_dual_class(part)))
        total = 0
        for lam, coeff in poly.items():
            v = c.numbers.get(lam)
            if v is not None:
                total += coeff * v
        out[mu] = total
    return CobordismClass(c.field, c.dim, out)
