"""Rational cobordism ring of Morin maps, represented by singular strata.

An element of ``Mor(n, k) (x) Q`` is stored as the rational cobordism classes
of its ``Sigma^{1_r}`` strata for even ``r`` (stratum ``r`` has dimension
``n - r(k+1)``; stratum 0 is the source manifold).  The product of Morin
maps multiplies strata componentwise, the bigrading ``(n, k+1)`` is additive,
and a factor of even codimension kills every ``r >= 1`` stratum.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .algebra import Field
from .cobordism import CobordismClass, class_product, normal_numbers, zero_class
from .errors import InvariantError
from .multipoint import ImmersionData, multipoint_numbers
from .partitions import count_partitions

__all__ = [
    "MorinClass",
    "class_product",
    "morin_add",
    "morin_mul",
    "morin_rank",
    "prim_strata",
]


@dataclass(frozen=True, eq=False)
class MorinClass:
    n: int
    k: int
    strata: Mapping = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise InvariantError("source dimension must be >= 0")
        if self.k < 1:
            raise InvariantError("Morin classes need codimension k >= 1")
        clean = {}
        for r, c in self.strata.items():
            r = int(r)
            if r < 0 or r % 2:
                raise InvariantError(f"only even strata r >= 0 are stored (got r={r})")
            if c.field is not Field.RAT:
                raise InvariantError("Morin strata are rational classes")
            d = self.stratum_dim(r)
            if d < 0:
                if not c.is_zero():
                    raise InvariantError(f"stratum r={r} has negative dimension {d}")
                continue
            if c.dim != d:
                raise InvariantError(f"stratum r={r} must have dimension {d}, got {c.dim}")
            if self.k % 2 == 0 and r >= 1 and not c.is_zero():
                raise InvariantError("even-codimension Morin classes have no r >= 1 strata")
            clean[r] = c
        for r in range(0, self.max_stratum() + 1, 2):
            clean.setdefault(r, zero_class(Field.RAT, self.stratum_dim(r)))
        object.__setattr__(self, "strata", dict(sorted(clean.items())))

    def stratum_dim(self, r: int) -> int:
        return self.n - r * (self.k + 1)

    def max_stratum(self) -> int:
        """Largest even ``r`` whose stratum has nonnegative dimension."""
        if self.k + 1 <= 0:
            return 0
        r = self.n // (self.k + 1)
        return r - (r % 2)

    def stratum(self, r: int) -> CobordismClass:
        d = self.stratum_dim(r)
        if d < 0:
            return zero_class(Field.RAT, None)
        return self.strata.get(r, zero_class(Field.RAT, d))

    @property
    def bidegree(self) -> tuple:
        return (self.n, self.k + 1)

    def image_violations(self) -> list:
        """``(r, lam)`` pairs whose normal Pontrjagin number no Morin map can have.

        A stratum of a Morin map of codimension ``k`` has a normal bundle built
        from rank-``k`` data, so its normal numbers involve only ``pbar_j`` with
        ``j <= k // 2`` (for even ``k`` the top one is the squared Euler class).
        """
        bound = self.k // 2
        return [
            (r, lam)
            for r, c in self.strata.items()
            for lam in normal_numbers(c).numbers
            if lam and lam[0] > bound
        ]

    def __eq__(self, other):
        if not isinstance(other, MorinClass):
            return NotImplemented
        return (self.n, self.k) == (other.n, other.k) and all(
            self.stratum(r) == other.stratum(r) for r in set(self.strata) | set(other.strata)
        )

    __hash__ = None

    def __add__(self, other):
        return morin_add(self, other)

    def __mul__(self, other):
        return morin_mul(self, other)

    def __repr__(self):
        body = ", ".join(f"{r}: {c!r}" for r, c in self.strata.items())
        return f"MorinClass(n={self.n}, k={self.k}, {{{body}}})"


def morin_add(a: MorinClass, b: MorinClass) -> MorinClass:
    if (a.n, a.k) != (b.n, b.k):
        raise InvariantError("can only add Morin classes of the same (n, k)")
    return MorinClass(a.n, a.k, {r: a.stratum(r) + b.stratum(r) for r in a.strata})


def morin_mul(a: MorinClass, b: MorinClass) -> MorinClass:
    """Star product: strata multiply componentwise, gradings ``(n, k+1)`` add."""
    n = a.n + b.n
    k = a.k + b.k + 1
    annihilate = a.k % 2 == 0 or b.k % 2 == 0
    out = MorinClass(n, k, {})
    strata = {}
    for r in out.strata:
        if r >= 1 and annihilate:
            continue
        prod = class_product(a.stratum(r), b.stratum(r))
        if not prod.is_void:
            strata[r] = prod
    return MorinClass(n, k, strata)


def _monomials_count(n: int, degrees: list) -> int:
    ways = [1] + [0] * n
    for d in degrees:
        for s in range(d, n + 1):
            ways[s] += ways[s - d]
    return ways[n]


def morin_rank(n: int, k: int) -> int:
    """Dimension of ``Mor(n, k) (x) Q``."""
    if n < 0 or k < 1:
        raise ValueError("morin_rank needs n >= 0 and k >= 1")
    if k % 2:
        total = 0
        i = 0
        while n - 2 * i * (k + 1) >= 0:
            m = n - 2 * i * (k + 1)
            if m % 4 == 0:
                total += count_partitions(m // 4, (k - 1) // 2)
            i += 1
        return total
    # H^*(BSO(k); Q) = Q[p_1, ..., p_{k/2-1}, chi_k]
    return _monomials_count(n, [4 * j for j in range(1, k // 2)] + [k])


def prim_strata(imm: ImmersionData) -> MorinClass:
    """Strata of the hyperplane projection of ``imm``: stratum r = (r+1)-fold points."""
    if imm.field is not Field.RAT:
        raise InvariantError("prim strata are rational")
    if imm.codim < 2 or imm.codim % 2:
        raise InvariantError("prim projection needs an immersion of even codimension >= 2")
    k = imm.codim - 1
    strata = {}
    r = 0
    while imm.dim - r * imm.codim >= 0:
        strata[r] = multipoint_numbers(imm, r + 1)
        r += 2
    return MorinClass(imm.dim, k, strata)
