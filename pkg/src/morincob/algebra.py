"""Finite graded commutative algebras over Q and F_2.

An algebra is given by a graded basis, a table of structure constants and a
distinguished top-degree basis element (the fundamental class).  Elements are
sparse maps from basis index to a nonzero scalar.  Everything is exact:
rationals are :class:`fractions.Fraction` and F_2 scalars are the int ``1``.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Callable, Iterable, Mapping

from .errors import InvariantError


class Field(enum.Enum):
    RAT = "Q"
    F2 = "F2"

    def scalar(self, x):
        """Coerce an int/Fraction/str into this field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self is Field.RAT:
            return Fraction(x)
        x = Fraction(x)
        if x.denominator % 2 == 0:
            raise InvariantError(f"{x} has no image in F2")
        return x.numerator % 2

    def clean(self, acc: dict) -> dict:
        """Drop zeros (and reduce mod 2 over F2)."""
        if self is Field.RAT:
            return {k: Fraction(v) for k, v in acc.items() if v}
        return {k: 1 for k, v in acc.items() if v % 2}

    @classmethod
    def parse(cls, text: str) -> "Field":
        key = str(text).strip().upper()
        if key in ("Q", "RAT", "QQ"):
            return cls.RAT
        if key in ("F2", "Z2", "GF2"):
            return cls.F2
        raise ValueError(f"unknown field {text!r}")


def format_monomial(mono: tuple) -> str:
    if not mono:
        return "1"
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in mono)


class GradedAlgebra:
    """Finite-dimensional graded commutative algebra with a fundamental class.

    ``table`` maps a pair of basis indices to a sparse coefficient dict; missing
    pairs multiply to zero.  Index 0 must be the unit.  ``monomials`` gives each
    basis element as a tuple of ``(generator name, exponent)`` pairs and is used
    for rendering; ``generators`` maps names to coefficient dicts and is used
    for parsing.  When ``check`` is true, grading, commutativity and
    associativity of the table are verified eagerly.
    """

    def __init__(
        self,
        field: Field,
        degrees: list,
        monomials: list,
        table: Mapping,
        fundamental: int,
        generators: Mapping | None = None,
        factors: tuple | None = None,
        check: bool = True,
        _lazy: Callable | None = None,
    ):
        self.field = field
        self.degrees = tuple(int(d) for d in degrees)
        self.monomials = tuple(tuple(m) for m in monomials)
        self.labels = tuple(format_monomial(m) for m in self.monomials)
        self.fundamental = fundamental
        self.factors = factors
        self.generators = dict(generators or {})
        self._lazy = _lazy
        self._table = {k: field.clean(dict(v)) for k, v in table.items()}
        n = len(self.degrees)
        if n == 0 or len(self.monomials) != n:
            raise InvariantError("basis and monomial lists must be nonempty and of equal length")
        self.top_degree = max(self.degrees)
        self.by_degree: dict = {}
        for i, d in enumerate(self.degrees):
            self.by_degree.setdefault(d, []).append(i)
        if _lazy is None:
            for j in range(n):
                for key in ((0, j), (j, 0)):
                    given = self._table.get(key)
                    if given is not None and given != {j: field.scalar(1)}:
                        raise InvariantError("index 0 must act as the unit")
                    self._table[key] = {j: field.scalar(1)}
        if check:
            self._validate()

    def _validate(self):
        n = len(self.degrees)
        if self.degrees[0] != 0 or self.by_degree[0] != [0]:
            raise InvariantError("degree 0 basis must be exactly {1}")
        if any(d < 0 for d in self.degrees):
            raise InvariantError("negative basis degree")
        if self.field is Field.RAT and any(d % 2 for d in self.degrees):
            raise InvariantError("RAT algebras must be evenly graded")
        if not 0 <= self.fundamental < n or self.degrees[self.fundamental] != self.top_degree:
            raise InvariantError("fundamental class must be a top-degree basis element")
        for (i, j), prod in self._table.items():
            if not (0 <= i < n and 0 <= j < n):
                raise InvariantError(f"structure constant for invalid pair {(i, j)}")
            want = self.degrees[i] + self.degrees[j]
            for k in prod:
                if not 0 <= k < n or self.degrees[k] != want:
                    raise InvariantError(
                        f"product {self.labels[i]}*{self.labels[j]} is not homogeneous of degree {want}"
                    )
        for i in range(n):
            for j in range(i + 1, n):
                if self.basis_product(i, j) != self.basis_product(j, i):
                    raise InvariantError(
                        f"multiplication is not commutative on {self.labels[i]}, {self.labels[j]}"
                    )
        top = self.top_degree
        for i in range(1, n):
            for j in range(1, n):
                if self.degrees[i] + self.degrees[j] > top:
                    continue
                for k in range(1, n):
                    if self.degrees[i] + self.degrees[j] + self.degrees[k] > top:
                        continue
                    left = _mul_dicts(self, _mul_dicts(self, {i: 1}, {j: 1}), {k: 1})
                    right = _mul_dicts(self, {i: 1}, _mul_dicts(self, {j: 1}, {k: 1}))
                    if left != right:
                        raise InvariantError(
                            "multiplication is not associative on "
                            f"{self.labels[i]}, {self.labels[j]}, {self.labels[k]}"
                        )

    def basis_product(self, i: int, j: int) -> dict:
        prod = self._table.get((i, j))
        if prod is None:
            prod = self._lazy(i, j) if self._lazy is not None else {}
            self._table[(i, j)] = prod
        return prod

    @property
    def dim(self) -> int:
        return self.top_degree

    def __len__(self):
        return len(self.degrees)

    def __repr__(self):
        return (
            f"GradedAlgebra({self.field.value}, top={self.top_degree}, "
            f"basis={len(self)}, fundamental={self.labels[self.fundamental]})"
        )

    def element(self, coeffs: Mapping) -> "AlgebraElement":
        return AlgebraElement(self, self.field.clean({int(k): self.field.scalar(v) for k, v in coeffs.items()}))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {0: self.field.scalar(1)})

    def basis(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, {i: self.field.scalar(1)})

    def scalar(self, c) -> "AlgebraElement":
        return self.one() * c

    def gen(self, name: str) -> "AlgebraElement":
        try:
            return AlgebraElement(self, dict(self.generators[name]))
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def degree_basis(self, d: int) -> list:
        return self.by_degree.get(d, [])

    def fundamental_element(self) -> "AlgebraElement":
        return self.basis(self.fundamental)


def _mul_dicts(alg: GradedAlgebra, a: Mapping, b: Mapping) -> dict:
    acc: dict = {}
    for i, ci in a.items():
        for j, cj in b.items():
            prod = alg.basis_product(i, j)
            if prod:
                c = ci * cj
                for k, ck in prod.items():
                    acc[k] = acc.get(k, 0) + c * ck
    return alg.field.clean(acc)


class AlgebraElement:
    """Immutable sparse element of a :class:`GradedAlgebra`."""

    __slots__ = ("owner", "coeffs")

    def __init__(self, owner: GradedAlgebra, coeffs: dict):
        self.owner = owner
        self.coeffs = coeffs

    def _same(self, other: "AlgebraElement"):
        if other.owner is not self.owner:
            raise InvariantError("owner mismatch: elements belong to different algebras")

    def _lift(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self._same(other)
            return other
        return self.owner.scalar(other)

    def __add__(self, other):
        other = self._lift(other)
        acc = dict(self.coeffs)
        for k, v in other.coeffs.items():
            acc[k] = acc.get(k, 0) + v
        return AlgebraElement(self.owner, self.owner.field.clean(acc))

    __radd__ = __add__

    def __neg__(self):
        if self.owner.field is Field.F2:
            return self
        return AlgebraElement(self.owner, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._same(other)
            return AlgebraElement(self.owner, _mul_dicts(self.owner, self.coeffs, other.coeffs))
        c = self.owner.field.scalar(other)
        return AlgebraElement(self.owner, self.owner.field.clean({k: v * c for k, v in self.coeffs.items()}))

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.owner.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.owner is other.owner and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.owner.scalar(other)
        return NotImplemented

    __hash__ = None

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree_part(self, d: int) -> "AlgebraElement":
        degs = self.owner.degrees
        return AlgebraElement(self.owner, {k: v for k, v in self.coeffs.items() if degs[k] == d})

    def degrees(self) -> set:
        return {self.owner.degrees[k] for k in self.coeffs}

    def homogeneous_degree(self):
        """The common degree of all terms, or ``None`` for zero/mixed elements."""
        degs = self.degrees()
        return degs.pop() if len(degs) == 1 else None

    def constant_term(self):
        return self.coeffs.get(0, 0)

    def __repr__(self):
        return f"<{render_element(self)}>"

    def __str__(self):
        return render_element(self)


def render_element(x: AlgebraElement) -> str:
    """Render as ``3*x^2 - 1/2*x*y + 1`` (highest degree first, unit coefficient omitted)."""
    if not x.coeffs:
        return "0"
    alg = x.owner
    items = sorted(x.coeffs.items(), key=lambda kv: (-alg.degrees[kv[0]], kv[0]))
    pieces = []
    for k, c in items:
        label = alg.labels[k]
        neg = alg.field is Field.RAT and c < 0
        mag = -c if neg else c
        if label == "1":
            body = str(mag)
        elif mag == 1:
            body = label
        else:
            body = f"{mag}*{label}"
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def pair(x: AlgebraElement):
    """Evaluate against the fundamental class; lower-degree parts contribute 0."""
    alg = x.owner
    return x.coeffs.get(alg.fundamental, alg.field.scalar(0))


def build_truncated_poly(gens: Iterable, field: Field, dim: int, check: bool = False) -> GradedAlgebra:
    """Truncated polynomial algebra ``F[g_1, ...]/(g_i^{n_i})`` cut off above ``dim``.

    ``gens`` is a sequence of ``(name, degree, nilpotency exponent)``.  The
    unique monomial of degree ``dim`` becomes the fundamental class.
    """
    gens = [(str(name), int(deg), int(nil)) for name, deg, nil in gens]
    names = [g[0] for g in gens]
    if len(set(names)) != len(names):
        raise InvariantError(f"duplicate generator names {names}")
    for name, deg, nil in gens:
        if deg < 1:
            raise InvariantError(f"generator {name} must have degree >= 1")
        if nil < 1:
            raise InvariantError(f"generator {name} must have nilpotency exponent >= 1")
        if field is Field.RAT and deg % 2:
            raise InvariantError("RAT algebras must be evenly graded")
    exps = []
    for e in iproduct(*[range(nil) for _, _, nil in gens]):
        d = sum(ei * g[1] for ei, g in zip(e, gens))
        if d <= dim:
            exps.append((d, e))
    exps.sort(key=lambda t: (t[0], tuple(-x for x in t[1])))
    top = [e for d, e in exps if d == dim]
    if not top:
        raise InvariantError(f"no monomial of degree {dim}")
    if len(top) > 1:
        raise InvariantError(f"fundamental monomial of degree {dim} is not unique")
    index = {e: i for i, (_, e) in enumerate(exps)}
    degrees = [d for d, _ in exps]
    monomials = [tuple((names[t], ei) for t, ei in enumerate(e) if ei) for _, e in exps]
    one = field.scalar(1)
    table = {}
    for i, (_, a) in enumerate(exps):
        for j, (_, b) in enumerate(exps):
            c = tuple(x + y for x, y in zip(a, b))
            if c in index:
                table[(i, j)] = {index[c]: one}
    generators = {}
    for t, (name, _, nil) in enumerate(gens):
        e = tuple(1 if s == t else 0 for s in range(len(gens)))
        generators[name] = {index[e]: one} if nil > 1 and e in index else {}
    return GradedAlgebra(
        field, degrees, monomials, table, index[top[0]], generators=generators, check=check
    )


@lru_cache(maxsize=64)
def sphere_model(d: int, field: Field) -> GradedAlgebra:
    """Cohomology model of the ``d``-sphere: one generator of degree d squaring to 0."""
    return build_truncated_poly([(f"s{d}", d, 2)], field, d)


def _fresh_name(name: str, taken: set) -> str:
    i = 2
    while f"{name}_{i}" in taken:
        i += 1
    return f"{name}_{i}"


@lru_cache(maxsize=256)
def tensor(A: GradedAlgebra, B: GradedAlgebra) -> GradedAlgebra:
    """Kunneth model of a product: basis pairs, additive degree, product pairing.

    Basis pair ``(i, j)`` has index ``i * len(B) + j``.  Structure constants are
    computed on demand from the factors.  Generator names of ``B`` that clash
    with names in ``A`` get a ``_2`` (``_3``, ...) suffix.
    """
    if A.field is not B.field:
        raise InvariantError("field mismatch in tensor product")
    nb = len(B)
    taken = set(A.generators)
    rename = {}
    for name in B.generators:
        new = name if name not in taken else _fresh_name(name, taken | set(B.generators))
        rename[name] = new
        taken.add(new)
    degrees = []
    monomials = []
    for i, j in iproduct(range(len(A)), range(nb)):
        degrees.append(A.degrees[i] + B.degrees[j])
        monomials.append(A.monomials[i] + tuple((rename[n], e) for n, e in B.monomials[j]))
    generators = {}
    for name, coeffs in A.generators.items():
        generators[name] = {i * nb: c for i, c in coeffs.items()}
    for name, coeffs in B.generators.items():
        generators[rename[name]] = {j: c for j, c in coeffs.items()}

    def lazy(p, q):
        pa = A.basis_product(p // nb, q // nb)
        if not pa:
            return {}
        pb = B.basis_product(p % nb, q % nb)
        return {ka * nb + kb: ca * cb for ka, ca in pa.items() for kb, cb in pb.items()}

    return GradedAlgebra(
        A.field,
        degrees,
        monomials,
        {},
        A.fundamental * nb + B.fundamental,
        generators=generators,
        factors=(A, B),
        check=False,
        _lazy=lazy,
    )


def cross(x: AlgebraElement, y: AlgebraElement, P: GradedAlgebra | None = None) -> AlgebraElement:
    """Cross product ``x (x) y`` in the tensor model of the two owners."""
    if P is None:
        P = tensor(x.owner, y.owner)
    if P.factors != (x.owner, y.owner):
        raise InvariantError("owner mismatch: target is not the tensor of the factors' algebras")
    nb = len(y.owner)
    return AlgebraElement(
        P, P.field.clean({i * nb + j: a * b for i, a in x.coeffs.items() for j, b in y.coeffs.items()})
    )


class LinearMap:
    """Degree-shifting linear map between algebras, given by sparse columns.

    With ``ring_map=True`` the map must also be multiplicative and unital; both
    properties are checked when ``check`` is true.
    """

    def __init__(
        self,
        source: GradedAlgebra,
        target: GradedAlgebra,
        columns: Mapping,
        degree_shift: int = 0,
        ring_map: bool = False,
        check: bool = True,
    ):
        if source.field is not target.field:
            raise InvariantError("field mismatch in linear map")
        self.source = source
        self.target = target
        self.degree_shift = degree_shift
        self.ring_map = ring_map
        self.columns = {int(i): target.field.clean(dict(col)) for i, col in columns.items()}
        if check:
            self._validate()

    def _validate(self):
        for i, col in self.columns.items():
            if not 0 <= i < len(self.source):
                raise InvariantError(f"column index {i} out of range")
            want = self.source.degrees[i] + self.degree_shift
            for k in col:
                if self.target.degrees[k] != want:
                    raise InvariantError(
                        f"image of {self.source.labels[i]} is not in degree {want}"
                    )
        if self.ring_map:
            if self.degree_shift != 0:
                raise InvariantError("a ring map must preserve degree")
            if self(self.source.one()) != self.target.one():
                raise InvariantError("ring map does not send 1 to 1")
            n = len(self.source)
            for i in range(n):
                for j in range(i, n):
                    a, b = self.source.basis(i), self.source.basis(j)
                    if self(a * b) != self(a) * self(b):
                        raise InvariantError(
                            f"ring map is not multiplicative on {self.source.labels[i]}, {self.source.labels[j]}"
                        )

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        if x.owner is not self.source:
            raise InvariantError("owner mismatch: element is not in the map's source")
        acc: dict = {}
        for i, c in x.coeffs.items():
            for k, ck in self.columns.get(i, {}).items():
                acc[k] = acc.get(k, 0) + c * ck
        return AlgebraElement(self.target, self.target.field.clean(acc))

    @classmethod
    def identity(cls, A: GradedAlgebra) -> "LinearMap":
        one = A.field.scalar(1)
        return cls(A, A, {i: {i: one} for i in range(len(A))}, ring_map=True, check=False)

    @classmethod
    def zero(cls, source: GradedAlgebra, target: GradedAlgebra, degree_shift: int = 0) -> "LinearMap":
        return cls(source, target, {}, degree_shift=degree_shift)


@lru_cache(maxsize=256)
def inclusions(P: GradedAlgebra) -> tuple:
    """Ring maps ``a -> a (x) 1`` and ``b -> 1 (x) b`` into a tensor model."""
    if P.factors is None:
        raise InvariantError("algebra is not a tensor model")
    A, B = P.factors
    nb = len(B)
    one = P.field.scalar(1)
    inl = LinearMap(A, P, {i: {i * nb: one} for i in range(len(A))}, ring_map=True, check=False)
    inr = LinearMap(B, P, {j: {j: one} for j in range(nb)}, ring_map=True, check=False)
    return inl, inr


@lru_cache(maxsize=256)
def restriction(P: GradedAlgebra) -> LinearMap:
    """Pullback ``A (x) B -> A`` along ``M -> M x pt`` (kills positive degrees of B)."""
    if P.factors is None:
        raise InvariantError("algebra is not a tensor model")
    A, B = P.factors
    nb = len(B)
    one = P.field.scalar(1)
    return LinearMap(P, A, {i * nb: {i: one} for i in range(len(A))}, ring_map=True, check=False)
