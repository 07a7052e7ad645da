"""JSON model files: parsing, cross-reference resolution and rendering.

A model file has the top-level keys ``spaces``, ``bundles``, ``immersions``,
``maps``, ``morin`` and ``commands`` (all optional).  Polynomials are strings
over the grammar::

    expr  := term (('+' | '-') term)*
    term  := coeff ('*' gen ('^' int)?)*   |   gen ('^' int)? ('*' gen ('^' int)?)*
    coeff := int | int '/' int

where ``gen`` is a generator (or basis label) of the owning space.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

from .algebra import AlgebraElement, Field, GradedAlgebra, build_truncated_poly, render_element
from .charclass import (
    BetaSeries,
    BundleData,
    Kind,
    SpaceModel,
    TotalClass,
    product_space,
    stable_inverse,
)
from .cobordism import VOID, CobordismClass
from .errors import InvariantError, ModelError
from .morin import MorinClass, prim_strata
from .multipoint import GeneralMapData, ImmersionData
from .partitions import format_partition, parse_partition
from .singularity import MapData

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")
_SECTIONS = ("spaces", "bundles", "immersions", "maps", "morin", "commands")


# ------------------------------------------------------------------ grammar


def _tokens(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("gen", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^":
                raise ModelError(f"unexpected character {ch!r} at position {start}", f"polynomial {text!r}")
            out.append((ch, ch, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, alg: GradedAlgebra, where: str):
        self.text = text
        self.alg = alg
        self.where = f"{where}: polynomial {text!r}"
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ModelError(f"expected {kind} at position {tok[2]}, found {what}", self.where)
        self.i += 1
        return tok

    def expr(self) -> AlgebraElement:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        total = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            total = total + self.term() * sign
        self.take("end")
        return total

    def term(self) -> AlgebraElement:
        kind = self.peek()[0]
        if kind == "int":
            num = self.take()[1]
            den = 1
            if self.peek()[0] == "/":
                self.take()
                tok = self.take("int")
                den = tok[1]
                if den == 0:
                    raise ModelError(f"zero denominator at position {tok[2]}", self.where)
            out = self.alg.scalar(Fraction(num, den))
        elif kind == "gen":
            out = self.factor()
        else:
            tok = self.peek()
            what = "end of input" if kind == "end" else repr(tok[1])
            raise ModelError(f"expected a term at position {tok[2]}, found {what}", self.where)
        while self.peek()[0] == "*":
            self.take()
            out = out * self.factor()
        return out

    def factor(self) -> AlgebraElement:
        _, name, pos = self.take("gen")
        try:
            g = self.alg.gen(name)
        except KeyError:
            raise ModelError(f"unknown generator {name!r} at position {pos}", self.where) from None
        if self.peek()[0] == "^":
            self.take()
            g = g ** self.take("int")[1]
        return g


def parse_poly(text, alg: GradedAlgebra, where: str = "") -> AlgebraElement:
    """Parse a polynomial string (or a bare integer) into an element of ``alg``."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ModelError(f"expected a polynomial string, got {text!r}", where)
    try:
        return _Parser(str(text), alg, where).expr()
    except InvariantError as exc:
        raise ModelError(str(exc), where) from None


def parse_scalar(text, field: Field, where: str = ""):
    try:
        return field.scalar(Fraction(str(text).replace(" ", "")))
    except (ValueError, ZeroDivisionError):
        raise ModelError(f"not a scalar: {text!r}", where) from None


# ---------------------------------------------------------------- rendering


def render_scalar(x) -> str:
    return str(Fraction(x))


def render_class(c: CobordismClass) -> dict:
    if c.dim is VOID:
        return {"field": c.field.value, "dim": "VOID", "numbers": {}}
    return {
        "field": c.field.value,
        "dim": c.dim,
        "numbers": {format_partition(lam): render_scalar(v) for lam, v in c.entries()},
    }


def render_series(S: BetaSeries) -> dict:
    items = sorted(S.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))
    return {format_partition(lam): render_element(x) for lam, x in items}


def render_morin(m: MorinClass) -> dict:
    return {
        "n": m.n,
        "k": m.k,
        "strata": {str(r): render_class(c) for r, c in m.strata.items()},
    }


# -------------------------------------------------------------------- model


@dataclass
class ModelSet:
    spaces: dict = dc_field(default_factory=dict)
    bundles: dict = dc_field(default_factory=dict)
    immersions: dict = dc_field(default_factory=dict)
    maps: dict = dc_field(default_factory=dict)
    morin: dict = dc_field(default_factory=dict)
    commands: list = dc_field(default_factory=list)
    default_field: Field = Field.RAT

    def lookup(self, section: str, name, where: str):
        table = getattr(self, section)
        if not isinstance(name, str):
            raise ModelError(f"expected the name of an entry in {section!r}, got {name!r}", where)
        try:
            return table[name]
        except KeyError:
            known = ", ".join(sorted(table)) or "none"
            raise ModelError(f"unknown {section[:-1] if section != 'morin' else 'morin class'} {name!r} (known: {known})", where) from None


def _require(decl: dict, key: str, where: str):
    if not isinstance(decl, dict):
        raise ModelError(f"expected an object, got {type(decl).__name__}", where)
    if key not in decl:
        raise ModelError(f"missing key {key!r}", where)
    return decl[key]


def _int(value, where: str, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelError(f"{name} must be an integer, got {value!r}", where)
    return value


def _field_of(decl: dict, default: Field, where: str) -> Field:
    if "field" not in decl:
        return default
    try:
        return Field.parse(decl["field"])
    except ValueError as exc:
        raise ModelError(str(exc), where) from None


def _total(alg: GradedAlgebra, text, where: str) -> TotalClass:
    return TotalClass.from_element(parse_poly(text, alg, where), Kind.for_field(alg.field))


def _explicit_algebra(decl: dict, field: Field, where: str) -> GradedAlgebra:
    basis = _require(decl, "basis", where)
    if not isinstance(basis, list) or not basis:
        raise ModelError("basis must be a nonempty list of [label, degree]", where)
    labels, degrees = [], []
    for entry in basis:
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], str)):
            raise ModelError(f"bad basis entry {entry!r}; expected [label, degree]", where)
        labels.append(entry[0])
        degrees.append(_int(entry[1], where, f"degree of {entry[0]}"))
    if len(set(labels)) != len(labels):
        raise ModelError("duplicate basis labels", where)
    index = {lab: i for i, lab in enumerate(labels)}
    fundamental = _require(decl, "fundamental", where)
    if fundamental not in index:
        raise ModelError(f"fundamental {fundamental!r} is not a basis label", where)
    # products are parsed against a linear-only view of the basis
    linear = GradedAlgebra(
        field, degrees, [((lab, 1),) if i else () for i, lab in enumerate(labels)], {}, index[fundamental],
        generators={lab: {i: field.scalar(1)} for i, lab in enumerate(labels) if i}, check=False,
    )
    table = {}
    for key, value in (decl.get("products") or {}).items():
        parts = [p.strip() for p in key.split("*")]
        if len(parts) != 2 or any(p not in index for p in parts):
            raise ModelError(f"product key {key!r} must be 'label*label'", where)
        prod = parse_poly(value, linear, f"{where}.products[{key}]")
        i, j = index[parts[0]], index[parts[1]]
        table[(i, j)] = prod.coeffs
        table.setdefault((j, i), prod.coeffs)
    return GradedAlgebra(
        field, degrees, [((lab, 1),) if i else () for i, lab in enumerate(labels)], table, index[fundamental],
        generators={lab: {i: field.scalar(1)} for i, lab in enumerate(labels) if i},
    )


def _space(model: ModelSet, name: str, decl: dict) -> SpaceModel:
    where = f"spaces.{name}"
    if not isinstance(decl, dict):
        raise ModelError("expected an object", where)
    if "product" in decl:
        pair = decl["product"]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ModelError("product must list exactly two space names", where)
        X = model.lookup("spaces", pair[0], where)
        Y = model.lookup("spaces", pair[1], where)
        if X.field is not Y.field:
            raise InvariantError(f"{where}: factors have different fields")
        return product_space(X, Y)
    field = _field_of(decl, model.default_field, where)
    if "basis" in decl:
        alg = _explicit_algebra(decl, field, where)
    else:
        gens = []
        for g in _require(decl, "generators", where):
            if isinstance(g, dict):
                g = [g.get("name"), g.get("degree"), g.get("exponent")]
            if not (isinstance(g, list) and len(g) == 3 and isinstance(g[0], str)):
                raise ModelError(f"bad generator {g!r}; expected [name, degree, exponent]", where)
            gens.append((g[0], _int(g[1], where, "degree"), _int(g[2], where, "exponent")))
        if "dim" in decl:
            dim = _int(decl["dim"], where, "dim")
        else:
            dim = sum(d * (n - 1) for _, d, n in gens)
        try:
            alg = build_truncated_poly(gens, field, dim, check=True)
        except InvariantError as exc:
            raise InvariantError(f"{where}: {exc}") from None
    tangent = _total(alg, decl.get("tangent", "1"), f"{where}.tangent")
    return SpaceModel(alg, tangent)


def _bundle(model: ModelSet, name: str, decl: dict) -> BundleData:
    where = f"bundles.{name}"
    X = model.lookup("spaces", _require(decl, "space", where), where)
    rank = _int(_require(decl, "rank", where), where, "rank")
    total = _total(X.algebra, decl.get("total", "1"), f"{where}.total")
    euler = None
    if decl.get("euler") is not None:
        euler = parse_poly(decl["euler"], X.algebra, f"{where}.euler")
    return BundleData(X.algebra, total, rank, euler)


def parse_series(alg: GradedAlgebra, decl, where: str) -> BetaSeries:
    if not isinstance(decl, dict):
        raise ModelError("a series is an object {partition: polynomial}", where)
    coeffs = {}
    for key, value in decl.items():
        try:
            lam = parse_partition(key)
        except ValueError as exc:
            raise ModelError(str(exc), where) from None
        coeffs[lam] = parse_poly(value, alg, f"{where}[{key}]")
    return BetaSeries(alg, Kind.for_field(alg.field), coeffs)


def _immersion(model: ModelSet, name: str, decl: dict) -> GeneralMapData:
    where = f"immersions.{name}"
    X = model.lookup("spaces", _require(decl, "space", where), where)
    codim = _int(_require(decl, "codim", where), where, "codim")
    if "normal" in decl:
        normal = model.lookup("bundles", decl["normal"], where)
        if normal.owner is not X.algebra:
            raise InvariantError(f"{where}: normal bundle {decl['normal']!r} is not over space {decl['space']!r}")
    else:
        euler = None
        if decl.get("euler") is not None:
            euler = parse_poly(decl["euler"], X.algebra, f"{where}.euler")
        normal = BundleData(X.algebra, stable_inverse(X.tangent), codim, euler)
    target = decl.get("target", "euclidean")
    if target not in ("euclidean", "general"):
        raise ModelError(f"target must be 'euclidean' or 'general', got {target!r}", where)
    euclidean = target == "euclidean"
    gysin = None
    if "gysin_pull" in decl:
        if euclidean:
            raise ModelError("gysin_pull only makes sense for a general target", where)
        gysin = parse_series(X.algebra, decl["gysin_pull"], f"{where}.gysin_pull")
    try:
        base = ImmersionData(X, codim, normal, euclidean=euclidean)
    except InvariantError as exc:
        raise InvariantError(f"{where}: {exc}") from None
    return GeneralMapData(base, gysin)


def _map(model: ModelSet, name: str, decl: dict) -> MapData:
    where = f"maps.{name}"
    X = model.lookup("spaces", _require(decl, "space", where), where)
    codim = _int(_require(decl, "codim", where), where, "codim")
    if decl.get("normal") is not None:
        normal = _total(X.algebra, decl["normal"], f"{where}.normal")
    else:
        normal = stable_inverse(X.tangent)
    return MapData(X, codim, normal)


def parse_class(decl, where: str, default_field: Field = Field.RAT) -> CobordismClass:
    if not isinstance(decl, dict):
        raise ModelError("a class is an object with 'dim' and 'numbers'", where)
    field = _field_of(decl, default_field, where)
    dim = decl.get("dim")
    if dim == "VOID":
        dim = VOID
    elif dim is not None:
        dim = _int(dim, where, "dim")
    numbers = {}
    for key, value in (decl.get("numbers") or {}).items():
        try:
            lam = parse_partition(key)
        except ValueError as exc:
            raise ModelError(str(exc), where) from None
        numbers[lam] = parse_scalar(value, field, f"{where}[{key}]")
    if dim is None:
        kind = Kind.for_field(field)
        dims = {kind.class_degree(lam) for lam in numbers}
        if len(dims) > 1:
            raise ModelError("numbers of several dimensions and no 'dim'", where)
        dim = dims.pop() if dims else 0
    try:
        return CobordismClass(field, dim, numbers)
    except InvariantError as exc:
        raise InvariantError(f"{where}: {exc}") from None


def _morin(model: ModelSet, name: str, decl: dict) -> MorinClass:
    where = f"morin.{name}"
    if not isinstance(decl, dict):
        raise ModelError("expected an object", where)
    if "prim" in decl:
        data = model.lookup("immersions", decl["prim"], where)
        return prim_strata(data.base)
    n = _int(_require(decl, "n", where), where, "n")
    k = _int(_require(decl, "k", where), where, "k")
    strata = {}
    for r, cls in (decl.get("strata") or {}).items():
        try:
            ri = int(r)
        except ValueError:
            raise ModelError(f"stratum key {r!r} is not an integer", where) from None
        if not isinstance(cls, dict):
            raise ModelError("a stratum is an object with 'numbers'", f"{where}.strata[{r}]")
        c = parse_class({"field": "Q", "dim": n - ri * (k + 1), **cls}, f"{where}.strata[{r}]")
        strata[ri] = c
    try:
        return MorinClass(n, k, strata)
    except InvariantError as exc:
        raise InvariantError(f"{where}: {exc}") from None


_BUILDERS = (
    ("spaces", _space),
    ("bundles", _bundle),
    ("immersions", _immersion),
    ("maps", _map),
    ("morin", _morin),
)


def build_model(doc, default_field: Field = Field.RAT) -> ModelSet:
    """Validate and resolve a decoded JSON document."""
    if not isinstance(doc, dict):
        raise ModelError("model file must contain a JSON object")
    unknown = set(doc) - set(_SECTIONS)
    if unknown:
        raise ModelError(f"unknown top-level keys {sorted(unknown)}; expected {list(_SECTIONS)}")
    model = ModelSet(default_field=default_field)
    for section, build in _BUILDERS:
        entries = doc.get(section) or {}
        if not isinstance(entries, dict):
            raise ModelError(f"{section} must be an object of named entries")
        table = getattr(model, section)
        # entries may refer to earlier entries of the same section (products of spaces)
        for name, decl in entries.items():
            try:
                table[name] = build(model, name, decl)
            except InvariantError as exc:
                msg = str(exc)
                if not msg.startswith(f"{section}.{name}"):
                    msg = f"{section}.{name}: {msg}"
                raise InvariantError(msg) from None
    commands = doc.get("commands") or []
    if not isinstance(commands, list):
        raise ModelError("commands must be a list")
    model.commands = list(commands)
    return model


def load_model(path, default_field: Field = Field.RAT) -> ModelSet:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelError(f"cannot read model file: {exc.strerror}", str(path)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", str(path)) from None
    return build_model(doc, default_field)
