"""Command-line runner: load a JSON model, execute its commands, print a JSON report.

Usage::

    morincob --input models/boy.json
    morincob --input models/cp2.json --command '{"op": "thom-sigma2", "map": "fc"}'
    morincob --input models/morin.json --command '{"op": "check", "suite": "beta"}'

Exit codes: 0 success, 1 usage or parse error, 2 invariant violation,
3 identity-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable

from .algebra import Field, pair, render_element
from .charclass import beta_of
from .checks import SUITES, run_suite
from .cobordism import CobordismClass, class_product, manifold_class, numbers_from_series
from .errors import IdentityCheckError, InvariantError, ModelError
from .modelio import (
    ModelSet,
    load_model,
    parse_class,
    parse_series,
    render_class,
    render_morin,
    render_scalar,
    render_series,
)
from .morin import morin_mul, morin_rank, prim_strata
from .multipoint import (
    double_point_terms,
    euler_locus,
    iterate_herbert,
    multipoint_numbers,
    multipoint_series,
    product_double_points,
    product_immersion_multipoint,
)
from .singularity import sigma1_product, sigma2_product, suspend, thom_sigma1, thom_sigma2

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_IDENTITY = 0, 1, 2, 3


class Context:
    def __init__(self, model: ModelSet, seed: int = 0, verify: bool = True, field: Field | None = None):
        self.model = model
        self.seed = seed
        self.verify = verify
        self.field = field


def _arg(cmd: dict, key: str, default=...):
    if key in cmd:
        return cmd[key]
    if default is ...:
        raise ModelError(f"missing argument {key!r}", f"command {cmd.get('op')!r}")
    return default


def _int_arg(cmd, key, default=...) -> int:
    v = _arg(cmd, key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ModelError(f"argument {key!r} must be an integer, got {v!r}", f"command {cmd.get('op')!r}")
    return v


def _pair_arg(cmd, key) -> list:
    v = _arg(cmd, key)
    if not (isinstance(v, list) and len(v) == 2):
        raise ModelError(f"argument {key!r} must list two names", f"command {cmd.get('op')!r}")
    return v


def _where(cmd) -> str:
    return f"command {cmd.get('op')!r}"


# ------------------------------------------------------------------ commands


def _beta(ctx: Context, cmd: dict):
    m = ctx.model
    if "bundle" in cmd:
        u = m.lookup("bundles", cmd["bundle"], _where(cmd)).total
    elif "immersion" in cmd:
        u = m.lookup("immersions", cmd["immersion"], _where(cmd)).base.normal.total
    else:
        u = m.lookup("spaces", _arg(cmd, "space"), _where(cmd)).tangent
    return render_series(beta_of(u)), []


def _multipoint(ctx, cmd):
    data = ctx.model.lookup("immersions", _arg(cmd, "immersion"), _where(cmd))
    r = _int_arg(cmd, "r")
    if r < 1:
        raise InvariantError("r must be >= 1")
    return multipoint_numbers(data.base, r), []


def _herbert(ctx, cmd):
    data = ctx.model.lookup("immersions", _arg(cmd, "immersion"), _where(cmd))
    r = _int_arg(cmd, "r", 2)
    if r < 1:
        raise InvariantError("r must be >= 1")
    base = data.base
    pulled = None
    if "pulled" in cmd:
        if not isinstance(cmd["pulled"], list):
            raise ModelError("'pulled' must be a list of series", _where(cmd))
        alg = base.source.algebra
        pulled = [parse_series(alg, s, f"{_where(cmd)}.pulled[{i}]") for i, s in enumerate(cmd["pulled"])]
    m = iterate_herbert(data, r, pulled)
    checks = []
    if ctx.verify and base.euclidean and pulled is None:
        ok = m == multipoint_series(base, r)
        checks.append(("recursion = closed form", ok))
        if not ok:
            raise IdentityCheckError("recursion = closed form", f"r={r}")
    result = {
        "series": render_series(m),
        "numbers": render_class(numbers_from_series(m, base.dim - (r - 1) * base.codim)),
    }
    return result, checks


def _euler_locus(ctx, cmd):
    X = ctx.model.lookup("spaces", _arg(cmd, "space"), _where(cmd))
    xi = ctx.model.lookup("bundles", _arg(cmd, "bundle"), _where(cmd))
    return euler_locus(X, xi), []


def _product_multi(ctx, cmd):
    a, b = (ctx.model.lookup("immersions", n, _where(cmd)).base for n in _pair_arg(cmd, "immersions"))
    r = _int_arg(cmd, "r")
    if r < 1:
        raise InvariantError("r must be >= 1")
    res = product_immersion_multipoint(a, b, r, verify=ctx.verify)
    checks = [("M_r(g1 x g2) = (-1)^(r-1) M_r(g1) x M_r(g2)", True)] if ctx.verify else []
    return res, checks


def _product_double(ctx, cmd):
    a, b = (ctx.model.lookup("immersions", n, _where(cmd)) for n in _pair_arg(cmd, "immersions"))
    res = product_double_points(a, b, verify=ctx.verify)
    checks = [("M_2(g1 x g2) = three-term formula", True)] if ctx.verify else []
    terms = {name: render_class(c) for name, c in double_point_terms(a, b).items()}
    return res, checks, {"terms": terms}


def _thom(thom):
    def run(ctx, cmd):
        f = ctx.model.lookup("maps", _arg(cmd, "map"), _where(cmd))
        t = thom(f)
        result = {"class": render_element(t)}
        if t.is_zero() or t.homogeneous_degree() == f.source.dim:
            result["number"] = render_scalar(pair(t))
        return result, []

    return run


def _suspend(ctx, cmd):
    f = ctx.model.lookup("maps", _arg(cmd, "map"), _where(cmd))
    g = suspend(f, _int_arg(cmd, "j"))
    return {
        "dim": g.source.dim,
        "codim": g.codim,
        "normal": render_element(g.normal.element()),
    }, []


def _strata_product(product, name):
    def run(ctx, cmd):
        f, g = (ctx.model.lookup("maps", n, _where(cmd)) for n in _pair_arg(cmd, "maps"))
        total, terms = product(f, g, verify=ctx.verify)
        result = {
            "class": render_element(total),
            "terms": [{"j": j, "term": render_element(t)} for j, t in terms],
        }
        return result, [(name, True)] if ctx.verify else []

    return run


def _class_operand(ctx, decl, where):
    if isinstance(decl, str):
        return manifold_class(ctx.model.lookup("spaces", decl, where))
    return parse_class(decl, where, ctx.field or ctx.model.default_field)


def _class_product(ctx, cmd):
    a, b = (_class_operand(ctx, s, _where(cmd)) for s in _pair_arg(cmd, "classes"))
    if a.field is not b.field:
        raise InvariantError("class-product factors have different fields")
    return class_product(a, b), []


def _morin_rank(ctx, cmd):
    n, k = _int_arg(cmd, "n"), _int_arg(cmd, "k")
    try:
        return morin_rank(n, k), []
    except ValueError as exc:
        raise InvariantError(str(exc)) from None


def _morin_mul(ctx, cmd):
    a, b = (ctx.model.lookup("morin", n, _where(cmd)) for n in _pair_arg(cmd, "morin"))
    return render_morin(morin_mul(a, b)), []


def _prim_strata(ctx, cmd):
    data = ctx.model.lookup("immersions", _arg(cmd, "immersion"), _where(cmd))
    return render_morin(prim_strata(data.base)), []


def _check(ctx, cmd):
    suite = _arg(cmd, "suite")
    if suite not in SUITES:
        raise ModelError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}", _where(cmd))
    seed = _int_arg(cmd, "seed", ctx.seed)
    cases = _int_arg(cmd, "cases", None) if cmd.get("cases") is not None else None
    field = ctx.field
    if "field" in cmd:
        try:
            field = Field.parse(cmd["field"])
        except ValueError as exc:
            raise ModelError(str(exc), _where(cmd)) from None
    res = run_suite(suite, seed, cases, field)
    result = {
        "suite": suite,
        "seed": seed,
        "cases": res.cases,
        "nontrivial": res.nontrivial,
        "failures": {name: cases for name, cases in res.failed.items() if cases},
    }
    return result, res.checks()


COMMANDS: dict[str, Callable] = {
    "beta": _beta,
    "multipoint": _multipoint,
    "herbert": _herbert,
    "euler-locus": _euler_locus,
    "product-multi": _product_multi,
    "product-double": _product_double,
    "thom-sigma1": _thom(thom_sigma1),
    "thom-sigma2": _thom(thom_sigma2),
    "suspend": _suspend,
    "sigma1-product": _strata_product(sigma1_product, "[Sigma^1(f x g)] = sum of suspended terms"),
    "sigma2-product": _strata_product(sigma2_product, "[Sigma^2(f x g)] = sum of suspended terms"),
    "class-product": _class_product,
    "morin-rank": _morin_rank,
    "morin-mul": _morin_mul,
    "prim-strata": _prim_strata,
    "check": _check,
}


def execute(ctx: Context, cmd: dict, timing: bool = False) -> dict:
    """Run one command and build its report."""
    if not isinstance(cmd, dict) or "op" not in cmd:
        raise ModelError("a command is an object with an 'op' key")
    op = cmd["op"]
    try:
        fn = COMMANDS[op]
    except (KeyError, TypeError):
        raise ModelError(f"unknown op {op!r}; choose from {sorted(COMMANDS)}") from None
    t0 = time.perf_counter()
    out = fn(ctx, cmd)
    result, checks = out[0], out[1]
    extra = out[2] if len(out) > 2 else {}
    report = {"command": cmd}
    if isinstance(result, CobordismClass):
        # class-valued results: numbers under "result", grading alongside
        fields = render_class(result)
        report["field"], report["dim"] = fields["field"], fields["dim"]
        result = fields["numbers"]
    report["result"] = result
    report.update(extra)
    report["checks"] = [{"identity": name, "passed": bool(ok)} for name, ok in checks]
    if timing:
        report["timing"] = round(time.perf_counter() - t0, 6)
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="morincob",
        description="Characteristic numbers of multiple points, Thom polynomials and Morin cobordism.",
    )
    p.add_argument("--input", required=True, help="JSON model file")
    p.add_argument("--output", default="-", help="report path, '-' for stdout (default)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized check suites")
    p.add_argument("--no-verify", action="store_true", help="skip embedded identity assertions")
    p.add_argument("--field", choices=("Q", "F2"), help="field for spaces and suites that do not name one")
    p.add_argument("--command", help="run this JSON command instead of the file's command list")
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds to each report")
    return p


def _fail(code: int, kind: str, exc: Exception, op=None) -> int:
    msg = {"error": kind, "message": str(exc)}
    if op is not None:
        msg["op"] = op
    print(json.dumps(msg), file=sys.stderr)
    return code


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    field = Field.parse(args.field) if args.field else None
    op = None
    try:
        model = load_model(args.input, field or Field.RAT)
        if args.command is not None:
            try:
                commands = [json.loads(args.command)]
            except json.JSONDecodeError as exc:
                raise ModelError(f"invalid JSON in --command: {exc.msg}") from None
        else:
            commands = model.commands
        ctx = Context(model, args.seed, not args.no_verify, field)
        reports = []
        failed = False
        for cmd in commands:
            op = cmd.get("op") if isinstance(cmd, dict) else None
            rep = execute(ctx, cmd, args.timing)
            failed = failed or not all(c["passed"] for c in rep["checks"])
            reports.append(rep)
    except ModelError as exc:
        return _fail(EXIT_USAGE, "parse", exc, op)
    except InvariantError as exc:
        return _fail(EXIT_INVARIANT, "invariant", exc, op)
    except IdentityCheckError as exc:
        return _fail(EXIT_IDENTITY, "identity", exc, op)
    except ValueError as exc:
        return _fail(EXIT_INVARIANT, "invariant", exc, op)
    text = json.dumps({"reports": reports}, indent=2, sort_keys=False) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return EXIT_IDENTITY if failed else EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
