"""Command-line front end.

Every subcommand turns its flags or ``--spec`` file into a JSON payload,
validates it against the shipped schema, runs the computation and prints a
report.  Exit codes: 0 success, 1 oracle or self-check mismatch, 2 invalid
input, 3 violated mathematical precondition.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, Optional, Sequence

import jsonschema

from vchow import chow, dtseries, quadform, vpb
from vchow.classes import (
    KClass,
    LocalizedClass,
    OrthSplitBundle,
    equivariant_ring,
    euler,
    reduce_orth,
    sqrt_euler,
    sqrt_euler_virtual_normal,
)
from vchow.kernel.rational import as_rational, binomial, format_rational
from vchow.kernel.ring import GradedClass, GradedRing
from vchow.kernel.series import TruncatedSeries

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3

DEFAULT_MAX_ORDER = 512
DEFAULT_SEED = 0


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.message = message


# -- schemas -------------------------------------------------------------------


@lru_cache(maxsize=None)
def load_schema() -> dict:
    text = resources.files("vchow.schemas").joinpath("jobs.v1.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_payload(command: str, payload: Any) -> None:
    root = load_schema()
    if command not in root["$defs"]:
        raise CliError(EXIT_INPUT, "schema", f"no schema for command {command!r}")
    schema = {"$defs": root["$defs"], "$ref": f"#/$defs/{command}"}
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise CliError(EXIT_INPUT, "schema", f"payload invalid at {where}: {err.message}")


def max_order() -> int:
    raw = os.environ.get("VCHOW_MAX_ORDER", str(DEFAULT_MAX_ORDER))
    try:
        value = int(raw)
    except ValueError:
        raise CliError(EXIT_INPUT, "config", f"VCHOW_MAX_ORDER must be an integer, got {raw!r}") from None
    return value


def check_order(order: int) -> None:
    cap = max_order()
    if order > cap:
        raise CliError(EXIT_INPUT, "limit", f"order {order} exceeds VCHOW_MAX_ORDER={cap}")


# -- JSON codecs -----------------------------------------------------------------


def class_to_json(x: GradedClass) -> dict[str, str]:
    return x.to_json()


def class_from_json(ring: GradedRing, data: dict[str, str]) -> GradedClass:
    total = ring.zero()
    for mono, coeff in data.items():
        total = total + ring.parse(mono) * as_rational(coeff)
    return total


def localized_to_json(x: LocalizedClass) -> dict[str, dict[str, str]]:
    return {str(e): c.to_json() for e, c in x.laurent_terms().items()}


def localized_from_json(ring: GradedRing, data: dict[str, dict[str, str]]) -> LocalizedClass:
    from vchow.classes.equivariant import weight_index

    ti = weight_index(ring)
    t = ring.generators[ti].name
    total = LocalizedClass(ring.zero())
    for e, coeff in data.items():
        k = int(e)
        term = LocalizedClass(class_from_json(ring, coeff))
        power = LocalizedClass(ring.parse(f"{t}^{abs(k)}")) if k else LocalizedClass(ring.one())
        total = total + (term * power if k >= 0 else term / power)
    return total


def series_to_json(s: TruncatedSeries) -> list[str]:
    return s.to_json()


def series_from_json(data: Sequence[str]) -> TruncatedSeries:
    return TruncatedSeries([as_rational(c) for c in data])


def matrix_to_json(rows) -> list[list[str]]:
    return [[format_rational(v) for v in row] for row in rows]


def matrix_from_json(rows) -> list[list[Fraction]]:
    return [[as_rational(v) for v in row] for row in rows]


def variety_from_json(data) -> chow.Variety:
    if isinstance(data, str):
        return chow.builtin(data)
    gens = [tuple(g) if isinstance(g, list) else (g["name"], g["degree"]) for g in data["generators"]]
    return chow.from_table(gens, data["relations"], data["dim"], data["integrals"], data.get("name", ""))


def kclass_from_json(ring: GradedRing, data: dict, honest_default: bool = False) -> KClass:
    return KClass.from_chern(ring, data["rank"], data["chern"], data.get("honest", honest_default))


def orth_from_json(ring: GradedRing, data: dict) -> OrthSplitBundle:
    return OrthSplitBundle(ring, tuple(ring.parse(r) for r in data["roots"]), data.get("sign", 1))


# -- commands ---------------------------------------------------------------------


def _series_payload(args) -> dict:
    payload: dict[str, Any] = {"kind": args.kind}
    if args.order is not None:
        payload["order"] = args.order
    if args.exponent is not None:
        payload["exponent"] = args.exponent
    if args.i_series is not None:
        payload["i_series"] = [s.strip() for s in args.i_series.split(",")]
    if args.i0_series is not None:
        payload["i0_series"] = [s.strip() for s in args.i0_series.split(",")]
    return payload


def run_series(p: dict, args) -> tuple[dict, int]:
    kind = p["kind"]
    if kind == "dtpt":
        i_series = series_from_json(p["i_series"])
        i0_series = series_from_json(p["i0_series"])
        check_order(min(i_series.order, i0_series.order))
        result = dtseries.dtpt_quotient(i_series, i0_series)
    else:
        order = p["order"]
        check_order(order)
        if kind == "macmahon":
            result = dtseries.macmahon(order)
        elif kind == "cao-kool":
            result = dtseries.cao_kool_series(p["exponent"], order)
        else:
            result = dtseries.dt3_degree_zero_series(p["exponent"], order)
    report = {"command": "series", "kind": kind, "order": result.order, "coefficients": series_to_json(result)}
    if "exponent" in p:
        report["exponent"] = format_rational(as_rational(p["exponent"]))
    return report, EXIT_OK


def build_pushforward_query(p: dict) -> vpb.PushforwardQuery:
    x = variety_from_json(p["variety"])
    ring = x.ring
    k0 = kclass_from_json(ring, p["k0"], honest_default=True)
    k1 = kclass_from_json(ring, p["k1"], honest_default=True)
    xi = kclass_from_json(ring, p["xi"])
    alpha = ring.parse(p.get("alpha", 1))
    return vpb.PushforwardQuery(vpb.TwoTermComplex(k0, k1, x), xi, p["m"], alpha)


def run_push_forward(p: dict, args) -> tuple[dict, int]:
    q = build_pushforward_query(p)
    formula = vpb.vpb_pushforward_formula(q)
    report: dict[str, Any] = {"command": "push-forward", "rank": q.complex.rank, "formula": class_to_json(formula)}
    code = EXIT_OK
    if args.check_oracle:
        oracle = vpb.vpb_pushforward_oracle(q)
        agree = formula == oracle
        report["oracle"] = class_to_json(oracle)
        report["agree"] = agree
        if not agree:
            code = EXIT_MISMATCH
    return report, code


def _pairs_payload(args) -> dict:
    payload: dict[str, Any] = {"n": args.n, "N": args.N, "m": args.m}
    for key, value in (("M_E", args.M_E), ("M_O", args.M_O), ("beta_degree", args.beta_degree)):
        if value is not None:
            payload[key] = value
    return payload


def run_pairs_sheaves(p: dict, args) -> tuple[dict, int]:
    n, big_n, m = p["n"], p["N"], p["m"]
    if "beta_degree" in p:
        value = vpb.js_gv_pushforward(p["beta_degree"], n, big_n, m)
    else:
        value = vpb.pairs_sheaves_pushforward(n, big_n, m)
    report: dict[str, Any] = {"command": "pairs-sheaves", "n": n, "N": big_n, "m": m, "pushforward": class_to_json(value)}
    code = EXIT_OK
    if "M_E" in p or "M_O" in p:
        ptgv = vpb.tautological_ptgv(n, big_n, p.get("M_E", 0), p.get("M_O", 0))
        report["ptgv"] = format_rational(ptgv)
    if args.check_oracle:
        q = vpb.pairs_sheaves_query(n, big_n, m)
        formula = vpb.vpb_pushforward_formula(q)
        oracle = vpb.vpb_pushforward_oracle(q)
        agree = formula == oracle == value
        report["formula"] = class_to_json(formula)
        report["oracle"] = class_to_json(oracle)
        report["agree"] = agree
        if not agree:
            code = EXIT_MISMATCH
    return report, code


def run_sqrt_euler(p: dict, args) -> tuple[dict, int]:
    x = variety_from_json(p["variety"])
    report: dict[str, Any] = {"command": "sqrt-euler"}
    code = EXIT_OK
    if "bundle" in p:
        e = orth_from_json(x.ring, p["bundle"])
        se = sqrt_euler(e)
        top = euler(e.to_kclass())
        square_law = top == se * se * (-1) ** e.half_rank
        report.update(
            {
                "rank": e.rank,
                "sqrt_euler": class_to_json(se),
                "euler": class_to_json(top),
                "square_law": square_law,
            }
        )
        if not square_law:
            code = EXIT_MISMATCH
        if "reduce" in p:
            k, reduced = reduce_orth(e, p["reduce"])
            ek = euler(k)
            sr = sqrt_euler(reduced)
            identity = se == ek * sr
            report["reduction"] = {
                "euler_K": class_to_json(ek),
                "sqrt_euler_reduced": class_to_json(sr),
                "identity": identity,
            }
            if not identity:
                code = EXIT_MISMATCH
    if "equivariant" in p:
        eq = p["equivariant"]
        ring = equivariant_ring(x.ring, eq.get("weight", "t"))
        bm = kclass_from_json(ring, eq["bm"], honest_default=True)
        em = orth_from_json(ring, eq["em"])
        ratio = sqrt_euler_virtual_normal(bm, em)
        report["virtual_normal"] = localized_to_json(ratio)
    return report, code


def _quadspace(p: dict) -> quadform.QuadSpace:
    return quadform.QuadSpace(tuple(tuple(r) for r in matrix_from_json(p["gram"])))


def _invariants_json(inv) -> dict:
    dim, disc, (pos, neg) = inv
    return {"dim": dim, "disc": disc, "signature": [pos, neg]}


def run_quadform_reduce(p: dict, args) -> tuple[dict, int]:
    q = _quadspace(p)
    k = quadform.Subspace(q, tuple(tuple(v) for v in matrix_from_json(p["isotropic"])))
    red = quadform.reduce_quadspace(q, k)
    before, after = quadform.quad_invariants(q), quadform.quad_invariants(red)
    kd = k.dim
    checks = {
        "dim_drop": after[0] == before[0] - 2 * kd,
        "disc_relation": quadform.squarefree_class(Fraction((-1) ** kd * after[1])) == before[1],
        "signature_drop": after[2] == (before[2][0] - kd, before[2][1] - kd),
        "nondegenerate": red.is_nondegenerate(),
    }
    report = {
        "command": "quadform-reduce",
        "reduced_gram": matrix_to_json(red.gram),
        "invariants": _invariants_json(before),
        "reduced_invariants": _invariants_json(after),
        "checks": checks,
    }
    return report, EXIT_OK if all(checks.values()) else EXIT_MISMATCH


def _symres_json(r: quadform.SymRes) -> dict:
    return {
        "b_dim": r.b_dim,
        "gram": matrix_to_json(r.space.gram),
        "d": matrix_to_json(r.d),
        "orientation": format_rational(r.orientation),
    }


def run_quadform_check(p: dict, args) -> tuple[dict, int]:
    q = _quadspace(p)
    d = tuple(tuple(v) for v in matrix_from_json(p["d"]))
    b_dim = p.get("b_dim", len(d))
    if "orientation" in p:
        r = quadform.SymRes(b_dim, q, d, as_rational(p["orientation"]))
    else:
        r = quadform.SymRes.with_orientation(b_dim, q, d)
    report: dict[str, Any] = {"command": "quadform-check", "resolution": _symres_json(r)}
    complex_ok = quadform.symres_check(r)
    report["symres_check"] = complex_ok
    if not complex_ok:
        raise CliError(EXIT_PRECONDITION, "precondition", "symres_check failed: d(B) is not isotropic")
    rng = random.Random(args.seed)
    descent = quadform.quadratic_descent_check(r, p.get("samples", 20), rng)
    report["descent"] = descent
    code = EXIT_OK if descent else EXIT_MISMATCH
    if "reduce" in p:
        red = p["reduce"]
        k = quadform.Subspace(q, tuple(tuple(v) for v in matrix_from_json(red["K"])))
        g = quadform.reduce_symres(r, matrix_from_json(red["D"]), k)
        report["reduced"] = _symres_json(g)
        report["reduced"]["orientation_relation"] = g.orientation**2 == g.orientation_target()
    return report, code


def run_grr_check(p: dict, args) -> tuple[dict, int]:
    rows = []
    ok = True
    for n in range(p["max_n"] + 1):
        for k in range(-p["max_k"], p["max_k"] + 1):
            chi = chow.chi_line_on_projective_space(n, k)
            expected = binomial(n + k, n)
            rows.append({"n": n, "k": k, "chi": format_rational(chi), "expected": format_rational(expected), "ok": chi == expected})
            ok = ok and chi == expected
    return {"command": "grr-check", "rows": rows, "all_ok": ok}, EXIT_OK if ok else EXIT_MISMATCH


# -- rendering -----------------------------------------------------------------------


def _show(value: Any) -> str:
    if _is_class(value):
        return _class_text(value)
    return json.dumps(value, sort_keys=True) if isinstance(value, (dict, list)) else str(value)


def _is_class(value: Any) -> bool:
    return isinstance(value, dict) and all(isinstance(v, str) for v in value.values())


def _class_text(data: dict[str, str]) -> str:
    out = ""
    for mono, coeff in data.items():
        c = as_rational(coeff)
        body = str(abs(c)) if mono == "1" else (mono if abs(c) == 1 else f"{abs(c)}*{mono}")
        if not out:
            out = f"-{body}" if c < 0 else body
        else:
            out += f" - {body}" if c < 0 else f" + {body}"
    return out or "0"


def render_text(report: dict) -> str:
    lines = []
    if "coefficients" in report:
        for key in ("kind", "exponent", "order"):
            if key in report:
                lines.append(f"{key}: {report[key]}")
        coeffs = [str(as_rational(c)) for c in report["coefficients"]]
        kw = max(len("k"), len(str(len(coeffs) - 1)))
        cw = max([len("coefficient")] + [len(c) for c in coeffs])
        lines.append(f"{'k'.rjust(kw)}  {'coefficient'.rjust(cw)}")
        for k, c in enumerate(coeffs):
            lines.append(f"{str(k).rjust(kw)}  {c.rjust(cw)}")
        return "\n".join(lines) + "\n"
    if "rows" in report:
        header = ("n", "k", "chi", "expected", "ok")
        table = [header] + [tuple(str(as_rational(r[h])) if h in ("chi", "expected") else str(r[h]) for h in header) for r in report["rows"]]
        widths = [max(len(row[i]) for row in table) for i in range(len(header))]
        for row in table:
            lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
        lines.append(f"all_ok: {report['all_ok']}")
        return "\n".join(lines) + "\n"
    for key, value in report.items():
        if key == "virtual_normal":
            terms = [f"({_class_text(c)})*t^{e}" for e, c in value.items()]
            lines.append(f"{key}: {' + '.join(terms) if terms else '0'}")
        elif isinstance(value, dict) and not _is_class(value):
            lines.append(f"{key}:")
            for k2, v2 in value.items():
                lines.append(f"  {k2}: {_show(v2)}")
        else:
            lines.append(f"{key}: {_show(value)}")
    return "\n".join(lines) + "\n"


def render(report: dict, output: str) -> str:
    if output == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    return render_text(report)


# -- argument parsing ------------------------------------------------------------------


def _load_spec(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_INPUT, "io", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, "schema", f"{path} is not valid JSON: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized checks")
    common.add_argument("--spec", help="JSON payload file")

    parser = argparse.ArgumentParser(prog="vchow", description="Exact intersection-theory computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("series", parents=[common], help="generating series")
    s.add_argument("kind", choices=("macmahon", "cao-kool", "dt3", "dtpt"))
    s.add_argument("--order", type=int)
    s.add_argument("--exponent", "--c3c1", "--c3tk", dest="exponent")
    s.add_argument("--i-series", help="comma-separated coefficients")
    s.add_argument("--i0-series", help="comma-separated coefficients")

    pf = sub.add_parser("push-forward", parents=[common], help="virtual projective bundle pushforward")
    pf.add_argument("--check-oracle", action="store_true")

    ps = sub.add_parser("pairs-sheaves", parents=[common], help="Pairs/Sheaves specialization")
    ps.add_argument("--n", type=int)
    ps.add_argument("--N", type=int)
    ps.add_argument("--m", type=int)
    ps.add_argument("--M-E", dest="M_E")
    ps.add_argument("--M-O", dest="M_O")
    ps.add_argument("--beta-degree", type=int)
    ps.add_argument("--check-oracle", action="store_true")

    sub.add_parser("sqrt-euler", parents=[common], help="square-root Euler classes")

    qf = sub.add_parser("quadform", parents=[common], help="quadratic spaces and symmetric resolutions")
    qf.add_argument("action", choices=("reduce", "check"))

    g = sub.add_parser("grr-check", parents=[common], help="Riemann-Roch check on projective spaces")
    g.add_argument("--max-n", type=int, default=4)
    g.add_argument("--max-k", type=int, default=5)
    return parser


def _payload(args) -> tuple[str, Any]:
    cmd = args.command
    if cmd == "quadform":
        cmd = f"quadform-{args.action}"
    if args.spec:
        payload = _load_spec(args.spec)
        if args.command == "series" and isinstance(payload, dict):
            payload.setdefault("kind", args.kind)
        return cmd, payload
    if cmd == "series":
        return cmd, _series_payload(args)
    if cmd == "pairs-sheaves":
        return cmd, _pairs_payload(args)
    if cmd == "grr-check":
        return cmd, {"max_n": args.max_n, "max_k": args.max_k}
    raise CliError(EXIT_INPUT, "usage", f"{args.command} needs --spec")


_RUNNERS = {
    "series": run_series,
    "push-forward": run_push_forward,
    "pairs-sheaves": run_pairs_sheaves,
    "sqrt-euler": run_sqrt_euler,
    "quadform-reduce": run_quadform_reduce,
    "quadform-check": run_quadform_check,
    "grr-check": run_grr_check,
}


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cmd, payload = _payload(args)
        validate_payload(cmd, payload)
        try:
            report, code = _RUNNERS[cmd](payload, args)
        except CliError:
            raise
        except (ValueError, ArithmeticError) as exc:
            raise CliError(EXIT_PRECONDITION, "precondition", str(exc)) from None
    except CliError as err:
        error = {"error": {"kind": err.kind, "message": err.message, "exit_code": err.code}}
        stderr.write(json.dumps(error, sort_keys=True) + "\n")
        return err.code
    stdout.write(render(report, args.output))
    if code == EXIT_MISMATCH:
        stderr.write(json.dumps({"error": {"kind": "mismatch", "message": "check failed", "exit_code": code}}) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
