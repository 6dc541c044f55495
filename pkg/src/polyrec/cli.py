"""Command-line front end.

Exit status is 0 on success, 1 when the library reports a domain error (the
error's class name is printed) and 2 for usage errors.  ``--format json``
prints one JSON document per invocation carrying ``schema_version``.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import automata, cancelling, convert, dsl, engines, modular, normalize
from .errors import PolyrecError
from .polycore import MultiPoly

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    status: int
    report: dict
    text: str


def _s(v):
    """JSON-friendly exact value."""
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (MultiPoly,)):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_s(x) for x in v]
    if isinstance(v, dict):
        return {k: _s(x) for k, x in v.items()}
    return v


# -- input --------------------------------------------------------------------

def corpus_path(name: str) -> Path | None:
    base = resources.files("polyrec") / "corpus"
    for cand in (name, name + ".seq"):
        p = base / cand
        if p.is_file():
            return Path(str(p))
    return None


def _read_file(name: str) -> bytes:
    p = Path(name)
    if p.is_file():
        return p.read_bytes()
    bundled = corpus_path(name)
    if bundled is not None:
        return bundled.read_bytes()
    raise UsageError(f"no such file: {name}")


def _load(args, kinds=None):
    if not args.file:
        raise UsageError("--file is required")
    doc = dsl.parse_document(_read_file(args.file))
    if kinds and doc.kind not in kinds:
        raise UsageError(f"{args.command} expects a {' or '.join(kinds)} document, got {doc.kind}")
    return doc, dsl.build(doc)


def _poly_arg(args, nvars=None) -> MultiPoly:
    if not args.poly:
        raise UsageError("--poly is required")
    text = args.poly
    if text.startswith("@"):
        raw = _read_file(text[1:]).decode("utf-8")
        text = " ".join(ln.split("#", 1)[0].strip() for ln in raw.splitlines()).strip()
    return dsl.parse_expr(text, nvars=nvars)


def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--{name} is required")
    return v


SEQUENCE_KINDS = ("poly_system", "oracle", "linear_recurrence", "simple_recurrence",
                  "rational_system")


def _as_oracle(model):
    if isinstance(model, engines.OracleSequence):
        return model
    if isinstance(model, engines.PolySystem):
        return engines.OracleSequence.from_system(model)
    if isinstance(model, (engines.LinearRecurrence, engines.SimpleRecurrence)):
        return engines.OracleSequence.from_system(convert.single_to_system(model), "recurrence")
    if isinstance(model, engines.RationalSystem):
        return engines.OracleSequence.custom("rational", lambda n: engines.eval_rational(model, n))
    raise UsageError("expected a sequence document")


def _period(r):
    return {"preperiod": r.preperiod, "period": r.period, "steps": r.steps, "method": r.method}


# -- commands -----------------------------------------------------------------

def cmd_eval(args):
    doc, m = _load(args)
    n = _need(args, "n")
    if n < 0:
        raise UsageError("--n must be nonnegative")
    k = doc.kind
    report = {"kind": k, "n": n}
    if k == "poly_system":
        report["value"] = engines.eval_output(m, n)
    elif k == "linear_recurrence":
        report["value"] = engines.eval_linear(m, n)
    elif k == "simple_recurrence":
        report["value"] = engines.eval_simple(m, n)
    elif k == "rational_system":
        report["value"] = engines.eval_rational(m, n)
    elif k == "oracle":
        report["value"] = m(n)
    elif k == "automaton":
        report["value"] = automata.wa_eval(m, n)
    elif k == "wcfg":
        report["value"] = automata.wcfg_eval(m, n)
        report["catalan_view"] = automata.wcfg_catalan_view(m, n)
    elif k == "wmso":
        report["value"] = automata.wmso_eval(m, n)
    return report


def cmd_convert(args):
    doc, m = _load(args, ("poly_system", "linear_recurrence", "simple_recurrence"))
    if doc.kind == "poly_system":
        rec = convert.linear_system_to_single(m, restrict_to_orbit=args.orbit)
        out = dsl.to_doc(rec)
        return {"from": doc.kind, "to": out.kind, "order": rec.order,
                "coefficients": list(rec.coeffs), "initials": list(rec.initials),
                "document": dsl.serialize(out)}
    s = convert.single_to_system(m)
    out = dsl.to_doc(s)
    return {"from": doc.kind, "to": out.kind, "sequences": s.k, "document": dsl.serialize(out)}


def cmd_normalize(args):
    doc, m = _load(args, ("poly_system",))
    s, meta = normalize.pipeline(m, args.degree)
    return {"a": meta.a, "d": meta.d, "denominators": list(meta.denominators),
            "output_initial_integral": meta.output_initial_integral,
            "document": dsl.serialize(dsl.to_doc(s))}


def cmd_mod_analyze(args):
    doc, m = _load(args, ("poly_system", "oracle"))
    p = _need(args, "prime")
    count = args.n if args.n is not None else 20
    if doc.kind == "oracle":
        window = args.window or 2000
        scan = modular.oracle_mod_scan(m, p, window, args.max_period)
        return {"prime": p, "window": window, "max_period": scan.max_period,
                "found": scan.found, "preperiod": scan.preperiod, "period": scan.period,
                "residues": list(scan.residues[:count])}
    state, out = modular.output_period(m, p, args.cutoff)
    residues = list(modular.reconstruct_residues(m, p, count))
    _, meta = normalize.pipeline(m)
    return {"prime": p, "a": meta.a, "d": meta.d, "state": _period(state),
            "preperiod": out.preperiod, "period": out.period, "residues": residues}


def cmd_catalan_blocks(args):
    p = _need(args, "prime")
    count = args.n if args.n is not None else 5
    rep = modular.catalan_blocks(p, count)
    return {"prime": p, "all_match": rep.all_match,
            "blocks": [{"k": b.k, "start": b.start, "observed": b.observed,
                        "predicted": b.predicted} for b in rep.blocks]}


def _certs(certs):
    return [{"polynomial": str(c.poly), "mode": str(c).rsplit("[", 1)[1].rstrip("]")} for c in certs]


def cmd_find_cancelling(args):
    doc, m = _load(args, SEQUENCE_KINDS)
    D = _need(args, "degree")
    if doc.kind == "poly_system" and not args.samples:
        certs = cancelling.find_cancelling_symbolic(m, D)
        return {"mode": "symbolic", "window": m.k, "degree": D, "found": bool(certs),
                "certificates": _certs(certs)}
    o = _as_oracle(m)
    k = _need(args, "window")
    N = _need(args, "samples")
    certs = cancelling.find_cancelling_empirical(o, k, D, N)
    return {"mode": "empirical", "window": k, "degree": D, "samples": N,
            "found": bool(certs), "certificates": _certs(certs)}


def cmd_verify_cancelling(args):
    doc, m = _load(args, SEQUENCE_KINDS)
    report = {}
    if doc.kind == "poly_system":
        q = _poly_arg(args, m.k + 1)
        chk = cancelling.verify_symbolic(m, q)
        report["symbolic"] = "PASS" if chk.passed else "FAIL"
        if not chk.passed:
            report["residual"] = str(chk.residual)
    if doc.kind != "poly_system" or args.samples:
        q = _poly_arg(args)
        N = args.samples or 50
        chk = cancelling.verify_empirical(_as_oracle(m), q, N)
        report[f"empirical({N})"] = "PASS" if chk.passed else "FAIL"
        if not chk.passed:
            report["counterexample"] = chk.counterexample
            report["value"] = chk.value
    return report


def cmd_find_simple(args):
    doc, m = _load(args, SEQUENCE_KINDS)
    o = _as_oracle(m)
    k, D, N = _need(args, "window"), _need(args, "degree"), _need(args, "samples")
    cands = cancelling.find_simple_recurrence(o, k, D, N)
    return {"order": k, "degree": D, "samples": N, "survivors": len(cands),
            "candidates": [{"rule": str(c.recurrence.rule),
                            "kernel": [str(q) for q in c.kernel],
                            "verified_samples": c.samples} for c in cands]}


def _dec_report(dec):
    return {"m": dec.m, "S": str(dec.S),
            "pairs": [{"P": str(P), "Q": str(Q)} for P, Q in dec.pairs]}


def cmd_nn_decompose(args):
    dec = cancelling.nn_decompose(_poly_arg(args))
    report = _dec_report(dec)
    if args.n is not None:
        report["vandermonde"] = bool(cancelling.vandermonde_check(dec, args.n))
    return report


def cmd_nn_refute(args):
    r = cancelling.refute_nn_candidate(_poly_arg(args))
    report = {"Z": str(r.z), "prime": r.prime, "refuted": r.refuted,
              "needs_inspection": r.needs_inspection,
              "violations": [{"a": a, "b": b, "value": v} for a, b, v in r.scan.violations],
              "vanishes_on_samples": r.direct.passed}
    if not r.direct.passed:
        report["nonzero_at"] = r.direct.counterexample
    report.update(_dec_report(r.decomposition))
    return report


def cmd_wa_eval(args):
    if args.file:
        doc, m = _load(args, ("automaton", "poly_system"))
        if doc.kind == "poly_system":
            m = automata.wa_from_linear_system(m)
    else:
        raise UsageError("--file is required")
    n = _need(args, "n")
    return {"dimension": m.dimension, "n": n, "value": automata.wa_eval(m, n)}


def cmd_wcfg_eval(args):
    _, g = _load(args, ("wcfg",))
    n = _need(args, "n")
    return {"n": n, "length_weight": automata.wcfg_eval(g, n),
            "catalan_view": automata.wcfg_catalan_view(g, n)}


def cmd_wmso_eval(args):
    if args.expr:
        e = automata.parse_wmso(args.expr)
    else:
        _, e = _load(args, ("wmso",))
    n = _need(args, "n")
    return {"expr": str(e), "n": n, "value": automata.wmso_eval(e, n)}


COMMANDS = {
    "eval": (cmd_eval, "evaluate a sequence at n"),
    "convert": (cmd_convert, "linear system <-> single recurrence"),
    "normalize": (cmd_normalize, "integer, homogeneous, integer-coefficient form"),
    "mod-analyze": (cmd_mod_analyze, "preperiod and period mod a prime"),
    "catalan-blocks": (cmd_catalan_blocks, "Catalan p-block lengths against the formula"),
    "find-cancelling": (cmd_find_cancelling, "search for cancelling polynomials"),
    "verify-cancelling": (cmd_verify_cancelling, "check a cancelling polynomial"),
    "find-simple": (cmd_find_simple, "fit u[n+k] = P(u[n..n+k-1])"),
    "nn-decompose": (cmd_nn_decompose, "decompose Z(n^n, ...) as sum P_i(n)^n Q_i(n)"),
    "nn-refute": (cmd_nn_refute, "refute Z as a cancelling polynomial of n^n"),
    "wa-eval": (cmd_wa_eval, "evaluate a unary weighted automaton"),
    "wcfg-eval": (cmd_wcfg_eval, "evaluate a unary weighted grammar"),
    "wmso-eval": (cmd_wmso_eval, "evaluate a WMSO term"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polyrec", description="Exact tools for polynomial recursive sequences.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--file", help="sequence document (bundled corpus names also work)")
        p.add_argument("--n", type=int)
        p.add_argument("--prime", type=int)
        p.add_argument("--cutoff", type=int)
        p.add_argument("--degree", type=int)
        p.add_argument("--window", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--poly", help="polynomial in x0, x1, ...; '@path' reads it from a file")
        p.add_argument("--format", choices=("human", "json"), default="human")
        if name == "convert":
            p.add_argument("--orbit", action="store_true",
                           help="only require the recurrence along the actual orbit")
        if name == "mod-analyze":
            p.add_argument("--max-period", type=int)
        if name == "wmso-eval":
            p.add_argument("--expr", help="s-expression instead of --file")
    return parser


def _human(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            lines.extend("  " + row for row in _table(value))
        elif isinstance(value, dict):
            lines.append(f"{key}: " + ", ".join(f"{k}={v}" for k, v in value.items()))
        elif isinstance(value, list) and not value:
            lines.append(f"{key}: (none)")
        elif isinstance(value, list):
            lines.append(f"{key}: " + " ".join(str(v) for v in value))
        elif isinstance(value, str) and "\n" in value:
            lines.append(f"{key}:")
            lines.extend("  " + ln for ln in value.rstrip("\n").splitlines())
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _table(rows):
    cols = list(rows[0])
    cells = [[str(r.get(c, "")) if not isinstance(r.get(c), list)
              else "; ".join(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    out += ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in cells]
    return out


def _render(report, fmt):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    return _human({k: v for k, v in report.items() if k not in ("schema_version", "command")})


def run(argv) -> CommandResult:
    """Parse ``argv`` and execute; never raises for bad input."""
    argv = list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        report = {"schema_version": SCHEMA_VERSION, "command": None,
                  "error": {"name": "UsageError", "message": str(exc)}}
        wants_json = any(a == "json" and i and argv[i - 1] == "--format" for i, a in enumerate(argv))
        text = _render(report, "json") if wants_json or "--format=json" in argv else f"usage error: {exc}\n"
        return CommandResult(2, report, text)
    fmt = args.format
    base = {"schema_version": SCHEMA_VERSION, "command": args.command}
    try:
        report = _s(COMMANDS[args.command][0](args))
    except UsageError as exc:
        report = dict(base, error={"name": "UsageError", "message": str(exc)})
        return CommandResult(2, report, f"usage error: {exc}\n" if fmt == "human" else _render(report, fmt))
    except PolyrecError as exc:
        report = dict(base, error={"name": exc.name, "message": str(exc)})
        text = f"error: {exc.name}: {exc}\n" if fmt == "human" else _render(report, fmt)
        return CommandResult(1, report, text)
    except ZeroDivisionError as exc:
        report = dict(base, error={"name": "ZeroDivisionError", "message": str(exc)})
        text = f"error: ZeroDivisionError: {exc}\n" if fmt == "human" else _render(report, fmt)
        return CommandResult(1, report, text)
    except (ValueError, TypeError, OSError) as exc:
        report = dict(base, error={"name": "UsageError", "message": str(exc)})
        return CommandResult(2, report, f"usage error: {exc}\n" if fmt == "human" else _render(report, fmt))
    report = dict(base, **report)
    return CommandResult(0, report, _render(report, fmt))


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    if any(a in ("-h", "--help") for a in argv):
        build_parser().parse_args(argv)
        return 0
    result = run(argv)
    stream = sys.stdout if result.status == 0 or '"error"' in result.text else sys.stderr
    stream.write(result.text)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
