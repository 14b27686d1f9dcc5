"""Command-line front end.

Every command reads an assessment document, writes exactly one JSON
object (with ``"schema": 1``) to stdout and a short human summary to
stderr.  Exit codes: 0 success, 1 a failing verdict, 2 usage or input
error, 3 infeasible input (empty credal set).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from types import SimpleNamespace

import numpy as np

from . import consistency, functions, jensen, oracle, tailbounds
from .core import Assessment, Entry, Gamble
from .document import AssessmentDocument, load_document
from .errors import InfeasibleError, InputError, PrevBoundsError, SchemaError, UnknownIdentifier
from .expr import parse_expression

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


# --- JSON rendering ---------------------------------------------------------


def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot render {type(obj).__name__}")


# --- helpers ----------------------------------------------------------------


def _lookup(doc: AssessmentDocument, name: str) -> Gamble:
    if name not in doc.gambles:
        raise UnknownIdentifier(f"unknown gamble {name!r}")
    return doc.gamble(name)


def _with_target(a: Assessment, name: str, g: Gamble) -> Assessment:
    """Make ``name`` addressable; a vacuous entry (lower = inf) leaves the credal set unchanged."""
    if name in a:
        return a
    return Assessment(a.partition, [*a.entries, Entry(name, g, g.inf)])


def _envelope(a: Assessment, g: Gamble) -> tuple[float, float]:
    poly = consistency.CredalPolytope(a)
    return consistency.credal_optimize(poly, g, "min"), consistency.credal_optimize(poly, g, "max")


def _bound_json(r) -> dict:
    """Common shape for Jensen and tail-bound reports; carries what ``verify`` needs."""
    target = getattr(r, "gamble", None)
    if isinstance(r, jensen.JensenReport):
        out = {"id": r.fired, "description": r.target, "applicable": r.applicable, "tightest": r.tightest}
    else:
        out = {"id": r.inequality_id, "description": r.event_description, "applicable": True,
               "vacuous": r.vacuous, "threshold": r.threshold}
    out.update(
        bound=r.bound,
        direction=r.direction,
        side=r.side,
        consistency_required=r.consistency_required,
        notes=list(r.assumptions_checked),
        target=None if target is None else list(target.values),
    )
    return out


def _x_args(p):
    p.add_argument("file")
    p.add_argument("--x", required=True, help="gamble name")


# --- commands ---------------------------------------------------------------


def cmd_check(doc, args):
    a = doc.assessment()
    rep = consistency.CHECKS[args.level](a)
    out = {"level": args.level, "verdict": rep.verdict, "gaps": rep.gaps,
           "failing_pair": rep.failing_pair, "pair_solution": rep.pair_solution,
           "witness": rep.witness, "notes": rep.notes}
    summary = f"{args.level}: {rep.verdict}"
    if rep.failing_pair:
        summary += f" (pair {rep.failing_pair[0]}, {rep.failing_pair[1]}: t={rep.pair_solution['t']:.6g})"
    return out, summary


def cmd_extend(doc, args):
    e = parse_expression(args.expr, doc)
    g = e.evaluate(doc.partition, doc.gamble_objects())
    sense = "max" if args.max else "min"
    value, p = consistency.credal_optimum(consistency.CredalPolytope(doc.assessment()), g, sense)
    name = "upper" if args.max else "lower"
    out = {"expr": args.expr, "sense": sense, "value": value, "argopt": p, "target": g.values,
           "bound": value, "direction": "==", "side": name}
    return out, f"{name} natural extension of {args.expr} = {value:.12g}"


def _bound_jensen(doc, a, g, args, improved):
    f = functions.from_name(args.f)
    lprX, uprX = _envelope(a, g)
    if improved:
        rep = jensen.improved_jensen(g, lprX, uprX, f)
        reports = rep.reports()
        extra = {"m1": rep.m1, "m2": rep.m2, "combined": rep.combined, "reasons": rep.reasons}
        summary = f"improved Jensen on {args.f}({args.x}): m1={rep.m1}, m2={rep.m2}, combined={rep.combined:.12g}"
    else:
        reports = jensen.jensen_bounds(lprX, uprX, f, x=g)
        extra = {}
        best = [f"{r.fired}: {r.bound:.12g}" for r in reports if r.tightest]
        summary = f"Jensen on {args.f}({args.x}): " + "; ".join(best)
    return {"lprX": lprX, "uprX": uprX, "function": f.name, **extra}, reports, summary


def cmd_bound(doc, args):
    g = _lookup(doc, args.x)
    a = _with_target(doc.assessment(), args.x, g)
    kind = args.kind
    extra: dict = {}
    if kind in ("jensen", "improved-jensen"):
        if not args.f:
            raise InputError(f"bound {kind} needs --f")
        extra, reports, summary = _bound_jensen(doc, a, g, args, kind == "improved-jensen")
    elif kind == "markov":
        if args.a is None:
            raise InputError("bound markov needs --a")
        lprX, uprX = _envelope(a, g)
        if args.upper:
            reports = [tailbounds.markov_upper(uprX, args.a, gamble=g)]
        else:
            reports = [tailbounds.markov_lower(lprX, args.a, gamble=g)]
        extra = {"lprX": lprX, "uprX": uprX}
        summary = f"Markov: {reports[0].event_description} <= {reports[0].bound:.12g}"
    elif kind == "cantelli":
        if args.eps is None:
            raise InputError("bound cantelli needs --eps (a number or auto3sigma)")
        c = args.c if args.c is not None else _envelope(a, g)[0]
        if args.eps == "auto3sigma":
            rep = tailbounds.cantelli_imprecise(a, args.x, c, side=args.side, sigmas=3.0)
        else:
            rep = tailbounds.cantelli_imprecise(a, args.x, c, eps=_float(args.eps, "--eps"), side=args.side)
        reports = [rep]
        extra = {"c": c}
        summary = f"Cantelli: {rep.event_description} <= {rep.bound:.12g}"
    elif kind == "cantelli-coh":
        if args.eps is None:
            raise InputError("bound cantelli-coh needs --eps")
        eps = _float(args.eps, "--eps")
        vr = tailbounds.variances(a, args.x)
        lprX = _envelope(a, g)[0]
        reports = tailbounds.cantelli_coherent(a, args.x, eps, vr)
        reports.append(tailbounds.conjugate_cantelli(vr.lower_variance, eps, lprX, g))
        extra = {"lower_variance": vr.lower_variance, "upper_variance": vr.upper_variance, "coherent": vr.coherent}
        summary = "coherent Cantelli: " + "; ".join(f"{r.event_description} {r.direction} {r.bound:.6g}" for r in reports)
    elif kind == "chebyshev":
        if args.b is None:
            raise InputError("bound chebyshev needs --b")
        lprX, uprX = _envelope(a, g)
        center = lprX if args.center == "lower" else uprX
        dev = tailbounds.deviation_upper(a, args.x, center)
        reports = [tailbounds.chebyshev_like(dev, args.b, args.center, center, g)]
        extra = {"center": center, "upr_sq_dev": dev}
        summary = f"Chebyshev-like: {reports[0].event_description} <= {reports[0].bound:.12g}"
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown bound kind {kind!r}")
    return {"kind": kind, "x": args.x, **extra, "bounds": [_bound_json(r) for r in reports]}, summary


def cmd_variance(doc, args):
    g = _lookup(doc, args.x)
    a = _with_target(doc.assessment(), args.x, g)
    vr = tailbounds.variances(a, args.x)
    out = {"x": args.x, "lower_variance": vr.lower_variance, "upper_variance": vr.upper_variance,
           "argmin_c_lower": vr.argmin_c_lower, "argmin_c_upper": vr.argmin_c_upper,
           "witness_p1": vr.witness_p1, "coherent": vr.coherent, "notes": vr.method_notes}
    return out, f"variance of {args.x}: lower {vr.lower_variance:.12g}, upper {vr.upper_variance:.12g}"


def cmd_compare(doc, args):
    g = _lookup(doc, args.x)
    a = _with_target(doc.assessment(), args.x, g)
    lprX, uprX = _envelope(a, g)
    vr = tailbounds.variances(a, args.x)
    cr = tailbounds.compare_markov_cantelli(lprX, uprX, vr.lower_variance, args.eps, nonneg=g.is_nonnegative())
    out = {"x": args.x, "eps": args.eps, "lprX": lprX, "uprX": uprX, "lower_variance": vr.lower_variance,
           "delta": cr.delta, "eps1": cr.eps1, "eps2": cr.eps2, "preferred": cr.preferred,
           "rule": cr.preferred_for_eps, "markov_bound": cr.markov_bound, "cantelli_bound": cr.cantelli_bound,
           "markov_sufficient": cr.markov_sufficient}
    return out, f"eps2={cr.eps2:.12g}; preferred at eps={args.eps:g}: {cr.preferred}"


def cmd_verify(doc, args):
    try:
        with open(args.report, "rb") as fh:
            report = json.loads(fh.read().decode("utf-8"))
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read report {args.report!r}: {exc}") from None
    if not isinstance(report, dict):
        raise SchemaError("report must be a JSON object")
    items = report.get("bounds")
    if items is None and "bound" in report:
        items = [report]
    if not items:
        raise SchemaError("report contains no bounds to verify")
    a = doc.assessment()
    part = doc.partition
    certs = []
    for item in items:
        if item.get("bound") is None or item.get("target") is None:
            certs.append({"id": item.get("id"), "verdict": "skipped", "reason": "no bound or no target gamble"})
            continue
        if len(item["target"]) != part.n:
            raise SchemaError(f"bound {item.get('id')!r}: target has {len(item['target'])} values for {part.n} atoms")
        target = Gamble(part, item["target"])
        direction = item.get("direction")
        if direction == "==":
            lo, hi = _envelope(a, target)
            exact = lo if item.get("side") == "lower" else hi
            slack = -abs(exact - item["bound"])
            cert = SimpleNamespace(exact=exact, slack=slack, valid=slack >= -oracle.CERT_TOL)
        else:
            shim = SimpleNamespace(bound=float(item["bound"]), direction=direction, side=item.get("side"))
            cert = oracle.certify(a, shim, target)
        certs.append({"id": item.get("id"), "bound": item["bound"], "direction": direction,
                      "side": item.get("side"), "exact": cert.exact, "slack": cert.slack,
                      "verdict": "pass" if cert.valid else "fail"})
    verdict = "fail" if any(c["verdict"] == "fail" for c in certs) else "pass"
    n_ok = sum(c["verdict"] == "pass" for c in certs)
    return {"verdict": verdict, "certificates": certs}, f"verify: {n_ok}/{len(certs)} certified, verdict {verdict}"


def _float(text: str, flag: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise InputError(f"{flag} expects a number, got {text!r}") from None


# --- parser and entry point ---------------------------------------------------


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="prevbounds", description="Bounds and consistency checks for lower previsions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    c = sub.add_parser("check", help="consistency check")
    c.add_argument("--level", choices=sorted(consistency.CHECKS), default=consistency.COHERENCE)
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("extend", help="natural extension of an expression")
    e.add_argument("file")
    e.add_argument("--expr", required=True)
    e.add_argument("--max", action="store_true", help="upper envelope instead of lower")
    e.set_defaults(func=cmd_extend)

    b = sub.add_parser("bound", help="Jensen-type or tail bounds")
    b.add_argument("kind", choices=["jensen", "improved-jensen", "markov", "cantelli", "cantelli-coh", "chebyshev"])
    _x_args(b)
    b.add_argument("--f", help="function id, e.g. square, power:3, exp, sqrt, neg:exp")
    b.add_argument("--a", type=float, help="Markov threshold")
    b.add_argument("--upper", action="store_true", help="Markov bound on the upper probability")
    b.add_argument("--c", type=float, help="Cantelli centre (default: lower prevision of X)")
    b.add_argument("--eps", help="deviation; 'auto3sigma' for Cantelli means 3 * sqrt(upr((X-c)^2))")
    b.add_argument("--side", choices=["below", "above"], default="below")
    b.add_argument("--b", type=float, help="Chebyshev-like deviation threshold")
    b.add_argument("--center", choices=["lower", "upper"], default="lower")
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("variance", help="lower and upper variance")
    _x_args(v)
    v.set_defaults(func=cmd_variance)

    m = sub.add_parser("compare", help="Markov versus Cantelli crossover")
    _x_args(m)
    m.add_argument("--eps", type=float, required=True)
    m.set_defaults(func=cmd_compare)

    f = sub.add_parser("verify", help="certify a saved report against exact envelopes")
    f.add_argument("file")
    f.add_argument("--report", required=True)
    f.set_defaults(func=cmd_verify)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    command = None

    def emit(obj):
        stdout.write(dumps({"schema": SCHEMA, "command": command, **obj}) + "\n")

    def fail(code, kind, message):
        emit({"error": {"type": kind, "message": message, "exit_code": code}})
        stderr.write(f"error: {message}\n")
        return code

    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        return fail(EXIT_USAGE, "UsageError", str(exc))
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    command = args.command
    try:
        doc = load_document(args.file)
        out, summary = args.func(doc, args)
    except OSError as exc:
        return fail(EXIT_USAGE, type(exc).__name__, str(exc))
    except InfeasibleError as exc:
        return fail(EXIT_INFEASIBLE, type(exc).__name__, str(exc))
    except (InputError, PrevBoundsError, KeyError) as exc:
        return fail(EXIT_USAGE, type(exc).__name__, str(exc))
    emit(out)
    stderr.write(summary + "\n")
    return EXIT_FAIL if out.get("verdict") == "fail" else EXIT_OK


def main() -> None:
    sys.exit(run())
