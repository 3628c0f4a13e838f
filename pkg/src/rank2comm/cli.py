"""``verifier`` command: run a job description and emit a JSON or text report.

Exit codes: 0 when every verdict passes, 2 on a mathematical obstruction,
1 on usage errors (bad arguments, unreadable or malformed spec).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction

from .dsl import JobSpec, build_potential, parse_spec
from .errors import (
    InsufficientTruncation,
    LogarithmRequired,
    NotQuantized,
    ObstructionError,
    Rank2Error,
    SpecError,
    XDependence,
)
from .exactalg import AffineForm, format_scalar
from .frobenius import indicial, no_log_check
from .hierarchy import (
    Violation,
    check_infinity,
    check_theorem_1_1,
    close,
    explore_conjecture,
    run,
)
from .potentials import PotentialClass
from .spectral import QPoly, curve

SCHEMA = 1
EXIT_PASS, EXIT_USAGE, EXIT_OBSTRUCTION = 0, 1, 2


class UsageError(Rank2Error):
    pass


def num(x) -> str:
    if isinstance(x, AffineForm):
        return str(x)
    if isinstance(x, int) and not isinstance(x, bool):
        x = Fraction(x)
    return format_scalar(x)


def _violation_dict(v: Violation) -> dict:
    return {
        "tag": v.tag,
        "status": "violation",
        "center": v.center,
        "k": v.k,
        "l": v.l,
        "exponent": v.exponent,
        "value": None if v.value is None else num(v.value),
        "detail": v.detail,
    }


def _obstruction_dict(ob) -> dict:
    return {
        "tag": ob.tag,
        "center": ob.center,
        "exponent": ob.exponent,
        "value": num(ob.form),
        "step": ob.step,
        "detail": ob.detail,
    }


def _empty_report(spec: JobSpec) -> dict:
    return {
        "schema": SCHEMA,
        "job": spec.job,
        "potential": spec.potential.constructor,
        "genus": spec.genus,
        "verdicts": [],
        "constants": {},
        "curve": None,
        "frobenius": [],
        "truncation": None,
        "obstructions": [],
        "status": "pass",
    }


def _fail(report, entry, code=EXIT_OBSTRUCTION):
    report["obstructions"].append(entry)
    report["status"] = "obstruction"
    return report, code


def _gate(report, p, g):
    verdict = check_theorem_1_1(p, g)
    if isinstance(verdict, Violation):
        report["verdicts"].append(_violation_dict(verdict))
        return _fail(report, _violation_dict(verdict))
    report["verdicts"].append({"tag": verdict.tag, "status": "pass",
                               "n": {c: n for c, n in sorted(verdict.n.items())}})
    if p.kind is PotentialClass.ENTIRE and not p.has_V:
        inf = check_infinity(p)
        if isinstance(inf, Violation):
            report["verdicts"].append(_violation_dict(inf))
            return _fail(report, _violation_dict(inf))
        report["verdicts"].append({"tag": inf.tag, "status": "pass"})
    return None


def _closure_and_curve(report, p, g, truncation):
    try:
        state = run(p, g, truncation)
    except ObstructionError as exc:
        return _fail(report, _obstruction_dict(exc.obstruction))
    report["truncation"] = None if state.order == float("inf") else state.order
    try:
        cl = close(state, p)
    except ObstructionError as exc:
        report["verdicts"].append({"tag": "closure", "status": "obstruction"})
        return _fail(report, _obstruction_dict(exc.obstruction))
    report["constants"] = {f"C{i}": num(v) for i, v in sorted(cl.constants.items())}
    centers = {}
    for c, info in sorted(cl.certificate["centers"].items()):
        centers[c] = {
            "principal_part_zero": info["principal_part_zero"],
            "tail_constant": info["tail_constant"],
            "checked_below": None if info["checked_below"] == float("inf") else info["checked_below"],
            "constant_term": None if info["constant_term"] is None else num(info["constant_term"]),
        }
    closed = cl.certificate["closed"]
    report["verdicts"].append({
        "tag": "closure",
        "status": "pass" if closed else "obstruction",
        "free": list(cl.free),
        "liouville": cl.certificate["liouville"],
        "centers": centers,
        "commuting_order": 4 * g + 2,
    })
    if not closed:
        return _fail(report, {"tag": "closure", "detail": "f_{g+1} not constant after solving"})

    curves = {}
    for c in p.centers():
        try:
            sc = curve(QPoly.from_closure(cl, c), state.V[c], state.W[c])
        except XDependence as exc:
            return _fail(report, {"tag": "curve", "center": c, "detail": str(exc)})
        except InsufficientTruncation as exc:
            return _fail(report, {"tag": "curve", "center": c, "detail": str(exc)}, EXIT_USAGE)
        curves[c] = sc
    first = curves[p.centers()[0]]
    agree = all(sc.coeffs == first.coeffs for sc in curves.values())
    report["curve"] = {
        "coeffs": [num(x) for x in first.coeffs],
        "degree": first.degree,
        "discriminant": num(first.discriminant),
    }
    report["verdicts"].append({
        "tag": "curve",
        "status": "pass" if agree else "obstruction",
        "x_independent": True,
        "centers_agree": agree,
        "nonsingular": bool(first.discriminant),
    })
    if not agree:
        return _fail(report, {"tag": "curve", "detail": "curve differs between centers"})
    return None


def _frobenius(report, spec, p):
    lambdas = spec.lambdas or (Fraction(0),)
    if p.kind is PotentialClass.ENTIRE:
        report["verdicts"].append({"tag": "Theorem1.5", "status": "pass", "detail": "no finite poles"})
        return None
    failed = None
    for c in p.centers():
        try:
            rep = no_log_check(p, c, lambdas, M=spec.truncation)
        except (NotQuantized, LogarithmRequired) as exc:
            return _fail(report, {"tag": "Theorem1.5", "center": c, "detail": str(exc)})
        data = indicial(p.local_expansions(1)[c].coeff(-4))
        report["truncation"] = max(v.solution.M for v in rep.verdicts) if rep.verdicts else spec.truncation
        for v in rep.verdicts:
            report["frobenius"].append({
                "pole": c,
                "lambda": num(v.lam),
                "branch": v.branch,
                "exponent_quadratic": [num(x) for x in data.factor(v.branch)],
                "status": "pass" if v.ok else "logarithm",
                "resonances": [{"m": r.m, "obstruction": num(r.obstruction), "free": r.free}
                               for r in v.resonances],
                "structural_zero": v.structural_zero,
                "residual_zero": v.residual_zero,
                "residual_checked_below": v.residual_order,
                "fm_checked": list(v.fm_checked),
                "fm_agrees": v.fm_agrees,
            })
        report["verdicts"].append({
            "tag": rep.tag,
            "status": "pass" if rep.ok else "logarithm",
            "center": c,
            "n": rep.n,
            "resonance_gap": data.gap,
            "branch_point": rep.branch_point,
        })
        if not rep.ok and failed is None:
            failed = {"tag": rep.tag, "center": c, "detail": "nonzero resonance obstruction"}
    if failed:
        return _fail(report, failed)
    return None


def _explore(report, spec, p):
    if spec.potential.constructor not in ("rational", "local"):
        raise UsageError("explore jobs need a rational or local potential")
    poles = [q.to_pole() for q in spec.potential.poles]
    out = explore_conjecture(poles, spec.truncation, potential=p)
    entry = {"tag": "Conjecture", "exploratory": True, "status": out["status"], "S": out.get("S")}
    for key in ("pole_conditions", "violation", "obstruction", "equations", "free",
                "principal_parts_vanish", "tail_constant"):
        if key in out:
            entry[key] = out[key]
    report["verdicts"].append(entry)
    report["constants"] = {f"C{i}": num(v) for i, v in sorted(out.get("constants", {}).items())}
    report["truncation"] = out.get("truncation")
    return None


def run_job(spec: JobSpec) -> tuple[dict, int]:
    """Execute ``spec``; returns the report and the exit code."""
    report = _empty_report(spec)
    p = build_potential(spec.potential)
    if spec.job == "explore":
        _explore(report, spec, p)
        return report, EXIT_PASS
    if spec.job == "frobenius":
        res = _gate(report, p, spec.genus)
        if res:
            return res
        res = _frobenius(report, spec, p)
        return res or (report, EXIT_PASS)
    if spec.genus is None:
        raise UsageError(f"{spec.job} jobs need a genus statement")
    if spec.job == "check":
        res = _gate(report, p, spec.genus)
        if res:
            return res
    res = _closure_and_curve(report, p, spec.genus, spec.truncation)
    return res or (report, EXIT_PASS)


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def to_text(report: dict) -> str:
    lines = [f"job: {report['job']}  potential: {report['potential']}  status: {report['status']}"]
    if report["truncation"] is not None:
        lines.append(f"truncation: {report['truncation']}")
    for v in report["verdicts"]:
        extras = ", ".join(f"{k}={v[k]}" for k in sorted(v) if k not in ("tag", "status") and v[k] not in (None, ""))
        lines.append(f"[{v['status'].upper()}] {v['tag']}" + (f": {extras}" if extras else ""))
    if report["constants"]:
        lines.append("constants: " + ", ".join(f"{k} = {v}" for k, v in report["constants"].items()))
    if report["curve"]:
        cs = report["curve"]["coeffs"]
        terms = " + ".join(f"({c})*z^{i}" for i, c in enumerate(cs) if c != "0/1") or "0"
        lines.append(f"curve: w^2 = {terms}")
        lines.append(f"discriminant: {report['curve']['discriminant']}")
    for f in report["frobenius"]:
        res = "; ".join(f"m={r['m']} obstruction={r['obstruction']}" for r in f["resonances"]) or "none"
        lines.append(f"frobenius {f['pole']} lambda={f['lambda']} {f['branch']}: {f['status']} (resonances: {res})")
    for ob in report["obstructions"]:
        lines.append("obstruction: " + ", ".join(f"{k}={ob[k]}" for k in sorted(ob) if ob[k] not in (None, "")))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verifier", description="Exact rank-2 commutativity verifier.")
    ap.add_argument("specfile", help="job description file ('-' for stdin)")
    ap.add_argument("--format", choices=("json", "text"), default=None)
    ap.add_argument("--truncation", type=int, default=None, metavar="N")
    ap.add_argument("--out", default=None, metavar="PATH")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.specfile == "-":
            text = sys.stdin.read()
        else:
            with open(args.specfile, encoding="utf-8") as fh:
                text = fh.read()
        spec = parse_spec(text)
        if args.truncation is not None:
            if args.truncation < 1:
                raise UsageError("--truncation must be >= 1")
            spec = replace(spec, truncation=args.truncation)
        report, code = run_job(spec)
    except (OSError, SpecError, UsageError, InsufficientTruncation) as exc:
        print(f"verifier: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    fmt = args.format or spec.format or "json"
    out = to_json(report) if fmt == "json" else to_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
