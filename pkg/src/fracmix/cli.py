"""Command-line front end.

Problem files are JSON::

    {"kind": "T", "m": 1, "n": 1,
     "matrix": [["1", "-1"], ["1", "1"]],
     "p": ["4", "4/3"], "q": "2", "lambda": "1/2",
     "probe": {"family": "dilation", "params": ["1/2", "1", "2"], "grid": {"N": 256, "L": "4"}}}

For kind T the matrix is the full (m+1)n x (m+1)n array whose n x n blocks
are A_{i,j}; for kind J it is the mn x n stack D_1; ...; D_m; kind "riesz"
takes no matrix. "q" may be omitted and is then derived from the homogeneity
relation. Exit codes: 0 Bounded, 10 Unbounded, 20 OutsideTheoremScope,
2 input error; ``selftest`` exits 1 on a failed suite.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from typing import Any

from . import __version__
from .decide import (DomainError, ProblemJ, ProblemT, Status, Verdict, decide_J, decide_riesz_classic,
                     decide_T)
from .exponents import Exponent, ExponentError, as_order, derive_q, exponent_vector
from .profile import NotFullRank, pivot_index_set, rank_profile_J, rank_profile_T, reduce_kernel
from .ratlinalg import BlockMatrix, ShapeError

EXIT = {Status.BOUNDED: 0, Status.UNBOUNDED: 10, Status.OUTSIDE: 20}
EXIT_INPUT = 2
MAX_M = 12  # the n=1 subset search is exponential in m


class InputError(ValueError):
    pass


# ---- problem files ------------------------------------------------------------------

class Problem:
    def __init__(self, kind: str, spec: ProblemT | ProblemJ | None, riesz: tuple | None, probe: dict | None):
        self.kind = kind
        self.spec = spec
        self.riesz = riesz
        self.probe = probe


def _field(doc: dict, key: str, required: bool = True):
    if key not in doc:
        if required:
            raise InputError(f"field '{key}': missing")
        return None
    return doc[key]


def _int_field(doc: dict, key: str) -> int:
    v = _field(doc, key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise InputError(f"field '{key}': expected a positive integer, got {v!r}")
    return v


def _wrap(key: str, fn, *args):
    try:
        return fn(*args)
    except (ExponentError, ShapeError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"field '{key}': {exc}") from exc


def parse_problem(text: str) -> Problem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    kind = _field(doc, "kind")
    if kind not in ("T", "J", "riesz"):
        raise InputError(f"field 'kind': expected T, J or riesz, got {kind!r}")
    n = _int_field(doc, "n")
    m = 1 if kind == "riesz" else _int_field(doc, "m")
    if m > MAX_M:
        raise InputError(f"field 'm': at most {MAX_M} blocks are supported")
    lam = _wrap("lambda", as_order, str(_field(doc, "lambda")))
    arity = {"T": m + 1, "J": m, "riesz": 1}[kind]
    p = _wrap("p", exponent_vector, [str(x) for x in _field(doc, "p")], arity)
    q_raw = _field(doc, "q", required=False)
    if q_raw is None:
        q = derive_q(p, lam, m, n)
        if q is None:
            raise InputError("field 'q': omitted and the homogeneity relation gives no admissible q")
    else:
        q = _wrap("q", Exponent.of, str(q_raw))
    probe = _field(doc, "probe", required=False)
    if probe is not None and not isinstance(probe, dict):
        raise InputError("field 'probe': expected an object")
    if kind == "riesz":
        return Problem(kind, None, (p[0], q, lam, n), probe)
    rows = _field(doc, "matrix")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("field 'matrix': expected an array of rows")
    mat = _wrap("matrix", BlockMatrix.from_rows, m, n, kind, [[str(x) for x in r] for r in rows])
    cls = ProblemT if kind == "T" else ProblemJ
    spec = _wrap("problem", cls, m, n, mat, p, q, lam)
    return Problem(kind, spec, None, probe)


def run_decide(prob: Problem) -> Verdict:
    if prob.kind == "riesz":
        return decide_riesz_classic(*prob.riesz)
    if prob.kind == "T":
        return decide_T(prob.spec)
    return decide_J(prob.spec)


# ---- reports ----------------------------------------------------------------------

def _num(x: float | None):
    return None if x is None else float(f"{x:.12g}")


def problem_echo(prob: Problem) -> dict:
    if prob.kind == "riesz":
        p, q, lam, n = prob.riesz
        return {"kind": "riesz", "n": n, "p": [str(p)], "q": str(q), "lambda": str(lam)}
    s = prob.spec
    mat = s.A if prob.kind == "T" else s.D
    return {"kind": prob.kind, "m": s.m, "n": s.n, "matrix": mat.base.to_strings(),
            "p": [str(x) for x in s.p], "q": str(s.q), "lambda": str(s.lam)}


def analysis_section(prob: Problem) -> dict:
    if prob.kind == "riesz":
        return {}
    s = prob.spec
    if prob.kind == "T":
        prof = rank_profile_T(s.A)
        out: dict[str, Any] = {"rankProfile": {"label": "r", "start": 2, "ranks": list(prof.ranks),
                                               "drops": list(prof.drops)}}
    else:
        prof = rank_profile_J(s.D)
        out = {"rankProfile": {"label": "gamma", "start": 1, "ranks": list(prof.ranks),
                               "drops": list(prof.drops)}}
    try:
        out["pivots"] = [list(t) for t in pivot_index_set(prof)]
    except NotFullRank as exc:
        out["pivots"] = None
        out["pivotsNote"] = str(exc)
    if prob.kind == "J":
        try:
            cf = reduce_kernel(s.D)
        except NotFullRank as exc:
            out["canonicalForm"] = None
            out["canonicalFormNote"] = str(exc)
        else:
            out["canonicalForm"] = {
                "selectedRows": {str(i): list(r) for i, r in sorted(cf.selected.items())},
                "P": cf.P.to_strings(),
                "PD": cf.PD.to_strings(),
                "certificate": cf.certificate(),
            }
    return out


def probe_section(prob: Problem, args) -> dict:
    from .numeric.probes import GridSpec, ratio_probe

    if prob.kind == "riesz":
        raise InputError("probes need a T or J problem")
    cfg = dict(prob.probe or {})
    family = args.family or cfg.get("family")
    if family is None:
        raise InputError("field 'probe.family': missing (or pass --family)")
    params = args.params.split(",") if args.params else cfg.get("params")
    gcfg = cfg.get("grid", {}) or {}
    N = args.grid_n or gcfg.get("N")
    L = args.grid_l or gcfg.get("L")
    eps = cfg.get("eps")
    try:
        grid = GridSpec(N=int(N) if N else None, L=float(Fraction(str(L))) if L else None,
                        out_N=gcfg.get("outN"), out_L=float(Fraction(str(gcfg["outL"]))) if "outL" in gcfg else None,
                        eps=Fraction(str(eps)) if eps is not None else None)
        rep = ratio_probe(prob.spec, family, params, grid, seed=args.seed)
    except (ValueError, ExponentError, DomainError) as exc:
        raise InputError(f"probe: {exc}") from exc
    return {
        "family": rep.family,
        "params": [str(t) for t in rep.params],
        "rows": [{"param": str(r.param), "outNorm": _num(r.out_norm), "inNorm": _num(r.in_norm),
                  "ratio": _num(r.ratio), "skipped": r.skipped} for r in rep.rows],
        "meta": {k: rep.meta[k] for k in ("inputGrid", "outputGrid", "seed", "problemHash", "droppedPairs",
                                          "method", "eps") if k in rep.meta},
    }


def build_report(raw: bytes, prob: Problem, verdict: Verdict, seed: int, analysis=None, probe=None) -> dict:
    rep: dict[str, Any] = {
        "toolVersion": __version__,
        "inputHash": hashlib.sha256(raw).hexdigest(),
        "seed": seed,
        "problem": problem_echo(prob),
        "verdict": verdict.to_dict(),
    }
    if analysis is not None:
        rep["analysis"] = analysis
    if probe is not None:
        rep["probe"] = probe
    return rep


def dump_report(rep: dict) -> str:
    return json.dumps(rep, indent=2, ensure_ascii=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---- commands -----------------------------------------------------------------------

def _load(args) -> tuple[bytes, Problem]:
    if not args.problem:
        raise InputError("--problem is required")
    try:
        with open(args.problem, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.problem}: {exc.strerror}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InputError("problem file is not UTF-8") from exc
    return raw, parse_problem(text)


def cmd_decide(args) -> int:
    raw, prob = _load(args)
    verdict = _wrap("lambda", run_decide, prob)
    _emit(dump_report(build_report(raw, prob, verdict, args.seed)), args.out)
    return EXIT[verdict.status]


def cmd_analyze(args) -> int:
    raw, prob = _load(args)
    verdict = _wrap("lambda", run_decide, prob)
    _emit(dump_report(build_report(raw, prob, verdict, args.seed, analysis=analysis_section(prob))), args.out)
    return EXIT[verdict.status]


def cmd_probe(args) -> int:
    raw, prob = _load(args)
    verdict = _wrap("lambda", run_decide, prob)
    probe = probe_section(prob, args)
    _emit(dump_report(build_report(raw, prob, verdict, args.seed, probe=probe)), args.out)
    return EXIT[verdict.status]


def cmd_selftest(args) -> int:
    from .selftest import run_all

    ok = True
    for res in run_all(args.seed):
        print(f"{res.name}: {res.passed} passed, {res.failed} failed")
        if not res.ok:
            ok = False
            print(f"  first failure: {res.first_failure}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracmix", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--problem", help="problem file (JSON)")
        sp.add_argument("--out", help="report path (default: stdout)")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled quadrature")

    for name, helptext in (("decide", "decide boundedness and write the verdict trace"),
                           ("analyze", "decision plus rank profile, pivots and canonical form")):
        common(sub.add_parser(name, help=helptext))
    sp = sub.add_parser("probe", help="run a numerical ratio probe")
    common(sp)
    sp.add_argument("--grid-n", type=int, help="cells per input axis")
    sp.add_argument("--grid-l", help="input halfwidth (rational)")
    sp.add_argument("--family", choices=["dilation", "translation", "logpower", "boxE"])
    sp.add_argument("--params", help="comma-separated rational parameters")
    st = sub.add_parser("selftest", help="run the seeded property suites")
    st.add_argument("--seed", type=int, default=0)
    return parser


COMMANDS = {"decide": cmd_decide, "analyze": cmd_analyze, "probe": cmd_probe, "selftest": cmd_selftest}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"fracmix: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"fracmix: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
