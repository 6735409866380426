"""Command-line driver: ``frobsplit <command> [options]``.

Every command builds a report (JSON, schema ``frobsplit-report/1``) of
named checks.  Exit status: 0 pass, 1 fail, 2 inconclusive, 64 usage.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time

from . import __version__
from .algebra import GroundField, PolySyntaxError, Polynomial, VarSet, is_prime, parse_poly, random_polynomial, scan_identifiers
from .cartier import (
    NormalizerNotFound,
    compatibly_splits,
    dual_trace,
    frobenius_decompose,
    is_splitting,
    normalize,
)
from .covers import (
    Atlas,
    cocycle_check,
    grading_check,
    index_set,
    index_label,
    lift_hyperbolic,
    lift_hypersurface,
    splitting_axiom_check,
    well_defined_ratio,
)
from .families import BUILTINS, builtin_ideal
from .groebner import Ideal, Limits, ResourceLimitExceeded, fedder_witness, krull_dim
from .invariants import (
    determinantal_ideal,
    dim_determinantal,
    dims_sl,
    label,
    make_matrix,
    presentation_so,
    presentation_sl,
    sl_generators,
    so_generators,
    verify_invariance_sl,
    verify_invariance_so_lie,
    well_definedness_quadruples,
)

SCHEMA = "frobsplit-report/1"
EXIT = {"pass": 0, "fail": 1, "inconclusive": 2}
USAGE_EXIT = 64
STATUSES = ("pass", "fail", "inconclusive", "not-testable")
MAX_N, MAX_MQ = 3, 4


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


class Report:
    """Accumulates checks for one run; the only mutable state of a command."""

    def __init__(self, command: str, spec: dict):
        self.command = command
        self.spec = spec
        self.checks: list = []
        self.data: dict = {}
        self.forced: str | None = None
        self.elapsed: float | None = None

    def check(self, name: str, status, witness: str | None = None):
        if isinstance(status, bool):
            status = "pass" if status else "fail"
        assert status in STATUSES, status
        entry = {"name": name, "status": status}
        if witness:
            entry["witness"] = witness
        self.checks.append(entry)
        return status == "pass"

    @property
    def status(self) -> str:
        found = {c["status"] for c in self.checks}
        if "fail" in found:
            return "fail"
        if self.forced:
            return self.forced
        if "inconclusive" in found:
            return "inconclusive"
        return "pass"

    def to_json(self, elapsed: float | None = None) -> dict:
        out = {"schema": SCHEMA, "version": __version__, "command": self.command, "spec": self.spec}
        out.update(self.data)
        out["checks"] = self.checks
        out["status"] = self.status
        out["timings"] = {"total_seconds": round(elapsed, 6) if elapsed is not None else None}
        return out

    def summary(self) -> str:
        lines = [f"frobsplit {self.command}"]
        for c in self.checks:
            w = f"  [{_clip(str(c['witness']))}]" if "witness" in c else ""
            lines.append(f"  {c['status'].upper():13s}{c['name']}{w}")
        lines.append(f"status: {self.status}")
        return "\n".join(lines)


def _clip(text: str, width: int = 120) -> str:
    return text if len(text) <= width else text[: width - 3] + "..."


# argument types


def prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"not prime: {p}")
    return p


def nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def int_range(text: str) -> list[int]:
    """``"3"``, ``"2-4"`` or ``"2,4"`` (pieces may combine: ``"1,3-4"``)."""
    out: set = set()
    try:
        for piece in text.split(","):
            if "-" in piece:
                lo, hi = piece.split("-")
                out.update(range(int(lo), int(hi) + 1))
            else:
                out.add(int(piece))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return sorted(out)


def _limits(args) -> Limits:
    return Limits(args.max_pairs, args.max_basis)


def _axioms(report: Report, name: str, lift, args):
    if args.samples == 0:
        report.check(name, "pass", "vacuous: 0 samples")
        return
    rep = splitting_axiom_check(lift, args.samples, args.seed)
    if not rep.unit_ok:
        report.check(name, "fail", "psi(1) != 1")
    elif rep.counterexample:
        report.check(name, "fail", rep.counterexample)
    else:
        report.check(name, "pass", f"{rep.passed}/{rep.samples} samples, {rep.nontrivial} with psi(t) != 0")


def _base_splitting(fld, vars, f: Polynomial, limits: Limits):
    """Normalized splitting of ``F_p[vars]`` compatible with ``(f)``, found by Fedder + normalize."""
    res = fedder_witness(Ideal([f], limits=limits))
    if res.status != "fpure":
        raise LookupError(f"Fedder test on (f) is {res.status}")
    return normalize(res.witness, Ideal.zero(fld, vars))


# commands


def cmd_trace_check(args, report: Report):
    fld = GroundField(args.p)
    vs = VarSet([f"x{i + 1}" for i in range(args.vars)])
    rng = random.Random(args.seed)
    zero = Polynomial.zero(fld, vs)
    bad = {"decompose_roundtrip": None, "p_inverse_linearity": None, "additivity": None}
    for k in range(args.samples):
        g = random_polynomial(fld, vs, rng, args.max_degree, 4)
        h = random_polynomial(fld, vs, rng, args.max_degree, 8)
        if bad["decompose_roundtrip"] is None and frobenius_decompose(h).reassemble() != h:
            bad["decompose_roundtrip"] = f"sample {k}: h={h}"
        if bad["p_inverse_linearity"] is None and dual_trace(g ** args.p * h) - g * dual_trace(h) != zero:
            bad["p_inverse_linearity"] = f"sample {k}: g={g}, h={h}"
        if bad["additivity"] is None and dual_trace(g + h) != dual_trace(g) + dual_trace(h):
            bad["additivity"] = f"sample {k}: g={g}, h={h}"
    for name, witness in bad.items():
        if args.samples == 0:
            report.check(name, "pass", "vacuous: 0 samples")
        elif witness:
            report.check(name, "fail", witness)
        else:
            report.check(name, "pass", f"{args.samples} samples")
    if args.samples == 0:
        report.data["vacuous"] = True


def _parse_ideal(args, limits):
    if args.family and args.ideal:
        raise UsageError("give either --family or --ideal, not both")
    if args.family:
        try:
            return builtin_ideal(args.family, args.p, limits)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not args.ideal:
        raise UsageError(f"fedder needs --family ({', '.join(BUILTINS)}) or --ideal")
    vars = [v.strip() for v in args.vars.split(",")] if args.vars else None
    texts = [t for t in args.ideal.split(";") if t.strip()]
    if vars is None:
        seen: list = []
        for t in texts:
            seen += [v for v in scan_identifiers(t) if v not in seen]
        vars = seen
    try:
        vs = VarSet(vars)
        gens = [parse_poly(t, args.p, vs) for t in texts]
    except (PolySyntaxError, ValueError) as exc:
        raise UsageError(f"cannot parse ideal: {exc}") from None
    return Ideal(gens, vs, GroundField(args.p), limits=limits)


def cmd_fedder(args, report: Report):
    I = _parse_ideal(args, _limits(args))
    report.data["ideal"] = I.to_json()
    res = fedder_witness(I)
    report.data["result"] = res.status
    if res.status == "inconclusive":
        report.check("fedder", "inconclusive", res.detail)
        report.check("normalize", "not-testable", "no witness")
        return
    witness = str(res.witness) if res.witness is not None else res.detail
    report.check("fedder", "pass", f"{res.status}: {witness}")
    if res.status != "fpure":
        report.check("normalize", "not-testable", "not F-pure at the origin")
        return
    if args.no_normalize:
        return
    try:
        norm = normalize(res.witness, I)
    except NormalizerNotFound as exc:
        report.check("normalize", "inconclusive", str(exc))
        return
    cand = norm.candidate
    report.data["phi"] = cand.to_json()
    report.data["normalization"] = {"multiplier": str(norm.multiplier), "lambda": norm.scalar}
    report.check("normalize", "pass", f"mu={norm.multiplier}, lambda={norm.scalar}")
    sc = is_splitting(cand)
    report.check("splitting_verified", sc.ok, sc.reason)


def _check_bounds(n, *others):
    if n is not None and not 1 <= n <= MAX_N:
        raise UsageError(f"--n must be in 1..{MAX_N}")
    for v in others:
        if v is not None and not 1 <= v <= MAX_MQ:
            raise UsageError(f"--m/--q must be in 1..{MAX_MQ}")


def cmd_lift(args, report: Report):
    if args.p == 2:
        raise UsageError("lifts need p > 2")
    n = args.n if args.n is not None else 2
    _check_bounds(n, args.m, args.q)
    report.data["construction"] = args.kind
    report.data["seed"] = args.seed
    {"hypersurface": _lift_hypersurface, "chart": _lift_chart, "hyperbolic": _lift_hyperbolic}[args.kind](
        args, report, n
    )


def _lift_hypersurface(args, report, n):
    if args.family not in (None, "sym-det"):
        raise UsageError("hypersurface lift takes --family sym-det")
    if args.group not in (None, "so") or args.m not in (None, n):
        raise UsageError("hypersurface lift is the SO case m = n")
    fld = GroundField(args.p)
    M = make_matrix((n, n), "symmetric", fld)
    f = M.matrix.det()
    report.data["family"] = {"name": "sym-det", "n": n, "f": str(f)}
    norm = _base_splitting(fld, M.vars, f, _limits(args))
    phi = norm.candidate
    report.data["phi"] = phi.to_json()
    sc = is_splitting(phi)
    report.check("base_splitting", sc.ok, f"mu={norm.multiplier}; {sc.reason}")
    report.check("compatible_with_f", compatibly_splits(phi, Ideal([f])))
    lift = lift_hypersurface(phi, f)
    report.check("psi_one", lift(lift.one()) == lift.one())
    report.check("psi_u_p", lift(lift.u() ** args.p) == lift.u(), "psi(u^p) = u")
    _axioms(report, "axioms", lift, args)


def _lift_chart(args, report, n):
    if args.group not in (None, "so"):
        raise UsageError("chart lifts are built for --group so")
    m = args.m if args.m is not None else n + 1
    if m <= n:
        raise UsageError("chart lift needs m > n (m = n is 'lift hypersurface')")
    fld = GroundField(args.p)
    pres = presentation_so(fld, n, m)
    report.data["family"] = {"name": "so", "n": n, "m": m, "ideal": [str(g) for g in pres.ideal.generators]}
    pairs = len(pres.charts) ** 2
    report.check("chart_relations", "pass", f"p_IJ^2 = p_I p_J mod I for {pairs} pairs")
    res = fedder_witness(pres.ideal.with_limits(_limits(args)))
    if res.status != "fpure":
        report.check("base_splitting", "inconclusive" if res.status == "inconclusive" else "fail", res.detail)
        return
    norm = normalize(res.witness, pres.ideal)
    phi = norm.candidate
    report.data["phi"] = phi.to_json()
    sc = is_splitting(phi)
    report.check("base_splitting", sc.ok, f"mu={norm.multiplier}; {sc.reason}")
    if not sc.ok:
        return
    atlas = Atlas(phi, pres)
    for I in pres.charts:
        _axioms(report, f"axioms[{label(I)}]", atlas.lifts[I], args)
    for (i, j), agr in atlas.agreements():
        report.check(f"overlap[{label(i)},{label(j)}]", agr.agree, agr.witness or "agree")


def _lift_hyperbolic(args, report, n):
    if args.group not in (None, "sl") or any(v not in (None, n) for v in (args.m, args.q)):
        raise UsageError("hyperbolic lift is the SL case m = q = n")
    fld = GroundField(args.p)
    M = make_matrix((n, n), "generic", fld)
    f = M.matrix.det()
    report.data["family"] = {"name": "det", "n": n, "f": str(f)}
    norm = _base_splitting(fld, M.vars, f, _limits(args))
    phi = norm.candidate
    report.data["phi"] = phi.to_json()
    sc = is_splitting(phi)
    report.check("base_splitting", sc.ok, f"mu={norm.multiplier}; {sc.reason}")
    report.check("compatible_with_f", compatibly_splits(phi, Ideal([f])))
    lift = lift_hyperbolic(phi, f)
    cov = lift.cover
    p = args.p
    u, xi = cov.u(), cov.xi()
    zero = cov.element({})
    report.check("psi_one", lift(cov.one()) == cov.one())
    report.check("psi_u_p", lift(u ** p) == u, "psi(u^p) = u")
    report.check("psi_xi_p", lift(xi ** p) == xi, "psi(xi^p) = xi")
    report.check("psi_u_zero", lift(u) == zero, "psi(u) = 0")
    report.check("psi_xi_zero", lift(xi) == zero, "psi(xi) = 0")
    report.check("psi_u_xi", lift(u * xi) == cov.base(phi(f)), "psi(u xi) = phi(f)")
    _axioms(report, "axioms", lift, args)
    if args.samples == 0:
        report.check("grading", "pass", "vacuous: 0 samples")
        return
    rng = random.Random(args.seed + 1)
    for k in range(args.samples):
        s = lift.sample(rng, 2 * p)
        if not grading_check(lift, s):
            report.check("grading", "fail", f"sample {k}: {s!r}")
            break
    else:
        report.check("grading", "pass", f"{args.samples} samples")


def cmd_cocycle(args, report: Report):
    n = args.n if args.n is not None else 2
    m = args.m if args.m is not None else n + 1
    q = args.q if args.q is not None else m
    _check_bounds(n, m, q)
    if m < n or q < n:
        raise UsageError("cocycle needs m, q >= n")
    pres = presentation_sl(args.p, n, m, q)
    report.data["family"] = {"name": "sl", "n": n, "m": m, "q": q}
    quads = sum(1 for _ in well_definedness_quadruples(pres))
    report.check("well_definedness", "pass", f"{quads} quadruples modulo I_{n + 1}")
    idx = index_set(pres)
    bad = [(a, b) for a, b in itertools.product(idx, repeat=2) if not well_defined_ratio(pres, a, b)]
    report.check(
        "ratio_chart_independence",
        not bad,
        f"{index_label(bad[0][0])},{index_label(bad[0][1])}" if bad else f"{len(idx) ** 2} pairs",
    )
    triples = list(itertools.product(idx, repeat=3))
    if args.triples and args.triples < len(triples):
        rng = random.Random(args.seed)
        triples = sorted(rng.sample(triples, args.triples))
    counts = {"pass": 0, "not-testable": 0}
    for t in triples:
        res = cocycle_check(pres, *t)
        if res.status == "fail":
            report.check("cocycle", "fail", res.witness)
            return
        counts[res.status] += 1
    if not triples:
        report.check("cocycle", "pass", "vacuous: 0 triples")
    else:
        report.check("cocycle", "pass", f"{counts['pass']} triples pass, {counts['not-testable']} not testable")


def cmd_invariants(args, report: Report):
    group = args.group or "sl"
    n = args.n if args.n is not None else 2
    m = args.m if args.m is not None else n
    q = args.q if args.q is not None else m
    _check_bounds(n, m, q)
    fld = GroundField(args.p)
    if group == "sl":
        mixed = min(m, q) < n <= max(m, q)
        if mixed and not args.experimental:
            raise UsageError("min(m,q) < n <= max(m,q) is experimental; pass --experimental")
        report.data["family"] = {"name": "sl", "n": n, "m": m, "q": q}
        _invariants_sl(fld, n, m, q, report)
        if mixed:
            report.check("experimental", "inconclusive", "mixed case: no outcome asserted")
            report.forced = "inconclusive"
    else:
        if fld.p == 2:
            raise UsageError("SO invariants need p > 2")
        report.data["family"] = {"name": "so", "n": n, "m": m}
        _invariants_so(fld, n, m, report)


def _invariants_sl(fld, n, m, q, report):
    gens = sl_generators(fld, n, m, q)
    XZ = gens.XZ
    bad = [
        (I, J) for I in gens.u for J in gens.xi if XZ.minor(I, J) != gens.u[I] * gens.xi[J]
    ]
    total = len(gens.u) * len(gens.xi)
    report.check("cauchy_binet", not bad, f"{label(bad[0][0])},{label(bad[0][1])}" if bad else f"{total} pairs")
    named = [(f"y{i + 1}{j + 1}", g) for (i, j), g in gens.products.items()]
    named += [(f"u{label(I)}", g) for I, g in gens.u.items()]
    named += [(f"xi{label(J)}", g) for J, g in gens.xi.items()]
    fails = [name for name, g in named if not verify_invariance_sl(g, n, m, q)]
    report.check("unipotent_invariance", not fails, ",".join(fails) if fails else f"{len(named)} generators")
    x11 = Polynomial.variable(fld, gens.vars, gens.vars.names[0])
    report.check("control_not_invariant", not verify_invariance_sl(x11, n, m, q), f"{gens.vars.names[0]} moves")
    if m >= n and q >= n:
        presentation_sl(fld, n, m, q)
        report.check("presentation_relations", "pass", f"well-definedness modulo I_{n + 1}")


def _invariants_so(fld, n, m, report):
    gens = so_generators(fld, n, m)
    G = make_matrix((m, m), "symmetric", fld).matrix.substitute(
        {f"y{i + 1}{j + 1}": g for (i, j), g in gens.gram.items()}
    )
    bad = [(I, J) for I in gens.u for J in gens.u if G.minor(I, J) != gens.u[I] * gens.u[J]]
    total = len(gens.u) ** 2
    report.check("gram_minors", not bad, f"{label(bad[0][0])},{label(bad[0][1])}" if bad else f"{total} pairs")
    named = [(f"y{i + 1}{j + 1}", g) for (i, j), g in gens.gram.items()]
    named += [(f"u{label(I)}", g) for I, g in gens.u.items()]
    fails = [name for name, g in named if not verify_invariance_so_lie(g, n, m)]
    report.check("rotation_invariance", not fails, ",".join(fails) if fails else f"{len(named)} generators")
    x11 = Polynomial.variable(fld, gens.vars, gens.vars.names[0])
    report.check("control_not_invariant", not verify_invariance_so_lie(x11, n, m), f"{gens.vars.names[0]} moves")
    if m >= n:
        pres = presentation_so(fld, n, m)
        report.data["presentation"] = pres.to_json()
        report.check("presentation_relations", "pass", f"p_IJ^2 = p_I p_J for {len(pres.charts) ** 2} pairs")


KRULL_FEASIBLE = 9  # ambient variables for the Groebner cross-check


def cmd_dims(args, report: Report):
    rows = []
    for n, m, q in itertools.product(args.n or [2], args.m or [3], args.q or [3]):
        if m < n or q < n:
            continue
        d = dims_sl(n, m, q)
        rows.append({"n": n, "m": m, "q": q, **d.to_json()})
        tag = f"{n},{m},{q}"
        for side, big, codim in (("Zu", m, d.codimZu), ("Zxi", q, d.codimZxi)):
            if big > n:
                report.check(f"codim{side}[{tag}]", codim >= 2, f"codim {codim}")
            else:
                report.check(f"codim{side}[{tag}]", "not-testable", f"needs {'m' if side == 'Zu' else 'q'} > n")
        if m * q <= KRULL_FEASIBLE:
            Y = make_matrix((m, q), "generic", 3).matrix
            kd = krull_dim(determinantal_ideal(Y, n + 1))
            want = dim_determinantal(n, m, q)
            report.check(f"dimY_krull[{tag}]", kd == want, f"formula {want}, Groebner {kd}")
    report.data["dimensions"] = rows
    if not rows:
        report.check("grid", "pass", "vacuous: no (n,m,q) with m,q >= n")


# parser


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("--p", type=prime, default=3, help="characteristic (default 3)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-pairs", type=int, default=10 ** 6)
    common.add_argument("--max-basis", type=int, default=10 ** 4)
    common.add_argument("--out", help="write the JSON report here")
    common.add_argument("--json-only", action="store_true", help="print the JSON report only")

    parser = Parser(prog="frobsplit", description="Frobenius splitting checks over F_p.")
    parser.add_argument("--version", action="version", version=f"frobsplit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    sp = sub.add_parser("trace-check", parents=[common], help="dual trace property suite")
    sp.add_argument("--vars", type=int, default=2, help="number of variables")
    sp.add_argument("--samples", type=nonneg, default=200)
    sp.add_argument("--max-degree", type=int, default=8)
    sp.set_defaults(func=cmd_trace_check)

    sp = sub.add_parser("fedder", parents=[common], help="Fedder F-purity test and normalization")
    sp.add_argument("--family", help=f"builtin: {', '.join(BUILTINS)}")
    sp.add_argument("--ideal", help="generators separated by ';'")
    sp.add_argument("--vars", help="comma-separated variable names")
    sp.add_argument("--no-normalize", action="store_true")
    sp.set_defaults(func=cmd_fedder)

    sp = sub.add_parser("lift", parents=[common], help="lift a splitting to a cover")
    sp.add_argument("kind", choices=["chart", "hypersurface", "hyperbolic"])
    sp.add_argument("--group", choices=["so", "sl"])
    sp.add_argument("--family")
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--samples", type=nonneg, default=100)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("cocycle", parents=[common], help="SL transition cocycle")
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--triples", type=nonneg, default=0, help="sample this many triples (0 = all)")
    sp.set_defaults(func=cmd_cocycle)

    sp = sub.add_parser("invariants", parents=[common], help="generator identities and invariance")
    sp.add_argument("--group", choices=["so", "sl"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--experimental", action="store_true")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("dims", parents=[common], help="dimension and codimension table")
    sp.add_argument("--n", type=int_range)
    sp.add_argument("--m", type=int_range)
    sp.add_argument("--q", type=int_range)
    sp.set_defaults(func=cmd_dims)
    return parser


_NOT_ECHOED = {"func", "out", "json_only"}


def run(argv=None):
    """Parse ``argv`` and run the command; returns ``(args, report, exit_code)``.

    Usage errors raise ``SystemExit(64)``.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    spec = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED}
    report = Report(args.command, spec)
    start = time.perf_counter()
    try:
        args.func(args, report)
    except UsageError as exc:
        parser.error(str(exc))
    except ResourceLimitExceeded as exc:
        report.check("resources", "inconclusive", str(exc))
    except LookupError as exc:
        report.check("construction", "inconclusive", str(exc))
    report.elapsed = time.perf_counter() - start
    return args, report, EXIT[report.status]


def main(argv=None) -> int:
    try:
        args, report, code = run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    text = json.dumps(report.to_json(report.elapsed), indent=2, ensure_ascii=False)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.json_only:
        print(text)
    else:
        print(report.summary())
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
