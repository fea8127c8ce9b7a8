"""``grlocal`` command line.

Every command prints ``key=value`` records (or a human table) and ends with
a ``status=`` record.  Exit codes: 0 success, 2 precondition error, 3 internal
invariant violation (or a failed check).
"""

from __future__ import annotations

import argparse
import sys

from . import gmodule, resolve
from .errors import InvariantError, PreconditionError
from .fileformat import load
from .gring import associativity_defects, check_local_axioms


class CheckFailed(InvariantError):
    pass


def _record(**kw) -> str:
    return " ".join(f"{k}={v}" for k, v in kw.items())


def _fmt_value(v) -> str:
    return str(v).replace(" ", "")


class Output:
    def __init__(self, stream):
        self.stream = stream

    def __call__(self, line=""):
        self.stream.write(line + "\n")

    def rec(self, **kw):
        self(_record(**{k: _fmt_value(v) for k, v in kw.items()}))


# -- commands --------------------------------------------------------------------


def cmd_check(ws, args, out):
    ring = ws.ring
    out.rec(ring=ring.describe().replace(" ", "_").replace(";", ""))
    report = check_local_axioms(ring, samples=args.samples, seed=args.seed)
    for c in report.checks:
        out.rec(check=c.name, passed=str(c.passed).lower(), checked=c.checked)
        if c.counterexample:
            out.rec(check=c.name, counterexample=c.counterexample)
    defects = associativity_defects(ring, limit=1)
    out.rec(check="associativity", passed=str(not defects).lower())
    ok = report.ok and not defects
    out.rec(status="ok" if ok else "fail")
    if not ok:
        raise CheckFailed("locality checks failed")


def _module(ws, args):
    if not args.module:
        raise PreconditionError("--module is required")
    return ws.module(args.module)


def cmd_mingen(ws, args, out):
    M = _module(ws, args)
    mon = ws.ring.monoid
    if args.genset:
        G, omega = ws.genset(args.genset)
        if G is not M:
            raise PreconditionError(f"generating set {args.genset} belongs to another module")
        out.rec(genset=args.genset, size=len(omega), minimal=str(gmodule.is_minimal(omega, M)).lower())
        gens = gmodule.minimize(omega, M)
    else:
        gens = gmodule.minimal_generators(M)
    for i, v in enumerate(gens):
        out.rec(index=i + 1, degree=mon.format(v.degree), element=str(v))
    out.rec(count=len(gens), status="ok")


def _betti_table(table: resolve.BettiTable, mon, out, fmt):
    if fmt == "records":
        for (i, g), c in sorted(table.entries.items(), key=lambda t: (t[0][0], mon.key(t[0][1]))):
            out.rec(i=i, degree=mon.format(g), count=c)
        return
    totals = table.totals()
    degs = table.degrees(mon)
    width = max([len("degree"), len("total")] + [len(mon.format(g)) for g in degs])
    cols = range(len(totals))
    out("degree".ljust(width) + "".join(f"{i:>5}" for i in cols))
    for g in degs:
        cells = "".join(f"{table[(i, g)] or '.':>5}" for i in cols)
        out(mon.format(g).ljust(width) + cells)
    out("total".ljust(width) + "".join(f"{t:>5}" for t in totals))


def cmd_resolve(ws, args, out):
    M = _module(ws, args)
    res = resolve.minimal_resolution(M, args.steps)
    problems = resolve.check_resolution(res)
    if problems:
        raise InvariantError("; ".join(problems))
    mon = ws.ring.monoid
    for k, phi in enumerate(res.differentials, start=1):
        for j, v in enumerate(phi.images):
            out.rec(map=k, source=j + 1, degree=mon.format(v.degree), image=str(v).replace(" ", ""))
    _betti_table(res.betti(), mon, out, args.format)
    out.rec(length=res.length, status=res.status.value, certainty=res.certainty.value)


def cmd_betti(ws, args, out):
    M = _module(ws, args)
    res = resolve.minimal_resolution(M, args.steps)
    _betti_table(res.betti(), ws.ring.monoid, out, args.format)
    out.rec(status=res.status.value, certainty=res.certainty.value)


def cmd_tor(ws, args, out):
    M = _module(ws, args)
    res = resolve.minimal_resolution(M, args.steps)
    dims = resolve.tor_dims(M, resolution=res)
    if dims != res.betti().entries:
        raise InvariantError("Tor dimensions disagree with the Betti table")
    _betti_table(resolve.BettiTable(dims), ws.ring.monoid, out, args.format)
    out.rec(status=res.status.value, certainty=res.certainty.value)


def _dimension(rep: resolve.DimensionReport, out, **extra):
    out.rec(**extra, value=rep.value, certainty=rep.certainty.value, status=rep.status.value)


def cmd_pdim(ws, args, out):
    M = _module(ws, args)
    _dimension(resolve.pdim(M, args.steps), out)


def cmd_gldim(ws, args, out):
    rep = resolve.gldim(ws.ring, args.steps)
    if args.exhaustive:
        sweep = resolve.cyclic_sweep(ws.ring, args.steps)
        agree = sweep.supremum == rep.value
        out.rec(sweep_ideals=sweep.ideals, sweep_supremum=sweep.supremum, agrees=str(agree).lower())
        if not agree:
            raise InvariantError("cyclic sweep supremum differs from pdim D")
    _dimension(rep, out)


def cmd_verify(ws, args, out):
    from .verify import run_suites

    results = run_suites(ws, seed=args.seed, samples=args.samples, steps=args.steps)
    failed = 0
    for r in results:
        out.rec(suite=r.name, checked=r.checked, failures=r.failures, skipped=r.skipped)
        for msg in r.messages[:3]:
            out.rec(suite=r.name, detail=msg.replace(" ", "_"))
        failed += r.failures
    out.rec(status="ok" if not failed else "fail")
    if failed:
        raise CheckFailed(f"{failed} property failures")


COMMANDS = {
    "check": cmd_check,
    "mingen": cmd_mingen,
    "resolve": cmd_resolve,
    "betti": cmd_betti,
    "pdim": cmd_pdim,
    "gldim": cmd_gldim,
    "tor": cmd_tor,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grlocal", description="Graded local rings: generators, resolutions, Betti numbers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help, module=False, steps=False, fmt=False):
        p = sub.add_parser(name, help=help)
        p.add_argument("ring_file")
        if module:
            p.add_argument("--module", required=True)
        if steps:
            p.add_argument("--steps", type=int, default=resolve.DEFAULT_STEPS)
        if fmt:
            p.add_argument("--format", choices=["table", "records"], default="table")
        return p

    p = add("check", "locality checks")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p = add("mingen", "minimal homogeneous generators", module=True)
    p.add_argument("--genset", help="minimize this generating set instead")
    add("resolve", "minimal resolution", module=True, steps=True, fmt=True)
    add("betti", "graded Betti numbers", module=True, steps=True, fmt=True)
    add("pdim", "projective dimension", module=True, steps=True)
    p = add("gldim", "graded global dimension", steps=True)
    p.add_argument("--exhaustive", action="store_true")
    add("tor", "Tor dimensions against D", module=True, steps=True, fmt=True)
    p = add("verify", "property suites", steps=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    return parser


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    out = Output(stdout)
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "steps", 0) < 0:
            raise PreconditionError("--steps must be nonnegative")
        ws = load(args.ring_file)
        COMMANDS[args.command](ws, args, out)
        return 0
    except CheckFailed as exc:
        stderr.write(f"error: {exc}\n")
        return 3
    except InvariantError as exc:
        stderr.write(f"internal error: {exc}\n")
        out.rec(status="invariant_violation")
        return 3
    except (PreconditionError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        out.rec(status="error")
        return 2


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
