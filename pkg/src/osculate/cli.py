"""Command-line entry point: ``osculate {enumerate,series,verify}``.

Exit codes: 0 success, 1 a residual was nonzero or an internal assertion
tripped, 2 invalid arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import closed_forms as cf
from . import kernel as kv
from .report import IdentityReport
from .enumerator import Mode, WalkerSystem, complete_gf, enumerate_dp
from .series import (
    BadConstantTerm,
    NonInvertibleConstantTerm,
    NonzeroLowOrderTerm,
    NonzeroValuation,
    WindowOverflow,
    Laurent,
    solve_T,
    solve_X,
    solve_Y0,
    to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

OSCULATING_EXCLUSION = "osculating closed forms hold only for (i,j) ≠ (0,0)"

# --order defaults per check, sized so that `verify all` stays well inside
# a few minutes on one core
DEFAULT_ORDERS = {
    "main-eq": 8,
    "orbit": 8,
    "framed-system": 8,
    "boundary": 8,
    "quasivicious": 8,
    "refined": 8,
    "prop2": 8,
    "prop1": 20,
    "prop3": 14,
    "gv": 8,
    "baxter": 12,
    "ode": 30,
    "two-walker": 25,
}
CHECKS = tuple(DEFAULT_ORDERS)

SERIES_NAMES = (
    "T",
    "X",
    "Y0",
    "baxter",
    "osculating-length",
    "vicious-length",
    "osculating-refined",
    "vicious-complete",
    "osculating-complete",
)

# errors that mean a computation contradicted itself, not bad input
INTERNAL_ERRORS = (
    AssertionError,
    ArithmeticError,
    WindowOverflow,
    NonInvertibleConstantTerm,
    BadConstantTerm,
    NonzeroLowOrderTerm,
    NonzeroValuation,
)


class UsageError(Exception):
    pass


def parse_start(text):
    try:
        gaps = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--start expects comma separated integers, got {text!r}") from None
    if len(gaps) not in (1, 2):
        raise UsageError("--start takes one gap (two walkers) or two gaps (three walkers)")
    if any(g < 0 for g in gaps):
        raise UsageError(f"start gaps must be nonnegative, got {text}")
    return gaps


def _pair(gaps, what):
    if len(gaps) != 2:
        raise UsageError(f"{what} needs a three-walker start i,j")
    return gaps


def resolve_jobs(value):
    if value is None:
        env = os.environ.get("OSCULATE_JOBS")
        if env is None:
            return 1
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"OSCULATE_JOBS must be an integer, got {env!r}") from None
    if value < 1:
        raise UsageError("--jobs must be at least 1")
    return value


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- enumerate ---------------------------------------------------------------

def cmd_enumerate(args):
    gaps = parse_start(args.start)
    mode = Mode(args.mode)
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    if mode is Mode.VICIOUS and 0 in gaps:
        raise UsageError("vicious walkers need positive start gaps (a zero gap has no configurations)")
    table = enumerate_dp(WalkerSystem(gaps, mode), args.n, track_position=args.position)
    if args.format == "csv":
        text = table.to_csv()
    elif args.format == "json":
        text = _dump_json(table.to_json())
    else:
        rows = [table.header()] + [[str(v) for v in row] for row in table.rows()]
        widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
        text = "".join(" ".join(v.rjust(w) for v, w in zip(r, widths)) + "\n" for r in rows)
    _emit(text, args.output)
    return EXIT_OK


# -- series ------------------------------------------------------------------

def _osculating_start(args):
    i, j = _pair(parse_start(args.start), args.name)
    if (i, j) == (0, 0):
        raise UsageError(OSCULATING_EXCLUSION)
    return i, j


def build_series(args):
    name, N = args.name, args.order
    if name == "T":
        return solve_T(N)
    if name == "X":
        return solve_X(N)
    if name == "Y0":
        return solve_Y0(N)
    if name == "baxter":
        return cf.baxter_numbers(N)
    if name == "osculating-length":
        return cf.osculating_length_gf(*_osculating_start(args), N)
    if name == "osculating-refined":
        return cf.osculation_refined_gf(*_osculating_start(args), N)
    if name == "vicious-length":
        return cf.vicious_length_gf(*_pair(parse_start(args.start), name), N)
    if name == "vicious-complete":
        return cf.vicious_complete_gf(*_pair(parse_start(args.start), name), N)
    if name == "osculating-complete":
        return cf.osculating_complete_gf(*_osculating_start(args), N)
    raise UsageError(f"unknown series {name!r}")


def _scalar_text(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def cmd_series(args):
    if args.order < 0:
        raise UsageError("--order must be nonnegative")
    result = build_series(args)
    if isinstance(result, list):
        # b_1 .. b_order
        coeffs, univariate = result, True
    else:
        coeffs = list(result.coeffs)
        univariate = not any(isinstance(c, Laurent) for c in coeffs)
    if args.format == "json":
        if isinstance(result, list):
            obj = {"name": args.name, "first_index": 1, "values": [str(v) for v in result]}
        else:
            obj = {"name": args.name, **to_json(result)}
        text = _dump_json(obj)
    elif args.format == "csv":
        lines = []
        first = 1 if isinstance(result, list) else 0
        if univariate:
            lines.append("n,coeff")
            lines += [f"{n},{_scalar_text(c)}" for n, c in enumerate(coeffs, first)]
        else:
            lines.append("n,x,y,u,coeff")
            for n, c in enumerate(coeffs):
                for (ex, ey, eu), v in sorted(Laurent.coerce(c).items()):
                    lines.append(f"{n},{ex},{ey},{eu},{_scalar_text(v)}")
        text = "\n".join(lines) + "\n"
    else:
        if univariate:
            text = ",".join(_scalar_text(c) for c in coeffs) + "\n"
        else:
            text = "".join(f"t^{n}: {Laurent.coerce(c)!r}\n" for n, c in enumerate(coeffs))
    _emit(text, args.output)
    return EXIT_OK


# -- verify ------------------------------------------------------------------

def _skip_reason(check, gaps):
    """None if ``check`` applies to the start, else why it is skipped."""
    if check in ("orbit", "baxter", "ode", "two-walker"):
        return None
    if len(gaps) != 2:
        return "needs a three-walker start i,j"
    i, j = gaps
    if check in ("framed-system", "boundary", "refined", "prop1", "prop3") and (i, j) == (0, 0):
        return OSCULATING_EXCLUSION
    if check == "quasivicious" and (i < 1 or j < 1):
        return "quasi-vicious checks need i, j >= 1"
    return None


def _ode_reports(N):
    reports = [IdentityReport.from_residual(
        "12t - 6(1-2t)B - 2t(3-14t-8t^2)B' - t^2(1+t)(1-8t)B'' = 0", cf.baxter_ode_residual(N), check_name="ode")]
    O11 = complete_gf(enumerate_dp(WalkerSystem((1, 1), Mode.OSCULATING), N, track_osculations=False))
    W = O11.coefficient(1, 1)
    reports.append(IdentityReport.from_residual(
        "watermelon ODE for [x1y1]O_11 (enumerator)", cf.watermelon_ode_residual(W), check_name="ode"))
    return reports


def run_check(check, gaps, N, N1):
    """Reports for one named check; ``gaps`` is the parsed start."""
    if check == "orbit":
        return kv.check_orbit(N)
    if check == "baxter":
        return cf.baxter_identities(N, "closed") + cf.baxter_identities(N, "enumerator")
    if check == "ode":
        return _ode_reports(N)
    if check == "two-walker":
        return cf.two_walker_suite(gaps[0], N)
    i, j = gaps
    if check == "main-eq":
        return kv.check_main_equation(i, j, N)
    if check == "framed-system":
        return kv.check_framed_system(i, j, N, N1)
    if check == "boundary":
        return kv.check_boundary(i, j, N)
    if check == "quasivicious":
        return kv.check_quasivicious(i, j, N, N1)
    if check == "refined":
        return kv.check_refined_equation(i, j, N, N1)
    if check == "prop2":
        return cf.check_prop2(i, j, N) + kv.check_prop2_derivation(i, j, N)
    if check == "prop1":
        return cf.check_prop1(i, j, N)
    if check == "prop3":
        return cf.check_prop3(i, j, N)
    if check == "gv":
        return cf.check_gv(i, j, N)
    raise UsageError(f"unknown check {check!r}")


def _run_task(task):
    check, gaps, N, N1 = task
    try:
        return check, run_check(check, gaps, N, N1), None
    except INTERNAL_ERRORS as exc:
        return check, [], f"{type(exc).__name__}: {exc}"


def plan(check, gaps, order, N1):
    """(tasks, skipped) for a verify invocation; raises UsageError if inapplicable."""
    names = CHECKS if check == "all" else (check,)
    tasks, skipped = [], []
    for name in names:
        reason = _skip_reason(name, gaps)
        if reason:
            if check != "all":
                raise UsageError(f"{name}: {reason}")
            skipped.append({"check": name, "reason": reason})
            continue
        tasks.append((name, gaps, order if order is not None else DEFAULT_ORDERS[name], N1))
    return tasks, skipped


def cmd_verify(args):
    gaps = parse_start(args.start)
    if args.order is not None and args.order < 1:
        raise UsageError("--order must be at least 1")
    if args.uni_order < 1:
        raise UsageError("--uni-order must be at least 1")
    jobs = resolve_jobs(args.jobs)
    tasks, skipped = plan(args.check, gaps, args.order, args.uni_order)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    passed = True
    blocks = []
    for (name, _, N, _), (_, reports, error) in zip(tasks, results):
        ok = error is None and all(r.passed for r in reports)
        passed = passed and ok
        blocks.append({"check": name, "order": N, "passed": ok, "error": error, "reports": reports})
    if args.format == "json":
        obj = {
            "check": args.check,
            "start": list(gaps),
            "passed": passed,
            "skipped": skipped,
            "results": [
                {**{k: v for k, v in b.items() if k != "reports"}, "reports": [r.to_json() for r in b["reports"]]}
                for b in blocks
            ],
        }
        text = _dump_json(obj)
    else:
        lines = []
        for b in blocks:
            lines += [r.line() for r in b["reports"]]
            if b["error"]:
                lines.append(f"ERROR [{b['check']}] {b['error']}")
        lines += [f"SKIP [{s['check']}] {s['reason']}" for s in skipped]
        lines.append("all checks passed" if passed else "verification FAILED")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if passed else EXIT_FAIL


# -- argument parsing --------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="osculate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", help="count configurations by length, final gaps and osculations")
    p.add_argument("--mode", required=True, choices=[m.value for m in Mode])
    p.add_argument("--start", default="1,1", help="start gaps, e.g. 1,1 (three walkers) or 2 (two walkers)")
    p.add_argument("--n", type=int, required=True, help="maximum length")
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    p.add_argument("--position", action="store_true", help="also track the lowest walker's up-steps r")
    p.add_argument("--output")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("series", help="print a closed-form series")
    p.add_argument("name", choices=SERIES_NAMES)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--start", default="1,1")
    p.add_argument("--format", choices=("csv", "json", "text"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("verify", help="check identities coefficient by coefficient")
    p.add_argument("check", choices=CHECKS + ("all",))
    p.add_argument("--start", default="1,1")
    p.add_argument("--order", type=int, help="truncation order (default depends on the check)")
    p.add_argument("--uni-order", type=int, default=kv.UNIVARIATE_ORDER,
                   help="order for the univariate corollaries of the kernel checks")
    p.add_argument("--jobs", type=int, help="worker processes (default $OSCULATE_JOBS or 1)")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"osculate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except cf.BadStart as exc:
        print(f"osculate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except INTERNAL_ERRORS as exc:
        print(f"osculate: internal check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
