"""Command line: ``present``, ``hessenberg``, ``integrate``, ``verify``.

Exit codes: 0 success, 2 bad input or failed validation (including timeouts),
3 an internal invariant did not hold.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
import time
from contextlib import contextmanager

from . import __version__
from .acceptance import SUITES, run_suite
from .cohomology import SCHEMA_VERSION, equivariant_presentation, ordinary_presentation
from .errors import ZSchemeError
from .exactalg import qq, weighted_degree
from .fundscheme import zscheme_ideal
from .hessenberg import analyze
from .pushforward import equivariant_integral, fiber_sum_oracle, jacobian_class
from .regvariety import model_from_selector
from .rootsys import parse_omega, require_valid

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3


class InvariantViolation(Exception):
    def __init__(self, report: dict):
        super().__init__("invariant violated")
        self.report = report


def _max_bits(polys) -> int:
    return max((p.max_coeff_bits() for p in polys), default=0)


# ---------------------------------------------------------------------------
# commands


def cmd_present(args) -> dict:
    m = model_from_selector(args.model)
    eq = equivariant_presentation(m)
    ordinary = ordinary_presentation(m)
    z = zscheme_ideal(m)
    return {
        "model": m.label,
        "equivariant": eq.to_dict(),
        "ordinary": ordinary.to_dict(),
        "euler": eq.euler,
        "stats": {"max_coeff_bits": _max_bits(z.gb.elements)},
    }


def cmd_hessenberg(args) -> dict:
    space = parse_omega(args.omega, args.rank, from_condition=args.omega_from_condition)
    require_valid(space)
    rep = analyze(space)
    out = rep.to_dict()
    if not rep.ok:
        raise InvariantViolation(out)
    return out


def cmd_integrate(args) -> dict:
    selector = args.model or args.model_pos
    if not selector:
        raise ZSchemeError("MISSING_ARGUMENT", "a model selector is required")
    m = model_from_selector(selector)
    z = zscheme_ideal(m)
    expr = args.class_expr if args.class_expr is not None else args.class_pos
    if args.class_jacobian:
        f = jacobian_class(z).J
    elif expr is None:
        raise ZSchemeError("MISSING_ARGUMENT", "give a class expression or --class-jacobian")
    else:
        f = z.ring.parse(expr)
    res = equivariant_integral(z, f)
    checks = {}
    good = True
    for v0 in args.v0:
        oracle = fiber_sum_oracle(z, f, v0)
        agree = oracle == res.at(v0)
        good = good and agree
        checks[f"fiber_sum_v0={v0}"] = {"oracle": str(oracle), "agrees": agree}
    degree = res.expected_degree
    if res.value and degree is not None:
        ok = weighted_degree(res.value) == degree
        checks["degree_contract"] = ok
        good = good and ok
    out = {"model": m.label, "class": str(f), **res.to_dict(), "checks": checks}
    if not good:
        raise InvariantViolation(out)
    return out


def cmd_verify(args) -> dict:
    perturb = None
    if args.perturb:
        idx, _, factor = args.perturb.partition(":")
        try:
            perturb = (int(idx), qq(factor or "3"))
        except ValueError:
            raise ZSchemeError("BAD_ARGUMENT", f"--perturb expects INDEX:FACTOR, got {args.perturb!r}") from None
    results = run_suite(args.suite, perturb=perturb)
    out = {
        "suite": args.suite,
        "criteria": [r.to_dict(timings=args.timings) for r in results],
        "passed": all(r.passed for r in results),
    }
    if not args.json:
        for r in results:
            print(r.line())
            for d in r.details:
                if not d["passed"]:
                    print(f"    failed: {d['check']}" + (f" ({d['error']})" if "error" in d else ""))
    if not out["passed"]:
        raise InvariantViolation(out)
    return out


# ---------------------------------------------------------------------------
# plumbing


def _v0_list(text: str) -> list:
    try:
        values = [qq(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad v0 list {text!r}") from None
    if any(not v for v in values):
        raise argparse.ArgumentTypeError("v0 values must be nonzero")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    common.add_argument("--timeout", type=float, default=argparse.SUPPRESS, metavar="SECONDS")
    common.add_argument("--omega-from-condition", action="store_true", default=argparse.SUPPRESS,
                        help="read 'peterson' as the negative roots of height >= 2")
    common.add_argument("--timings", action="store_true", default=argparse.SUPPRESS,
                        help="include wall-clock timings in JSON (breaks byte-identical output)")

    p = argparse.ArgumentParser(prog="zscheme", parents=[common], description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("present", parents=[common], help="equivariant and ordinary presentations")
    s.add_argument("model", help="pn:N, flag:L or file:PATH")
    s.set_defaults(func=cmd_present)

    s = sub.add_parser("hessenberg", parents=[common], help="Hessenberg variety data")
    s.add_argument("rank", type=int)
    s.add_argument("omega", nargs="?", default="peterson", help="peterson, full, empty or '-a1,-a2'")
    s.set_defaults(func=cmd_hessenberg)

    s = sub.add_parser("integrate", parents=[common], help="equivariant push-forward of a class")
    s.add_argument("model_pos", nargs="?", metavar="MODEL")
    s.add_argument("class_pos", nargs="?", metavar="CLASS")
    s.add_argument("--model")
    s.add_argument("--class", dest="class_expr")
    s.add_argument("--class-jacobian", action="store_true")
    s.add_argument("--v0", type=_v0_list, default=[qq(1), qq(2)], help="comma list of nonzero rationals")
    s.set_defaults(func=cmd_integrate)

    s = sub.add_parser("verify", parents=[common], help="run acceptance criteria")
    s.add_argument("suite", nargs="?", default="all", choices=sorted(SUITES))
    s.add_argument("--perturb", metavar="INDEX:FACTOR", help="rescale one generator before the push-forward checks")
    s.set_defaults(func=cmd_verify)
    return p


@contextmanager
def _deadline(seconds):
    if not seconds:
        yield
        return

    def fire(signum, frame):
        raise TimeoutError

    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _emit(payload: dict, as_json: bool, stream=None):
    stream = stream or sys.stdout
    if as_json:
        stream.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        _print_human(payload, stream)


def _print_human(payload: dict, stream, indent: int = 0):
    pad = "  " * indent
    for key, value in payload.items():
        if isinstance(value, dict):
            stream.write(f"{pad}{key}:\n")
            _print_human(value, stream, indent + 1)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            stream.write(f"{pad}{key}:\n")
            for item in value:
                _print_human(item, stream, indent + 1)
                stream.write(f"{pad}  --\n")
        else:
            stream.write(f"{pad}{key}: {value}\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag, default in (("json", False), ("timeout", None), ("omega_from_condition", False), ("timings", False)):
        if not hasattr(args, flag):
            setattr(args, flag, default)
    started = time.perf_counter()
    envelope = {"schema_version": SCHEMA_VERSION, "command": args.command}
    try:
        with _deadline(args.timeout):
            result = args.func(args)
    except ZSchemeError as exc:
        _emit({**envelope, "ok": False, "error": exc.to_dict()}, args.json, sys.stdout if args.json else sys.stderr)
        return EXIT_INPUT
    except TimeoutError:
        err = {"code": "TIMEOUT", "message": f"exceeded {args.timeout} seconds"}
        _emit({**envelope, "ok": False, "error": err}, args.json, sys.stdout if args.json else sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        if args.command != "verify" or args.json:
            _emit({**envelope, "ok": False, "result": exc.report}, args.json)
        return EXIT_INVARIANT
    payload = {**envelope, "ok": True, "result": result}
    if args.timings:
        payload["seconds"] = round(time.perf_counter() - started, 3)
    if args.command != "verify" or args.json:
        _emit(payload, args.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
