"""Command-line front end.

Usage errors exit with status 2, numerical failures with status 1 (a JSON
report is still printed).  Floats are written with 17 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence

from . import checks
from .errors import DomainError, HznError
from .hzn import hzn_eval
from .quadfield import IndefForm, field_report
from .values import TwistPair
from .zeta import zq


def fmt(v: float) -> str:
    return "%.17g" % v


def to_json(obj: Any) -> str:
    """JSON with insertion-ordered keys and 17-digit floats."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else json.dumps(str(obj))
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, complex):
        return to_json({"re": obj.real, "im": obj.imag})
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return to_json(obj.item())
    return json.dumps(str(obj))


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: List[dict] = field(default_factory=list)
    status: str = "ok"
    wall_time_ms: Optional[int] = None
    text: Optional[str] = None   # raw payload (CSV) printed instead of JSON

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "ok" else 1

    def add(self, label: str, value: complex, err: float | None = None, **extra):
        d = {"label": label, "re": float(complex(value).real), "im": float(complex(value).imag)}
        if err is not None:
            d["err"] = float(err)
        d.update(extra)
        self.outputs.append(d)

    def as_dict(self) -> dict:
        d = {"command": self.command, "inputs": self.inputs, "outputs": self.outputs,
             "status": self.status}
        if self.wall_time_ms is not None:
            d["wall_time_ms"] = self.wall_time_ms
        return d


class UsageError(Exception):
    pass


def _complex_arg(s: str) -> complex:
    parts = s.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {s!r}")


def _env_tol() -> Optional[float]:
    v = os.environ.get("HZN_TOL")
    if v is None:
        return None
    try:
        t = float(v)
    except ValueError:
        raise UsageError(f"HZN_TOL is not a float: {v!r}")
    if not t > 0:
        raise UsageError("HZN_TOL must be positive")
    return t


def _env_max_terms() -> Optional[int]:
    v = os.environ.get("HZN_MAX_TERMS")
    if v is None:
        return None
    try:
        return int(v)
    except ValueError:
        raise UsageError(f"HZN_MAX_TERMS is not an integer: {v!r}")


def read_twists(path: str) -> List[tuple]:
    """One `alpha beta` pair per line; '#' starts a comment."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise UsageError(f"{path}:{n}: expected two numbers")
            try:
                out.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise UsageError(f"{path}:{n}: not a number")
    if not out:
        raise UsageError(f"{path}: no twist pairs")
    return out


# ---------------------------------------------------------------- commands

def cmd_eval(a) -> RunReport:
    rep = RunReport("eval", {"k": a.k, "x": a.x, "alpha": a.alpha, "beta": a.beta, "route": a.route})
    v = hzn_eval(a.k, a.x, TwistPair.of(a.alpha, a.beta), route=a.route)
    rep.add("F", v.value.value, v.err_est)
    return rep


def cmd_zq(a) -> RunReport:
    rep = RunReport("zq", {"k": a.k, "w": a.w, "wp": a.wp, "alpha": a.alpha, "beta": a.beta,
                           "route": a.route})
    r = zq(a.k, IndefForm(a.w, a.wp), TwistPair.of(a.alpha, a.beta), route=a.route)
    rep.add("Z_Q", r.value.value, r.value.err, route=r.route, terms_used=r.terms_used)
    return rep


TABLE_COLUMNS = ["class_id", "alpha", "beta", "zcal_re", "zcal_im", "rhs_hklf_re",
                 "rhs_hklf_im", "abs_diff", "scaled_D_re", "scaled_D_im"]


def cmd_table(a) -> RunReport:
    twists = read_twists(a.twists) if a.twists else list(checks.TABLE_TWISTS)
    rep = RunReport("table", {"discriminant": a.discriminant, "k": a.k, "twists": twists})
    fd, cycles = checks.table_classes(a.discriminant)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(TABLE_COLUMNS)
    for ci, cyc in enumerate(cycles):
        for al, be in twists:
            row = checks.table_row(a.k, fd, cyc, al, be)
            z, h = row["direct"], row["hzn"]
            sD = fd.D * z
            w.writerow([ci, fmt(al), fmt(be), fmt(z.real), fmt(z.imag), fmt(h.real), fmt(h.imag),
                        fmt(abs(z - h)), fmt(sD.real), fmt(sD.imag)])
            rep.add(f"B{ci}", z, abs(z - h), alpha=al, beta=be)
    rep.text = buf.getvalue()
    return rep


def cmd_reduce(a) -> RunReport:
    rep = RunReport("reduce", {"discriminant": a.discriminant})
    rep.outputs.append(field_report(a.discriminant))
    return rep


def cmd_check(a) -> RunReport:
    tol = a.tol if a.tol is not None else _env_tol()
    rep = RunReport("check", {"suite": a.suite, "samples": a.samples, "tol": tol, "seed": a.seed})
    r = checks.run_suite(a.suite, samples=a.samples, seed=a.seed, tol=tol)
    for c in r.components:
        rep.outputs.append({"label": c.label, "max_residual": float(c.residual), "tol": float(c.tol),
                            "passed": c.passed})
    if not r.passed:
        rep.status = "failed"
        rep.outputs.append({"label": "details", "samples": r.details})
    return rep


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timing", action="store_true", help="include wall_time_ms in the report")
    p = argparse.ArgumentParser(prog="hzn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate F_k(x; alpha, beta)")
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--x", type=_complex_arg, required=True)
    e.add_argument("--alpha", type=float, required=True)
    e.add_argument("--beta", type=float, required=True)
    e.add_argument("--route", choices=["series", "integral"], default="series")
    e.set_defaults(fn=cmd_eval)

    z = sub.add_parser("zq", parents=[common], help="twisted zeta value of the form with roots w, w'")
    z.add_argument("--k", type=int, required=True)
    z.add_argument("--w", type=float, required=True)
    z.add_argument("--wp", type=float, required=True)
    z.add_argument("--alpha", type=float, required=True)
    z.add_argument("--beta", type=float, required=True)
    z.add_argument("--route", choices=["direct", "hzn"], default="direct")
    z.set_defaults(fn=cmd_zq)

    t = sub.add_parser("table", parents=[common], help="class zeta values as CSV")
    t.add_argument("--discriminant", type=int, default=12)
    t.add_argument("--k", type=int, default=2)
    t.add_argument("--twists", default=None, help="file with one 'alpha beta' pair per line")
    t.set_defaults(fn=cmd_table)

    r = sub.add_parser("reduce", parents=[common], help="reduction theory report as JSON")
    r.add_argument("--discriminant", type=int, required=True)
    r.set_defaults(fn=cmd_reduce)

    c = sub.add_parser("check", parents=[common], help="run a seeded property suite")
    c.add_argument("--suite", choices=sorted(checks.SUITES), required=True)
    c.add_argument("--samples", type=int, default=None)
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_check)
    return p


def run(argv: Optional[Sequence[str]] = None) -> RunReport:
    """Parse argv and execute; raises SystemExit(2) on usage errors."""
    p = build_parser()
    a = p.parse_args(argv)
    try:
        _env_max_terms()
        if a.command == "check" and a.samples is not None and a.samples < 1:
            raise UsageError("--samples must be positive")
        t0 = time.perf_counter()
        try:
            rep = a.fn(a)
        except (DomainError, ValueError) as exc:
            raise UsageError(f"{type(exc).__name__}: {exc}")
    except UsageError as exc:
        p.error(str(exc))
    except (HznError, ArithmeticError) as exc:
        rep = RunReport(a.command, {k: v for k, v in vars(a).items() if k not in ("fn", "timing")},
                        status="failed")
        rep.outputs.append({"label": "error", "type": type(exc).__name__, "message": str(exc)})
        return rep
    if a.timing:
        rep.wall_time_ms = int(round(1000 * (time.perf_counter() - t0)))
    return rep


def main(argv: Optional[Sequence[str]] = None) -> int:
    rep = run(argv)
    if rep.text is not None and rep.status == "ok":
        sys.stdout.write(rep.text)
        if rep.wall_time_ms is not None:
            sys.stderr.write(f"wall_time_ms={rep.wall_time_ms}\n")
    else:
        sys.stdout.write(to_json(rep.as_dict()) + "\n")
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
