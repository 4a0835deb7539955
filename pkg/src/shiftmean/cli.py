"""Command-line surface.

Subcommands: constant, eval, meanvalue, verify, curvelab.  Every run echoes
its effective configuration to stderr so outputs can be reproduced; the data
itself goes to stdout or --output.  Identical invocations produce
byte-identical files (fixed float formatting, fixed reduction order).

Exit codes: 0 success, 2 usage/configuration error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from dataclasses import dataclass

from . import curveconst, curvelab, harness, presets
from .arith import eval_named
from .curveconst import SymbolConvention
from .euler import shifted_mean_constant
from .reports import dumps_json, fmt_csv

DEFAULT_GRID_START = 1000


class UsageError(ValueError):
    """Configuration problem; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    target: str = ""
    n: int = 0
    x_grid: tuple = ()
    prime_cutoff: int = 0
    depth: int = 0
    shift: int = 1
    convention: str = SymbolConvention.UNIT.value
    fmt: str = "csv"
    output: str = ""
    threads: int = 1
    jordan_k: int = 2
    n_min: int = 0
    n_max: int = 0
    cap: int = curvelab.DEFAULT_ORDER_CAP


def _echo_config(cfg: RunConfig) -> None:
    print("config: " + dumps_json(dataclasses.asdict(cfg)).replace("\n", " "), file=sys.stderr)


def _parse_int(text: str, field: str) -> int:
    try:
        value = float(text)
        if value != int(value):
            raise ValueError
        return int(value)
    except ValueError:
        raise UsageError(f"{field}: expected an integer (got {text!r})") from None


def _parse_grid(args, field_grid="--x-grid", field_max="--xmax") -> tuple:
    if args.x_grid:
        try:
            xs = tuple(int(float(s)) for s in args.x_grid.split(","))
        except ValueError:
            raise UsageError(f"{field_grid}: malformed grid {args.x_grid!r}") from None
        if not xs or any(b <= a for a, b in zip(xs, xs[1:])) or xs[0] < 2:
            raise UsageError(f"{field_grid}: grid must be ascending and start at x >= 2")
        return xs
    if args.xmax:
        xmax = _parse_int(args.xmax, field_max)
        if xmax < DEFAULT_GRID_START:
            raise UsageError(f"{field_max}: must be >= {DEFAULT_GRID_START}")
        xs, x = [], DEFAULT_GRID_START
        while x <= xmax:
            xs.append(x)
            x *= 10
        if xs[-1] != xmax:
            xs.append(xmax)
        return tuple(xs)
    raise UsageError(f"{field_grid}: one of {field_grid} or {field_max} is required")


def _convention(name: str) -> SymbolConvention:
    for conv in SymbolConvention:
        if conv.value == name:
            return conv
    raise UsageError(f"--convention: unknown value {name!r}")


def _emit(text: str, output: str) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_cutoff(cutoff: int, floor: int = 2) -> int:
    if cutoff < floor or cutoff > 2 * 10**9:
        raise UsageError(f"--prime-cutoff: out of range [{floor}, 2e9] (got {cutoff})")
    return cutoff


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_constant(args) -> int:
    cutoff = _check_cutoff(_parse_int(args.prime_cutoff, "--prime-cutoff"), floor=3)
    cfg = RunConfig(
        subcommand="constant", target=args.target, prime_cutoff=cutoff,
        depth=args.depth, shift=args.shift, fmt="json", output=args.output or "",
    )
    _echo_config(cfg)
    if args.target == "c2":
        ev = curveconst.twin_prime_constant(cutoff)
    else:
        try:
            preset = presets.get_preset(args.target, shift=args.shift)
        except ValueError as exc:
            raise UsageError(f"target: {exc}") from None
        ev = shifted_mean_constant(preset.pair, cutoff, args.depth)
    payload = {
        "target": args.target,
        "value": ev.value,
        "prime_cutoff": ev.prime_cutoff,
        "power_depth": ev.power_depth,
        "tail_bound": ev.tail_bound,
        "tail_bound_sharp": ev.tail_bound_sharp,
    }
    _emit(dumps_json(payload) + "\n", args.output)
    return 0


def _cmd_eval(args) -> int:
    n = _parse_int(args.n, "n")
    conv = _convention(args.convention)
    cutoff = _check_cutoff(_parse_int(args.prime_cutoff, "--prime-cutoff"), floor=3)
    cfg = RunConfig(
        subcommand="eval", target=args.target, n=n, prime_cutoff=cutoff,
        convention=conv.value, fmt="json", output=args.output or "",
        jordan_k=args.k,
    )
    _echo_config(cfg)
    if args.target in ("kstar", "khat"):
        if n < 2:
            raise UsageError(f"n: order evaluations need n >= 2 (got {n})")
        c2 = curveconst.cached_twin_prime_constant(cutoff)
        payload = curveconst.eval_point(n, conv, c2=c2)
    elif args.target == "totient":
        payload = {"n": n, "totient": eval_named("totient", n)}
    elif args.target == "jordan":
        payload = {"n": n, "k": args.k, "jordan": eval_named("jordan", n, args.k)}
    else:
        raise UsageError(f"target: unknown eval target {args.target!r}")
    _emit(dumps_json(payload) + "\n", args.output)
    return 0


def _cmd_meanvalue(args) -> int:
    grid = _parse_grid(args)
    cutoff = _check_cutoff(_parse_int(args.prime_cutoff, "--prime-cutoff"), floor=2)
    if args.shift < 1:
        raise UsageError(f"--shift: must be >= 1 (got {args.shift})")
    try:
        preset = presets.get_preset(args.preset, shift=args.shift)
    except ValueError as exc:
        raise UsageError(f"preset: {exc}") from None
    cfg = RunConfig(
        subcommand="meanvalue", target=args.preset, x_grid=grid, prime_cutoff=cutoff,
        depth=args.depth, shift=args.shift, fmt=args.format, output=args.output or "",
        threads=args.threads,
    )
    _echo_config(cfg)
    report = harness.run_grid(preset, grid, prime_cutoff=cutoff, depth=args.depth)
    _emit(report.to_csv() if args.format == "csv" else report.to_json() + "\n", args.output)
    return 0


def _cmd_verify(args) -> int:
    grid = _parse_grid(args)
    conv = _convention(args.convention)
    cutoff = _check_cutoff(_parse_int(args.prime_cutoff, "--prime-cutoff"), floor=3)
    cfg = RunConfig(
        subcommand="verify", target=args.target, x_grid=grid, prime_cutoff=cutoff,
        convention=conv.value, fmt=args.format, output=args.output or "",
        threads=args.threads,
    )
    _echo_config(cfg)
    c2 = curveconst.cached_twin_prime_constant(cutoff)
    if args.target in curveconst.MEAN_TARGETS:
        report = curveconst.mean_order_grid(args.target, grid, conv, c2=c2)
        _emit(report.to_csv() if args.format == "csv" else report.to_json() + "\n", args.output)
    elif args.target == "gap":
        lines = ["x,gap"]
        for x in grid:
            gap = curveconst.substitution_gap(x, args.gap_d, args.gap_l, conv)
            lines.append(f"{x},{fmt_csv(gap)}")
        _emit("\n".join(lines) + "\n", args.output)
    else:
        raise UsageError(f"target: unknown verify target {args.target!r}")
    return 0


def _cmd_curvelab(args) -> int:
    cutoff = _check_cutoff(_parse_int(args.prime_cutoff, "--prime-cutoff"), floor=3)
    if args.n_min < 7 or args.n_max < args.n_min:
        raise UsageError(f"--n-min/--n-max: need 7 <= n-min <= n-max (got {args.n_min}, {args.n_max})")
    if args.n_max > args.cap:
        raise UsageError(f"--n-max: exceeds cap {args.cap}")
    cfg = RunConfig(
        subcommand="curvelab", n_min=args.n_min, n_max=args.n_max, cap=args.cap,
        prime_cutoff=cutoff, fmt=args.format, output=args.output or "",
        threads=args.threads,
    )
    _echo_config(cfg)
    c2 = curveconst.cached_twin_prime_constant(cutoff)
    records = [
        curvelab.expected_m(n, cap=args.cap, threads=args.threads, c2=c2)
        for n in range(args.n_min, args.n_max + 1)
    ]
    if args.format == "csv":
        _emit(curvelab.records_to_csv(records), args.output)
    else:
        _emit(curvelab.records_to_json(records) + "\n", args.output)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    threads_default = int(os.environ.get("SHIFTMEAN_THREADS", "1"))
    parser = argparse.ArgumentParser(
        prog="shiftmean",
        description="Mean values of shifted multiplicative functions and "
        "elliptic-curve order constants.",
        epilog="presets: phi, jordan-k (e.g. jordan-2), kstar, kstar-odd, khat",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, grid=True):
        p.add_argument("--prime-cutoff", default="1e6",
                       help="largest prime folded into constants (default 1e6)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help="write to this path instead of stdout")
        p.add_argument("--threads", type=int, default=threads_default,
                       help="worker threads for parallelizable stages")
        if grid:
            p.add_argument("--x-grid", help="comma-separated ascending x values")
            p.add_argument("--xmax", help="decade grid 1e3..xmax instead of --x-grid")

    p = sub.add_parser("constant", help="compute an Euler-product constant")
    p.add_argument("target", help="c2 or a preset name (phi, jordan-k, kstar, kstar-odd, khat)")
    p.add_argument("--prime-cutoff", default="1e6")
    p.add_argument("--depth", type=int, default=60, help="prime-power depth cutoff")
    p.add_argument("--shift", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(handler=_cmd_constant)

    p = sub.add_parser("eval", help="evaluate at a single point, JSON out")
    p.add_argument("target", help="kstar, khat, totient, or jordan")
    p.add_argument("n")
    p.add_argument("--k", type=int, default=2, help="order for jordan")
    p.add_argument("--convention", default=SymbolConvention.UNIT.value,
                   choices=[c.value for c in SymbolConvention])
    p.add_argument("--prime-cutoff", default="1e6")
    p.add_argument("--output")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("meanvalue", help="empirical vs predicted sums for a preset")
    p.add_argument("preset", help="phi, jordan-k, kstar, kstar-odd, or khat")
    p.add_argument("--shift", type=int, default=1)
    p.add_argument("--depth", type=int, default=60)
    add_common(p)
    p.set_defaults(handler=_cmd_meanvalue)

    p = sub.add_parser("verify", help="order-constant mean values and the symbol-substitution gap")
    p.add_argument("target", help="t2a (all N), t2b (odd N), t3 (unnormalized), or gap")
    p.add_argument("--convention", default=SymbolConvention.UNIT.value,
                   choices=[c.value for c in SymbolConvention])
    p.add_argument("--gap-d", type=int, default=1, help="gap: restrict to N = 1 mod d")
    p.add_argument("--gap-l", type=int, default=1, help="gap: restrict to N = 0 mod l")
    add_common(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("curvelab", help="per-prime curve densities vs the order constant")
    p.add_argument("--n-min", type=int, default=20)
    p.add_argument("--n-max", type=int, default=curvelab.DEFAULT_ORDER_CAP)
    p.add_argument("--cap", type=int, default=curvelab.DEFAULT_ORDER_CAP)
    add_common(p, grid=False)
    p.set_defaults(handler=_cmd_curvelab)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
