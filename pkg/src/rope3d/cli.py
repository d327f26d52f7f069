"""Command-line front-end.

Subcommands expose the analysis surfaces: ``decay`` (bound curves and the
chunked surface), ``relpos`` (the pairwise relative-position matrix),
``resolution`` (interpolation-resolution reports), ``verify`` (the randomized
invariant suites) and ``attn-demo`` (a toy forward pass with an optional
gradient check).

Exit codes are a stable contract: 0 success, 1 usage, 2 I/O, 3 verification
failure. Output is deterministic for fixed flags and seed; CSV floats carry
six decimal places.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .angles import phi_schedule, theta_schedule
from .attention import attention_forward, grad_check, random_batch
from .chunking import ChunkLayout, relative_position_matrix
from .decay import decay_curve_3d, decay_curve_rope, decay_surface_3d
from .encoding import encode_sequence_3d
from .errors import ParameterError
from .interpolation import REPORT_FIELDS, resolution_grid_check
from .verify import run_all

GRAD_CHECK_LIMIT = 1e-4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def _positive_real(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive real, got {value}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("expected a comma-separated integer list")
    return values


def _write_output(path: str | None, text: str) -> int:
    if path is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return 2
    return 0


def _fmt(value: float) -> str:
    return f"{value:.6f}"


# ---------------------------------------------------------------- decay

def _decay_csv(rels, bounds) -> str:
    lines = ["rel,bound"]
    lines.extend(f"{int(r)},{_fmt(b)}" for r, b in zip(rels, bounds))
    return "\n".join(lines) + "\n"


def _decay_json(rels, bounds) -> str:
    points = [{"rel": int(r), "bound": float(b)} for r, b in zip(rels, bounds)]
    return json.dumps(points, indent=2) + "\n"


def _surface_csv(surface) -> str:
    lines = ["rel,chunk_delta,bound"]
    for r in range(surface.shape[0]):
        for delta in range(surface.shape[1]):
            lines.append(f"{r},{delta},{_fmt(surface[r, delta])}")
    return "\n".join(lines) + "\n"


def _surface_json(surface) -> str:
    points = [
        {"rel": r, "chunk_delta": delta, "bound": float(surface[r, delta])}
        for r in range(surface.shape[0])
        for delta in range(surface.shape[1])
    ]
    return json.dumps(points, indent=2) + "\n"


def _cmd_decay(args) -> int:
    if args.chunk is None and args.max_rel is None:
        print("error: one of --max-rel or --chunk is required", file=sys.stderr)
        return 1
    if args.chunk_deltas is not None and args.chunk is None:
        print("error: --chunk-deltas requires --chunk", file=sys.stderr)
        return 1
    schedule = theta_schedule(args.d, args.base)
    if args.chunk is not None and args.chunk_deltas is not None:
        surface = decay_surface_3d(args.chunk, args.chunk_deltas, schedule)
        text = _surface_csv(surface) if args.format == "csv" else _surface_json(surface)
    else:
        if args.chunk is not None:
            curve = decay_curve_3d(args.chunk, schedule)
        else:
            curve = decay_curve_rope(args.max_rel, schedule)
        rels, bounds = curve.rel_distances, curve.bounds
        text = _decay_csv(rels, bounds) if args.format == "csv" else _decay_json(rels, bounds)
    return _write_output(args.out, text)


# ---------------------------------------------------------------- relpos

def _relpos_csv(matrix) -> str:
    length = matrix.shape[0]
    lines = ["qpos," + ",".join(f"k{p}" for p in range(length))]
    for p in range(length):
        cells = ",".join(f"{matrix[p, q, 0]}/{matrix[p, q, 1]}" for q in range(length))
        lines.append(f"{p},{cells}")
    return "\n".join(lines) + "\n"


def _cmd_relpos(args) -> int:
    layout = ChunkLayout(seq_len=args.length, chunk_size=args.chunk)
    return _write_output(args.out, _relpos_csv(relative_position_matrix(layout)))


# ---------------------------------------------------------------- resolution

def _report_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def _reports_csv(reports) -> str:
    lines = [",".join(REPORT_FIELDS)]
    for report in reports:
        record = report.to_dict()
        lines.append(",".join(_report_cell(record[name]) for name in REPORT_FIELDS))
    return "\n".join(lines) + "\n"


def _reports_json(reports) -> str:
    return json.dumps([report.to_dict() for report in reports], indent=2) + "\n"


def _cmd_resolution(args) -> int:
    schedule = theta_schedule(args.d, args.base)
    max_chunks = max(-(-args.pretrain // c) for c in args.chunks)
    phis = phi_schedule(max(2, max_chunks), args.base)
    reports = resolution_grid_check(args.pretrain, args.targets, args.chunks, schedule, phis)
    text = _reports_csv(reports) if args.format == "csv" else _reports_json(reports)
    code = _write_output(args.out, text)
    if code != 0:
        return code
    if reports and not any(report.feasible for report in reports):
        print("error: every (target, chunk) pair is infeasible", file=sys.stderr)
        return 3
    return 0


# ---------------------------------------------------------------- verify

def _cmd_verify(args) -> int:
    results = run_all(seed=args.seed, trials=args.trials)
    suites: dict[str, list] = {}
    for result in results:
        suites.setdefault(result.suite, []).append(result)
    for suite, items in suites.items():
        passed = sum(1 for item in items if item.passed)
        print(f"{suite}: {passed}/{len(items)} passed")
    failures = [result for result in results if not result.passed]
    for failure in failures:
        detail = f": {failure.detail}" if failure.detail else ""
        print(f"FAIL {failure.suite}.{failure.name} (seed {failure.seed}){detail}")
    return 3 if failures else 0


# ---------------------------------------------------------------- attn-demo

def _cmd_attn_demo(args) -> int:
    layout = ChunkLayout(seq_len=args.length, chunk_size=args.chunk)
    schedule = theta_schedule(args.d, args.base)
    phis = phi_schedule(layout.num_chunks, args.base)
    rng = np.random.default_rng(args.seed)
    batch = random_batch(layout, args.d, rng=rng)
    q_enc = encode_sequence_3d(batch.q, layout, schedule, phis)
    k_enc = encode_sequence_3d(batch.k, layout, schedule, phis)
    scores = (q_enc @ k_enc.T) / np.sqrt(args.d)
    print(f"scores ({args.length}x{args.length}, scaled by 1/sqrt(d)):")
    for row in scores:
        print("  " + " ".join(_fmt(value) for value in row))
    outputs = attention_forward(batch, schedule, phis)
    norms = np.linalg.norm(outputs, axis=-1)
    print("output norms:")
    print("  " + " ".join(_fmt(value) for value in norms))
    if args.grad_check:
        error = grad_check(batch, schedule, phis, eps=1e-4)
        print(f"max relative gradient error: {error:.3e}")
        if not np.isfinite(error) or error > GRAD_CHECK_LIMIT:
            print(f"error: gradient check exceeded {GRAD_CHECK_LIMIT:.0e}", file=sys.stderr)
            return 3
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rope3d", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rope3d {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    decay = sub.add_parser("decay", help="emit decay-bound curves or the chunked surface")
    decay.add_argument("--d", type=_positive_int, default=128, help="head dimension (even)")
    decay.add_argument("--base", type=_positive_real, default=10000.0)
    decay.add_argument("--max-rel", type=_nonneg_int, default=None,
                       help="largest relative distance for the unrestricted curve")
    decay.add_argument("--chunk", type=_positive_int, default=None,
                       help="restrict distances to one chunk of this size")
    decay.add_argument("--chunk-deltas", type=_positive_int, default=None,
                       help="with --chunk, emit the (distance x chunk-delta) surface")
    decay.add_argument("--out", default=None, help="output path (default: stdout)")
    decay.add_argument("--format", choices=("csv", "json"), default="csv")
    decay.set_defaults(func=_cmd_decay)

    relpos = sub.add_parser("relpos", help="emit the pairwise relative-position matrix")
    relpos.add_argument("--length", type=_positive_int, required=True)
    relpos.add_argument("--chunk", type=_positive_int, required=True)
    relpos.add_argument("--out", default=None)
    relpos.set_defaults(func=_cmd_relpos)

    resolution = sub.add_parser("resolution",
                                help="compare interpolation resolution across configurations")
    resolution.add_argument("--pretrain", type=_positive_int, required=True)
    resolution.add_argument("--targets", type=_int_list, required=True,
                            help="comma-separated target lengths")
    resolution.add_argument("--chunks", type=_int_list, required=True,
                            help="comma-separated chunk sizes")
    resolution.add_argument("--d", type=_positive_int, default=128)
    resolution.add_argument("--base", type=_positive_real, default=10000.0)
    resolution.add_argument("--out", default=None)
    resolution.add_argument("--format", choices=("csv", "json"), default="csv")
    resolution.set_defaults(func=_cmd_resolution)

    verify = sub.add_parser("verify", help="run the randomized invariant suites")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trials", type=_positive_int, default=200)
    verify.set_defaults(func=_cmd_verify)

    demo = sub.add_parser("attn-demo", help="toy attention forward pass")
    demo.add_argument("--length", type=_positive_int, required=True)
    demo.add_argument("--chunk", type=_positive_int, default=1000)
    demo.add_argument("--d", type=_positive_int, default=128)
    demo.add_argument("--base", type=_positive_real, default=10000.0)
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--grad-check", action="store_true")
    demo.set_defaults(func=_cmd_attn_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
