"""Command-line interface: error curves, oracle checks, simulation, spectra.

Four subcommands cover the library surface.  `perr` tabulates the exact
minimal misclassification probability over a range of training sizes,
next to the matching large-n expansion and the fully informed baseline.
`oracle` replays small instances against the dense brute-force route and
fails loudly on disagreement.  `simulate` samples the single-copy
measurement circuit, optionally under noise, and `spectrum` dumps every
eigenvalue of the difference operator with its degeneracy.

Output is CSV (RFC 4180 flavor, LF line endings) or JSON; floats are
rendered at 12 significant digits, so reruns with the same arguments are
byte identical.  Angle flags accept rational multiples of pi spelled
like `pi/3` or `2pi/5` and parse them exactly, avoiding decimal drift in
the filenames and tables built on top.  Exit status is 0 on success, 1
when a verification tolerance is exceeded, 2 for usage errors.

The `perr` size grid is evaluated on a thread pool (the QUDISC_THREADS
environment variable overrides the worker count); rows are emitted in
size order regardless of completion order.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Sequence

import numpy as np

from .oracle import p_err_oracle
from .povm import NoiseModel, simulate_misclassification, single_copy_error
from .priors import FixedOverlap, FixedOverlapDim, FixedPurities, HardSphere, Scenario
from .spectrum import p_err_min, spectrum_report

# Dense cross-validation is exhausted above two copies per register; the
# full spectrum listing stays readable up to a few thousand rows.
_ORACLE_MAX_COPIES = 2
_ORACLE_TOLERANCE = 1e-8
_SPECTRUM_MAX_COPIES = 40
_TRACE_TOLERANCE = 1e-10

_THREADS_VARIABLE = "QUDISC_THREADS"


class UsageError(Exception):
    """Bad argument combination detected after argparse."""


# ---------------------------------------------------------------------------
# Argument parsing helpers


_ANGLE_PATTERN = re.compile(
    r"(?i)^\s*([0-9]+(?:\.[0-9]+)?)?\s*\*?\s*pi\s*(?:/\s*([0-9]+(?:\.[0-9]+)?))?\s*$"
)


def parse_angle(text: str) -> float:
    """An angle in radians, given as a decimal or a rational multiple of pi."""
    match = _ANGLE_PATTERN.match(text)
    if match:
        numerator = float(match.group(1)) if match.group(1) else 1.0
        denominator = float(match.group(2)) if match.group(2) else 1.0
        if denominator == 0.0:
            raise argparse.ArgumentTypeError("zero denominator in angle")
        return numerator * math.pi / denominator
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def parse_size_range(text: str) -> list[int]:
    """Training sizes as `n`, `start:end`, or `start:end:step`, inclusive."""
    parts = text.split(":")
    if len(parts) > 3:
        raise argparse.ArgumentTypeError(f"too many colons in {text!r}")
    try:
        values = [int(part) for part in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse size range {text!r}") from None
    if len(values) == 1:
        start = end = values[0]
        step = 1
    elif len(values) == 2:
        (start, end), step = values, 1
    else:
        start, end, step = values
    if start < 1 or end < start or step < 1:
        raise argparse.ArgumentTypeError(f"degenerate size range {text!r}")
    return list(range(start, end + 1, step))


def parse_number_list(text: str) -> list[tuple[str, float]]:
    """Comma-separated floats, keeping the literal tokens for file naming."""
    items: list[tuple[str, float]] = []
    for token in text.split(","):
        token = token.strip()
        try:
            items.append((token, float(token)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad number {token!r}") from None
    return items


def _scenario_from_args(args: argparse.Namespace) -> Scenario:
    kind = args.scenario
    if kind == "fixed-purity":
        if args.r1 is None or args.r2 is None:
            raise UsageError("--scenario fixed-purity needs --r1 and --r2")
        return FixedPurities(args.r1, args.r2)
    if kind == "hard-sphere":
        return HardSphere()
    if kind == "fixed-overlap":
        if args.theta is None:
            raise UsageError("--scenario fixed-overlap needs --theta")
        return FixedOverlap(args.theta)
    if args.theta is None or args.dim is None:
        raise UsageError("--scenario fixed-overlap-dim needs --theta and --dim")
    return FixedOverlapDim(args.theta, args.dim)


def _scenario_fields(scenario: Scenario) -> dict[str, Any]:
    if isinstance(scenario, FixedPurities):
        return {"kind": "fixed-purity", "r1": _json_number(scenario.r1), "r2": _json_number(scenario.r2)}
    if isinstance(scenario, HardSphere):
        return {"kind": "hard-sphere"}
    if isinstance(scenario, FixedOverlap):
        return {"kind": "fixed-overlap", "theta": _json_number(scenario.theta)}
    assert isinstance(scenario, FixedOverlapDim)
    return {"kind": "fixed-overlap-dim", "theta": _json_number(scenario.theta), "dim": scenario.d}


def _scenario_text(scenario: Scenario) -> str:
    fields = _scenario_fields(scenario)
    kind = fields.pop("kind")
    if not fields:
        return kind
    inner = ";".join(f"{name}={_fmt(value)}" for name, value in fields.items())
    return f"{kind}({inner})"


# ---------------------------------------------------------------------------
# Rendering


def _fmt(value: float | int | None) -> str:
    if value is None:
        return ""
    return format(value, ".12g")


def _json_number(value: float | None) -> float | None:
    if value is None:
        return None
    return float(format(value, ".12g"))


def _render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _render_json(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _write_output(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _suffixed_path(path: str, suffix: str) -> str:
    stem, extension = os.path.splitext(path)
    return f"{stem}{suffix}{extension}"


# ---------------------------------------------------------------------------
# perr


def _worker_count(task_count: int) -> int:
    raw = os.environ.get(_THREADS_VARIABLE)
    if raw is None:
        configured = min(8, os.cpu_count() or 1)
    else:
        try:
            configured = int(raw)
        except ValueError:
            raise UsageError(f"{_THREADS_VARIABLE} must be an integer, got {raw!r}") from None
        if configured < 1:
            raise UsageError(f"{_THREADS_VARIABLE} must be positive, got {configured}")
    return max(1, min(configured, task_count))


def cmd_perr(args: argparse.Namespace) -> int:
    scenario = _scenario_from_args(args)
    truncate = {"auto": None, "on": True, "off": False}[args.truncate]
    sizes = args.n
    workers = _worker_count(len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda n: p_err_min(n, scenario, truncate), sizes))
    else:
        reports = [p_err_min(n, scenario, truncate) for n in sizes]

    if args.format == "csv":
        rows = [
            [report.n, _fmt(report.p_exact), _fmt(report.p_asymptotic),
             _fmt(report.helstrom), _fmt(report.excess_risk)]
            for report in reports
        ]
        text = _render_csv(["n", "p_exact", "p_asymptotic", "helstrom", "excess_risk"], rows)
    else:
        text = _render_json({
            "scenario": _scenario_fields(scenario),
            "rows": [
                {
                    "n": report.n,
                    "p_exact": _json_number(report.p_exact),
                    "p_asymptotic": _json_number(report.p_asymptotic),
                    "helstrom": _json_number(report.helstrom),
                    "excess_risk": _json_number(report.excess_risk),
                    "note": report.note,
                }
                for report in reports
            ],
        })
    _write_output(args.output, text)
    return 0


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args: argparse.Namespace) -> int:
    scenario = _scenario_from_args(args)
    sizes = args.n
    oversized = [n for n in sizes if n > _ORACLE_MAX_COPIES]
    if oversized:
        raise UsageError(
            f"the dense cross-check covers n <= {_ORACLE_MAX_COPIES}, got {oversized[0]}"
        )

    rows = []
    worst = 0.0
    for n in sizes:
        engine = p_err_min(n, scenario).p_exact
        reference = p_err_oracle(n, scenario)
        difference = abs(engine - reference)
        worst = max(worst, difference)
        rows.append((n, engine, reference, difference))

    if args.format == "csv":
        text = _render_csv(
            ["n", "scenario", "p_engine", "p_oracle", "abs_diff"],
            [
                [n, _scenario_text(scenario), _fmt(engine), _fmt(reference), _fmt(difference)]
                for n, engine, reference, difference in rows
            ],
        )
    else:
        text = _render_json({
            "scenario": _scenario_fields(scenario),
            "tolerance": _ORACLE_TOLERANCE,
            "passed": worst <= _ORACLE_TOLERANCE,
            "rows": [
                {
                    "n": n,
                    "p_engine": _json_number(engine),
                    "p_oracle": _json_number(reference),
                    "abs_diff": _json_number(difference),
                }
                for n, engine, reference, difference in rows
            ],
        })
    _write_output(args.output, text)
    if worst > _ORACLE_TOLERANCE:
        print(
            f"oracle mismatch: worst |difference| {worst:.3e} exceeds {_ORACLE_TOLERANCE:.0e}",
            file=sys.stderr,
        )
        return 1
    return 0


# ---------------------------------------------------------------------------
# simulate


def _noise_variants(args: argparse.Namespace) -> list[tuple[str, NoiseModel | None]]:
    """The (file suffix, model) pairs requested by the noise flags."""
    extras: dict[str, Any] = {}
    if args.layer_count is not None:
        extras["layer_count"] = args.layer_count

    if args.noise == "none":
        for flag in ("p_depol", "t1", "t2"):
            if getattr(args, flag) is not None:
                raise UsageError(f"--{flag.replace('_', '-')} needs a matching --noise kind")
        if args.layer_count is not None or args.duration_1q is not None or args.duration_2q is not None:
            raise UsageError("noise shape flags need a matching --noise kind")
        return [("", None)]

    if args.noise == "depolarizing":
        if args.p_depol is None:
            raise UsageError("--noise depolarizing needs --p-depol")
        if args.t1 is not None or args.t2 is not None:
            raise UsageError("--t1/--t2 belong to --noise thermal")
        if args.duration_1q is not None or args.duration_2q is not None:
            raise UsageError("gate durations belong to --noise thermal")
        return [
            (f"_p{token}", NoiseModel.depolarizing(value, **extras))
            for token, value in args.p_depol
        ]

    if args.p_depol is not None:
        raise UsageError("--p-depol belongs to --noise depolarizing")
    if args.t1 is None or args.t2 is None:
        raise UsageError("--noise thermal needs --t1 and --t2")
    if args.duration_1q is not None:
        extras["duration_1q"] = args.duration_1q
    if args.duration_2q is not None:
        extras["duration_2q"] = args.duration_2q
    t1_list, t2_list = args.t1, args.t2
    if len(t1_list) == 1 and len(t2_list) > 1:
        t1_list = t1_list * len(t2_list)
    if len(t2_list) == 1 and len(t1_list) > 1:
        t2_list = t2_list * len(t1_list)
    if len(t1_list) != len(t2_list):
        raise UsageError("--t1 and --t2 lists must pair up")
    return [
        (f"_t1{token1}_t2{token2}", NoiseModel.thermal(value1, value2, **extras))
        for (token1, value1), (token2, value2) in zip(t1_list, t2_list)
    ]


def _noise_fields(model: NoiseModel | None) -> dict[str, Any]:
    if model is None:
        return {"kind": "none"}
    fields: dict[str, Any] = {"kind": model.kind}
    if model.kind == "depolarizing":
        fields["p_depol"] = model.p_depol
        fields["layer_count"] = model.layer_count
    elif model.kind == "thermal":
        fields.update(
            t1=model.t1, t2=model.t2,
            duration_1q=model.duration_1q, duration_2q=model.duration_2q,
            layer_count=model.layer_count,
        )
    return fields


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    if args.theta is not None:
        angles = [args.theta]
    else:
        angles = [float(value) for value in np.linspace(0.0, math.pi, args.points)]

    variants = _noise_variants(args)
    if len(variants) > 1 and args.output is None:
        raise UsageError("a noise sweep needs --output to name each file")

    for suffix, model in variants:
        rows = []
        for theta in angles:
            result = simulate_misclassification(theta, args.shots, noise=model, seed=args.seed)
            rows.append((theta, result.frequency, result.stderr, single_copy_error(theta)))
        if args.format == "csv":
            text = _render_csv(
                ["theta", "frequency", "stderr", "p_closed_form"],
                [[_fmt(t), _fmt(f), _fmt(s), _fmt(p)] for t, f, s, p in rows],
            )
        else:
            text = _render_json({
                "shots": args.shots,
                "seed": args.seed,
                "noise": _noise_fields(model),
                "rows": [
                    {
                        "theta": _json_number(t),
                        "frequency": _json_number(f),
                        "stderr": _json_number(s),
                        "p_closed_form": _json_number(p),
                    }
                    for t, f, s, p in rows
                ],
            })
        if args.output is None:
            _write_output(None, text)
        elif len(variants) == 1:
            _write_output(args.output, text)
        else:
            _write_output(_suffixed_path(args.output, suffix), text)
    return 0


# ---------------------------------------------------------------------------
# spectrum


def cmd_spectrum(args: argparse.Namespace) -> int:
    scenario = _scenario_from_args(args)
    if args.n > _SPECTRUM_MAX_COPIES:
        raise UsageError(f"the full listing is meant for n <= {_SPECTRUM_MAX_COPIES}")

    entries = spectrum_report(args.n, scenario)
    trace = math.fsum(entry.eigenvalue * entry.copies for entry in entries)
    dimension = sum(entry.copies for entry in entries)

    if args.format == "csv":
        text = _render_csv(
            ["s", "t", "q", "case", "branch", "eigenvalue", "copies"],
            [
                [str(entry.s), str(entry.t), str(entry.q), entry.case, entry.branch,
                 _fmt(entry.eigenvalue), entry.copies]
                for entry in entries
            ],
        )
        print(f"trace sum {trace:.3e} over dimension {dimension}", file=sys.stderr)
    else:
        text = _render_json({
            "scenario": _scenario_fields(scenario),
            "n": args.n,
            "dimension": dimension,
            "trace_sum": _json_number(trace),
            "entries": [
                {
                    "s": str(entry.s),
                    "t": str(entry.t),
                    "q": str(entry.q),
                    "case": entry.case,
                    "branch": entry.branch,
                    "value": _json_number(entry.value),
                    "log_scale_magnitude": (
                        None if entry.scale.sign == 0 else _json_number(entry.scale.log_magnitude)
                    ),
                    "scale_sign": entry.scale.sign,
                    "eigenvalue": _json_number(entry.eigenvalue),
                    "copies": entry.copies,
                }
                for entry in entries
            ],
        })
    _write_output(args.output, text)
    if abs(trace) > _TRACE_TOLERANCE:
        print(
            f"trace sum {trace:.3e} exceeds {_TRACE_TOLERANCE:.0e}; "
            "the listing is inconsistent",
            file=sys.stderr,
        )
        return 1
    return 0


# ---------------------------------------------------------------------------
# Wiring


def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scenario", required=True,
        choices=("fixed-purity", "hard-sphere", "fixed-overlap", "fixed-overlap-dim"),
        help="prior information about the template pair",
    )
    parser.add_argument("--r1", type=float, help="first template purity (fixed-purity)")
    parser.add_argument("--r2", type=float, help="second template purity (fixed-purity)")
    parser.add_argument(
        "--theta", type=parse_angle,
        help="template angle in radians; accepts pi/3-style literals",
    )
    parser.add_argument("--dim", type=int, help="Hilbert space dimension (fixed-overlap-dim)")


def _add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", metavar="PATH", help="write here instead of stdout")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qudisc",
        description="minimal-error discrimination of stored qubit templates",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    perr = commands.add_parser(
        "perr", help="exact error curve with expansion and baseline columns",
    )
    _add_scenario_arguments(perr)
    _add_output_arguments(perr)
    perr.add_argument(
        "--n", type=parse_size_range, required=True, metavar="START:END[:STEP]",
        help="training sizes, e.g. 12 or 1:30 or 10:200:10",
    )
    perr.add_argument(
        "--truncate", choices=("auto", "on", "off"), default="auto",
        help="drop negligibly weighted sectors (auto: only beyond n = 200)",
    )
    perr.set_defaults(handler=cmd_perr)

    oracle = commands.add_parser(
        "oracle", help="cross-check small sizes against the dense route",
    )
    _add_scenario_arguments(oracle)
    _add_output_arguments(oracle)
    oracle.add_argument(
        "--n", type=parse_size_range, default=[1, 2], metavar="START:END[:STEP]",
        help="training sizes to replay (all must be <= 2; default 1:2)",
    )
    oracle.set_defaults(handler=cmd_oracle)

    simulate = commands.add_parser(
        "simulate", help="sample the single-copy measurement circuit",
    )
    _add_output_arguments(simulate)
    simulate.add_argument(
        "--theta", type=parse_angle,
        help="single template angle; default sweeps a grid over [0, pi]",
    )
    simulate.add_argument(
        "--points", type=int, default=25,
        help="grid resolution when no --theta is given (default 25)",
    )
    simulate.add_argument("--shots", type=int, default=256, help="repetitions per angle")
    simulate.add_argument("--seed", type=int, default=0, help="random stream seed")
    simulate.add_argument(
        "--noise", choices=("none", "depolarizing", "thermal"), default="none",
    )
    simulate.add_argument(
        "--p-depol", type=parse_number_list, metavar="P[,P...]",
        help="depolarizing strengths; several values write one file each",
    )
    simulate.add_argument(
        "--t1", type=parse_number_list, metavar="T[,T...]",
        help="relaxation times in seconds (thermal)",
    )
    simulate.add_argument(
        "--t2", type=parse_number_list, metavar="T[,T...]",
        help="dephasing times in seconds (thermal)",
    )
    simulate.add_argument("--layer-count", type=int, help="circuit depth in gate layers")
    simulate.add_argument("--duration-1q", type=float, help="one-qubit layer time in seconds")
    simulate.add_argument("--duration-2q", type=float, help="two-qubit layer time in seconds")
    simulate.set_defaults(handler=cmd_simulate)

    spectrum = commands.add_parser(
        "spectrum", help="list difference-operator eigenvalues with degeneracies",
    )
    _add_scenario_arguments(spectrum)
    _add_output_arguments(spectrum)
    spectrum.add_argument("--n", type=int, required=True, help="training size")
    spectrum.set_defaults(handler=cmd_spectrum)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
