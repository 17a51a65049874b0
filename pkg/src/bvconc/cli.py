"""Command-line front end: CSV ingestion, tests, bound tables, simulations.

Commands map one-to-one onto the library API::

    bound eval          tail bound at one or more thresholds
    bound critical      critical statistic values for alpha levels
    kstest one-sample   clustered sample against a reference CDF
    kstest two-sample   two clustered samples against each other
    kstest lipschitz    two trajectory panels against each other
    simulate grid       binomial-grid conjecture refutation sweep
    simulate coverage   iid uniform coverage validation
    simulate sharpness  fixed-n lower-bound construction

Results go to stdout (or ``--out``); every diagnostic goes to stderr.  Exit
codes: 0 success, 2 domain or validation error, 1 I/O error.  JSON output
uses shortest round-trip float formatting, so re-parsing reproduces every
number bit-for-bit; repeated seeded simulation runs are byte-identical.

Input CSV schemas (exact headers):

* clustered sample: ``value,cluster`` — one observation per row; a
  single-column ``value`` file is accepted and degrades to iid (each row its
  own cluster) with a notice on stderr.
* trajectory panel: ``time,unit_1,...,unit_n`` — times strictly increasing
  within [0, 1], values within [0, 1].
"""

from __future__ import annotations

import argparse
import csv
import enum
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .bounds import (
    BoundParams,
    TailSide,
    critical_statistic,
    denominator,
    one_sided_shift,
    tail_bound,
    tail_bound_raw,
)
from .empirical import ClusteredSample, TrajectoryPanel, lipschitz_sup_interval
from .errors import BvconcError, DataFormatError, DomainError
from .kstests import (
    DEFAULT_ALPHAS,
    KsOutcome,
    lipschitz_two_sample,
    one_sample_clustered,
    two_sample_clustered,
)
from .montecarlo import (
    conjecture_refutation_experiment,
    iid_coverage,
    sharpness_experiment,
)

__all__ = [
    "Command",
    "OutputFormat",
    "RunConfig",
    "ingest_clustered_csv",
    "ingest_trajectory_csv",
    "run",
    "main",
]

DEFAULT_COVERAGE_EPS = (0.25, 0.5, 1.0, 1.5, 2.0)


class Command(enum.Enum):
    BOUND_EVAL = "bound-eval"
    CRITICAL = "bound-critical"
    KS_ONE_SAMPLE = "kstest-one-sample"
    KS_TWO_SAMPLE = "kstest-two-sample"
    LIPSCHITZ_TEST = "kstest-lipschitz"
    SIMULATE_GRID = "simulate-grid"
    SIMULATE_COVERAGE = "simulate-coverage"
    SIMULATE_SHARPNESS = "simulate-sharpness"


class OutputFormat(enum.Enum):
    JSON = "json"
    PLOT_CSV = "csv"
    TABLE = "table"


@dataclass(frozen=True)
class RunConfig:
    """Fully explicit run description; no environment variables are consulted."""

    command: Command
    side: TailSide = TailSide.TWO_SIDED
    alpha_levels: tuple[float, ...] = DEFAULT_ALPHAS
    inputs: tuple[str, ...] = ()
    output: str | None = None
    format: OutputFormat = OutputFormat.JSON
    c: float | None = None
    d: float | None = None
    eps_values: tuple[float, ...] = ()
    n: int | None = None
    m_values: tuple[int, ...] = ()
    trials: int | None = None
    seed: int = 0
    k_lip: float | None = None
    l_target: float | None = None
    ref: str = "uniform"
    ref_loc: float = 0.0
    ref_scale: float = 1.0
    grid_exhaustive: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha_levels", tuple(sorted(self.alpha_levels)))
        for a in self.alpha_levels:
            if not (0.0 < a < 1.0):
                raise DomainError(f"alpha levels must lie in (0, 1), got {a}")


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------


def _read_rows(path: str) -> list[list[str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return [row for row in csv.reader(fh) if row]


def _parse_finite(token: str, path: str, row: int, col: int) -> float:
    try:
        value = float(token)
    except ValueError:
        value = math.nan
    if not math.isfinite(value):
        raise DataFormatError(
            f"{path}: row {row}, column {col}: cannot parse {token!r} as a finite number"
        )
    return value


def _ingest_clustered(path: str) -> tuple[ClusteredSample, tuple[str, ...]]:
    rows = _read_rows(path)
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    header = [cell.strip() for cell in rows[0]]
    if header == ["value", "cluster"]:
        clustered = True
    elif header == ["value"]:
        clustered = False
    else:
        raise DataFormatError(
            f"{path}: row 1: expected header 'value,cluster' or 'value', got {','.join(header)!r}"
        )
    if len(rows) == 1:
        raise DataFormatError(f"{path}: no data rows")
    values: list[float] = []
    clusters: list = []
    for row_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataFormatError(
                f"{path}: row {row_no}: expected {len(header)} columns, got {len(row)}"
            )
        values.append(_parse_finite(row[0].strip(), path, row_no, 1))
        if clustered:
            token = row[1].strip()
            if not token:
                raise DataFormatError(f"{path}: row {row_no}, column 2: empty cluster label")
            clusters.append(token)
        else:
            clusters.append(row_no)
    notes: tuple[str, ...] = ()
    if not clustered:
        notes = (
            f"{path}: no cluster column; treating each observation as its own cluster (iid)",
        )
    return ClusteredSample(values=tuple(values), cluster_ids=tuple(clusters)), notes


def ingest_clustered_csv(path: str) -> ClusteredSample:
    """Load a ``value,cluster`` CSV; single-column files degrade to iid with a stderr notice."""
    sample, notes = _ingest_clustered(path)
    for note in notes:
        print(note, file=sys.stderr)
    return sample


def ingest_trajectory_csv(path: str, k_lip: float) -> TrajectoryPanel:
    """Load a ``time,unit_1,...,unit_n`` CSV into a consistency-checked panel."""
    rows = _read_rows(path)
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    header = [cell.strip() for cell in rows[0]]
    if len(header) < 2 or header[0] != "time" or any(not h for h in header[1:]):
        raise DataFormatError(
            f"{path}: row 1: expected header 'time,unit_1,...,unit_n', got {','.join(header)!r}"
        )
    if len(rows) == 1:
        raise DataFormatError(f"{path}: no data rows")
    data = []
    for row_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataFormatError(
                f"{path}: row {row_no}: expected {len(header)} columns, got {len(row)}"
            )
        data.append(
            [_parse_finite(cell.strip(), path, row_no, col) for col, cell in enumerate(row, start=1)]
        )
    matrix = np.asarray(data, dtype=float)
    try:
        return TrajectoryPanel(times=matrix[:, 0], unit_values=matrix[:, 1:].T, k_lip=k_lip)
    except DataFormatError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Payload construction
# ---------------------------------------------------------------------------


def _alpha_map(critical: dict) -> dict:
    return {repr(float(a)): v for a, v in sorted(critical.items())}


def _ks_payload(command: Command, outcome: KsOutcome, **extra) -> dict:
    payload = {
        "command": command.value,
        "statistic": outcome.statistic,
        "side": outcome.side.value,
        "p_upper": outcome.p_upper,
        "p_upper_raw": outcome.p_upper_raw,
        "critical": _alpha_map(dict(outcome.critical_at)),
        "conservative": outcome.conservative,
        "notes": list(outcome.notes),
    }
    payload.update(extra)
    return payload


def _make_ref(config: RunConfig) -> Callable:
    if config.ref == "uniform":
        return lambda r: np.clip(r, 0.0, 1.0)
    if config.ref == "normal":
        loc, scale = config.ref_loc, config.ref_scale
        if not (math.isfinite(scale) and scale > 0):
            raise DomainError(f"--ref-scale must be positive, got {scale}")
        root2 = math.sqrt(2.0)
        return lambda r: 0.5 * (1.0 + math.erf((r - loc) / (scale * root2)))
    raise DomainError(f"unknown reference CDF {config.ref!r}; expected uniform or normal")


def _require(config: RunConfig, **fields) -> None:
    for name, value in fields.items():
        if value is None or (isinstance(value, tuple) and not value):
            raise DomainError(f"{config.command.value}: missing required option --{name}")


def _run_bound_eval(config: RunConfig) -> dict:
    _require(config, c=config.c, d=config.d, eps=config.eps_values)
    params = BoundParams(c=config.c, d=config.d)
    x = params.product
    results = [
        {
            "eps": eps,
            "p_upper": tail_bound(params, config.side, eps),
            "p_upper_raw": tail_bound_raw(params, config.side, eps),
        }
        for eps in config.eps_values
    ]
    payload = {
        "command": config.command.value,
        "c": params.c,
        "d": params.d,
        "x": x,
        "side": config.side.value,
        "denominator": denominator(x),
        "shift": one_sided_shift(x),
        "results": results,
    }
    if len(results) == 1:
        payload.update(results[0])
    return payload


def _run_critical(config: RunConfig) -> dict:
    _require(config, c=config.c, d=config.d)
    params = BoundParams(c=config.c, d=config.d)
    critical = {a: critical_statistic(params, config.side, a) for a in config.alpha_levels}
    return {
        "command": config.command.value,
        "c": params.c,
        "d": params.d,
        "x": params.product,
        "side": config.side.value,
        "critical": _alpha_map(critical),
    }


def _run_ks_one_sample(config: RunConfig) -> dict:
    if len(config.inputs) != 1:
        raise DomainError("kstest one-sample needs exactly one --data file")
    sample, notes = _ingest_clustered(config.inputs[0])
    for note in notes:
        print(note, file=sys.stderr)
    outcome = one_sample_clustered(
        sample, _make_ref(config), config.side, config.alpha_levels, notes=notes
    )
    spec = sample.cluster_spec()
    return _ks_payload(
        config.command,
        outcome,
        nu=spec.nu_n,
        c=outcome.params.c,
        d=outcome.params.d,
        n=sample.n,
        clusters=spec.k,
    )


def _run_ks_two_sample(config: RunConfig) -> dict:
    if len(config.inputs) != 2:
        raise DomainError("kstest two-sample needs --f and --g files")
    sample_f, notes_f = _ingest_clustered(config.inputs[0])
    sample_g, notes_g = _ingest_clustered(config.inputs[1])
    for note in notes_f + notes_g:
        print(note, file=sys.stderr)
    outcome = two_sample_clustered(
        sample_f, sample_g, config.side, config.alpha_levels, notes=notes_f + notes_g
    )
    return _ks_payload(
        config.command,
        outcome,
        nu=outcome.params[0].c,
        xi=outcome.params[1].c,
        n_f=sample_f.n,
        n_g=sample_g.n,
    )


def _run_lipschitz(config: RunConfig) -> dict:
    if len(config.inputs) != 2:
        raise DomainError("kstest lipschitz needs --f and --g files")
    _require(config, **{"k-lip": config.k_lip})
    panel_f = ingest_trajectory_csv(config.inputs[0], config.k_lip)
    panel_g = ingest_trajectory_csv(config.inputs[1], config.k_lip)
    lower, upper = lipschitz_sup_interval(panel_f, panel_g)
    outcome = lipschitz_two_sample(
        panel_f, panel_g, config.alpha_levels, exhaustive_grid=config.grid_exhaustive
    )
    return _ks_payload(
        config.command,
        outcome,
        c=outcome.params.c,
        d=outcome.params.d,
        x=outcome.params.product,
        n_units=panel_f.n_units,
        k_lip=panel_f.k_lip,
        interval=[lower, upper],
    )


def _run_simulate(config: RunConfig) -> dict:
    if config.command is Command.SIMULATE_GRID:
        _require(config, n=config.n, m=config.m_values, trials=config.trials, eps=config.eps_values)
        if len(config.eps_values) != 1:
            raise DomainError("simulate grid takes exactly one --eps threshold")
        report = conjecture_refutation_experiment(
            config.n, config.m_values, config.eps_values[0], config.trials, config.seed
        )
    elif config.command is Command.SIMULATE_COVERAGE:
        _require(config, n=config.n, trials=config.trials)
        eps_grid = config.eps_values or DEFAULT_COVERAGE_EPS
        report = iid_coverage(config.n, config.trials, config.seed, eps_grid, config.side)
    else:
        _require(config, n=config.n, trials=config.trials, **{"l-target": config.l_target})
        report = sharpness_experiment(config.n, config.l_target, config.trials, config.seed)
    payload = {"command": config.command.value}
    payload.update(report.to_dict())
    return payload


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _render_csv(payload: dict) -> str:
    lines: list[str] = []
    if "rows" in payload:  # simulation report
        lines.append("eps,empirical,bound,stderr,violation,label,m,exact")
        for r in payload["rows"]:
            lines.append(
                ",".join(
                    _fmt(r[k]) for k in ("eps", "empirical", "bound", "stderr", "violation", "label", "m", "exact")
                )
            )
    elif "results" in payload:  # bound curve
        lines.append("eps,bound")
        for r in payload["results"]:
            lines.append(f"{_fmt(r['eps'])},{_fmt(r['p_upper'])}")
    elif "critical" in payload:  # critical table / test outcome
        lines.append("alpha,critical")
        for alpha, value in payload["critical"].items():
            lines.append(f"{alpha},{_fmt(value)}")
    else:
        raise DomainError("this payload has no CSV rendering")
    return "\n".join(lines) + "\n"


def _render_table(payload: dict) -> str:
    lines = [f"{payload['command']}"]
    for key in sorted(payload):
        if key in ("command", "rows", "results", "critical", "notes", "config", "info"):
            continue
        lines.append(f"  {key:<14} {_fmt(payload[key])}")
    if "critical" in payload:
        lines.append("  critical:")
        for alpha, value in payload["critical"].items():
            lines.append(f"    alpha={alpha:<8} statistic={_fmt(value)}")
    if "results" in payload:
        lines.append("  eps        p_upper      p_upper_raw")
        for r in payload["results"]:
            lines.append(
                f"  {r['eps']:<10.6g} {r['p_upper']:<12.6g} {r['p_upper_raw']:<12.6g}"
            )
    if "rows" in payload:
        lines.append("  label        eps        empirical  bound      stderr     violation")
        for r in payload["rows"]:
            lines.append(
                f"  {r['label']:<12} {r['eps']:<10.6g} {r['empirical']:<10.6g} "
                f"{r['bound']:<10.6g} {r['stderr']:<10.6g} {_fmt(r['violation'])}"
            )
    return "\n".join(lines) + "\n"


_HANDLERS = {
    Command.BOUND_EVAL: _run_bound_eval,
    Command.CRITICAL: _run_critical,
    Command.KS_ONE_SAMPLE: _run_ks_one_sample,
    Command.KS_TWO_SAMPLE: _run_ks_two_sample,
    Command.LIPSCHITZ_TEST: _run_lipschitz,
    Command.SIMULATE_GRID: _run_simulate,
    Command.SIMULATE_COVERAGE: _run_simulate,
    Command.SIMULATE_SHARPNESS: _run_simulate,
}

_RENDERERS = {
    OutputFormat.JSON: _render_json,
    OutputFormat.PLOT_CSV: _render_csv,
    OutputFormat.TABLE: _render_table,
}


def run(config: RunConfig) -> int:
    """Execute a run description, write the result, and return the exit code."""
    payload = _HANDLERS[config.command](config)
    text = _RENDERERS[config.format](payload)
    if config.output:
        Path(config.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default="json")
    parser.add_argument("--out", default=None, metavar="PATH")


def _add_side(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--side", choices=["two", "plus", "minus"], default="two")


def _add_alpha(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--alpha",
        type=float,
        nargs="+",
        default=list(DEFAULT_ALPHAS),
        help="significance levels (default: 0.01 0.05 0.1)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvconc",
        description="Concentration bounds and KS-like tests for randomized functions of bounded variation",
    )
    top = parser.add_subparsers(dest="group", required=True)

    bound = top.add_parser("bound", help="evaluate or invert tail bounds")
    bound_sub = bound.add_subparsers(dest="subcommand", required=True)
    for name in ("eval", "critical"):
        p = bound_sub.add_parser(name)
        p.add_argument("--c", type=float, required=True, help="McDiarmid coefficient")
        p.add_argument("--d", type=float, required=True, help="downward-variation coefficient")
        _add_side(p)
        if name == "eval":
            p.add_argument("--eps", type=float, nargs="+", required=True)
        else:
            _add_alpha(p)
        _add_common(p)

    kstest = top.add_parser("kstest", help="hypothesis tests on data files")
    ks_sub = kstest.add_subparsers(dest="subcommand", required=True)

    one = ks_sub.add_parser("one-sample")
    one.add_argument("--data", required=True, metavar="CSV")
    one.add_argument("--ref", choices=["uniform", "normal"], default="uniform")
    one.add_argument("--ref-loc", type=float, default=0.0)
    one.add_argument("--ref-scale", type=float, default=1.0)
    _add_side(one)
    _add_alpha(one)
    _add_common(one)

    two = ks_sub.add_parser("two-sample")
    two.add_argument("--f", required=True, metavar="CSV")
    two.add_argument("--g", required=True, metavar="CSV")
    _add_side(two)
    _add_alpha(two)
    _add_common(two)

    lip = ks_sub.add_parser("lipschitz")
    lip.add_argument("--f", required=True, metavar="CSV")
    lip.add_argument("--g", required=True, metavar="CSV")
    lip.add_argument("--k-lip", type=float, required=True, dest="k_lip")
    lip.add_argument("--grid-exhaustive", action="store_true")
    _add_alpha(lip)
    _add_common(lip)

    sim = top.add_parser("simulate", help="Monte Carlo validation harnesses")
    sim_sub = sim.add_subparsers(dest="subcommand", required=True)

    grid = sim_sub.add_parser("grid")
    grid.add_argument("--n", type=int, required=True)
    grid.add_argument("--m", type=int, nargs="+", required=True)
    grid.add_argument("--eps", type=float, required=True)
    grid.add_argument("--trials", type=int, required=True)
    grid.add_argument("--seed", type=int, default=0)
    _add_common(grid)

    cov = sim_sub.add_parser("coverage")
    cov.add_argument("--n", type=int, required=True)
    cov.add_argument("--trials", type=int, required=True)
    cov.add_argument("--seed", type=int, default=0)
    cov.add_argument("--eps", type=float, nargs="+", default=list(DEFAULT_COVERAGE_EPS))
    _add_side(cov)
    _add_common(cov)

    sharp = sim_sub.add_parser("sharpness")
    sharp.add_argument("--n", type=int, required=True)
    sharp.add_argument("--l-target", type=float, required=True, dest="l_target")
    sharp.add_argument("--trials", type=int, required=True)
    sharp.add_argument("--seed", type=int, default=0)
    _add_common(sharp)

    return parser


_COMMAND_BY_PATH = {
    ("bound", "eval"): Command.BOUND_EVAL,
    ("bound", "critical"): Command.CRITICAL,
    ("kstest", "one-sample"): Command.KS_ONE_SAMPLE,
    ("kstest", "two-sample"): Command.KS_TWO_SAMPLE,
    ("kstest", "lipschitz"): Command.LIPSCHITZ_TEST,
    ("simulate", "grid"): Command.SIMULATE_GRID,
    ("simulate", "coverage"): Command.SIMULATE_COVERAGE,
    ("simulate", "sharpness"): Command.SIMULATE_SHARPNESS,
}


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    command = _COMMAND_BY_PATH[(ns.group, ns.subcommand)]
    inputs: tuple[str, ...] = ()
    if command is Command.KS_ONE_SAMPLE:
        inputs = (ns.data,)
    elif command in (Command.KS_TWO_SAMPLE, Command.LIPSCHITZ_TEST):
        inputs = (ns.f, ns.g)
    eps = getattr(ns, "eps", None)
    if eps is None:
        eps_values: tuple[float, ...] = ()
    elif isinstance(eps, list):
        eps_values = tuple(eps)
    else:
        eps_values = (eps,)
    m = getattr(ns, "m", None)
    return RunConfig(
        command=command,
        side=TailSide.parse(getattr(ns, "side", "two")),
        alpha_levels=tuple(getattr(ns, "alpha", DEFAULT_ALPHAS)),
        inputs=inputs,
        output=ns.out,
        format=OutputFormat(ns.format),
        c=getattr(ns, "c", None),
        d=getattr(ns, "d", None),
        eps_values=eps_values,
        n=getattr(ns, "n", None),
        m_values=tuple(m) if m else (),
        trials=getattr(ns, "trials", None),
        seed=getattr(ns, "seed", 0),
        k_lip=getattr(ns, "k_lip", None),
        l_target=getattr(ns, "l_target", None),
        ref=getattr(ns, "ref", "uniform"),
        ref_loc=getattr(ns, "ref_loc", 0.0),
        ref_scale=getattr(ns, "ref_scale", 1.0),
        grid_exhaustive=getattr(ns, "grid_exhaustive", False),
    )


def main(argv: Sequence[str] | None = None) -> int:
    try:
        config = parse_args(argv)
        return run(config)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else 2
    except BvconcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())
