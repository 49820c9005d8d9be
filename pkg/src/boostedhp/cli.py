"""Command-line entry point: ``boostedhp {filter,simulate,bench,aggregate,actest,check}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error (or an
unreliable benchmark cell).
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from . import SCHEMA_VERSION
from .ar import ARSpec
from .bench import BenchConfig, render_report, run_experiment
from .boosting import default_lambda
from .dgp import RNG_ALGORITHM, DGPSpec, gen_dgp
from .errors import FilterError, NumericalError, ParameterError, SpecError
from .panel import (
    DEFAULT_FLIPS,
    DEFAULT_K,
    aggregate_index,
    filter_panel,
    load_panel,
    robust_ac_test,
    standardize_and_flip,
    tidy_frame,
    trim_missing,
)
from .svg import Panel, read_shading, render
from .theory import run_checks

logger = logging.getLogger("boostedhp")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# output helpers


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv_with_header(frame: pd.DataFrame, config: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    buf.write("# config=" + json.dumps(config, sort_keys=True, default=str) + "\n")
    frame.to_csv(buf, index=False, float_format="%.17g", lineterminator="\n")
    return buf.getvalue()


def _resolve_method(args) -> tuple[str, int | None]:
    if args.method == "2hp":
        return "bhp_fixed", 2
    if args.method == "bhp" and args.fixed_m is not None:
        return "bhp_fixed", args.fixed_m
    return args.method, None


def _method_label(method: str, m: int | None, p: int | None) -> str:
    if method == "bhp_fixed":
        return {1: "HP", 2: "2HP"}.get(m, f"bHP(m={m})")
    return {"hp": "HP", "bhp": "bHP", "ar": f"AR({p})"}[method]


def _load(args):
    return load_panel(
        args.input,
        date_column=args.date_column,
        skip_metadata_rows=args.skip_metadata_rows,
        frequency=args.frequency,
        interpolate_interior=args.interpolate_interior,
    )


def _filter(args, panel):
    method, m = _resolve_method(args)
    if method != "ar" and args.lam is None and panel.frequency not in ("quarterly", "monthly", "annual"):
        raise UsageError("frequency could not be determined; pass --frequency or --lambda")
    p = args.p
    if method == "ar" and p is None:
        if panel.frequency not in ("quarterly", "monthly"):
            raise UsageError("pass --p for AR filtering at this frequency")
        p = ARSpec.for_frequency(panel.frequency).p
    cycles = filter_panel(panel, method, lam=args.lam, m=m, m_max=args.mmax, p=p)
    config = {
        "method": method,
        "m": m,
        "lambda": cycles.lam,
        "m_max": args.mmax,
        "p": p,
        "frequency": panel.frequency,
        "input": str(args.input),
    }
    return cycles, config, _method_label(method, m, p)


# --------------------------------------------------------------------------
# subcommands


def _m_hat(cycles, sid, config):
    if config["method"] == "ar":
        return np.nan
    return cycles.m_hat.get(sid, config["m"] or 1)


def cmd_filter(args) -> int:
    panel = _load(args)
    if args.column:
        keep = [s for s in panel.series if s.name in args.column]
        missing = set(args.column) - {s.name for s in keep}
        if missing:
            raise UsageError(f"unknown column(s): {sorted(missing)}")
        panel = dataclasses.replace(panel, series=keep)
    cycles, config, label = _filter(args, panel)

    rows = []
    for j, s in enumerate(panel.series):
        a, b = s.usable_range
        if s.id in cycles.excluded:
            logger.warning("series %s skipped: %s", s.name, cycles.excluded[s.id])
            continue
        rows.append(pd.DataFrame({
            "date": panel.dates[a:b],
            "series": s.name,
            "raw": s.values[a:b],
            "trend": cycles.trend[a:b, j],
            "cycle": cycles.cycle[a:b, j],
            "method": label,
            "m_hat": _m_hat(cycles, s.id, config),
        }))
    if not rows:
        raise FilterError("no series could be filtered")
    config["excluded"] = {str(k): v for k, v in cycles.excluded.items()}
    _emit(_csv_with_header(pd.concat(rows, ignore_index=True), config), args.output)

    if args.svg:
        shading = read_shading(args.shading) if args.shading else None
        j = next(j for j, s in enumerate(panel.series) if s.id not in cycles.excluded)
        name = panel.series[j].name
        panels = [
            Panel(f"{name}: data and {label} trend", [("data", cycles.raw[:, j]), ("trend", cycles.trend[:, j])]),
            Panel(f"{name}: {label} cycle", [("cycle", cycles.cycle[:, j])]),
        ]
        Path(args.svg).write_text(render(panel.dates, panels, shading))
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = DGPSpec(
        id=args.dgp, n=args.n, frequency=args.frequency, c=args.c, sigma_e=args.sigma_e, seed=args.seed
    )
    draw = gen_dgp(spec)
    config = dataclasses.asdict(spec) | {"rng": RNG_ALGORITHM, "sigma_e_resolved": spec.scale}
    _emit(_csv_with_header(draw.to_frame(), config), args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    raw = json.loads(Path(args.config).read_text())
    if args.replications is not None:
        raw["replications"] = args.replications
    if args.seed is not None:
        raw["base_seed"] = args.seed
    config = BenchConfig.from_dict(raw)
    report = run_experiment(config, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.name
    (out / f"{stem}.csv").write_text(render_report(report, "csv"))
    (out / f"{stem}.md").write_text(render_report(report, "markdown_table"))
    (out / f"{stem}.json").write_text(render_report(report, "json"))
    if not args.quiet:
        sys.stdout.write(render_report(report, "markdown_table"))
    if report.any_unreliable:
        logger.error("one or more cells had more than 1%% failed replications")
        return EXIT_NUMERIC
    return EXIT_OK


def _flip_ids(spec: str, frequency: str) -> tuple[int, ...]:
    if spec == "none":
        return ()
    if spec == "default":
        if frequency not in DEFAULT_FLIPS:
            raise UsageError("--flips default needs a quarterly or monthly panel")
        return DEFAULT_FLIPS[frequency]
    ids: list[int] = []
    try:
        for part in spec.split(","):
            part = part.strip()
            if "-" in part:
                a, b = part.split("-")
                ids.extend(range(int(a), int(b) + 1))
            elif part:
                ids.append(int(part))
    except ValueError:
        raise UsageError(f"cannot parse --flips {spec!r}; use 'default', 'none' or e.g. '58-72,197'") from None
    return tuple(ids)


def _pipeline(args):
    panel = _load(args)
    cycles, config, label = _filter(args, panel)
    flips = _flip_ids(args.flips, panel.frequency)
    cycles = standardize_and_flip(cycles, flips)
    index = aggregate_index(cycles, method=label)
    config |= {"flips": list(cycles.flipped), "excluded": {str(k): v for k, v in cycles.excluded.items()}}
    return panel, cycles, index, config


def cmd_aggregate(args) -> int:
    panel, cycles, index, config = _pipeline(args)
    if args.tidy:
        Path(args.tidy).write_text(_csv_with_header(tidy_frame(cycles), config))
    _emit(_csv_with_header(index.to_frame(), config), args.output)
    if args.svg:
        shading = read_shading(args.shading) if args.shading else None
        fig = Panel(f"Aggregate cyclical index ({index.method})", [("index", index.values)], clamp=args.clamp)
        Path(args.svg).write_text(render(index.dates, [fig], shading))
    return EXIT_OK


def cmd_actest(args) -> int:
    panel, cycles, index, config = _pipeline(args)
    K = args.K or DEFAULT_K.get(panel.frequency)
    if K is None:
        raise UsageError("pass --K for panels that are neither quarterly nor monthly")
    result = robust_ac_test(trim_missing(index.values), K)
    doc = {"schema_version": SCHEMA_VERSION, "config": config | {"K": K}, "result": result.to_dict()}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    rows = run_checks(n=args.n, mu=args.mu)
    if args.format == "csv":
        text = _csv_with_header(pd.DataFrame(rows), {"n": args.n, "mu": args.mu})
    else:
        doc = {"schema_version": SCHEMA_VERSION, "config": {"n": args.n, "mu": args.mu}, "checks": rows}
        text = json.dumps(doc, indent=2, default=lambda o: o.item() if hasattr(o, "item") else str(o)) + "\n"
    _emit(text, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _add_input(p, methods=("hp", "2hp", "bhp", "ar")):
    p.add_argument("input", help="CSV with a date column followed by series columns")
    p.add_argument("--date-column", default=0, type=lambda s: int(s) if s.isdigit() else s)
    p.add_argument("--skip-metadata-rows", type=int, default=0,
                   help="rows between the header and the data (FRED-QD: 2, FRED-MD: 1)")
    p.add_argument("--frequency", choices=("quarterly", "monthly", "annual", "custom"))
    p.add_argument("--interpolate-interior", action="store_true")
    p.add_argument("--method", choices=methods, default="bhp")
    p.add_argument("--fixed-m", type=int, help="fixed number of bHP iterations instead of BIC")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--mmax", type=int, default=200)
    p.add_argument("--p", type=int, help="AR lag order (default 4 quarterly, 12 monthly)")
    p.add_argument("-o", "--output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boostedhp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("filter", help="filter each series of a CSV")
    _add_input(p)
    p.add_argument("--column", action="append", help="restrict to this series (repeatable)")
    p.add_argument("--svg")
    p.add_argument("--shading", help="CSV of (start, end) dates to shade in the SVG")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("simulate", help="draw one series from a simulation design")
    p.add_argument("--dgp", type=int, required=True, choices=range(1, 11), metavar="{1..10}")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--c", type=float)
    p.add_argument("--sigma-e", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frequency", choices=("quarterly", "monthly"), default="quarterly")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="run a Monte-Carlo MSE benchmark from a JSON config")
    p.add_argument("config")
    p.add_argument("--replications", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--name", default="bench_report")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_bench)

    for name, func, helptext in (
        ("aggregate", cmd_aggregate, "aggregate cyclical index of a panel"),
        ("actest", cmd_actest, "robust autocorrelation test on a panel's aggregate index"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_input(p)
        p.add_argument("--flips", default="default", help="'default', 'none' or ids like '58-72,197'")
        if name == "aggregate":
            p.add_argument("--tidy", help="write per-series tidy CSV here")
            p.add_argument("--svg")
            p.add_argument("--shading")
            p.add_argument("--clamp", type=float, default=6.0, help="display-only y-limit for the SVG")
        else:
            p.add_argument("--K", type=int)
        p.set_defaults(func=func)

    p = sub.add_parser("check", help="numerical checks of the residual operator")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--mu", type=float, default=1.6e-5)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ParameterError, SpecError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FilterError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
