import argparse
import json
import logging
import time
from pathlib import Path

from boostedhp.bench import BenchConfig, render_report, run_experiment

ROOT = Path(__file__).resolve().parent.parent


def bench_from_config(name: str, description: str) -> None:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--config", default=str(ROOT / "configs" / f"{name}.json"))
    parser.add_argument("--replications", type=int)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out-dir", default=str(ROOT / "results"))
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    raw = json.loads(Path(args.config).read_text())
    if args.replications is not None:
        raw["replications"] = args.replications
    if args.seed is not None:
        raw["base_seed"] = args.seed
    config = BenchConfig.from_dict(raw)

    start = time.perf_counter()
    report = run_experiment(config, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for fmt, ext in (("csv", "csv"), ("markdown_table", "md"), ("json", "json")):
        (out / f"{name}.{ext}").write_text(render_report(report, fmt))
    print(render_report(report, "markdown_table"))
    print(f"{len(report.cells)} cells, {config.replications} replications, {time.perf_counter() - start:.1f}s -> {out}")
