"""Filter a single series from a CSV with HP, 2HP, bHP and AR(p) and print a summary.

Without an input file a simulated DGP1 series is used.
"""

import argparse

import numpy as np

from boostedhp import BoostConfig, boosted_hp, boosted_hp_bic, hp_smooth
from boostedhp.ar import ARSpec, ar_trend_cycle
from boostedhp.dgp import DGPSpec, gen_dgp
from boostedhp.panel import load_panel


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", nargs="?")
    parser.add_argument("--column")
    parser.add_argument("--frequency", default="quarterly")
    args = parser.parse_args()

    if args.csv:
        panel = load_panel(args.csv, frequency=args.frequency)
        s = next(s for s in panel.series if args.column in (None, s.name))
        a, b = s.usable_range
        y, name = s.values[a:b], s.name
    else:
        y, name = gen_dgp(DGPSpec(1, n=200)).y, "simulated DGP1"

    cfg = BoostConfig(frequency=args.frequency)
    fits = {
        "HP": hp_smooth(y, cfg.resolved_lambda),
        "2HP": boosted_hp(y, cfg.resolved_lambda, 2),
        "bHP": boosted_hp_bic(y, cfg),
        "AR": ar_trend_cycle(y, ARSpec.for_frequency(args.frequency)),
    }
    print(f"{name}: n={y.size}, lambda={cfg.resolved_lambda:g}")
    for label, res in fits.items():
        c = res.cycle[np.isfinite(res.cycle)]
        print(f"  {label:4s} m={res.iterations:<4d} cycle sd={c.std(ddof=1):9.4f} flags={list(res.flags)}")


if __name__ == "__main__":
    main()
