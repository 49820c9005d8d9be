"""Monte-Carlo size and power of the robust autocorrelation test."""

import argparse

import numpy as np
from scipy import signal

from boostedhp.panel import robust_ac_test


def rejection_rate(draw, seeds, K):
    return float(np.mean([robust_ac_test(draw(np.random.default_rng(s)), K).reject for s in seeds]))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=500)
    parser.add_argument("--K", type=int, nargs="+", default=[6, 18])
    parser.add_argument("--seeds", type=int, default=2000)
    parser.add_argument("--rho", type=float, nargs="+", default=[0.1, 0.2, 0.5])
    args = parser.parse_args()

    seeds = range(args.seeds)
    print(f"n={args.n}, {args.seeds} seeds, nominal level 5%")
    print("K   design            rejection")
    for K in args.K:
        size = rejection_rate(lambda g: g.standard_normal(args.n), seeds, K)
        print(f"{K:<3} iid Gaussian      {size:.4f}")
        garch = rejection_rate(lambda g: g.standard_normal(args.n) * np.exp(0.5 * g.standard_normal(args.n)), seeds, K)
        print(f"{K:<3} iid heavy-tailed  {garch:.4f}")
        for rho in args.rho:
            power = rejection_rate(
                lambda g: signal.lfilter([1.0], [1.0, -rho], g.standard_normal(args.n)), seeds, K
            )
            print(f"{K:<3} AR(1) rho={rho:<5}  {power:.4f}")


if __name__ == "__main__":
    main()
