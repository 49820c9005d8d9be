"""Interior shrinkage and polynomial-removal checks across sample sizes."""

import argparse
import warnings

from boostedhp.theory import (
    empirical_shrinkage_error,
    exponential_shrinkage_check,
    polynomial_annihilation_error,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[200, 400, 800, 1600])
    parser.add_argument("--mu", type=float, default=1.6e-5)
    args = parser.parse_args()
    warnings.simplefilter("ignore")

    header = "check".ljust(24) + "".join(f"n={n}".rjust(12) for n in args.sizes)
    print(header)
    for kind in ("sine", "cosine"):
        for k in (1, 2, 3):
            for m in (1, 2, 5):
                errs = [empirical_shrinkage_error(k, n, args.mu, m, kind).empirical_sup_error for n in args.sizes]
                print(f"{kind} k={k} m={m}".ljust(24) + "".join(f"{e:12.6f}" for e in errs))
    for c in (-3.0, 3.0):
        errs = [exponential_shrinkage_check(c, n, args.mu).empirical_sup_error for n in args.sizes]
        print(f"exp c={c:g}".ljust(24) + "".join(f"{e:12.6f}" for e in errs))
    for d, m in ((2, 1), (3, 1), (7, 1), (7, 2)):
        errs = [polynomial_annihilation_error(d, n, 1600.0 * (n / 100) ** 4, m) for n in args.sizes]
        print(f"poly d={d} m={m}".ljust(24) + "".join(f"{e:12.6f}" for e in errs))


if __name__ == "__main__":
    main()
