"""Per-pair separator counts and pair-averaged separation rates over a grid of (p, n)."""
import argparse
from collections import Counter

import numpy as np

from hssp.group import GroupParams
from hssp.strong_base import average_separation_probability, pair_averaged_separation, separator_count_matrix


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--ns", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()
    print(f"{'p':>3} {'n':>2} {'|K|':>5}  {'counts (separators: pairs)':<34} {'average':>10} {'formula':>10}")
    for p in args.primes:
        for n in args.ns:
            params = GroupParams(p, n, 1)
            if params.modulus > 2000:
                continue
            counts = separator_count_matrix(params)
            hist = Counter(counts[np.triu_indices(params.modulus, k=1)].tolist())
            desc = ", ".join(f"{k}: {v}" for k, v in sorted(hist.items()))
            avg = pair_averaged_separation(params)
            print(f"{p:>3} {n:>2} {params.modulus:>5}  {desc:<34} {str(avg):>10} "
                  f"{str(average_separation_probability(params)):>10}")


if __name__ == "__main__":
    main()
