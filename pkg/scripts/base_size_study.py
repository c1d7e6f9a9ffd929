"""How often a uniform l-subset of K is a strong base, next to the union-bound size.

Prints exact and sampled success rates against l, and the smallest l reaching
the target rate.
"""
import argparse

import numpy as np

from hssp.group import GroupParams
from hssp.strong_base import base_size, strong_probability, verify_strong_base


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--epsilon", type=float, default=0.01)
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    params = GroupParams(args.p, args.n, 1)
    m = params.modulus
    rng = np.random.default_rng(args.seed)
    bound = base_size(params, args.epsilon)
    needed = None
    print(f"p={args.p} n={args.n} |K|={m}  union-bound size l={bound}")
    print(f"{'l':>4} {'exact':>8} {'sampled':>8}")
    for ell in range(args.p, m + 1):
        exact = float(strong_probability(params, ell))
        hits = sum(verify_strong_base(params, rng.choice(m, size=ell, replace=False).tolist()).ok
                   for _ in range(args.trials))
        mark = " <- union bound" if ell == bound else ""
        print(f"{ell:>4} {exact:>8.4f} {hits / args.trials:>8.4f}{mark}")
        if needed is None and exact >= 1 - args.epsilon:
            needed = ell
        if exact > 1 - 1e-6 and ell > bound:
            break
    print(f"smallest l with P(strong) >= {1 - args.epsilon}: {needed}")


if __name__ == "__main__":
    main()
