"""End-to-end run: hidden H_t, strong base, Fourier sampling, recovered t."""
import argparse

from hssp.group import GroupParams
from hssp.quantum import exact_distribution, qft_apply, random_coset_state, run_fourier_sampling
from hssp.reduction import run_composite_pipeline
from hssp.strong_base import build_fhsp, find_strong_base
from hssp.symmetry import make_oracle, recover_hidden


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--t", type=int, default=1)
    ap.add_argument("--N", type=int, default=None, help="run the composite pipeline instead")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if args.N is not None:
        res = run_composite_pipeline(args.N, args.p, args.r, args.t, 0.01, args.seed)
        print(f"N={args.N}: base {res.base_points} after {res.base_attempts} draw(s), "
              f"{res.rounds} round(s), t_hat={res.t_hat}, classical={res.reference_t}")
        return

    params = GroupParams(args.p, args.n, args.r)
    oracle = make_oracle(params, args.t)
    base = find_strong_base(params, 0.01, args.seed)
    hsp = build_fhsp(oracle, base)
    print(f"G = Z_{params.modulus} x| Z_{params.p}, phi(1)(1) = {params.phi_gen}, hidden t = {args.t}")
    print(f"strong base {base.points} ({base.attempts} draw(s))")
    state = qft_apply(random_coset_state(hsp, args.seed))
    support = exact_distribution(state)
    print(f"one coset state: {len(support)} outcomes, e.g.",
          ", ".join(f"({d['u']},{d['v']}):{d['prob']:.4f}" for d in support[:4]))
    run = run_fourier_sampling(hsp, args.seed, extra_samples=2)
    print(f"samples {[tuple(s) for s in run.samples]} -> t_hat = {run.t} "
          f"(classical: {recover_hidden(oracle)})")


if __name__ == "__main__":
    main()
