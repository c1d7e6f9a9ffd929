"""Command-line front end.

    hssp verify-theorems --p 3 --n 2 --r 1
    hssp separation-table --p 5 --n 2
    hssp strong-base --p 3 --n 2 --epsilon 0.01 --trials 1000 --seed 7
    hssp solve --p 3 --n 2 --r 1 --t all --seed 7 --trials 20
    hssp solve --N 36 --p 3 --r 1 --t 2 --seed 7

Exit codes: 0 all checks pass, 2 parameter error, 3 hypothesis violation,
4 check failure, 5 capacity.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .errors import CheckFailure, HsspError, ParameterError
from .group import GroupParams
from .quantum import run_fourier_sampling
from .reduction import run_composite_pipeline, validate
from .strong_base import (
    average_separation_probability,
    base_size,
    build_fhsp,
    count_separators,
    find_strong_base,
    pair_averaged_separation,
    sample_base,
    separator_count_matrix,
    strong_probability,
    verify_strong_base,
)
from .symmetry import make_oracle, recover_hidden
from .theorems import run_theorem_suite


@dataclass
class ExperimentConfig:
    command: str
    p: int
    n: int = 2
    r: int = 1
    N: Optional[int] = None
    t: Optional[str] = None
    epsilon: float = 0.01
    seed: Optional[int] = None
    trials: int = 1
    out: Optional[str] = None

    def require_seed(self) -> int:
        if self.seed is None:
            raise ParameterError(f"{self.command} is randomized and needs --seed")
        return self.seed

    def targets(self, p: int) -> list[int]:
        if self.t is None or self.t == "all":
            return list(range(p))
        try:
            t = int(self.t)
        except ValueError:
            raise ParameterError(f"--t must be an integer or 'all', got {self.t!r}") from None
        if not 0 <= t < p:
            raise ParameterError(f"--t must lie in 0..p-1, got {t}")
        return [t]


@dataclass
class ExperimentReport:
    config: dict
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    version: str = __version__
    wall_clock_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def check(self, name: str, passed: bool, **detail):
        self.checks.append({"name": name, "passed": bool(passed), **detail})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def rational(q: Fraction) -> dict:
    return {"exact": f"{q.numerator}/{q.denominator}", "decimal": f"{float(q):.12f}"}


def cmd_verify_theorems(cfg: ExperimentConfig) -> ExperimentReport:
    params = GroupParams(cfg.p, cfg.n, cfg.r)
    report = ExperimentReport(asdict(cfg))
    for res in run_theorem_suite(params, cfg.N):
        report.checks.append(res.to_dict())
    return report


def cmd_separation_table(cfg: ExperimentConfig) -> ExperimentReport:
    params = GroupParams(cfg.p, cfg.n, cfg.r)
    report = ExperimentReport(asdict(cfg))
    p, m = params.p, params.modulus
    counts = separator_count_matrix(params)
    iu, iv = np.triu_indices(m, k=1)
    observed = counts[iu, iv]
    formula = np.array([count_separators(params, int(u), int(v)) for u, v in zip(iu, iv)])
    case2 = formula == p ** (params.n - 1)
    report.check("per-pair counts match closed form", np.array_equal(observed, formula),
                 pairs=int(len(iu)))
    exhaustive = pair_averaged_separation(params, exhaustive=True)
    closed = average_separation_probability(params)
    report.check("pair-averaged probability matches formula", exhaustive == closed)
    report.check("case-2 pair count is p^n (p-1)/2", int(case2.sum()) * 2 == m * (p - 1))
    report.results = {
        "case1": {"pairs": int((~case2).sum()), "separators_per_pair": m},
        "case2": {"pairs": int(case2.sum()), "separators_per_pair": p ** (params.n - 1)},
        "average_exhaustive": rational(exhaustive),
        "average_formula": rational(closed),
    }
    return report


def cmd_strong_base(cfg: ExperimentConfig) -> ExperimentReport:
    params = GroupParams(cfg.p, cfg.n, cfg.r)
    seed = cfg.require_seed()
    report = ExperimentReport(asdict(cfg))
    ell = base_size(params, cfg.epsilon)
    seeds = np.random.default_rng(seed).integers(2**63, size=cfg.trials)
    ok = sum(verify_strong_base(params, sample_base(params, cfg.epsilon, int(s))).ok for s in seeds)
    rate = ok / cfg.trials
    target = 1 - cfg.epsilon
    sigma = math.sqrt(target * cfg.epsilon / cfg.trials)
    report.check("success rate >= 1 - epsilon (3 sigma)", rate >= target - 3 * sigma,
                 threshold=round(target - 3 * sigma, 12))
    report.results = {
        "ell": ell,
        "successes": ok,
        "trials": cfg.trials,
        "rate": round(rate, 12),
        "exact_success_probability": rational(strong_probability(params, min(ell, params.modulus))),
    }
    return report


def cmd_solve(cfg: ExperimentConfig) -> ExperimentReport:
    seed = cfg.require_seed()
    report = ExperimentReport(asdict(cfg))
    # independent streams for base sampling and for the sampler itself
    seeds = [tuple(int(x) for x in row)
             for row in np.random.default_rng(seed).integers(2**63, size=(cfg.trials, 2))]
    runs = []
    if cfg.N is not None:
        cp = validate(cfg.N, cfg.p, cfg.r)
        for t in cfg.targets(cp.p):
            for s, _ in seeds:
                res = run_composite_pipeline(cfg.N, cfg.p, cfg.r, t, cfg.epsilon, s)
                runs.append({"t": t, "t_hat": res.t_hat, "reference": res.reference_t,
                             "rounds": res.rounds, "base_attempts": res.base_attempts})
    else:
        params = GroupParams(cfg.p, cfg.n, cfg.r)
        for t in cfg.targets(params.p):
            oracle = make_oracle(params, t)
            reference = recover_hidden(oracle)
            for base_seed, run_seed in seeds:
                base = find_strong_base(params, cfg.epsilon, base_seed)
                run = run_fourier_sampling(build_fhsp(oracle, base), run_seed)
                runs.append({"t": t, "t_hat": run.t, "reference": reference,
                             "rounds": run.rounds, "base_attempts": base.attempts})
    report.check("quantum result equals hidden t", all(r["t_hat"] == r["t"] for r in runs))
    report.check("quantum result equals classical recover_hidden",
                 all(r["t_hat"] == r["reference"] for r in runs))
    rounds = [r["rounds"] for r in runs]
    report.results = {"runs": runs, "mean_rounds": round(float(np.mean(rounds)), 12),
                      "max_rounds": max(rounds)}
    return report


COMMANDS = {
    "verify-theorems": cmd_verify_theorems,
    "separation-table": cmd_separation_table,
    "strong-base": cmd_strong_base,
    "solve": cmd_solve,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True)
    common.add_argument("--n", type=int, default=2)
    common.add_argument("--r", type=int, default=1)
    common.add_argument("--N", type=int, default=None)
    common.add_argument("--t", default=None, help="hidden index, or 'all'")
    common.add_argument("--epsilon", type=float, default=0.01)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--out", default=None, help="write the JSON report here")
    common.add_argument("--json", action="store_true", help="print the JSON report to stdout")
    parser = argparse.ArgumentParser(prog="hssp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    trials = args.trials if args.trials is not None else (1000 if args.command == "strong-base" else 1)
    cfg = ExperimentConfig(args.command, args.p, args.n, args.r, args.N, args.t,
                           args.epsilon, args.seed, trials, args.out)
    start = time.perf_counter()
    try:
        if cfg.trials < 1:
            raise ParameterError("--trials must be positive")
        report = COMMANDS[cfg.command](cfg)
    except HsspError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    report.wall_clock_seconds = round(time.perf_counter() - start, 3)
    text = report.to_json()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)
    else:
        for c in report.checks:
            print(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}")
        for key, val in report.results.items():
            if key != "runs":
                print(f"  {key}: {val}")
    return 0 if report.passed else CheckFailure.exit_code


if __name__ == "__main__":
    sys.exit(main())
