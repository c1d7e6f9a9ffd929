"""Acceptance checks, one recorded line per criterion (see the terminal summary).

Run with ``pytest tests/test_acceptance.py -v``.
"""
import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from hssp.errors import HypothesisViolation
from hssp.group import GroupParams
from hssp.quantum import coset_classes, coset_state, qft_apply, solve_hsp
from hssp.reduction import (
    check_cofactor_triviality,
    check_isomorphism,
    phi_triviality_check,
    run_composite_pipeline,
    validate,
)
from hssp.strong_base import (
    StrongBase,
    base_size,
    build_fhsp,
    count_separators,
    find_strong_base,
    pair_averaged_separation,
    sample_base,
    separator_count_matrix,
    strong_probability,
    verify_strong_base,
    verify_strong_base_def,
    right_coset_labels,
)
from hssp.symmetry import make_oracle, recover_hidden
from hssp.theorems import run_theorem_suite

GRID = [(p, n, r) for p in (3, 5) for n in (2, 3) for r in (1, 2)]


def same_partition(a, b):
    return np.array_equal(a[:, None] == a[None, :], b[:, None] == b[None, :])


def test_criterion_1_theorem_suite(criterion):
    start = time.perf_counter()
    failures = []
    for p, n, r in GRID:
        params = GroupParams(p, n, r)
        assert params.order <= 10**6
        failures += [(p, n, r, c.name, c.counterexample) for c in run_theorem_suite(params) if not c.passed]
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 30
    criterion(1, ok, f"{len(GRID)} parameter sets, {len(failures)} failing checks, {elapsed:.1f}s (< 30s)")
    assert not failures, failures
    assert elapsed < 30


def test_criterion_2_separation_exactness(criterion):
    mismatched = 0
    for p, n in [(3, 2), (5, 2), (3, 3), (5, 3), (7, 2)]:
        params = GroupParams(p, n, 1)
        counts = separator_count_matrix(params)
        m = params.modulus
        step = p ** (n - 1)
        for u in range(m):
            for v in range(u + 1, m):
                expected = step if (v - u) % step == 0 else m
                mismatched += counts[u, v] != expected or count_separators(params, u, v) != expected
        closed = 1 - Fraction((p - 1) ** 2, p * (m - 1))
        mismatched += pair_averaged_separation(params) != closed
    quoted = {
        (3, 2): Fraction(5, 6),
        (5, 2): Fraction(13, 15),
        (3, 3): Fraction(37, 39),
    }
    got = {k: pair_averaged_separation(GroupParams(*k, 1)) for k in quoted}
    ok = mismatched == 0 and got == quoted
    criterion(2, ok, "averages " + ", ".join(f"{k}={v}" for k, v in got.items()))
    assert mismatched == 0
    assert got == quoted


def test_criterion_3_verifier_agreement(criterion):
    rng = np.random.default_rng(2024)
    disagreements, strong = 0, 0
    tested = 0
    for r in (1, 2):
        params = GroupParams(3, 2, r)
        for _ in range(200):
            size = int(rng.integers(1, params.modulus + 1))
            B = [int(x) for x in rng.choice(params.modulus, size=size, replace=False)]
            sep = verify_strong_base(params, B).ok
            strong += sep
            tested += 1
            for t in range(params.p):
                disagreements += sep != verify_strong_base_def(params, B, t).ok
    criterion(3, disagreements == 0, f"{tested} bases ({strong} strong), {disagreements} disagreements")
    assert disagreements == 0


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2)])
def test_criterion_4_sampled_bases(criterion, p, n):
    params = GroupParams(p, n, 1)
    trials, eps = 1000, 0.01
    start = time.perf_counter()
    seeds = np.random.default_rng(6).integers(2**63, size=trials)
    ok = sum(verify_strong_base(params, sample_base(params, eps, int(s))).ok for s in seeds)
    elapsed = time.perf_counter() - start
    rate = ok / trials
    threshold = (1 - eps) - 3 * math.sqrt((1 - eps) * eps / trials)
    exact = strong_probability(params, base_size(params, eps))
    passed = rate >= threshold and elapsed < 60
    criterion(
        f"4 (p={p}, n={n})",
        passed,
        f"l={base_size(params, eps)}, rate {rate:.3f} vs threshold {threshold:.4f}, "
        f"exact P(strong)={float(exact):.4f}, {elapsed:.1f}s",
    )
    assert elapsed < 60
    assert rate >= threshold, f"rate {rate} below {threshold}; exact success probability is {exact}"


def test_criterion_5_hiding(criterion):
    params = GroupParams(3, 2, 1)
    m = params.modulus
    bases = []
    for mask in range(1, 1 << m):
        pts = tuple(x for x in range(m) if mask >> x & 1)
        if verify_strong_base(params, pts).ok:
            bases.append(StrongBase(pts))
    bad = 0
    for t in range(params.p):
        oracle = make_oracle(params, t)
        cosets = right_coset_labels(params, t)
        for base in bases:
            bad += not same_partition(build_fhsp(oracle, base).labels, cosets)
    criterion(5, bad == 0, f"{len(bases)} strong bases x {params.p} values of t, {bad} mismatches")
    assert bases and bad == 0


def test_criterion_6_quantum_solver(criterion):
    start = time.perf_counter()
    off_mass, marginal_err = 0.0, 0.0
    mismatches, trials = 0, 0
    for p, n in [(3, 2), (3, 3), (5, 2), (5, 3)]:
        for r in range(1, p):
            params = GroupParams(p, n, r)
            m = params.modulus
            us = np.arange(m)[:, None]
            vs = np.arange(p)[None, :]
            for t in range(p):
                oracle = make_oracle(params, t)
                reference = recover_hidden(oracle)
                hsp = build_fhsp(oracle, find_strong_base(params, 0.01, 100 * t + r))
                labels = coset_classes(hsp)
                on_relation = (vs - us * t * r) % p == 0
                for c in np.unique(labels):
                    probs = qft_apply(coset_state(params, np.flatnonzero(labels == c))).probabilities()
                    grid = probs.reshape(m, p)
                    off_mass = max(off_mass, float(grid[~on_relation].sum()))
                    marginal_err = max(marginal_err, float(np.abs(grid.sum(axis=1) - 1 / m).max()))
                for seed in range(100):
                    hsp = build_fhsp(oracle, find_strong_base(params, 0.01, seed))
                    mismatches += solve_hsp(hsp, seed) != reference or reference != t
                    trials += 1
    elapsed = time.perf_counter() - start
    ok = off_mass <= 1e-12 and marginal_err <= 1e-10 and mismatches == 0 and elapsed < 120
    criterion(
        6,
        ok,
        f"off-relation mass {off_mass:.1e}, marginal error {marginal_err:.1e}, "
        f"{mismatches}/{trials} mismatches, {elapsed:.1f}s (< 120s)",
    )
    assert off_mass <= 1e-12
    assert marginal_err <= 1e-10
    assert mismatches == 0
    assert elapsed < 120


def test_criterion_7_composite(criterion):
    cp = validate(36, 3, 1)
    wrong = 0
    for t, seed in itertools.product(range(3), range(50)):
        res = run_composite_pipeline(36, 3, 1, t, 0.01, seed)
        wrong += res.t_hat != t or res.reference_t != t
    with pytest.raises(HypothesisViolation):
        validate(63, 3)
    iso = check_isomorphism(cp)
    triv = check_cofactor_triviality(cp)
    proof = phi_triviality_check(cp)
    ok = wrong == 0 and not iso and not triv and proof.count == 1
    criterion(
        7,
        ok,
        f"N=36: {wrong} wrong of 150 runs, isomorphism counterexamples {len(iso)}, "
        f"triviality counterexamples {len(triv)}; N=63 rejected",
    )
    assert wrong == 0
    assert not iso and not triv
    assert proof.count == 1
