"""Exhaustive checks of the structural results on G and on the composite group.

Every check returns a CheckResult; a failing one carries its first counterexample.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Any, Optional

import numpy as np

from .group import (
    GroupParams,
    act,
    brute_force_stabilizer,
    conjugate_subgroup,
    group_arrays,
    multiplication_table,
    multiply,
    phi_apply,
)
from .reduction import (
    CompositeElement,
    CompositeParams,
    composite_conjugate,
    composite_multiply,
    composite_stabilizer,
    validate,
)

# Above this many (g, h, k) triples the action axioms are spot-checked instead.
AXIOM_EXHAUSTIVE_CAP = 10**8


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int
    counterexample: Optional[Any] = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "passed": self.passed, "checked": self.checked}
        if self.counterexample is not None:
            d["counterexample"] = repr(self.counterexample)
        return d


def _result(name, bad, checked):
    return CheckResult(name, not bad, checked, bad[0] if bad else None)


def check_action_axioms(params: GroupParams, seed: int = 0, samples: int = 20000) -> CheckResult:
    m = params.modulus
    A, _, PHI = group_arrays(params)
    xs = np.arange(m, dtype=np.int64)
    bad = []
    if params.order**2 * m <= AXIOM_EXHAUSTIVE_CAP and params.order <= 5000:
        T = multiplication_table(params)
        ACT = (A[:, None] + PHI[:, None] * xs[None, :]) % m
        if not np.array_equal(ACT[0], xs):
            bad.append(("identity", int(np.flatnonzero(ACT[0] != xs)[0])))
        for g in range(params.order):
            lhs = ACT[T[g]]  # (gh) o k over all h, k
            rhs = ACT[g][ACT]  # g o (h o k)
            if not np.array_equal(lhs, rhs):
                h, k = np.argwhere(lhs != rhs)[0]
                bad.append((params.from_index(g), params.from_index(int(h)), int(k)))
                break
        return _result("action axioms", bad, params.order**2 * m)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        g = params.from_index(int(rng.integers(params.order)))
        h = params.from_index(int(rng.integers(params.order)))
        k = params.k(int(rng.integers(m)))
        if act(multiply(g, h), k) != act(g, act(h, k)) or act(params.identity, k) != k:
            bad.append((g, h, k))
            break
    return _result("action axioms (sampled)", bad, samples)


def check_homomorphism(params: GroupParams) -> CheckResult:
    p, m = params.p, params.modulus
    xs = np.arange(m, dtype=np.int64)
    pw = params.phi_powers
    bad = []
    for h1 in range(p):
        for h2 in range(p):
            lhs = xs * pw[(h1 + h2) % p] % m
            rhs = (xs * pw[h2] % m) * pw[h1] % m
            if not np.array_equal(lhs, rhs):
                bad.append((h1, h2, int(np.flatnonzero(lhs != rhs)[0])))
    return _result("phi is a homomorphism", bad, p * p * m)


def check_order(params: GroupParams) -> CheckResult:
    g, m = params.phi_gen, params.modulus
    bad = [k for k in range(1, params.p) if pow(g, k, m) == 1]
    if pow(g, params.p, m) != 1:
        bad.append(params.p)
    if gcd(g, m) != 1:
        bad.append("phi_gen not a unit")
    return _result("phi(1)(1) has order p", bad, params.p)


def check_fixed_points(params: GroupParams) -> CheckResult:
    """For h != 0: (0,h) fixes (y,0) iff p divides y."""
    bad = []
    for h in range(1, params.p):
        for y in range(params.modulus):
            fixed = phi_apply(params, h, y) == y
            if fixed != (gcd(y, params.p) > 1):
                bad.append((h, y))
    return _result("fixed points of H are P_0", bad, (params.p - 1) * params.modulus)


def check_faithful(params: GroupParams) -> CheckResult:
    """For y prime to p, distinct h give distinct images of (y,0)."""
    bad = []
    for y in range(params.modulus):
        if y % params.p == 0:
            continue
        images = [phi_apply(params, h, y) for h in range(params.p)]
        if len(set(images)) != params.p:
            bad.append(y)
    return _result("H acts faithfully off P_0", bad, params.modulus)


def check_conjugates(params: GroupParams) -> CheckResult:
    """(x,0) H (-x,0) = H_t for every x in P_t."""
    bad = []
    H = [params.element(0, h) for h in range(params.p)]
    for x in range(params.modulus):
        left, right = params.element(x, 0), params.element(-x, 0)
        conj = frozenset(multiply(multiply(left, s), right) for s in H)
        if conj != conjugate_subgroup(params, x % params.p).elements:
            bad.append(x)
    return _result("conjugates depend only on x mod p", bad, params.modulus)


def check_stabilizers(params: GroupParams) -> CheckResult:
    """Brute-force stabilizer of (x,0) equals H_{x mod p}."""
    bad = []
    for x in range(params.modulus):
        if brute_force_stabilizer(params, x) != conjugate_subgroup(params, x % params.p).elements:
            bad.append(x)
    return _result("stabilizer of (x,0) is H_{x mod p}", bad, params.modulus * params.order)


def check_composite_conjugates(cp: CompositeParams) -> CheckResult:
    """(a,b,0) H (-a,-b,0) = (0,t,0) H (0,-t,0) with t = b mod p, for every (a, b)."""
    bad = []
    m = cp.modulus
    H = [CompositeElement(cp, 0, 0, h) for h in range(cp.p)]
    expected = [composite_conjugate(cp, t) for t in range(cp.p)]
    for a in range(cp.cofactor):
        for b in range(m):
            left = CompositeElement(cp, a, b, 0)
            right = CompositeElement(cp, -a % cp.cofactor, -b % m, 0)
            conj = frozenset(composite_multiply(composite_multiply(left, s), right) for s in H)
            if conj != expected[b % cp.p]:
                bad.append((a, b))
    return _result("composite conjugates depend only on b mod p", bad, cp.cofactor * m)


def check_composite_stabilizers(cp: CompositeParams) -> CheckResult:
    """Brute-force stabilizer of (x,y,0) equals (0,t,0) H (0,-t,0) with t = y mod p."""
    bad = []
    expected = [composite_conjugate(cp, t) for t in range(cp.p)]
    for x in range(cp.cofactor):
        for y in range(cp.modulus):
            k = CompositeElement(cp, x, y, 0)
            if composite_stabilizer(cp, k) != expected[y % cp.p]:
                bad.append((x, y))
    return _result("composite stabilizers", bad, cp.cofactor * cp.modulus * cp.order)


def default_composite(params: GroupParams, N: Optional[int] = None) -> CompositeParams:
    """Composite companion for the suite: the given N, else N = 4 p^n."""
    return validate(N if N is not None else 4 * params.modulus, params.p, params.r)


def run_theorem_suite(params: GroupParams, N: Optional[int] = None) -> list[CheckResult]:
    params.require_exhaustive()
    cp = default_composite(params, N)
    return [
        check_order(params),
        check_homomorphism(params),
        check_action_axioms(params),
        check_fixed_points(params),
        check_faithful(params),
        check_conjugates(params),
        check_stabilizers(params),
        check_composite_conjugates(cp),
        check_composite_stabilizers(cp),
    ]
