"""Z_N x|_phi Z_p with p^n || N, reduced to Z_{p^n} x|_psi Z_p.

When p does not divide q - 1 for any prime q | N, every automorphism of
order p acts trivially on the cofactor Z_{N/p^n}, so

    Z_N x|_phi Z_p  ~=  Z_{N/p^n} x (Z_{p^n} x|_psi Z_p).

Elements of the right-hand side are triples (a, b, h); K is {(x, y, 0)} and
the action is (a, b, h) o (x, y, 0) = (a + x, b + psi(h)(y), 0).
"""
from __future__ import annotations

import json
from math import gcd
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from sympy import factorint, isprime
from sympy.ntheory.modular import crt

from .errors import CapacityError, HypothesisViolation, ParameterError, PromiseViolation
from .group import EXHAUSTIVE_CAP, GroupParams, conjugate_subgroup, phi_apply
from .quantum import run_fourier_sampling
from .strong_base import build_fhsp, find_strong_base
from .symmetry import SymmetryOracle, orbits_partition, recover_hidden

MAX_N = 2**48
TRIVIALITY_SCAN_CAP = 10**5


class UnsupportedShape(ParameterError):
    """p does not divide N, or divides it only once."""


@dataclass(frozen=True)
class CompositeParams:
    N: int
    p: int
    r: int
    factorization: tuple[tuple[int, int], ...]
    n: int
    cofactor: int

    @property
    def inner(self) -> GroupParams:
        return GroupParams(self.p, self.n, self.r)

    @property
    def modulus(self) -> int:
        return self.p**self.n

    @property
    def order(self) -> int:
        return self.N * self.p

    def to_dict(self) -> dict:
        return {"N": self.N, "p": self.p, "r": self.r, "n": self.n, "cofactor": self.cofactor,
                "factorization": [list(f) for f in self.factorization]}


def validate(N: int, p: int, r: int = 1) -> CompositeParams:
    if N < 4:
        raise ParameterError(f"N must be >= 4, got {N}")
    if N > MAX_N:
        raise CapacityError(f"N = {N} exceeds the trial-division cap 2^48")
    if p < 3 or p % 2 == 0 or not isprime(p):
        raise ParameterError(f"p must be an odd prime, got {p}")
    factors = tuple(sorted(factorint(N).items()))
    n = dict(factors).get(p, 0)
    if n < 2:
        raise UnsupportedShape(f"need p^n || N with n >= 2; {p}^{n} || {N}")
    bad = [q for q, _ in factors if (q - 1) % p == 0]
    if bad:
        raise HypothesisViolation(f"p = {p} divides q - 1 for q in {bad}")
    if not 1 <= r <= p - 1:
        raise ParameterError(f"r must lie in 1..p-1, got {r}")
    return CompositeParams(N, p, r, factors, n, N // p**n)


@dataclass(frozen=True)
class TrivialityProof:
    cofactor: int
    p: int
    solutions: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.solutions)


def phi_triviality_check(params: CompositeParams) -> TrivialityProof:
    """All a in Z_c^* with a^p = 1 (mod c), c the cofactor. Exactly one (a = 1) is expected."""
    c, p = params.cofactor, params.p
    if c > TRIVIALITY_SCAN_CAP:
        raise CapacityError(f"cofactor {c} exceeds scan cap {TRIVIALITY_SCAN_CAP}")
    if c == 1:
        return TrivialityProof(1, p, (0,))
    sols = tuple(a for a in range(1, c) if gcd(a, c) == 1 and pow(a, p, c) == 1)
    if len(sols) != 1:
        raise HypothesisViolation(f"{len(sols)} elements of order dividing {p} in Z_{c}^*: {sols[:10]}")
    return TrivialityProof(c, p, sols)


@dataclass(frozen=True)
class CompositeElement:
    params: CompositeParams = field(repr=False)
    a: int
    b: int
    h: int = 0

    def __post_init__(self):
        P = self.params
        if not (0 <= self.a < P.cofactor and 0 <= self.b < P.modulus and 0 <= self.h < P.p):
            raise ParameterError(f"({self.a},{self.b},{self.h}) out of range")

    def __repr__(self):
        return f"({self.a},{self.b},{self.h})"

    def astuple(self):
        return (self.a, self.b, self.h)


def _check_same(x, y):
    if x.params != y.params:
        raise ParameterError("mismatched composite parameters")
    return x.params


def composite_element(params: CompositeParams, a: int, b: int, h: int = 0) -> CompositeElement:
    return CompositeElement(params, a % params.cofactor, b % params.modulus, h % params.p)


def composite_elements(params: CompositeParams):
    for a in range(params.cofactor):
        for b in range(params.modulus):
            for h in range(params.p):
                yield CompositeElement(params, a, b, h)


def composite_multiply(g1: CompositeElement, g2: CompositeElement) -> CompositeElement:
    P = _check_same(g1, g2)
    return CompositeElement(
        P,
        (g1.a + g2.a) % P.cofactor,
        (g1.b + phi_apply(P.inner, g1.h, g2.b)) % P.modulus,
        (g1.h + g2.h) % P.p,
    )


def composite_inverse(g: CompositeElement) -> CompositeElement:
    P = g.params
    nh = -g.h % P.p
    return CompositeElement(P, -g.a % P.cofactor, -phi_apply(P.inner, nh, g.b) % P.modulus, nh)


def composite_act(g: CompositeElement, k: CompositeElement) -> CompositeElement:
    P = _check_same(g, k)
    if k.h != 0:
        raise ParameterError("composite_act acts on K, whose third coordinate is 0")
    return CompositeElement(P, (g.a + k.a) % P.cofactor, (g.b + phi_apply(P.inner, g.h, k.b)) % P.modulus, 0)


def composite_conjugate(params: CompositeParams, t: int) -> frozenset[CompositeElement]:
    """(0,t,0) H (0,-t,0) = {(0, t - psi(h)(t), h)}."""
    m = params.modulus
    return frozenset(
        CompositeElement(params, 0, (t - phi_apply(params.inner, h, t)) % m, h) for h in range(params.p)
    )


def _composite_arrays(params: CompositeParams):
    if params.order > EXHAUSTIVE_CAP:
        raise CapacityError(f"|G| = {params.order} exceeds exhaustive cap {EXHAUSTIVE_CAP}")
    m, p = params.modulus, params.p
    idx = np.arange(params.order, dtype=np.int64)
    a, rest = np.divmod(idx, m * p)
    b, h = np.divmod(rest, p)
    powers = np.asarray(params.inner.phi_powers, dtype=np.int64)[h]
    return a, b, h, powers


def composite_stabilizer(params: CompositeParams, k: CompositeElement) -> frozenset[CompositeElement]:
    """Brute-force stabilizer of k = (x, y, 0) over all of G."""
    a, b, h, powers = _composite_arrays(params)
    fixed = ((a + k.a) % params.cofactor == k.a) & ((b + k.b * powers) % params.modulus == k.b)
    return frozenset(
        CompositeElement(params, int(a[i]), int(b[i]), int(h[i])) for i in np.flatnonzero(fixed)
    )


@dataclass(frozen=True)
class CompositeOracle:
    """f on K = Z_c x Z_{p^n}; the value at (x, y) is x * p^n + (least y' in y's H_t-orbit)."""

    params: CompositeParams
    table: tuple[int, ...]  # indexed by x * p^n + y
    hidden_t: Optional[int] = field(default=None, compare=False)

    def query(self, x: int, y: int) -> int:
        return self.table[(x % self.params.cofactor) * self.params.modulus + y % self.params.modulus]

    def to_dict(self, include_secret: bool = False) -> dict:
        m = self.params.modulus
        d = {"N": self.params.N, "p": self.params.p, "r": self.params.r,
             "table": [[i // m, i % m, v] for i, v in enumerate(self.table)]}
        if include_secret:
            d["hidden_t"] = self.hidden_t
        return d

    def to_json(self, include_secret: bool = False) -> str:
        return json.dumps(self.to_dict(include_secret))

    @classmethod
    def from_dict(cls, d: dict) -> "CompositeOracle":
        params = validate(d["N"], d["p"], d["r"])
        m = params.modulus
        table = [None] * (params.cofactor * m)
        for a, b, v in d["table"]:
            table[a * m + b] = v
        if any(v is None for v in table):
            raise ParameterError("composite oracle table is missing entries")
        return cls(params, tuple(table), d.get("hidden_t"))

    @classmethod
    def from_json(cls, text: str) -> "CompositeOracle":
        return cls.from_dict(json.loads(text))


def make_composite_oracle(params: CompositeParams, t: int) -> CompositeOracle:
    if not 0 <= t < params.p:
        raise ParameterError(f"t must lie in 0..p-1, got {t}")
    m = params.modulus
    S = composite_conjugate(params, t)
    reps = [min(composite_act(s, CompositeElement(params, 0, y)).b for s in S) for y in range(m)]
    table = tuple(x * m + reps[y] for x in range(params.cofactor) for y in range(m))
    return CompositeOracle(params, table, t)


def reduce_oracle(f: CompositeOracle) -> SymmetryOracle:
    """g(y) = f(0, y), checked to hide some H_t on Z_{p^n}."""
    inner = f.params.inner
    g = SymmetryOracle(inner, tuple(f.query(0, y) for y in range(inner.modulus)), f.hidden_t)
    level = g.level_sets()
    for t in range(inner.p):
        if orbits_partition(conjugate_subgroup(inner, t)).classes == level.classes:
            return g
    raise PromiseViolation("reduced oracle's level sets are not the orbits of any H_t")


# --- the undecomposed group Z_N x|_phi Z_p ----------------------------------


def full_multiplier(params: CompositeParams) -> int:
    """phi(1)(1) in Z_N: 1 on the cofactor and r p^(n-1) + 1 on Z_{p^n}, glued by CRT."""
    if params.cofactor == 1:
        return params.inner.phi_gen
    x, _ = crt([params.cofactor, params.modulus], [1, params.inner.phi_gen])
    return int(x)


def isomorphism_map(params: CompositeParams, X: int, h: int) -> tuple[int, int, int]:
    """(X, h) in Z_N x| Z_p  ->  (X mod c, X mod p^n, h)."""
    return (X % params.cofactor, X % params.modulus, h)


def check_isomorphism(params: CompositeParams) -> list:
    """Exhaustive: the CRT map is a bijection and a homomorphism. Returns counterexamples."""
    N, p, m = params.N, params.p, params.modulus
    if params.order**2 > 10**8:
        raise CapacityError("isomorphism check over all pairs is too large")
    mult = full_multiplier(params)
    powers = [pow(mult, h, N) for h in range(p)]
    bad = []
    images = {isomorphism_map(params, X, h) for X in range(N) for h in range(p)}
    if len(images) != params.order:
        bad.append(("not injective", len(images)))
    for X1 in range(N):
        for h1 in range(p):
            f1 = CompositeElement(params, *isomorphism_map(params, X1, h1))
            for X2 in range(N):
                for h2 in range(p):
                    prod = ((X1 + powers[h1] * X2) % N, (h1 + h2) % p)
                    lhs = isomorphism_map(params, *prod)
                    f2 = CompositeElement(params, *isomorphism_map(params, X2, h2))
                    rhs = composite_multiply(f1, f2).astuple()
                    if lhs != rhs:
                        bad.append(((X1, h1), (X2, h2), lhs, rhs))
    return bad


def check_cofactor_triviality(params: CompositeParams) -> list:
    """Exhaustive: every multiplier of order dividing p in Z_N^* is 1 mod the cofactor,
    and phi(h) fixes the cofactor coordinate for every h. Returns counterexamples."""
    N, p, c = params.N, params.p, params.cofactor
    bad = [mu for mu in range(1, N) if gcd(mu, N) == 1 and pow(mu, p, N) == 1 and mu % c != 1 % c]
    mult = full_multiplier(params)
    for h in range(p):
        ph = pow(mult, h, N)
        for X in range(N):
            if (ph * X) % c != X % c:
                bad.append((h, X))
    return bad


# --- end-to-end --------------------------------------------------------------


@dataclass
class PipelineResult:
    t_hat: int
    reference_t: int
    rounds: int
    base_points: tuple[int, ...]
    base_attempts: int


def run_composite_pipeline(N: int, p: int, r: int, t: int, epsilon: float, seed: int,
                           max_rounds: int = 64) -> PipelineResult:
    base_seed, run_seed = np.random.SeedSequence(seed).generate_state(2, dtype=np.uint64).tolist()
    params = validate(N, p, r)
    phi_triviality_check(params)
    f = make_composite_oracle(params, t)
    g = reduce_oracle(f)
    base = find_strong_base(g.params, epsilon, base_seed)
    hsp = build_fhsp(g, base)
    run = run_fourier_sampling(hsp, run_seed, max_rounds)
    return PipelineResult(run.t, recover_hidden(g), run.rounds, base.points, base.attempts)


def solve_composite(N: int, p: int, r: int, t: int, epsilon: float, seed: int) -> int:
    return run_composite_pipeline(N, p, r, t, epsilon, seed).t_hat
