"""Exact arithmetic in G = Z_{p^n} x|_phi Z_p and its conjugation action on K = Z_{p^n} x {0}.

Elements are pairs (a, b) with a mod p^n and b mod p. The twist is fixed by
phi(1)(1) = r p^(n-1) + 1, so phi(h)(x) = x * (r p^(n-1) + 1)^h mod p^n.

Two surfaces are provided. The typed one (GroupElement, KElement, multiply,
act, ...) is what callers use. The array one (``group_arrays``,
``act_all``) backs the exhaustive scans; group elements there are indexed by
``a * p + b``, the same order the state-vector simulator uses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator

import numpy as np
from sympy import isprime

from .errors import CapacityError, ParameterError

# Exhaustive scans over G are refused above this order.
EXHAUSTIVE_CAP = 10**6


@dataclass(frozen=True)
class GroupParams:
    p: int
    n: int
    r: int

    def __post_init__(self):
        p, n, r = self.p, self.n, self.r
        if not all(isinstance(v, (int, np.integer)) for v in (p, n, r)):
            raise ParameterError(f"p, n, r must be integers, got {p!r}, {n!r}, {r!r}")
        if p < 3 or p % 2 == 0 or not isprime(p):
            raise ParameterError(f"p must be an odd prime, got {p}")
        if n < 2:
            raise ParameterError(f"n must be >= 2, got {n}")
        if not 1 <= r <= p - 1:
            raise ParameterError(f"r must lie in 1..p-1, got {r}")
        if p**n >= 2**63:
            raise ParameterError(f"p^n = {p}^{n} exceeds 63 bits")

    @property
    def modulus(self) -> int:
        return self.p**self.n

    @property
    def phi_gen(self) -> int:
        return (self.r * self.p ** (self.n - 1) + 1) % self.modulus

    @property
    def order(self) -> int:
        return self.modulus * self.p

    @cached_property
    def phi_powers(self) -> tuple[int, ...]:
        """phi_gen**h mod p^n for h = 0..p-1."""
        return tuple(pow(self.phi_gen, h, self.modulus) for h in range(self.p))

    def element(self, a: int, b: int) -> "GroupElement":
        return GroupElement(self, a % self.modulus, b % self.p)

    def k(self, x: int) -> "KElement":
        return KElement(self, x % self.modulus)

    @property
    def identity(self) -> "GroupElement":
        return GroupElement(self, 0, 0)

    def elements(self) -> Iterator["GroupElement"]:
        for a in range(self.modulus):
            for b in range(self.p):
                yield GroupElement(self, a, b)

    def index(self, g: "GroupElement") -> int:
        return g.a * self.p + g.b

    def from_index(self, idx: int) -> "GroupElement":
        a, b = divmod(int(idx), self.p)
        return GroupElement(self, a, b)

    def require_exhaustive(self, cap: int = EXHAUSTIVE_CAP):
        if self.order > cap:
            raise CapacityError(f"|G| = {self.order} exceeds exhaustive cap {cap}")

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "r": self.r}


@dataclass(frozen=True)
class GroupElement:
    params: GroupParams = field(repr=False)
    a: int
    b: int

    def __post_init__(self):
        if not (0 <= self.a < self.params.modulus and 0 <= self.b < self.params.p):
            raise ParameterError(f"({self.a},{self.b}) out of range for {self.params}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __repr__(self):
        return f"({self.a},{self.b})"

    def astuple(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class KElement:
    params: GroupParams = field(repr=False)
    x: int

    def __post_init__(self):
        if not 0 <= self.x < self.params.modulus:
            raise ParameterError(f"x={self.x} out of range for {self.params}")

    @property
    def residue(self) -> int:
        """t such that x lies in P_t."""
        return self.x % self.params.p

    def __repr__(self):
        return f"({self.x},0)"


def _check_same(*items):
    params = items[0].params
    for item in items[1:]:
        if item.params != params:
            raise ParameterError(f"mismatched group parameters: {params} vs {item.params}")
    return params


def phi_apply(params: GroupParams, h: int, x: int) -> int:
    """phi(h)(x) = x * phi_gen**h mod p^n."""
    m = params.modulus
    return x * pow(params.phi_gen, h % params.p, m) % m


def multiply(g1: GroupElement, g2: GroupElement) -> GroupElement:
    params = _check_same(g1, g2)
    return GroupElement(
        params,
        (g1.a + phi_apply(params, g1.b, g2.a)) % params.modulus,
        (g1.b + g2.b) % params.p,
    )


def inverse(g: GroupElement) -> GroupElement:
    params = g.params
    return GroupElement(
        params,
        -phi_apply(params, -g.b % params.p, g.a) % params.modulus,
        -g.b % params.p,
    )


def act(g: GroupElement, k: KElement) -> KElement:
    """(y,h) o (x,0) = (y,h)(x,0)(0,-h) = (y + phi(h)(x), 0)."""
    params = _check_same(g, k)
    return KElement(params, (g.a + phi_apply(params, g.b, k.x)) % params.modulus)


def conjugate_subgroup(params: GroupParams, t: int) -> "ConjugateSubgroup":
    """H_t = (t,0) H (-t,0) = {(t - phi(h)(t), h) : h in Z_p}."""
    if not 0 <= t < params.p:
        raise ParameterError(f"t must lie in 0..p-1, got {t}")
    m = params.modulus
    elems = frozenset(
        GroupElement(params, (t - phi_apply(params, h, t)) % m, h) for h in range(params.p)
    )
    return ConjugateSubgroup(params, t, elems)


def stabilizer_of(params: GroupParams, k: KElement) -> "ConjugateSubgroup":
    if k.params != params:
        raise ParameterError("mismatched group parameters")
    return conjugate_subgroup(params, k.residue)


@dataclass(frozen=True, eq=False)
class ConjugateSubgroup:
    """A conjugate H_t of H. Equality is equality of element sets."""

    params: GroupParams = field(repr=False)
    t: int
    elements: frozenset = field(repr=False)

    def __eq__(self, other):
        if isinstance(other, ConjugateSubgroup):
            return self.elements == other.elements
        if isinstance(other, (set, frozenset)):
            return self.elements == other
        return NotImplemented

    def __hash__(self):
        return hash(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements, key=lambda g: (g.b, g.a)))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.elements

    @cached_property
    def indices(self) -> frozenset[int]:
        return frozenset(self.params.index(g) for g in self.elements)


# --- array surface used by exhaustive scans ---------------------------------


@lru_cache(maxsize=64)
def group_arrays(params: GroupParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(A, B, PHI) over all of G in index order: A[i] = a, B[i] = b, PHI[i] = phi_gen**b."""
    params.require_exhaustive()
    idx = np.arange(params.order, dtype=np.int64)
    A, B = np.divmod(idx, params.p)
    PHI = np.asarray(params.phi_powers, dtype=np.int64)[B]
    for arr in (A, B, PHI):
        arr.setflags(write=False)
    return A, B, PHI


def act_all(params: GroupParams, x: int) -> np.ndarray:
    """g o (x,0) for every g in G, as an array of x-coordinates in index order."""
    A, _, PHI = group_arrays(params)
    return (A + x * PHI) % params.modulus


def brute_force_stabilizer(params: GroupParams, x: int) -> frozenset[GroupElement]:
    """{g in G : g o (x,0) = (x,0)} by scanning every group element."""
    hits = np.flatnonzero(act_all(params, x) == x % params.modulus)
    return frozenset(params.from_index(i) for i in hits)


@lru_cache(maxsize=64)
def stabilizer_index_table(params: GroupParams) -> tuple[frozenset[int], ...]:
    """Brute-force stabilizer (as index sets) of every x in K."""
    return tuple(
        frozenset(np.flatnonzero(act_all(params, x) == x).tolist())
        for x in range(params.modulus)
    )


@lru_cache(maxsize=64)
def multiplication_table(params: GroupParams) -> np.ndarray:
    """T[i, j] = index of g_i * g_j. Only for small groups (|G|^2 entries)."""
    if params.order > 5000:
        raise CapacityError(f"multiplication table for |G| = {params.order} too large")
    A, B, PHI = group_arrays(params)
    m, p = params.modulus, params.p
    a = (A[:, None] + PHI[:, None] * A[None, :]) % m
    b = (B[:, None] + B[None, :]) % p
    table = a * p + b
    table.setflags(write=False)
    return table
