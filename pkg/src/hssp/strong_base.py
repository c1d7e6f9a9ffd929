"""Separation, strong bases, and the reduction f -> f_HSP.

A point z of K separates u != v when v o z lies outside H o (u o z), where
u o z is translation by (u,0). Equivalently no h in Z_p has
v + z = phi(h)(u + z) mod p^n.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .errors import CapacityError, ParameterError
from .group import (
    GroupElement,
    GroupParams,
    act_all,
    conjugate_subgroup,
    multiplication_table,
    phi_apply,
    stabilizer_index_table,
)
from .symmetry import SymmetryOracle

# |K| ceiling for the all-pairs separator count matrix.
PAIR_SCAN_CAP = 10**4


def _x(k) -> int:
    return k.x if hasattr(k, "x") else int(k)


def separates(params: GroupParams, z, u, v) -> bool:
    m = params.modulus
    z, u, v = _x(z) % m, _x(u) % m, _x(v) % m
    if u == v:
        raise ParameterError("separation needs u != v")
    w = (u + z) % m
    target = (v + z) % m
    return all(phi_apply(params, h, w) != target for h in range(params.p))


def count_separators(params: GroupParams, u, v) -> int:
    """Number of z in K separating u and v: p^n unless p^(n-1) divides v - u, then p^(n-1)."""
    m = params.modulus
    u, v = _x(u) % m, _x(v) % m
    if u == v:
        raise ParameterError("separation needs u != v")
    step = params.p ** (params.n - 1)
    return step if (v - u) % step == 0 else m


def nonseparation_matrix(params: GroupParams, z: int) -> np.ndarray:
    """N[u, v] is True when z fails to separate u and v (diagonal included)."""
    m = params.modulus
    us = np.arange(m, dtype=np.int64)
    w = (us + z) % m
    out = np.zeros((m, m), dtype=bool)
    for power in params.phi_powers:
        out[us, (w * power - z) % m] = True
    return out


def separator_count_matrix(params: GroupParams) -> np.ndarray:
    """C[u, v] = number of z in K separating u and v, by exhaustive scan over z."""
    m = params.modulus
    if m > PAIR_SCAN_CAP:
        raise CapacityError(f"|K| = {m} exceeds pair-scan cap {PAIR_SCAN_CAP}")
    counts = np.zeros((m, m), dtype=np.int64)
    for z in range(m):
        counts += ~nonseparation_matrix(params, z)
    return counts


def average_separation_probability(params: GroupParams) -> Fraction:
    """1 - (p-1)^2 / (p (p^n - 1)), the separation rate averaged over unordered pairs."""
    p, m = params.p, params.modulus
    return 1 - Fraction((p - 1) ** 2, p * (m - 1))


def pair_averaged_separation(params: GroupParams, exhaustive: bool = True) -> Fraction:
    """Average over unordered pairs {u, v} of (#separators / p^n), summed exactly.

    With ``exhaustive`` the per-pair counts come from the z-scan; otherwise from
    the closed form in ``count_separators``.
    """
    m = params.modulus
    if exhaustive:
        counts = separator_count_matrix(params)
        total = int(np.triu(counts, k=1).sum())
    else:
        total = sum(count_separators(params, u, v) for u in range(m) for v in range(u + 1, m))
    return Fraction(total, m * math.comb(m, 2))


def base_size(params: GroupParams, epsilon: float) -> int:
    """ceil((2 ln|K| + ln 1/eps) / ln(1/q)) with q = (p-1)/(p^n-1).

    This is the size at which the union bound |K|^2 q^l <= eps holds for the
    pair-averaged non-separation rate q.
    """
    if not 0 < epsilon < 1:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    p, m = params.p, params.modulus
    return math.ceil((2 * math.log(m) + math.log(1 / epsilon)) / math.log((m - 1) / (p - 1)))


@dataclass(frozen=True)
class StrongBase:
    points: tuple[int, ...]
    epsilon: Optional[float] = None
    seed: Optional[int] = None
    attempts: int = field(default=1, compare=False)

    def __post_init__(self):
        if not self.points:
            raise ParameterError("a base needs at least one point")
        if len(set(self.points)) != len(self.points):
            raise ParameterError("base points must be distinct")

    @property
    def ell(self) -> int:
        return len(self.points)

    def to_json(self) -> str:
        return json.dumps({"epsilon": self.epsilon, "seed": self.seed, "points": list(self.points)})

    @classmethod
    def from_json(cls, text: str) -> "StrongBase":
        d = json.loads(text)
        return cls(tuple(d["points"]), d.get("epsilon"), d.get("seed"))


def sample_base(params: GroupParams, epsilon: float, rng_seed: int) -> StrongBase:
    """Uniform random set of base_size(epsilon) points, without replacement."""
    ell = base_size(params, epsilon)
    m = params.modulus
    if ell >= m:
        if ell > m:
            warnings.warn(f"base size {ell} exceeds |K| = {m}; returning all of K")
        return StrongBase(tuple(range(m)), epsilon, rng_seed)
    rng = np.random.default_rng(rng_seed)
    pts = rng.choice(m, size=ell, replace=False)
    return StrongBase(tuple(int(x) for x in pts), epsilon, rng_seed)


def strong_probability(params: GroupParams, ell: int) -> Fraction:
    """Exact chance that a uniform ell-subset of K is a strong base.

    A set is strong exactly when it meets every residue class mod p: a pair
    with p^(n-1) | v - u is separated only by z = -u (mod p). Counted by
    inclusion-exclusion over the missed classes.
    """
    p, m = params.p, params.modulus
    cls = m // p
    hits = sum((-1) ** j * math.comb(p, j) * math.comb(m - j * cls, ell) for j in range(p + 1))
    return Fraction(hits, math.comb(m, ell))


class Verdict(NamedTuple):
    ok: bool
    witness: Optional[tuple[int, int]] = None


def _points(B) -> list[int]:
    pts = B.points if isinstance(B, StrongBase) else B
    return [_x(z) for z in pts]


def verify_strong_base(params: GroupParams, B) -> Verdict:
    """Every pair u != v of K has a separator in B. Witness is the first unseparated pair."""
    pts = _points(B)
    if not pts:
        raise ParameterError("a base needs at least one point")
    m = params.modulus
    if m > PAIR_SCAN_CAP:
        raise CapacityError(f"|K| = {m} exceeds pair-scan cap {PAIR_SCAN_CAP}")
    bad = np.ones((m, m), dtype=bool)
    for z in pts:
        bad &= nonseparation_matrix(params, z % m)
    np.fill_diagonal(bad, False)
    hits = np.argwhere(np.triu(bad))
    if len(hits):
        u, v = hits[0]
        return Verdict(False, (int(u), int(v)))
    return Verdict(True, None)


@lru_cache(maxsize=256)
def _coset_products(params: GroupParams, t: int) -> tuple[frozenset[int], ...]:
    """H_t . G_x as index sets, for every x in K (stabilizers by brute force)."""
    table = multiplication_table(params)
    s_idx = sorted(conjugate_subgroup(params, t).indices)
    out = []
    for stab in stabilizer_index_table(params):
        g_idx = sorted(stab)
        out.append(frozenset(table[np.ix_(s_idx, g_idx)].ravel().tolist()))
    return tuple(out)


def verify_strong_base_def(params: GroupParams, B, t: int = 0) -> Verdict:
    """Direct check that the intersection over m in B of H_t G_{g o m} is H_t, for every g.

    Witness on failure is the first g = (a, b) where the intersection is too large.
    """
    pts = _points(B)
    if not pts:
        raise ParameterError("a base needs at least one point")
    prods = _coset_products(params, t)
    target = conjugate_subgroup(params, t).indices
    images = np.stack([act_all(params, z % params.modulus) for z in pts], axis=1)
    cache: dict = {}
    for gi, row in enumerate(images):
        key = frozenset(row.tolist())
        if key not in cache:
            acc = None
            for x in key:
                acc = prods[x] if acc is None else acc & prods[x]
            cache[key] = acc == target
        if not cache[key]:
            return Verdict(False, params.from_index(gi).astuple())
    return Verdict(True, None)


def find_strong_base(params: GroupParams, epsilon: float, rng_seed: int, max_attempts: int = 1000) -> StrongBase:
    """sample_base, then verify; resample with derived seeds until a base passes."""
    rng = np.random.default_rng(rng_seed)
    seed = rng_seed
    for attempt in range(1, max_attempts + 1):
        base = sample_base(params, epsilon, seed)
        if verify_strong_base(params, base).ok:
            return StrongBase(base.points, epsilon, seed, attempts=attempt)
        seed = int(rng.integers(2**63))
    raise CapacityError(f"no strong base found in {max_attempts} samples")


class HspOracle:
    """f_HSP(g) = (f(g o m_1), ..., f(g o m_l)) over the base points in order."""

    def __init__(self, source: SymmetryOracle, base: StrongBase):
        self.source = source
        self.base = base
        self.params = source.params

    def __call__(self, g: GroupElement) -> tuple[int, ...]:
        m = self.params.modulus
        return tuple(
            self.source.query((g.a + phi_apply(self.params, g.b, z)) % m) for z in self.base.points
        )

    @cached_property
    def values(self) -> np.ndarray:
        """f_HSP over all of G in index order, one column per base point."""
        table = np.asarray(self.source.table, dtype=np.int64)
        cols = [table[act_all(self.params, z)] for z in self.base.points]
        return np.stack(cols, axis=1)

    @cached_property
    def labels(self) -> np.ndarray:
        """Level-set id of every group element (ids numbered by first occurrence)."""
        _, first, inv = np.unique(self.values, axis=0, return_index=True, return_inverse=True)
        order = np.argsort(np.argsort(first))
        return order[inv.ravel()]


def build_fhsp(oracle: SymmetryOracle, base: StrongBase) -> HspOracle:
    return HspOracle(oracle, base)


def right_coset_labels(params: GroupParams, t: int) -> np.ndarray:
    """Id of the right coset H_t g containing each g, g in index order."""
    table = multiplication_table(params)
    s_idx = sorted(conjugate_subgroup(params, t).indices)
    return table[s_idx, :].min(axis=0)
