"""Orbits, partitions of K, symmetry groups of partitions, closures, and
HSSP oracle instances that hide some H_t by symmetries.

Points of K appear in set-valued results as their residue x in Z_{p^n}.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import ParameterError, PromiseViolation
from .group import (
    ConjugateSubgroup,
    GroupElement,
    GroupParams,
    KElement,
    act,
    brute_force_stabilizer,
    conjugate_subgroup,
    group_arrays,
    multiply,
)


def _x(k) -> int:
    return k.x if isinstance(k, KElement) else int(k)


@dataclass(frozen=True)
class Partition:
    params: GroupParams = field(repr=False)
    classes: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen = set()
        for cls in self.classes:
            if seen & cls:
                raise ParameterError("partition classes overlap")
            seen |= cls
        if seen != set(range(self.params.modulus)):
            raise ParameterError("partition does not cover K")

    @classmethod
    def from_labels(cls, params: GroupParams, labels: Iterable) -> "Partition":
        groups: dict = {}
        for x, lab in enumerate(labels):
            groups.setdefault(lab, set()).add(x)
        classes = sorted((frozenset(g) for g in groups.values()), key=min)
        return cls(params, tuple(classes))

    @property
    def class_index(self) -> dict[int, int]:
        return {x: i for i, cls in enumerate(self.classes) for x in cls}

    def labels(self) -> np.ndarray:
        out = np.empty(self.params.modulus, dtype=np.int64)
        for i, cls in enumerate(self.classes):
            out[list(cls)] = i
        return out

    def __len__(self):
        return len(self.classes)


def orbit(S, k) -> frozenset[int]:
    """S o k for a subgroup S given as a ConjugateSubgroup or any iterable of elements."""
    elems = S.elements if isinstance(S, ConjugateSubgroup) else S
    elems = list(elems)
    params = elems[0].params
    kk = k if isinstance(k, KElement) else KElement(params, int(k))
    return frozenset(act(s, kk).x for s in elems)


def orbits_partition(S) -> Partition:
    elems = S.elements if isinstance(S, ConjugateSubgroup) else frozenset(S)
    params = next(iter(elems)).params
    labels = [min(orbit(elems, x)) for x in range(params.modulus)]
    return Partition.from_labels(params, labels)


def symmetry_group(pi: Partition, chunk: int = 1 << 16) -> frozenset[GroupElement]:
    """pi* = {g : g o pi_i = pi_i for every class}, by scanning all of G.

    The action permutes K, so g o pi_i subset of pi_i already forces equality.
    """
    params = pi.params
    A, _, PHI = group_arrays(params)
    m = params.modulus
    labels = pi.labels()
    xs = np.arange(m, dtype=np.int64)
    rows = max(1, chunk // m)
    keep = []
    for start in range(0, params.order, rows):
        a = A[start:start + rows, None]
        ph = PHI[start:start + rows, None]
        images = (a + ph * xs[None, :]) % m
        ok = np.all(labels[images] == labels[None, :], axis=1)
        keep.extend((np.flatnonzero(ok) + start).tolist())
    return frozenset(params.from_index(i) for i in keep)


def closure_subgroup(S) -> frozenset[GroupElement]:
    """H** as the intersection over k in K of S . G_k, stabilizers found by brute force."""
    elems = S.elements if isinstance(S, ConjugateSubgroup) else frozenset(S)
    params = next(iter(elems)).params
    params.require_exhaustive()
    result: Optional[set] = None
    for x in range(params.modulus):
        prod = {multiply(s, g) for s in elems for g in brute_force_stabilizer(params, x)}
        result = prod if result is None else result & prod
    return frozenset(result)


def is_subgroup(elems: frozenset[GroupElement]) -> bool:
    if not elems:
        return False
    params = next(iter(elems)).params
    if params.identity not in elems:
        return False
    return all(multiply(g, h) in elems for g in elems for h in elems)


@dataclass(frozen=True)
class SymmetryOracle:
    """f : K -> S whose level sets are the orbits of a hidden H_t.

    Values are the minimum x in each orbit. ``hidden_t`` is kept for tests and
    fixtures only; solvers go through ``query``.
    """

    params: GroupParams
    table: tuple[int, ...]
    hidden_t: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.table) != self.params.modulus:
            raise ParameterError("oracle table must have one entry per point of K")

    def query(self, x: int) -> int:
        return self.table[x % self.params.modulus]

    def __call__(self, k) -> int:
        return self.query(_x(k))

    def level_sets(self) -> Partition:
        return Partition.from_labels(self.params, self.table)

    def to_dict(self, include_secret: bool = False) -> dict:
        d = {**self.params.to_dict(), "table": [[x, v] for x, v in enumerate(self.table)]}
        if include_secret:
            d["hidden_t"] = self.hidden_t
        return d

    def to_json(self, include_secret: bool = False) -> str:
        return json.dumps(self.to_dict(include_secret))

    @classmethod
    def from_dict(cls, d: dict) -> "SymmetryOracle":
        params = GroupParams(d["p"], d["n"], d["r"])
        table = [None] * params.modulus
        for x, v in d["table"]:
            table[x] = v
        if any(v is None for v in table):
            raise ParameterError("oracle table is missing entries")
        return cls(params, tuple(table), d.get("hidden_t"))

    @classmethod
    def from_json(cls, text: str) -> "SymmetryOracle":
        return cls.from_dict(json.loads(text))


def make_oracle(params: GroupParams, t: int) -> SymmetryOracle:
    H_t = conjugate_subgroup(params, t)
    table = tuple(min(orbit(H_t, x)) for x in range(params.modulus))
    return SymmetryOracle(params, table, t)


def match_candidate(params: GroupParams, elems: frozenset[GroupElement]) -> int:
    for t in range(params.p):
        if conjugate_subgroup(params, t).elements == elems:
            return t
    raise PromiseViolation(f"symmetry group of order {len(elems)} is not any H_t")


def recover_hidden(oracle: SymmetryOracle) -> int:
    """Classical reference solver: pi_f* by exhaustive scan, matched against the H_t."""
    star = symmetry_group(oracle.level_sets())
    return match_candidate(oracle.params, star)
