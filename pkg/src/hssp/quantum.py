"""Dense state-vector simulation of Fourier sampling for hidden H_t.

Amplitudes live on Z_{p^n} x Z_p with (a, b) stored at index a * p + b, the
same order as ``group.group_arrays``. The Fourier transform is the abelian
one on that index group with omega_M = exp(+2 pi i / M).

Coset states are taken over left cosets g H_t. The hiding function f_HSP is
constant on right cosets H_t g, so the register is prepared from
g -> f_HSP(g^-1), which is constant exactly on left cosets. For a left coset
the transformed state is supported on v = u t r (mod p) whatever g is; for a
right coset H_t (a, b) the relation picks up a shift and reads
v = u r (t - a), which carries no information about t once a is random.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CheckFailure, InsufficientSamples, ParameterError, PromiseViolation
from .group import GroupParams, group_arrays
from .strong_base import HspOracle

# Dense simulation ceiling on p^(n+1).
MAX_DIMENSION = 1 << 22


@dataclass
class StateVector:
    params: GroupParams = field(repr=False)
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.params.order > MAX_DIMENSION:
            raise ParameterError(f"dimension {self.params.order} exceeds {MAX_DIMENSION}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.params.order,):
            raise ParameterError("amplitude vector has the wrong length")

    @classmethod
    def basis(cls, params: GroupParams, a: int, b: int) -> "StateVector":
        amps = np.zeros(params.order, dtype=np.complex128)
        amps[(a % params.modulus) * params.p + b % params.p] = 1.0
        return cls(params, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def grid(self) -> np.ndarray:
        """Amplitudes as a (p^n, p) array indexed [a, b]."""
        return self.amplitudes.reshape(self.params.modulus, self.params.p)


class FourierSample(NamedTuple):
    u: int
    v: int


def inverse_indices(params: GroupParams) -> np.ndarray:
    """Index of g^-1 for every g in index order."""
    A, B, _ = group_arrays(params)
    p, m = params.p, params.modulus
    nb = (-B) % p
    powers = np.asarray(params.phi_powers, dtype=np.int64)
    na = (-(A * powers[nb])) % m
    return na * p + nb


def coset_classes(hsp: HspOracle, side: str = "left") -> np.ndarray:
    """Class label of every group element under the sampled hiding function.

    ``right`` uses f_HSP itself; ``left`` uses g -> f_HSP(g^-1).
    Raises PromiseViolation unless every class has exactly p elements.
    """
    labels = hsp.labels
    if side == "left":
        labels = labels[inverse_indices(hsp.params)]
    elif side != "right":
        raise ParameterError(f"side must be 'left' or 'right', got {side!r}")
    sizes = np.bincount(labels)
    if not np.all(sizes == hsp.params.p):
        raise PromiseViolation(
            f"level sets of f_HSP have sizes {sorted(set(sizes.tolist()))}, expected {hsp.params.p}"
        )
    return labels


def coset_state(params: GroupParams, members) -> StateVector:
    """Uniform superposition over the given group-element indices."""
    members = np.asarray(sorted(members), dtype=np.int64)
    amps = np.zeros(params.order, dtype=np.complex128)
    amps[members] = 1 / np.sqrt(len(members))
    return StateVector(params, amps)


def random_coset_state(hsp: HspOracle, rng_seed, side: str = "left") -> StateVector:
    """Query the whole group, measure the value register, keep the collapsed coset.

    Picking a uniform g and keeping its class gives each class probability |class| / |G|.
    """
    labels = coset_classes(hsp, side)
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    g = int(rng.integers(hsp.params.order))
    return coset_state(hsp.params, np.flatnonzero(labels == labels[g]))


def qft_apply(state: StateVector) -> StateVector:
    grid = state.grid()
    out = np.fft.ifft(grid, axis=0, norm="ortho")
    out = np.fft.ifft(out, axis=1, norm="ortho")
    return StateVector(state.params, out.reshape(-1))


def exact_distribution(state: StateVector) -> list[dict]:
    """Nonzero outcome probabilities as [{"u", "v", "prob"}], for JSON dumps."""
    probs = state.probabilities()
    p = state.params.p
    return [
        {"u": int(i // p), "v": int(i % p), "prob": float(probs[i])}
        for i in np.flatnonzero(probs > 1e-15)
    ]


def dump_distribution(state: StateVector) -> str:
    return json.dumps(exact_distribution(state))


def measure(state: StateVector, rng_seed) -> FourierSample:
    probs = np.clip(state.probabilities(), 0.0, None)
    total = probs.sum()
    if abs(total - 1.0) > 1e-8:
        raise CheckFailure(f"state norm^2 = {total!r} is off by more than 1e-8")
    cdf = np.cumsum(probs / total)
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    idx = int(np.searchsorted(cdf, rng.random(), side="right"))
    idx = min(idx, len(cdf) - 1)
    u, v = divmod(idx, state.params.p)
    return FourierSample(u, v)


def recover_t(samples: Sequence[FourierSample], params: GroupParams) -> int:
    """t = v u^-1 r^-1 mod p from samples with u invertible mod p."""
    p = params.p
    r_inv = pow(params.r, -1, p)
    guesses = {s.v * pow(s.u, -1, p) * r_inv % p for s in samples if s.u % p}
    if not guesses:
        raise InsufficientSamples("no sample with u invertible mod p")
    if len(guesses) > 1:
        raise PromiseViolation(f"samples disagree on t: {sorted(guesses)}")
    return guesses.pop()


@dataclass
class SamplingRun:
    t: int
    rounds: int
    samples: list[FourierSample]


def run_fourier_sampling(hsp: HspOracle, rng_seed, max_rounds: int = 64, extra_samples: int = 0) -> SamplingRun:
    """Coset state, QFT, measure; repeat until a sample has u invertible mod p.

    ``extra_samples`` more rounds are taken afterwards so recover_t can
    cross-check them.
    """
    rng = np.random.default_rng(rng_seed)
    samples: list[FourierSample] = []
    params = hsp.params
    rounds = 0
    useful = 0
    while rounds < max_rounds:
        rounds += 1
        state = qft_apply(random_coset_state(hsp, rng))
        s = measure(state, rng)
        samples.append(s)
        if s.u % params.p:
            useful += 1
            if useful > extra_samples:
                break
    if useful == 0:
        raise InsufficientSamples(f"no invertible-u sample in {max_rounds} rounds")
    return SamplingRun(recover_t(samples, params), rounds, samples)


def solve_hsp(hsp: HspOracle, rng_seed, max_rounds: int = 64) -> int:
    return run_fourier_sampling(hsp, rng_seed, max_rounds).t
