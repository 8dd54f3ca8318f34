"""Dense statevector evolution and Monte Carlo loss statistics.

The mixer is applied through its rank-one closed form (two passes over
the amplitude list), never through a dense exponential, so every layer
costs O(q**n) and is exact up to rounding.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .core import InitialState, ObjectiveTable, SizeLimitError

BETA_MAX = 2.0 * np.pi
GAMMA_MAX = np.pi

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ParameterSet:
    """Per-layer mixer angles beta in [0, 2pi) and phase angles gamma in [0, pi)."""

    betas: np.ndarray
    gammas: np.ndarray

    def __post_init__(self):
        betas = np.asarray(self.betas, dtype=float)
        gammas = np.asarray(self.gammas, dtype=float)
        if betas.shape != gammas.shape or betas.ndim != 1:
            raise ValueError("betas and gammas must be 1-d arrays of equal length")
        if np.any(betas < 0.0) or np.any(betas >= BETA_MAX):
            raise ValueError("betas must lie in [0, 2pi)")
        if np.any(gammas < 0.0) or np.any(gammas >= GAMMA_MAX):
            raise ValueError("gammas must lie in [0, pi)")
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "gammas", gammas)

    @property
    def depth(self) -> int:
        return len(self.betas)


@dataclass(frozen=True)
class McReport:
    """Monte Carlo estimates; reproducible from (problem, p, samples, seed)."""

    p: int
    samples: int
    mean: float
    variance: float
    stderr_mean: float
    stderr_variance: float
    seed: int


def apply_phase_layer(state: np.ndarray, objective: ObjectiveTable, gamma: float) -> np.ndarray:
    """Multiply each amplitude by exp(-i * gamma * F(x))."""
    return state * np.exp(-1j * gamma * objective.values)


def apply_grover_mixer(state: np.ndarray, xi: InitialState, beta: float) -> np.ndarray:
    """Rank-one closed form of evolving under the negative projector onto xi."""
    amp = xi.amplitudes
    overlap = np.vdot(amp, state)
    return state + (np.exp(1j * beta) - 1.0) * overlap * amp


def run_circuit(xi: InitialState, objective: ObjectiveTable, params: ParameterSet) -> np.ndarray:
    """Alternate phase and mixer layers starting from xi (phase first per layer)."""
    if xi.amplitudes.shape[0] != objective.size:
        raise ValueError("state and objective dimensions disagree")
    state = np.array(xi.amplitudes, dtype=complex, copy=True)
    for beta, gamma in zip(params.betas, params.gammas):
        state = apply_phase_layer(state, objective, gamma)
        state = apply_grover_mixer(state, xi, beta)
    return state


def loss(state: np.ndarray, objective: ObjectiveTable) -> float:
    """Expected objective value sum_x F(x) |psi_x|^2."""
    if state.shape[0] != objective.size:
        raise ValueError("state and objective dimensions disagree")
    return float(np.sum(objective.values * (state.conj() * state).real))


def _stream_seed(seed: int, index: int) -> int:
    """Bit-generator seed for one sample: the (index+1)-th SplitMix64 output.

    SplitMix64 advances its 64-bit state by the golden-ratio increment
    0x9e3779b97f4a7c15 and mixes with two xor-multiply rounds
    (0xbf58476d1ce4e5b9, 0x94d049bb133111eb).  Making every sample's
    stream a pure function of (seed, index) keeps results identical for
    any parallel schedule.
    """
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def sample_parameters(p: int, rng: np.random.Generator) -> ParameterSet:
    """Draw one parameter set, betas uniform on [0, 2pi) then gammas on [0, pi)."""
    return ParameterSet(
        betas=rng.uniform(0.0, BETA_MAX, p),
        gammas=rng.uniform(0.0, GAMMA_MAX, p),
    )


def monte_carlo_stats(
    xi: InitialState,
    objective: ObjectiveTable,
    p: int,
    samples: int,
    seed: int,
    threads: int = 1,
) -> McReport:
    """Estimate mean and variance of the loss over random parameters.

    Sample i uses an independent stream seeded by ``_stream_seed(seed, i)``,
    and the reductions run over the sample-ordered array, so the report is
    bit-identical for any thread count.  The variance is the unbiased
    sample variance; its standard error uses the plug-in fourth-central-
    moment formula sqrt((m4 - s^4 (M-3)/(M-1)) / M).
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    if p < 1:
        raise ValueError("depth must be at least 1")
    losses = np.empty(samples)

    def one(i: int) -> None:
        rng = np.random.Generator(np.random.PCG64(_stream_seed(seed, i)))
        state = run_circuit(xi, objective, sample_parameters(p, rng))
        losses[i] = loss(state, objective)

    if threads <= 1:
        for i in range(samples):
            one(i)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(one, range(samples)))

    mean = float(np.mean(losses))
    variance = float(np.var(losses, ddof=1))
    centered = losses - mean
    m4 = float(np.mean(centered**4))
    var_of_var = (m4 - variance**2 * (samples - 3) / (samples - 1)) / samples
    return McReport(
        p=p,
        samples=samples,
        mean=mean,
        variance=variance,
        stderr_mean=float(np.sqrt(variance / samples)),
        stderr_variance=float(np.sqrt(max(var_of_var, 0.0))),
        seed=int(seed) & _MASK64,
    )


def depth_sweep(
    xi: InitialState,
    objective: ObjectiveTable,
    p_list: Sequence[int],
    samples: int,
    seed: int,
    threads: int = 1,
) -> List[McReport]:
    """One Monte Carlo report per depth, all from the same master seed."""
    if not p_list:
        raise ValueError("depth list must be non-empty")
    return [
        monte_carlo_stats(xi, objective, p=p, samples=samples, seed=seed, threads=threads)
        for p in p_list
    ]


def grover_mixer_identity_check(n: int) -> float:
    """Max entrywise gap between -(1/2**n) prod_j (I + X_j) and the
    negative projector onto the uniform superposition."""
    if n < 1:
        raise ValueError("need n >= 1")
    if n > 10:
        raise SizeLimitError("dense product check capped at n = 10")
    size = 1 << n
    idx = np.arange(size)
    prod = np.eye(size)
    for j in range(n):
        flip = np.zeros((size, size))
        flip[idx, idx ^ (1 << j)] = 1.0
        prod = prod @ (np.eye(size) + flip)
    lhs = -prod / size
    rhs = -np.full((size, size), 1.0 / size)
    return float(np.max(np.abs(lhs - rhs)))
