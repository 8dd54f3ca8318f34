"""Closed-form structure predictions for Grover-mixer QAOA circuits.

Everything here is a function of the objective's level-set spectrum and
of the initial state's per-level coefficients c_j: the classification of
the generated Lie algebra and its center, the commutant dimension, the
isotypic decomposition of the state space, and the large-depth loss
statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .core import TOL_ZERO, LevelOverlaps, Spectrum


@dataclass(frozen=True)
class RestrictedGenerators:
    """Generators restricted to the span of the supported components.

    ``h_p0`` is diag of the supported objective values in descending
    order; ``g_m0`` is the rank-one matrix -c c^T over the supported
    coefficients.
    """

    h_p0: np.ndarray
    g_m0: np.ndarray


@dataclass(frozen=True)
class DlaPrediction:
    """Predicted Lie-algebra type for the two-generator circuit.

    ``branch`` records which case fired: ``case-nonzero`` (sum of the
    c_j bounded away from zero, two-dimensional center) or ``case-zero``
    (one-dimensional center).  For d = 1 the generic argument behind the
    classification does not apply; such instances are flagged
    ``degenerate`` and, when the spectrum is available, carry the
    directly computed span dimension of the two generators.
    """

    d: int
    sum_c: float
    algebra: str
    dim: int
    center_dim: int
    branch: str
    degenerate: bool = False
    span_dim: Optional[int] = None


@dataclass(frozen=True)
class CommutantPrediction:
    """Largest possible commutant dimension, attained by the Grover mixer."""

    dim: int


@dataclass(frozen=True)
class LossStatsPrediction:
    """Large-depth mean and variance of the loss under random parameters.

    ``zeta_mean``/``zeta_var`` are the statistics of a uniform draw from
    the d supported objective values.  ``expected_loss`` is only derived
    for the two-dimensional-center case and is None otherwise.
    """

    zeta_mean: float
    zeta_var: float
    p_su_rho: float
    p_su_hp: float
    expected_loss: Optional[float]
    loss_variance: float
    l1: float
    l2: float


def _supported_values(spectrum: Spectrum, overlaps: LevelOverlaps) -> np.ndarray:
    return spectrum.values[overlaps.supported_levels]


def restricted_generators(spectrum: Spectrum, overlaps: LevelOverlaps) -> RestrictedGenerators:
    """Restrict the problem Hamiltonian and Grover mixer to the supported span."""
    if overlaps.d < 1:
        raise ValueError("need at least one supported level")
    lam = _supported_values(spectrum, overlaps)
    c_sup = overlaps.c[overlaps.supported_levels]
    return RestrictedGenerators(h_p0=np.diag(lam), g_m0=-np.outer(c_sup, c_sup))


def predict_dla(
    overlaps: LevelOverlaps,
    tol_zero: float = TOL_ZERO,
    spectrum: Spectrum | None = None,
) -> DlaPrediction:
    """Classify the Lie algebra generated by the circuit's two generators.

    With d supported levels the algebra is su_d plus a two- or
    one-dimensional center according to whether sum_j c_j is nonzero or
    zero (tested against ``tol_zero`` on the convention-fixed real
    coefficients), giving real dimension d**2 + 1 or d**2.
    """
    d = overlaps.d
    if d < 1:
        raise ValueError("state has no supported levels")
    sum_c = overlaps.sum_c
    if abs(sum_c) > tol_zero:
        branch, center_dim = "case-nonzero", 2
        algebra = f"su_{d} + u_1 + u_1"
    else:
        branch, center_dim = "case-zero", 1
        algebra = f"su_{d} + u_1"
    dim = (d**2 - 1) + center_dim
    degenerate = d == 1
    span_dim = None
    if degenerate and spectrum is not None:
        # Both generators commute when the state sits in one level, so the
        # algebra is their real span; rank of the Gram matrix decides 1 vs 2.
        j = overlaps.supported_levels[0]
        lam_s = float(spectrum.values[j])
        h_sq = float(np.sum(spectrum.multiplicities * spectrum.values**2))
        gram = np.array([[h_sq, -lam_s], [-lam_s, 1.0]])
        eigs = np.linalg.eigvalsh(gram)
        span_dim = int(np.count_nonzero(eigs > 1e-12 * max(1.0, float(eigs.max()))))
    return DlaPrediction(
        d=d,
        sum_c=sum_c,
        algebra=algebra,
        dim=dim,
        center_dim=center_dim,
        branch=branch,
        degenerate=degenerate,
        span_dim=span_dim,
    )


def predict_commutant(spectrum: Spectrum, overlaps: LevelOverlaps) -> CommutantPrediction:
    """Commutant dimension 1 + sum over supported levels of (n_j - 1)**2
    plus sum over unsupported levels of n_j**2 (complex dimensions)."""
    supported = set(overlaps.supported_levels)
    dim = 1
    for j in range(spectrum.r):
        nj = int(spectrum.multiplicities[j])
        dim += (nj - 1) ** 2 if j in supported else nj**2
    return CommutantPrediction(dim=dim)


def predict_loss_stats(
    spectrum: Spectrum, overlaps: LevelOverlaps, tol_zero: float = TOL_ZERO
) -> LossStatsPrediction:
    """Large-depth loss statistics over uniformly random parameters.

    The loss variance is Var(zeta)/(d+1) where zeta is uniform on the d
    supported objective values; the expected loss is mean(zeta)/d, and is
    derived only when the center is two-dimensional (sum_j c_j nonzero).
    """
    lam = _supported_values(spectrum, overlaps)
    d = overlaps.d
    if d < 1:
        raise ValueError("state has no supported levels")
    zeta_mean = float(np.mean(lam))
    zeta_var = float(np.var(lam))
    l1 = float(np.sum(lam))
    l2 = float(np.sum(lam**2))
    expected = zeta_mean / d if abs(overlaps.sum_c) > tol_zero else None
    return LossStatsPrediction(
        zeta_mean=zeta_mean,
        zeta_var=zeta_var,
        p_su_rho=1.0 - 1.0 / d,
        p_su_hp=l2 - l1**2 / d,
        expected_loss=expected,
        loss_variance=zeta_var / (d + 1),
        l1=l1,
        l2=l2,
    )


def isotypic_summary(spectrum: Spectrum, overlaps: LevelOverlaps) -> Tuple[int, int]:
    """Dimension of the irreducible block and the count of invariant lines.

    The span of the supported components xi_j is the unique irreducible
    block (dimension d); its orthogonal complement splits into q**n - d
    one-dimensional invariant subspaces.
    """
    return overlaps.d, spectrum.n_states - overlaps.d


def slocal_bound(n: int, s: int, m: int, terms: int) -> int:
    """Range-size bound m*T + 1 for a sum of T terms on s sites each,
    every term taking values in 0..m."""
    if not (0 <= terms <= math.comb(n, s)):
        raise ValueError(f"term count {terms} exceeds C({n},{s})")
    return m * terms + 1


def complement_invariant_lines(spectrum: Spectrum, overlaps: LevelOverlaps) -> List[np.ndarray]:
    """Predicted one-dimensional invariant subspaces outside the irreducible block.

    For each supported level, an orthonormal basis of the level block
    orthogonal to the state's component; for each unsupported level, the
    computational basis lines of the whole block.  Returns q**n - d unit
    vectors of full length.
    """
    supported = set(overlaps.supported_levels)
    lines: List[np.ndarray] = []
    for j in range(spectrum.r):
        idx = np.flatnonzero(spectrum.level_of == j)
        nj = len(idx)
        if j in supported:
            if nj == 1:
                continue
            u = overlaps.xi_components[j][idx]
            stacked = np.concatenate([u[:, None], np.eye(nj, dtype=complex)], axis=1)
            qmat, _ = np.linalg.qr(stacked)
            for k in range(1, nj):
                vec = np.zeros(spectrum.n_states, dtype=complex)
                vec[idx] = qmat[:, k]
                lines.append(vec)
        else:
            for s in idx:
                vec = np.zeros(spectrum.n_states, dtype=complex)
                vec[s] = 1.0
                lines.append(vec)
    return lines
