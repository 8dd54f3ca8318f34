"""Brute-force numerical verification of the structure predictions.

Lie closures from generators, commutant dimensions, invariant-subspace
residuals, and the constructive extraction of matrix units from a
diagonal/frame generator pair.

Dimension conventions, since mixing them is the classic bug here: the
Lie closure works over the REAL span of skew-Hermitian matrices and
reports real dimensions; the commutant solver works over COMPLEX
matrices and reports complex dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .core import TOL_ZERO, InitialState, ObjectiveTable

#: Dense-oracle cap on the state-space dimension.
ORACLE_DIM_LIMIT = 64

#: Default cap on the closure dimension.
DIM_CAP = 4096

#: Relative residual above which a commutator counts as independent.
TOL_INDEP = 1e-9

#: Eigenvalues of the commutant operator below this count as null.
TOL_RANK = 1e-8

_TOL_SKEW = 1e-10
_TOL_ORTH = 1e-8

#: Commutators of unit-norm elements below this are round-off noise, not
#: new directions; normalizing them would amplify noise into fake dimensions.
_ZERO_FLOOR = 1e-10


class OracleCapError(ValueError):
    """Instance exceeds the dense-oracle size caps."""


class FrameConditionError(ValueError):
    """The generator matrix misses a nonzero entry the construction divides by."""


class AmbiguousSelectorError(ValueError):
    """A spectral mask keeps entries besides the targeted one.

    Happens when distinct eigenvalue pairs share the same difference;
    only the extreme difference is guaranteed unique.
    """


class MatrixUnitError(ValueError):
    """Extracted units deviate from exact matrix units beyond tolerance."""


@dataclass
class OperatorBasis:
    """Skew-Hermitian matrices, orthonormal under Re tr(A^dag B)."""

    dim_space: int
    elements: List[np.ndarray]

    def __len__(self) -> int:
        return len(self.elements)

    def skewness_residual(self) -> float:
        return max(float(np.max(np.abs(e + e.conj().T))) for e in self.elements)

    def orthonormality_residual(self) -> float:
        vecs = np.stack([e.ravel() for e in self.elements])
        gram = (vecs.conj() @ vecs.T).real
        return float(np.max(np.abs(gram - np.eye(len(self.elements)))))


@dataclass(frozen=True)
class ClosureReport:
    """Outcome of a closure run; if hit_cap, dimension is a lower bound only."""

    dimension: int
    rounds: int
    max_residual_discarded: float
    hit_cap: bool


def gm_generators(
    objective: ObjectiveTable, state: InitialState, max_dim: int = ORACLE_DIM_LIMIT
) -> Tuple[np.ndarray, np.ndarray]:
    """Dense Hermitian problem Hamiltonian and Grover mixer.

    The problem Hamiltonian is diagonal with the objective values; the
    mixer is the negative rank-one projector onto the state.  Multiply by
    1j to obtain the skew-Hermitian closure generators.
    """
    size = objective.size
    if size > max_dim:
        raise OracleCapError(f"dense oracle capped at {max_dim} dimensions, got {size}")
    amps = state.amplitudes
    if amps.shape[0] != size:
        raise ValueError("state and objective dimensions disagree")
    h_p = np.diag(objective.values.astype(complex))
    g_m = -np.outer(amps, amps.conj())
    return h_p, g_m


def x_mixer_generator(n: int) -> np.ndarray:
    """Sum of single-site bit flips as a dense 2**n matrix (binary alphabet only)."""
    if n < 1:
        raise ValueError("need n >= 1")
    size = 1 << n
    idx = np.arange(size)
    b = np.zeros((size, size), dtype=complex)
    for j in range(n):
        b[idx, idx ^ (1 << j)] += 1.0
    return b


def traceless_part(h: np.ndarray) -> np.ndarray:
    """Remove the identity component of a square matrix.

    The standard-mixer comparison dimensions are defined for the
    traceless coupling form of the problem Hamiltonian; a counting
    objective carries a constant shift that can add one identity
    direction to the closure on some instances (e.g. the 3-vertex path
    reaches 10 instead of 9).
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    return h - (np.trace(h) / n) * np.eye(n)


def lie_closure(
    generators: Sequence[np.ndarray],
    tol_indep: float = TOL_INDEP,
    dim_cap: int = DIM_CAP,
) -> Tuple[OperatorBasis, ClosureReport]:
    """Close a set of skew-Hermitian generators under the commutator.

    Deterministic schedule: the generators are orthonormalized in input
    order (modified Gram-Schmidt with one re-orthogonalization pass);
    then, per round, every element of the previous round's additions is
    commuted with every basis element present at the round's start, in
    index order.  Each commutator is rescaled to unit Hilbert-Schmidt
    norm, projected against the current basis, and appended when the
    residual exceeds ``tol_indep``.  Commutators whose norm sits at the
    round-off floor are treated as zero rather than normalized.  Stops
    when a round adds nothing or ``dim_cap`` is reached (flagged, not
    fatal).
    """
    mats = [np.asarray(g, dtype=complex) for g in generators]
    if not mats:
        raise ValueError("need at least one generator")
    dim_space = mats[0].shape[0]
    for g in mats:
        if g.ndim != 2 or g.shape != (dim_space, dim_space):
            raise ValueError("generators must be square matrices of one size")
        if np.max(np.abs(g + g.conj().T)) > _TOL_SKEW:
            raise ValueError("generators must be skew-Hermitian")
    if dim_space > ORACLE_DIM_LIMIT:
        raise OracleCapError(
            f"dense oracle capped at {ORACLE_DIM_LIMIT} dimensions, got {dim_space}"
        )

    size2 = dim_space * dim_space
    elements: List[np.ndarray] = []
    capacity = 64
    vecs = np.zeros((capacity, size2), dtype=complex)
    vecs_conj = np.zeros_like(vecs)
    count = 0
    max_discarded = 0.0

    def try_add(mat: np.ndarray, floor: float = 0.0) -> bool:
        nonlocal capacity, vecs, vecs_conj, count, max_discarded
        nrm = float(np.linalg.norm(mat))
        if nrm <= floor:
            return False
        res = mat.ravel() / nrm
        if count:
            # modified Gram-Schmidt, second pass only for survivors
            for _ in range(2):
                coeffs = (vecs_conj[:count] @ res).real
                res = res - coeffs @ vecs[:count]
                rnorm = float(np.linalg.norm(res))
                if rnorm <= tol_indep:
                    max_discarded = max(max_discarded, rnorm)
                    return False
        new = res.reshape(dim_space, dim_space)
        new = 0.5 * (new - new.conj().T)
        new /= np.linalg.norm(new)
        elements.append(new)
        if count == capacity:
            capacity *= 2
            vecs = np.vstack([vecs, np.zeros_like(vecs)])
            vecs_conj = np.vstack([vecs_conj, np.zeros_like(vecs_conj)])
        vecs[count] = new.ravel()
        vecs_conj[count] = vecs[count].conj()
        count += 1
        return True

    for g in mats:
        try_add(g)
    frontier = list(range(len(elements)))
    rounds = 0
    hit_cap = len(elements) >= dim_cap
    while frontier and not hit_cap:
        rounds += 1
        start = len(elements)
        snapshot = np.stack(elements[:start])
        for fi in frontier:
            f = elements[fi]
            commutators = np.matmul(f, snapshot) - np.matmul(snapshot, f)
            for k in range(start):
                if try_add(commutators[k], floor=_ZERO_FLOOR) and len(elements) >= dim_cap:
                    hit_cap = True
                    break
            if hit_cap:
                break
        frontier = list(range(start, len(elements)))
    basis = OperatorBasis(dim_space=dim_space, elements=elements)
    report = ClosureReport(
        dimension=len(elements),
        rounds=rounds,
        max_residual_discarded=max_discarded,
        hit_cap=hit_cap,
    )
    return basis, report


def _as_matrices(basis) -> List[np.ndarray]:
    if isinstance(basis, OperatorBasis):
        return basis.elements
    return [np.asarray(b, dtype=complex) for b in basis]


def commutant_dimension(basis, tol_rank: float = TOL_RANK) -> int:
    """Complex dimension of {X : [X, B_k] = 0 for all k}.

    Computed as the nullity of sum_k ad_k^dag ad_k acting on complex
    N x N matrices; eigenvalues below ``tol_rank`` count as null.
    """
    elements = _as_matrices(basis)
    if not elements:
        raise ValueError("need at least one basis element")
    n = elements[0].shape[0]
    if n > ORACLE_DIM_LIMIT:
        raise OracleCapError(
            f"commutant solver capped at {ORACLE_DIM_LIMIT} dimensions, got {n}"
        )
    eye = np.eye(n)
    acc = np.zeros((n * n, n * n), dtype=complex)
    for b in elements:
        # ad_b^dag ad_b expanded into Kronecker terms; avoids forming
        # the n^2 x n^2 product explicitly
        bh = b.conj().T
        acc += np.kron(bh @ b, eye)
        acc += np.kron(eye, (b @ bh).T)
        acc -= np.kron(bh, b.T)
        acc -= np.kron(b, bh.T)
    eigs = np.linalg.eigvalsh(0.5 * (acc + acc.conj().T))
    return int(np.count_nonzero(eigs < tol_rank))


def invariant_subspace_residual(basis, subspace: Sequence[np.ndarray]) -> float:
    """Largest norm of the part of B v falling outside the subspace,
    over basis elements B and subspace basis vectors v."""
    elements = _as_matrices(basis)
    cols = [np.asarray(v, dtype=complex).ravel() for v in subspace]
    if not cols:
        raise ValueError("subspace must contain at least one vector")
    v = np.column_stack(cols)
    gram = v.conj().T @ v
    if np.max(np.abs(gram - np.eye(v.shape[1]))) > _TOL_ORTH:
        raise ValueError("subspace vectors must be orthonormal")
    worst = 0.0
    for b in elements:
        w = b @ v
        outside = w - v @ (v.conj().T @ w)
        worst = max(worst, float(np.max(np.linalg.norm(outside, axis=0))))
    return worst


def frame_condition(a: np.ndarray, tol_zero: float = TOL_ZERO) -> bool:
    """True iff the first/last row and column entries (corners excluded)
    are all nonzero; vacuously true for 2 x 2 matrices."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise ValueError("need a square matrix of size >= 2")
    k = a.shape[0]
    for j in range(1, k - 1):
        if (
            abs(a[0, j]) <= tol_zero
            or abs(a[j, 0]) <= tol_zero
            or abs(a[j, k - 1]) <= tol_zero
            or abs(a[k - 1, j]) <= tol_zero
        ):
            return False
    return True


def extract_matrix_units(
    diag: np.ndarray,
    a: np.ndarray,
    tol: float = 1e-9,
    tol_zero: float = TOL_ZERO,
) -> Dict[Tuple[int, int], np.ndarray]:
    """Recover all off-diagonal matrix units from a diagonal/frame pair.

    ``diag`` holds strictly decreasing values lam_0 > ... > lam_{d-1};
    ``a`` must satisfy the frame condition and, additionally, have
    nonzero (0, d-1) and (d-1, 0) entries, which the construction divides
    by.  Spectral selectors are entrywise masks keeping exactly the
    entries whose eigenvalue difference lam_k - lam_l matches the target
    (zero-difference diagonal entries are always dropped); equality is
    exact integer arithmetic for integer-valued spectra and 1e-9
    otherwise.  Only the extreme difference is guaranteed to be attained
    once; whenever an intermediate mask keeps a nonzero entry besides its
    target, the instance is rejected with
    :class:`AmbiguousSelectorError` rather than guessed at.

    Returns a dict keyed by 0-indexed (i, j), i != j, containing all
    d**2 - d units; raises :class:`MatrixUnitError` if any of them
    deviates from the exact unit by more than ``tol``.
    """
    lam = np.asarray(diag, dtype=float).ravel()
    d = lam.size
    if d < 2:
        raise ValueError("need at least a 2 x 2 problem")
    if np.any(np.diff(lam) >= 0):
        raise ValueError("diagonal values must be strictly decreasing")
    a = np.asarray(a, dtype=complex)
    if a.shape != (d, d):
        raise ValueError(f"matrix must be {d} x {d}")
    if not frame_condition(a, tol_zero=tol_zero):
        raise FrameConditionError("frame entries must all be nonzero")
    last = d - 1
    if abs(a[0, last]) <= tol_zero or abs(a[last, 0]) <= tol_zero:
        raise FrameConditionError(
            "the construction divides by the (1,d) and (d,1) entries; both must be nonzero"
        )

    diffs = lam[:, None] - lam[None, :]
    int_mode = bool(np.all(lam == np.rint(lam)))
    ikeys = np.rint(diffs).astype(np.int64) if int_mode else None
    offdiag = ~np.eye(d, dtype=bool)

    def select(mat: np.ndarray, i: int, j: int) -> np.ndarray:
        if int_mode:
            keep = ikeys == ikeys[i, j]
        else:
            keep = np.abs(diffs - diffs[i, j]) < 1e-9
        keep = keep & offdiag
        picked = np.where(keep, mat, 0.0)
        scale = max(1.0, float(np.max(np.abs(mat))))
        stray = picked.copy()
        stray[i, j] = 0.0
        if np.max(np.abs(stray)) > tol * scale:
            raise AmbiguousSelectorError(
                f"mask for eigenvalue difference {diffs[i, j]:g} keeps entries "
                f"besides ({i},{j}); coinciding differences make this selector ambiguous"
            )
        coeff = picked[i, j]
        if abs(coeff) <= tol * scale:
            raise FrameConditionError(f"vanishing coefficient at ({i},{j}) during extraction")
        return picked / coeff

    units: Dict[Tuple[int, int], np.ndarray] = {}
    units[(0, last)] = select(a, 0, last)
    units[(last, 0)] = select(a, last, 0)
    e_top = units[(0, last)]
    e_bot = units[(last, 0)]
    corner_gap = a[0, 0] - a[last, last]
    r_mat = e_top @ a - a @ e_top + corner_gap * e_top
    l_mat = a @ e_bot - e_bot @ a + corner_gap * e_bot
    for j in range(1, last):
        units[(0, j)] = select(r_mat, 0, j)
        units[(j, last)] = select(r_mat, j, last)
        units[(j, 0)] = select(l_mat, j, 0)
        units[(last, j)] = select(l_mat, last, j)
    for i in range(1, last):
        for j in range(1, last):
            if i == j:
                continue
            units[(i, j)] = units[(i, 0)] @ units[(0, j)] - units[(0, j)] @ units[(i, 0)]

    deviation = 0.0
    for (i, j), mat in units.items():
        exact = np.zeros((d, d))
        exact[i, j] = 1.0
        deviation = max(deviation, float(np.max(np.abs(mat - exact))))
    if deviation > tol:
        raise MatrixUnitError(f"units deviate from exact units by {deviation:g} > {tol:g}")
    return units
