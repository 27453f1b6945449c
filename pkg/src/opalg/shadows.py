"""Desk-scale classical shadows: the measurement-average channel, its
pseudo-inverse, seeded shadow sampling, and median-of-means estimation.

A scheme is a finite set of rotation unitaries plus a PVM (default the
computational basis).  One shot rotates the state by a uniformly drawn U,
samples an outcome by the Born rule, and records the inverted snapshot
M^-1(U* P_l U); averaging snapshots over the exact sampling distribution
reproduces the input state when the scheme is tomographically complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iter_product

import numpy as np

from . import dense
from .composite import devectorize, vectorize
from .errors import DomainError, IncompleteSchemeError
from .states import State

INVERSION_RCOND = 1e-10


@dataclass
class ShadowScheme:
    """Rotation group, measurement PVM, and the averaged channel M."""

    unitaries: list[np.ndarray]
    pvm: list[np.ndarray]
    superop: np.ndarray
    superop_pinv: np.ndarray
    tomographically_complete: bool
    dim: int

    def apply_channel(self, rho: np.ndarray) -> np.ndarray:
        return devectorize(self.superop @ vectorize(rho))

    def invert(self, rho: np.ndarray) -> np.ndarray:
        if not self.tomographically_complete:
            raise IncompleteSchemeError(
                "scheme is not tomographically complete; refusing inversion"
            )
        return devectorize(self.superop_pinv @ vectorize(rho))


def shadow_channel(unitaries, pvm=None) -> ShadowScheme:
    """Build M(rho) = E_U sum_l p(U, l) U* P_l U and its pseudo-inverse.

    Each term conjugates by U, pinches with the PVM, and conjugates back, so M
    is an average of channels and hence a channel itself.
    """
    mats = [dense.as_operator(u) for u in unitaries]
    if not mats:
        raise DomainError("scheme needs at least one unitary")
    dim = mats[0].shape[0]
    for u in mats:
        if u.shape != (dim, dim):
            raise DomainError("all scheme unitaries must share a dimension")
        if dense.op_norm(u.conj().T @ u - np.eye(dim)) > 1e-10:
            raise DomainError("scheme contains a non-unitary element")

    if pvm is None:
        pvm = []
        for i in range(dim):
            p = np.zeros((dim, dim), dtype=complex)
            p[i, i] = 1.0
            pvm.append(p)
    else:
        pvm = [dense.as_operator(p, dim) for p in pvm]
        total = sum(pvm)
        if np.max(np.abs(total - np.eye(dim))) > 1e-10:
            raise DomainError("PVM does not resolve the identity")
        for i, p in enumerate(pvm):
            for j, q in enumerate(pvm):
                expected = p if i == j else np.zeros_like(p)
                if np.max(np.abs(p @ q - expected)) > 1e-9:
                    raise DomainError("PVM projectors are not orthogonal")

    superop = np.zeros((dim * dim, dim * dim), dtype=complex)
    for u in mats:
        rotate = np.kron(u, u.conj())
        rotate_back = np.kron(u.conj().T, u.T)
        pinch = np.zeros_like(superop)
        for p in pvm:
            pinch += np.kron(p, p.conj())
        superop += rotate_back @ pinch @ rotate
    superop /= len(mats)

    rank = np.linalg.matrix_rank(superop, tol=INVERSION_RCOND)
    complete = bool(rank == dim * dim)
    pinv = np.linalg.pinv(superop, rcond=INVERSION_RCOND)
    return ShadowScheme(mats, pvm, superop, pinv, complete, dim)


def single_qubit_basis_rotations() -> list[np.ndarray]:
    """The six rotations mapping the computational basis onto the +-X, +-Y,
    +-Z measurement bases."""
    from .composite import hadamard
    from .pauli import pauli_X

    eye = np.eye(2, dtype=complex)
    x = pauli_X().to_dense()
    h = hadamard()
    s_dag = np.diag([1.0, -1j]).astype(complex)
    bases = [eye, h, h @ s_dag]
    return [flip @ b for b in bases for flip in (eye, x)]


def pauli_basis_scheme(qubits: int = 1) -> ShadowScheme:
    """Random-Pauli-basis scheme: per-site products of the six rotations."""
    singles = single_qubit_basis_rotations()
    unitaries = []
    for combo in iter_product(singles, repeat=qubits):
        u = np.array([[1.0 + 0j]])
        for factor in combo:
            u = np.kron(u, factor)
        unitaries.append(u)
    return shadow_channel(unitaries)


@dataclass
class ShadowSample:
    """Snapshots plus the (unitary, outcome) indices that produced them."""

    snapshots: list[np.ndarray]
    unitary_indices: np.ndarray
    outcome_indices: np.ndarray
    seed: int


def enumerate_snapshot_average(scheme: ShadowScheme, state: State) -> np.ndarray:
    """Exact expectation of one inverted snapshot under the sampling law.

    Enumerates every (U, l) pair with its Born weight; equals the input
    density for a complete scheme.
    """
    out = np.zeros((scheme.dim, scheme.dim), dtype=complex)
    for u in scheme.unitaries:
        rotated = u @ state.density @ u.conj().T
        for proj in scheme.pvm:
            prob = float(np.real(np.trace(rotated @ proj))) / len(scheme.unitaries)
            if prob <= 0.0:
                continue
            out += prob * scheme.invert(u.conj().T @ proj @ u)
    return out


def sample_shadows(scheme: ShadowScheme, state: State, shots: int,
                   seed: int = 0) -> ShadowSample:
    """Draw seeded shadow snapshots M^-1(U* P_l U).

    Born probabilities and inverted snapshots are precomputed per (U, l), so
    sampling reduces to two integer draws per shot.
    """
    if shots < 1:
        raise DomainError("need at least one shot")
    if not scheme.tomographically_complete:
        raise IncompleteSchemeError(
            "scheme is not tomographically complete; shadows are undefined"
        )
    if state.dim != scheme.dim:
        raise DomainError("state dimension does not match the scheme")

    n_unitaries = len(scheme.unitaries)
    n_outcomes = len(scheme.pvm)
    prob_table = np.zeros((n_unitaries, n_outcomes))
    snapshot_table: list[list[np.ndarray]] = []
    for gi, u in enumerate(scheme.unitaries):
        rotated = u @ state.density @ u.conj().T
        row = []
        for li, proj in enumerate(scheme.pvm):
            prob_table[gi, li] = max(float(np.real(np.trace(rotated @ proj))), 0.0)
            row.append(scheme.invert(u.conj().T @ proj @ u))
        snapshot_table.append(row)
    prob_table /= prob_table.sum(axis=1, keepdims=True)

    rng = np.random.default_rng(seed)
    unitary_idx = rng.integers(0, n_unitaries, size=shots)
    uniforms = rng.random(size=shots)
    cumulative = np.cumsum(prob_table, axis=1)
    outcome_idx = np.empty(shots, dtype=int)
    for i in range(shots):
        outcome_idx[i] = int(np.searchsorted(cumulative[unitary_idx[i]], uniforms[i]))
    outcome_idx = np.clip(outcome_idx, 0, n_outcomes - 1)

    snapshots = [snapshot_table[g][l] for g, l in zip(unitary_idx, outcome_idx)]
    return ShadowSample(snapshots, unitary_idx, outcome_idx, seed)


def estimate(sample: ShadowSample | list[np.ndarray], observables,
             batches: int) -> list[float]:
    """Median-of-means estimates of tr(rho A) from shadow snapshots."""
    snapshots = sample.snapshots if isinstance(sample, ShadowSample) else list(sample)
    if not snapshots:
        raise DomainError("no snapshots to estimate from")
    if batches < 1 or batches > len(snapshots):
        raise DomainError("batch count must be between 1 and the shot count")

    obs = [np.asarray(a, dtype=complex) for a in observables]
    values = np.array([[float(np.real(np.trace(shadow @ a))) for a in obs]
                       for shadow in snapshots])
    splits = np.array_split(values, batches, axis=0)
    batch_means = np.array([chunk.mean(axis=0) for chunk in splits])
    return [float(v) for v in np.median(batch_means, axis=0)]


def shadow_norm_estimate(scheme: ShadowScheme, observable, n_states: int = 64,
                         seed: int = 0) -> dict:
    """Empirical shadow-norm constant for one observable.

    Samples random states kappa, takes the exact (U, l)-expectation of the
    squared single-snapshot estimator tr(M^-1(U* P_l U) A), and maximizes over
    the sampled states.  Reported as an estimate with its sample count; the
    true constant maximizes over all states.
    """
    a = dense.as_operator(observable, scheme.dim)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_states):
        g = rng.normal(size=(scheme.dim, scheme.dim)) + 1j * rng.normal(size=(scheme.dim, scheme.dim))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        second_moment = 0.0
        for u in scheme.unitaries:
            rotated = u @ rho @ u.conj().T
            for proj in scheme.pvm:
                prob = float(np.real(np.trace(rotated @ proj))) / len(scheme.unitaries)
                if prob <= 0.0:
                    continue
                est = float(np.real(np.trace(
                    scheme.invert(u.conj().T @ proj @ u) @ a)))
                second_moment += prob * est * est
        worst = max(worst, second_moment)
    return {"estimate": worst, "states_sampled": n_states, "seed": seed}
