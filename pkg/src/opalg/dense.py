"""Dense complex linear algebra: Hermitian spectra, operator norm, positivity,
and the functional calculus at matrix scale.

Operators are plain complex numpy arrays; helpers below validate shape and
finiteness rather than wrapping them in a bespoke type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionLimitError, DimensionMismatchError, DomainError
from .pauli import DENSE_DIM_LIMIT

HERMITIAN_TOL = 1e-10

# Relative gap under which neighbouring eigenvalues are merged into one
# spectral projector.  Floating point needs an explicit rule where the
# functional calculus assumes disjoint spectral sets.
EIG_CLUSTER_RTOL = 1e-8


def as_operator(a, dim: int | None = None) -> np.ndarray:
    """Validate and return a finite square complex matrix."""
    mat = np.asarray(a, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {mat.shape}")
    if mat.shape[0] < 1:
        raise DimensionMismatchError("matrix must have dimension >= 1")
    if mat.shape[0] > DENSE_DIM_LIMIT:
        raise DimensionLimitError(
            f"dense dimension {mat.shape[0]} exceeds limit {DENSE_DIM_LIMIT}"
        )
    if not np.all(np.isfinite(mat)):
        raise DomainError("matrix has non-finite entries")
    if dim is not None and mat.shape[0] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {mat.shape[0]}")
    return mat


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def require_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    mat = as_operator(a)
    if not is_hermitian(mat, tol):
        raise DomainError("matrix is not Hermitian within tolerance")
    return mat


@dataclass
class SpectralDecomposition:
    """Eigenvalues (ascending, degeneracies merged) with orthogonal projectors."""

    eigenvalues: list[float]
    projectors: list[np.ndarray]

    def reconstruct(self) -> np.ndarray:
        dim = self.projectors[0].shape[0]
        out = np.zeros((dim, dim), dtype=complex)
        for lam, proj in zip(self.eigenvalues, self.projectors):
            out += lam * proj
        return out

    def projector_for(self, value: float, tol: float = 1e-8) -> np.ndarray:
        for lam, proj in zip(self.eigenvalues, self.projectors):
            if abs(lam - value) <= tol:
                return proj
        raise DomainError(f"{value} is not in the spectrum {self.eigenvalues}")


def eig_hermitian(a, tol: float = HERMITIAN_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix into an eigenweighted PVM."""
    mat = require_hermitian(a, tol)
    vals, vecs = np.linalg.eigh((mat + mat.conj().T) / 2)
    scale = max(float(np.max(np.abs(vals))), np.finfo(float).tiny)
    gap = EIG_CLUSTER_RTOL * scale

    eigenvalues: list[float] = []
    projectors: list[np.ndarray] = []
    start = 0
    for stop in range(1, len(vals) + 1):
        if stop == len(vals) or vals[stop] - vals[stop - 1] > gap:
            block = vecs[:, start:stop]
            projectors.append(block @ block.conj().T)
            eigenvalues.append(float(np.mean(vals[start:stop])))
            start = stop
    return SpectralDecomposition(eigenvalues, projectors)


def op_norm(a) -> float:
    """Operator norm via the square root of the top eigenvalue of A*A."""
    mat = as_operator(a)
    return float(np.sqrt(np.max(np.linalg.eigvalsh(mat.conj().T @ mat))))


def is_positive(a, tol: float = HERMITIAN_TOL) -> bool:
    """True iff Hermitian within tol with spectrum >= -tol."""
    mat = as_operator(a)
    if not is_hermitian(mat, tol):
        return False
    return bool(np.min(np.linalg.eigvalsh((mat + mat.conj().T) / 2)) >= -tol)


def apply_function(f: Callable[[float], complex], a) -> np.ndarray:
    """Functional calculus on a Hermitian matrix: sum of f(lambda) * projector."""
    dec = eig_hermitian(a)
    dim = dec.projectors[0].shape[0]
    out = np.zeros((dim, dim), dtype=complex)
    for lam, proj in zip(dec.eigenvalues, dec.projectors):
        out += complex(f(lam)) * proj
    return out


def spectral_projector(a, predicate: Callable[[float], bool]) -> np.ndarray:
    """Projector onto the eigenspaces whose eigenvalue satisfies the predicate."""
    return apply_function(lambda lam: 1.0 if predicate(lam) else 0.0, a)


def trace_distance(a, b) -> float:
    """Half the trace norm of the difference of two Hermitian matrices."""
    diff = as_operator(a) - as_operator(b)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def orthonormal_span(vectors: Sequence[np.ndarray], tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (rows) of the span of the given vectors."""
    if not len(vectors):
        return np.zeros((0, 0), dtype=complex)
    stack = np.array([np.ravel(v) for v in vectors], dtype=complex)
    u, s, vh = np.linalg.svd(stack, full_matrices=False)
    rank = int(np.sum(s > tol * max(s[0], 1e-300))) if s.size else 0
    return vh[:rank]
