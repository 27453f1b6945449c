"""Quantum operations: Kraus sets, superoperators, Choi matrices, CP tests,
Kraus extraction, and Stinespring dilation.

Superoperators are matricized in the row-stacking vectorization basis, so the
map rho -> A rho B has matrix kron(A, B.T).  The Choi matrix of a map E is
J(E) = sum_ab E[E_ab] (x) E_ab, which for a Kraus map equals
sum_k |B_k>><<B_k|; positivity of J characterizes complete positivity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import dense
from .composite import FactorLayout, devectorize, partial_trace, vectorize
from .errors import (
    DimensionMismatchError,
    DomainError,
    NotCompletelyPositiveError,
    ZeroProbabilityError,
)
from .states import State

CHANNEL_TOL = 1e-10

# Choi eigenvalues in [-KRAUS_ZERO_NEG, KRAUS_ZERO_POS] are treated as zero
# when extracting Kraus operators; anything below -KRAUS_ZERO_NEG is a genuine
# CP violation.
KRAUS_ZERO_NEG = 1e-9
KRAUS_ZERO_POS = 1e-12


@dataclass
class KrausSet:
    """A quantum operation in operator-sum form."""

    operators: list[np.ndarray]
    labels: list = field(default_factory=list)

    def __post_init__(self):
        if not self.operators:
            raise DomainError("a Kraus set needs at least one operator")
        mats = [np.asarray(op, dtype=complex) for op in self.operators]
        shape = mats[0].shape
        if any(m.shape != shape for m in mats):
            raise DimensionMismatchError("all Kraus operators must share a shape")
        self.operators = mats
        if not self.labels:
            self.labels = list(range(len(mats)))

    @property
    def dim_in(self) -> int:
        return self.operators[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.operators[0].shape[0]

    def completeness_sum(self) -> np.ndarray:
        """sum_k B_k* B_k."""
        out = np.zeros((self.dim_in, self.dim_in), dtype=complex)
        for b in self.operators:
            out += b.conj().T @ b
        return out

    def superoperator(self) -> np.ndarray:
        """Matrix of rho -> sum_k B_k rho B_k* on vectorized operators."""
        out = np.zeros((self.dim_out**2, self.dim_in**2), dtype=complex)
        for b in self.operators:
            out += np.kron(b, b.conj())
        return out


def validate_operation(kraus: KrausSet, tol: float = CHANNEL_TOL) -> dict:
    """Check operation validity (I - sum B*B >= 0) and the channel flag."""
    total = kraus.completeness_sum()
    gap = np.eye(kraus.dim_in) - total
    valid = dense.is_positive(gap, tol)
    is_channel = bool(np.max(np.abs(gap)) <= tol)
    return {"valid": bool(valid), "is_channel": is_channel}


def apply_operation(kraus: KrausSet, state: State, observed=None):
    """Apply a quantum operation to a state.

    With an observed label k the Lueders-style update p_k^-1 B_k rho B_k* is
    returned together with p_k.  Unobserved, the Kraus-form mixture is
    returned with the trace functional tau = sum_k p_k.
    """
    if state.dim != kraus.dim_in:
        raise DimensionMismatchError(
            f"state dimension {state.dim} != Kraus input dimension {kraus.dim_in}"
        )
    if observed is not None:
        idx = kraus.labels.index(observed)
        b = kraus.operators[idx]
        p = float(np.real(np.trace(state.density @ (b.conj().T @ b))))
        if p <= 1e-12:
            raise ZeroProbabilityError(f"outcome {observed} has probability {p:.3e}")
        return State(b @ state.density @ b.conj().T / p), p

    out = np.zeros((kraus.dim_out, kraus.dim_out), dtype=complex)
    for b in kraus.operators:
        out += b @ state.density @ b.conj().T
    tau = float(np.real(np.trace(out)))
    spec = state.spec if kraus.dim_out == kraus.dim_in else None
    normalized = State(out / tau, spec) if tau > 1e-12 else None
    return normalized, tau


def _superop_matrix(superop) -> np.ndarray:
    if isinstance(superop, KrausSet):
        return superop.superoperator()
    mat = np.asarray(superop, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError("superoperator matrix must be square")
    dim = int(round(np.sqrt(mat.shape[0])))
    if dim * dim != mat.shape[0]:
        raise DimensionMismatchError("superoperator side is not a perfect square")
    return mat


def choi_of(superop) -> np.ndarray:
    """Choi matrix J(E) = sum_ab E[E_ab] (x) E_ab.

    Accepts a KrausSet or a matrix acting on vectorized operators; for a Kraus
    set the direct formula sum_k |B_k>><<B_k| is used (they agree).
    """
    if isinstance(superop, KrausSet):
        dim_out, dim_in = superop.dim_out, superop.dim_in
        j = np.zeros((dim_out * dim_in, dim_out * dim_in), dtype=complex)
        for b in superop.operators:
            v = b.ravel()  # rectangular Kraus operators vectorize too
            j += np.outer(v, v.conj())
        return j

    smat = _superop_matrix(superop)
    dim = int(round(np.sqrt(smat.shape[1])))
    dim_out = int(round(np.sqrt(smat.shape[0])))
    j = np.zeros((dim_out * dim, dim_out * dim), dtype=complex)
    for a in range(dim):
        for b in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[a, b] = 1.0
            image = smat @ vectorize(unit)
            j += np.kron(devectorize(image), unit)
    return j


def is_completely_positive(superop, tol: float = KRAUS_ZERO_NEG) -> bool:
    j = choi_of(superop)
    return bool(np.min(np.linalg.eigvalsh((j + j.conj().T) / 2)) >= -tol)


def kraus_from_choi(choi, dim_in: int | None = None) -> KrausSet:
    """Extract Kraus operators from a positive Choi matrix.

    Eigenvalues in the round-off band are zeroed; a genuinely negative one
    raises with the offending value.  The operator count equals the numerical
    rank of the Choi matrix.
    """
    j = dense.require_hermitian(np.asarray(choi, dtype=complex), tol=1e-8)
    side = j.shape[0]
    if dim_in is None:
        dim_in = int(round(np.sqrt(side)))
    dim_out = side // dim_in
    if dim_out * dim_in != side:
        raise DimensionMismatchError("Choi side must factor as dim_out * dim_in")

    vals, vecs = np.linalg.eigh((j + j.conj().T) / 2)
    operators = []
    for lam, vec in zip(vals, vecs.T):
        if lam < -KRAUS_ZERO_NEG:
            raise NotCompletelyPositiveError(
                f"Choi matrix has negative eigenvalue {lam:.6e}; map is not CP",
                eigenvalue=float(lam),
            )
        if lam <= KRAUS_ZERO_POS:
            continue
        operators.append(np.sqrt(lam) * vec.reshape(dim_out, dim_in))
    if not operators:
        operators = [np.zeros((dim_out, dim_in), dtype=complex)]
    return KrausSet(operators)


def stinespring_dilate(kraus: KrausSet) -> dict:
    """Dilate a channel to an isometry V = sum_k B_k (x) |k>.

    V maps dim_in to dim_out * env_dim with V*V = I, and tracing out the
    environment (second factor) recovers the channel.
    """
    flags = validate_operation(kraus)
    if not flags["is_channel"]:
        raise DomainError("Stinespring dilation requires a trace-preserving channel")
    env_dim = len(kraus.operators)
    v = np.zeros((kraus.dim_out * env_dim, kraus.dim_in), dtype=complex)
    for k, b in enumerate(kraus.operators):
        ket = np.zeros((env_dim, 1), dtype=complex)
        ket[k, 0] = 1.0
        v += np.kron(b, ket)
    return {"isometry": v, "env_dim": env_dim}


def stinespring_apply(dilation: dict, state: State, dim_out: int) -> np.ndarray:
    """tr_env(V rho V*) for a dilation produced by stinespring_dilate."""
    v = dilation["isometry"]
    env_dim = dilation["env_dim"]
    big = v @ state.density @ v.conj().T
    return partial_trace(big, FactorLayout((dim_out, env_dim)), [0])


def compose(outer: KrausSet, inner: KrausSet) -> KrausSet:
    """Channel composition outer . inner as a Kraus set (product operators)."""
    if inner.dim_out != outer.dim_in:
        raise DimensionMismatchError("composition dimensions do not match")
    return KrausSet([a @ b for a in outer.operators for b in inner.operators])


def random_channel(dim: int, n_kraus: int, rng: np.random.Generator) -> KrausSet:
    """Random channel from the isometry of a Haar-ish random unitary block."""
    u = dense.random_unitary(dim * n_kraus, rng)
    block = u[:, :dim]
    ops = [block[k * dim:(k + 1) * dim, :] for k in range(n_kraus)]
    return KrausSet(ops)


# Builtin maps for the CLI ------------------------------------------------------


def transpose_superop(dim: int) -> np.ndarray:
    """Matricized transpose map (the swap on vectorized operators); not CP."""
    s = np.zeros((dim * dim, dim * dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            s[i * dim + j, j * dim + i] = 1.0
    return s


def identity_channel(dim: int) -> KrausSet:
    return KrausSet([np.eye(dim, dtype=complex)])


def depolarizing_channel(p: float = 0.5) -> KrausSet:
    """Single-qubit depolarizing channel with error weight p."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"depolarizing weight must be in [0, 1], got {p}")
    from .pauli import pauli_X, pauli_Y, pauli_Z

    ops = [np.sqrt(1 - 3 * p / 4) * np.eye(2, dtype=complex)]
    for gen in (pauli_X, pauli_Y, pauli_Z):
        ops.append(np.sqrt(p / 4) * gen().to_dense())
    return KrausSet(ops)


def builtin_map(name: str, dim: int = 2, p: float = 0.5):
    """Named maps for `channel analyze --builtin`."""
    if name == "transpose":
        return transpose_superop(dim)
    if name == "identity":
        return identity_channel(dim)
    if name == "depolarizing":
        return depolarizing_channel(p)
    raise DomainError(f"unknown builtin map {name!r}")
