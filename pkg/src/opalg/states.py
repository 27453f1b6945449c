"""States as positive normalized functionals over a matrix algebra.

A state is stored as a density matrix in the defining representation; the
expectation functional tr(density * A) is derived from it.  On top of that sit
the correlation form, the null kernel, the definite (sharp self-adjoint) set,
the GNS quotient construction, Bloch-sphere geometry for qubits, and mixing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import dense
from .errors import DimensionMismatchError, DomainError
from .pauli import AlgebraSpec, OperatorSum, QUBIT, sigma, sigma_of_vector, word_basis

STATE_TOL = 1e-10

# Gram-matrix eigenvalues below this fraction of the largest count as null
# directions of the correlation form.
KERNEL_RTOL = 1e-10


def _as_matrix(op, dim: int) -> np.ndarray:
    """Accept a dense matrix or an OperatorSum of the right dimension."""
    if isinstance(op, OperatorSum):
        mat = op.to_dense()
    else:
        mat = np.asarray(op, dtype=complex)
    if mat.shape != (dim, dim):
        raise DimensionMismatchError(
            f"operator shape {mat.shape} does not match state dimension {dim}"
        )
    return mat


@dataclass(frozen=True)
class State:
    """Density matrix plus optional algebra descriptor."""

    density: np.ndarray
    spec: AlgebraSpec | None = None

    def __post_init__(self):
        mat = dense.as_operator(self.density)
        if not dense.is_hermitian(mat, STATE_TOL):
            raise DomainError("density is not Hermitian")
        vals = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
        if np.min(vals) < -STATE_TOL:
            raise DomainError(f"density has negative eigenvalue {np.min(vals):.3e}")
        if abs(np.trace(mat) - 1.0) > STATE_TOL:
            raise DomainError(f"density trace {np.trace(mat):.12f} != 1")
        if self.spec is not None and self.spec.dense_dim != mat.shape[0]:
            raise DimensionMismatchError(
                f"spec dimension {self.spec.dense_dim} != density dimension {mat.shape[0]}"
            )
        object.__setattr__(self, "density", mat)

    @property
    def dim(self) -> int:
        return self.density.shape[0]

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_vector(cls, vec, spec: AlgebraSpec | None = None) -> "State":
        v = np.asarray(vec, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if norm < 1e-12:
            raise DomainError("cannot normalize the zero vector")
        v = v / norm
        return cls(np.outer(v, v.conj()), spec)

    @classmethod
    def computational(cls, index: int, spec: AlgebraSpec = QUBIT) -> "State":
        dim = spec.dense_dim
        if not 0 <= index < dim:
            raise DomainError(f"basis index {index} outside 0..{dim - 1}")
        v = np.zeros(dim)
        v[index] = 1.0
        return cls.from_vector(v, spec)

    @classmethod
    def maximally_mixed(cls, dim: int, spec: AlgebraSpec | None = None) -> "State":
        return cls(np.eye(dim) / dim, spec)

    # -- the expectation functional -------------------------------------------

    def expect(self, op) -> complex:
        """pi(A) = tr(density A)."""
        return complex(np.trace(self.density @ _as_matrix(op, self.dim)))

    def correlation(self, b, a) -> complex:
        """G_pi(B, A) = pi(B* A); antilinear in B, linear in A."""
        bm = _as_matrix(b, self.dim)
        am = _as_matrix(a, self.dim)
        return complex(np.trace(self.density @ (bm.conj().T @ am)))

    def pi_norm_sq(self, a) -> float:
        """||A||_pi^2 = pi(A* A); the squared seminorm of the correlation form."""
        return max(self.correlation(a, a).real, 0.0)

    def variance(self, gamma) -> float:
        """pi(G* G) - |pi(G)|^2; the variance of a (self-adjoint) observable."""
        g = _as_matrix(gamma, self.dim)
        return max(
            (self.expect(g.conj().T @ g) - abs(self.expect(g)) ** 2).real, 0.0
        )


def expect(state: State, op) -> complex:
    return state.expect(op)


def correlation(state: State, b, a) -> complex:
    return state.correlation(b, a)


def variance(state: State, gamma) -> float:
    return state.variance(gamma)


# -- kernel, definite set, GNS --------------------------------------------------


def _default_basis(state: State) -> list[np.ndarray]:
    """Operator basis of the algebra: canonical words when a spec is attached,
    matrix units otherwise."""
    if state.spec is not None:
        return [b.to_dense() for b in word_basis(state.spec)]
    dim = state.dim
    units = []
    for i in range(dim):
        for j in range(dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = 1.0
            units.append(e)
    return units


def _basis_labels(state: State) -> list[str] | None:
    if state.spec is not None and state.spec.d == 2:
        from .pauli import all_words

        return [w.letters() for w in all_words(state.spec)]
    return None


def gram_matrix(state: State, basis: Sequence[np.ndarray]) -> np.ndarray:
    """G[a, b] = pi(B_a* B_b) over an operator basis.

    Factoring the density as L L* turns G into V* V for V[:, a] = vec(B_a L),
    which keeps it exactly positive semidefinite.
    """
    vals, vecs = np.linalg.eigh(state.density)
    left = vecs @ np.diag(np.sqrt(np.clip(vals, 0.0, None)))
    v = np.column_stack([(b @ left).ravel() for b in basis])
    return v.conj().T @ v


def kernel_basis(state: State, basis: Sequence[np.ndarray] | None = None
                 ) -> tuple[list[np.ndarray], np.ndarray]:
    """Null space of the correlation form.

    Returns the kernel elements as matrices together with their coefficient
    rows in the operator basis.
    """
    ops = list(basis) if basis is not None else _default_basis(state)
    gram = gram_matrix(state, ops)
    vals, vecs = np.linalg.eigh((gram + gram.conj().T) / 2)
    cutoff = KERNEL_RTOL * max(float(vals[-1]), np.finfo(float).tiny)
    coeffs = vecs[:, vals < cutoff].T
    members = [sum(c * op for c, op in zip(row, ops)) for row in coeffs]
    return members, coeffs


def definite_set(state: State, tol: float = 1e-10) -> list[np.ndarray]:
    """Real-linear basis of self-adjoint zero-variance operators; contains I.

    Gamma is definite iff Gamma - pi(Gamma) I lies in the kernel, which is a
    real-linear condition on the Hermitian matrix Gamma.
    """
    dim = state.dim
    members, _ = kernel_basis(state)
    kernel_rows = dense.orthonormal_span(members) if members else np.zeros((0, dim * dim))

    herm_basis: list[np.ndarray] = [np.eye(dim, dtype=complex)]
    for i in range(dim):
        for j in range(i, dim):
            if i == j:
                if i > 0:
                    e = np.zeros((dim, dim), dtype=complex)
                    e[i, i] = 1.0
                    e[0, 0] = -1.0
                    herm_basis.append(e)
            else:
                e = np.zeros((dim, dim), dtype=complex)
                e[i, j] = 1.0
                e[j, i] = 1.0
                herm_basis.append(e)
                f = np.zeros((dim, dim), dtype=complex)
                f[i, j] = -1j
                f[j, i] = 1j
                herm_basis.append(f)

    # Residual of Delta H after projecting onto the kernel span, as a real
    # linear map; its null space is the definite set.
    rows = []
    for h in herm_basis:
        delta = h - state.expect(h) * np.eye(dim)
        v = delta.ravel()
        if kernel_rows.shape[0]:
            v = v - kernel_rows.T @ (kernel_rows.conj() @ v)
        rows.append(np.concatenate([v.real, v.imag]))
    constraint = np.array(rows).T  # (2*dim^2, len(herm_basis)) real matrix

    u, s, vh = np.linalg.svd(constraint, full_matrices=True)
    rank = int(np.sum(s > tol * max(s[0] if s.size else 0.0, 1.0)))
    null = vh[rank:]

    out = []
    for row in null:
        mat = sum(c * h for c, h in zip(row, herm_basis))
        out.append((mat + mat.conj().T) / 2)
    return out


@dataclass
class GnsSpace:
    """GNS data: kernel, orthonormal quotient representatives, dimension."""

    state: State
    kernel: list[np.ndarray]
    kernel_coeffs: np.ndarray
    quotient_basis: list[np.ndarray]
    basis_labels: list[str] | None = None
    pivot_indices: list[int] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.quotient_basis)

    def inner(self, b, a) -> complex:
        """<[B], [A]> = pi(B* A)."""
        return self.state.correlation(b, a)

    def coords(self, a) -> np.ndarray:
        """Coordinates of the class [A] in the orthonormal quotient basis."""
        mat = _as_matrix(a, self.state.dim)
        return np.array([self.inner(q, mat) for q in self.quotient_basis])

    def left_action(self, a) -> np.ndarray:
        """Matrix of left multiplication by A on the quotient space."""
        mat = _as_matrix(a, self.state.dim)
        cols = [self.coords(mat @ q) for q in self.quotient_basis]
        return np.array(cols).T


def gns_construct(state: State, basis: Sequence[np.ndarray] | None = None) -> GnsSpace:
    """Quotient the algebra by the kernel and orthonormalize under pi(B* A).

    Pivots are chosen greedily in basis order, so for the Z <- +1 qubit state
    over the word basis the representatives come out as [I] and [X].
    """
    ops = list(basis) if basis is not None else _default_basis(state)
    members, coeffs = kernel_basis(state, ops)

    quotient: list[np.ndarray] = []
    pivots: list[int] = []
    for idx, op in enumerate(ops):
        residual = op.astype(complex)
        for q in quotient:
            residual = residual - state.correlation(q, residual) * q
        norm_sq = state.pi_norm_sq(residual)
        if norm_sq > 1e-8:
            quotient.append(residual / math.sqrt(norm_sq))
            pivots.append(idx)

    labels = None
    if basis is None:
        labels = _basis_labels(state)
    return GnsSpace(state, members, coeffs, quotient, labels, pivots)


# -- unitary conjugation, mixing, Bloch geometry --------------------------------


def pauli_exponential(delta: float, theta: float, axis) -> np.ndarray:
    """exp(i delta) (I cos theta + i sin theta sigma(n)) for a real unit 3-vector n."""
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,):
        raise DomainError(f"axis must be a real 3-vector, got shape {n.shape}")
    if abs(np.linalg.norm(n) - 1.0) > 1e-10:
        raise DomainError(f"axis norm {np.linalg.norm(n):.12f} != 1")
    sig = sigma_of_vector(n).to_dense()
    return cmath.exp(1j * delta) * (
        math.cos(theta) * np.eye(2) + 1j * math.sin(theta) * sig
    )


def conjugate_operator(op, unitary) -> np.ndarray:
    """Change of basis on an operator: A -> U* A U."""
    a = np.asarray(op, dtype=complex)
    u = dense.as_operator(unitary, a.shape[0])
    return u.conj().T @ a @ u


def conjugate_state(state: State, unitary) -> State:
    """Push the state through a change of basis: density -> U density U*."""
    u = dense.as_operator(unitary, state.dim)
    if dense.op_norm(u.conj().T @ u - np.eye(state.dim)) > 1e-10:
        raise DomainError("conjugation requires a unitary matrix")
    return State(u @ state.density @ u.conj().T, state.spec)


def mix_states(weights, states: Sequence[State]) -> State:
    """Convex combination of states: density = sum p_i density_i."""
    w = np.asarray(weights, dtype=float)
    if len(w) != len(states):
        raise DimensionMismatchError("one weight per state required")
    if np.any(w < -1e-12) or abs(np.sum(w) - 1.0) > 1e-12:
        raise DomainError("weights must be nonnegative and sum to 1")
    dim = states[0].dim
    out = np.zeros((dim, dim), dtype=complex)
    for p, st in zip(w, states):
        if st.dim != dim:
            raise DimensionMismatchError("all states must share a dimension")
        out += p * st.density
    return State(out, states[0].spec)


def bloch_vector(state: State) -> np.ndarray:
    """(pi(X), pi(Y), pi(Z)) for a qubit state."""
    if state.dim != 2:
        raise DimensionMismatchError("Bloch vector is defined for qubit states")
    return np.array([state.expect(sigma(i).to_dense()).real for i in (1, 2, 3)])


def state_from_bloch(r) -> State:
    """State with density (I + r . sigma) / 2 for |r| <= 1."""
    vec = np.asarray(r, dtype=float)
    if vec.shape != (3,):
        raise DomainError("Bloch vector must be a real 3-vector")
    if np.linalg.norm(vec) > 1.0 + 1e-10:
        raise DomainError(f"Bloch vector norm {np.linalg.norm(vec):.12f} > 1")
    density = 0.5 * (np.eye(2) + sigma_of_vector(vec).to_dense())
    return State(density, QUBIT)


def state_from_angles(theta: float, phi: float, delta: float = 0.0) -> State:
    """Vector state cos(theta/2)|0> + i e^{i phi} sin(theta/2)|1>.

    The i*e^{i phi} relative phase means the Bloch azimuth sits at phi + pi/2
    relative to the textbook convention; callers wanting the textbook azimuth
    should shift phi accordingly.
    """
    amp0 = cmath.exp(1j * delta) * math.cos(theta / 2)
    amp1 = cmath.exp(1j * delta) * 1j * cmath.exp(1j * phi) * math.sin(theta / 2)
    return State.from_vector([amp0, amp1], QUBIT)


def is_pure(state: State, tol: float = 1e-10) -> bool:
    """True iff the density has numerical rank one."""
    vals = np.linalg.eigvalsh(state.density)
    return bool(vals[-2] < tol) if state.dim > 1 else True


def fiducial_z_state(b: int) -> State:
    """The Z <- (-1)^b eigenfunctional: b=0 is the north pole."""
    return State.computational(b, QUBIT)
