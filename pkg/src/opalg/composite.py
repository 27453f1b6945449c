"""Tensor products, partial trace, vectorization, commutants.

Site 0 is the leftmost (most significant) tensor slot throughout, matching
left-to-right tensor notation.  Vectorization is row-stacking:
|A>> = sum_ij A[i, j] |i> (x) |j>, i.e. A.ravel().
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from . import dense
from .errors import DimensionLimitError, DimensionMismatchError, DomainError
from .pauli import AlgebraSpec, DENSE_DIM_LIMIT, OperatorSum, pauli_X, pauli_Z
from .states import State


@dataclass(frozen=True)
class FactorLayout:
    """Per-site local dimensions of a tensor factorization."""

    local_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.local_dims)
        if not dims or any(d < 1 for d in dims):
            raise DomainError(f"invalid local dimensions {dims}")
        object.__setattr__(self, "local_dims", dims)

    @property
    def total_dim(self) -> int:
        return prod(self.local_dims)

    @property
    def sites(self) -> int:
        return len(self.local_dims)

    @classmethod
    def qubits(cls, n: int) -> "FactorLayout":
        return cls((2,) * n)


def tensor(a, b) -> np.ndarray:
    """Kronecker product of dense operators (or anything array-like)."""
    am = np.asarray(a, dtype=complex)
    bm = np.asarray(b, dtype=complex)
    if am.shape[0] * bm.shape[0] > DENSE_DIM_LIMIT:
        raise DimensionLimitError(
            f"tensor dimension {am.shape[0] * bm.shape[0]} exceeds {DENSE_DIM_LIMIT}"
        )
    return np.kron(am, bm)


def hadamard() -> np.ndarray:
    """H = (X + Z)/sqrt(2)."""
    return (pauli_X().to_dense() + pauli_Z().to_dense()) / np.sqrt(2)


def cnot() -> np.ndarray:
    """|0><0| (x) I + |1><1| (x) X, block-diagonal [[I, 0], [0, X]]."""
    e00 = np.diag([1.0, 0.0]).astype(complex)
    e11 = np.diag([0.0, 1.0]).astype(complex)
    return tensor(e00, np.eye(2)) + tensor(e11, pauli_X().to_dense())


def bell_state() -> State:
    """Two-qubit Bell state built operationally as CNOT (H (x) I) |00>."""
    zero = np.zeros(4, dtype=complex)
    zero[0] = 1.0
    vec = cnot() @ tensor(hadamard(), np.eye(2)) @ zero
    return State.from_vector(vec, AlgebraSpec(2, 2))


def partial_trace(a, layout: FactorLayout, keep: Sequence[int]) -> np.ndarray:
    """Trace out every site not in ``keep`` (0-based site indices).

    The result acts on the kept sites in their original order.
    """
    mat = dense.as_operator(a, layout.total_dim)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= layout.sites for k in keep):
        raise DomainError(f"keep set {keep} outside 0..{layout.sites - 1}")

    dims = layout.local_dims
    n = layout.sites
    tensorized = mat.reshape(dims + dims)
    traced = [s for s in range(n) if s not in keep]
    # Trace axes pairwise, recomputing positions as the tensor shrinks.
    remaining = list(range(n))
    for s in traced:
        pos = remaining.index(s)
        k = len(remaining)
        tensorized = np.trace(tensorized, axis1=pos, axis2=pos + k)
        remaining.pop(pos)
    dim_out = prod(dims[s] for s in keep) if keep else 1
    return tensorized.reshape(dim_out, dim_out)


def permute_sites(a, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of an operator.

    ``order[t]`` names which current factor lands at target slot t; ``dims``
    are the current per-factor dimensions.
    """
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    mat = dense.as_operator(a, prod(dims))
    if sorted(order) != list(range(n)):
        raise DomainError(f"{order} is not a permutation of 0..{n - 1}")
    axes = list(order) + [n + o for o in order]
    out = mat.reshape(dims + dims).transpose(axes)
    return out.reshape(mat.shape)


def reduced_density(state: State, layout: FactorLayout, keep: Sequence[int]) -> State:
    """Reduced state on the kept sites."""
    sub = partial_trace(state.density, layout, keep)
    spec = None
    if state.spec is not None and len(set(layout.local_dims)) == 1:
        spec = AlgebraSpec(layout.local_dims[0], len(set(keep)))
    return State(sub, spec)


def is_product_state(state: State, layout: FactorLayout, tol: float = 1e-10) -> bool:
    """True iff the density equals the tensor product of its reduced densities."""
    rebuilt = np.array([[1.0 + 0j]])
    for site in range(layout.sites):
        rebuilt = np.kron(rebuilt, partial_trace(state.density, layout, [site]))
    return bool(np.max(np.abs(rebuilt - state.density)) <= tol)


def vectorize(a) -> np.ndarray:
    """|A>> = sum_ij A[i, j] |i>|j> (row stacking)."""
    mat = dense.as_operator(a)
    return mat.ravel().copy()


def devectorize(v) -> np.ndarray:
    vec = np.asarray(v, dtype=complex).ravel()
    dim = int(round(np.sqrt(vec.size)))
    if dim * dim != vec.size:
        raise DimensionMismatchError(f"vector of length {vec.size} is not square")
    return vec.reshape(dim, dim).copy()


def left_mult_superop(m: np.ndarray) -> np.ndarray:
    """Superoperator of A -> M A on vectorized operators."""
    return np.kron(m, np.eye(m.shape[0]))


def right_mult_superop(m: np.ndarray) -> np.ndarray:
    """Superoperator of A -> A M on vectorized operators."""
    return np.kron(np.eye(m.shape[0]), m.T)


def commutant(generators: Sequence[np.ndarray], dim: int) -> list[np.ndarray]:
    """Basis of {A : [A, M] = 0 for all generators M}.

    The generator list is closed under adjoints first, then the stacked
    commutator superoperators are solved for their common null space.
    """
    gens: list[np.ndarray] = []
    for g in generators:
        m = dense.as_operator(g, dim)
        gens.append(m)
        gens.append(m.conj().T)
    if not gens:
        gens = [np.eye(dim, dtype=complex)]

    blocks = [left_mult_superop(m) - right_mult_superop(m) for m in gens]
    stacked = np.vstack(blocks)
    u, s, vh = np.linalg.svd(stacked)
    tol = max(s[0], 1.0) * 1e-10 if s.size else 1e-10
    null = vh[np.sum(s > tol):].conj()
    return [devectorize(row) for row in null]


def span_dim(mats: Sequence[np.ndarray], tol: float = 1e-10) -> int:
    if not len(mats):
        return 0
    return dense.orthonormal_span(mats, tol).shape[0]


def algebra_closure(basis: Sequence[np.ndarray], dim: int,
                    tol: float = 1e-10) -> list[np.ndarray]:
    """Span-closure of a set under products (and the identity); a C*-subalgebra
    basis once the input is adjoint-closed."""
    current = [np.eye(dim, dtype=complex)] + [dense.as_operator(b, dim) for b in basis]
    rows = dense.orthonormal_span(current, tol)
    while True:
        mats = [devectorize(r) for r in rows]
        products = [a @ b for a in mats for b in mats]
        new_rows = dense.orthonormal_span(list(rows) + [p.ravel() for p in products], tol)
        if new_rows.shape[0] == rows.shape[0]:
            return mats
        rows = new_rows


def _subspace_leq(inner: Sequence[np.ndarray], outer: Sequence[np.ndarray],
                  tol: float = 1e-8) -> bool:
    """True iff span(inner) is contained in span(outer)."""
    outer_rows = dense.orthonormal_span(outer)
    for m in inner:
        v = np.ravel(m)
        residual = v - outer_rows.T @ (outer_rows.conj() @ v)
        if np.linalg.norm(residual) > tol * max(np.linalg.norm(v), 1.0):
            return False
    return True


def factor_check(basis: Sequence[np.ndarray], dim: int) -> dict:
    """Report whether a *-closed subalgebra N is a MASA or a tensor factor.

    Returns is_masa (N equals its commutant), join_is_full (N v N' spans the
    full matrix algebra), and intersection_trivial (N n N' = C I).
    """
    mats = [dense.as_operator(b, dim) for b in basis]
    for m in mats:
        if not _subspace_leq([m.conj().T], mats):
            raise DomainError("subalgebra basis must be closed under adjoints")

    algebra = algebra_closure(mats, dim)
    comm = commutant(algebra, dim)

    is_masa = _subspace_leq(algebra, comm) and _subspace_leq(comm, algebra)

    join = algebra_closure(algebra + comm, dim)
    join_is_full = span_dim(join) == dim * dim

    # dim(A n C) = dim A + dim C - dim(A + C) as vector spaces.
    dim_a = span_dim(algebra)
    dim_c = span_dim(comm)
    dim_sum = span_dim(list(algebra) + list(comm))
    intersection_trivial = (dim_a + dim_c - dim_sum) == 1

    return {
        "is_masa": bool(is_masa),
        "join_is_full": bool(join_is_full),
        "intersection_trivial": bool(intersection_trivial),
        "commutant_dim": len(comm),
        "algebra_dim": len(algebra),
    }
