"""Exact symbolic algebra of n-site generalized Pauli words and their complex sums.

A word is stored as a phase exponent together with per-site X and Z exponents,
all reduced to canonical residues: ``w = omega_{2d}^phase * X^x Z^z`` with
``omega_{2d} = exp(i*pi/d)``.  The half-root phase group makes every product
exact; in particular Y = i*XZ for qubits needs no floating point.  Products
reorder Z past X sitewise via the Weyl relation ``Z X = omega_d X Z``, which
costs one integer dot product, so multiplication is O(n).

Sums keep phases folded into coefficients: the term map is keyed by the
phase-stripped canonical word (x, z).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    AlgebraMismatchError,
    DimensionLimitError,
    DomainError,
    UnsupportedInputError,
)

# Coefficients smaller than this are dropped when term maps are merged, so
# round-off cannot grow the maps without bound.
COEFF_DROP_TOL = 1e-14

# Cap on the dense dimension d**n; the five-qubit code needs only 32.
DENSE_DIM_LIMIT = 4096


@dataclass(frozen=True)
class AlgebraSpec:
    """Local dimension d and site count n of a qudit Pauli algebra."""

    d: int = 2
    n: int = 1

    def __post_init__(self):
        if self.d < 2:
            raise DomainError(f"local dimension must be >= 2, got {self.d}")
        if self.n < 1:
            raise DomainError(f"site count must be >= 1, got {self.n}")

    @property
    def dense_dim(self) -> int:
        return self.d**self.n

    def check_dense(self) -> int:
        dim = self.dense_dim
        if dim > DENSE_DIM_LIMIT:
            raise DimensionLimitError(
                f"dense dimension {dim} exceeds limit {DENSE_DIM_LIMIT}"
            )
        return dim

    def omega(self) -> complex:
        """Primitive d-th root of unity omega_d."""
        return cmath.exp(2j * math.pi / self.d)


def _check_same_spec(a: AlgebraSpec, b: AlgebraSpec) -> None:
    if a != b:
        raise AlgebraMismatchError(f"algebra mismatch: {a} vs {b}")


def phase_value(spec: AlgebraSpec, phase_exp: int) -> complex:
    """Value of omega_{2d}^phase_exp as a complex number."""
    k = phase_exp % (2 * spec.d)
    if spec.d == 2:
        return (1, 1j, -1, -1j)[k]
    return cmath.exp(1j * math.pi * k / spec.d)


@dataclass(frozen=True)
class PauliWord:
    """A single word omega_{2d}^phase * X^x Z^z, exponents in canonical residues."""

    spec: AlgebraSpec
    phase_exp: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        d, n = self.spec.d, self.spec.n
        if len(self.x) != n or len(self.z) != n:
            raise AlgebraMismatchError(
                f"word has {len(self.x)}/{len(self.z)} exponents for {n} sites"
            )
        object.__setattr__(self, "phase_exp", self.phase_exp % (2 * d))
        object.__setattr__(self, "x", tuple(e % d for e in self.x))
        object.__setattr__(self, "z", tuple(e % d for e in self.z))

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, spec: AlgebraSpec) -> "PauliWord":
        return cls(spec, 0, (0,) * spec.n, (0,) * spec.n)

    @classmethod
    def single(cls, spec: AlgebraSpec, site: int, x: int = 0, z: int = 0,
               phase_exp: int = 0) -> "PauliWord":
        """Word acting at one site, identity elsewhere."""
        if not 0 <= site < spec.n:
            raise DomainError(f"site {site} outside 0..{spec.n - 1}")
        xs = [0] * spec.n
        zs = [0] * spec.n
        xs[site] = x
        zs[site] = z
        return cls(spec, phase_exp, tuple(xs), tuple(zs))

    @classmethod
    def from_letters(cls, letters: str, d: int = 2) -> "PauliWord":
        """Build a qubit word from a letter string like "IXZZX" (d=2 only)."""
        if d != 2:
            raise UnsupportedInputError("letter strings are defined for d=2 only")
        spec = AlgebraSpec(2, len(letters))
        phase = 0
        xs, zs = [], []
        for ch in letters.upper():
            if ch == "I":
                xs.append(0); zs.append(0)
            elif ch == "X":
                xs.append(1); zs.append(0)
            elif ch == "Z":
                xs.append(0); zs.append(1)
            elif ch == "Y":
                xs.append(1); zs.append(1)
                phase += 1  # Y = i XZ
            else:
                raise DomainError(f"unknown Pauli letter {ch!r}")
        return cls(spec, phase, tuple(xs), tuple(zs))

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "PauliWord") -> "PauliWord":
        return word_mul(self, other)

    def adjoint(self) -> "PauliWord":
        """Adjoint word: (w^p X^x Z^z)* = w^{-p} Z^{-z} X^{-x}, renormalized."""
        d = self.spec.d
        xs = tuple((-e) % d for e in self.x)
        zs = tuple((-e) % d for e in self.z)
        # Reorder Z^{zs} X^{xs} -> X^{xs} Z^{zs}: each sitewise swap costs omega_d.
        swap = sum(a * b for a, b in zip(zs, xs))
        return PauliWord(self.spec, -self.phase_exp + 2 * swap, xs, zs)

    def inverse(self) -> "PauliWord":
        """Inverse of a (unitary) word; equals its adjoint."""
        return self.adjoint()

    def tensor(self, other: "PauliWord") -> "PauliWord":
        if self.spec.d != other.spec.d:
            raise AlgebraMismatchError("tensor factors must share local dimension")
        spec = AlgebraSpec(self.spec.d, self.spec.n + other.spec.n)
        return PauliWord(spec, self.phase_exp + other.phase_exp,
                         self.x + other.x, self.z + other.z)

    def symplectic_phase(self, other: "PauliWord") -> int:
        """Exponent k with a*b = omega_d^k * (b*a); zero iff the words commute."""
        _check_same_spec(self.spec, other.spec)
        d = self.spec.d
        return (sum(za * xb for za, xb in zip(self.z, other.x))
                - sum(zb * xa for zb, xa in zip(other.z, self.x))) % d

    def commutes_with(self, other: "PauliWord") -> bool:
        return self.symplectic_phase(other) == 0

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Phase-stripped canonical key (x, z)."""
        return (self.x, self.z)

    @property
    def phase(self) -> complex:
        return phase_value(self.spec, self.phase_exp)

    def is_identity_word(self) -> bool:
        """True when the (x, z) part is trivial, regardless of phase."""
        return not any(self.x) and not any(self.z)

    def weight(self) -> int:
        """Number of X factors plus number of Z factors; a qubit Y costs 2."""
        return sum(1 for e in self.x if e) + sum(1 for e in self.z if e)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.spec.n)
                     if self.x[i] or self.z[i])

    def letters(self) -> str:
        """Letter string for d=2 words, ignoring the phase."""
        if self.spec.d != 2:
            raise UnsupportedInputError("letter strings are defined for d=2 only")
        out = []
        for xe, ze in zip(self.x, self.z):
            out.append("IZXY"[2 * xe + ze] if (xe or ze) else "I")
        return "".join(out)

    def __str__(self) -> str:
        if self.spec.d == 2:
            pre = ("", "i*", "-", "-i*")[self.phase_exp]
            return pre + self.letters()
        return (f"w^{self.phase_exp} "
                + " ".join(f"X^{xe}Z^{ze}" for xe, ze in zip(self.x, self.z)))


def word_mul(a: PauliWord, b: PauliWord) -> PauliWord:
    """Product of two words in canonical form; O(n) integer arithmetic.

    Moving b's X block left past a's Z block gives omega_d^(a.z . b.x),
    i.e. 2*(a.z . b.x) in half-root units.
    """
    _check_same_spec(a.spec, b.spec)
    swap = sum(za * xb for za, xb in zip(a.z, b.x))
    return PauliWord(
        a.spec,
        a.phase_exp + b.phase_exp + 2 * swap,
        tuple(xa + xb for xa, xb in zip(a.x, b.x)),
        tuple(za + zb for za, zb in zip(a.z, b.z)),
    )


class OperatorSum:
    """Finite complex combination of canonical words, keyed by (x, z)."""

    __slots__ = ("spec", "_terms")

    def __init__(self, spec: AlgebraSpec,
                 terms: Mapping[tuple, complex] | None = None):
        self.spec = spec
        cleaned: dict[tuple, complex] = {}
        if terms:
            for key, coeff in terms.items():
                c = complex(coeff)
                if abs(c) > COEFF_DROP_TOL:
                    cleaned[key] = c
        self._terms = cleaned

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, spec: AlgebraSpec) -> "OperatorSum":
        return cls(spec, {})

    @classmethod
    def identity(cls, spec: AlgebraSpec) -> "OperatorSum":
        w = PauliWord.identity(spec)
        return cls(spec, {w.key(): 1.0})

    @classmethod
    def from_word(cls, word: PauliWord, coeff: complex = 1.0) -> "OperatorSum":
        return cls(word.spec, {word.key(): coeff * word.phase})

    @classmethod
    def from_letters(cls, letters: str, coeff: complex = 1.0) -> "OperatorSum":
        return cls.from_word(PauliWord.from_letters(letters), coeff)

    # -- inspection ---------------------------------------------------------

    def terms(self) -> dict[tuple, complex]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[PauliWord, complex]]:
        for (x, z), coeff in sorted(self._terms.items()):
            yield PauliWord(self.spec, 0, x, z), coeff

    def coeff(self, word: PauliWord) -> complex:
        """Coefficient of a word, folding the word's own phase in."""
        return self._terms.get(word.key(), 0.0) * word.phase

    def num_terms(self) -> int:
        return len(self._terms)

    def is_zero(self, tol: float = COEFF_DROP_TOL) -> bool:
        return all(abs(c) <= tol for c in self._terms.values())

    def single_word(self) -> tuple[PauliWord, complex]:
        """The unique (word, coefficient) pair of a one-term sum."""
        if len(self._terms) != 1:
            raise UnsupportedInputError(
                f"expected a single word, sum has {len(self._terms)} terms"
            )
        (key, coeff), = self._terms.items()
        return PauliWord(self.spec, 0, key[0], key[1]), coeff

    def equals(self, other: "OperatorSum", tol: float = 0.0) -> bool:
        if self.spec != other.spec:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(
            abs(self._terms.get(k, 0.0) - other._terms.get(k, 0.0)) <= tol
            for k in keys
        )

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        _check_same_spec(self.spec, other.spec)
        merged = dict(self._terms)
        for key, coeff in other._terms.items():
            merged[key] = merged.get(key, 0.0) + coeff
        return OperatorSum(self.spec, merged)

    def __sub__(self, other: "OperatorSum") -> "OperatorSum":
        return self + (-1.0) * other

    def __neg__(self) -> "OperatorSum":
        return (-1.0) * self

    def scale(self, scalar: complex) -> "OperatorSum":
        return OperatorSum(
            self.spec, {k: scalar * c for k, c in self._terms.items()}
        )

    def __rmul__(self, scalar) -> "OperatorSum":
        if isinstance(scalar, (int, float, complex)):
            return self.scale(scalar)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        _check_same_spec(self.spec, other.spec)
        out: dict[tuple, complex] = {}
        for (xa, za), ca in self._terms.items():
            wa = PauliWord(self.spec, 0, xa, za)
            for (xb, zb), cb in other._terms.items():
                w = word_mul(wa, PauliWord(self.spec, 0, xb, zb))
                key = w.key()
                out[key] = out.get(key, 0.0) + ca * cb * w.phase
        return OperatorSum(self.spec, out)

    def adjoint(self) -> "OperatorSum":
        out: dict[tuple, complex] = {}
        for (x, z), coeff in self._terms.items():
            w = PauliWord(self.spec, 0, x, z).adjoint()
            key = w.key()
            out[key] = out.get(key, 0.0) + coeff.conjugate() * w.phase
        return OperatorSum(self.spec, out)

    def tensor(self, other: "OperatorSum") -> "OperatorSum":
        if self.spec.d != other.spec.d:
            raise AlgebraMismatchError("tensor factors must share local dimension")
        spec = AlgebraSpec(self.spec.d, self.spec.n + other.spec.n)
        out: dict[tuple, complex] = {}
        for (xa, za), ca in self._terms.items():
            for (xb, zb), cb in other._terms.items():
                out[(xa + xb, za + zb)] = out.get((xa + xb, za + zb), 0.0) + ca * cb
        return OperatorSum(spec, out)

    def power(self, k: int) -> "OperatorSum":
        if k < 0:
            raise UnsupportedInputError("negative powers are not supported for sums")
        acc = OperatorSum.identity(self.spec)
        for _ in range(k):
            acc = acc * self
        return acc

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.equals(self.adjoint(), tol)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for word, coeff in self.items():
            parts.append(f"({coeff:.6g})*{word.letters() if self.spec.d == 2 else word}")
        return " + ".join(parts)

    # -- dense realization ---------------------------------------------------

    def to_dense(self) -> np.ndarray:
        return to_dense(self)


def op_combine(mode: str, a: OperatorSum, b=None) -> OperatorSum:
    """Dispatch add/scale/mul/adjoint by name (thin wrapper over operators)."""
    if mode == "add":
        return a + b
    if mode == "scale":
        return a.scale(b)
    if mode == "mul":
        return a * b
    if mode == "adjoint":
        return a.adjoint()
    raise UnsupportedInputError(f"unknown combine mode {mode!r}")


# Single-qubit generator shortcuts --------------------------------------------

QUBIT = AlgebraSpec(2, 1)


def pauli_I(spec: AlgebraSpec = QUBIT) -> OperatorSum:
    return OperatorSum.identity(spec)


def pauli_X(spec: AlgebraSpec = QUBIT, site: int = 0) -> OperatorSum:
    return OperatorSum.from_word(PauliWord.single(spec, site, x=1))


def pauli_Z(spec: AlgebraSpec = QUBIT, site: int = 0) -> OperatorSum:
    return OperatorSum.from_word(PauliWord.single(spec, site, z=1))


def pauli_Y(spec: AlgebraSpec = QUBIT, site: int = 0) -> OperatorSum:
    if spec.d != 2:
        raise UnsupportedInputError("Y is defined for d=2")
    return OperatorSum.from_word(PauliWord.single(spec, site, x=1, z=1, phase_exp=1))


def sigma(i: int, spec: AlgebraSpec = QUBIT, site: int = 0) -> OperatorSum:
    """sigma_(1) = X, sigma_(2) = Y, sigma_(3) = Z on one site of a qubit algebra."""
    if spec.d != 2:
        raise UnsupportedInputError("sigma_(i) requires d=2")
    if i == 1:
        return pauli_X(spec, site)
    if i == 2:
        return pauli_Y(spec, site)
    if i == 3:
        return pauli_Z(spec, site)
    raise DomainError(f"sigma index must be 1, 2 or 3, got {i}")


def sigma_of_vector(v, spec: AlgebraSpec = QUBIT) -> OperatorSum:
    """sigma(v) = v1*X + v2*Y + v3*Z for a complex 3-vector (d=2, n=1)."""
    if spec.d != 2 or spec.n != 1:
        raise AlgebraMismatchError("sigma(v) requires the single-qubit algebra")
    v = np.asarray(v, dtype=complex)
    if v.shape != (3,):
        raise DomainError(f"expected a 3-vector, got shape {v.shape}")
    return (v[0] * pauli_X(spec) + v[1] * pauli_Y(spec) + v[2] * pauli_Z(spec))


def bracket(kind: str, a: OperatorSum, b: OperatorSum) -> OperatorSum:
    """Commutator, anticommutator, Jordan product, or multiplicative commutator.

    The multiplicative bracket A B A^-1 B^-1 is defined only when both operands
    are nonzero scalar multiples of single words.
    """
    _check_same_spec(a.spec, b.spec)
    if kind == "commutator":
        return a * b - b * a
    if kind == "anticommutator":
        return a * b + b * a
    if kind == "jordan":
        return 0.5 * (a * b + b * a)
    if kind == "multiplicative":
        wa, ca = a.single_word()
        wb, cb = b.single_word()
        if abs(ca) <= COEFF_DROP_TOL or abs(cb) <= COEFF_DROP_TOL:
            raise UnsupportedInputError("multiplicative bracket of a zero operator")
        word = word_mul(word_mul(wa, wb), word_mul(wa.inverse(), wb.inverse()))
        # Scalar coefficients cancel against their inverses.
        return OperatorSum.from_word(word)
    raise UnsupportedInputError(f"unknown bracket kind {kind!r}")


# Dense (clock-and-shift) representation ---------------------------------------


def _site_matrices(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Single-site X (cyclic shift |j> -> |j+1>) and Z (diag omega_d^j)."""
    shift = np.zeros((d, d), dtype=complex)
    for j in range(d):
        shift[(j + 1) % d, j] = 1.0
    omega = cmath.exp(2j * math.pi / d)
    clock = np.diag([omega**j for j in range(d)])
    return shift, clock


_SITE_CACHE: dict[int, tuple[list[np.ndarray], list[np.ndarray]]] = {}


def _site_powers(d: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    if d not in _SITE_CACHE:
        xm, zm = _site_matrices(d)
        xs = [np.eye(d, dtype=complex)]
        zs = [np.eye(d, dtype=complex)]
        for _ in range(1, d):
            xs.append(xs[-1] @ xm)
            zs.append(zs[-1] @ zm)
        _SITE_CACHE[d] = (xs, zs)
    return _SITE_CACHE[d]


def word_to_dense(word: PauliWord) -> np.ndarray:
    """Dense matrix of a word; site 0 is the leftmost (most significant) factor."""
    word.spec.check_dense()
    xs, zs = _site_powers(word.spec.d)
    mat = np.array([[word.phase]], dtype=complex)
    for xe, ze in zip(word.x, word.z):
        mat = np.kron(mat, xs[xe] @ zs[ze])
    return mat


def to_dense(op: OperatorSum) -> np.ndarray:
    """Dense matrix of a sum; a *-homomorphism onto the clock-and-shift algebra."""
    dim = op.spec.check_dense()
    out = np.zeros((dim, dim), dtype=complex)
    for (x, z), coeff in op._terms.items():
        out += coeff * word_to_dense(PauliWord(op.spec, 0, x, z))
    return out


def all_words(spec: AlgebraSpec) -> Iterator[PauliWord]:
    """All d^(2n) phase-free canonical words in lexicographic (x, z) order."""
    d, n = spec.d, spec.n

    def vectors(k: int) -> Iterator[tuple[int, ...]]:
        if k == 0:
            yield ()
            return
        for rest in vectors(k - 1):
            for e in range(d):
                yield rest + (e,)

    for x in vectors(n):
        for z in vectors(n):
            yield PauliWord(spec, 0, x, z)


def word_basis(spec: AlgebraSpec) -> list[OperatorSum]:
    """The canonical word basis of the algebra as one-term sums."""
    return [OperatorSum.from_word(w) for w in all_words(spec)]
