"""Stabilizer error correction over the qudit Pauli algebra.

Groups are enumerated exactly (words with phase exponents, never floats);
characters are the phases picked up when an error is multiplicatively
commuted through the group, stored as exact exponents of omega_{2d}.  The
dense backend enters only for code projectors, Knill-Laflamme checks, and
recovery maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import dense
from .channels import KrausSet
from .errors import (
    DomainError,
    GroupStructureError,
    KnillLaflammeError,
    NotProjectivelyCommutingError,
    UnsupportedInputError,
)
from .pauli import (
    AlgebraSpec,
    OperatorSum,
    PauliWord,
    word_mul,
    word_to_dense,
)

GROUP_SIZE_CAP = 2**16


@dataclass
class StabilizerGroup:
    """A commuting group of unitary Pauli words not containing -I."""

    spec: AlgebraSpec
    generators: list[PauliWord]
    elements: list[PauliWord]

    @property
    def order(self) -> int:
        return len(self.elements)


def group_generate(generators: Sequence[PauliWord]) -> StabilizerGroup:
    """Enumerate the closure of commuting unitary words.

    Raises if two generators fail to commute, or if the closure contains a
    nontrivial phase times the identity (e.g. -I), which would make the
    would-be projector inconsistent.
    """
    gens = list(generators)
    if not gens:
        raise DomainError("at least one generator is required")
    spec = gens[0].spec
    for g in gens:
        if g.spec != spec:
            raise DomainError("generators must share an algebra")
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if not a.commutes_with(b):
                raise GroupStructureError(
                    f"generators {a} and {b} do not commute"
                )

    identity = PauliWord.identity(spec)
    seen: dict[tuple, PauliWord] = {identity.key(): identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for element in frontier:
            for g in gens:
                product = word_mul(element, g)
                key = product.key()
                known = seen.get(key)
                if known is None:
                    if len(seen) >= GROUP_SIZE_CAP:
                        raise GroupStructureError(
                            f"group enumeration exceeded cap {GROUP_SIZE_CAP}"
                        )
                    seen[key] = product
                    next_frontier.append(product)
                elif known.phase_exp != product.phase_exp:
                    raise GroupStructureError(
                        "inconsistent phases: the closure contains a nontrivial "
                        "multiple of the identity (such as -I)"
                    )
        frontier = next_frontier
    elements = sorted(seen.values(), key=lambda w: w.key())
    return StabilizerGroup(spec, gens, elements)


def code_projector(group: StabilizerGroup) -> np.ndarray:
    """(1/|S|) sum_S S as a dense matrix."""
    dim = group.spec.check_dense()
    out = np.zeros((dim, dim), dtype=complex)
    for element in group.elements:
        out += word_to_dense(element)
    return out / group.order


@dataclass(frozen=True)
class StabilizerCharacter:
    """Phase exponents (mod 2d) assigned to each generator by an error word."""

    spec: AlgebraSpec
    phases: tuple[int, ...]

    def values(self) -> tuple[complex, ...]:
        from .pauli import phase_value

        return tuple(phase_value(self.spec, p) for p in self.phases)

    def is_trivial(self) -> bool:
        return all(p == 0 for p in self.phases)


def character_of(error: PauliWord, group: StabilizerGroup) -> StabilizerCharacter:
    """Phases of the multiplicative commutator [E, S]_x per generator.

    Every Pauli word commutes with every other up to a phase, so for word
    errors this always exists; the not-projectively-commuting error is kept
    for non-word inputs.
    """
    if not isinstance(error, PauliWord):
        raise NotProjectivelyCommutingError(
            "character is defined for Pauli words; general operators need not "
            "projectively commute with the group"
        )
    if error.spec != group.spec:
        raise DomainError("error and group live on different algebras")
    phases = tuple(
        (2 * error.symplectic_phase(g)) % (2 * group.spec.d)
        for g in group.generators
    )
    return StabilizerCharacter(group.spec, phases)


def character_on_element(error: PauliWord, element: PauliWord) -> int:
    """Phase exponent of [E, S]_x for a single group element."""
    return (2 * error.symplectic_phase(element)) % (2 * element.spec.d)


def syndrome_classes(errors: Sequence[PauliWord], group: StabilizerGroup
                     ) -> dict[StabilizerCharacter, list[PauliWord]]:
    """Partition errors by their stabilizer character."""
    out: dict[StabilizerCharacter, list[PauliWord]] = {}
    for error in errors:
        out.setdefault(character_of(error, group), []).append(error)
    return out


@dataclass
class StabilizerCode:
    """A stabilizer group with its projector, logical alphabet, and metadata."""

    name: str
    group: StabilizerGroup
    projector: np.ndarray
    logical_alphabet: list[OperatorSum]
    n: int
    m: int
    distance: int | None = None
    check_family: list[PauliWord] = field(default_factory=list)

    @property
    def spec(self) -> AlgebraSpec:
        return self.group.spec

    def alphabet_in_centralizer(self) -> bool:
        """Containment check Sigma subset Z(S); the spec of the code assumes
        equality but only containment is enforced."""
        for op in self.logical_alphabet:
            word, _ = op.single_word()
            if not character_of(word, self.group).is_trivial():
                return False
        return True


def _logical_alphabet(spec: AlgebraSpec) -> list[OperatorSum]:
    """Sigma = {X^(x)n, Z^(x)n} as operator sums."""
    xs = PauliWord(spec, 0, (1,) * spec.n, (0,) * spec.n)
    zs = PauliWord(spec, 0, (0,) * spec.n, (1,) * spec.n)
    return [OperatorSum.from_word(xs), OperatorSum.from_word(zs)]


def build_code(name: str) -> StabilizerCode:
    """Named codes: rep2 ([[2,1,2]]), rep3 ([[3,1]]), five_qubit ([[5,1,3]])."""
    if name == "rep2":
        spec = AlgebraSpec(2, 2)
        yy = PauliWord.from_letters("YY")
        group = group_generate([yy])
        return StabilizerCode("rep2", group, code_projector(group),
                              _logical_alphabet(spec), n=2, m=1, distance=2,
                              check_family=[yy])
    if name == "rep3":
        spec = AlgebraSpec(2, 3)
        gens = [PauliWord.from_letters("YYI"), PauliWord.from_letters("IYY")]
        group = group_generate(gens)
        # The paper quotes no distance for the threefold repetition;
        # distance_search reports it.
        return StabilizerCode("rep3", group, code_projector(group),
                              _logical_alphabet(spec), n=3, m=1, distance=None,
                              check_family=list(gens))
    if name == "five_qubit":
        spec = AlgebraSpec(2, 5)
        base = "IXZZX"
        letters = [base[-k:] + base[:-k] for k in range(4)]
        gens = [PauliWord.from_letters(s) for s in letters]
        group = group_generate(gens)
        s4 = gens[0]
        for g in gens[1:]:
            s4 = word_mul(s4, g)
        return StabilizerCode("five_qubit", group, code_projector(group),
                              _logical_alphabet(spec), n=5, m=1, distance=3,
                              check_family=list(gens) + [s4])
    raise DomainError(f"unknown code name {name!r}")


def character_table(code: StabilizerCode, errors: Sequence[PauliWord]
                    ) -> list[list[int]]:
    """Rows of +-1 (general d: omega_{2d} exponents) over the check family."""
    table = []
    for error in errors:
        row = [character_on_element(error, s) for s in code.check_family]
        table.append(row)
    return table


def weight_one_errors(spec: AlgebraSpec) -> list[PauliWord]:
    """All single-site non-identity letters: 3n words for qubits."""
    out = []
    for site in range(spec.n):
        for xe in range(spec.d):
            for ze in range(spec.d):
                if xe == 0 and ze == 0:
                    continue
                phase = 1 if (spec.d == 2 and xe == 1 and ze == 1) else 0
                out.append(PauliWord.single(spec, site, x=xe, z=ze,
                                            phase_exp=phase))
    return out


def _error_matrix(error, spec: AlgebraSpec) -> np.ndarray:
    if isinstance(error, PauliWord):
        return word_to_dense(error)
    if isinstance(error, OperatorSum):
        return error.to_dense()
    return dense.as_operator(error, spec.dense_dim)


def kl_check(code: StabilizerCode, errors: Sequence, tol: float = 1e-8) -> dict:
    """Knill-Laflamme conditions: Proj E_k* E_q Proj = nu[k, q] Proj.

    Reports pass/fail, the syndrome matrix nu, the worst deviation from
    scalarity, and a syndrome map grouping errors by the support pattern of
    nu (equivalently, by character when the errors are Pauli words).
    """
    proj = code.projector
    rank = float(np.real(np.trace(proj)))
    mats = [_error_matrix(e, code.spec) for e in errors]
    k = len(mats)

    nu = np.zeros((k, k), dtype=complex)
    worst = 0.0
    scalar_ok = True
    for a in range(k):
        for b in range(a, k):
            m = proj @ (mats[a].conj().T @ mats[b]) @ proj
            coeff = np.trace(m) / rank
            deviation = float(np.max(np.abs(m - coeff * proj)))
            worst = max(worst, deviation)
            if deviation > tol:
                scalar_ok = False
            nu[a, b] = coeff
            nu[b, a] = np.conj(coeff)

    nu_min = float(np.min(np.linalg.eigvalsh((nu + nu.conj().T) / 2)))
    positive = nu_min >= -tol
    passed = bool(scalar_ok and positive)

    # Syndromes: connected components of the nu support graph.
    labels = [-1] * k
    current = 0
    for start in range(k):
        if labels[start] != -1:
            continue
        stack = [start]
        labels[start] = current
        while stack:
            node = stack.pop()
            for other in range(k):
                if labels[other] == -1 and abs(nu[node, other]) > tol:
                    labels[other] = current
                    stack.append(other)
        current += 1

    return {
        "pass": passed,
        "nu": nu,
        "nu_min_eigenvalue": nu_min,
        "max_scalar_deviation": worst,
        "syndrome_map": labels,
    }


def _lexicographic_word_key(error) -> tuple:
    if isinstance(error, PauliWord):
        return (0, error.key())
    return (1, 0)


def recovery_map(code: StabilizerCode, errors: Sequence, tol: float = 1e-8
                 ) -> KrausSet:
    """Recovery Kraus set from the polar isometries of E_e Proj.

    One Kraus operator per syndrome, built from the lexicographically least
    error in the class; scaling of the errors is absorbed by the polar
    decomposition.
    """
    report = kl_check(code, errors, tol)
    if not report["pass"]:
        raise KnillLaflammeError(
            "error set fails the Knill-Laflamme conditions; no recovery exists"
        )
    labels = report["syndrome_map"]
    mats = [_error_matrix(e, code.spec) for e in errors]

    operators = []
    syndrome_reps = []
    for syndrome in sorted(set(labels)):
        members = [i for i, lab in enumerate(labels) if lab == syndrome]
        rep = min(members, key=lambda i: _lexicographic_word_key(errors[i]))
        if abs(report["nu"][rep, rep]) <= tol:
            continue  # error annihilates the code space; nothing to recover
        compressed = mats[rep] @ code.projector
        u, s, vh = np.linalg.svd(compressed)
        support = s > tol * max(s[0], 1.0)
        isometry = u[:, support] @ vh[support, :]
        operators.append(isometry.conj().T)
        syndrome_reps.append(syndrome)
    return KrausSet(operators, labels=syndrome_reps)


def _single_site_letters(spec: AlgebraSpec) -> list[tuple[int, int, int]]:
    """(x, z, xz_weight) for the non-identity letters of one site."""
    letters = []
    for xe in range(spec.d):
        for ze in range(spec.d):
            if xe == 0 and ze == 0:
                continue
            letters.append((xe, ze, (1 if xe else 0) + (1 if ze else 0)))
    return letters


def distance_search(code: StabilizerCode, max_weight: int | None = None
                    ) -> int | None:
    """Smallest weight of an undetectable, logically nontrivial word.

    Weight counts X and Z factors separately (a qubit Y costs 2), matching the
    convention under which the twofold repetition code has distance 2.
    Returns None when no such word exists up to max_weight.
    """
    spec = code.spec
    if max_weight is None:
        max_weight = spec.n
    if max_weight > 2 * spec.n:
        raise DomainError("max_weight exceeds the largest possible word weight")

    group_keys = {w.key() for w in code.group.elements}
    letters = _single_site_letters(spec)

    def candidates(site: int, budget: int) -> Iterable[tuple[tuple, tuple, int]]:
        if site == spec.n:
            yield ((), (), 0)
            return
        for xs, zs, used in candidates(site + 1, budget):
            yield ((0,) + xs, (0,) + zs, used)
            for xe, ze, w in letters:
                if used + w <= budget:
                    yield ((xe,) + xs, (ze,) + zs, used + w)

    best: dict[int, list[PauliWord]] = {}
    for xs, zs, used in candidates(0, max_weight):
        if used == 0:
            continue
        best.setdefault(used, []).append(PauliWord(spec, 0, xs, zs))

    for weight in sorted(best):
        for word in sorted(best[weight], key=lambda w: w.key()):
            if not character_of(word, code.group).is_trivial():
                continue
            if word.key() in group_keys:
                continue
            # Undetectable and not a stabilizer: confirm it moves code data.
            mat = word_to_dense(word)
            compressed = code.projector @ mat @ code.projector
            coeff = np.trace(compressed) / max(np.real(np.trace(code.projector)), 1e-12)
            if np.max(np.abs(compressed - coeff * code.projector)) > 1e-8:
                return weight
    return None


def coherent_repetition(op: OperatorSum, copies: int,
                        alphabet: Sequence[OperatorSum] | None = None
                        ) -> OperatorSum:
    """C_n[sum_i c_i L_i] = sum_i c_i L_i^(x)n over a linearly independent
    alphabet (default {X, Z} on the input algebra).

    This is linear in the alphabet coefficients, deliberately NOT the tensor
    power of the sum.
    """
    if copies < 1:
        raise DomainError("need at least one copy")
    spec = op.spec
    if alphabet is None:
        alphabet = _logical_alphabet(spec)

    keys: list[tuple] = []
    for element in alphabet:
        for word, _ in element.items():
            if word.key() not in keys:
                keys.append(word.key())
    matrix = np.zeros((len(keys), len(alphabet)), dtype=complex)
    for col, element in enumerate(alphabet):
        terms = element.terms()
        for row, key in enumerate(keys):
            matrix[row, col] = terms.get(key, 0.0)
    target = np.array([op.terms().get(key, 0.0) for key in keys])

    coeffs, residual, rank, _ = np.linalg.lstsq(matrix, target, rcond=None)
    reconstruction = matrix @ coeffs
    leftover = set(op.terms()) - set(keys)
    if leftover or np.max(np.abs(reconstruction - target)) > 1e-10:
        raise UnsupportedInputError("operator is not in the span of the alphabet")

    out_spec = AlgebraSpec(spec.d, spec.n * copies)
    out = OperatorSum.zero(out_spec)
    for coeff, element in zip(coeffs, alphabet):
        power = element
        for _ in range(copies - 1):
            power = power.tensor(element)
        out = out + complex(coeff) * power
    return out
