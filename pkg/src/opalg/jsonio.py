"""JSON wire formats shared by the library and the CLI.

Complex numbers travel as [re, im] pairs.  Operator sums carry no per-word
phase field; phases are folded into coefficients.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .pauli import AlgebraSpec, OperatorSum
from .states import State

ROUND_EPS = 1e-12


def _clean(value: float) -> float:
    """Strip round-off fuzz (and -0.0) so reports serialize deterministically."""
    if abs(value) < ROUND_EPS:
        return 0.0
    rounded = round(value)
    if abs(value - rounded) < ROUND_EPS:
        return float(rounded)
    return float(value)


def complex_to_json(value: complex) -> list[float]:
    return [_clean(float(np.real(value))), _clean(float(np.imag(value)))]


def matrix_to_json(mat) -> dict:
    arr = np.asarray(mat, dtype=complex)
    return {
        "dim": int(arr.shape[0]),
        "entries": [[complex_to_json(v) for v in row] for row in arr],
    }


def matrix_from_json(data: dict) -> np.ndarray:
    try:
        entries = data["entries"]
        mat = np.array([[complex(re, im) for re, im in row] for row in entries])
        if mat.shape != (data["dim"], data["dim"]):
            raise DomainError(f"matrix shape {mat.shape} != declared dim {data['dim']}")
        return mat
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed matrix JSON: {exc}") from exc


def operator_to_json(op: OperatorSum) -> dict:
    terms = []
    for word, coeff in op.items():
        terms.append({
            "x": list(word.x),
            "z": list(word.z),
            "coeff": complex_to_json(coeff),
        })
    return {"d": op.spec.d, "n": op.spec.n, "terms": terms}


def operator_from_json(data: dict) -> OperatorSum:
    try:
        spec = AlgebraSpec(int(data["d"]), int(data["n"]))
        terms = {}
        for term in data["terms"]:
            key = (tuple(int(v) for v in term["x"]),
                   tuple(int(v) for v in term["z"]))
            re, im = term["coeff"]
            terms[key] = terms.get(key, 0.0) + complex(re, im)
        return OperatorSum(spec, terms)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed operator JSON: {exc}") from exc


def state_to_json(state: State) -> dict:
    return {"dim": state.dim, "density": matrix_to_json(state.density)}


def state_from_json(data: dict) -> State:
    try:
        density = matrix_from_json(data["density"])
        if density.shape[0] != data["dim"]:
            raise DomainError("state dim does not match density")
        return State(density)
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed state JSON: {exc}") from exc


def kraus_to_json(kraus) -> dict:
    return {
        "dim_in": kraus.dim_in,
        "dim_out": kraus.dim_out,
        "kraus": [matrix_to_json(op) for op in kraus.operators],
    }


def kraus_from_json(data: dict):
    from .channels import KrausSet

    try:
        ops = [matrix_from_json(m) for m in data["kraus"]]
        ks = KrausSet(ops)
        if ks.dim_in != data["dim_in"] or ks.dim_out != data["dim_out"]:
            raise DomainError("Kraus dimensions do not match declared values")
        return ks
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed Kraus JSON: {exc}") from exc


def layout_from_json(data: dict):
    from .composite import FactorLayout

    try:
        return FactorLayout(tuple(int(d) for d in data["local_dims"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed layout JSON: {exc}") from exc
