"""Projective measurement: Born and Lueders rules, post-selected partial
measurement on a tensor factor, measurement-order checks, and the
Robertson-Schroedinger bound."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import dense
from .composite import FactorLayout, partial_trace, permute_sites, tensor
from .errors import DomainError, ZeroProbabilityError
from .states import State, _as_matrix

# Outcomes below this probability refuse post-selection.
PROB_FLOOR = 1e-12


@dataclass
class MeasurementRecord:
    """One spectral outcome: value, Born probability, post-selected state."""

    outcome: float
    probability: float
    post_state: State | None


def pvm_measure(state: State, observable) -> tuple[list[MeasurementRecord], State]:
    """Measure a Hermitian observable.

    Returns one record per spectral value (p = pi(Proj), post-state the
    Lueders update) and the unobserved mixture sum_l Proj_l rho Proj_l.
    """
    obs = _as_matrix(observable, state.dim)
    decomposition = dense.eig_hermitian(obs)

    records: list[MeasurementRecord] = []
    unobserved = np.zeros_like(state.density)
    for lam, proj in zip(decomposition.eigenvalues, decomposition.projectors):
        p = float(np.real(np.trace(state.density @ proj)))
        p = max(p, 0.0)
        conditioned = proj @ state.density @ proj
        unobserved += conditioned
        post = None
        if p > PROB_FLOOR:
            post = State(conditioned / p, state.spec)
        records.append(MeasurementRecord(lam, p, post))
    return records, State(unobserved, state.spec)


def luders_update(state: State, projector, enforce_prob: bool = True) -> tuple[State, float]:
    """Post-select on a projector: state -> Proj rho Proj / p with p = pi(Proj)."""
    proj = _as_matrix(projector, state.dim)
    p = float(np.real(np.trace(state.density @ proj)))
    if p <= PROB_FLOOR:
        if enforce_prob:
            raise ZeroProbabilityError(f"outcome has probability {p:.3e}")
        return state, 0.0
    return State(proj @ state.density @ proj / p, state.spec), p


def ppm_measure(state: State, layout: FactorLayout, site: int, observable,
                outcome: float) -> State:
    """Post-selected partial measurement of a local observable.

    Stage one factorizes the density into the measured site's reduced density
    tensored with its complement; stage two applies the Lueders update for the
    chosen outcome on the measured factor.
    """
    if not 0 <= site < layout.sites:
        raise DomainError(f"site {site} outside 0..{layout.sites - 1}")
    local_dim = layout.local_dims[site]
    obs = dense.require_hermitian(np.asarray(observable, dtype=complex))
    if obs.shape != (local_dim, local_dim):
        raise DomainError(
            f"observable shape {obs.shape} does not fit site dimension {local_dim}"
        )

    site_density = partial_trace(state.density, layout, [site])
    rest_sites = [s for s in range(layout.sites) if s != site]

    decomposition = dense.eig_hermitian(obs)
    proj = decomposition.projector_for(outcome)
    p = float(np.real(np.trace(site_density @ proj)))
    if p <= PROB_FLOOR:
        raise ZeroProbabilityError(f"outcome {outcome} has probability {p:.3e}")
    measured_factor = proj @ site_density @ proj / p

    if not rest_sites:
        return State(measured_factor, state.spec)
    rest_density = partial_trace(state.density, layout, rest_sites)
    product = tensor(measured_factor, rest_density)
    # The product lives on site order [site, *rest]; permute back to 0..n-1.
    current_order = [site] + rest_sites
    current_dims = [layout.local_dims[s] for s in current_order]
    order = [current_order.index(s) for s in range(layout.sites)]
    return State(permute_sites(product, current_dims, order), state.spec)


def measurement_square(state: State, obs_a, obs_b, outcome_a: float,
                       outcome_b: float, tol: float = 1e-9) -> dict:
    """Post-select two outcomes in both orders and compare the final states.

    The square closes exactly when the two orderings agree; for commuting
    observables it always does.
    """
    a = _as_matrix(obs_a, state.dim)
    b = _as_matrix(obs_b, state.dim)
    proj_a = dense.eig_hermitian(a).projector_for(outcome_a)
    proj_b = dense.eig_hermitian(b).projector_for(outcome_b)

    first_a, p_a = luders_update(state, proj_a)
    path_ab, p_ab = luders_update(first_a, proj_b)
    first_b, p_b = luders_update(state, proj_b)
    path_ba, p_ba = luders_update(first_b, proj_a)

    distance = dense.trace_distance(path_ab.density, path_ba.density)
    return {
        "closes": bool(distance <= tol),
        "state_distance": distance,
        "path_probabilities": ((p_a, p_ab), (p_b, p_ba)),
    }


def rs_bound(state: State, obs_a, obs_b) -> dict:
    """Robertson-Schroedinger inequality for two Hermitian observables.

    lhs = |pi([A,B])|^2 / 4 + |pi(A o B) - pi(A) pi(B)|^2, rhs = var(A) var(B).
    """
    a = dense.require_hermitian(_as_matrix(obs_a, state.dim))
    b = dense.require_hermitian(_as_matrix(obs_b, state.dim))
    commutator = state.expect(a @ b - b @ a)
    jordan = state.expect((a @ b + b @ a) / 2)
    gap = jordan - state.expect(a) * state.expect(b)
    lhs = abs(commutator) ** 2 / 4 + abs(gap) ** 2
    rhs = state.variance(a) * state.variance(b)
    return {"lhs": float(lhs), "rhs": float(rhs),
            "satisfied": bool(lhs <= rhs + 1e-10)}
