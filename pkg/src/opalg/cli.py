"""Command-line front door: JSON reports on stdout, exit 0/1/2.

Subcommands: paulimul, state, gns, measure, channel, code, shadows.  Every
report is an envelope {"version", "command", "inputs", "results"}; failures
print {"error": {"kind", "message", "position?"}} and exit 1 (domain error)
or 2 (usage error).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, dense, jsonio
from .channels import (
    KrausSet,
    builtin_map,
    choi_of,
    kraus_from_choi,
    stinespring_dilate,
    validate_operation,
)
from .composite import bell_state
from .errors import DomainError, ExprError, OpalgError
from .expr import eval_expr, parse_expr
from .measurement import pvm_measure
from .pauli import AlgebraSpec, PauliWord, phase_value
from .shadows import estimate, pauli_basis_scheme, sample_shadows
from .stabilizer import (
    StabilizerCode,
    build_code,
    character_table,
    code_projector,
    distance_search,
    group_generate,
    kl_check,
    weight_one_errors,
)
from .states import (
    State,
    bloch_vector,
    fiducial_z_state,
    gns_construct,
    is_pure,
    state_from_angles,
)

USAGE_EXIT = 2
DOMAIN_EXIT = 1


def _report(command: str, inputs: dict, results: dict) -> dict:
    return {
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "results": results,
    }


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _clean_value(value):
    if isinstance(value, (np.floating, float)):
        return jsonio._clean(float(value))
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, complex):
        return jsonio.complex_to_json(value)
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return [[jsonio.complex_to_json(v) for v in row] for row in value]
        return [_clean_value(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_clean_value(v) for v in value]
    if isinstance(value, dict):
        return {k: _clean_value(v) for k, v in value.items()}
    return value


# -- shared input loading ---------------------------------------------------------

_BUILTIN_STATES = ("zero", "one", "plus", "minus", "max_mixed", "bell")


def _load_state(text: str) -> State:
    if text in _BUILTIN_STATES:
        if text == "zero":
            return fiducial_z_state(0)
        if text == "one":
            return fiducial_z_state(1)
        if text == "plus":
            return State.from_vector([1, 1])
        if text == "minus":
            return State.from_vector([1, -1])
        if text == "max_mixed":
            return State.maximally_mixed(2, AlgebraSpec(2, 1))
        return bell_state()
    try:
        with open(text, encoding="utf-8") as fh:
            return jsonio.state_from_json(json.load(fh))
    except OSError as exc:
        raise DomainError(f"cannot read state file {text!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"state file is not valid JSON: {exc}") from exc


def _load_observable(text: str, dim: int) -> np.ndarray:
    if text.endswith(".json"):
        try:
            with open(text, encoding="utf-8") as fh:
                return jsonio.matrix_from_json(json.load(fh))
        except OSError as exc:
            raise DomainError(f"cannot read observable file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise DomainError(f"observable file is not valid JSON: {exc}") from exc
    sites = {2: 1, 4: 2, 8: 3, 16: 4, 32: 5}.get(dim)
    op = eval_expr(parse_expr(text), d=2, n=sites)
    return op.to_dense()


# -- subcommand handlers ----------------------------------------------------------


def _cmd_paulimul(args) -> dict:
    ast = parse_expr(args.expr)
    result = eval_expr(ast, d=args.d, n=args.n)
    return _report(
        "paulimul",
        {"expr": args.expr, "d": args.d, "n": args.n},
        {"operator": jsonio.operator_to_json(result)},
    )


def _cmd_state(args) -> dict:
    if args.expr is not None:
        op = eval_expr(parse_expr(args.expr), d=2)
        state = State(op.to_dense(), op.spec)
        inputs = {"expr": args.expr}
    else:
        theta, phi = args.bloch
        state = state_from_angles(theta, phi)
        inputs = {"theta": theta, "phi": phi}

    results = {
        "state": jsonio.state_to_json(state),
        "pure": is_pure(state),
        "eigenvalues": _clean_value(np.linalg.eigvalsh(state.density)),
    }
    if state.dim == 2:
        results["bloch"] = _clean_value(bloch_vector(state))
    return _report("state report", inputs, results)


def _cmd_gns(args) -> dict:
    state = _load_state(args.state)
    if state.spec is None and state.dim == 2:
        state = State(state.density, AlgebraSpec(2, 1))
    space = gns_construct(state)
    action = {}
    if state.spec is not None and state.spec.d == 2:
        from .pauli import pauli_X, pauli_Z

        for name, gen in (("X", pauli_X), ("Z", pauli_Z)):
            if state.spec.n == 1:
                action[name] = _clean_value(space.left_action(gen().to_dense()))
    results = {
        "dim": space.dim,
        "kernel_dim": len(space.kernel),
        "kernel_basis": [jsonio.matrix_to_json(k) for k in space.kernel],
        "action": action,
    }
    if space.basis_labels is not None:
        results["quotient_pivots"] = [space.basis_labels[i]
                                      for i in space.pivot_indices]
    return _report("gns", {"state": args.state}, results)


def _cmd_measure(args) -> dict:
    state = _load_state(args.state)
    observable = _load_observable(args.observable, state.dim)
    records, unobserved = pvm_measure(state, observable)
    return _report(
        "measure",
        {"state": args.state, "observable": args.observable},
        {
            "records": [
                {
                    "outcome": jsonio._clean(r.outcome),
                    "probability": jsonio._clean(r.probability),
                    "post_state": (jsonio.state_to_json(r.post_state)
                                   if r.post_state is not None else None),
                }
                for r in records
            ],
            "unobserved_state": jsonio.state_to_json(unobserved),
        },
    )


def _cmd_channel(args) -> dict:
    if args.kraus is not None:
        try:
            with open(args.kraus, encoding="utf-8") as fh:
                subject = jsonio.kraus_from_json(json.load(fh))
        except OSError as exc:
            raise DomainError(f"cannot read Kraus file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise DomainError(f"Kraus file is not valid JSON: {exc}") from exc
        inputs = {"kraus": args.kraus}
    else:
        subject = builtin_map(args.builtin, dim=args.dim, p=args.prob)
        inputs = {"builtin": args.builtin, "dim": args.dim}

    choi = choi_of(subject)
    eigenvalues = np.linalg.eigvalsh((choi + choi.conj().T) / 2)
    min_eig = float(eigenvalues[0])
    cp = bool(min_eig >= -1e-9)

    results = {
        "cp": cp,
        "min_choi_eigenvalue": jsonio._clean(min_eig),
        "choi_rank": int(np.sum(eigenvalues > 1e-9)),
    }
    if isinstance(subject, KrausSet):
        results.update(validate_operation(subject))
        results["kraus_count"] = len(subject.operators)
        if results["is_channel"]:
            results["stinespring_env_dim"] = stinespring_dilate(subject)["env_dim"]
    else:
        results["valid"] = cp
        results["is_channel"] = False
        if cp:
            results["kraus_count"] = len(kraus_from_choi(choi).operators)
    return _report("channel analyze", inputs, results)


def _load_code(args) -> StabilizerCode:
    if args.name is not None:
        return build_code(args.name)
    try:
        with open(args.generators, encoding="utf-8") as fh:
            data = json.load(fh)
        words = [PauliWord.from_letters(s) for s in data["generators"]]
    except OSError as exc:
        raise DomainError(f"cannot read generators file: {exc}") from exc
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise DomainError(f"malformed generators file: {exc}") from exc
    group = group_generate(words)
    from .stabilizer import _logical_alphabet

    return StabilizerCode(
        "custom", group, code_projector(group),
        _logical_alphabet(group.spec), n=group.spec.n, m=None,
        check_family=list(group.generators),
    )


def _cmd_code(args) -> dict:
    code = _load_code(args)
    results: dict = {
        "group_order": code.group.order,
        "projector_rank": int(round(np.real(np.trace(code.projector)))),
        "generators": [w.letters() for w in code.group.generators],
        "alphabet_in_centralizer": code.alphabet_in_centralizer(),
    }

    errors = None
    if args.errors == "weight1":
        errors = weight_one_errors(code.spec)
    if errors is not None:
        identity = PauliWord.identity(code.spec)
        report = kl_check(code, [identity] + errors)
        table = character_table(code, errors)
        results["error_set"] = ["I" * code.spec.n] + [e.letters() for e in errors]
        results["kl_pass"] = report["pass"]
        results["nu"] = _clean_value(np.real(report["nu"]))
        results["nu_min_eigenvalue"] = jsonio._clean(report["nu_min_eigenvalue"])
        results["syndrome_map"] = report["syndrome_map"]
        results["character_table"] = [
            {
                "error": e.letters(),
                "phases": [int(round(np.real(phase_value(code.spec, p))))
                           for p in row],
            }
            for e, row in zip(errors, table)
        ]
    results["distance"] = distance_search(code, args.max_weight)
    name = args.name if args.name is not None else "custom"
    return _report("code verify",
                   {"name": name, "errors": args.errors,
                    "max_weight": args.max_weight},
                   results)


def _cmd_shadows(args) -> dict:
    scheme = pauli_basis_scheme(args.qubits)
    spec = AlgebraSpec(2, args.qubits)
    if args.qubits == 1:
        state = fiducial_z_state(0)
        observables = {"Z": np.diag([1.0, -1.0]).astype(complex)}
    elif args.qubits == 2:
        state = bell_state()
        observables = {"ZZ": np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex)}
    else:
        raise DomainError("shadows demo supports 1 or 2 qubits")
    state = State(state.density, spec)

    sample = sample_shadows(scheme, state, args.shots, seed=args.seed)
    names = list(observables)
    estimates = estimate(sample, [observables[n] for n in names], args.batches)
    exact = [float(np.real(state.expect(observables[n]))) for n in names]

    return _report(
        "shadows demo",
        {"qubits": args.qubits, "shots": args.shots,
         "batches": args.batches, "seed": args.seed},
        {
            "estimates": dict(zip(names, [jsonio._clean(v) for v in estimates])),
            "exact_values": dict(zip(names, [jsonio._clean(v) for v in exact])),
            "errors": dict(zip(names, [jsonio._clean(abs(a - b))
                                       for a, b in zip(estimates, exact)])),
            "seed": args.seed,
        },
    )


# -- argument parsing --------------------------------------------------------------


class _CliArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _CliArgumentParser(prog="opalg",
                                description="operator-algebra workbench")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("paulimul", help="evaluate an operator expression")
    p.add_argument("expr")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(handler=_cmd_paulimul)

    p = sub.add_parser("state", help="state reports")
    p.add_argument("action", choices=["report"])
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--expr")
    group.add_argument("--bloch", nargs=2, type=float,
                       metavar=("THETA", "PHI"))
    p.set_defaults(handler=_cmd_state)

    p = sub.add_parser("gns", help="GNS construction report")
    p.add_argument("--state", required=True,
                   help=f"state file or builtin: {', '.join(_BUILTIN_STATES)}")
    p.set_defaults(handler=_cmd_gns)

    p = sub.add_parser("measure", help="projective measurement")
    p.add_argument("--state", required=True)
    p.add_argument("--observable", required=True,
                   help="operator expression or matrix JSON file")
    p.set_defaults(handler=_cmd_measure)

    p = sub.add_parser("channel", help="quantum operation analysis")
    p.add_argument("action", choices=["analyze"])
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--kraus", help="Kraus JSON file")
    group.add_argument("--builtin",
                       choices=["transpose", "identity", "depolarizing"])
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--prob", type=float, default=0.5,
                   help="depolarizing weight")
    p.set_defaults(handler=_cmd_channel)

    p = sub.add_parser("code", help="stabilizer code verification")
    p.add_argument("action", choices=["verify"])
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--name", choices=["rep2", "rep3", "five_qubit"])
    group.add_argument("--generators", help="JSON file with letter strings")
    p.add_argument("--errors", choices=["weight1"], default=None)
    p.add_argument("--max-weight", type=int, default=None)
    p.set_defaults(handler=_cmd_code)

    p = sub.add_parser("shadows", help="classical shadows demo")
    p.add_argument("action", choices=["demo"])
    p.add_argument("--qubits", type=int, default=1)
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--batches", type=int, default=10)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(handler=_cmd_shadows)
    return parser


def run_command(argv: list[str]) -> int:
    """Dispatch a CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _emit({"error": {"kind": "usage", "message": str(exc)}})
        return USAGE_EXIT

    try:
        _emit(args.handler(args))
        return 0
    except ExprError as exc:
        error = {"kind": exc.kind, "message": str(exc)}
        if exc.position is not None:
            error["position"] = exc.position
        _emit({"error": error})
        return DOMAIN_EXIT
    except OpalgError as exc:
        _emit({"error": {"kind": exc.kind, "message": str(exc)}})
        return DOMAIN_EXIT


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
