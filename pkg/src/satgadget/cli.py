"""Batch command-line front end.

Exit codes: 0 success / property true, 1 property false (UNSAT, EXCEEDS),
2 input error, 3 resource or budget cap.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import boolfn, numeric, search, sk, synth
from .circuit import CircuitError, count, depth, emit_circuit, parse_circuit
from .clifford import nearest_clifford_distance
from .exact import (
    ExactUnitary,
    SimulationError,
    equal_up_to_phase,
    exact_simulate,
    is_clifford_exact,
    is_generalized_permutation,
)

DEFAULT_SEED = 1729

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


class InputError(ValueError):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _load_formula(args) -> boolfn.BoolExpr:
    if getattr(args, "formula", None) is not None:
        return boolfn.parse_expr(args.formula)
    with open(args.dimacs) as fh:
        return boolfn.parse_dimacs(fh.read())


def _load_circuit(path: str):
    with open(path) as fh:
        return parse_circuit(fh.read())


def _cmd_reduce(args) -> int:
    f = _load_formula(args)
    gate_def = sk.load_gate_definition(args.gate) if args.gate else None
    inst = synth.build_reduction(
        f, args.variant, epsilon=args.epsilon, gate_def=gate_def
    )
    circuit_path = args.out
    sidecar_path = args.out + ".json"
    with open(circuit_path, "w") as fh:
        fh.write(emit_circuit(inst.circuit))
    with open(sidecar_path, "w") as fh:
        json.dump(inst.sidecar(), fh, sort_keys=True, indent=1)
        fh.write("\n")
    _emit({"schema": 1, "circuit": circuit_path, "sidecar": sidecar_path})
    return EXIT_OK


def _analysis_report(c, gate_def) -> dict:
    has_g = any(g.kind in ("g", "gdg") for g in c.gates)
    report = {
        "schema": 1,
        "qubits": c.wires,
        "counts": {
            "t": count(c, ("t", "tdg")),
            "h": count(c, ("h",)),
            "cx": count(c, ("cx",)),
            "cz": count(c, ("cz",)),
            "ccx": count(c, ("ccx",)),
        },
        "t_depth": depth(c, ("t", "tdg")),
        "is_clifford": None,
        "is_identity": None,
        "phase_exponent": None,
        "is_generalized_permutation": None,
        "is_product": None,
        "nearest_clifford_distance": None,
    }
    if not has_g:
        u = exact_simulate(c)
        if c.wires <= 8:
            report["is_clifford"] = is_clifford_exact(u)
        phase = equal_up_to_phase(u, ExactUnitary.identity(c.wires))
        report["is_identity"] = phase is not None
        report["phase_exponent"] = phase
        report["is_generalized_permutation"] = is_generalized_permutation(u)
        unum = u.to_numpy()
    else:
        if gate_def is None:
            raise InputError("circuit contains g gates; pass --gate")
        unum = numeric.numeric_simulate(c, gate_def.matrix)
    report["is_product"] = numeric.is_product_of_single_qubit(unum) is not None
    if c.wires <= 2:
        report["nearest_clifford_distance"] = float(
            nearest_clifford_distance(unum, n=c.wires).distance
        )
    return report


def _cmd_analyze(args) -> int:
    c = _load_circuit(args.circuit)
    gate_def = sk.load_gate_definition(args.gate) if args.gate else None
    _emit(_analysis_report(c, gate_def))
    return EXIT_OK


def _cmd_decide_sat(args) -> int:
    f = _load_formula(args)
    gate_def = sk.load_gate_definition(args.gate) if args.gate else None
    result, trace = synth.decide_sat(
        f, args.variant, epsilon=args.epsilon, gate_def=gate_def
    )
    _emit({"schema": 1, "result": result, "trace": trace})
    return EXIT_OK if result == "SAT" else EXIT_FALSE


def _cmd_mincount(args) -> int:
    c = _load_circuit(args.circuit)
    budget = search.SearchBudget(args.k_max)
    if args.kind == "tof":
        perm = search.permutation_from_circuit(c)
        k = search.exact_min_tofcount(perm, budget)
    else:
        u = exact_simulate(c)
        if u.n > 2:
            raise InputError("minimal-count search is limited to 2 wires")
        if args.kind == "t":
            k = search.exact_min_tcount(u, budget)
        else:
            k = search.exact_min_hcount(u, budget)
    if k is None:
        _emit({"schema": 1, "kind": args.kind, "result": "EXCEEDS", "k_max": args.k_max})
        return EXIT_FALSE
    _emit({"schema": 1, "kind": args.kind, "count": k})
    return EXIT_OK


_SK_TARGETS = {"t": "t", "tdg": "tdg", "h": "h"}


def _cmd_sk(args) -> int:
    gate_def = sk.load_gate_definition(args.gate)
    if args.target not in _SK_TARGETS:
        raise InputError(f"unknown target {args.target!r} (choose from t, tdg, h)")
    target = numeric.GATE_MATRICES[args.target]
    net = sk.base_net(gate_def, cache_dir=args.cache_dir)
    word = sk.sk_approximate(target, gate_def, args.epsilon, net=net)
    err = sk.unitary_phase_dist(target, word.matrix)
    _emit(
        {
            "schema": 1,
            "target": args.target,
            "epsilon": args.epsilon,
            "word": list(word.labels),
            "distance": float(err),
        }
    )
    return EXIT_OK


def _cmd_distance(args) -> int:
    c1 = _load_circuit(args.circuit1)
    c2 = _load_circuit(args.circuit2)
    gate_def = sk.load_gate_definition(args.gate) if args.gate else None
    mats = []
    for c in (c1, c2):
        has_g = any(g.kind in ("g", "gdg") for g in c.gates)
        if has_g and gate_def is None:
            raise InputError("circuit contains g gates; pass --gate")
        mats.append(numeric.numeric_simulate(c, gate_def.matrix if gate_def else None))
    if mats[0].shape != mats[1].shape:
        raise InputError("circuits act on different wire counts")
    dist, alpha = numeric.phase_min_distance(mats[0], mats[1])
    _emit({"schema": 1, "distance": float(dist), "alpha": float(alpha)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="satgadget",
        description="Compile SAT instances into circuit-cost gadgets and analyse them",
    )
    p.add_argument("--cache-dir", default="./.cache", help="catalog and net cache directory")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for sampled estimates")
    sub = p.add_subparsers(dest="command", required=True)

    def add_formula_args(sp):
        grp = sp.add_mutually_exclusive_group(required=True)
        grp.add_argument("--formula", help="formula text, e.g. '(x0|x1)&~x2'")
        grp.add_argument("--dimacs", help="path to a DIMACS CNF file")

    sp = sub.add_parser("reduce", help="build a gadget circuit from a formula")
    sp.add_argument("--variant", required=True, choices=synth.VARIANTS)
    add_formula_args(sp)
    sp.add_argument("--gate", help="gate definition JSON (g variant)")
    sp.add_argument("--epsilon", type=float, help="error budget (g variant)")
    sp.add_argument("--out", default="reduction.circuit", help="output circuit path")
    sp.set_defaults(fn=_cmd_reduce)

    sp = sub.add_parser("analyze", help="report exact and numeric circuit properties")
    sp.add_argument("circuit")
    sp.add_argument("--gate", help="gate definition JSON for g gates")
    sp.set_defaults(fn=_cmd_analyze)

    sp = sub.add_parser("decide-sat", help="decide satisfiability through the gadget")
    sp.add_argument("--variant", required=True, choices=synth.VARIANTS)
    add_formula_args(sp)
    sp.add_argument("--gate", help="gate definition JSON (g variant)")
    sp.add_argument("--epsilon", type=float, help="error budget (g variant)")
    sp.set_defaults(fn=_cmd_decide_sat)

    sp = sub.add_parser("mincount", help="minimal gate count of a circuit's unitary")
    sp.add_argument("kind", choices=("t", "h", "tof"))
    sp.add_argument("circuit")
    sp.add_argument("--k-max", type=int, required=True)
    sp.set_defaults(fn=_cmd_mincount)

    sp = sub.add_parser("sk", help="approximate a named gate over Clifford+G")
    sp.add_argument("--gate", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.set_defaults(fn=_cmd_sk)

    sp = sub.add_parser("distance", help="phase-minimised operator distance")
    sp.add_argument("circuit1")
    sp.add_argument("circuit2")
    sp.add_argument("--gate", help="gate definition JSON for g gates")
    sp.set_defaults(fn=_cmd_distance)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (
        InputError,
        boolfn.FormulaError,
        CircuitError,
        SimulationError,
        synth.SynthesisError,
        sk.GateDefinitionError,
        FileNotFoundError,
        ValueError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (
        search.ResourceCapError,
        sk.BudgetExceededError,
        sk.NetTooCoarseError,
        synth.OracleUndecidedError,
    ) as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
