import random

import numpy as np
import pytest

from satgadget import boolfn
from satgadget.circuit import Circuit, Gate, circuit, gate


def formula_from_truth_table(v: int, bits) -> boolfn.BoolExpr:
    """Minterm DNF realising the given truth table (all-zero handled)."""
    terms = []
    for i, b in enumerate(bits):
        if not b:
            continue
        lits = []
        for j in range(v):
            lits.append(f"x{j}" if (i >> j) & 1 else f"~x{j}")
        terms.append("(" + "&".join(lits) + ")")
    text = "|".join(terms) if terms else "x0&~x0"
    return boolfn.with_vars(boolfn.parse_expr(text), v)


def all_two_var_formulas():
    return [formula_from_truth_table(2, [(tt >> i) & 1 for i in range(4)]) for tt in range(16)]


def random_formula(rng: random.Random, nvars: int, depth: int = 3) -> boolfn.BoolExpr:
    def build(d):
        if d == 0 or rng.random() < 0.3:
            r = rng.random()
            if r < 0.85:
                return boolfn.var(rng.randrange(nvars))
            return boolfn.const(rng.randrange(2))
        op = rng.choice(["and", "or", "xor", "not"])
        if op == "not":
            return boolfn.not_(build(d - 1))
        a, b = build(d - 1), build(d - 1)
        return boolfn.BoolExpr(op, (a, b), 0, max(a.nvars, b.nvars))

    return boolfn.with_vars(build(depth), nvars)


def random_clifford_circuit(rng: random.Random, wires: int, length: int) -> Circuit:
    kinds1 = ["x", "h", "s", "sdg"]
    kinds2 = ["cx", "cz"]
    gates = []
    for _ in range(length):
        if wires >= 2 and rng.random() < 0.4:
            kind = rng.choice(kinds2)
            ws = rng.sample(range(wires), 2)
        else:
            kind = rng.choice(kinds1)
            ws = [rng.randrange(wires)]
        gates.append(gate(kind, *ws))
    return circuit(wires, gates)


def random_clifford_t_circuit(rng: random.Random, wires: int, length: int,
                              t_prob: float = 0.25) -> Circuit:
    gates = []
    for _ in range(length):
        r = rng.random()
        if r < t_prob:
            gates.append(gate(rng.choice(["t", "tdg"]), rng.randrange(wires)))
        elif wires >= 2 and r < t_prob + 0.3:
            kind = rng.choice(["cx", "cz"])
            gates.append(gate(kind, *rng.sample(range(wires), 2)))
        else:
            gates.append(gate(rng.choice(["x", "h", "s", "sdg"]), rng.randrange(wires)))
    return circuit(wires, gates)


@pytest.fixture(scope="session")
def clifford_catalog_1():
    from satgadget.clifford import enumerate_clifford_group

    return enumerate_clifford_group(1)


@pytest.fixture(scope="session")
def clifford_catalog_2():
    from satgadget.clifford import enumerate_clifford_group

    return enumerate_clifford_group(2)


@pytest.fixture(scope="session")
def sqrt_t_gate():
    from satgadget.sk import make_gate_definition

    return make_gate_definition("sqrt-t", np.diag([1.0, np.exp(1j * np.pi / 8)]))


@pytest.fixture(scope="session")
def generic_gate():
    from satgadget.sk import make_gate_definition

    return make_gate_definition("rz-2pi-7", np.diag([1.0, np.exp(2j * np.pi / 7)]))


@pytest.fixture(scope="session")
def generic_net(generic_gate):
    from satgadget.sk import base_net

    return base_net(generic_gate, max_len=12, node_cap=60000)
