import random

import pytest

from satgadget.circuit import (
    CircuitError,
    ENT_KINDS,
    T_KINDS,
    count,
    depth,
    emit_circuit,
    gate,
    circuit,
    invert,
    parse_circuit,
)
from satgadget.exact import ExactUnitary, exact_simulate

from conftest import random_clifford_t_circuit


def test_parse_two_wire_cx():
    c = parse_circuit("qubits 2\ncx 0 1\n")
    assert c.wires == 2 and len(c.gates) == 1
    assert c.gates[0].kind == "cx" and c.gates[0].wires == (0, 1)


def test_parse_t_tdg_simulates_to_identity():
    c = parse_circuit("qubits 1\nt 0\ntdg 0\n")
    assert len(c.gates) == 2
    assert exact_simulate(c) == ExactUnitary.identity(1)


def test_parse_toffoli():
    c = parse_circuit("qubits 3\nccx 0 1 2\n")
    assert c.gates[0].kind == "ccx"


def test_parse_roles_and_comments():
    text = "qubits 2  # two wires\nroles target,input\nt 0\n# tail comment\n"
    c = parse_circuit(text)
    assert c.roles == ("target", "input")
    assert emit_circuit(c) == "qubits 2\nroles target,input\nt 0\n"


def test_parse_errors():
    with pytest.raises(CircuitError, match="unknown mnemonic"):
        parse_circuit("qubits 1\nfoo 0\n")
    with pytest.raises(CircuitError, match="out of range"):
        parse_circuit("qubits 1\ncx 0 1\n")
    with pytest.raises(CircuitError, match="duplicate"):
        parse_circuit("qubits 2\ncx 0 0\n")
    with pytest.raises(CircuitError, match="qubits"):
        parse_circuit("t 0\n")


def test_roundtrip_random():
    rng = random.Random(3)
    for _ in range(25):
        c = random_clifford_t_circuit(rng, 4, 30)
        assert parse_circuit(emit_circuit(c)) == c


def test_count_examples():
    c = parse_circuit("qubits 2\ncx 0 1\nt 0\ncx 0 1\n")
    assert count(c, T_KINDS) == 1
    assert count(circuit(1, []), T_KINDS) == 0
    assert count(c, ENT_KINDS) == 2


def test_depth_examples():
    c = parse_circuit("qubits 2\nt 0\nt 1\n")
    assert depth(c, T_KINDS) == 1  # both fit one layer
    c = parse_circuit("qubits 1\nt 0\nt 0\n")
    assert depth(c, T_KINDS) == 2
    assert depth(circuit(2, []), T_KINDS) == 0


def test_depth_collisions():
    # cx forces the later t onto a new layer
    c = parse_circuit("qubits 2\nt 0\ncx 0 1\nt 1\n")
    assert depth(c, T_KINDS) == 2
    all_kinds = T_KINDS | ENT_KINDS | {"x", "h", "s", "sdg"}
    assert depth(c, all_kinds) == 3
    assert depth(c, all_kinds) <= len(c.gates)


def test_invert_kinds():
    assert invert(parse_circuit("qubits 1\nt 0\n")).gates[0].kind == "tdg"
    c = invert(parse_circuit("qubits 2\ncx 0 1\nh 0\n"))
    assert [g.kind for g in c.gates] == ["h", "cx"]


def test_invert_exact_inverse():
    rng = random.Random(17)
    for _ in range(100):
        c = random_clifford_t_circuit(rng, 3, 14)
        u = exact_simulate(c)
        v = exact_simulate(invert(c))
        assert u.mul(v) == ExactUnitary.identity(3)


def test_count_invariant_under_invert():
    rng = random.Random(19)
    for _ in range(30):
        c = random_clifford_t_circuit(rng, 3, 20)
        for kinds in (T_KINDS, ENT_KINDS, frozenset({"h"})):
            assert count(c, kinds) == count(invert(c), kinds)
