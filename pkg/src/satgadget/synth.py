"""Reduction-instance construction: the oblivious oracle U_f, the C_f gadget
circuits for all five cost variants, and the end-to-end SAT decision.

Wire layout for the t/ent/h/g variants: wire 0 is the target y, wires 1..v
hold x0..x_{v-1}, any borrowed wire sits above.  The tof variant uses wire 0
for z, 1 for y, 2 for the oracle target a, and 3..v+2 for the inputs.
Oracles are synthesised from the algebraic normal form with borrowed-wire
multi-controlled X, so they act correctly for *every* value of the helper
wires; circuits are verified against their stated unitary action at build
time."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import boolfn, numeric
from .boolfn import BoolExpr, WitnessPair, evaluate, find_witness_pair, truth_table
from .circuit import Circuit, Gate, circuit, gate
from .clifford import (
    nearest_clifford_distance,
    nearest_diagonal_clifford_distance,
)
from .exact import ExactUnitary, exact_simulate, is_clifford_exact, is_generalized_permutation, phase_profile

VARIANTS = ("t", "tof", "ent", "h", "g")
MAX_REDUCTION_VARS = 4

# the soundness ceiling for the g variant: 2*eps < 2*sin(pi/16)
G_EPSILON_CEILING = math.sin(math.pi / 16)


class SynthesisError(ValueError):
    pass


class OracleUndecidedError(RuntimeError):
    """The numeric zero-cost oracle could not separate its two cases."""


def anf(f: BoolExpr):
    """(constant, monomials) of the XOR-of-ANDs normal form, via the Moebius
    transform of the truth table.  Monomials are sorted index tuples."""
    if f.nvars > 12:
        raise SynthesisError("ANF limited to 12 variables")
    bits = np.array(truth_table(f).bits, dtype=np.uint8)
    v = f.nvars
    coeffs = bits.copy()
    for i in range(v):
        step = 1 << i
        mask = (np.arange(1 << v) & step) != 0
        coeffs[mask] ^= coeffs[np.arange(1 << v)[mask] ^ step]
    constant = int(coeffs[0])
    monomials = []
    for m in range(1, 1 << v):
        if coeffs[m]:
            monomials.append(tuple(i for i in range(v) if (m >> i) & 1))
    monomials.sort(key=lambda t: (len(t), t))
    return constant, monomials


@dataclass(frozen=True)
class OracleCircuit:
    circuit: Circuit
    input_wires: tuple[int, ...]
    target: int
    borrowed: tuple[int, ...]


def _c3x(c1, c2, c3, t, b) -> list[Gate]:
    # valid for any value on the borrowed wire b, which is restored
    return [
        gate("ccx", b, c3, t),
        gate("ccx", c1, c2, b),
        gate("ccx", b, c3, t),
        gate("ccx", c1, c2, b),
    ]


def _c4x(c1, c2, c3, c4, t, b) -> list[Gate]:
    # alternate a C3X block (borrowing the idle control c1) with toggles of b
    v = _c3x(b, c3, c4, t, c1)
    w = [gate("ccx", c1, c2, b)]
    return v + w + v + w


def _monomial_gates(wires: list[int], target: int, borrow: int | None) -> list[Gate]:
    k = len(wires)
    if k == 0:
        return [gate("x", target)]
    if k == 1:
        return [gate("cx", wires[0], target)]
    if k == 2:
        return [gate("ccx", wires[0], wires[1], target)]
    if borrow is None:
        raise SynthesisError("monomials above two controls need a borrowed wire")
    if k == 3:
        return _c3x(*wires, target, borrow)
    if k == 4:
        return _c4x(*wires, target, borrow)
    raise SynthesisError("monomials above four controls are out of desk scale")


def _oracle_gates(f: BoolExpr, input_wires: tuple[int, ...], target: int, next_free: int):
    constant, monomials = anf(f)
    gates: list[Gate] = []
    dedicated: int | None = None
    if constant:
        gates.append(gate("x", target))
    for m in monomials:
        wires = [input_wires[i] for i in m]
        borrow = None
        if len(m) >= 3:
            idle = [input_wires[i] for i in range(f.nvars) if i not in m]
            if idle:
                borrow = idle[0]
            else:
                if dedicated is None:
                    dedicated = next_free
                borrow = dedicated
        gates.extend(_monomial_gates(wires, target, borrow))
    borrowed = (dedicated,) if dedicated is not None else ()
    return gates, borrowed


def _expected_oracle_perm(f: BoolExpr, input_wires, target, wires):
    idx = np.arange(1 << wires)
    xvals = np.zeros(1 << wires, dtype=np.int64)
    for i, w in enumerate(input_wires):
        xvals |= ((idx >> w) & 1) << i
    fbits = np.array(truth_table(f).bits, dtype=np.int64)
    return idx ^ (fbits[xvals] << target)


def _check_permutation_unitary(u: ExactUnitary, perm: np.ndarray, what: str):
    """The unitary must be exactly the basis permutation b -> perm[b]."""
    if u.k != 0:
        raise SynthesisError(f"{what}: unitary is not a permutation (k != 0)")
    n = u.dim
    expect = np.zeros((n, n), dtype=np.int64)
    expect[perm, np.arange(n)] = 1
    if not (
        np.array_equal(np.asarray(u.planes[0], dtype=np.int64), expect)
        and not u.planes[1].any()
        and not u.planes[2].any()
        and not u.planes[3].any()
    ):
        raise SynthesisError(f"{what}: unitary differs from the stated permutation")


def synth_oracle(f: BoolExpr) -> OracleCircuit:
    """Oblivious oracle |x, y, w> -> |x, y + f(x), w> in the standard layout
    (y on wire 0, inputs above); verified exhaustively by exact simulation."""
    if f.nvars > MAX_REDUCTION_VARS:
        raise SynthesisError(f"oracle synthesis limited to {MAX_REDUCTION_VARS} variables")
    input_wires = tuple(range(1, f.nvars + 1))
    target = 0
    gates, borrowed = _oracle_gates(f, input_wires, target, f.nvars + 1)
    wires = f.nvars + 1 + len(borrowed)
    roles = ["target"] + ["input"] * f.nvars + ["ancilla-borrowed"] * len(borrowed)
    c = circuit(wires, gates, roles, name="oracle")
    u = exact_simulate(c)
    _check_permutation_unitary(
        u, _expected_oracle_perm(f, input_wires, target, wires), "oracle obliviousness"
    )
    return OracleCircuit(c, input_wires, target, borrowed)


@dataclass(frozen=True)
class ReductionInstance:
    variant: str
    circuit: Circuit
    roles: dict
    witness: WitnessPair | int
    formula: str
    nvars: int
    epsilon: float | None = None
    gate_def: object = None
    translation: dict | None = None
    clifford_t_circuit: Circuit | None = None

    def sidecar(self) -> dict:
        wit = (
            {"constant": self.witness}
            if isinstance(self.witness, int)
            else {"z1": list(self.witness.z1), "z2": list(self.witness.z2)}
        )
        out = {
            "schema": 1,
            "variant": self.variant,
            "formula": self.formula,
            "roles": self.roles,
            "witness": wit,
            "epsilon": self.epsilon,
        }
        if self.gate_def is not None:
            out["gate"] = {
                "label": self.gate_def.label,
                "matrix": [
                    [float(z.real), float(z.imag)] for z in self.gate_def.matrix.ravel()
                ],
            }
        else:
            out["gate"] = None
        return out


def _tvariant_profile(f: BoolExpr, wires: int, y_wire: int, input_wires) -> np.ndarray:
    idx = np.arange(1 << wires)
    xvals = np.zeros(1 << wires, dtype=np.int64)
    for i, w in enumerate(input_wires):
        xvals |= ((idx >> w) & 1) << i
    fbits = np.array(truth_table(f).bits, dtype=np.int64)
    y = (idx >> y_wire) & 1
    return ((1 - 2 * y) * fbits[xvals]) % 8


def build_reduction(
    f: BoolExpr,
    variant: str,
    epsilon: float | None = None,
    gate_def=None,
    net=None,
) -> ReductionInstance:
    """Gadget circuit whose minimal-cost structure encodes satisfiability of f;
    the variant-specific unitary action is verified exactly at build time."""
    if variant not in VARIANTS:
        raise SynthesisError(f"unknown variant {variant!r}")
    if f.nvars > MAX_REDUCTION_VARS:
        raise SynthesisError(f"reductions limited to {MAX_REDUCTION_VARS} variables")
    if f.nvars == 0:
        f = boolfn.with_vars(f, 1)
    witness = find_witness_pair(f)
    formula = boolfn.emit_expr(f)

    if variant == "tof":
        z_wire, y_wire, a_wire = 0, 1, 2
        input_wires = tuple(range(3, f.nvars + 3))
        ogates, borrowed = _oracle_gates(f, input_wires, a_wire, f.nvars + 3)
        wires = f.nvars + 3 + len(borrowed)
        ccx = gate("ccx", a_wire, y_wire, z_wire)
        gates = ogates + [ccx] + ogates + [ccx]
        roles_tags = (
            ["target", "input", "ancilla-borrowed"]
            + ["input"] * f.nvars
            + ["ancilla-borrowed"] * len(borrowed)
        )
        c = circuit(wires, gates, roles_tags, name=f"tof-gadget:{formula}")
        u = exact_simulate(c)
        idx = np.arange(1 << wires)
        xvals = np.zeros(1 << wires, dtype=np.int64)
        for i, w in enumerate(input_wires):
            xvals |= ((idx >> w) & 1) << i
        fbits = np.array(truth_table(f).bits, dtype=np.int64)
        perm = idx ^ ((fbits[xvals] & ((idx >> y_wire) & 1)) << z_wire)
        _check_permutation_unitary(u, perm, "tof gadget")
        roles = {
            "inputs": list(input_wires),
            "target_y": y_wire,
            "oracle_target_a": a_wire,
            "ccx_target_z": z_wire,
            "borrowed": list(borrowed),
        }
        return ReductionInstance("tof", c, roles, witness, formula, f.nvars)

    # t / ent / h / g share the sandwich layout
    y_wire = 0
    input_wires = tuple(range(1, f.nvars + 1))
    ogates, borrowed = _oracle_gates(f, input_wires, y_wire, f.nvars + 1)
    wires = f.nvars + 1 + len(borrowed)
    sandwich = ogates + [gate("t", y_wire)] + ogates + [gate("tdg", y_wire)]
    roles_tags = ["target"] + ["input"] * f.nvars + ["ancilla-borrowed"] * len(borrowed)
    roles = {
        "inputs": list(input_wires),
        "target_y": y_wire,
        "borrowed": list(borrowed),
    }

    tcirc = circuit(wires, sandwich, roles_tags, name=f"t-gadget:{formula}")
    expected = _tvariant_profile(f, wires, y_wire, input_wires)
    prof = phase_profile(exact_simulate(tcirc))
    if prof is None or not np.array_equal(prof, expected):
        raise SynthesisError("t gadget does not implement its diagonal action")

    if variant in ("t", "ent"):
        return ReductionInstance(variant, tcirc, roles, witness, formula, f.nvars)

    if variant == "h":
        gates = [gate("h", y_wire)] + sandwich + [gate("h", y_wire)]
        c = circuit(wires, gates, roles_tags, name=f"h-gadget:{formula}")
        return ReductionInstance("h", c, roles, witness, formula, f.nvars)

    # g variant: translate the T sandwich into Clifford+G
    from . import sk as sk_mod

    if gate_def is None or epsilon is None:
        raise SynthesisError("g variant requires a gate definition and epsilon")
    if epsilon >= G_EPSILON_CEILING:
        raise SynthesisError(
            f"epsilon must stay below sin(pi/16) ~ {G_EPSILON_CEILING:.4f}"
        )
    translated, cert = sk_mod.translate_circuit(tcirc, gate_def, epsilon, net=net)
    wnum = numeric.numeric_simulate(translated, gate_def.matrix)
    measured, _ = numeric.phase_min_distance(wnum, exact_simulate(tcirc).to_numpy())
    if measured > epsilon:
        raise SynthesisError(
            f"translated gadget misses its budget: {measured} > {epsilon}"
        )
    cert = dict(cert, measured_distance=float(measured))
    c = Circuit(translated.wires, translated.gates, tuple(roles_tags), f"g-gadget:{formula}")
    return ReductionInstance(
        "g", c, roles, witness, formula, f.nvars, float(epsilon), gate_def, cert, tcirc
    )


# ---------------------------------------------------------------------------
# the SAT decision procedure
# ---------------------------------------------------------------------------


def _g_zero_cost(inst: ReductionInstance, trace: dict) -> bool:
    """Is the translated gadget within epsilon of *some* Clifford?

    For two-qubit gadgets the full 11520-element catalog is scanned.  Above
    that, diagonal Cliffords are scanned exactly (the optimum is borrow-wire
    independent, so the scan runs on the y+input wires), and non-diagonal
    Cliffords are excluded by the 1/2 stabilizer-overlap bound adjusted by
    the measured translation error."""
    eps = inst.epsilon
    cf = exact_simulate(inst.clifford_t_circuit)
    wnum = numeric.numeric_simulate(inst.circuit, inst.gate_def.matrix)
    delta, _ = numeric.phase_min_distance(wnum, cf.to_numpy())
    trace["translation_error"] = float(delta)
    if inst.circuit.wires <= 2:
        res = nearest_clifford_distance(wnum, n=inst.circuit.wires)
        trace["oracle"] = {
            "kind": "nearest_clifford_full_catalog",
            "distance": float(res.distance),
        }
        return res.distance <= eps
    prof = phase_profile(cf)
    if prof is None:
        raise OracleUndecidedError("gadget is not diagonal; cannot scan")
    m = inst.nvars + 1
    thetas = np.asarray(prof[: 1 << m], dtype=np.float64) * (np.pi / 4)
    dstar = nearest_diagonal_clifford_distance(thetas)
    trace["oracle"] = {
        "kind": "diagonal_scan_with_nondiagonal_bound",
        "diagonal_min": float(dstar),
    }
    if dstar + delta <= eps:
        return True
    if dstar - delta > eps and 0.5 - delta > eps:
        return False
    raise OracleUndecidedError(
        f"cannot separate: diagonal min {dstar:.4f}, translation error {delta:.4f}, "
        f"epsilon {eps}"
    )


def decide_sat(
    f: BoolExpr,
    variant: str,
    oracle=None,
    epsilon: float | None = None,
    gate_def=None,
    net=None,
):
    """The Turing reduction: build the gadget, ask the zero-cost oracle, and
    separate unsatisfiable from tautological with f(0...0) where needed.

    Returns ("SAT" | "UNSAT", trace)."""
    inst = build_reduction(f, variant, epsilon=epsilon, gate_def=gate_def, net=net)
    trace: dict = {
        "variant": variant,
        "formula": inst.formula,
        "wires": inst.circuit.wires,
        "steps": [],
    }
    if variant in ("t", "tof", "ent"):
        u = exact_simulate(inst.circuit)
        zero_cost = oracle(u) if oracle is not None else is_clifford_exact(u)
        trace["oracle"] = {
            "kind": "custom" if oracle is not None else "is_clifford_exact",
            "zero_cost": bool(zero_cost),
        }
        trace["steps"].append("cliffordness-oracle")
    elif variant == "h":
        u = exact_simulate(inst.circuit)
        zero_cost = oracle(u) if oracle is not None else is_generalized_permutation(u)
        trace["oracle"] = {
            "kind": "custom" if oracle is not None else "is_generalized_permutation",
            "zero_cost": bool(zero_cost),
        }
        trace["steps"].append("generalized-permutation-oracle")
        # zero H-cost holds exactly when f is unsatisfiable: no f(0...0) step
        trace["f_at_zero"] = None
        result = "UNSAT" if zero_cost else "SAT"
        trace["result"] = result
        return result, trace
    else:
        zero_cost = _g_zero_cost(inst, trace)
        trace["oracle"]["zero_cost"] = bool(zero_cost)
        trace["steps"].append("epsilon-clifford-oracle")

    if not zero_cost:
        trace["f_at_zero"] = None
        trace["result"] = "SAT"
        return "SAT", trace
    f0 = evaluate(f, 0)
    trace["steps"].append("evaluate-zero-assignment")
    trace["f_at_zero"] = f0
    result = "SAT" if f0 == 1 else "UNSAT"
    trace["result"] = result
    return result, trace
