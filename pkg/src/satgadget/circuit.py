"""Gate-list circuit representation shared by every analysis and synthesis pass.

Circuits are immutable: a wire count, an ordered gate tuple, and optional
per-wire role tags.  Cost metrics here are *as written* in the gate list;
minimal counts over all implementations live in :mod:`satgadget.search`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ARITY = {
    "x": 1,
    "h": 1,
    "s": 1,
    "sdg": 1,
    "t": 1,
    "tdg": 1,
    "cx": 2,
    "cz": 2,
    "ccx": 3,
    "g": 1,
    "gdg": 1,
}

INVERSE_KIND = {
    "x": "x",
    "h": "h",
    "s": "sdg",
    "sdg": "s",
    "t": "tdg",
    "tdg": "t",
    "cx": "cx",
    "cz": "cz",
    "ccx": "ccx",
    "g": "gdg",
    "gdg": "g",
}

ROLES = ("input", "target", "ancilla-borrowed", "ancilla-clean")

T_KINDS = frozenset({"t", "tdg"})
ENT_KINDS = frozenset({"cx", "cz", "ccx"})
CLIFFORD_KINDS = frozenset({"x", "h", "s", "sdg", "cx", "cz"})


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    wires: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ARITY:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if len(self.wires) != ARITY[self.kind]:
            raise CircuitError(
                f"{self.kind} takes {ARITY[self.kind]} wires, got {self.wires}"
            )
        if len(set(self.wires)) != len(self.wires):
            raise CircuitError(f"duplicate operands in {self.kind} {self.wires}")


def gate(kind: str, *wires: int) -> Gate:
    return Gate(kind, tuple(wires))


@dataclass(frozen=True)
class Circuit:
    wires: int
    gates: tuple[Gate, ...]
    roles: tuple[str, ...] | None = None
    name: str = ""

    def __post_init__(self):
        if self.wires < 0:
            raise CircuitError("negative wire count")
        for g in self.gates:
            for w in g.wires:
                if not 0 <= w < self.wires:
                    raise CircuitError(
                        f"gate {g.kind} {g.wires} references wire {w} "
                        f"outside 0..{self.wires - 1}"
                    )
        if self.roles is not None:
            if len(self.roles) != self.wires:
                raise CircuitError("roles must tag every wire")
            for r in self.roles:
                if r not in ROLES:
                    raise CircuitError(f"unknown wire role {r!r}")


def circuit(wires: int, gates, roles=None, name: str = "") -> Circuit:
    return Circuit(wires, tuple(gates), tuple(roles) if roles is not None else None, name)


def parse_circuit(text: str) -> Circuit:
    """Parse the line format: ``qubits <n>``, optional ``roles <tag,...>``, gates."""
    wires = None
    roles = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if wires is None:
            if parts[0] != "qubits" or len(parts) != 2:
                raise CircuitError(f"line {lineno}: expected 'qubits <n>'")
            try:
                wires = int(parts[1])
            except ValueError:
                raise CircuitError(f"line {lineno}: bad wire count {parts[1]!r}")
            if wires < 0:
                raise CircuitError(f"line {lineno}: negative wire count")
            continue
        if parts[0] == "roles" and not gates and roles is None:
            roles = tuple(",".join(parts[1:]).split(","))
            continue
        kind = parts[0]
        if kind not in ARITY:
            raise CircuitError(f"line {lineno}: unknown mnemonic {kind!r}")
        try:
            ws = tuple(int(p) for p in parts[1:])
        except ValueError:
            raise CircuitError(f"line {lineno}: bad wire index in {line!r}")
        try:
            g = Gate(kind, ws)
        except CircuitError as e:
            raise CircuitError(f"line {lineno}: {e}")
        for w in ws:
            if not 0 <= w < wires:
                raise CircuitError(f"line {lineno}: wire {w} out of range")
        gates.append(g)
    if wires is None:
        raise CircuitError("missing 'qubits <n>' header")
    return Circuit(wires, tuple(gates), roles)


def emit_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.wires}"]
    if c.roles is not None:
        lines.append("roles " + ",".join(c.roles))
    for g in c.gates:
        lines.append(" ".join([g.kind] + [str(w) for w in g.wires]))
    return "\n".join(lines) + "\n"


def count(c: Circuit, kinds) -> int:
    """Number of gates whose kind is in the set, as written."""
    kinds = frozenset(kinds)
    return sum(1 for g in c.gates if g.kind in kinds)


def depth(c: Circuit, kinds) -> int:
    """Layers containing a gate from the set, under greedy left-to-right layering."""
    kinds = frozenset(kinds)
    level = [0] * c.wires
    hit_layers: set[int] = set()
    for g in c.gates:
        layer = max((level[w] for w in g.wires), default=0)
        for w in g.wires:
            level[w] = layer + 1
        if g.kind in kinds:
            hit_layers.add(layer)
    return len(hit_layers)


def invert(c: Circuit) -> Circuit:
    gates = tuple(Gate(INVERSE_KIND[g.kind], g.wires) for g in reversed(c.gates))
    return Circuit(c.wires, gates, c.roles, c.name)


def concat(a: Circuit, b: Circuit) -> Circuit:
    if a.wires != b.wires:
        raise CircuitError("wire counts differ")
    return Circuit(a.wires, a.gates + b.gates, a.roles or b.roles)
