"""Solovay-Kitaev approximation of single-qubit targets over Clifford+G.

Words are sequences over the inverse-closed alphabet {h, s, sdg, g, gdg}
(H and S generate every T-free single-qubit Clifford).  A breadth-first base
net feeds the standard balanced group-commutator recursion; every returned
word carries a *measured* phase-minimised distance, never a predicted one.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate
from .numeric import GATE_MATRICES, operator_norm, phase_min_distance

WORD_ALPHABET = ("h", "s", "sdg", "g", "gdg")
_INVERSE = {"h": "h", "s": "sdg", "sdg": "s", "g": "gdg", "gdg": "g"}

DEFAULT_NET_MAX_LEN = 16
DEFAULT_NET_NODE_CAP = 120_000
SK_SHRINK_FACTOR = 8.0  # c in eps_{n+1} = c * eps_n^(3/2)
MAX_SK_DEPTH = 6


class GateDefinitionError(ValueError):
    pass


class NetTooCoarseError(RuntimeError):
    pass


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class GateDefinition:
    label: str
    matrix: np.ndarray
    is_non_clifford: bool

    def dagger(self) -> np.ndarray:
        return self.matrix.conj().T

    def content_hash(self) -> str:
        rounded = np.round(self.matrix.astype(np.complex128), 12)
        return hashlib.sha256(rounded.tobytes()).hexdigest()[:16]


def _single_qubit_cliffords() -> np.ndarray:
    """The 24 single-qubit Cliffords (one numeric matrix per phase class)."""
    from .clifford import enumerate_clifford_group

    return enumerate_clifford_group(1).numeric()


def unitary_phase_dist(u: np.ndarray, v: np.ndarray) -> float:
    """Exact phase-minimised operator distance for unitary inputs.

    The singular values of U - e^{ia}V are |1 - e^{ia}e^{i phi_j}| over the
    eigenphases phi_j of U*V, so the minimum over a is set by the smallest
    arc enclosing the eigenphases: 2 sin(width/4)."""
    evals = np.linalg.eigvals(u.conj().T @ v)
    ang = np.sort(np.angle(evals) % (2 * np.pi))
    gaps = np.diff(ang, append=ang[0] + 2 * np.pi)
    width = 2 * np.pi - gaps.max()
    return float(2 * np.sin(width / 4))


def clifford1_min_distance(m: np.ndarray) -> float:
    return min(unitary_phase_dist(m, c) for c in _single_qubit_cliffords())


def make_gate_definition(label: str, matrix) -> GateDefinition:
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (2, 2):
        raise GateDefinitionError("gate matrix must be 2x2")
    defect = operator_norm(matrix.conj().T @ matrix - np.eye(2))
    if defect > 1e-12:
        raise GateDefinitionError(f"matrix is not unitary within 1e-12 ({defect:.2e})")
    non_clifford = clifford1_min_distance(matrix) > 1e-9
    return GateDefinition(label, matrix, non_clifford)


def load_gate_definition(path: str) -> GateDefinition:
    """JSON file: {"label": str, "matrix": [[re, im] x4 row-major]}."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        label = data["label"]
        entries = [complex(re, im) for re, im in data["matrix"]]
    except (KeyError, TypeError, ValueError) as e:
        raise GateDefinitionError(f"bad gate definition file {path}: {e}")
    return make_gate_definition(label, np.array(entries).reshape(2, 2))


def save_gate_definition(gdef: GateDefinition, path: str):
    entries = [[float(z.real), float(z.imag)] for z in gdef.matrix.ravel()]
    with open(path, "w") as fh:
        json.dump({"label": gdef.label, "matrix": entries}, fh, indent=1)
        fh.write("\n")


@dataclass(frozen=True)
class GateWord:
    labels: tuple[str, ...]
    matrix: np.ndarray

    def inverse(self) -> "GateWord":
        labels = tuple(_INVERSE[l] for l in reversed(self.labels))
        return GateWord(labels, self.matrix.conj().T)


def word_matrix(labels, gdef: GateDefinition) -> np.ndarray:
    """Product in circuit order: labels[0] is applied first."""
    acc = np.eye(2, dtype=np.complex128)
    for l in labels:
        if l == "g":
            m = gdef.matrix
        elif l == "gdg":
            m = gdef.dagger()
        else:
            m = GATE_MATRICES[l]
        acc = m @ acc
    return acc


def _su2_key(m: np.ndarray) -> bytes:
    """Phase-normalised rounding key for net deduplication (~1e-10 scale)."""
    det = np.linalg.det(m)
    norm = m / np.sqrt(det)
    flat = norm.ravel()
    pivot = flat[np.argmax(np.abs(flat))]
    if pivot.real < 0 or (abs(pivot.real) < 1e-12 and pivot.imag < 0):
        norm = -norm
    return np.round(norm.ravel() * 1e10).astype(np.complex128).tobytes()


class BaseNet:
    """Deduplicated words up to max_len, indexed for nearest lookup."""

    def __init__(self, gdef: GateDefinition, words: list[tuple[str, ...]],
                 matrices: np.ndarray, max_len: int):
        self.gdef = gdef
        self.words = words
        self.matrices = matrices
        self.max_len = max_len

    def __len__(self):
        return len(self.words)

    def nearest(self, target: np.ndarray) -> GateWord:
        """Net word with minimal phase-minimised distance to the target."""
        d = target.shape[0]
        traces = np.abs(np.einsum("gij,ij->g", self.matrices.conj(), target))
        lb = np.sqrt(np.maximum(0.0, (2 * d - 2 * traces) / d))
        order = np.argsort(lb, kind="stable")
        best = (np.inf, 0)
        for g in order:
            if lb[g] >= best[0] + 1e-12:
                break
            dist = unitary_phase_dist(target, self.matrices[g])
            if dist < best[0]:
                best = (dist, int(g))
        return GateWord(self.words[best[1]], self.matrices[best[1]])

    def covering_radius_estimate(self, samples: int = 1000, seed: int = 1729) -> float:
        """Max over Haar-sampled targets of the nearest-word distance."""
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(samples):
            z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            q, r = np.linalg.qr(z)
            q = q @ np.diag(np.diagonal(r) / np.abs(np.diagonal(r)))
            word = self.nearest(q)
            worst = max(worst, unitary_phase_dist(q, word.matrix))
        return worst


_net_memo: dict = {}


def base_net(
    gdef: GateDefinition,
    max_len: int = DEFAULT_NET_MAX_LEN,
    node_cap: int = DEFAULT_NET_NODE_CAP,
    eps0: float | None = None,
    cache_dir: str | None = None,
) -> BaseNet:
    """All words up to max_len (subject to node_cap), deduplicated by
    phase-invariant distance below 1e-10."""
    if max_len > 16:
        raise ValueError("net length is limited to 16")
    if not gdef.is_non_clifford:
        raise GateDefinitionError("base nets require a non-Clifford gate")
    memo_key = (gdef.content_hash(), max_len, node_cap)
    if memo_key in _net_memo:
        net = _net_memo[memo_key]
        if eps0 is not None:
            _check_radius(net, eps0)
        return net
    cache_path = None
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        cache_path = os.path.join(
            cache_dir, f"sknet_{gdef.content_hash()}_len{max_len}.npz"
        )
        if os.path.exists(cache_path):
            data = np.load(cache_path, allow_pickle=False)
            words = [tuple(w.split()) if w else () for w in data["words"].tolist()]
            net = BaseNet(gdef, words, data["matrices"], max_len)
            _net_memo[memo_key] = net
            if eps0 is not None:
                _check_radius(net, eps0)
            return net
    words: list[tuple[str, ...]] = [()]
    mats = [np.eye(2, dtype=np.complex128)]
    seen = {_su2_key(mats[0])}
    frontier = [((), mats[0])]
    for _ in range(max_len):
        if len(words) >= node_cap:
            break
        nxt = []
        for labels, m in frontier:
            for l in WORD_ALPHABET:
                if labels and l == _INVERSE[labels[-1]]:
                    continue  # immediate backtracking never yields new elements
                lm = gdef.matrix if l == "g" else (
                    gdef.dagger() if l == "gdg" else GATE_MATRICES[l]
                )
                m2 = lm @ m
                key = _su2_key(m2)
                if key in seen:
                    continue
                seen.add(key)
                w2 = labels + (l,)
                words.append(w2)
                mats.append(m2)
                nxt.append((w2, m2))
                if len(words) >= node_cap:
                    break
            if len(words) >= node_cap:
                break
        if not nxt:
            break
        frontier = nxt
    net = BaseNet(gdef, words, np.array(mats), max_len)
    _net_memo[memo_key] = net
    if cache_path is not None:
        np.savez(
            cache_path,
            words=np.array([" ".join(w) for w in words]),
            matrices=net.matrices,
        )
    if eps0 is not None:
        _check_radius(net, eps0)
    return net


def _check_radius(net: BaseNet, eps0: float):
    estimate = net.covering_radius_estimate()
    if estimate > eps0:
        raise NetTooCoarseError(
            f"covering radius estimate {estimate:.4f} exceeds requested {eps0}"
        )


def _to_su2(m: np.ndarray) -> np.ndarray:
    return m / np.sqrt(np.linalg.det(m))


def _axis_angle(u: np.ndarray):
    """Axis and angle of an SU(2)-normalised rotation:
    U = cos(t/2) I - i sin(t/2) (n . sigma)."""
    su = _to_su2(u)
    cos_half = np.clip(np.real(su[0, 0] + su[1, 1]) / 2, -1.0, 1.0)
    theta = 2 * np.arccos(cos_half)
    s = np.sin(theta / 2)
    if abs(s) < 1e-12:
        return np.array([0.0, 0.0, 1.0]), 0.0
    nx = -np.imag(su[0, 1] + su[1, 0]) / (2 * s)
    ny = np.real(su[1, 0] - su[0, 1]) / (2 * s)
    nz = -np.imag(su[0, 0] - su[1, 1]) / (2 * s)
    return np.array([nx, ny, nz]), theta


def _rot(axis: np.ndarray, theta: float) -> np.ndarray:
    x, y, z = axis / np.linalg.norm(axis)
    sx = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    sy = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    sz = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    n = x * sx + y * sy + z * sz
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * n


def _group_commutator_factors(u: np.ndarray):
    """Balanced V, W with V W V* W* similar to u (Dawson-Nielsen style)."""
    _, theta = _axis_angle(u)
    phi = 2.0 * np.arcsin(np.sqrt(np.sqrt(0.5 - 0.5 * np.cos(theta / 2))))
    v = _rot(np.array([1.0, 0.0, 0.0]), phi)
    w = _rot(np.array([0.0, 1.0, 0.0]), phi)

    def diagonalizer(m):
        vals, vecs = np.linalg.eig(_to_su2(m))
        order = np.argsort(np.angle(vals))
        q, _ = np.linalg.qr(vecs[:, order])
        return q

    ud = diagonalizer(u)
    gd = diagonalizer(v @ w @ v.conj().T @ w.conj().T)
    s = ud @ gd.conj().T
    return s @ v @ s.conj().T, s @ w @ s.conj().T


def _sk_recurse(target: np.ndarray, net: BaseNet, depth: int) -> GateWord:
    if depth == 0:
        return net.nearest(target)
    prev = _sk_recurse(target, net, depth - 1)
    delta = _to_su2(target) @ _to_su2(prev.matrix).conj().T
    v, w = _group_commutator_factors(delta)
    vw = _sk_recurse(v, net, depth - 1)
    ww = _sk_recurse(w, net, depth - 1)
    labels = (
        prev.labels + ww.inverse().labels + vw.inverse().labels + ww.labels + vw.labels
    )
    matrix = (
        vw.matrix @ ww.matrix @ vw.matrix.conj().T @ ww.matrix.conj().T @ prev.matrix
    )
    return GateWord(labels, matrix)


def sk_approximate(
    target: np.ndarray,
    gdef: GateDefinition,
    eps: float,
    net: BaseNet | None = None,
    max_depth: int = MAX_SK_DEPTH,
) -> GateWord:
    """Word whose measured phase-minimised distance to the target is <= eps.

    Recursion depth follows the eps_{n+1} = c * eps_n^{3/2} schedule from the
    measured base distance; the certificate is always re-measured."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    target = np.asarray(target, dtype=np.complex128)
    if net is None:
        net = base_net(gdef)
    base = net.nearest(target)
    err = unitary_phase_dist(target, base.matrix)
    if err <= eps:
        return base
    depth = 0
    predicted = err
    while predicted > eps and depth < max_depth:
        depth += 1
        predicted = SK_SHRINK_FACTOR * predicted**1.5
        if predicted >= err:  # schedule not contracting from this base error
            break
    best_word, best_err = base, err
    for d in range(1, max_depth + 1):
        word = _sk_recurse(target, net, d)
        werr = unitary_phase_dist(target, word.matrix)
        if werr < best_err:
            best_word, best_err = word, werr
        if best_err <= eps:
            return best_word
    raise BudgetExceededError(
        f"requested eps={eps} not certified: best measured distance {best_err:.3e} "
        f"(net size {len(net)}, max depth {max_depth})"
    )


def translate_circuit(
    c: Circuit, gdef: GateDefinition, eps_total: float, net: BaseNet | None = None
):
    """Replace every T/T* with a Clifford+G word at budget eps_total/t_count.

    Returns (circuit, certificate) where the certificate lists each word's
    measured error; sub-additivity bounds the whole-circuit distance by their
    sum."""
    t_positions = [i for i, g in enumerate(c.gates) if g.kind in ("t", "tdg")]
    if not t_positions:
        return c, {"per_gate_errors": [], "budget_per_gate": 0.0, "error_bound": 0.0}
    if net is None:
        net = base_net(gdef)
    per_gate = eps_total / len(t_positions)
    t_word = sk_approximate(GATE_MATRICES["t"], gdef, per_gate, net=net)
    t_err = unitary_phase_dist(GATE_MATRICES["t"], t_word.matrix)
    tdg_word = t_word.inverse()
    gates: list[Gate] = []
    errors = []
    for g in c.gates:
        if g.kind in ("t", "tdg"):
            word = t_word if g.kind == "t" else tdg_word
            gates.extend(Gate(l, (g.wires[0],)) for l in word.labels)
            errors.append(t_err)
        else:
            gates.append(g)
    out = Circuit(c.wires, tuple(gates), c.roles, c.name)
    return out, {
        "per_gate_errors": errors,
        "budget_per_gate": per_gate,
        "error_bound": float(sum(errors)),
    }
