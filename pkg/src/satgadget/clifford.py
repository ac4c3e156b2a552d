"""Stabilizer tableaux, canonical Clifford resynthesis, exact group catalogs,
and nearest-Clifford distances.

The tableau rows are the conjugation images of the generators: row i is the
image of X_i, row n+i the image of Z_i, stored as x-bits | z-bits plus a sign
bit.  Catalogs hold one exact matrix per group element modulo global phase,
canonicalised as the value-lexicographically least of the 8 phase rotations.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import kernels, numeric
from .circuit import Circuit, Gate, circuit, gate, invert
from .exact import ExactUnitary, exact_simulate


class NonCliffordGateError(ValueError):
    def __init__(self, index: int, kind: str):
        super().__init__(f"gate {index} ({kind}) is not in the tableau gate set")
        self.index = index
        self.kind = kind


# ---------------------------------------------------------------------------
# tableau simulation
# ---------------------------------------------------------------------------


@dataclass
class CliffordTableau:
    n: int
    mat: np.ndarray  # (2n, 2n) uint8, columns: x-bits then z-bits
    phase: np.ndarray  # (2n,) uint8

    def copy(self):
        return CliffordTableau(self.n, self.mat.copy(), self.phase.copy())

    def __eq__(self, other):
        return (
            isinstance(other, CliffordTableau)
            and self.n == other.n
            and np.array_equal(self.mat, other.mat)
            and np.array_equal(self.phase, other.phase)
        )

    def x_part(self):
        return self.mat[:, : self.n]

    def z_part(self):
        return self.mat[:, self.n :]


def identity_tableau(n: int) -> CliffordTableau:
    return CliffordTableau(n, np.eye(2 * n, dtype=np.uint8), np.zeros(2 * n, dtype=np.uint8))


def is_valid_tableau(t: CliffordTableau) -> bool:
    """Rows anticommute exactly when their preimage generators do."""
    x, z = t.x_part(), t.z_part()
    form = (x @ z.T + z @ x.T) % 2
    n = t.n
    want = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    want[:n, n:] = np.eye(n, dtype=np.uint8)
    want[n:, :n] = np.eye(n, dtype=np.uint8)
    return np.array_equal(form % 2, want)


def _tab_apply(t: CliffordTableau, kind: str, wires: tuple[int, ...]):
    n = t.n
    m, ph = t.mat, t.phase
    if kind == "h":
        (q,) = wires
        ph ^= m[:, q] & m[:, n + q]
        m[:, [q, n + q]] = m[:, [n + q, q]]
    elif kind == "s":
        (q,) = wires
        ph ^= m[:, q] & m[:, n + q]
        m[:, n + q] ^= m[:, q]
    elif kind == "sdg":
        for _ in range(3):
            _tab_apply(t, "s", wires)
    elif kind == "x":
        (q,) = wires
        ph ^= m[:, n + q]
    elif kind == "cx":
        c, tt = wires
        ph ^= m[:, c] & m[:, n + tt] & (m[:, tt] ^ m[:, n + c] ^ 1)
        m[:, tt] ^= m[:, c]
        m[:, n + c] ^= m[:, n + tt]
    elif kind == "cz":
        c, tt = wires
        _tab_apply(t, "h", (tt,))
        _tab_apply(t, "cx", (c, tt))
        _tab_apply(t, "h", (tt,))
    else:
        raise ValueError(kind)


TABLEAU_KINDS = frozenset({"x", "h", "s", "sdg", "cx", "cz"})


def tableau_simulate(c: Circuit) -> CliffordTableau:
    t = identity_tableau(c.wires)
    for i, g in enumerate(c.gates):
        if g.kind not in TABLEAU_KINDS:
            raise NonCliffordGateError(i, g.kind)
        _tab_apply(t, g.kind, g.wires)
    return t


def _pauli_mul(p1, p2, n):
    """(x, z, t) triples with phase i^t; returns p1 * p2 (matrix product order)."""
    x1, z1, t1 = p1
    x2, z2, t2 = p2
    t = t1 + t2
    for j in range(n):
        a, b, c, d = int(x1[j]), int(z1[j]), int(x2[j]), int(z2[j])
        if a and b:
            t += d - c
        elif a:
            t += d * (2 * c - 1)
        elif b:
            t += c * (1 - 2 * d)
    return x1 ^ x2, z1 ^ z2, t % 4


def apply_tableau_to_pauli(t: CliffordTableau, x, z, sign: int):
    """Image of the Hermitian Pauli with pattern (x, z) and the given sign.

    A pattern with x_j = z_j = 1 denotes Y_j = i X_j Z_j, so expanding it as a
    product of generators contributes an extra factor i^(x.z)."""
    n = t.n
    acc = (np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8), 0)
    for j in range(n):
        if x[j]:
            row = (t.mat[j, :n].copy(), t.mat[j, n:].copy(), 2 * int(t.phase[j]))
            acc = _pauli_mul(acc, row, n)
    for j in range(n):
        if z[j]:
            row = (t.mat[n + j, :n].copy(), t.mat[n + j, n:].copy(), 2 * int(t.phase[n + j]))
            acc = _pauli_mul(acc, row, n)
    tau = (2 * sign + int((np.asarray(x) & np.asarray(z)).sum()) + acc[2]) % 4
    if tau % 2:
        raise ValueError("non-Hermitian image; invalid tableau")
    return acc[0], acc[1], tau // 2


def compose(first: CliffordTableau, second: CliffordTableau) -> CliffordTableau:
    """Tableau of (circuit of `first` followed by circuit of `second`)."""
    if first.n != second.n:
        raise ValueError("dimension mismatch")
    n = first.n
    out = identity_tableau(n)
    for r in range(2 * n):
        x, z, s = apply_tableau_to_pauli(
            second, first.mat[r, :n], first.mat[r, n:], int(first.phase[r])
        )
        out.mat[r, :n], out.mat[r, n:], out.phase[r] = x, z, s
    return out


# ---------------------------------------------------------------------------
# canonical resynthesis
# ---------------------------------------------------------------------------

RESYNTH_GATE_BOUND = 30  # documented c in the <= c*n^2 size guarantee


def canonical_circuit(t: CliffordTableau) -> Circuit:
    """Circuit over {H, S, SDG, CX, X} whose tableau equals t, with at most
    RESYNTH_GATE_BOUND * n^2 gates (column sweep on the symplectic matrix)."""
    if not is_valid_tableau(t):
        raise ValueError("invalid tableau")
    n = t.n
    m = t.copy()
    applied: list[Gate] = []

    def emit(kind, *wires):
        g = gate(kind, *wires)
        _tab_apply(m, kind, g.wires)
        applied.append(g)

    for q in range(n):
        zr = n + q  # row of the Z_q image
        xrow = lambda r, j: m.mat[r, j]
        zrow = lambda r, j: m.mat[r, n + j]

        # --- bring the Z_q image to the literal Z_q ---
        piv = next((j for j in range(q, n) if xrow(zr, j)), None)
        if piv is not None:
            for k in range(q, n):
                if k != piv and xrow(zr, k):
                    emit("cx", piv, k)
            if zrow(zr, piv):
                emit("s", piv)
            for k in range(q, n):
                if k != piv and zrow(zr, k):
                    emit("h", k)
                    emit("cx", piv, k)
                    emit("h", k)
            emit("h", piv)
        else:
            piv = next(j for j in range(q, n) if zrow(zr, j))
            for k in range(q, n):
                if k != piv and zrow(zr, k):
                    emit("cx", k, piv)
        if piv != q:
            emit("cx", q, piv)
            emit("cx", piv, q)
            emit("cx", q, piv)

        # --- bring the X_q image to the literal X_q, keeping Z_q fixed ---
        for k in range(q + 1, n):
            if xrow(q, k):
                emit("cx", q, k)
        for k in range(q + 1, n):
            if zrow(q, k):
                emit("h", k)
                emit("cx", q, k)
                emit("h", k)
        if zrow(q, q):
            emit("s", q)

    for i in range(n):
        if m.phase[n + i]:  # -Z_i: fix with X
            emit("x", i)
        if m.phase[i]:  # -X_i: fix with Z = S.S
            emit("s", i)
            emit("s", i)

    out = invert(circuit(n, applied))
    if len(out.gates) > RESYNTH_GATE_BOUND * n * n + RESYNTH_GATE_BOUND:
        raise AssertionError("resynthesis exceeded its gate bound")
    return out


# ---------------------------------------------------------------------------
# exact group catalogs
# ---------------------------------------------------------------------------


def phase_canonicalize_batch(planes: np.ndarray, ks: np.ndarray):
    """Per matrix, the value-lexicographically least of its 8 phase rotations."""
    return kernels.phase_canon_batch(planes, ks)


def flat_to_key(flat_row: np.ndarray) -> bytes:
    return flat_row.astype("<i8").tobytes()


def lexmin_row(arr: np.ndarray) -> np.ndarray:
    """Value-lexicographically least row of a 2-D int array."""
    active = np.ones(len(arr), dtype=bool)
    for col in range(arr.shape[1]):
        vals = arr[:, col]
        m = vals[active].min()
        active &= vals == m
        if active.sum() == 1:
            break
    return arr[int(np.argmax(active))]


class UnitaryCatalog:
    """Finite set of exact unitaries modulo global phase, closed under products."""

    def __init__(self, n: int, flat: np.ndarray):
        self.n = n
        self.dim = 1 << n
        self.flat = np.ascontiguousarray(flat.astype(np.int64))
        self.ks = self.flat[:, 0].copy()
        self.planes = self.flat[:, 1:].reshape(-1, 4, self.dim, self.dim).copy()
        self._index = {flat_to_key(self.flat[i]): i for i in range(len(self.flat))}
        self._numeric = None
        self._diag_mask = None

    def __len__(self):
        return len(self.flat)

    def unitary(self, i: int) -> ExactUnitary:
        return ExactUnitary(self.n, self.planes[i].copy(), int(self.ks[i]))

    def key_of(self, u: ExactUnitary) -> bytes:
        return u.canonical_bytes(phase_invariant=True)

    def lookup(self, key: bytes):
        return self._index.get(key)

    def index_of(self, u: ExactUnitary):
        return self._index.get(self.key_of(u))

    def contains(self, u: ExactUnitary) -> bool:
        return self.index_of(u) is not None

    def numeric(self) -> np.ndarray:
        if self._numeric is None:
            w = np.exp(1j * np.pi / 4)
            acc = np.zeros((len(self), self.dim, self.dim), dtype=np.complex128)
            for r in range(4):
                acc += self.planes[:, r].astype(np.float64) * w**r
            acc /= np.sqrt(2.0) ** self.ks[:, None, None]
            self._numeric = acc
        return self._numeric

    def diagonal_mask(self) -> np.ndarray:
        if self._diag_mask is None:
            off = (self.planes != 0).any(axis=1)
            eye = np.eye(self.dim, dtype=bool)
            self._diag_mask = ~(off & ~eye).any(axis=(1, 2))
        return self._diag_mask

    @classmethod
    def closure(cls, n: int, generators: list[ExactUnitary]) -> "UnitaryCatalog":
        """Breadth-first closure of the generators under products, modulo phase."""
        ident = ExactUnitary.identity(n)
        gen_planes = [(g.planes.astype(np.int64), g.k) for g in generators]
        seen: dict[bytes, np.ndarray] = {}
        frontier_flat = phase_canonicalize_batch(
            ident.planes[None, ...].astype(np.int64), np.array([ident.k], dtype=np.int64)
        )
        for row in frontier_flat:
            seen[flat_to_key(row)] = row
        frontier = frontier_flat
        dim = 1 << n
        while len(frontier):
            fplanes = frontier[:, 1:].reshape(-1, 4, dim, dim)
            fks = frontier[:, 0]
            new_rows = []
            for gp, gk in gen_planes:
                prod = kernels.ring_mm_batch(np.ascontiguousarray(fplanes), gp)
                ks = fks + gk
                prod, ks = kernels.sqrt2_reduce_batch(prod, ks.astype(np.int64))
                flat = phase_canonicalize_batch(prod, ks)
                for row in flat:
                    key = flat_to_key(row)
                    if key not in seen:
                        seen[key] = row
                        new_rows.append(row)
            if not new_rows:
                break
            frontier = np.stack(new_rows)
        order = sorted(seen)
        flat = np.stack([seen[k] for k in order])
        return cls(n, flat)

    def save(self, path: str):
        tmp = path + ".tmp"
        np.save(tmp + ".npy", self.flat.astype("<i8"))
        os.replace(tmp + ".npy", path)

    @classmethod
    def load(cls, n: int, path: str) -> "UnitaryCatalog":
        return cls(n, np.load(path))


def clifford_generators(n: int) -> list[ExactUnitary]:
    gens = []
    for i in range(n):
        gens.append(exact_simulate(circuit(n, [gate("h", i)])))
        gens.append(exact_simulate(circuit(n, [gate("s", i)])))
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(exact_simulate(circuit(n, [gate("cx", i, j)])))
    return gens


CLIFFORD_GROUP_SIZES = {1: 24, 2: 11520}
_catalog_memo: dict[tuple, UnitaryCatalog] = {}


def enumerate_clifford_group(n: int, cache_dir: str | None = None) -> UnitaryCatalog:
    """All n-qubit Cliffords modulo global phase (24 for n=1, 11520 for n=2)."""
    if n not in (1, 2):
        raise ValueError("catalog enumeration is limited to n in {1, 2}")
    memo_key = ("clifford", n)
    if memo_key in _catalog_memo:
        return _catalog_memo[memo_key]
    cat = None
    path = None
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, f"clifford_catalog_n{n}.npy")
        if os.path.exists(path):
            cat = UnitaryCatalog.load(n, path)
    if cat is None:
        cat = UnitaryCatalog.closure(n, clifford_generators(n))
        if path is not None:
            cat.save(path)
    if len(cat) != CLIFFORD_GROUP_SIZES[n]:
        raise AssertionError(
            f"catalog for n={n} has {len(cat)} elements, expected {CLIFFORD_GROUP_SIZES[n]}"
        )
    _catalog_memo[memo_key] = cat
    return cat


# ---------------------------------------------------------------------------
# nearest-Clifford distance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NearestClifford:
    distance: float
    alpha: float
    index: int
    witness: ExactUnitary


def nearest_diagonal_clifford_distance(thetas: np.ndarray) -> float:
    """Exact min over diagonal m-qubit Cliffords (and global phase) of the
    operator distance to diag(e^{i thetas}).

    Diagonal Cliffords have phases (pi/2)(sum a_i b_i + 2 sum_{i<j} c_ij b_i b_j)
    with a_i in Z4, c_ij in Z2; for two diagonal unitaries the phase-minimised
    operator distance is 2 sin(W/4), W the width of the smallest arc holding
    the phase differences."""
    thetas = np.asarray(thetas, dtype=np.float64)
    size = thetas.shape[0]
    m = size.bit_length() - 1
    if 1 << m != size:
        raise ValueError("phase vector length must be a power of two")
    if m > 5:
        raise ValueError("diagonal scan limited to 5 qubits")
    bits = ((np.arange(size)[:, None] >> np.arange(m)[None, :]) & 1).astype(np.int64)
    pair_cols = []
    for i in range(m):
        for j in range(i + 1, m):
            pair_cols.append(bits[:, i] & bits[:, j])
    npairs = len(pair_cols)
    pairs = (
        np.stack(pair_cols, axis=1) if npairs else np.zeros((size, 0), dtype=np.int64)
    )
    a_all = ((np.arange(4**m)[:, None] >> (2 * np.arange(m))[None, :]) & 3).astype(
        np.int64
    )
    lin_all = a_all @ bits.T  # (4^m, size)
    best = np.inf
    for cbits in range(1 << npairs):
        cvec = ((cbits >> np.arange(npairs)) & 1).astype(np.int64)
        quad = 2 * (pairs @ cvec)  # (size,)
        phis = (np.pi / 2) * (lin_all + quad[None, :])
        deltas = np.mod(thetas[None, :] - phis, 2 * np.pi)
        deltas.sort(axis=1)
        gaps = np.diff(deltas, axis=1)
        wrap = (deltas[:, 0] + 2 * np.pi - deltas[:, -1])[:, None]
        maxgap = np.concatenate([gaps, wrap], axis=1).max(axis=1)
        width = 2 * np.pi - maxgap
        cand = 2 * np.sin(np.minimum(width, 2 * np.pi) / 4).min()
        best = min(best, float(cand))
    return best


def nearest_clifford_distance(
    u, catalog: UnitaryCatalog | None = None, n: int | None = None, mask=None
) -> NearestClifford:
    """Minimum of phase_min_distance(u, V) over the catalog (optionally masked).

    Candidates are scanned in order of a Frobenius-trace lower bound, so only
    the few that could beat the running minimum pay for an exact evaluation;
    the result is identical to the full scan.
    """
    if isinstance(u, ExactUnitary):
        if n is None:
            n = u.n
        unum = u.to_numpy()
    else:
        unum = np.asarray(u, dtype=np.complex128)
        if n is None:
            n = unum.shape[0].bit_length() - 1
    if catalog is None:
        catalog = enumerate_clifford_group(n)
    vnum = catalog.numeric()
    lb = numeric.frobenius_phase_lower_bound(unum, vnum)
    indices = np.arange(len(catalog))
    if mask is not None:
        indices = indices[np.asarray(mask, dtype=bool)]
    if indices.size == 0:
        raise ValueError("no catalog candidates after masking")
    order = indices[np.argsort(lb[indices], kind="stable")]
    best = (np.inf, 0.0, -1)
    slack = 1e-9
    for g in order:
        if lb[g] >= best[0] + slack:
            break
        dist, alpha = numeric.phase_min_distance(unum, vnum[g])
        if dist < best[0]:
            best = (dist, alpha, int(g))
    return NearestClifford(best[0], best[1], best[2], catalog.unitary(best[2]))
