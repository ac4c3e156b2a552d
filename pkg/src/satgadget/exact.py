"""Exact linear algebra over Z[w, 1/sqrt(2)], w = exp(i*pi/4).

Every circuit over {X, H, S, S*, T, T*, CX, CZ, CCX} has a unitary whose
entries live in this ring, so equality, Cliffordness, diagonality and Pauli
membership are decidable instead of approximate.  Coefficients are unbounded:
the fast int64 path promotes to Python integers before it can overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import Circuit

MAX_SIM_QUBITS = 10
MAX_CLIFFORD_TEST_QUBITS = 8


class SimulationError(ValueError):
    pass


def _rot1(planes):
    """Multiply by w: (a, b, c, d) -> (-d, a, b, c) on the plane axis."""
    return np.stack([-planes[3], planes[0], planes[1], planes[2]])


def _rot(planes, j: int):
    j %= 8
    if j >= 4:
        planes = -planes
        j -= 4
    for _ in range(j):
        planes = _rot1(planes)
    return planes


class RingElement:
    """Scalar (a + b*w + c*w^2 + d*w^3) / sqrt(2)^k in canonical form."""

    __slots__ = ("a", "b", "c", "d", "k")

    def __init__(self, a: int, b: int, c: int, d: int, k: int = 0):
        if k < 0:
            raise ValueError("negative denominator exponent")
        if a == b == c == d == 0:
            k = 0
        while k > 0 and (a + c) % 2 == 0 and (b + d) % 2 == 0:
            a, b, c, d = (b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2
            k -= 1
        self.a, self.b, self.c, self.d, self.k = a, b, c, d, k

    @classmethod
    def zero(cls):
        return cls(0, 0, 0, 0)

    @classmethod
    def one(cls):
        return cls(1, 0, 0, 0)

    @classmethod
    def omega(cls, j: int = 1):
        planes = [0, 0, 0, 0]
        j %= 8
        sign = 1
        if j >= 4:
            sign, j = -1, j - 4
        planes[j] = sign
        return cls(*planes)

    @classmethod
    def sqrt2(cls):
        return cls(0, 1, 0, -1)

    def coeffs(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.coeffs() == other.coeffs() and self.k == other.k

    def __hash__(self):
        return hash((self.coeffs(), self.k))

    def __add__(self, other):
        k = max(self.k, other.k)
        x = self._scaled_coeffs(k - self.k)
        y = other._scaled_coeffs(k - other.k)
        return RingElement(*(p + q for p, q in zip(x, y)), k=k)

    def __neg__(self):
        return RingElement(-self.a, -self.b, -self.c, -self.d, self.k)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        a1, b1, c1, d1 = self.coeffs()
        a2, b2, c2, d2 = other.coeffs()
        # convolution mod w^4 = -1
        a = a1 * a2 - b1 * d2 - c1 * c2 - d1 * b2
        b = a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2
        c = a1 * c2 + b1 * b2 + c1 * a2 - d1 * d2
        d = a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2
        return RingElement(a, b, c, d, self.k + other.k)

    def conj(self):
        return RingElement(self.a, -self.d, -self.c, -self.b, self.k)

    def _scaled_coeffs(self, times: int):
        a, b, c, d = self.coeffs()
        for _ in range(times):  # multiply by sqrt(2) = w - w^3
            a, b, c, d = b - d, a + c, b + d, c - a
        return (a, b, c, d)

    def value(self) -> complex:
        w = np.exp(1j * np.pi / 4)
        return (self.a + self.b * w + self.c * w**2 + self.d * w**3) / np.sqrt(2) ** self.k

    def is_zero(self) -> bool:
        return self.coeffs() == (0, 0, 0, 0)

    def __repr__(self):
        return f"RingElement({self.a}, {self.b}, {self.c}, {self.d}, k={self.k})"


@dataclass(frozen=True)
class PauliOperator:
    """i^phase * X^x * Z^z as an n-qubit tensor; bits are little-endian tuples."""

    phase: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        if len(self.x) != len(self.z):
            raise ValueError("x and z bit vectors must have equal length")
        if self.phase not in (0, 1, 2, 3):
            raise ValueError("phase exponent must be in 0..3")

    @property
    def n(self) -> int:
        return len(self.x)

    def x_mask(self) -> int:
        return sum(b << i for i, b in enumerate(self.x))

    def z_mask(self) -> int:
        return sum(b << i for i, b in enumerate(self.z))

    @classmethod
    def single(cls, n: int, wire: int, axis: str, phase: int = 0):
        x = [0] * n
        z = [0] * n
        if axis in ("x", "y"):
            x[wire] = 1
        if axis in ("z", "y"):
            z[wire] = 1
        return cls(phase, tuple(x), tuple(z))


class ExactUnitary:
    """Dense 2^n x 2^n matrix of ring entries with a shared denominator exponent."""

    __slots__ = ("n", "planes", "k")

    def __init__(self, n: int, planes, k: int):
        planes, k = kernels.sqrt2_reduce(planes, k)
        self.n = n
        self.planes = planes
        self.k = k

    @property
    def dim(self) -> int:
        return 1 << self.n

    @classmethod
    def identity(cls, n: int):
        N = 1 << n
        planes = np.zeros((4, N, N), dtype=np.int64)
        planes[0] = np.eye(N, dtype=np.int64)
        return cls(n, planes, 0)

    def mul(self, other: "ExactUnitary") -> "ExactUnitary":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        planes = kernels.ring_mm(self.planes, other.planes)
        return ExactUnitary(self.n, planes, self.k + other.k)

    def __matmul__(self, other):
        return self.mul(other)

    def dagger(self) -> "ExactUnitary":
        p = self.planes
        planes = np.stack([p[0], -p[3], -p[2], -p[1]]).transpose(0, 2, 1).copy()
        return ExactUnitary(self.n, planes, self.k)

    def times_omega(self, j: int) -> "ExactUnitary":
        return ExactUnitary(self.n, _rot(self.planes, j), self.k)

    def entry(self, i: int, j: int) -> RingElement:
        a, b, c, d = (int(v) for v in self.planes[:, i, j])
        return RingElement(a, b, c, d, self.k)

    def __eq__(self, other):
        if not isinstance(other, ExactUnitary):
            return NotImplemented
        return (
            self.n == other.n
            and self.k == other.k
            and np.array_equal(self.planes, other.planes)
        )

    def __hash__(self):
        return hash(self.canonical_bytes(phase_invariant=False))

    def canonical_bytes(self, phase_invariant: bool = True) -> bytes:
        """Deterministic byte key; with phase_invariant, the value-lexicographic
        least of the 8 phase rotations (consistent with the batched helper)."""
        if self.planes.dtype != np.int64:
            raise TypeError("canonical bytes require int64 planes")
        flat = np.concatenate([[self.k], self.planes.ravel()]).astype("<i8")
        if not phase_invariant:
            return flat.tobytes()
        best = tuple(flat)
        planes = self.planes
        for _ in range(7):
            planes = _rot1(planes)
            cand = tuple(np.concatenate([[self.k], planes.ravel()]))
            if cand < best:
                best = cand
        return np.array(best, dtype="<i8").tobytes()

    def to_numpy(self):
        w = np.exp(1j * np.pi / 4)
        acc = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for r in range(4):
            acc += np.asarray(self.planes[r], dtype=np.float64) * w**r
        return acc / np.sqrt(2) ** self.k

    def debug_json(self):
        return [
            [list(map(int, self.planes[:, i, j])) + [self.k] for j in range(self.dim)]
            for i in range(self.dim)
        ]

    def __repr__(self):
        return f"ExactUnitary(n={self.n}, k={self.k})"


def _promote_if_needed(planes, headroom: int = 2):
    if planes.dtype == np.int64 and kernels.max_abs(planes) >= (1 << 62) // headroom:
        return planes.astype(object)
    return planes


def _apply_gate(planes, k, kind, wires, n):
    N = 1 << n
    idx = np.arange(N)
    if kind == "x":
        perm = idx ^ (1 << wires[0])
        return planes[:, perm, :], k
    if kind == "cx":
        c, t = wires
        perm = idx ^ (((idx >> c) & 1) << t)
        return planes[:, perm, :], k
    if kind == "ccx":
        c1, c2, t = wires
        perm = idx ^ ((((idx >> c1) & (idx >> c2)) & 1) << t)
        return planes[:, perm, :], k
    if kind == "cz":
        c1, c2 = wires
        rows = (((idx >> c1) & (idx >> c2)) & 1).astype(bool)
        planes = planes.copy()
        planes[:, rows, :] = -planes[:, rows, :]
        return planes, k
    if kind in ("s", "sdg", "t", "tdg"):
        rows = ((idx >> wires[0]) & 1).astype(bool)
        j = {"t": 1, "s": 2, "sdg": 6, "tdg": 7}[kind]
        planes = planes.copy()
        planes[:, rows, :] = _rot(planes[:, rows, :], j)
        return planes, k
    if kind == "h":
        planes = _promote_if_needed(planes)
        bit = 1 << wires[0]
        lo = idx[(idx & bit) == 0]
        hi = lo | bit
        out = planes.copy()
        out[:, lo, :] = planes[:, lo, :] + planes[:, hi, :]
        out[:, hi, :] = planes[:, lo, :] - planes[:, hi, :]
        return kernels.sqrt2_reduce(out, k + 1)
    raise SimulationError(f"gate kind {kind!r} has no exact matrix")


def exact_simulate(c: Circuit) -> ExactUnitary:
    """Exact unitary of a circuit, gates applied in list order."""
    if c.wires > MAX_SIM_QUBITS:
        raise SimulationError(f"{c.wires} wires exceeds exact limit {MAX_SIM_QUBITS}")
    for g in c.gates:
        if g.kind in ("g", "gdg"):
            raise SimulationError("circuit contains unresolved g/gdg gates")
    N = 1 << c.wires
    planes = np.zeros((4, N, N), dtype=np.int64)
    planes[0] = np.eye(N, dtype=np.int64)
    k = 0
    for g in c.gates:
        planes, k = _apply_gate(planes, k, g.kind, g.wires, c.wires)
    return ExactUnitary(c.wires, planes, k)


def is_unitary_exact(u: ExactUnitary) -> bool:
    return u.mul(u.dagger()) == ExactUnitary.identity(u.n)


def equal_up_to_phase(u: ExactUnitary, v: ExactUnitary):
    """Exponent j with U = w^j V exactly, else None. Candidate j is read off
    the first nonzero entry of V."""
    if u.n != v.n:
        raise ValueError("dimension mismatch")
    if u.k != v.k:
        return None
    nz = np.argwhere((v.planes != 0).any(axis=0))
    if nz.size == 0:
        return 0 if not u.planes.any() else None
    i, j = nz[0]
    v0 = v.planes[:, i, j]
    u0 = u.planes[:, i, j]
    cand = None
    probe = v0
    for r in range(8):
        if np.array_equal(u0, probe):
            cand = r
            break
        probe = _rot1(probe.reshape(4, 1, 1)).reshape(4)
    if cand is None:
        return None
    if np.array_equal(u.planes, _rot(v.planes, cand)):
        return cand
    return None


def apply_pauli_left(p: PauliOperator, u: ExactUnitary) -> ExactUnitary:
    """P . U via row permutation, per-row signs, and a global i^phase."""
    if p.n != u.n:
        raise ValueError("dimension mismatch")
    N = u.dim
    idx = np.arange(N)
    xm, zm = p.x_mask(), p.z_mask()
    rows = idx ^ xm
    planes = u.planes[:, rows, :].copy()
    signs = np.bitwise_count(rows & zm) & 1  # (-1)^(z . source row)
    neg = signs.astype(bool)
    planes[:, neg, :] = -planes[:, neg, :]
    planes = _rot(planes, 2 * p.phase)  # i = w^2
    return ExactUnitary(u.n, planes, u.k)


def _parse_pauli(m: ExactUnitary):
    if m.k != 0:
        return None
    N = m.dim
    nz = (m.planes != 0).any(axis=0)
    if not (nz.sum(axis=0) == 1).all() or not (nz.sum(axis=1) == 1).all():
        return None
    rows = np.argmax(nz, axis=0)
    x_mask = int(rows[0])
    if not np.array_equal(rows, np.arange(N) ^ x_mask):
        return None
    vals = m.planes[:, rows, np.arange(N)]
    if m.planes.dtype == object:
        vals = np.array([[int(v) for v in row] for row in vals], dtype=np.int64)
    if vals[1].any() or vals[3].any():
        return None
    if not np.isin(vals[0], (-1, 0, 1)).all() or not np.isin(vals[2], (-1, 0, 1)).all():
        return None
    # i^m per column: 1, i, -1, -i
    mexp = np.full(N, -1, dtype=np.int64)
    mexp[vals[0] == 1] = 0
    mexp[vals[2] == 1] = 1
    mexp[vals[0] == -1] = 2
    mexp[vals[2] == -1] = 3
    if (mexp < 0).any():
        return None
    phase = int(mexp[0])
    z_bits = []
    for j in range(m.n):
        diff = (int(mexp[1 << j]) - phase) % 4
        if diff not in (0, 2):
            return None
        z_bits.append(diff // 2)
    z_mask = sum(b << i for i, b in enumerate(z_bits))
    expect = (phase + 2 * (np.bitwise_count(np.arange(N) & z_mask) & 1)) % 4
    if not np.array_equal(mexp, expect):
        return None
    x_bits = tuple((x_mask >> i) & 1 for i in range(m.n))
    return PauliOperator(phase, x_bits, tuple(z_bits))


def pauli_conjugate(c: ExactUnitary, p: PauliOperator):
    """C* P C as a PauliOperator, or None when the result leaves the Pauli group."""
    m = c.dagger().mul(apply_pauli_left(p, c))
    return _parse_pauli(m)


def is_clifford_exact(c: ExactUnitary) -> bool:
    """True iff conjugation maps every X_i, Z_i generator back into the Pauli group."""
    if c.n > MAX_CLIFFORD_TEST_QUBITS:
        raise ValueError(f"Clifford test limited to {MAX_CLIFFORD_TEST_QUBITS} qubits")
    for i in range(c.n):
        for axis in ("x", "z"):
            if pauli_conjugate(c, PauliOperator.single(c.n, i, axis)) is None:
                return False
    return True


def _normalize_entry_stack(vals, k: int):
    """Scalar-canonicalise columns of a (4, N) coefficient stack sharing exponent k."""
    vals = vals.copy()
    ks = np.full(vals.shape[1], k, dtype=np.int64)
    ks[~vals.any(axis=0)] = 0
    while True:
        a, b, c, d = vals
        odd = ((a + c) | (b + d)) & 1
        mask = (odd == 0) & (ks > 0)
        if not mask.any():
            return vals, ks
        a, b, c, d = vals[:, mask]
        vals[:, mask] = np.stack([(b - d) >> 1, (a + c) >> 1, (b + d) >> 1, (c - a) >> 1])
        ks[mask] -= 1


_EIGHTH_ROOT_COEFFS = {
    (1, 0, 0, 0): 0,
    (0, 1, 0, 0): 1,
    (0, 0, 1, 0): 2,
    (0, 0, 0, 1): 3,
    (-1, 0, 0, 0): 4,
    (0, -1, 0, 0): 5,
    (0, 0, -1, 0): 6,
    (0, 0, 0, -1): 7,
}


def _eighth_root_exponents(vals, k: int):
    """Exponents e with entries = w^e, else None.  vals is a (4, N) stack."""
    if vals.dtype == object:
        # arbitrary-precision path: canonicalise entry by entry
        out = []
        for j in range(vals.shape[1]):
            el = RingElement(*(int(v) for v in vals[:, j]), k=k)
            if el.k != 0 or el.coeffs() not in _EIGHTH_ROOT_COEFFS:
                return None
            out.append(_EIGHTH_ROOT_COEFFS[el.coeffs()])
        return np.array(out, dtype=np.int64)
    vals, ks = _normalize_entry_stack(vals, k)
    if ks.any():
        return None
    nzcount = (vals != 0).sum(axis=0)
    if not (nzcount == 1).all():
        return None
    plane = np.argmax(vals != 0, axis=0)
    picked = vals[plane, np.arange(vals.shape[1])]
    if not np.isin(picked, (-1, 1)).all():
        return None
    return (plane + 4 * (picked == -1)) % 8


def is_generalized_permutation(u: ExactUnitary) -> bool:
    """Exactly one nonzero entry per row/column, every such entry a power of w."""
    nz = (u.planes != 0).any(axis=0)
    if not (nz.sum(axis=0) == 1).all() or not (nz.sum(axis=1) == 1).all():
        return False
    rows = np.argmax(nz, axis=0)
    vals = u.planes[:, rows, np.arange(u.dim)]
    return _eighth_root_exponents(vals, u.k) is not None


def phase_profile(u: ExactUnitary):
    """Exponent vector e(x) mod 8 of a diagonal eighth-root unitary, else None."""
    offdiag = (u.planes != 0).any(axis=0)
    np.fill_diagonal(offdiag, False)
    if offdiag.any():
        return None
    vals = u.planes[:, np.arange(u.dim), np.arange(u.dim)]
    return _eighth_root_exponents(vals, u.k)
