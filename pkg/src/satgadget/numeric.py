"""Floating-point unitary analysis: operator norms, phase-minimised distances,
and single-qubit separability.  Used where exact ring arithmetic cannot reach
(the gate-set-G translation and its thresholds)."""

from __future__ import annotations

import numpy as np

from .circuit import Circuit

UNITARITY_TOL = 1e-9
GRID_POINTS = 512
ALPHA_TOL = 1e-9
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class NonConvergenceError(RuntimeError):
    pass


def assert_unitary(m: np.ndarray, tol: float = UNITARITY_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    d = m.shape[0]
    err = operator_norm(m.conj().T @ m - np.eye(d))
    if err > tol:
        raise ValueError(f"matrix is not unitary within {tol} (defect {err:.3e})")
    return m


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    m = np.asarray(m, dtype=np.complex128)
    if m.size == 0:
        return 0.0
    try:
        return float(np.linalg.svd(m, compute_uv=False)[0])
    except np.linalg.LinAlgError as e:  # LAPACK iteration failed to converge
        raise NonConvergenceError(f"singular value iteration failed: {e}") from e


def _grid_norms(u, v, alphas):
    diff = u[None, :, :] - np.exp(1j * alphas)[:, None, None] * v[None, :, :]
    try:
        return np.linalg.svd(diff, compute_uv=False)[:, 0]
    except np.linalg.LinAlgError as e:
        raise NonConvergenceError(f"singular value iteration failed: {e}") from e


def phase_min_distance(u: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    """min over alpha of ||U - e^{i alpha} V||_inf and the minimising alpha.

    A 512-point grid brackets the minimum; golden-section refinement narrows
    alpha to 1e-9.  Distances are accurate to ~1e-7.
    """
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    if u.shape != v.shape:
        raise ValueError("dimension mismatch")
    alphas = 2 * np.pi * np.arange(GRID_POINTS) / GRID_POINTS
    norms = _grid_norms(u, v, alphas)
    i = int(np.argmin(norms))
    step = 2 * np.pi / GRID_POINTS
    lo, hi = alphas[i] - step, alphas[i] + step

    def g(a):
        return operator_norm(u - np.exp(1j * a) * v)

    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = g(x1), g(x2)
    while hi - lo > ALPHA_TOL:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = g(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = g(x2)
    alpha = (lo + hi) / 2
    return g(alpha), float(alpha % (2 * np.pi))


def frobenius_phase_lower_bound(u: np.ndarray, vstack: np.ndarray) -> np.ndarray:
    """Lower bounds on phase_min_distance(u, V_g): sqrt((2d - 2|tr(V_g* u)|)/d).

    Follows from min_a ||M_a||_F^2 = 2d - 2|tr| and ||M||_inf >= ||M||_F/sqrt(d).
    """
    d = u.shape[0]
    traces = np.abs(np.einsum("gij,ij->g", vstack.conj(), u))
    return np.sqrt(np.maximum(0.0, (2 * d - 2 * traces) / d))


def is_product_of_single_qubit(u: np.ndarray, tol: float = 1e-7):
    """Single-qubit factors (wire 0 first) whose tensor product matches u up to
    global phase within tol, else None.

    Peels one wire at a time by testing unit operator-Schmidt rank of the
    (4 x 4^{n-1}) coefficient matrix for the {wire} | {rest} bipartition.
    """
    u = np.asarray(u, dtype=np.complex128)
    d = u.shape[0]
    n = d.bit_length() - 1
    if 1 << n != d:
        raise ValueError("dimension must be a power of two")
    factors: list[np.ndarray] = []
    rest = u
    for _ in range(n - 1):
        r = rest.shape[0] // 2
        m = rest.reshape(r, 2, r, 2).transpose(1, 3, 0, 2).reshape(4, r * r)
        uu, svals, vh = np.linalg.svd(m)
        if svals[1] > tol:
            return None
        factor = np.sqrt(2.0) * uu[:, 0].reshape(2, 2)
        rest = (svals[0] / np.sqrt(2.0)) * vh[0].reshape(r, r)
        factors.append(factor)
    factors.append(rest)
    recon = factors[-1]
    for f in reversed(factors[:-1]):
        recon = np.kron(recon, f)
    dist, _ = phase_min_distance(u, recon)
    if dist > tol:
        return None
    return factors


_W = np.exp(1j * np.pi / 4)
GATE_MATRICES = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "h": np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2),
    "s": np.diag([1, 1j]).astype(np.complex128),
    "sdg": np.diag([1, -1j]).astype(np.complex128),
    "t": np.diag([1, _W]).astype(np.complex128),
    "tdg": np.diag([1, np.conj(_W)]).astype(np.complex128),
}


def _apply_1q(acc: np.ndarray, m: np.ndarray, wire: int) -> np.ndarray:
    idx = np.arange(acc.shape[0])
    lo = idx[(idx >> wire) & 1 == 0]
    hi = lo | (1 << wire)
    out = acc.copy()
    out[lo, :] = m[0, 0] * acc[lo, :] + m[0, 1] * acc[hi, :]
    out[hi, :] = m[1, 0] * acc[lo, :] + m[1, 1] * acc[hi, :]
    return out


def numeric_simulate(c: Circuit, gate_matrix: np.ndarray | None = None) -> np.ndarray:
    """Complex unitary of a circuit; g/gdg resolve against gate_matrix."""
    N = 1 << c.wires
    acc = np.eye(N, dtype=np.complex128)
    idx = np.arange(N)
    for g in c.gates:
        if g.kind in ("g", "gdg"):
            if gate_matrix is None:
                raise ValueError("circuit contains g/gdg but no gate matrix given")
            m = gate_matrix if g.kind == "g" else gate_matrix.conj().T
            acc = _apply_1q(acc, m, g.wires[0])
        elif g.kind in GATE_MATRICES:
            acc = _apply_1q(acc, GATE_MATRICES[g.kind], g.wires[0])
        elif g.kind == "cx":
            cw, t = g.wires
            perm = idx ^ (((idx >> cw) & 1) << t)
            acc = acc[perm, :]
        elif g.kind == "ccx":
            c1, c2, t = g.wires
            perm = idx ^ ((((idx >> c1) & (idx >> c2)) & 1) << t)
            acc = acc[perm, :]
        elif g.kind == "cz":
            c1, c2 = g.wires
            rows = (((idx >> c1) & (idx >> c2)) & 1).astype(bool)
            acc = acc.copy()
            acc[rows, :] *= -1
        else:
            raise ValueError(f"unhandled gate kind {g.kind}")
    return acc
