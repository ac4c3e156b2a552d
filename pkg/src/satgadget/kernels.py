"""Integer kernels for matrices over the ring Z[w, 1/sqrt(2)], w = exp(i*pi/4).

A matrix is stored as four coefficient planes of shape (4, N, M): plane r
holds the integer coefficients of w^r, and a separate exponent k scales the
whole matrix by 1/sqrt(2)^k.  Products use w^4 = -1.

Two execution paths produce bit-identical results:

* ``_ringkernel`` -- compiled extension built from ``_ringkernel.pyx``
* numpy fallback  -- used when the extension is missing or when
  ``SATGADGET_NO_EXT`` is set

Entries are int64 on the fast path.  Callers that may overflow int64 must
promote to object-dtype planes (arbitrary precision); ``ring_mm`` does this
automatically based on a worst-case magnitude bound.
"""

from __future__ import annotations

import os

import numpy as np

try:
    if os.environ.get("SATGADGET_NO_EXT"):
        _ext = None
    else:
        from . import _ringkernel as _ext
except ImportError:
    _ext = None

HAVE_EXT = _ext is not None
BACKEND = "compiled" if HAVE_EXT else "numpy"

# Largest |coefficient| allowed in an int64 product: the product bound is
# 4 * N * maxA * maxB and must stay below 2^62.
_I64_LIMIT = 1 << 62


def max_abs(coeffs) -> int:
    if coeffs.size == 0:
        return 0
    if coeffs.dtype == object:
        return max(abs(int(v)) for v in coeffs.flat)
    return int(np.abs(coeffs).max())


def product_fits_i64(a, b) -> bool:
    if a.dtype != np.int64 or b.dtype != np.int64:
        return False
    n = a.shape[-1]
    return 4 * n * max(1, max_abs(a)) * max(1, max_abs(b)) < _I64_LIMIT


def _mm_np(a, b):
    n, m = a.shape[1], b.shape[2]
    dtype = np.int64 if a.dtype == np.int64 and b.dtype == np.int64 else object
    c = np.zeros((4, n, m), dtype=dtype)
    for r in range(4):
        if not a[r].any():
            continue
        for s in range(4):
            if not b[s].any():
                continue
            term = np.dot(a[r], b[s])
            t = (r + s) % 4
            if r + s >= 4:
                c[t] -= term
            else:
                c[t] += term
    return c


def ring_mm(a, b):
    """Ring matrix product of coefficient planes (exponents handled by caller)."""
    if a.dtype == np.int64 and b.dtype == np.int64:
        if product_fits_i64(a, b):
            if _ext is not None:
                c = np.zeros((4, a.shape[1], b.shape[2]), dtype=np.int64)
                _ext.mm(np.ascontiguousarray(a), np.ascontiguousarray(b), c)
                return c
            return _mm_np(a, b)
        a = a.astype(object)
        b = b.astype(object)
    return _mm_np(a, b)


def ring_mm_batch(abatch, b):
    """Products C_g = A_g . B for a stack A of shape (G, 4, N, N), int64 only."""
    if abatch.dtype != np.int64 or b.dtype != np.int64:
        raise TypeError("batched ring products require int64 planes")
    n = abatch.shape[-1]
    if 4 * n * max(1, max_abs(abatch)) * max(1, max_abs(b)) >= _I64_LIMIT:
        raise OverflowError("batched ring product would overflow int64")
    g = abatch.shape[0]
    out = np.zeros((g, 4, n, b.shape[-1]), dtype=np.int64)
    if _ext is not None:
        _ext.mm_batch(np.ascontiguousarray(abatch), np.ascontiguousarray(b), out)
        return out
    for r in range(4):
        for s in range(4):
            term = np.matmul(abatch[:, r], b[s])
            t = (r + s) % 4
            if r + s >= 4:
                out[:, t] -= term
            else:
                out[:, t] += term
    return out


def ring_mm_batch_left(a, bbatch):
    """Products C_g = A . B_g for a single left factor, int64 only."""
    if a.dtype != np.int64 or bbatch.dtype != np.int64:
        raise TypeError("batched ring products require int64 planes")
    n = a.shape[-1]
    if 4 * n * max(1, max_abs(a)) * max(1, max_abs(bbatch)) >= _I64_LIMIT:
        raise OverflowError("batched ring product would overflow int64")
    g = bbatch.shape[0]
    out = np.zeros((g, 4, a.shape[1], bbatch.shape[-1]), dtype=np.int64)
    if _ext is not None:
        _ext.mm_batch_left(np.ascontiguousarray(a), np.ascontiguousarray(bbatch), out)
        return out
    for r in range(4):
        for s in range(4):
            term = np.matmul(a[r], bbatch[:, s])
            t = (r + s) % 4
            if r + s >= 4:
                out[:, t] -= term
            else:
                out[:, t] += term
    return out


def _rot1_batch(planes):
    return np.stack([-planes[:, 3], planes[:, 0], planes[:, 1], planes[:, 2]], axis=1)


def phase_canon_batch(planes: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """Per matrix, the value-lexicographically least of its 8 phase rotations.

    Returns a flat (B, 1 + 4*N*N) int64 array whose rows are (k, planes...)."""
    if planes.dtype != np.int64:
        raise TypeError("phase canonicalisation requires int64 planes")
    b = planes.shape[0]
    f = planes[0].size
    if _ext is not None:
        out = np.empty((b, f + 1), dtype=np.int64)
        _ext.phase_canon(
            np.ascontiguousarray(planes), np.ascontiguousarray(ks.astype(np.int64)), out
        )
        return out
    cands = np.empty((b, 8, f + 1), dtype=np.int64)
    cur = planes
    for j in range(8):
        if j:
            cur = _rot1_batch(cur)
        cands[:, j, 0] = ks
        cands[:, j, 1:] = cur.reshape(b, f)
    active = np.ones((b, 8), dtype=bool)
    big = np.iinfo(np.int64).max
    for col in range(1, f + 1):  # k column is phase-invariant, skip it
        vals = cands[:, :, col]
        masked = np.where(active, vals, big)
        mn = masked.min(axis=1)
        active &= vals == mn[:, None]
        if (active.sum(axis=1) == 1).all():
            break
    chosen = np.argmax(active, axis=1)
    return cands[np.arange(b), chosen]


def _divisible(coeffs) -> bool:
    a, b, c, d = coeffs
    return not (((a + c) & 1).any() or ((b + d) & 1).any())


def _divide(coeffs):
    a, b, c, d = coeffs
    return np.stack([(b - d) >> 1, (a + c) >> 1, (b + d) >> 1, (c - a) >> 1])


def sqrt2_reduce(coeffs, k: int):
    """Canonical form: k = 0 or the matrix is not divisible by sqrt(2)."""
    if not coeffs.any():
        return coeffs, 0
    while k > 0 and _divisible(coeffs):
        coeffs = _divide(coeffs)
        k -= 1
    return coeffs, k


def sqrt2_reduce_batch(coeffs, ks):
    """In-place canonical reduction of a stack (G, 4, N, N) with exponents (G,)."""
    if coeffs.dtype != np.int64:
        raise TypeError("batched reduction requires int64 planes")
    if _ext is not None:
        if not coeffs.flags.c_contiguous or not ks.flags.c_contiguous:
            coeffs = np.ascontiguousarray(coeffs)
            ks = np.ascontiguousarray(ks)
        _ext.reduce_batch(coeffs, ks)
        return coeffs, ks
    g = coeffs.shape[0]
    flat = coeffs.reshape(g, -1)
    ks[~flat.any(axis=1)] = 0
    while True:
        a, b, c, d = coeffs[:, 0], coeffs[:, 1], coeffs[:, 2], coeffs[:, 3]
        odd = (((a + c) | (b + d)) & 1).reshape(g, -1).any(axis=1)
        mask = ~odd & (ks > 0)
        if not mask.any():
            return coeffs, ks
        sub = coeffs[mask]
        a, b, c, d = sub[:, 0], sub[:, 1], sub[:, 2], sub[:, 3]
        coeffs[mask] = np.stack(
            [(b - d) >> 1, (a + c) >> 1, (b + d) >> 1, (c - a) >> 1], axis=1
        )
        ks[mask] -= 1
