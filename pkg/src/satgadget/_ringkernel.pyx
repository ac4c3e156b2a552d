# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for ring-coefficient matrices (int64 planes of 1, w, w^2,
w^3 with w = exp(i*pi/4)).  Semantics match the numpy fallbacks in kernels.py
bit for bit; callers guarantee int64 ranges."""


def mm(const long long[:, :, ::1] a, const long long[:, :, ::1] b,
       long long[:, :, ::1] out):
    cdef Py_ssize_t n = a.shape[1], l = a.shape[2], m = b.shape[2]
    cdef Py_ssize_t r, s, t, i, k, j
    cdef long long av, sgn
    for r in range(4):
        for s in range(4):
            t = (r + s) & 3
            sgn = 1 if r + s < 4 else -1
            for i in range(n):
                for k in range(l):
                    av = a[r, i, k]
                    if av == 0:
                        continue
                    av = av * sgn
                    for j in range(m):
                        out[t, i, j] += av * b[s, k, j]


def mm_batch(const long long[:, :, :, ::1] abatch, const long long[:, :, ::1] b,
             long long[:, :, :, ::1] out):
    cdef Py_ssize_t g
    for g in range(abatch.shape[0]):
        mm(abatch[g], b, out[g])


def mm_batch_left(const long long[:, :, ::1] a, const long long[:, :, :, ::1] bbatch,
                  long long[:, :, :, ::1] out):
    cdef Py_ssize_t g
    for g in range(bbatch.shape[0]):
        mm(a, bbatch[g], out[g])


def reduce_batch(long long[:, :, :, ::1] coeffs, long long[::1] ks):
    """Canonical sqrt(2) reduction, in place, one matrix per batch row."""
    cdef Py_ssize_t g, i, j, n, m
    cdef long long a, b, c, d
    cdef bint any_nonzero, divisible
    n = coeffs.shape[2]
    m = coeffs.shape[3]
    for g in range(coeffs.shape[0]):
        any_nonzero = False
        for i in range(n):
            for j in range(m):
                if (coeffs[g, 0, i, j] != 0 or coeffs[g, 1, i, j] != 0
                        or coeffs[g, 2, i, j] != 0 or coeffs[g, 3, i, j] != 0):
                    any_nonzero = True
                    break
            if any_nonzero:
                break
        if not any_nonzero:
            ks[g] = 0
            continue
        while ks[g] > 0:
            divisible = True
            for i in range(n):
                for j in range(m):
                    a = coeffs[g, 0, i, j]
                    b = coeffs[g, 1, i, j]
                    c = coeffs[g, 2, i, j]
                    d = coeffs[g, 3, i, j]
                    if ((a + c) & 1) != 0 or ((b + d) & 1) != 0:
                        divisible = False
                        break
                if not divisible:
                    break
            if not divisible:
                break
            for i in range(n):
                for j in range(m):
                    a = coeffs[g, 0, i, j]
                    b = coeffs[g, 1, i, j]
                    c = coeffs[g, 2, i, j]
                    d = coeffs[g, 3, i, j]
                    coeffs[g, 0, i, j] = (b - d) >> 1
                    coeffs[g, 1, i, j] = (a + c) >> 1
                    coeffs[g, 2, i, j] = (b + d) >> 1
                    coeffs[g, 3, i, j] = (c - a) >> 1
            ks[g] -= 1


cdef inline long long _rot_val(const long long[:, :, :, ::1] planes,
                               Py_ssize_t g, int j, Py_ssize_t t,
                               Py_ssize_t i, Py_ssize_t jj) nogil:
    # value of plane t at (i, jj) after multiplying matrix g by w^j
    cdef int s = (t - j) & 3
    cdef int ssum = s + j
    cdef long long v = planes[g, s, i, jj]
    if ssum < 4 or ssum >= 8:
        return v
    return -v


def phase_canon(const long long[:, :, :, ::1] planes, const long long[::1] ks,
                long long[:, ::1] out):
    """Per matrix, the value-lexicographically least of the 8 phase rotations,
    written as rows (k, plane0..., plane3...) into out."""
    cdef Py_ssize_t B = planes.shape[0], n = planes.shape[2], m = planes.shape[3]
    cdef Py_ssize_t g, t, i, jj, pos
    cdef int j, best
    cdef long long v, bv
    cdef int cmp_res
    for g in range(B):
        best = 0
        for j in range(1, 8):
            # lexicographic compare rotation j against rotation `best`
            cmp_res = 0
            for t in range(4):
                for i in range(n):
                    for jj in range(m):
                        v = _rot_val(planes, g, j, t, i, jj)
                        bv = _rot_val(planes, g, best, t, i, jj)
                        if v < bv:
                            cmp_res = -1
                            break
                        elif v > bv:
                            cmp_res = 1
                            break
                    if cmp_res != 0:
                        break
                if cmp_res != 0:
                    break
            if cmp_res < 0:
                best = j
        out[g, 0] = ks[g]
        pos = 1
        for t in range(4):
            for i in range(n):
                for jj in range(m):
                    out[g, pos] = _rot_val(planes, g, best, t, i, jj)
                    pos += 1
