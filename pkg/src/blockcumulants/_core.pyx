# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled accumulation kernels for moment tensors.

Both kernels take the data transposed (``xt`` has one contiguous row per
marginal variable) and accumulate raw product sums; normalisation by the
sample count happens in the Python wrappers.

Sample sums run in fixed-stride four-lane partials over 512-sample chunks,
so results are deterministic for a given input regardless of threading
(threads only ever split work across disjoint output blocks).
"""

from libc.stdlib cimport free, malloc

DEF CHUNK = 512


cdef inline double _dot4(const double* a, const double* b, long c) nogil:
    cdef double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0
    cdef long s = 0
    while s + 4 <= c:
        s0 += a[s] * b[s]
        s1 += a[s + 1] * b[s + 1]
        s2 += a[s + 2] * b[s + 2]
        s3 += a[s + 3] * b[s + 3]
        s += 4
    while s < c:
        s0 += a[s] * b[s]
        s += 1
    return (s0 + s1) + (s2 + s3)


cdef inline void _mul(const double* a, const double* b, double* o, long c) nogil:
    cdef long s
    for s in range(c):
        o[s] = a[s] * b[s]


cdef inline void _leaf22(const double* p, const double* xa0, const double* xa1,
                         const double* xb0, const double* xb1,
                         double* acc, long cs) nogil:
    # acc[2,2] += sum_s p[s] * xa[oa][s] * xb[ob][s], register tiled
    cdef double a00 = 0.0, a01 = 0.0, a10 = 0.0, a11 = 0.0
    cdef double u0, u1, pv
    cdef long s
    for s in range(cs):
        pv = p[s]
        u0 = pv * xa0[s]
        u1 = pv * xa1[s]
        a00 += u0 * xb0[s]
        a01 += u0 * xb1[s]
        a10 += u1 * xb0[s]
        a11 += u1 * xb1[s]
    acc[0] += a00
    acc[1] += a01
    acc[2] += a10
    acc[3] += a11


cdef void _one_block(const double* xt, long t, const long* col0,
                     const long* edges, long m, double* acc,
                     double* lv, double* ub) nogil:
    # Accumulate one block (row-major over within-block offsets) into acc.
    # lv holds the running prefix products, ub the leaf fusion buffer.
    cdef long q, pos, i, s0, cs, oa, ob
    cdef long ea = edges[m - 2]
    cdef long eb = edges[m - 1]
    cdef long npre = m - 2
    cdef long stride[16]
    cdef long off[16]
    cdef const double* lvp[16]
    cdef const double* base
    cdef const double* xa
    cdef const double* xb
    cdef const double* p
    stride[m - 1] = 1
    for q in range(m - 2, -1, -1):
        stride[q] = stride[q + 1] * edges[q + 1]
    s0 = 0
    while s0 < t:
        cs = t - s0
        if cs > CHUNK:
            cs = CHUNK
        xa = xt + col0[m - 2] * t + s0
        xb = xt + col0[m - 1] * t + s0
        if npre == 0:
            for oa in range(ea):
                for ob in range(eb):
                    acc[oa * eb + ob] += _dot4(xa + oa * t, xb + ob * t, cs)
        else:
            for q in range(npre):
                off[q] = 0
            q = 0
            while True:
                while q < npre:
                    base = xt + (col0[q] + off[q]) * t + s0
                    if q == 0:
                        lvp[0] = base
                    else:
                        _mul(lvp[q - 1], base, lv + (q - 1) * CHUNK, cs)
                        lvp[q] = lv + (q - 1) * CHUNK
                    q += 1
                pos = 0
                for i in range(npre):
                    pos += off[i] * stride[i]
                p = lvp[npre - 1]
                if ea == 2 and eb == 2:
                    _leaf22(p, xa, xa + t, xb, xb + t, acc + pos, cs)
                else:
                    for oa in range(ea):
                        _mul(p, xa + oa * t, ub, cs)
                        for ob in range(eb):
                            acc[pos + oa * eb + ob] += _dot4(ub, xb + ob * t, cs)
                q = npre - 1
                while q >= 0:
                    off[q] += 1
                    if off[q] < edges[q]:
                        break
                    off[q] = 0
                    q -= 1
                if q < 0:
                    break
        s0 += cs


def moment_blocks(const double[:, ::1] xt, const long[:, ::1] col0,
                  const long[:, ::1] edges, double[::1] out,
                  const long[::1] offs, long k0, long k1):
    """Accumulate product sums for blocks k0..k1 into the flat buffer ``out``.

    xt: (n, t) transposed data; col0/edges: (K, m) first column and edge per
    mode of every block; offs: K+1 prefix offsets of block starts in ``out``.
    """
    cdef long m = col0.shape[1]
    cdef long t = xt.shape[1]
    cdef long k
    cdef double* lv
    if m < 2 or m > 16:
        raise ValueError("kernel supports 2 <= m <= 16")
    with nogil:
        lv = <double*> malloc(m * CHUNK * sizeof(double))
        if lv == NULL:
            with gil:
                raise MemoryError()
        for k in range(k0, k1):
            _one_block(&xt[0, 0], t, &col0[k, 0], &edges[k, 0], m,
                       &out[offs[k]], lv, lv + (m - 2) * CHUNK)
        free(lv)


def naive_moment4(const double[:, ::1] xt, double[:, :, :, ::1] out):
    """Accumulate the full order-4 product-sum tensor, one element at a time.

    Every one of the n^4 elements is evaluated independently from the sample
    products; no use is made of symmetry or of the block layout.
    """
    cdef long n = xt.shape[0]
    cdef long t = xt.shape[1]
    cdef long i1, i2, i3, i4, s0, cs
    cdef double y12[CHUNK]
    cdef double y123[CHUNK]
    with nogil:
        s0 = 0
        while s0 < t:
            cs = t - s0
            if cs > CHUNK:
                cs = CHUNK
            for i1 in range(n):
                for i2 in range(n):
                    _mul(&xt[i1, s0], &xt[i2, s0], y12, cs)
                    for i3 in range(n):
                        _mul(y12, &xt[i3, s0], y123, cs)
                        for i4 in range(n):
                            out[i1, i2, i3, i4] += _dot4(y123, &xt[i4, s0], cs)
            s0 += cs
