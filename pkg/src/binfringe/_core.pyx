# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled core: raster passes of spatial DBS and phase-weighted DBS.

Mirrors ``_core_py.py`` statement for statement; results are bit-identical.
"""

import numpy as np

cdef int NY[8]
cdef int NX[8]
NY[:] = [-1, -1, -1, 0, 0, 1, 1, 1]
NX[:] = [-1, 0, 1, -1, 1, -1, 0, 1]


cdef inline Py_ssize_t wrap(Py_ssize_t i, Py_ssize_t n) nogil:
    i = i % n
    if i < 0:
        i += n
    return i


cdef void add_shifted(double[:, ::1] cpe, const double[:, ::1] cpp, Py_ssize_t py, Py_ssize_t px,
                      double a, const long[::1] dys, const long[::1] dxs) noexcept nogil:
    cdef Py_ssize_t h = cpe.shape[0], w = cpe.shape[1]
    cdef Py_ssize_t i, j, my, ty, mx, tx
    for i in range(dys.shape[0]):
        my = wrap(dys[i], h)
        ty = wrap(py + dys[i], h)
        for j in range(dxs.shape[0]):
            mx = wrap(dxs[j], w)
            tx = wrap(px + dxs[j], w)
            cpe[ty, tx] += a * cpp[my, mx]


def dbs_frame_pass(unsigned char[:, ::1] bits, double[:, ::1] cpe, const double[:, ::1] cpp,
                   const long[::1] dys, const long[::1] dxs, double tol, moves=None):
    cdef Py_ssize_t h = bits.shape[0], w = bits.shape[1]
    cdef double c0 = cpp[0, 0]
    cdef long accepted = 0
    cdef double total = 0.0
    cdef Py_ssize_t y, x, k, qy, qx, my, mx, best_qy, best_qx
    cdef int b0, best_k
    cdef double a0, best, d
    cdef bint record = moves is not None
    for y in range(h):
        for x in range(w):
            b0 = bits[y, x]
            a0 = 1.0 - 2.0 * b0
            best = -tol
            best_k = -1
            best_qy = 0
            best_qx = 0
            d = 2.0 * a0 * cpe[y, x] + c0
            if d < best:
                best = d
                best_k = 0
            for k in range(8):
                qy = wrap(y + NY[k], h)
                qx = wrap(x + NX[k], w)
                if qy == y and qx == x:
                    continue
                if bits[qy, qx] == b0:
                    continue
                my = wrap(y - qy, h)
                mx = wrap(x - qx, w)
                d = 2.0 * a0 * (cpe[y, x] - cpe[qy, qx]) + 2.0 * c0 - 2.0 * cpp[my, mx]
                if d < best:
                    best = d
                    best_k = k + 1
                    best_qy = qy
                    best_qx = qx
            if best_k < 0:
                continue
            accepted += 1
            total += best
            if record:
                moves.append(best)
            bits[y, x] = 1 - b0
            add_shifted(cpe, cpp, y, x, a0, dys, dxs)
            if best_k > 0:
                bits[best_qy, best_qx] = b0
                add_shifted(cpe, cpp, best_qy, best_qx, -a0, dys, dxs)
    return accepted, total


def phase_pixel_pass(unsigned char[:, :, ::1] bits, double[:, :, ::1] blur,
                     const double[:, ::1] taps, double c,
                     const double[:, :, ::1] gre, const double[:, :, ::1] gim,
                     const double[:, ::1] cos_t, const double[:, ::1] sin_t, const double[::1] weights,
                     const double[::1] pat_pow, bint exhaustive, double tie_tol=0.0):
    cdef Py_ssize_t nf = bits.shape[0], h = bits.shape[1], w = bits.shape[2]
    cdef Py_ssize_t ks = taps.shape[0]
    cdef Py_ssize_t r = ks // 2
    cdef Py_ssize_t npat = 1 << nf
    cdef double[::1] s = np.zeros(nf)
    cdef double[::1] dr = np.zeros(nf)
    cdef double[::1] di = np.zeros(nf)
    cdef double[::1] q = np.zeros(nf)
    cdef double[::1] sums = np.zeros(npat if exhaustive else 1)
    cdef long flips = 0
    cdef Py_ssize_t y, x, n, k, m, low, lowbit, i, j, ty, tx
    cdef long best_m
    cdef int nb, ob
    cdef double are, aim, acc, best, cost, a
    with nogil:
        for y in range(h):
            for x in range(w):
                for n in range(nf):
                    s[n] = blur[n, y, x] - c * bits[n, y, x]
                for k in range(nf):
                    are = 0.0
                    aim = 0.0
                    for n in range(nf):
                        are += s[n] * cos_t[k, n]
                        aim += s[n] * sin_t[k, n]
                    dr[k] = gre[k, y, x] - are
                    di[k] = gim[k, y, x] - aim
                for n in range(nf):
                    acc = 0.0
                    for k in range(nf):
                        if weights[k] != 0.0:
                            acc += weights[k] * (dr[k] * cos_t[k, n] + di[k] * sin_t[k, n])
                    q[n] = acc
                if exhaustive:
                    best_m = 0
                    best = c * c * pat_pow[0]
                    sums[0] = 0.0
                    for m in range(1, npat):
                        low = m & -m
                        lowbit = 0
                        while (low >> lowbit) != 1:
                            lowbit += 1
                        sums[m] = sums[m ^ low] + q[lowbit]
                        cost = c * c * pat_pow[m] - 2.0 * c * sums[m]
                        if cost < best - tie_tol:
                            best = cost
                            best_m = m
                else:
                    best_m = 0
                    for n in range(nf):
                        if q[n] > 0.0:
                            best_m |= 1 << n
                for n in range(nf):
                    nb = (best_m >> n) & 1
                    ob = bits[n, y, x]
                    if nb == ob:
                        continue
                    bits[n, y, x] = nb
                    flips += 1
                    a = 1.0 if nb else -1.0
                    for i in range(ks):
                        ty = wrap(y + i - r, h)
                        for j in range(ks):
                            tx = wrap(x + j - r, w)
                            blur[n, ty, tx] += a * taps[i, j]
    return flips
