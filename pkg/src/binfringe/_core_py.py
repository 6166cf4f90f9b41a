"""Pure-Python fallback for the compiled core (``_core.pyx``).

Every loop here mirrors the Cython source statement for statement so that both
backends perform the same floating-point operations in the same order and
return bit-identical results. Keep the two files in sync.
"""

# neighbor order fixes the swap tie-break
NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def dbs_frame_pass(bits, cpe, cpp, dys, dxs, tol, moves=None):
    """One raster pass of toggle/swap DBS over a single frame, in place.

    ``cpe`` is the kernel autocorrelation convolved with the error image and
    ``cpp`` the toroidal kernel autocorrelation, both (H, W). ``dys``/``dxs``
    list the distinct row/column offsets of the autocorrelation support.
    Returns (accepted moves, summed error change). When ``moves`` is a list,
    each accepted move's error change is appended to it.
    """
    h, w = bits.shape
    c0 = cpp[0, 0]
    accepted = 0
    total = 0.0
    for y in range(h):
        for x in range(w):
            b0 = int(bits[y, x])
            a0 = 1.0 - 2.0 * b0
            best = -tol
            best_k = -1
            best_qy = 0
            best_qx = 0
            # toggle
            d = 2.0 * a0 * cpe[y, x] + c0
            if d < best:
                best = d
                best_k = 0
            # swaps
            for k in range(8):
                qy = (y + NEIGHBORS[k][0]) % h
                qx = (x + NEIGHBORS[k][1]) % w
                if qy == y and qx == x:
                    continue
                if bits[qy, qx] == b0:
                    continue
                my = (y - qy) % h
                mx = (x - qx) % w
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
            if moves is not None:
                moves.append(best)
            bits[y, x] = 1 - b0
            _add_shifted(cpe, cpp, y, x, a0, dys, dxs)
            if best_k > 0:
                bits[best_qy, best_qx] = b0
                _add_shifted(cpe, cpp, best_qy, best_qx, -a0, dys, dxs)
    return accepted, total


def _add_shifted(cpe, cpp, py, px, a, dys, dxs):
    h, w = cpe.shape
    for i in range(len(dys)):
        my = dys[i] % h
        ty = (py + dys[i]) % h
        for j in range(len(dxs)):
            mx = dxs[j] % w
            tx = (px + dxs[j]) % w
            cpe[ty, tx] += a * cpp[my, mx]


def phase_pixel_pass(bits, blur, taps, c, gre, gim, cos_t, sin_t, weights,
                     pat_pow, exhaustive, tie_tol=0.0):
    """One raster pass of phase-weighted DBS over all frames, in place.

    ``blur`` holds the full-kernel blur of ``bits`` and is kept current as
    bits change, so each pixel sees the updates made earlier in the pass.
    ``gre``/``gim`` are the per-pixel DFT bins of the contone target,
    ``weights`` the per-bin cost weights (symmetrized for threshold mode) and
    ``pat_pow[m]`` the weighted spectral power of bit pattern ``m``. A pattern
    replaces the running best only if it is cheaper by more than ``tie_tol``.
    Returns the number of flipped bits.
    """
    nf, h, w = bits.shape
    ks = taps.shape[0]
    r = ks // 2
    npat = 1 << nf
    s = [0.0] * nf
    dr = [0.0] * nf
    di = [0.0] * nf
    q = [0.0] * nf
    sums = [0.0] * (npat if exhaustive else 1)
    flips = 0
    for y in range(h):
        for x in range(w):
            for n in range(nf):
                s[n] = float(blur[n, y, x]) - c * int(bits[n, y, x])
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
                    sums[m] = sums[m ^ low] + q[low.bit_length() - 1]
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
                ob = int(bits[n, y, x])
                if nb == ob:
                    continue
                bits[n, y, x] = nb
                flips += 1
                a = 1.0 if nb else -1.0
                for i in range(ks):
                    ty = (y + i - r) % h
                    for j in range(ks):
                        tx = (x + j - r) % w
                        blur[n, ty, tx] += a * taps[i, j]
    return flips
