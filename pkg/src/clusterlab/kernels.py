"""Numba kernels for the packed, sign-free stabilizer sweep engine.

State layout: the stabilizer group of an n-qubit state is held as n rows of
bit-packed x/z vectors, uint64 words, bit (j-1) of the row = site j. Signs are
not tracked: string-order magnitudes, entropies and the group evolution itself
are independent of measurement-outcome signs, which never feed back into which
operators get measured. Per-row word extents [lo, hi] keep the linear algebra
local, which is what makes large-N sweeps tractable on one core.

All kernels are free functions over plain arrays so numba can cache them.
"""

import numba as nb
import numpy as np

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_U0 = np.uint64(0)
_U1 = np.uint64(1)


@nb.njit(nb.uint64(nb.uint64), cache=True, inline="always")
def popcount(v):
    v = v - ((v >> _U1) & _M1)
    v = (v & _M2) + ((v >> np.uint64(2)) & _M2)
    v = (v + (v >> np.uint64(4))) & _M4
    return (v * _H01) >> np.uint64(56)


@nb.njit(cache=True, inline="always")
def _shrink_extent(sx, sz, r, elo, ehi):
    lo = elo[r]
    hi = ehi[r]
    while lo < hi and sx[r, lo] == _U0 and sz[r, lo] == _U0:
        lo += 1
    while hi > lo and sx[r, hi] == _U0 and sz[r, hi] == _U0:
        hi -= 1
    elo[r] = lo
    ehi[r] = hi


@nb.njit(cache=True, inline="always")
def _anticommutes(sx, sz, r, px, pz, olo, ohi):
    acc = _U0
    for w in range(olo, ohi + 1):
        acc ^= popcount(sx[r, w] & pz[w]) ^ popcount(sz[r, w] & px[w])
    return acc & _U1


@nb.njit(cache=True)
def measure_op(sx, sz, elo, ehi, n, px, pz, olo, ohi):
    """Sign-free projective measurement of the packed operator (px, pz).

    Returns 1 if the measurement had a random branch (state updated), 0 if the
    outcome was deterministic (state unchanged).
    """
    pivot = -1
    pivot_width = 1 << 30
    for r in range(n):
        if ehi[r] < olo or elo[r] > ohi:
            continue
        if _anticommutes(sx, sz, r, px, pz, olo, ohi):
            width = ehi[r] - elo[r]
            if width < pivot_width:
                pivot_width = width
                pivot = r
    if pivot < 0:
        return 0
    plo = elo[pivot]
    phi = ehi[pivot]
    for r in range(n):
        if r == pivot or ehi[r] < olo or elo[r] > ohi:
            continue
        if _anticommutes(sx, sz, r, px, pz, olo, ohi):
            for w in range(plo, phi + 1):
                sx[r, w] ^= sx[pivot, w]
                sz[r, w] ^= sz[pivot, w]
            if plo < elo[r]:
                elo[r] = plo
            if phi > ehi[r]:
                ehi[r] = phi
            _shrink_extent(sx, sz, r, elo, ehi)
    for w in range(plo, phi + 1):
        sx[pivot, w] = _U0
        sz[pivot, w] = _U0
    for w in range(olo, ohi + 1):
        sx[pivot, w] = px[w]
        sz[pivot, w] = pz[w]
    elo[pivot] = olo
    ehi[pivot] = ohi
    _shrink_extent(sx, sz, pivot, elo, ehi)
    return 1


@nb.njit(cache=True)
def commutes_with_all(sx, sz, elo, ehi, n, px, pz, olo, ohi):
    """1 iff (px, pz) commutes with every row: |<p>| = 1 for the pure state."""
    for r in range(n):
        if ehi[r] < olo or elo[r] > ohi:
            continue
        if _anticommutes(sx, sz, r, px, pz, olo, ohi):
            return 0
    return 1


@nb.njit(cache=True)
def apply_gate(sx, sz, elo, ehi, n, lo_bit, m, tab_x, tab_z):
    """Conjugate every row by the gate table on the m-site window at lo_bit."""
    w0 = lo_bit >> 6
    off = lo_bit & 63
    straddle = off + m > 64
    w1 = w0 + 1 if straddle else w0
    mmask = np.uint64((1 << m) - 1)
    uoff = np.uint64(off)
    ulow = np.uint64(64 - off)
    for r in range(n):
        if ehi[r] < w0 or elo[r] > w1:
            continue
        if straddle:
            cx = ((sx[r, w0] >> uoff) | (sx[r, w1] << ulow)) & mmask
            cz = ((sz[r, w0] >> uoff) | (sz[r, w1] << ulow)) & mmask
        else:
            cx = (sx[r, w0] >> uoff) & mmask
            cz = (sz[r, w0] >> uoff) & mmask
        if cx == _U0 and cz == _U0:
            continue
        code = np.int64(cx | (cz << np.uint64(m)))
        nx = np.uint64(tab_x[code])
        nz = np.uint64(tab_z[code])
        if nx == cx and nz == cz:
            continue
        if straddle:
            sx[r, w0] = (sx[r, w0] & ~(mmask << uoff)) | (nx << uoff)
            sz[r, w0] = (sz[r, w0] & ~(mmask << uoff)) | (nz << uoff)
            sx[r, w1] = (sx[r, w1] & ~(mmask >> ulow)) | (nx >> ulow)
            sz[r, w1] = (sz[r, w1] & ~(mmask >> ulow)) | (nz >> ulow)
        else:
            sx[r, w0] = (sx[r, w0] & ~(mmask << uoff)) | (nx << uoff)
            sz[r, w0] = (sz[r, w0] & ~(mmask << uoff)) | (nz << uoff)
        if w0 < elo[r]:
            elo[r] = w0
        if w1 > ehi[r]:
            ehi[r] = w1
        _shrink_extent(sx, sz, r, elo, ehi)


@nb.njit(cache=True)
def run_ops(sx, sz, elo, ehi, n, n_sites, alpha, periodic,
            kinds, positions, gate_idx, pool_x, pool_z,
            px, pz):
    """Execute a batch of operations in order.

    kinds: 0 = cluster measurement at site positions[t] (0-based left end),
           1 = Z measurement at site positions[t],
           2 = symmetric gate pool_x/pool_z[gate_idx[t]] at window positions[t].
    px, pz: scratch word buffers of length W (the word count of a row).
    """
    W = sx.shape[1]
    m = alpha + 1
    for t in range(kinds.shape[0]):
        kind = kinds[t]
        pos = positions[t]
        if kind == 2:
            apply_gate(sx, sz, elo, ehi, n, pos, m,
                       pool_x[gate_idx[t]], pool_z[gate_idx[t]])
            continue
        for w in range(W):
            px[w] = _U0
            pz[w] = _U0
        if kind == 1:
            pz[pos >> 6] = _U1 << np.uint64(pos & 63)
            olo = pos >> 6
            ohi = olo
        else:
            olo = W
            ohi = 0
            for d in range(m):
                bit = pos + d
                if periodic:
                    bit = bit % n_sites
                w = bit >> 6
                mask = _U1 << np.uint64(bit & 63)
                if d == 0 or d == m - 1:
                    px[w] |= mask
                else:
                    pz[w] |= mask
                if w < olo:
                    olo = w
                if w > ohi:
                    ohi = w
        measure_op(sx, sz, elo, ehi, n, px, pz, olo, ohi)


@nb.njit(cache=True)
def rank_masked(sx, sz, n, mask, scratch):
    """GF(2) rank of the rows restricted to the sites selected by mask.

    scratch: uint64 work array of shape (n, 2*W).
    """
    W = sx.shape[1]
    for r in range(n):
        for w in range(W):
            scratch[r, w] = sx[r, w] & mask[w]
            scratch[r, W + w] = sz[r, w] & mask[w]
    rank = 0
    ncols = 2 * W * 64
    for col in range(ncols):
        w = col >> 6
        bit = _U1 << np.uint64(col & 63)
        pivot = -1
        for r in range(rank, n):
            if scratch[r, w] & bit:
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for ww in range(2 * W):
                tmp = scratch[rank, ww]
                scratch[rank, ww] = scratch[pivot, ww]
                scratch[pivot, ww] = tmp
        for r in range(rank + 1, n):
            if scratch[r, w] & bit:
                for ww in range(2 * W):
                    scratch[r, ww] ^= scratch[rank, ww]
        rank += 1
        if rank == n:
            break
    return rank
