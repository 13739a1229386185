"""Compiled inner loops for the Groebner engine.

Polynomials are pairs of int64 arrays (packed monomial keys sorted in
decreasing order, coefficients in [0, p)).  A basis is the concatenation of
its monic members with an offset table.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _grow(arr, need):
    if need <= arr.shape[0]:
        return arr
    cap = max(need, 2 * arr.shape[0])
    out = np.empty(cap, np.int64)
    out[:arr.shape[0]] = arr
    return out


@njit(cache=True)
def combine(ak, ac, a_from, a_shift, bk, bc, b_from, b_shift, c, p):
    """shift_a(a[a_from:]) - c * shift_b(b[b_from:]), merged in key order."""
    na = ak.shape[0] - a_from
    nb = bk.shape[0] - b_from
    outk = np.empty(na + nb, np.int64)
    outc = np.empty(na + nb, np.int64)
    i = a_from
    j = b_from
    m = 0
    while i < ak.shape[0] and j < bk.shape[0]:
        ka = ak[i] + a_shift
        kb = bk[j] + b_shift
        if ka > kb:
            outk[m] = ka
            outc[m] = ac[i]
            m += 1
            i += 1
        elif ka < kb:
            v = (p - (c * bc[j]) % p) % p
            if v != 0:
                outk[m] = kb
                outc[m] = v
                m += 1
            j += 1
        else:
            v = (ac[i] - c * bc[j]) % p
            if v != 0:
                outk[m] = ka
                outc[m] = v
                m += 1
            i += 1
            j += 1
    while i < ak.shape[0]:
        outk[m] = ak[i] + a_shift
        outc[m] = ac[i]
        m += 1
        i += 1
    while j < bk.shape[0]:
        v = (p - (c * bc[j]) % p) % p
        if v != 0:
            outk[m] = bk[j] + b_shift
            outc[m] = v
            m += 1
        j += 1
    return outk[:m], outc[:m]


@njit(cache=True)
def reduce_full(fk, fc, bk, bc, boff, bguard, p, digits, guard):
    """Normal form of f modulo a monic basis, every term reduced."""
    nb = boff.shape[0] - 1
    cap = fk.shape[0] + 64
    curk = np.empty(cap, np.int64)
    curc = np.empty(cap, np.int64)
    tmpk = np.empty(cap, np.int64)
    tmpc = np.empty(cap, np.int64)
    n = fk.shape[0]
    curk[:n] = fk
    curc[:n] = fc
    outk = np.empty(16, np.int64)
    outc = np.empty(16, np.int64)
    nout = 0
    pos = 0
    while pos < n:
        k = curk[pos]
        c = curc[pos] % p
        if c == 0:
            pos += 1
            continue
        kd = k & digits
        r = -1
        for e in range(nb):
            if ((bguard[e] - kd) & guard) == guard:
                r = e
                break
        if r < 0:
            if nout == outk.shape[0]:
                outk = _grow(outk, nout + 1)
                outc = _grow(outc, nout + 1)
            outk[nout] = k
            outc[nout] = c
            nout += 1
            pos += 1
            continue
        s = boff[r]
        t = boff[r + 1]
        shift = k - bk[s]
        need = (n - pos - 1) + (t - s - 1)
        if need > tmpk.shape[0]:
            tmpk = np.empty(2 * need, np.int64)
            tmpc = np.empty(2 * need, np.int64)
        i = pos + 1
        j = s + 1
        m = 0
        while i < n and j < t:
            ka = curk[i]
            kb = bk[j] + shift
            if ka > kb:
                tmpk[m] = ka
                tmpc[m] = curc[i]
                m += 1
                i += 1
            elif ka < kb:
                v = (p - (c * bc[j]) % p) % p
                if v != 0:
                    tmpk[m] = kb
                    tmpc[m] = v
                    m += 1
                j += 1
            else:
                v = (curc[i] - c * bc[j]) % p
                if v != 0:
                    tmpk[m] = ka
                    tmpc[m] = v
                    m += 1
                i += 1
                j += 1
        while i < n:
            tmpk[m] = curk[i]
            tmpc[m] = curc[i]
            m += 1
            i += 1
        while j < t:
            v = (p - (c * bc[j]) % p) % p
            if v != 0:
                tmpk[m] = bk[j] + shift
                tmpc[m] = v
                m += 1
            j += 1
        curk, tmpk = tmpk, curk
        curc, tmpc = tmpc, curc
        if tmpk.shape[0] < curk.shape[0]:
            tmpk = np.empty(curk.shape[0], np.int64)
            tmpc = np.empty(curk.shape[0], np.int64)
        n = m
        pos = 0
    return outk[:nout].copy(), outc[:nout].copy()


@njit(cache=True)
def scale(fc, c, p):
    out = np.empty_like(fc)
    for i in range(fc.shape[0]):
        out[i] = (fc[i] * c) % p
    return out


@njit(cache=True)
def _divides(a, b):
    for v in range(a.shape[0]):
        if a[v] > b[v]:
            return False
    return True


@njit(cache=True)
def new_pairs(E, h):
    """Chain and coprime filtering of the pairs (g, h) for active leads E.

    Returns the lcm rows and a mask of the pairs that must be kept.
    """
    m, n = E.shape
    L = np.empty((m, n), np.int64)
    cop = np.zeros(m, np.bool_)
    for a in range(m):
        c = True
        for v in range(n):
            L[a, v] = max(E[a, v], h[v])
            if E[a, v] > 0 and h[v] > 0:
                c = False
        cop[a] = c
    keep = np.zeros(m, np.bool_)
    for a in range(m):
        if cop[a]:
            keep[a] = True
            continue
        ok = True
        for b in range(a + 1, m):
            if _divides(L[b], L[a]):
                ok = False
                break
        if ok:
            for b in range(a):
                if keep[b] and _divides(L[b], L[a]):
                    ok = False
                    break
        keep[a] = ok
    for a in range(m):
        if cop[a]:
            keep[a] = False
    return L, keep


@njit(cache=True)
def drop_old_pairs(PL, pa, pb, alive, count, leads, h):
    """Discard pairs (a, b) whose lcm is strictly divisible by the new lead h."""
    n = h.shape[0]
    for q in range(count):
        if not alive[q]:
            continue
        if not _divides(h, PL[q]):
            continue
        same_a = True
        same_b = True
        for v in range(n):
            la = max(leads[pa[q], v], h[v])
            lb = max(h[v], leads[pb[q], v])
            if la != PL[q, v]:
                same_a = False
            if lb != PL[q, v]:
                same_b = False
        if not same_a and not same_b:
            alive[q] = False


@njit(cache=True)
def divisible_mask(E, h):
    """Rows of E divisible by h."""
    out = np.zeros(E.shape[0], np.bool_)
    for a in range(E.shape[0]):
        out[a] = _divides(h, E[a])
    return out

