"""Hot loops: Fincke-Pohst enumeration and the automorphism backtracking.

Both kernels are written so that they run unchanged as plain Python on numpy
arrays. They are compiled with numba's ``njit`` unless the environment
variable ``HERMLAT_DISABLE_NUMBA`` is set to a true value (or numba is
missing). The uncompiled function stays reachable as ``kernel.py_func``.
"""

import math
import os

import numpy as np

_disabled = os.environ.get("HERMLAT_DISABLE_NUMBA", "").lower() in ("1", "true", "yes", "on")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and not _disabled


def _jit(fn):
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    fn.py_func = fn
    return fn


@_jit
def fincke_pohst(diag, mu, bound):
    """All integer x with sum_i diag[i] * (x[i] + sum_{j>i} mu[i, j] x[j])^2 <= bound.

    ``bound`` should already include the caller's rounding slack. The zero
    vector is included; both signs of every vector are produced.
    """
    n = diag.shape[0]
    cap = 64
    out = np.empty((cap, n), dtype=np.int64)
    count = 0
    x = np.zeros(n, dtype=np.int64)
    center = np.zeros(n)
    rem = np.zeros(n + 1)
    hi = np.zeros(n, dtype=np.int64)
    rem[n] = bound
    i = n - 1
    r = math.sqrt(bound / diag[i])
    x[i] = math.ceil(-r)
    hi[i] = math.floor(r)
    while True:
        if x[i] > hi[i]:
            i += 1
            if i == n:
                break
            x[i] += 1
            continue
        t = x[i] - center[i]
        rem[i] = rem[i + 1] - diag[i] * t * t
        if rem[i] < 0.0:
            x[i] += 1
            continue
        if i == 0:
            if count == cap:
                grown = np.empty((2 * cap, n), dtype=np.int64)
                grown[:cap] = out
                out = grown
                cap *= 2
            out[count] = x
            count += 1
            x[0] += 1
            continue
        i -= 1
        c = 0.0
        for j in range(i + 1, n):
            c -= mu[i, j] * x[j]
        center[i] = c
        r = math.sqrt(rem[i + 1] / diag[i])
        x[i] = math.ceil(c - r)
        hi[i] = math.floor(c + r)
    return out[:count].copy()


@_jit
def _admissible(l, a, chosen, pg, pj, t1, t2, pool, jpool, rows, icx, icy, iden, ioff):
    for k in range(l):
        b = chosen[k]
        if pg[a, b] != t1[l, k] or pj[a, b] != t2[l, k]:
            return False
    dim = pool.shape[1]
    for s in range(ioff[l], ioff[l + 1]):
        r = rows[s]
        for m in range(dim):
            acc = icx[r, l] * pool[a, m] + icy[r, l] * jpool[a, m]
            for k in range(l):
                b = chosen[k]
                acc += icx[r, k] * pool[b, m] + icy[r, k] * jpool[b, m]
            if acc % iden[r] != 0:
                return False
    return True


@_jit
def aut_search(cand, off, pg, pj, t1, t2, pool, jpool, rows, icx, icy, iden, ioff, prefix, first_only):
    """Count assignments level -> candidate consistent with the target inner products.

    Level l picks a pool index from ``cand[off[l]:off[l+1]]``. A choice a is
    admissible when pg[a, b] == t1[l, k] and pj[a, b] == t2[l, k] for every
    earlier level k with choice b, and when every integrality row r scheduled
    at level l (``rows[ioff[l]:ioff[l+1]]``) maps to an integer vector:
    sum_k icx[r, k] * pool[chosen k] + icy[r, k] * jpool[chosen k] = 0 mod iden[r].
    The first ``len(prefix)`` levels are fixed. With ``first_only`` the search
    stops at the first complete assignment.
    """
    n = off.shape[0] - 1
    chosen = np.empty(n, dtype=np.int64)
    p = prefix.shape[0]
    for l in range(p):
        a = prefix[l]
        if not _admissible(l, a, chosen, pg, pj, t1, t2, pool, jpool, rows, icx, icy, iden, ioff):
            return 0
        chosen[l] = a
    if p == n:
        return 1
    pos = np.empty(n, dtype=np.int64)
    l = p
    pos[l] = off[l]
    count = 0
    while l >= p:
        if pos[l] >= off[l + 1]:
            l -= 1
            if l >= p:
                pos[l] += 1
            continue
        a = cand[pos[l]]
        if not _admissible(l, a, chosen, pg, pj, t1, t2, pool, jpool, rows, icx, icy, iden, ioff):
            pos[l] += 1
            continue
        chosen[l] = a
        if l == n - 1:
            count += 1
            if first_only:
                return count
            pos[l] += 1
        else:
            l += 1
            pos[l] = off[l]
    return count
