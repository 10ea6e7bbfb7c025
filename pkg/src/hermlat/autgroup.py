"""Short vectors of the trace form and orders of unitary automorphism groups."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import Matrix, ZZ, ilcm
from sympy.polys.matrices import DomainMatrix

from . import _kernels
from .lattice import HermLattice, ZGram, is_definite, zbasis_and_trace_gram

__all__ = [
    "AutGuardError",
    "ShortVectorSet",
    "ldl",
    "short_vectors",
    "unitary_aut_order",
    "count_automorphisms",
    "lll_transform",
    "prepare_search",
    "orbit_product",
    "full_count",
    "MAX_RANK",
    "MAX_ABS_DISC",
]

MAX_RANK = 6
MAX_ABS_DISC = 400
_SLACK = 1e-7


class AutGuardError(ValueError):
    """Raised when a lattice is outside the range the automorphism search supports."""


@dataclass(frozen=True)
class ShortVectorSet:
    """Nonzero vectors of norm <= bound, one per +-pair, with their exact norms."""

    vectors: np.ndarray
    norms: np.ndarray
    bound: int

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def with_norm(self, m: int) -> np.ndarray:
        return self.vectors[self.norms == m]


def ldl(gram) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact decomposition x^T G x = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2."""
    n = len(gram)
    A = [[Fraction(int(gram[i][j])) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = A[i][i]
        if d[i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = A[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                A[j][k] -= mu[i][j] * A[i][k]
                A[k][j] = A[j][k]
    return d, mu


def short_vectors(gram, bound: int) -> ShortVectorSet:
    """Fincke-Pohst enumeration; candidates come from floats, norms are checked exactly."""
    G = np.asarray(gram, dtype=np.int64)
    d, mu = ldl(G)
    diag = np.array([float(x) for x in d])
    muf = np.array([[float(x) for x in row] for row in mu])
    raw = _kernels.fincke_pohst(diag, muf, float(bound) * (1 + _SLACK) + _SLACK)
    if raw.shape[0] == 0:
        return ShortVectorSet(np.zeros((0, G.shape[0]), dtype=np.int64), np.zeros(0, dtype=np.int64), bound)
    norms = np.einsum("ij,jk,ik->i", raw, G, raw)
    keep = (norms > 0) & (norms <= bound)
    # first nonzero coordinate positive picks one vector per +- pair
    nz = raw != 0
    first = raw[np.arange(raw.shape[0]), np.argmax(nz, axis=1)]
    keep &= first > 0
    return ShortVectorSet(raw[keep].copy(), norms[keep].copy(), bound)


def _check_guard(L: HermLattice):
    if L.n > MAX_RANK:
        raise AutGuardError(f"rank {L.n} exceeds the supported maximum {MAX_RANK}")
    if abs(L.field.d_K) > MAX_ABS_DISC:
        raise AutGuardError(f"|d_K| = {abs(L.field.d_K)} exceeds the supported maximum {MAX_ABS_DISC}")
    if not is_definite(L):
        raise ValueError("automorphism groups are only computed for definite lattices")


def lll_transform(gram) -> np.ndarray:
    """Unimodular T whose rows form an LLL-reduced basis for the form ``gram``.

    The reduction runs on a rounded, scaled Cholesky factor; only the
    transform is kept, so the result is exact whatever the rounding did.
    """
    G = np.asarray(gram, dtype=np.int64)
    dim = G.shape[0]
    chol = np.linalg.cholesky(G.astype(float))
    scale = 2.0**24 / max(1.0, float(np.sqrt(G.diagonal().max())))
    rows = [[ZZ(int(round(x * scale))) for x in row] for row in chol]
    try:
        _, T = DomainMatrix(rows, (dim, dim), ZZ).lll_transform()
        T = np.array(T.to_Matrix().tolist(), dtype=np.int64)
    except Exception:  # rounding made the embedded basis degenerate
        return np.eye(dim, dtype=np.int64)
    if abs(round(np.linalg.det(T.astype(float)))) != 1:
        return np.eye(dim, dtype=np.int64)
    return T


@dataclass
class _SearchData:
    cand: np.ndarray
    off: np.ndarray
    pg: np.ndarray
    pj: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    pool: np.ndarray
    jpool: np.ndarray
    rows: np.ndarray
    icx: np.ndarray
    icy: np.ndarray
    iden: np.ndarray
    ioff: np.ndarray
    identity: np.ndarray

    def args(self):
        return (self.cand, self.off, self.pg, self.pj, self.t1, self.t2, self.pool, self.jpool,
                self.rows, self.icx, self.icy, self.iden, self.ioff)


def _k_basis(T: np.ndarray, G: np.ndarray, J: np.ndarray, n: int) -> list[np.ndarray]:
    """Greedily pick n short vectors among the rows of T that are K-independent."""
    norms = np.einsum("ij,jk,ik->i", T, G, T)
    chosen: list[np.ndarray] = []
    span = Matrix.zeros(G.shape[0], 0)
    for r in np.argsort(norms, kind="stable"):
        v = T[r]
        trial = span.row_join(Matrix(v.tolist())).row_join(Matrix((J @ v).tolist()))
        if trial.rank() == 2 * (len(chosen) + 1):
            chosen.append(v)
            span = trial
            if len(chosen) == n:
                break
    return chosen


def _prepare(Z: ZGram) -> _SearchData:
    G, J = Z.gram, Z.omega_action
    dim = G.shape[0]
    n = dim // 2
    T = lll_transform(G)
    W = _k_basis(T, G, J, n)
    targets = [int(w @ G @ w) for w in W]
    sv = short_vectors(T @ G @ T.T, max(targets))
    half = sv.vectors @ T
    full = np.concatenate([half, -half])
    full_norms = np.concatenate([sv.norms, sv.norms])
    keep = np.isin(full_norms, targets)
    pool, pool_norms = full[keep], full_norms[keep]
    jpool = pool @ J.T
    levels = [np.nonzero(pool_norms == targets[i])[0] for i in range(n)]
    cand = np.concatenate(levels).astype(np.int64)
    off = np.zeros(n + 1, dtype=np.int64)
    off[1:] = np.cumsum([len(lv) for lv in levels])
    pg = pool @ G @ pool.T
    pj = jpool @ G @ pool.T
    Wm = np.array(W, dtype=np.int64)
    JW = Wm @ J.T
    t1 = Wm @ G @ Wm.T
    t2 = JW @ G @ Wm.T
    # express each standard basis vector over (w_1, J w_1, ..., w_n, J w_n)
    M = Matrix.zeros(dim, dim)
    for i in range(n):
        M[:, 2 * i] = Matrix(Wm[i].tolist())
        M[:, 2 * i + 1] = Matrix(JW[i].tolist())
    Minv = M.inv()
    sched: list[tuple[int, int]] = []
    icx = np.zeros((dim, n), dtype=np.int64)
    icy = np.zeros((dim, n), dtype=np.int64)
    iden = np.ones(dim, dtype=np.int64)
    for r in range(dim):
        col = [Minv[k, r] for k in range(dim)]
        den = int(ilcm(*[c.q for c in col])) if dim > 1 else int(col[0].q)
        if den == 1:
            continue
        iden[r] = den
        last = 0
        for i in range(n):
            icx[r, i] = int(col[2 * i] * den)
            icy[r, i] = int(col[2 * i + 1] * den)
            if icx[r, i] or icy[r, i]:
                last = i
        sched.append((last, r))
    sched.sort()
    rows = np.array([r for _, r in sched], dtype=np.int64)
    ioff = np.zeros(n + 1, dtype=np.int64)
    for lev, _ in sched:
        ioff[lev + 1] += 1
    ioff = np.cumsum(ioff)
    identity = np.empty(n, dtype=np.int64)
    for i in range(n):
        hit = np.nonzero(np.all(pool == Wm[i], axis=1))[0]
        if len(hit) != 1:
            raise AssertionError("basis vector missing from the candidate pool")
        identity[i] = hit[0]
    c = np.ascontiguousarray
    return _SearchData(cand, off, c(pg), c(pj), c(t1), c(t2), c(pool), c(jpool), rows, icx, icy,
                       iden, ioff, identity)


def _run(S: _SearchData, prefix, first_only: bool, kernel=None) -> int:
    kernel = kernel or _kernels.aut_search
    return int(kernel(*S.args(), np.asarray(prefix, dtype=np.int64), first_only))


def prepare_search(L: HermLattice) -> _SearchData:
    """Candidate pool and target inner products for the automorphism search of L."""
    _check_guard(L)
    return _prepare(zbasis_and_trace_gram(L))


def orbit_product(S: _SearchData, kernel=None) -> int:
    """|U(L)| via orbit-stabilizer along the chain of pointwise stabilizers.

    The factor at level i is the number of candidates c such that some
    automorphism fixes the first i chosen vectors and sends the next one to c.
    """
    n = S.off.shape[0] - 1
    order = 1
    for i in range(n):
        head = list(S.identity[:i])
        orbit = 0
        for a in S.cand[S.off[i] : S.off[i + 1]]:
            if _run(S, head + [int(a)], True, kernel):
                orbit += 1
        order *= orbit
    return order


def full_count(S: _SearchData, kernel=None) -> int:
    return _run(S, [], False, kernel)


def unitary_aut_order(L: HermLattice, kernel=None) -> int:
    """Order of the unitary automorphism group of a definite lattice."""
    return orbit_product(prepare_search(L), kernel)


def count_automorphisms(L: HermLattice, kernel=None) -> int:
    """|U(L)| by enumerating every automorphism; slow, used as a cross-check."""
    return full_count(prepare_search(L), kernel)
