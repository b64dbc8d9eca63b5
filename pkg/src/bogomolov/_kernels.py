"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Every public kernel takes ``backend=None`` (use the process default),
``"numba"`` or ``"numpy"``.  Both paths are required to return identical
results; ``tests/test_kernels.py`` pins that down and
``benchmarks/bench_kernels.py`` times them against each other.
"""
from __future__ import annotations

import numpy as np

from .config import numba_requested

try:
    import numba
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


USE_NUMBA = HAS_NUMBA and numba_requested()


def default_backend():
    return "numba" if USE_NUMBA else "numpy"


def _resolve(backend):
    backend = backend or default_backend()
    if backend == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


# ---------------------------------------------------------------------------
# Smith form over the local ring Z/p^k
# ---------------------------------------------------------------------------


@njit(cache=True)
def _inv_mod_nb(a, mod):
    t, new_t = 0, 1
    r, new_r = mod, a % mod
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % mod


@njit(cache=True)
def _local_snf_nb(A, p, k, U, Uinv, V, track_u):
    mod = 1
    for _ in range(k):
        mod *= p
    r, c = A.shape
    n = min(r, c)
    vals = np.zeros(n, np.int64)
    t = 0
    while t < n:
        best_v = k
        bi = -1
        bj = -1
        for i in range(t, r):
            for j in range(t, c):
                a = A[i, j]
                if a != 0:
                    v = 0
                    while a % p == 0:
                        a //= p
                        v += 1
                    if v < best_v:
                        best_v = v
                        bi = i
                        bj = j
                        if v == 0:
                            break
            if best_v == 0:
                break
        if bi < 0:
            break
        if bi != t:
            for j in range(c):
                A[t, j], A[bi, j] = A[bi, j], A[t, j]
            if track_u:
                for j in range(r):
                    U[t, j], U[bi, j] = U[bi, j], U[t, j]
                for i in range(r):
                    Uinv[i, t], Uinv[i, bi] = Uinv[i, bi], Uinv[i, t]
        if bj != t:
            for i in range(r):
                A[i, t], A[i, bj] = A[i, bj], A[i, t]
            for i in range(c):
                V[i, t], V[i, bj] = V[i, bj], V[i, t]
        pv = 1
        for _ in range(best_v):
            pv *= p
        unit = A[t, t] // pv
        uinv = _inv_mod_nb(unit, mod)
        for j in range(t, c):
            A[t, j] = (A[t, j] * uinv) % mod
        if track_u:
            for j in range(r):
                U[t, j] = (U[t, j] * uinv) % mod
            for i in range(r):
                Uinv[i, t] = (Uinv[i, t] * unit) % mod
        for i in range(t + 1, r):
            if A[i, t] != 0:
                f = A[i, t] // pv
                for j in range(t, c):
                    A[i, j] = (A[i, j] - f * A[t, j]) % mod
                if track_u:
                    for j in range(r):
                        U[i, j] = (U[i, j] - f * U[t, j]) % mod
                    for q in range(r):
                        Uinv[q, t] = (Uinv[q, t] + f * Uinv[q, i]) % mod
        for j in range(t + 1, c):
            if A[t, j] != 0:
                g = A[t, j] // pv
                A[t, j] = 0
                for q in range(c):
                    V[q, j] = (V[q, j] - g * V[q, t]) % mod
        vals[t] = best_v
        t += 1
    return t, vals


def _safe_dot_mod(M, f, mod):
    # M @ f mod `mod` without int64 overflow in the accumulation
    if M.shape[1] == 0:
        return np.zeros(M.shape[0], np.int64)
    if mod * mod * M.shape[1] < (1 << 62):
        return (M @ f) % mod
    out = np.zeros(M.shape[0], np.int64)
    for col, coef in zip(M.T, f):
        out = (out + (col * int(coef)) % mod) % mod
    return out


def _local_snf_np(A, p, k, U, Uinv, V, track_u):
    mod = p**k
    r, c = A.shape
    n = min(r, c)
    vals = np.zeros(n, np.int64)
    powers = [p**v for v in range(k + 1)]
    t = 0
    while t < n:
        sub = A[t:, t:]
        found = None
        for v in range(k):
            mask = (sub % powers[v + 1]) != 0
            if mask.any():
                flat = int(np.argmax(mask))
                found = (t + flat // sub.shape[1], t + flat % sub.shape[1], v)
                break
        if found is None:
            break
        bi, bj, best_v = found
        if bi != t:
            A[[t, bi], :] = A[[bi, t], :]
            if track_u:
                U[[t, bi], :] = U[[bi, t], :]
                Uinv[:, [t, bi]] = Uinv[:, [bi, t]]
        if bj != t:
            A[:, [t, bj]] = A[:, [bj, t]]
            V[:, [t, bj]] = V[:, [bj, t]]
        pv = powers[best_v]
        unit = int(A[t, t]) // pv
        uinv = pow(unit, -1, mod)
        A[t, t:] = (A[t, t:] * uinv) % mod
        if track_u:
            U[t, :] = (U[t, :] * uinv) % mod
            Uinv[:, t] = (Uinv[:, t] * unit) % mod
        rows = np.nonzero(A[t + 1 :, t])[0] + t + 1
        if rows.size:
            f = A[rows, t] // pv
            A[rows, t:] = (A[rows, t:] - (f[:, None] * A[t, t:][None, :]) % mod) % mod
            if track_u:
                U[rows, :] = (U[rows, :] - (f[:, None] * U[t, :][None, :]) % mod) % mod
                Uinv[:, t] = (Uinv[:, t] + _safe_dot_mod(Uinv[:, rows], f, mod)) % mod
        cols = np.nonzero(A[t, t + 1 :])[0] + t + 1
        if cols.size:
            g = A[t, cols] // pv
            A[t, cols] = 0
            V[:, cols] = (V[:, cols] - (V[:, t][:, None] * g[None, :]) % mod) % mod
        vals[t] = best_v
        t += 1
    return t, vals


def local_snf(A, p, k, track_u=True, backend=None):
    """Smith form of an integer matrix over Z/p^k.

    Returns ``(rank, vals, U, Uinv, V)`` with ``U @ A @ V == diag(p**vals)``
    modulo ``p**k`` (zero beyond ``rank``), ``vals`` nondecreasing.  When
    ``track_u`` is false, ``U`` and ``Uinv`` are returned as ``None``.

    The pivot is the first entry, in row-major order over the trailing
    submatrix, of minimal p-adic valuation.
    """
    mod = p**k
    if mod >= (1 << 31):
        raise ValueError("modulus must be below 2**31")
    A = np.array(A, dtype=np.int64) % mod
    r, c = A.shape
    if track_u:
        U = np.eye(r, dtype=np.int64)
        Uinv = np.eye(r, dtype=np.int64)
    else:
        U = np.zeros((1, 1), np.int64)
        Uinv = np.zeros((1, 1), np.int64)
    V = np.eye(c, dtype=np.int64)
    if _resolve(backend) == "numba":
        rank, vals = _local_snf_nb(A, p, k, U, Uinv, V, track_u)
    else:
        rank, vals = _local_snf_np(A, p, k, U, Uinv, V, track_u)
    vals = vals[:rank].copy()
    if not track_u:
        U = Uinv = None
    return int(rank), vals, U, Uinv, V


# ---------------------------------------------------------------------------
# Cocycle identity over all triples
# ---------------------------------------------------------------------------


@njit(cache=True)
def _cocycle_defects_nb(table, mul, m):
    n = table.shape[0]
    count = 0
    fg = -1
    fh = -1
    fk = -1
    for g in range(n):
        for h in range(n):
            gh = mul[g, h]
            a = table[g, h]
            for k in range(n):
                lhs = a + table[gh, k]
                rhs = table[h, k] + table[g, mul[h, k]]
                if (lhs - rhs) % m != 0:
                    if count == 0:
                        fg = g
                        fh = h
                        fk = k
                    count += 1
    return count, fg, fh, fk


def _cocycle_defects_np(table, mul, m):
    n = table.shape[0]
    count = 0
    first = (-1, -1, -1)
    for g in range(n):
        lhs = table[g, :][:, None] + table[mul[g, :], :]
        rhs = table + table[g, :][mul]
        bad = (lhs - rhs) % m != 0
        c = int(bad.sum())
        if c and count == 0:
            h, k = np.argwhere(bad)[0]
            first = (g, int(h), int(k))
        count += c
    return count, first[0], first[1], first[2]


def cocycle_defects(table, mul, m, backend=None):
    """Count triples (g, h, k) violating the 2-cocycle identity mod ``m``.

    Returns ``(count, first_failing_triple_or_None)``.
    """
    table = np.ascontiguousarray(table, dtype=np.int64)
    mul = np.ascontiguousarray(mul, dtype=np.int64)
    if _resolve(backend) == "numba":
        count, g, h, k = _cocycle_defects_nb(table, mul, int(m))
    else:
        count, g, h, k = _cocycle_defects_np(table, mul, int(m))
    return int(count), (None if count == 0 else (int(g), int(h), int(k)))


# ---------------------------------------------------------------------------
# Rebuilding a full cocycle table from its values on G x S
# ---------------------------------------------------------------------------


@njit(cache=True)
def _expand_nb(f, mul, parent, pgen, order, m):
    n = mul.shape[0]
    table = np.zeros((n, n), np.int64)
    for idx in range(1, order.shape[0]):
        x = order[idx]
        par = parent[x]
        s = pgen[x]
        base = f[par, s]
        for g in range(n):
            table[g, x] = (table[g, par] + f[mul[g, par], s] - base) % m
    return table


def _expand_np(f, mul, parent, pgen, order, m):
    n = mul.shape[0]
    table = np.zeros((n, n), np.int64)
    for x in order[1:]:
        par = parent[x]
        s = pgen[x]
        table[:, x] = (table[:, par] + f[mul[:, par], s] - f[par, s]) % m
    return table


def expand_cocycle(f, mul, parent, pgen, order, m, backend=None):
    """Extend generator values ``f[g, s] = c(g, s_s)`` to the full table.

    Uses ``c(g, x s) = c(g, x) + c(g x, s) - c(x, s)`` along a spanning tree
    of the right Cayley graph given by ``parent``/``pgen`` in BFS ``order``.
    """
    args = (
        np.ascontiguousarray(f, dtype=np.int64) % m,
        np.ascontiguousarray(mul, dtype=np.int64),
        np.ascontiguousarray(parent, dtype=np.int64),
        np.ascontiguousarray(pgen, dtype=np.int64),
        np.ascontiguousarray(order, dtype=np.int64),
        int(m),
    )
    if _resolve(backend) == "numba":
        return _expand_nb(*args)
    return _expand_np(*args)
