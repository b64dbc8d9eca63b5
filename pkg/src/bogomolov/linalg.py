"""Exact linear algebra over Z and Z/m, and finite abelian groups.

Two engines live here.  ``smith_normal_form`` works over Z with Python
integers and is used for small presentation matrices where coefficient
growth matters.  Everything over Z/m is split by the Chinese remainder
theorem into local rings Z/p^k and handed to the fixed-width kernel in
``_kernels.local_snf``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import prod

import numpy as np

from . import _kernels
from .errors import InconsistentPresentation


# ---------------------------------------------------------------------------
# number theory helpers
# ---------------------------------------------------------------------------


def factorize(n):
    """Prime factorisation of a positive integer as ``{p: k}``."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def p_part(n, p):
    k = 1
    while n % p == 0:
        n //= p
        k *= p
    return k


def crt_idempotent(m, q):
    """The e in Z/m with e = 1 mod q and e = 0 mod m/q (q | m, coprime parts)."""
    r = m // q
    if r == 1:
        return 1
    return (r * pow(r, -1, q)) % m


def _matmul_mod(A, B, mod):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    inner = A.shape[-1]
    if inner == 0:
        shape = A.shape[:-1] + B.shape[1:]
        return np.zeros(shape, np.int64)
    if mod * mod * inner < (1 << 62):
        return (A @ B) % mod
    out = (A.astype(object) @ B.astype(object)) % mod
    return out.astype(np.int64)


# ---------------------------------------------------------------------------
# sparse integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparseIntMatrix:
    """Coordinate-list integer matrix in canonical (row, col) order."""

    rows: int
    cols: int
    entries: tuple = ()

    def __post_init__(self):
        prev = None
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r}, {c}) out of range")
            if v == 0:
                raise ValueError("explicit zero entry")
            if prev is not None and (r, c) <= prev:
                raise ValueError("entries must be sorted without duplicates")
            prev = (r, c)

    @classmethod
    def from_entries(cls, rows, cols, triples):
        acc = {}
        for r, c, v in triples:
            acc[(int(r), int(c))] = acc.get((int(r), int(c)), 0) + int(v)
        entries = tuple((r, c, v) for (r, c), v in sorted(acc.items()) if v != 0)
        return cls(rows, cols, entries)

    @classmethod
    def from_dense(cls, a):
        a = [list(map(int, row)) for row in a]
        rows = len(a)
        cols = len(a[0]) if rows else 0
        entries = tuple(
            (i, j, v) for i, row in enumerate(a) for j, v in enumerate(row) if v != 0
        )
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple((i, i, 1) for i in range(n)))

    def to_lists(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] = v
        return out

    def to_numpy(self, dtype=np.int64):
        out = np.zeros((self.rows, self.cols), dtype=dtype)
        for r, c, v in self.entries:
            out[r, c] = v
        return out

    def __matmul__(self, other):
        right = {}
        for r, c, v in other.entries:
            right.setdefault(r, []).append((c, v))
        acc = {}
        for r, k, v in self.entries:
            for c, w in right.get(k, ()):
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return SparseIntMatrix.from_entries(
            self.rows, other.cols, ((r, c, v) for (r, c), v in acc.items())
        )

    def transpose(self):
        return SparseIntMatrix.from_entries(
            self.cols, self.rows, ((c, r, v) for r, c, v in self.entries)
        )

    def diagonal(self):
        d = [0] * min(self.rows, self.cols)
        for r, c, v in self.entries:
            if r == c:
                d[r] = v
        return d

    def is_diagonal(self):
        return all(r == c for r, c, _ in self.entries)

    def to_json(self):
        return {"rows": self.rows, "cols": self.cols, "entries": [list(e) for e in self.entries]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_entries(data["rows"], data["cols"], data["entries"])


def _as_int_matrix(M):
    if isinstance(M, SparseIntMatrix):
        return M.to_numpy()
    a = np.asarray(M, dtype=np.int64)
    if a.ndim == 1:
        a = a[None, :]
    return a


# ---------------------------------------------------------------------------
# Smith normal form over Z (arbitrary precision)
# ---------------------------------------------------------------------------


def _snf_lists(A, track=True):
    """In-place Smith form of a list-of-lists integer matrix.

    Returns ``(diag, U, Uinv, V)`` with ``U A V = D``.  Pivot: minimal
    absolute value, ties broken by the smaller combined row+column nonzero
    count, then by the smallest (row, col).
    """
    r = len(A)
    c = len(A[0]) if r else 0
    U = [[int(i == j) for j in range(r)] for i in range(r)] if track else None
    Ui = [[int(i == j) for j in range(r)] for i in range(r)] if track else None
    V = [[int(i == j) for j in range(c)] for i in range(c)] if track else None

    def row_op(dst, src, q):
        # row[dst] -= q * row[src]
        if q == 0:
            return
        Ad, As = A[dst], A[src]
        for j in range(c):
            if As[j]:
                Ad[j] -= q * As[j]
        if track:
            Udst, Usrc = U[dst], U[src]
            for j in range(r):
                if Usrc[j]:
                    Udst[j] -= q * Usrc[j]
            for row in Ui:
                if row[dst]:
                    row[src] += q * row[dst]

    def col_op(dst, src, q):
        # col[dst] -= q * col[src]
        if q == 0:
            return
        for row in A:
            if row[src]:
                row[dst] -= q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    def swap_rows(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    diag = []
    for t in range(min(r, c)):
        row_nnz = [sum(1 for j in range(t, c) if A[i][j]) for i in range(r)]
        col_nnz = [sum(1 for i in range(t, r) if A[i][j]) for j in range(c)]
        best = None
        for i in range(t, r):
            for j in range(t, c):
                v = A[i][j]
                if v:
                    key = (abs(v), row_nnz[i] + col_nnz[j], i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        swap_rows(t, best[2])
        swap_cols(t, best[3])
        while True:
            p = A[t][t]
            for i in range(t + 1, r):
                if A[i][t]:
                    row_op(i, t, A[i][t] // p)
            for j in range(t + 1, c):
                if A[t][j]:
                    col_op(j, t, A[t][j] // p)
            rest = [(abs(A[i][t]), 0, i) for i in range(t + 1, r) if A[i][t]]
            rest += [(abs(A[t][j]), 1, j) for j in range(t + 1, c) if A[t][j]]
            if rest:
                _, kind, idx = min(rest)
                if kind == 0:
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            bad = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if track:
                U[t] = [-x for x in U[t]]
                for row in Ui:
                    row[t] = -row[t]
        diag.append(A[t][t])
    return diag, U, Ui, V


def smith_normal_form(M):
    """Smith normal form ``(U, D, V)`` of an integer matrix with ``U M V = D``.

    ``U`` and ``V`` are unimodular; ``D`` is diagonal with nonnegative
    entries ``d1 | d2 | ...``.  Accepts a :class:`SparseIntMatrix` or any
    dense integer array-like.
    """
    if not isinstance(M, SparseIntMatrix):
        M = SparseIntMatrix.from_dense(np.asarray(M, dtype=object).tolist() if len(M) else [])
    A = M.to_lists()
    if M.rows == 0 or M.cols == 0:
        return SparseIntMatrix.identity(M.rows), M, SparseIntMatrix.identity(M.cols)
    diag, U, _, V = _snf_lists(A)
    D = SparseIntMatrix.from_entries(M.rows, M.cols, ((i, i, d) for i, d in enumerate(diag)))
    return SparseIntMatrix.from_dense(U), D, SparseIntMatrix.from_dense(V)


def _row_hermite(rows, ncols):
    """Integer row-echelon basis of the lattice spanned by ``rows``."""
    basis = {}  # pivot column -> row
    for row in rows:
        row = [int(x) for x in row]
        col = 0
        while True:
            while col < ncols and row[col] == 0:
                col += 1
            if col == ncols:
                break
            if col not in basis:
                if row[col] < 0:
                    row = [-x for x in row]
                basis[col] = row
                break
            b = basis[col]
            # extended gcd combination of two rows on this column
            a0, b0 = row[col], b[col]
            g, x, y = _xgcd(b0, a0)
            new_b = [x * bb + y * rr for bb, rr in zip(b, row)]
            row = [(b0 // g) * rr - (a0 // g) * bb for bb, rr in zip(b, row)]
            if new_b[col] < 0:
                new_b = [-v for v in new_b]
            basis[col] = new_b
    return [basis[k] for k in sorted(basis)]


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def integer_cokernel(relation_rows, ncols):
    """Structure of Z^ncols / (row lattice of ``relation_rows``).

    Returns ``(factors, V)`` where ``factors[i]`` is the order of coordinate
    ``i`` (0 meaning infinite) and ``x @ V`` gives coordinates of a row
    vector ``x``.
    """
    basis = _row_hermite(relation_rows, ncols)
    A = [list(b) for b in basis] + [[0] * ncols for _ in range(max(0, ncols - len(basis)))]
    diag, _, _, V = _snf_lists(A)
    factors = diag + [0] * (ncols - len(diag))
    factors = [abs(d) for d in factors]
    return factors, V


# ---------------------------------------------------------------------------
# linear algebra over Z/m
# ---------------------------------------------------------------------------


def _prime_powers(m):
    if m < 2:
        raise ValueError("modulus must be at least 2")
    return [(p, k, p**k) for p, k in sorted(factorize(m).items())]


def kernel_mod(M, m, backend=None):
    """Generators of ``{x : M x = 0 mod m}`` as the columns of an int array."""
    A = _as_int_matrix(M)
    cols = A.shape[1]
    gens = []
    for p, k, q in _prime_powers(m):
        rank, vals, _, _, V = _kernels.local_snf(A, p, k, track_u=False, backend=backend)
        e = crt_idempotent(m, q)
        for i in range(rank):
            if vals[i] > 0:
                gens.append((V[:, i] * p ** (k - int(vals[i])) % q) * e % m)
        for i in range(rank, cols):
            gens.append(V[:, i] * e % m)
    if not gens:
        return np.zeros((cols, 0), np.int64)
    out = np.stack(gens, axis=1) % m
    keep = np.any(out != 0, axis=0)
    return out[:, keep]


def solve_mod(M, b, m, backend=None):
    """One solution of ``M x = b (mod m)`` or ``None`` if ``b`` is not in the image."""
    A = _as_int_matrix(M)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    cols = A.shape[1]
    x = np.zeros(cols, dtype=object)
    for p, k, q in _prime_powers(m):
        rank, vals, U, _, V = _kernels.local_snf(A, p, k, track_u=True, backend=backend)
        c = _matmul_mod(U, (b % q)[:, None], q)[:, 0]
        if np.any(c[rank:] != 0):
            return None
        y = np.zeros(cols, np.int64)
        for i in range(rank):
            pv = p ** int(vals[i])
            if c[i] % pv:
                return None
            y[i] = c[i] // pv
        xp = _matmul_mod(V, y[:, None], q)[:, 0]
        x = (x + xp.astype(object) * crt_idempotent(m, q)) % m
    return x.astype(np.int64)


@dataclass
class _LocalQuotient:
    p: int
    k: int
    U1: np.ndarray
    vals1: np.ndarray
    U2: np.ndarray
    exps: list  # exponent of each surviving quotient generator (ascending)
    keep: list  # row indices of U2 giving those generators
    reps: np.ndarray  # (len(keep), N) representatives mod p^k

    def coordinates(self, x):
        q = self.p**self.k
        t1 = len(self.vals1)
        c = _matmul_mod(self.U1, (np.asarray(x, np.int64) % q)[:, None], q)[:, 0]
        if np.any(c[t1:] != 0):
            raise InconsistentPresentation("vector is not in the span of the generators")
        pv = np.array([self.p ** int(v) for v in self.vals1], dtype=np.int64)
        if np.any(c[:t1] % pv):
            raise InconsistentPresentation("vector is not in the span of the generators")
        y = c[:t1] // pv
        z = _matmul_mod(self.U2, y[:, None], q)[:, 0] if t1 else np.zeros(0, np.int64)
        return [int(z[i]) % self.p**e for i, e in zip(self.keep, self.exps)]


def _local_quotient(G, R, p, k, backend):
    q = p**k
    N = G.shape[0]
    rank1, vals1, U1, U1inv, _ = _kernels.local_snf(G, p, k, track_u=True, backend=backend)
    vals1 = vals1[:rank1]
    pv = np.array([p ** int(v) for v in vals1], dtype=np.int64)
    W = (U1inv[:, :rank1] * pv[None, :]) % q
    if R.shape[1]:
        C = _matmul_mod(U1, R % q, q)
        if np.any(C[rank1:] != 0) or np.any(C[:rank1] % pv[:, None]):
            raise InconsistentPresentation("relations are not in the span of the generators")
        Y = C[:rank1] // pv[:, None]
    else:
        Y = np.zeros((rank1, 0), np.int64)
    local_orders = np.array([p ** (k - int(v)) for v in vals1], dtype=np.int64) % q
    Rel = np.concatenate([Y, np.diag(local_orders)], axis=1) if rank1 else Y
    if rank1:
        rank2, vals2, U2, U2inv, _ = _kernels.local_snf(Rel, p, k, track_u=True, backend=backend)
    else:
        rank2, vals2, U2, U2inv = 0, np.zeros(0, np.int64), np.zeros((0, 0), np.int64), None
    exps, keep = [], []
    for i in range(rank1):
        e = int(vals2[i]) if i < rank2 else k
        if e > 0:
            exps.append(e)
            keep.append(i)
    if keep:
        reps = _matmul_mod(W, U2inv[:, keep], q).T
    else:
        reps = np.zeros((0, N), np.int64)
    return _LocalQuotient(p, k, U1, vals1, U2, exps, keep, reps)


@dataclass
class QuotientMap:
    """Coordinates on span(gens)/span(rels) over Z/m."""

    modulus: int
    invariant_factors: tuple
    representatives: np.ndarray  # one Z/m vector per quotient generator
    _parts: list = field(repr=False, default_factory=list)
    _slots: list = field(repr=False, default_factory=list)

    def coordinates(self, x):
        """Coordinates in the invariant-factor basis; raises if ``x`` is outside span(gens)."""
        n = len(self.invariant_factors)
        residues = [[] for _ in range(n)]
        for part, slots in zip(self._parts, self._slots):
            for pos, val, e in zip(slots, part.coordinates(x), part.exps):
                residues[pos].append((val, part.p**e))
        out = []
        for d, res in zip(self.invariant_factors, residues):
            val = 0
            for r, q in res:
                val = (val + r * crt_idempotent(d, q)) % d
            out.append(val)
        return tuple(out)

    def is_zero(self, x):
        return not any(self.coordinates(x))


def quotient_presentation(gens, rels, m, backend=None):
    """Invariant factors of span(gens)/span(rels) over Z/m, plus a coordinate map.

    ``gens`` and ``rels`` are sequences of vectors (rows).  Raises
    :class:`InconsistentPresentation` when some relation is outside span(gens).
    """
    G = np.asarray(gens, dtype=np.int64)
    R = np.asarray(rels, dtype=np.int64)
    if G.ndim == 1:
        G = G.reshape(0 if G.size == 0 else 1, -1)
    N = G.shape[1] if G.size else (R.shape[1] if R.ndim == 2 else 0)
    G = G.reshape(-1, N).T % m
    R = R.reshape(-1, N).T % m if R.size else np.zeros((N, 0), np.int64)
    if N == 0:
        return FinAbGroup(()), QuotientMap(m, (), np.zeros((0, 0), np.int64))
    parts = []
    for p, k, q in _prime_powers(m):
        Gp = G % q
        Gp = Gp[:, np.any(Gp != 0, axis=0)]
        Rp = R % q
        Rp = Rp[:, np.any(Rp != 0, axis=0)]
        parts.append(_local_quotient(Gp, Rp, p, k, backend))
    n = max((len(part.exps) for part in parts), default=0)
    factors = [1] * n
    slots = []
    reps = np.zeros((n, N), dtype=object)
    for part, (p, k, q) in zip(parts, _prime_powers(m)):
        off = n - len(part.exps)
        these = list(range(off, n))
        slots.append(these)
        e = crt_idempotent(m, q)
        for pos, ex, rep in zip(these, part.exps, part.reps):
            factors[pos] *= p**ex
            reps[pos] = (reps[pos] + rep.astype(object) * e) % m
    group = FinAbGroup(tuple(factors))
    qmap = QuotientMap(m, tuple(factors), reps.astype(np.int64), parts, slots)
    return group, qmap


# ---------------------------------------------------------------------------
# finite abelian groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group given by invariant factors d1 | d2 | ... (each >= 2)."""

    invariant_factors: tuple = ()
    witnesses: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for d in fs:
            if d < 2:
                raise ValueError("invariant factors must be at least 2")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")

    @classmethod
    def from_cyclic_orders(cls, orders, witnesses=None):
        """Normalise a direct sum of cyclic groups of arbitrary orders."""
        per_prime = {}
        for n in orders:
            n = int(n)
            if n == 0:
                raise ValueError("infinite cyclic factor in a finite group")
            for p, k in factorize(n).items():
                per_prime.setdefault(p, []).append(p**k)
        length = max((len(v) for v in per_prime.values()), default=0)
        factors = [1] * length
        for p, powers in per_prime.items():
            powers.sort()
            off = length - len(powers)
            for i, q in enumerate(powers):
                factors[off + i] *= q
        return cls(tuple(factors), witnesses)

    @property
    def order(self):
        return prod(self.invariant_factors)

    @property
    def rank(self):
        return len(self.invariant_factors)

    @property
    def exponent(self):
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self):
        return not self.invariant_factors

    def primary_components(self):
        """The p-primary parts as ``{p: FinAbGroup}`` (empty for the trivial group)."""
        out = {}
        for d in self.invariant_factors:
            for p, k in factorize(d).items():
                out.setdefault(p, []).append(p**k)
        return {p: FinAbGroup(tuple(v)) for p, v in sorted(out.items())}

    def direct_sum(self, other):
        return FinAbGroup.from_cyclic_orders(self.invariant_factors + other.invariant_factors)

    def to_json(self):
        return list(self.invariant_factors)

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def _int_lattice_quotient(basis_cols, sub_cols, dim):
    """Z-span(basis_cols) / Z-span(sub_cols) for a full-rank ``basis_cols``.

    Returns ``(factors, reps)`` with reps given in ambient coordinates.
    """
    B = [[basis_cols[j][i] for j in range(dim)] for i in range(dim)]
    diagB, UB, _, VB = _snf_lists([row[:] for row in B])
    if len(diagB) < dim or any(d == 0 for d in diagB):
        raise ValueError("lattice basis is not of full rank")
    coords = []
    for v in sub_cols:
        w = [sum(UB[i][j] * v[j] for j in range(dim)) for i in range(dim)]
        for i in range(dim):
            if w[i] % diagB[i]:
                raise InconsistentPresentation("sublattice not contained in lattice")
            w[i] //= diagB[i]
        coords.append([sum(VB[i][j] * w[j] for j in range(dim)) for i in range(dim)])
    C = [[coords[j][i] for j in range(len(coords))] for i in range(dim)]
    diagC, _, UCi, _ = _snf_lists([row[:] for row in C] if coords else [[0] for _ in range(dim)])
    diagC = diagC + [0] * (dim - len(diagC))
    factors, reps = [], []
    for i, d in enumerate(diagC):
        d = abs(d)
        if d == 1:
            continue
        if d == 0:
            raise ValueError("quotient is infinite")
        col = [UCi[r][i] for r in range(dim)]
        reps.append([sum(B[r][j] * col[j] for j in range(dim)) for r in range(dim)])
        factors.append(d)
    return factors, reps


@dataclass
class AbGroupMap:
    """Homomorphism between finite abelian groups in their generator coordinates.

    ``matrix[i][j]`` is coordinate ``i`` of the image of source generator ``j``.
    """

    source: FinAbGroup
    target: FinAbGroup
    matrix: list

    def __post_init__(self):
        self.matrix = [[int(x) for x in row] for row in self.matrix]
        t, s = self.target.rank, self.source.rank
        if len(self.matrix) != t or any(len(row) != s for row in self.matrix):
            raise ValueError("matrix shape does not match source/target ranks")
        for j, a in enumerate(self.source.invariant_factors):
            for i, b in enumerate(self.target.invariant_factors):
                if (a * self.matrix[i][j]) % b:
                    raise ValueError("matrix does not respect generator orders")

    def __call__(self, x):
        return tuple(
            sum(row[j] * x[j] for j in range(self.source.rank)) % b
            for row, b in zip(self.matrix, self.target.invariant_factors)
        )

    def is_identity(self):
        if self.source != self.target:
            return False
        return all(
            (self.matrix[i][j] - (i == j)) % self.target.invariant_factors[i] == 0
            for i in range(self.target.rank)
            for j in range(self.source.rank)
        )

    def kernel(self):
        """Kernel as a FinAbGroup whose witnesses are source coordinates of its generators."""
        s, t = self.source.rank, self.target.rank
        if s == 0:
            return FinAbGroup((), witnesses=())
        a = self.source.invariant_factors
        b = self.target.invariant_factors
        block = [self.matrix[i][:] + [b[i] if k == i else 0 for k in range(t)] for i in range(t)]
        if t:
            diag, _, _, V = _snf_lists(block)
            rank = sum(1 for d in diag if d)
            kernel_cols = [[V[i][j] for i in range(s)] for j in range(rank, s + t)]
        else:
            kernel_cols = [[int(i == j) for i in range(s)] for j in range(s)]
        sub = [[a[j] if i == j else 0 for i in range(s)] for j in range(s)]
        factors, reps = _int_lattice_quotient(kernel_cols, sub, s)
        reps = tuple(tuple(int(x) % a[i] for i, x in enumerate(r)) for r in reps)
        group = FinAbGroup(tuple(factors), witnesses=reps)
        return group

    def image_order(self):
        return self.source.order // self.kernel().order


def stack_maps(maps):
    """Combine maps with a common source into one map to the direct sum of targets."""
    source = maps[0].source
    factors, rows = [], []
    for f in maps:
        factors.extend(f.target.invariant_factors)
        rows.extend(f.matrix)
    # direct sums of invariant-factor presentations need not be in chain
    # form; kernels only depend on the orders so use a cyclic-orders target
    target = _RawTarget(tuple(factors))
    return _RawMap(source, target, rows)


@dataclass(frozen=True)
class _RawTarget:
    invariant_factors: tuple

    @property
    def rank(self):
        return len(self.invariant_factors)


class _RawMap(AbGroupMap):
    def __post_init__(self):
        self.matrix = [[int(x) for x in row] for row in self.matrix]
