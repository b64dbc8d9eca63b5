"""Second cohomology with trivial coefficients Z/m.

A normalized 2-cocycle is determined by its values on ``G x S`` for a
generating set ``S``: along a spanning tree of the right Cayley graph,
``c(g, x s) = c(g, x) + c(g x, s) - c(x, s)`` rebuilds every column.  So the
unknowns are ``f(x, s) = c(x, s)``, and the linear conditions say that the
rebuilt values are consistent around every non-tree edge of the Cayley
graph.  Consistency is only imposed for ``g`` in ``S``: the set of ``g``
for which the translated edge cochain ``f(g.,.) - f`` is exact is closed
under products, hence a subgroup, hence everything once it contains ``S``.
The cocycle identity for general third arguments then follows by
induction on word length.  This gives ``Z^2 = ker C`` with ``|S|(|G|(|S|-1)+1)``
rows instead of the ``|G|^3`` rows of the plain bar complex.

Classes of ``M(G) = H^2(G, Q/Z)`` are handled at level ``n = |G|`` as
``H^2(G, Z/n)`` modulo the image of the Bockstein from ``H^1(G, Z/n)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import _kernels
from .config import settings
from .errors import CriterionDisagreement, HypothesisViolated, NotCocycle, TooLarge
from .linalg import AbGroupMap, FinAbGroup, _RawTarget, _RawMap, kernel_mod, quotient_presentation, solve_mod
from .perm import (
    PermGroup,
    SubgroupHandle,
    abelianization,
    automorphism_indices,
    cayley_tree,
    is_perfect,
    semidirect_product,
)


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------


@dataclass
class Cochain2:
    """Normalized 2-cochain on an enumerated group with values in Z/m."""

    group: PermGroup
    modulus: int
    table: np.ndarray

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64) % self.modulus

    def value(self, i, j):
        return int(self.table[i, j])

    def is_normalized(self):
        return not self.table[0, :].any() and not self.table[:, 0].any()

    def defects(self, backend=None):
        """``(count, first_triple)`` of cocycle-identity failures."""
        E = self.group.enumeration()
        return _kernels.cocycle_defects(self.table, E.table(), self.modulus, backend=backend)

    def is_cocycle(self):
        return self.defects()[0] == 0

    def __add__(self, other):
        return Cochain2(self.group, self.modulus, self.table + other.table)

    def __mul__(self, k):
        return Cochain2(self.group, self.modulus, self.table * int(k))

    __rmul__ = __mul__

    def to_json(self):
        nz = np.argwhere(self.table != 0)
        return {
            "modulus": int(self.modulus),
            "entries": [[int(i), int(j), int(self.table[i, j])] for i, j in nz],
        }

    @classmethod
    def from_json(cls, group, data):
        if isinstance(data, str):
            data = json.loads(data)
        n = group.order()
        table = np.zeros((n, n), dtype=np.int64)
        for i, j, v in data["entries"]:
            table[i, j] = v
        return cls(group, int(data["modulus"]), table)


def coboundary(group, phi, m):
    """``d phi (g, h) = phi(g) + phi(h) - phi(gh)`` for a 1-cochain on element indices."""
    E = group.enumeration()
    phi = np.asarray(phi, dtype=np.int64) % m
    mul = E.table()
    return Cochain2(group, m, phi[:, None] + phi[None, :] - phi[mul])


def normalize(cochain):
    """Subtract the constant coboundary so that a cocycle becomes normalized."""
    return Cochain2(cochain.group, cochain.modulus, cochain.table - cochain.table[0, 0])


# ---------------------------------------------------------------------------
# the reduced cocycle system
# ---------------------------------------------------------------------------


class _System:
    """Linear-algebra data of the Cayley-graph cocycle system for one group."""

    def __init__(self, group):
        self.group = group
        self.E = group.enumeration(settings.enumeration_cap)
        self.tree = cayley_tree(group)
        self.N = self.E.size
        self.S = len(self.tree.gens)
        self._constraints = None
        self._cocycles = {}
        self._abel = None

    @property
    def nvars(self):
        return self.N * self.S

    def var(self, x, s):
        return x * self.S + s

    def constraints(self):
        if self._constraints is not None:
            return self._constraints
        N, S, t = self.N, self.S, self.tree
        nv = N * S
        P = np.zeros((N, nv), dtype=np.int64)
        for x in t.order[1:].tolist():
            p = t.parent[x]
            P[x] = P[p]
            P[x, p * S + t.pgen[x]] += 1
        # non-tree edges (h, s)
        hs = []
        for s, R in enumerate(t.right):
            h = np.arange(N)
            is_tree = (t.parent[R] == h) & (t.pgen[R] == s)
            for hh in h[~is_tree].tolist():
                hs.append((hh, s))
        hs = np.array(hs, dtype=np.int64).reshape(-1, 2)
        rows = []
        base = np.zeros((len(hs), nv), dtype=np.int64)
        if len(hs):
            targets = np.array([t.right[s][h] for h, s in hs], dtype=np.int64)
            base = P[hs[:, 0]] - P[targets]
            base[np.arange(len(hs)), hs[:, 0] * S + hs[:, 1]] += 1
        for gi in t.gen_idx:
            L = self.E.lmul_by(self.E.elements[gi])
            cols = (L[:, None] * S + np.arange(S)[None, :]).reshape(-1)
            LP = np.zeros_like(P)
            LP[:, cols] = P
            if len(hs):
                r = LP[hs[:, 0]] - LP[targets]
                r[np.arange(len(hs)), L[hs[:, 0]] * S + hs[:, 1]] += 1
                rows.append(r - base)
        # normalization f(e, s) = 0
        norm = np.zeros((S, nv), dtype=np.int64)
        norm[np.arange(S), np.arange(S)] = 1
        rows.append(norm)
        C = np.concatenate(rows) if rows else np.zeros((0, nv), np.int64)
        C = C[np.any(C != 0, axis=1)]
        self._constraints = C
        return C

    def cocycle_space(self, m):
        if m not in self._cocycles:
            if self.nvars == 0:
                self._cocycles[m] = np.zeros((0, 0), np.int64)
            else:
                self._cocycles[m] = kernel_mod(self.constraints(), m).T
        return self._cocycles[m]

    def coboundary_rows(self, m):
        N, S = self.N, self.S
        rows = np.zeros((max(N - 1, 0), N * S), dtype=np.int64)
        for s, R in enumerate(self.tree.right):
            g = np.arange(N)
            si = self.tree.gen_idx[s]
            # phi = delta_x:  f(g, s) = [g == x] + [s == x] - [g s == x]
            rows[g[1:] - 1, g[1:] * S + s] += 1
            rows[si - 1, g * S + s] += 1
            gs = R
            mask = gs != 0
            rows[gs[mask] - 1, g[mask] * S + s] -= 1
        return rows[np.any(rows != 0, axis=1)]

    def abelianization(self):
        if self._abel is None:
            self._abel = abelianization(self.group)
        return self._abel

    def bockstein_rows(self, n):
        A, proj = self.abelianization()
        N, S = self.N, self.S
        rows = []
        for i, d in enumerate(A.invariant_factors):
            c = (n // gcd(n, d)) % n
            if c == 0:
                continue
            a = (proj[:, i] * c) % n
            r = np.zeros(N * S, dtype=np.int64)
            for s, R in enumerate(self.tree.right):
                si = self.tree.gen_idx[s]
                vals = (a + a[si] - a[R]) // n
                r[np.arange(N) * S + s] = vals % n
            if r.any():
                rows.append(r)
        return np.array(rows, dtype=np.int64).reshape(-1, N * S)

    def f_vector(self, table):
        """Values on G x S of a full cocycle table."""
        if self.S == 0:
            return np.zeros(0, np.int64)
        return np.asarray(table)[:, self.tree.gen_idx].reshape(-1)

    def expand(self, f, m):
        if self.S == 0:
            return np.zeros((self.N, self.N), np.int64)
        F = np.asarray(f, dtype=np.int64).reshape(self.N, self.S)
        t = self.tree
        return _kernels.expand_cocycle(F, self.E.table(), t.parent, t.pgen, t.order, m)


def _system(group):
    cache = group.__dict__.setdefault("_cohom_system", None)
    if cache is None:
        cache = _System(group)
        group.__dict__["_cohom_system"] = cache
    return cache


def _check_direct(group):
    n = group.order()
    cap = settings.max_direct_order
    if n > cap:
        raise TooLarge(n, cap, "direct cohomology is capped; use the sylow or semidirect strategy")
    return n


# ---------------------------------------------------------------------------
# cohomology groups
# ---------------------------------------------------------------------------


@dataclass
class CohomGroup:
    """A quotient of the cocycle space at level Z/m, with coordinates."""

    group: PermGroup
    modulus: int
    presentation: FinAbGroup
    qmap: object = field(repr=False)
    system: object = field(repr=False)
    rel_rows: np.ndarray = field(repr=False, default=None)
    bockstein: bool = False
    _gens: list = field(repr=False, default=None)

    @property
    def invariant_factors(self):
        return self.presentation.invariant_factors

    def generator_vectors(self):
        return self.qmap.representatives

    @property
    def generator_cocycles(self):
        if self._gens is None:
            self._gens = [
                Cochain2(self.group, self.modulus, self.system.expand(v, self.modulus))
                for v in self.qmap.representatives
            ]
        return self._gens

    def coordinates(self, cochain, check=True):
        """Coordinates of a normalized cocycle; raises if it is not one.

        ``check=False`` skips the full cocycle test for inputs that are
        cocycles by construction (restrictions, pullbacks).
        """
        if isinstance(cochain, Cochain2):
            if cochain.modulus != self.modulus:
                raise ValueError("modulus mismatch")
            table = cochain.table
        else:
            table = np.asarray(cochain)
        if check and self.system.N > 1:
            c = Cochain2(self.group, self.modulus, table)
            if not (c.is_normalized() and c.is_cocycle()):
                raise NotCocycle("cochain is not a normalized cocycle")
        f = self.system.f_vector(table)
        from .errors import InconsistentPresentation

        try:
            return self.qmap.coordinates(f)
        except InconsistentPresentation:
            raise NotCocycle("cochain is not a normalized cocycle") from None

    def is_zero(self, cochain, check=True):
        return not any(self.coordinates(cochain, check))

    def combination(self, coords):
        """The cocycle ``sum coords[i] * generator_i``."""
        vec = np.zeros(self.system.nvars, dtype=np.int64)
        for c, v in zip(coords, self.qmap.representatives):
            vec = (vec + int(c) * v) % self.modulus
        return Cochain2(self.group, self.modulus, self.system.expand(vec, self.modulus))

    def witness_relations(self):
        return self.rel_rows


@dataclass
class CohomClass:
    cohom: CohomGroup
    cochain: Cochain2

    def coordinates(self):
        return self.cohom.coordinates(self.cochain)

    def is_zero(self):
        return self.cohom.is_zero(self.cochain)


def _quotient(group, m, with_bockstein):
    sysd = _system(group)
    if sysd.nvars == 0:
        return CohomGroup(group, m, FinAbGroup(()), _TrivialQMap(m), sysd, np.zeros((0, 0), np.int64), with_bockstein)
    Z = sysd.cocycle_space(m)
    rels = [sysd.coboundary_rows(m) % m]
    if with_bockstein:
        rels.append(sysd.bockstein_rows(m))
    R = np.concatenate([r.reshape(-1, sysd.nvars) for r in rels])
    pres, qmap = quotient_presentation(Z, R, m)
    return CohomGroup(group, m, pres, qmap, sysd, R, with_bockstein)


class _TrivialQMap:
    def __init__(self, m):
        self.modulus = m
        self.invariant_factors = ()
        self.representatives = np.zeros((0, 0), np.int64)

    def coordinates(self, x):
        return ()


def h2_mod(G, m):
    """``H^2(G, Z/m)`` with trivial action."""
    _check_direct(G)
    if m < 2:
        raise ValueError("modulus must be at least 2")
    key = ("h2", m)
    cache = G.__dict__.setdefault("_cohom_cache", {})
    if key not in cache:
        cache[key] = _quotient(G, m, with_bockstein=False)
    return cache[key]


def schur_multiplier(G, modulus=None):
    """``M(G)`` as ``H^2(G, Z/n) / beta(H^1(G, Z/n))``, ``n = |G|`` by default.

    For a modulus that is not a multiple of the exponent of ``M(G)`` the
    result is ``Hom(M(G), Z/modulus)`` instead, which is what restriction
    tests at a fixed level need.
    """
    n = _check_direct(G)
    m = n if modulus is None else int(modulus)
    if m < 2:
        return CohomGroup(G, 1, FinAbGroup(()), _TrivialQMap(1), _system(G), None, True)
    key = ("schur", m)
    cache = G.__dict__.setdefault("_cohom_cache", {})
    if key not in cache:
        cache[key] = _quotient(G, m, with_bockstein=True)
    return cache[key]


def bockstein_image(G, n):
    """Subgroup of ``H^2(G, Z/n)`` generated by Bockstein images of characters.

    Returned as a list of cocycles together with their coordinates in
    ``h2_mod(G, n)``, and the order of the generated subgroup.
    """
    H = h2_mod(G, n)
    sysd = H.system
    rows = sysd.bockstein_rows(n) if sysd.nvars else np.zeros((0, 0), np.int64)
    cocycles = [Cochain2(G, n, sysd.expand(r, n)) for r in rows]
    coords = [H.coordinates(c) for c in cocycles]
    M = schur_multiplier(G, modulus=n)
    order = H.presentation.order // M.presentation.order if H.presentation.order else 1
    return BocksteinImage(cocycles, coords, order)


@dataclass
class BocksteinImage:
    cocycles: list
    coordinates: list
    order: int


# ---------------------------------------------------------------------------
# restriction
# ---------------------------------------------------------------------------


def _subgroup_perm_group(B):
    return B.group if isinstance(B, SubgroupHandle) else B


def restrict_cochain(cochain, B):
    """Restriction of a cochain on ``G`` to ``B <= G`` (on B's own element order)."""
    H = _subgroup_perm_group(B)
    EG = cochain.group.enumeration()
    EB = H.enumeration()
    idx = EG.index_of(EB.elements)
    return Cochain2(H, cochain.modulus, cochain.table[np.ix_(idx, idx)])


def restrict_class(c, B):
    """Restrict a class of ``M(G)`` to ``B`` and express it in ``M(B)`` at the same level."""
    if isinstance(c, CohomClass):
        cochain = c.cochain
    else:
        cochain = c
    H = _subgroup_perm_group(B)
    res = restrict_cochain(cochain, H)
    MB = schur_multiplier(H, modulus=cochain.modulus)
    return CohomClass(MB, res)


def restriction_is_zero_certificate(cochain, B):
    """Independent proof data: solve ``res = d phi + beta`` on ``B``.

    Returns the solution vector (so the restriction is zero) or ``None``.
    """
    H = _subgroup_perm_group(B)
    res = restrict_cochain(cochain, H)
    sysd = _system(H)
    if sysd.nvars == 0:
        return np.zeros(0, np.int64)
    m = cochain.modulus
    rels = np.concatenate(
        [sysd.coboundary_rows(m).reshape(-1, sysd.nvars), sysd.bockstein_rows(m).reshape(-1, sysd.nvars)]
    )
    f = sysd.f_vector(res.table)
    if rels.shape[0] == 0:
        return np.zeros(0, np.int64) if not (f % m).any() else None
    return solve_mod(rels.T, f, m)


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------


def aut_action_on_m(G, autos, M=None):
    """Matrices of ``[c] -> [c o (s x s)]`` on the generators of ``M(G)``.

    Each automorphism is given by the images of ``G.nontrivial_generators()``.
    """
    M = schur_multiplier(G) if M is None else M
    maps = []
    for images in autos:
        phi = automorphism_indices(G, images)
        cols = []
        for gamma in M.generator_cocycles:
            t = gamma.table[np.ix_(phi, phi)]
            cols.append(M.coordinates(Cochain2(G, M.modulus, t), check=False))
        matrix = [[cols[j][i] for j in range(len(cols))] for i in range(M.presentation.rank)]
        maps.append(AbGroupMap(M.presentation, M.presentation, matrix))
    return maps


def invariant_subgroup(M, maps):
    """Common fixed points of the given endomorphisms of ``M``."""
    A = M.presentation if isinstance(M, CohomGroup) else M
    if not maps or A.rank == 0:
        return FinAbGroup(A.invariant_factors, witnesses=tuple(
            tuple(int(i == j) for i in range(A.rank)) for j in range(A.rank)))
    rows, factors = [], []
    for f in maps:
        for i in range(A.rank):
            rows.append([(f.matrix[i][j] - (i == j)) for j in range(A.rank)])
            factors.append(A.invariant_factors[i])
    return _RawMap(A, _RawTarget(tuple(factors)), rows).kernel()


@dataclass
class SemidirectMultiplier:
    group: FinAbGroup
    invariant_part: FinAbGroup
    quotient_part: FinAbGroup
    direct: FinAbGroup = None

    @property
    def consistent(self):
        return self.direct is None or self.direct == self.group


def semidirect_multiplier(N, H, action, cross_check=True):
    """``M(N)^H x M(H)`` for ``N`` perfect; compared with a direct computation when small."""
    if not is_perfect(N):
        raise HypothesisViolated("the semidirect formula needs N perfect (Hom(N, Q/Z) = 1)")
    MN = schur_multiplier(N)
    inv = invariant_subgroup(MN, aut_action_on_m(N, action, MN)) if H.order() > 1 else MN.presentation
    MH = schur_multiplier(H).presentation if H.order() > 1 else FinAbGroup(())
    total = FinAbGroup(inv.invariant_factors).direct_sum(MH)
    direct = None
    if cross_check and N.order() * H.order() <= settings.max_direct_order:
        GH = semidirect_product(N, H, action) if H.order() > 1 else N
        direct = schur_multiplier(GH).presentation
        if direct != total:
            raise CriterionDisagreement(f"semidirect formula gives {total}, direct computation gives {direct}")
    return SemidirectMultiplier(total, FinAbGroup(inv.invariant_factors), MH, direct)
