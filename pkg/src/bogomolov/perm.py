"""Permutation groups: elements, stabilizer chains and enumerated operations.

Convention: permutations act on the right on ``{0, ..., d-1}``.  The product
``p * q`` applies ``p`` first, so ``(p * q).images[i] == q.images[p.images[i]]``,
and the commutator is ``[x, y] = x^-1 y^-1 x y``.

Enumerated groups list their elements in lexicographic order of image
arrays, so the identity always has index 0.  Operations that need an index
for every element go through ``PermGroup.enumeration()``, which refuses
groups above the scan ceiling; generator-only routines (order, membership,
normal closure, derived subgroup) work at any size.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .config import settings
from .errors import (
    InvalidGroup,
    InvalidPermutation,
    NotAutomorphism,
    NotCentral,
    NotMember,
    TooLarge,
)
from .linalg import FinAbGroup, integer_cokernel


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------


class Permutation:
    """Immutable permutation of ``{0, ..., d-1}`` stored as its image tuple."""

    __slots__ = ("images", "_hash")

    def __init__(self, images, check=True):
        images = tuple(int(x) for x in images)
        if check:
            if not images:
                raise InvalidPermutation("permutations of the empty set are not supported")
            if sorted(images) != list(range(len(images))):
                raise InvalidPermutation(f"{list(images)} is not a permutation of 0..{len(images) - 1}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, degree):
        return cls(range(degree), check=False)

    @classmethod
    def from_cycles(cls, degree, cycles):
        img = list(range(degree))
        seen = set()
        for cyc in cycles:
            cyc = [int(x) for x in cyc]
            for x in cyc:
                if not 0 <= x < degree:
                    raise InvalidPermutation(f"point {x} outside 0..{degree - 1}")
                if x in seen:
                    raise InvalidPermutation(f"point {x} repeated in cycle notation")
                seen.add(x)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img, check=False)

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def __mul__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise InvalidPermutation("degree mismatch in product")
        q = other.images
        return Permutation(tuple(q[i] for i in self.images), check=False)

    def inverse(self):
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv, check=False)

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, g):
        """``g^-1 * self * g``."""
        return g.inverse() * self * g

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self):
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self):
        o = 1
        for c in self.cycles():
            o = o * len(c) // gcd(o, len(c))
        return o

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles()) or "()"
        return f"Permutation({cyc}, degree={self.degree})"

    def to_list(self):
        return list(self.images)


def commutator(x, y):
    return x.inverse() * y.inverse() * x * y


# ---------------------------------------------------------------------------
# Schreier-Sims
# ---------------------------------------------------------------------------


@dataclass
class BSGS:
    base: list
    strong: list
    transversals: list  # per level: dict point -> coset representative u with base[l]^u == point

    @property
    def order(self):
        o = 1
        for t in self.transversals:
            o *= len(t)
        return o


def _orbit_transversal(point, gens, identity):
    trans = {point: identity}
    queue = [point]
    for x in queue:
        u = trans[x]
        for g in gens:
            y = g.images[x]
            if y not in trans:
                trans[y] = u * g
                queue.append(y)
    return trans


def _sift(g, base, transversals):
    for level, b in enumerate(base):
        pt = g.images[b]
        t = transversals[level]
        if pt not in t:
            return g, level
        g = g * t[pt].inverse()
    return g, len(base)


def schreier_sims(degree, gens, base=None, strong=None):
    """Deterministic Schreier-Sims.  ``base``/``strong`` seed the computation."""
    identity = Permutation.identity(degree)
    strong = [g for g in (strong or []) + list(gens) if not g.is_identity()]
    dedup = []
    seen = set()
    for g in strong:
        if g not in seen:
            seen.add(g)
            dedup.append(g)
    strong = dedup
    base = list(base or [])
    for g in strong:
        if all(g.images[b] == b for b in base):
            base.append(next(i for i in range(degree) if g.images[i] != i))
    if not strong:
        return BSGS([], [], [])

    def level_gens(level):
        return [g for g in strong if all(g.images[b] == b for b in base[:level])]

    while True:
        transversals = [_orbit_transversal(b, level_gens(lvl), identity) for lvl, b in enumerate(base)]
        changed = False
        for level in range(len(base) - 1, -1, -1):
            gens_l = level_gens(level)
            trans = transversals[level]
            for pt, u in trans.items():
                for s in gens_l:
                    us = u * s
                    sch = us * trans[us.images[base[level]]].inverse()
                    if sch.is_identity():
                        continue
                    h, lvl = _sift(sch, base[level + 1 :], transversals[level + 1 :])
                    if not h.is_identity():
                        strong.append(h)
                        if lvl + level + 1 == len(base):
                            base.append(next(i for i in range(degree) if h.images[i] != i))
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
        if not changed:
            return BSGS(base, strong, transversals)


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


def _coerce_perm(g, degree):
    if isinstance(g, Permutation):
        p = g
    else:
        p = Permutation(g)
    if p.degree != degree:
        raise InvalidGroup(f"generator of degree {p.degree} in a group of degree {degree}")
    return p


class PermGroup:
    """Subgroup of Sym(degree) given by generators."""

    def __init__(self, degree, generators=(), name=None, _seed=None):
        degree = int(degree)
        if degree < 1:
            raise InvalidGroup("degree must be at least 1")
        self.degree = degree
        self.generators = tuple(_coerce_perm(g, degree) for g in generators)
        self.name = name
        self._seed = _seed
        self._enum = None

    @cached_property
    def bsgs(self):
        seed = self._seed
        return schreier_sims(
            self.degree,
            list(self.generators),
            base=seed.base if seed else None,
            strong=list(seed.strong) if seed else None,
        )

    def order(self):
        return self.bsgs.order

    def identity(self):
        return Permutation.identity(self.degree)

    def contains(self, g):
        if not isinstance(g, Permutation):
            g = Permutation(g)
        if g.degree != self.degree:
            return False
        h, _ = _sift(g, self.bsgs.base, self.bsgs.transversals)
        return h.is_identity()

    __contains__ = contains

    def subgroup(self, gens, name=None):
        return PermGroup(self.degree, gens, name=name)

    def extended(self, *gens):
        """The group generated by self and ``gens``, reusing the stabilizer chain."""
        return PermGroup(self.degree, self.generators + tuple(gens), _seed=self.bsgs)

    def is_trivial(self):
        return self.order() == 1

    def is_subgroup_of(self, other):
        return all(other.contains(g) for g in self.generators)

    def nontrivial_generators(self):
        out = []
        for g in self.generators:
            if not g.is_identity() and g not in out:
                out.append(g)
        return out

    def enumeration(self, cap=None):
        cap = settings.scan_cap if cap is None else cap
        size = self.order()
        if size > cap:
            raise TooLarge(size, cap, "use a generator-only route or raise BOGOMOLOV_SCAN_CAP")
        if self._enum is None:
            self._enum = Enumeration(self)
        return self._enum

    def to_json(self):
        return {
            "degree": self.degree,
            "generators": [g.to_list() for g in self.generators],
            **({"name": self.name} if self.name else {}),
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        try:
            degree = int(data["degree"])
            gens = data["generators"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidGroup(f"malformed group description: {exc}") from None
        return cls(degree, gens, name=data.get("name"))

    def content_hash(self):
        blob = json.dumps(
            {"degree": self.degree, "generators": [g.to_list() for g in self.generators]},
            separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode()).hexdigest()

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<PermGroup{label} degree={self.degree} gens={len(self.generators)}>"


# ---------------------------------------------------------------------------
# enumerated groups
# ---------------------------------------------------------------------------


class Enumeration:
    """All elements of a group as an ``N x d`` array in lexicographic order."""

    def __init__(self, group):
        self.group = group
        d = group.degree
        bs = group.bsgs
        elems = np.arange(d, dtype=np.int64)[None, :]
        for trans in reversed(bs.transversals):
            T = np.array([u.images for u in trans.values()], dtype=np.int64)
            # products e * u for every current e and coset representative u
            elems = T[np.arange(len(T))[None, :, None], elems[:, None, :]].reshape(-1, d)
        order = np.lexsort(elems.T[::-1])
        self.elements = np.ascontiguousarray(elems[order])
        self.size = len(self.elements)
        self.degree = d
        self._base = np.array(bs.base, dtype=np.int64)
        if len(bs.base) and float(d) ** len(bs.base) < 2.0**62:
            radix = d ** np.arange(len(bs.base), dtype=np.int64)
            self._radix = radix
            keys = self._keys(self.elements)
            self._key_order = np.argsort(keys, kind="stable")
            self._sorted_keys = keys[self._key_order]
            self._dict = None
        else:
            self._radix = None
            self._dict = {row.tobytes(): i for i, row in enumerate(self.elements)}
        self._table = None
        self._inv = None

    def _keys(self, arr):
        return arr[..., self._base] @ self._radix

    def index_of(self, arr, check=True):
        """Indices of permutations given as rows of ``arr`` (``-1`` when missing and not checking)."""
        arr = np.asarray(arr, dtype=np.int64)
        flat = arr.reshape(-1, self.degree)
        if self.size == 1:
            idx = np.zeros(len(flat), np.int64)
            ok = np.all(flat == self.elements[0], axis=1)
        elif self._radix is not None:
            keys = self._keys(flat)
            pos = np.searchsorted(self._sorted_keys, keys)
            pos = np.minimum(pos, self.size - 1)
            idx = self._key_order[pos]
            ok = (self._sorted_keys[pos] == keys) & np.all(self.elements[idx] == flat, axis=1)
        else:
            idx = np.array([self._dict.get(row.tobytes(), -1) for row in flat], dtype=np.int64)
            ok = idx >= 0
        if check and not ok.all():
            raise NotMember("permutation is not an element of the group")
        idx = np.where(ok, idx, -1)
        return idx.reshape(arr.shape[:-1])

    def index(self, g):
        if isinstance(g, Permutation):
            g = g.images
        if len(g) != self.degree:
            raise NotMember("degree mismatch")
        return int(self.index_of(np.asarray(g)[None, :])[0])

    def perm(self, i):
        return Permutation(self.elements[int(i)], check=False)

    def mul(self, a, b):
        """Index of the product ``e_a * e_b`` (broadcasting over index arrays)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._table is not None:
            return self._table[a, b]
        a, b = np.broadcast_arrays(a, b)
        A = self.elements[a.reshape(-1)]
        B = self.elements[b.reshape(-1)]
        prod_ = np.take_along_axis(B, A, axis=1)
        return self.index_of(prod_).reshape(a.shape)

    def rmul_by(self, g):
        """Index map ``i -> index(e_i * g)`` for a permutation ``g`` of the group."""
        g = np.asarray(g.images if isinstance(g, Permutation) else g, dtype=np.int64)
        return self.index_of(g[self.elements])

    def lmul_by(self, g):
        """Index map ``i -> index(g * e_i)``."""
        g = np.asarray(g.images if isinstance(g, Permutation) else g, dtype=np.int64)
        return self.index_of(self.elements[:, g])

    def conj_by(self, g):
        """Index map ``i -> index(g^-1 e_i g)``."""
        g = np.asarray(g.images if isinstance(g, Permutation) else g, dtype=np.int64)
        ginv = np.argsort(g)
        return self.index_of(g[self.elements[:, ginv]])

    @property
    def inv(self):
        if self._inv is None:
            self._inv = self.index_of(np.argsort(self.elements, axis=1))
        return self._inv

    def table(self, cap=None):
        """Full multiplication table; only for groups below the enumeration cap."""
        cap = settings.enumeration_cap if cap is None else cap
        if self.size > cap:
            raise TooLarge(self.size, cap, "multiplication table too large")
        if self._table is None:
            tab = np.empty((self.size, self.size), dtype=np.int64)
            for j in range(self.size):
                tab[:, j] = self.rmul_by(self.elements[j])
            self._table = tab
        return self._table

    def gen_indices(self):
        return [self.index(g) for g in self.group.nontrivial_generators()]

    def power_map(self, k, idx=None):
        """Index of ``e_i^k`` for every ``i`` (or for the given indices)."""
        idx = np.arange(self.size) if idx is None else np.asarray(idx, np.int64)
        result = np.zeros_like(idx)
        base = idx.copy()
        k = int(k)
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_orders(self):
        return np.array([Permutation(row, check=False).order() for row in self.elements], np.int64)

    def closure_mask(self, gens):
        """Boolean mask of the subgroup generated by element indices ``gens``."""
        mask = np.zeros(self.size, bool)
        mask[0] = True
        gens = [int(g) for g in gens if int(g) != 0]
        frontier = np.array([0], dtype=np.int64)
        while frontier.size:
            new = []
            for g in gens:
                nxt = self.mul(frontier, g)
                nxt = np.unique(nxt[~mask[nxt]])
                mask[nxt] = True
                new.append(nxt)
            frontier = np.unique(np.concatenate(new)) if new else np.zeros(0, np.int64)
        return mask

    def mask_generators(self, mask):
        """A small generating set (indices) for the subgroup given by ``mask``."""
        gens = []
        cur = np.zeros(self.size, bool)
        cur[0] = True
        while True:
            rest = np.nonzero(mask & ~cur)[0]
            if rest.size == 0:
                return gens
            gens.append(int(rest[0]))
            cur = self.closure_mask(gens)
            if (cur & ~mask).any():
                raise InvalidGroup("mask is not closed under multiplication")


# ---------------------------------------------------------------------------
# subgroups and classes
# ---------------------------------------------------------------------------


@dataclass
class SubgroupHandle:
    """A subgroup of ``parent`` given by generators."""

    parent: PermGroup
    generators: tuple

    @cached_property
    def group(self):
        return PermGroup(self.parent.degree, self.generators)

    def order(self):
        return self.group.order()

    def contains(self, g):
        return self.group.contains(g)

    __contains__ = contains

    def mask(self):
        E = self.parent.enumeration()
        if not self.generators:
            m = np.zeros(E.size, bool)
            m[0] = True
            return m
        return E.closure_mask([E.index(g) for g in self.generators])

    def is_abelian(self):
        return is_abelian(self.group)

    def __repr__(self):
        return f"<Subgroup of order {self.order()} in {self.parent!r}>"


def prune_generators(degree, gens):
    """Drop generators that the remaining ones already generate."""
    gens = [g for g in gens if not g.is_identity()]
    target = PermGroup(degree, gens).order()
    i = len(gens) - 1
    while i >= 0 and len(gens) > 1:
        trial = gens[:i] + gens[i + 1 :]
        if PermGroup(degree, trial).order() == target:
            gens = trial
        i -= 1
    return gens


def _handle(parent, gens):
    gens = tuple(g for g in gens if not g.is_identity())
    return SubgroupHandle(parent, gens)


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    size: int
    indices: tuple = field(repr=False, default=())


def _check_order(G, cap=None):
    cap = settings.scan_cap if cap is None else cap
    n = G.order()
    if n > cap:
        raise TooLarge(n, cap, "group too large to enumerate")
    return n


def group_order(G):
    return G.order()


def elements(G):
    """Sorted list of all elements (lexicographic in image arrays)."""
    E = G.enumeration(settings.enumeration_cap)
    return [E.perm(i) for i in range(E.size)]


def class_labels(G):
    """Label of every element index: the minimal index of its conjugacy class."""
    E = G.enumeration()
    n = E.size
    gens = G.nontrivial_generators()
    if not gens:
        return np.arange(n)
    rows, cols = [], []
    for g in gens:
        c = E.conj_by(g)
        rows.append(np.arange(n))
        cols.append(c)
    graph = csr_matrix(
        (np.ones(n * len(gens), np.int8), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    _, comp = connected_components(graph, directed=True, connection="weak")
    first = np.full(comp.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(n))
    return first[comp]


def conjugacy_classes(G):
    """Conjugacy classes, ordered by representative (the lexicographically least member)."""
    _check_order(G, settings.enumeration_cap)
    E = G.enumeration()
    labels = class_labels(G)
    reps, counts = np.unique(labels, return_counts=True)
    out = []
    for r, c in zip(reps, counts):
        out.append(ConjugacyClass(E.perm(r), int(c), tuple(np.nonzero(labels == r)[0].tolist())))
    return out


def centralizer_mask(G, x_idx):
    E = G.enumeration()
    x = E.elements[x_idx]
    # e * x == x * e  <=>  x[e] == e[x]
    return np.all(x[E.elements] == E.elements[:, x], axis=1)


def centralizer(G, x):
    """Centralizer of an element ``x`` of ``G``."""
    E = G.enumeration()
    xi = E.index(x)
    mask = centralizer_mask(G, xi)
    if mask.all():
        return _handle(G, G.generators)
    return _handle(G, [E.perm(i) for i in E.mask_generators(mask)])


def normal_closure(G, perms):
    """Normal closure of ``perms`` in ``G``, by generators only."""
    gens = [p for p in perms if not p.is_identity()]
    N = PermGroup(G.degree, gens)
    queue = list(gens)
    Ggens = G.nontrivial_generators()
    while queue:
        n = queue.pop(0)
        for g in Ggens:
            c = n.conjugate(g)
            if not N.contains(c):
                gens.append(c)
                N = N.extended(c)
                queue.append(c)
    return _handle(G, gens)


def derived_subgroup(G):
    gens = G.nontrivial_generators()
    comms = []
    for i, a in enumerate(gens):
        for b in gens[i + 1 :]:
            c = commutator(a, b)
            if not c.is_identity():
                comms.append(c)
    return normal_closure(G, comms)


def is_abelian(G):
    gens = G.nontrivial_generators()
    return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1 :])


def is_perfect(G):
    return derived_subgroup(G).order() == G.order()


def is_metabelian(G):
    return is_abelian(derived_subgroup(G).group)


def center_mask(G):
    E = G.enumeration()
    mask = np.ones(E.size, bool)
    for g in G.nontrivial_generators():
        gi = E.index(g)
        mask &= centralizer_mask(G, gi)
    return mask


def center(G):
    E = G.enumeration()
    mask = center_mask(G)
    return _handle(G, [E.perm(i) for i in E.mask_generators(mask)])


def sylow_subgroup(G, p):
    """A Sylow p-subgroup found by a deterministic element scan."""
    n = G.order()
    target = 1
    while n % p == 0:
        n //= p
        target *= p
    if target == 1:
        return _handle(G, [])
    E = G.enumeration()
    # p-elements: x^(p-part of |G|) == e
    powed = np.arange(E.size)
    t = target
    while t > 1:
        powed = E.power_map(p, powed)
        t //= p
    candidates = np.nonzero(powed == 0)[0][1:]
    P = PermGroup(G.degree, [])
    gens = []
    while P.order() < target:
        Pgens = P.nontrivial_generators()
        found = None
        for ci in candidates:
            x = E.perm(ci)
            if P.contains(x):
                continue
            if all(P.contains(h.conjugate(x)) for h in Pgens):
                found = x
                break
        if found is None:  # pragma: no cover - Sylow theory forbids this
            raise InvalidGroup("Sylow search stalled")
        gens.append(found)
        P = P.extended(found)
    return _handle(G, prune_generators(G.degree, gens))


def abelianization(G):
    """``G^ab`` as a FinAbGroup together with the projection on element indices.

    Returns ``(A, proj)`` where ``proj`` is an ``N x rank`` array of
    coordinates of every element's image in ``A``.
    """
    E = G.enumeration()
    tree = cayley_tree(G)
    S = len(tree.gens)
    if S == 0:
        return FinAbGroup(()), np.zeros((E.size, 0), np.int64)
    W = tree.word_counts
    rels = []
    for s in range(S):
        R = tree.right[s]
        rel = W + np.eye(S, dtype=np.int64)[s][None, :] - W[R]
        rels.append(rel)
    rels = np.unique(np.concatenate(rels), axis=0)
    rels = [r for r in rels.tolist() if any(r)]
    factors, V = integer_cokernel(rels, S)
    keep = [i for i, d in enumerate(factors) if d != 1]
    if any(factors[i] == 0 for i in keep):  # pragma: no cover - finite group
        raise InvalidGroup("infinite abelianization")
    Vk = np.array([[V[r][i] for i in keep] for r in range(S)], dtype=object)
    mods = np.array([factors[i] for i in keep], dtype=object)
    proj = (W.astype(object) @ Vk) % mods if keep else np.zeros((E.size, 0), dtype=object)
    # sort factors into divisibility order (integer_cokernel already gives d1 | d2 | ...)
    A = FinAbGroup(tuple(int(factors[i]) for i in keep))
    return A, np.asarray(proj, dtype=np.int64)


@dataclass
class CayleyTree:
    """BFS spanning tree of the right Cayley graph on the generators ``gens``."""

    gens: list
    gen_idx: list
    right: list  # right[s][i] = index(e_i * s)
    parent: np.ndarray
    pgen: np.ndarray
    order: np.ndarray
    word_counts: np.ndarray  # generator counts along the tree path of each element


def cayley_tree(G):
    E = G.enumeration()
    gens = G.nontrivial_generators()
    right = [E.rmul_by(g) for g in gens]
    n = E.size
    parent = np.full(n, -1, np.int64)
    pgen = np.full(n, -1, np.int64)
    seen = np.zeros(n, bool)
    seen[0] = True
    order = [np.array([0])]
    frontier = np.array([0])
    W = np.zeros((n, len(gens)), np.int64)
    while frontier.size:
        nxt_all = []
        for s, R in enumerate(right):
            nxt = R[frontier]
            fresh = ~seen[nxt]
            nxt_f, src = nxt[fresh], frontier[fresh]
            nxt_f, first = np.unique(nxt_f, return_index=True)
            src = src[first]
            seen[nxt_f] = True
            parent[nxt_f] = src
            pgen[nxt_f] = s
            W[nxt_f] = W[src]
            W[nxt_f, s] += 1
            nxt_all.append(nxt_f)
        frontier = np.concatenate(nxt_all) if nxt_all else np.zeros(0, np.int64)
        if frontier.size:
            order.append(frontier)
    return CayleyTree(gens, [E.index(g) for g in gens], right, parent, pgen, np.concatenate(order), W)


# ---------------------------------------------------------------------------
# bicyclic subgroups
# ---------------------------------------------------------------------------


def _cyclic_powers(E, a):
    out = [0]
    x = a
    while x != 0:
        out.append(x)
        x = int(E.mul(x, a))
    return out


def bicyclic_subgroups(G, up_to_conjugacy=True):
    """Maximal two-generated abelian subgroups ``<a, b>`` (up to conjugacy).

    Each entry is a SubgroupHandle with two generators; subgroups contained
    in a conjugate of a larger listed one are dropped.  With
    ``up_to_conjugacy=False`` every maximal bicyclic subgroup is returned.
    """
    E = G.enumeration(settings.enumeration_cap)
    labels = class_labels(G)
    reps = np.unique(labels)
    conj_maps = None
    found = {}  # frozenset -> (a, b)
    power_cache = {}

    def powers(x):
        if x not in power_cache:
            power_cache[x] = _cyclic_powers(E, x)
        return power_cache[x]

    for a in reps.tolist():
        cmask = centralizer_mask(G, a)
        pa = powers(a)
        pa_set = set(pa)
        for b in np.nonzero(cmask)[0].tolist():
            if b in pa_set and b != 0 and a != 0:
                continue
            pb = powers(b)
            members = set(int(x) for x in E.mul(np.array(pa)[:, None], np.array(pb)[None, :]).ravel())
            key = frozenset(members)
            if key not in found:
                found[key] = (a, b)
    subs = sorted(found.items(), key=lambda kv: (-len(kv[0]), sorted(kv[0])))
    if up_to_conjugacy:
        gens = G.nontrivial_generators()
        conj_maps = [E.conj_by(g) for g in gens]

        def orbit(sset):
            start = frozenset(sset)
            seen = {start}
            queue = [start]
            for s in queue:
                arr = np.fromiter(s, np.int64)
                for cm in conj_maps:
                    t = frozenset(cm[arr].tolist())
                    if t not in seen:
                        seen.add(t)
                        queue.append(t)
            return seen

        kept = []  # (set, orbit)
        orbits_seen = set()
        for sset, ab in subs:
            if sset in orbits_seen:
                continue
            if any(sset < big for _, orb in kept for big in orb if len(big) > len(sset)):
                continue
            orb = orbit(sset)
            orbits_seen |= orb
            kept.append(((sset, ab), orb))
        chosen = [k[0] for k in kept]
    else:
        chosen = []
        for sset, ab in subs:
            if any(sset < big for big, _ in chosen):
                continue
            chosen.append((sset, ab))
    out = []
    for sset, (a, b) in chosen:
        out.append(SubgroupHandle(G, (E.perm(a), E.perm(b))))
    return out


# ---------------------------------------------------------------------------
# quasisimplicity
# ---------------------------------------------------------------------------


@dataclass
class QuasisimpleReport:
    is_quasisimple: bool
    perfect: bool
    center_order: int
    quotient_order: int
    reason: str = ""


def is_simple(G):
    """Simplicity by normal closures of class representatives."""
    n = G.order()
    if n == 1:
        return False
    E = G.enumeration()
    labels = class_labels(G)
    for r in np.unique(labels)[1:].tolist():
        if normal_closure(G, [E.perm(r)]).order() != n:
            return False
    return True


def quasisimple_check(G):
    """Perfect with simple central quotient."""
    n = G.order()
    perfect = is_perfect(G)
    Z = center(G)
    z = Z.order()
    if not perfect:
        return QuasisimpleReport(False, False, z, n // z, "not perfect")
    if z == n:
        return QuasisimpleReport(False, True, z, 1, "central quotient is trivial")
    # G perfect: G/Z is simple iff every noncentral element normally generates G
    E = G.enumeration()
    zmask = center_mask(G)
    labels = class_labels(G)
    for r in np.unique(labels).tolist():
        if zmask[r]:
            continue
        if normal_closure(G, [E.perm(r)]).order() != n:
            return QuasisimpleReport(False, True, z, n // z, "central quotient is not simple")
    return QuasisimpleReport(True, True, z, n // z, "")


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def regular_representation(table, gen_idx, name=None):
    """Right regular permutation representation from a multiplication table."""
    table = np.asarray(table)
    n = table.shape[0]
    gens = [Permutation(table[:, g], check=False) for g in gen_idx]
    return PermGroup(n, gens, name=name)


def quotient_by_central(G, Z):
    """``G / Z`` for a central subgroup, as a permutation group on the cosets."""
    E = G.enumeration()
    zmask = Z.mask() if isinstance(Z, SubgroupHandle) else np.asarray(Z, bool)
    zidx = np.nonzero(zmask)[0]
    gens = G.nontrivial_generators()
    for z in zidx.tolist():
        zp = E.perm(z)
        if any(zp * g != g * zp for g in gens):
            raise NotCentral("subgroup is not central")
    # coset label = min index over e * z
    coset = np.full(E.size, E.size, np.int64)
    for z in zidx.tolist():
        coset = np.minimum(coset, E.rmul_by(E.elements[z]))
    labels, inverse = np.unique(coset, return_inverse=True)
    m = len(labels)
    new_gens = []
    for g in gens:
        R = E.rmul_by(g)
        img = inverse[R[labels]]
        new_gens.append(Permutation(img, check=False))
    return PermGroup(m, new_gens)


def has_complement_central(G, Z):
    """Whether a central subgroup ``Z`` has a complement in ``G``.

    Tries every choice of generator lifts modulo ``Z``; suitable for small
    ``Z`` only.
    """
    E = G.enumeration()
    zmask = Z.mask()
    zs = np.nonzero(zmask)[0].tolist()
    target = G.order() // len(zs)
    gens = G.nontrivial_generators()
    from itertools import product

    for choice in product(zs, repeat=len(gens)):
        lifts = [g * E.perm(z) for g, z in zip(gens, choice)]
        H = PermGroup(G.degree, lifts)
        if H.order() == target:
            return True
    return False


def homomorphism_indices(G, images, target=None, check=True):
    """Extend generator images to an index map on ``G`` (an endomorphism by default).

    ``images`` lists the images of ``G.nontrivial_generators()`` as
    permutations in ``target`` (``G`` when omitted).  Raises
    :class:`NotAutomorphism` when the assignment does not extend.
    """
    target = G if target is None else target
    E = G.enumeration()
    T = target.enumeration()
    tree = cayley_tree(G)
    if len(images) != len(tree.gens):
        raise NotAutomorphism("one image per nontrivial generator is required")
    img_idx = [T.index(x) for x in images]
    phi = np.zeros(E.size, np.int64)
    for x in tree.order[1:].tolist():
        phi[x] = int(T.mul(phi[tree.parent[x]], img_idx[tree.pgen[x]]))
    if check:
        for s, R in enumerate(tree.right):
            if not np.array_equal(T.mul(phi, img_idx[s]), phi[R]):
                raise NotAutomorphism("generator images do not define a homomorphism")
    return phi


def automorphism_indices(G, images):
    phi = homomorphism_indices(G, images)
    if len(np.unique(phi)) != len(phi):
        raise NotAutomorphism("map is not bijective")
    return phi


def semidirect_product(N, H, action, name=None):
    """``N x| H`` with ``action[j]`` the automorphism images for generator ``j`` of ``H``.

    ``action[j]`` lists the images of ``N.nontrivial_generators()`` under the
    automorphism attached to ``H.nontrivial_generators()[j]``, read as a right
    action like conjugation ``n -> h^-1 n h``: writing elements as ``h n``,
    ``(h n)(h' n') = (h h') (sigma_h'(n) n')``.  The result is the right
    regular representation.
    """
    EN = N.enumeration(settings.enumeration_cap)
    EH = H.enumeration(settings.enumeration_cap)
    nN, nH = EN.size, EH.size
    if nN * nH > settings.enumeration_cap:
        raise TooLarge(nN * nH, settings.enumeration_cap, "semidirect product too large")
    hgens = H.nontrivial_generators()
    if len(action) != len(hgens):
        raise NotAutomorphism("one automorphism per generator of H is required")
    sig_gen = [automorphism_indices(N, imgs) for imgs in action]
    tree = cayley_tree(H)
    sigma = np.zeros((nH, nN), np.int64)
    sigma[0] = np.arange(nN)
    for x in tree.order[1:].tolist():
        sigma[x] = sig_gen[tree.pgen[x]][sigma[tree.parent[x]]]
    # validate: sigma must be a homomorphism H -> Aut(N), i.e. sigma_{x s} = sigma_x o sigma_s
    for s, R in enumerate(tree.right):
        if not np.array_equal(sigma[R], sig_gen[s][sigma]):
            raise NotAutomorphism("action is not a homomorphism from H")
    TN = EN.table()
    TH = EH.table()
    # element (n, h) -> index n * nH + h
    n_idx = np.repeat(np.arange(nN), nH)
    h_idx = np.tile(np.arange(nH), nN)
    gens = []
    for g in N.nontrivial_generators():
        gi = EN.index(g)
        # (h n) g = h (n g)
        img = TN[n_idx, gi] * nH + h_idx
        gens.append(Permutation(img, check=False))
    for hg in hgens:
        hi = EH.index(hg)
        # (h n) t = (h t) sigma_t(n)
        img = sigma[hi][n_idx] * nH + TH[h_idx, hi]
        gens.append(Permutation(img, check=False))
    return PermGroup(nN * nH, gens, name=name)


def direct_product(A, B, name=None):
    """Direct product acting on the disjoint union of the two point sets."""
    da, db = A.degree, B.degree
    gens = []
    for g in A.nontrivial_generators():
        gens.append(Permutation(list(g.images) + list(range(da, da + db)), check=False))
    for g in B.nontrivial_generators():
        gens.append(Permutation(list(range(da)) + [da + x for x in g.images], check=False))
    return PermGroup(da + db, gens, name=name)
