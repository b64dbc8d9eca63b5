"""Brute-force reference computations, deliberately sharing no code with the library.

The multiplication table comes from a breadth-first closure of the
generators, and the Schur multiplier from the elementary divisors of the
third boundary map of the normalized bar complex, computed by a dense
elimination over Z/p^K written here from scratch.
"""
from __future__ import annotations

from math import gcd

import numpy as np


def closure_table(G):
    """``(elements, table)`` with the identity at index 0; ``table[i, j]`` is ``e_i * e_j``."""
    degree = G.degree
    gens = [tuple(g.images) for g in G.generators]
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    for x in elems:
        for g in gens:
            y = tuple(g[i] for i in x)  # apply x, then g
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
    n = len(elems)
    table = np.zeros((n, n), dtype=np.int64)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            table[i, j] = index[tuple(y[k] for k in x)]
    return elems, table


def _factor(n):
    out, d = {}, 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _boundary3(table):
    n = table.shape[0]
    nz = list(range(1, n))
    pos = {g: i for i, g in enumerate(nz)}
    m = len(nz)
    D = np.zeros((m * m * m, m * m), dtype=np.int64)
    r = 0
    for g in nz:
        for h in nz:
            gh = int(table[g, h])
            for k in nz:
                hk = int(table[h, k])
                # d(g|h|k) = (h|k) - (gh|k) + (g|hk) - (g|h), dropping identity entries
                D[r, pos[h] * m + pos[k]] += 1
                if gh:
                    D[r, pos[gh] * m + pos[k]] -= 1
                if hk:
                    D[r, pos[g] * m + pos[hk]] += 1
                D[r, pos[g] * m + pos[h]] -= 1
                r += 1
    return D


def _divisor_valuations(A, p, K):
    """p-adic valuations of the elementary divisors of ``A`` that are nonzero mod p^K."""
    mod = p**K
    A = A % mod
    rows = np.ones(A.shape[0], dtype=bool)
    cols = np.ones(A.shape[1], dtype=bool)
    vals = []
    for level in range(K):
        scale = p**level
        while True:
            sub = A[np.ix_(rows, cols)]
            hits = np.argwhere((sub % (scale * p) != 0) & (sub != 0))
            if hits.size == 0:
                break
            ri, ci = hits[0]
            i = int(np.nonzero(rows)[0][ri])
            j = int(np.nonzero(cols)[0][ci])
            unit = int(A[i, j]) // scale
            inv = pow(unit, -1, mod)
            rows[i] = False
            cols[j] = False
            touched = np.nonzero(rows & (A[:, j] != 0))[0]
            if touched.size:
                factor = (A[touched, j] // scale) * inv % mod
                A[touched] = (A[touched] - np.outer(factor, A[i])) % mod
            vals.append(level)
    return vals


def bar_schur_multiplier(G):
    """Prime-power cyclic orders of ``H_2(G, Z)``, sorted."""
    _, table = closure_table(G)
    n = table.shape[0]
    if n <= 2:
        return []
    D = _boundary3(table)
    out = []
    for p, e in _factor(n).items():
        for v in _divisor_valuations(D, p, e + 1):
            if v > 0:
                out.append(p**v)
    return sorted(out)


def primary(invariant_factors):
    out = []
    for d in invariant_factors:
        for p, e in _factor(d).items():
            out.append(p**e)
    return sorted(out)


def uct_h2(schur_primary, abel_factors, m):
    """Primary orders of ``H^2(G, Z/m) = Hom(M, Z/m) + Ext(G^ab, Z/m)``."""
    parts = [gcd(d, m) for d in list(schur_primary) + list(abel_factors)]
    return primary([d for d in parts if d > 1])


def commutator_exists(table, z):
    """Exhaustive search over all pairs for ``a^-1 b^-1 a b = z``."""
    n = table.shape[0]
    inv = np.argmin(table, axis=1)  # e_i * e_inv = identity (index 0)
    for a in range(n):
        ainv = inv[a]
        # [a, b] = (a^-1 b^-1) (a b)
        left = table[ainv][inv]          # a^-1 * b^-1 for all b
        right = table[a]                 # a * b for all b
        if np.any(table[left, right] == z):
            return True
    return False


def commutator_exists_for_index_group(E, z):
    n = E.size
    allb = np.arange(n)
    for a in range(n):
        c = E.mul(E.mul(E.inverse(a), E.inverse(allb)), E.mul(a, allb))
        if np.any(np.asarray(c) == z):
            return True
    return False


def conjugate_group(B, g):
    from bogomolov.perm import PermGroup

    return PermGroup(B.degree, [x.conjugate(g) for x in B.generators])


def pullback(cochain, src, dst, g):
    """Pull a cochain on ``dst = g^-1 src g`` back to ``src`` along ``x -> g^-1 x g``."""
    from bogomolov.cohomology import Cochain2

    Es, Ed = src.enumeration(), dst.enumeration()
    phi = np.array([Ed.index(Es.perm(i).conjugate(g)) for i in range(Es.size)])
    return Cochain2(src, cochain.modulus, cochain.table[np.ix_(phi, phi)])


def sylow_bicyclic_chains(G, primes=(2, 3)):
    """Pairs ``(H, K)`` with ``K <= H <= G``, ``H`` Sylow and ``K`` bicyclic in ``H``."""
    from bogomolov.perm import bicyclic_subgroups, sylow_subgroup

    out = []
    for p in primes:
        H = sylow_subgroup(G, p).group
        for K in bicyclic_subgroups(H, up_to_conjugacy=False):
            out.append((H, K.group))
    return out


def restriction_functorial(G):
    from bogomolov.cohomology import restrict_class, schur_multiplier

    M = schur_multiplier(G)
    classes = M.generator_cocycles + [M.combination([1] * M.presentation.rank)]
    for H, K in sylow_bicyclic_chains(G):
        for gamma in classes:
            if restrict_class(gamma, K).coordinates() != restrict_class(restrict_class(gamma, H).cochain, K).coordinates():
                return False
    return True


def restriction_conjugacy_invariant(G, samples=7):
    from bogomolov.cohomology import restrict_class, restrict_cochain, schur_multiplier
    from bogomolov.perm import bicyclic_subgroups

    M = schur_multiplier(G)
    E = G.enumeration()
    conjugators = [E.perm(i) for i in range(1, E.size, max(1, E.size // samples))]
    for gamma in M.generator_cocycles:
        for B in bicyclic_subgroups(G):
            B = B.group
            base = restrict_class(gamma, B)
            for g in conjugators:
                Bg = conjugate_group(B, g)
                back = pullback(restrict_cochain(gamma, Bg), B, Bg, g)
                if base.cohom.coordinates(back) != base.coordinates():
                    return False
    return True
