"""Acceptance gate: eight criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the
terminal summary) or standalone with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import sys
import time
from functools import lru_cache
from itertools import product
from pathlib import Path

import numpy as np
import pytest
import sympy

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from conftest import SMALL_NAMES  # noqa: E402

from bogomolov import catalog  # noqa: E402
from bogomolov.cohomology import Cochain2, h2_mod, schur_multiplier, semidirect_multiplier  # noqa: E402
from bogomolov.config import settings  # noqa: E402
from bogomolov.criteria import (  # noqa: E402
    b0_report,
    bogomolov_multiplier,
    central_extension,
    commutator_witness_central,
    excludes_from_b0,
    replay_certificate,
)
from bogomolov.linalg import SparseIntMatrix, smith_normal_form  # noqa: E402
from bogomolov.perm import (  # noqa: E402
    PermGroup,
    center,
    center_mask,
    class_labels,
    derived_subgroup,
    has_complement_central,
    is_simple,
    quotient_by_central,
)

RESULTS: dict[int, str] = {}

QUASISIMPLE = (
    ["A5", "A6", "A7", "A8", "A9"]
    + [f"PSL(2,{q})" for q in (4, 5, 7, 8, 9, 11, 13)]
    + ["PSL(3,4)"]
    + [f"SL(2,{q})" for q in (5, 7, 9, 11, 13)]
)
ALMOST_SIMPLE = ["S5", "S6", "S7", "PGL(2,5)", "PGL(2,7)", "PGL(2,9)"]
LEMMA_DESCRIPTORS = ["A1q9", "E8q4", "B2q4", "D4q3", "A3q5"]
AGREEMENT = ["V4", "C4xC2", "D4", "E(2,3)", "A4", "D6", "C2xD4", "C2xQ8", "C4xC4", "S4", "A5", "C2xA4", "E(2,4)"]
PAIR_ORACLE = ["Q8", "D4", "C2xQ8", "C2xD4", "D8", "SL(2,3)", "D6", "C2xA4", "SL(2,5)"]


def _record(number, label):
    """Decorator: run a criterion body and record one PASS/FAIL line."""

    def wrap(fn):
        def runner():
            t0 = time.perf_counter()
            try:
                fn()
            except BaseException as exc:
                RESULTS[number] = f"criterion {number} FAIL  {label} ({type(exc).__name__}: {exc})"
                raise
            RESULTS[number] = f"criterion {number} PASS  {label} [{time.perf_counter() - t0:.1f}s]"

        runner.__name__ = fn.__name__
        runner.__doc__ = fn.__doc__
        return runner

    return wrap


def _strategy(G):
    return "direct" if G.order() <= settings.max_direct_order else "sylow"


@lru_cache(maxsize=None)
def quasisimple_reports():
    out = {}
    for name in QUASISIMPLE:
        G = catalog.named(name)
        out[name] = b0_report(G, _strategy(G))
    return out


@lru_cache(maxsize=None)
def almost_simple_reports():
    out = {}
    for name in ALMOST_SIMPLE:
        G = catalog.named(name)
        out[name] = b0_report(G, "direct" if G.order() <= settings.max_direct_order else "auto")
    return out


@lru_cache(maxsize=None)
def blau_witnesses():
    out = {}
    for q in (5, 7, 9, 11, 13):
        G = catalog.named(f"SL(2,{q})")
        E = G.enumeration()
        zi = next(i for i in np.nonzero(center_mask(G))[0].tolist() if i != 0)
        out[q] = (G, zi, commutator_witness_central(G, zi))
        assert E.perm(zi).order() == 2
    return out


@lru_cache(maxsize=None)
def lemma_verdicts():
    return {name: catalog.verify_out_lemma(name) for name in LEMMA_DESCRIPTORS}


# ---------------------------------------------------------------------------


@_record(1, "Schur multiplier oracle suite")
def test_criterion_1_schur_oracle():
    t0 = time.perf_counter()
    for name in SMALL_NAMES:
        G = catalog.named(name)
        assert G.order() <= 16
        assert oracles.primary(schur_multiplier(G).invariant_factors) == oracles.bar_schur_multiplier(G), name
    for n in (2, 3, 5, 8, 12):
        assert schur_multiplier(catalog.cyclic(n)).invariant_factors == ()
    assert schur_multiplier(catalog.named("V4")).invariant_factors == (2,)
    assert schur_multiplier(catalog.named("Q8")).invariant_factors == ()
    assert schur_multiplier(catalog.named("D4")).invariant_factors == (2,)
    assert time.perf_counter() - t0 < 60


def _quaternion_cocycle(V):
    """Sign cocycle of Q8 over V4, from the unit section {1, i, j, k}."""
    a, b = V.nontrivial_generators()
    E = V.enumeration()
    unit = {0: "1", E.index(a): "i", E.index(b): "j", E.index(a * b): "k"}
    table = {("i", "i"): ("1", 1), ("j", "j"): ("1", 1), ("k", "k"): ("1", 1),
             ("i", "j"): ("k", 0), ("j", "i"): ("k", 1), ("j", "k"): ("i", 0),
             ("k", "j"): ("i", 1), ("k", "i"): ("j", 0), ("i", "k"): ("j", 1)}
    c = np.zeros((4, 4), dtype=np.int64)
    for x in range(4):
        for y in range(4):
            u, v = unit[x], unit[y]
            if u == "1" or v == "1":
                continue
            c[x, y] = table[(u, v)][1]
    return Cochain2(V, 2, c)


def _extension_cocycle(G, Z, Q, m):
    """Cocycle of ``Z -> G -> Q = G/Z`` (``Z`` of order 2) via a word section, in Z/m."""
    EG, EQ = G.enumeration(), Q.enumeration()
    gens_G = G.nontrivial_generators()
    gens_Q = list(Q.generators)
    lift = {0: EG.index(EG.perm(0))}
    queue = [0]
    for x in queue:
        for gq, gg in zip(gens_Q, gens_G):
            y = EQ.index(EQ.perm(x) * gq)
            if y not in lift:
                lift[y] = EG.index(EG.perm(lift[x]) * gg)
                queue.append(y)
    z = Z.group.nontrivial_generators()[0]
    n = EQ.size
    T = EQ.table()
    c = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        px = EG.perm(lift[x])
        for y in range(n):
            w = px * EG.perm(lift[y]) * EG.perm(lift[int(T[x, y])]).inverse()
            if w == z:
                c[x, y] = m // 2
            else:
                assert w.is_identity()
    return Cochain2(Q, m, c)


@_record(2, "extension cross-checks")
def test_criterion_2_extensions():
    t0 = time.perf_counter()
    V = catalog.named("V4")
    gamma = _quaternion_cocycle(V)
    assert gamma.is_cocycle()
    E = central_extension(V, gamma)
    assert E.size == 8
    idx = np.arange(E.size)
    involutions = int(np.sum((np.asarray(E.mul(idx, idx)) == 0) & (idx != 0)))
    assert involutions == 1
    assert not h2_mod(V, 2).is_zero(gamma)

    SL = catalog.named("SL(2,5)")
    Z = center(SL)
    assert Z.order() == 2
    Q = quotient_by_central(SL, Z)
    assert Q.order() == 60 and is_simple(Q)
    assert not has_complement_central(SL, Z)
    M = schur_multiplier(Q)
    assert M.invariant_factors == (2,) and M.modulus % 2 == 0
    c = _extension_cocycle(SL, Z, Q, M.modulus)
    assert c.is_cocycle()
    assert tuple(M.coordinates(c)) == (1,)
    assert time.perf_counter() - t0 < 120


@_record(3, "vanishing on quasisimple instances")
def test_criterion_3_quasisimple():
    t0 = time.perf_counter()
    for name, (b0, cert) in quasisimple_reports().items():
        G = catalog.named(name)
        assert b0 is not None and b0.rank == 0, name
        assert cert.strategy == _strategy(G), name
    assert time.perf_counter() - t0 < 30 * 60


@_record(4, "vanishing on almost simple instances and the semidirect formula")
def test_criterion_4_almost_simple():
    for name, (b0, cert) in almost_simple_reports().items():
        assert b0 is not None and b0.rank == 0, name
    for name in ("S5", "PGL(2,7)"):
        G = catalog.named(name)
        L = derived_subgroup(G).group
        x = catalog.outer_involution(G, L)
        r = semidirect_multiplier(L, PermGroup(G.degree, [x]), [catalog.outer_action(L, G, x)])
        assert r.direct is not None
        assert r.group.invariant_factors == r.direct.invariant_factors == schur_multiplier(G).invariant_factors


@_record(5, "fixed-class commutator witnesses")
def test_criterion_5_blau():
    for q, (G, zi, pair) in blau_witnesses().items():
        assert pair is not None, q
        E = G.enumeration()
        a, b = (E.perm(i) for i in pair)
        z = E.perm(zi)
        assert a.inverse() * b.inverse() * a * b == z
        az = E.index(E.perm(pair[0]) * z)
        lab = class_labels(G)
        assert lab[pair[0]] == lab[az]
    for name in PAIR_ORACLE:
        G = catalog.named(name)
        assert G.order() <= 200
        elems, table = oracles.closure_table(G)
        index = {tuple(x): i for i, x in enumerate(elems)}
        E = G.enumeration()
        for zi in np.nonzero(center_mask(G))[0].tolist():
            got = commutator_witness_central(G, zi) is not None
            assert got == oracles.commutator_exists(table, index[tuple(E.perm(zi).images)]), name


@_record(6, "criterion agreement on groups of order <= 120")
def test_criterion_6_agreement():
    for name in AGREEMENT:
        G = catalog.named(name)
        assert G.order() <= 120
        M = schur_multiplier(G)
        _, cert = bogomolov_multiplier(G)
        member = {tuple(w["coords"]): w["type"] == "b0_element" for w in cert.witnesses}
        for coords in product(*[range(d) for d in M.invariant_factors]):
            in_b0 = (not any(coords)) or member[coords]
            excluded, _ = excludes_from_b0(G, M.combination(coords), cross_check=False)
            assert excluded == (not in_b0), (name, coords)


@_record(7, "Out(L) instances across the case split")
def test_criterion_7_out_lemma():
    tags = set()
    for name, v in lemma_verdicts().items():
        assert v.verified, name
        tags.update(v.cases)
    assert {"abelian Out", "trivial O", "cyclic Phi Gamma", "D even rank, odd q", "inverting Gamma"} <= tags


def _snf_property_suite(count=1000, seed=20240611):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        r, c = (int(x) for x in rng.integers(1, 9, size=2))
        A = rng.integers(-20, 21, size=(r, c)) * (rng.random((r, c)) < 0.35)
        M = SparseIntMatrix.from_dense(A.tolist())
        U, D, V = smith_normal_form(M)
        assert ((U @ M) @ V).to_lists() == D.to_lists()
        d = [x for x in D.diagonal() if x]
        assert all(x > 0 for x in d) and all(b % a == 0 for a, b in zip(d, d[1:]))
        assert abs(int(sympy.Matrix(U.to_lists()).det())) == 1
        assert abs(int(sympy.Matrix(V.to_lists()).det())) == 1


def _all_certificates():
    certs = [c for _, c in quasisimple_reports().values()]
    certs += [c for _, c in almost_simple_reports().values()]
    certs += [v.certificate for v in lemma_verdicts().values()]
    for name in AGREEMENT:
        certs.append(bogomolov_multiplier(catalog.named(name))[1])
    return certs


@_record(8, "property suites and certificate replay")
def test_criterion_8_properties():
    _snf_property_suite()
    for name in SMALL_NAMES + ["S4", "A5", "A6", "SL(2,5)"]:
        G = catalog.named(name)
        for gamma in schur_multiplier(G).generator_cocycles:
            assert gamma.is_cocycle() and gamma.is_normalized(), name
    for name in ("A5", "S4"):
        G = catalog.named(name)
        assert oracles.restriction_functorial(G)
        assert oracles.restriction_conjugacy_invariant(G)
    for q, (G, zi, pair) in blau_witnesses().items():
        E = G.enumeration()
        a, b, z = (E.perm(i) for i in (*pair, zi))
        assert a.inverse() * b.inverse() * a * b == z
    failures = []
    for cert in _all_certificates():
        res = replay_certificate(cert)
        failures.extend(res.failures)
    assert not failures, failures


CRITERIA = [
    test_criterion_1_schur_oracle,
    test_criterion_2_extensions,
    test_criterion_3_quasisimple,
    test_criterion_4_almost_simple,
    test_criterion_5_blau,
    test_criterion_6_agreement,
    test_criterion_7_out_lemma,
    test_criterion_8_properties,
]


@pytest.fixture(scope="module", autouse=True)
def _print_summary():
    yield
    print(file=sys.__stdout__)
    for k in sorted(RESULTS):
        print(RESULTS[k], file=sys.__stdout__)


if __name__ == "__main__":
    ok = True
    for test in CRITERIA:
        try:
            test()
        except BaseException:
            ok = False
    for k in sorted(RESULTS):
        print(RESULTS[k])
    sys.exit(0 if ok else 1)
