import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from bogomolov.errors import InconsistentPresentation
from bogomolov.linalg import (
    AbGroupMap,
    FinAbGroup,
    SparseIntMatrix,
    factorize,
    integer_cokernel,
    kernel_mod,
    quotient_presentation,
    smith_normal_form,
    solve_mod,
)


@st.composite
def sparse_matrices(draw, max_dim=7, bound=12):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    cells = draw(st.lists(
        st.tuples(st.integers(0, r - 1), st.integers(0, c - 1), st.integers(-bound, bound)),
        max_size=r * c))
    A = [[0] * c for _ in range(r)]
    for i, j, v in cells:
        A[i][j] = v
    return A


def _det(M):
    return int(sympy.Matrix(M.to_lists()).det())


@settings(max_examples=1000, deadline=None)
@given(sparse_matrices())
def test_snf_reconstruction_and_divisibility(A):
    M = SparseIntMatrix.from_dense(A)
    U, D, V = smith_normal_form(M)
    assert ((U @ M) @ V).to_lists() == D.to_lists()
    assert D.is_diagonal()
    d = D.diagonal()
    nonzero = [x for x in d if x]
    assert all(x > 0 for x in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert d[: len(nonzero)] == nonzero
    assert abs(_det(U)) == 1 and abs(_det(V)) == 1


@settings(max_examples=150, deadline=None)
@given(sparse_matrices(max_dim=5, bound=30))
def test_snf_matches_sympy(A):
    _, D, _ = smith_normal_form(SparseIntMatrix.from_dense(A))
    ours = [x for x in D.diagonal() if x]
    ref = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
    theirs = [abs(int(ref[i, i])) for i in range(min(ref.shape)) if ref[i, i] != 0]
    assert ours == theirs


def test_snf_known_example():
    _, D, _ = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert D.diagonal() == [2, 6, 12]


def test_sparse_json_roundtrip():
    M = SparseIntMatrix.from_dense([[0, 3], [5, 0], [0, 0]])
    assert SparseIntMatrix.from_json(M.to_json()).to_lists() == M.to_lists()
    assert M.transpose().to_lists() == [[0, 5, 0], [3, 0, 0]]


def test_integer_cokernel():
    factors, _ = integer_cokernel([[2, 0], [0, 3]], 2)
    assert sorted(f for f in factors if f != 1) == [6]
    factors, _ = integer_cokernel([[2, 0]], 2)
    assert 0 in factors


def _brute_kernel(A, m):
    A = np.asarray(A)
    return {x for x in itertools.product(range(m), repeat=A.shape[1]) if not np.any(A @ np.array(x) % m)}


def _span(cols, m, n):
    out = {tuple([0] * n)}
    frontier = list(out)
    while frontier:
        new = []
        for v in frontier:
            for c in cols:
                w = tuple((a + b) % m for a, b in zip(v, c))
                if w not in out:
                    out.add(w)
                    new.append(w)
        frontier = new
    return out


@settings(max_examples=60, deadline=None)
@given(sparse_matrices(max_dim=3, bound=20), st.sampled_from([4, 6, 8, 12]))
def test_kernel_mod_spans_brute_force_kernel(A, m):
    K = kernel_mod(A, m)
    n = len(A[0])
    cols = [tuple(int(x) % m for x in K[:, j]) for j in range(K.shape[1])]
    assert _span(cols, m, n) == _brute_kernel(A, m)


@settings(max_examples=80, deadline=None)
@given(sparse_matrices(max_dim=4), st.sampled_from([5, 9, 12, 18]), st.data())
def test_solve_mod(A, m, data):
    A = np.asarray(A, dtype=np.int64)
    x0 = np.array(data.draw(st.lists(st.integers(0, m - 1), min_size=A.shape[1], max_size=A.shape[1])))
    b = A @ x0 % m
    x = solve_mod(A, b, m)
    assert x is not None and np.array_equal(A @ np.asarray(x, dtype=np.int64) % m, b)


def test_solve_mod_detects_inconsistency():
    assert solve_mod([[2], [4]], [1, 0], 8) is None


def test_quotient_presentation():
    A, q = quotient_presentation([[1, 0], [0, 1]], [[2, 0], [0, 4]], 8)
    assert A.invariant_factors == (2, 4)
    assert q.is_zero([2, 4])
    assert not q.is_zero([1, 0])
    with pytest.raises(InconsistentPresentation):
        quotient_presentation([[1, 0]], [[0, 1]], 8)


def test_finabgroup_basics():
    A = FinAbGroup.from_cyclic_orders([6, 2, 1])
    assert A.invariant_factors == (2, 6)
    assert A.order == 12 and A.rank == 2 and A.exponent == 6
    comps = A.primary_components()
    assert comps[2].invariant_factors == (2, 2) and comps[3].invariant_factors == (3,)
    assert str(FinAbGroup(())) == "0"
    assert str(A) == "Z/2 x Z/6"
    assert A.to_json() == [2, 6]


def test_ab_group_map_kernel():
    A = FinAbGroup((4,))
    f = AbGroupMap(A, FinAbGroup((2,)), [[1]])
    K = f.kernel()
    assert K.order == 2
    assert f.image_order() == 2


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
