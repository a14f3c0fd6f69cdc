import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropicost.dioid import INF, NEG_INF, MaxPlus, make_dioid
from tropicost.moduloid import (
    CostMatrix,
    CostVector,
    DimensionError,
    first_violation,
    kleene_plus,
    mat_add,
    mat_leq,
    mat_mul,
    mat_power,
    mat_powers,
    mat_residual,
    mat_vec,
    trace,
    transpose,
)
from tropicost.oracle import _walks_from, closure_by_walks, random_matrix
from tropicost.semantics import load_system
from helpers import ALL_KINDS, DATA, dioid_for, sampler

B = NEG_INF
MP = MaxPlus()


def m(rows, d=MP):
    return CostMatrix(d, rows)


def test_mat_add():
    A = m([[1, B], [2, 0]])
    assert mat_add(A, m([[0, 3], [B, 0]])) == m([[1, 3], [2, 0]])
    assert mat_add(A, A) == A
    assert mat_add(A, CostMatrix.zeros(MP, 2)) == A


def test_mat_mul():
    A = m([[1, 2], [B, 0]])
    assert mat_mul(A, m([[0, B], [3, 1]])) == m([[5, 3], [3, 1]])
    assert mat_mul(CostMatrix.identity(MP, 2), A) == A
    assert mat_mul(A, CostMatrix.zeros(MP, 2)) == CostMatrix.zeros(MP, 2)
    assert A @ A == mat_mul(A, A)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        mat_mul(m([[1, 2]]), m([[1, 2]]))
    with pytest.raises(DimensionError):
        mat_add(m([[1]]), m([[1, 2]]))
    with pytest.raises(DimensionError):
        mat_vec(m([[1, 2]]), CostVector(MP, [1]))
    with pytest.raises(ValueError):
        mat_mul(m([[1]]), CostMatrix(make_dioid("minplus"), [[1]]))


def test_mat_vec():
    assert mat_vec(m([[1, 2]]), CostVector(MP, [0, 0])) == CostVector(MP, [2])
    u = CostVector(MP, [3, B])
    assert mat_vec(CostMatrix.identity(MP, 2), u) == u
    assert mat_vec(m([[1, 2], [3, 4]]), CostVector.zeros(MP, 2)) == CostVector.zeros(MP, 2)


def test_mat_leq_and_first_violation():
    A = m([[1, B], [0, 2]])
    assert mat_leq(A, A)
    assert mat_leq(CostMatrix.zeros(MP, 2), A)
    assert not mat_leq(m([[1]]), m([[0]]))
    assert first_violation(m([[0, 5]]), m([[0, 4]])) == (0, 1)
    assert first_violation(A, A) is None


def test_kleene_plus_examples():
    assert kleene_plus(CostMatrix.zeros(MP, 3)) == CostMatrix.zeros(MP, 3)
    assert kleene_plus(m([[2]])) == m([[INF]])
    assert kleene_plus(m([[B, 8], [B, B]])) == m([[B, 8], [B, B]])
    assert kleene_plus(m([[-1]])) == m([[-1]])


def test_powers_trace_transpose_on_example():
    M = load_system(DATA / "lrc.tsys").matrix
    assert mat_power(M, 1) == M
    assert mat_power(M, 3)[1, 1] == 12
    assert trace(M) == 2
    assert trace(CostMatrix.zeros(MP, 3)) == B
    assert trace(CostMatrix.identity(MP, 3)) == 0
    I = CostMatrix.identity(MP, 3)
    assert mat_power(I, 5) == I and transpose(I) == I
    assert transpose(transpose(M)) == M
    assert transpose(M)[1, 0] == 8
    with pytest.raises(ValueError):
        mat_power(M, 0)


def test_immutability():
    A = m([[1]])
    with pytest.raises(AttributeError):
        A.rows = ()
    with pytest.raises(AttributeError):
        CostVector(MP, [1]).entries = ()


def test_residual_is_greatest_boolean_subsolution():
    A = m([[0, 0, B], [B, 0, 0]])
    y = CostVector(MP, [0, B])
    r = mat_residual(A, y)
    # column 0 only touches row 0; the other columns reach row 1
    assert r.entries[0] == 0 and r.entries[1] == B and r.entries[2] == B


def _walk_power(M, k):
    d = M.dioid
    n = M.n_rows
    out = [[d.zero] * n for _ in range(n)]
    for i in range(n):
        for path, cost in _walks_from(M, i, k, [0], 10**6):
            if len(path) == k + 1:
                out[i][path[-1]] = d.add(out[i][path[-1]], cost)
    return out


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_power_matches_walk_enumeration(kind):
    d = dioid_for(kind)
    rng = random.Random(kind)
    for _ in range(15):
        n = rng.randint(1, 5)
        M = random_matrix(d, n, n, 0.5, rng)
        for k, Mk in enumerate(mat_powers(M, 4), start=1):
            W = _walk_power(M, k)
            assert all(d.eq(Mk[i, j], W[i][j]) for i in range(n) for j in range(n))


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_closure_matches_walk_oracle(kind):
    d = dioid_for(kind)
    rng = random.Random("closure" + kind)
    for _ in range(30):
        n = rng.randint(1, 5)
        M = random_matrix(d, n, n, rng.random(), rng)
        K, W = kleene_plus(M), closure_by_walks(M)
        assert all(d.eq(K[i, j], W[i][j]) for i in range(n) for j in range(n))


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_matrix_algebra_property(kind):
    d = dioid_for(kind)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 4))
    def prop(seed, n):
        rng = random.Random(seed)
        draw = sampler(d, rng)
        A, Bm, C = (CostMatrix(d, [[draw() for _ in range(n)] for _ in range(n)]) for _ in range(3))
        assert mat_mul(mat_mul(A, Bm), C) == mat_mul(A, mat_mul(Bm, C))
        assert mat_mul(A, mat_add(Bm, C)) == mat_add(mat_mul(A, Bm), mat_mul(A, C))
        lo = mat_add(A, Bm)
        assert mat_leq(A, lo)
        assert mat_leq(mat_mul(A, C), mat_mul(lo, C))

    prop()

