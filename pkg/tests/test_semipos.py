import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from oracles import sp_certificate_ok, sp_witness_ok
from semipositive.cones import (cone_from_generators, contains, contains_interior, dual, orthant,
                                random_proper_cone, random_simplicial_cone)
from semipositive.core import (CapacityError, DimensionError, HypothesisError, SingularMatrixError,
                               identity, inverse, is_nonnegative, random_matrix, rmatrix)
from semipositive.semipos import (MINIMAL, NOT_SEMIPOSITIVE, REDUNDANT, SEMIPOSITIVE, SPVerdict,
                                  classify_msp, classify_sp, conjugate_back, conjugate_sp,
                                  cross_check_msp_by_deletion, decompose_diff_msp,
                                  decompose_sum_sp, is_left_sp, is_sp, msp_basis, sample_sp,
                                  sp_2x2_closed_form, sp_basis, sp_via_row_submatrices,
                                  verify_left_sp)

ent = st.integers(-5, 5)


def int_matrices(max_m=4, max_n=4, min_m=1, min_n=1):
    return st.integers(min_m, max_m).flatmap(lambda m: st.integers(min_n, max_n).flatmap(
        lambda n: st.lists(st.lists(ent, min_size=n, max_size=n), min_size=m, max_size=m)))


def scipy_sp(A, G1=None, G2=None) -> bool:
    """Floating-point route: A G1 lam = G2 mu with lam, mu >= 1 (generators only)."""
    A = np.array(A, dtype=float)
    m, n = A.shape
    G1 = np.eye(n) if G1 is None else np.array(G1, dtype=float)
    G2 = np.eye(m) if G2 is None else np.array(G2, dtype=float)
    p, q = G1.shape[1], G2.shape[1]
    E = np.hstack([A.dot(G1), -G2])
    res = linprog(np.zeros(p + q), A_eq=E, b_eq=np.zeros(m), bounds=[(1, None)] * (p + q),
                  method="highs")
    return res.status == 0


def test_identity_and_farkas_examples():
    v = classify_sp(identity(2))
    assert v.kind == SEMIPOSITIVE and v.certificate is None
    assert all(x > 0 for x in v.witness)
    w = classify_sp([[1, -1], [-1, 1]])
    assert w.kind == NOT_SEMIPOSITIVE and w.witness is None
    assert w.certificate[0] == w.certificate[1] > 0
    assert bool(v) and not bool(w)


def test_verdict_verify_rejects_tampering():
    A = rmatrix([[1, -1], [-1, 1]])
    assert not SPVerdict(SEMIPOSITIVE, witness=np.array([1, 1], dtype=object)).verify(A)
    assert not SPVerdict(NOT_SEMIPOSITIVE, certificate=np.array([0, 0], dtype=object)).verify(A)


@settings(max_examples=200, deadline=None)
@given(int_matrices(5, 5))
def test_orthant_verdict_matches_scipy(rows):
    v = classify_sp(rows)
    assert v.semipositive == scipy_sp(rows)
    if v.semipositive:
        assert sp_witness_ok(rows, v.witness)
    else:
        assert sp_certificate_ok(rows, v.certificate)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 4), st.integers(1, 4))
def test_general_cone_verdict_matches_scipy(seed, m, n):
    rng = np.random.default_rng(seed)
    K1 = random_proper_cone(rng, n, n + int(rng.integers(0, 3))) if n > 1 else orthant(1)
    K2 = random_proper_cone(rng, m, m + int(rng.integers(0, 3))) if m > 1 else orthant(1)
    A = sample_sp(m, n, K1, K2, seed=rng) if seed % 2 else random_matrix(rng, m, n, bound=4)
    v = classify_sp(A, K1, K2)
    assert v.verify(A, K1, K2)
    assert v.semipositive == scipy_sp(A, K1.generators, K2.generators)
    if v.semipositive:
        assert contains_interior(K1, v.witness) and contains_interior(K2, A.dot(v.witness))
    else:
        y = v.certificate
        assert contains(dual(K2), y) and contains(dual(K1), -A.T.dot(y))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        classify_sp(identity(2), orthant(3), orthant(2))


def test_improper_cone_rejected():
    half_plane = cone_from_generators([[1, -1, 0], [0, 0, 1]])
    with pytest.raises(HypothesisError):
        classify_sp(identity(2), half_plane, orthant(2))


@settings(max_examples=150, deadline=None)
@given(int_matrices(3, 3, 1, 1).filter(lambda r: len(r) == len(r[0])))
def test_square_orthant_msp_is_inverse_nonnegativity(rows):
    A = rmatrix(rows)
    try:
        expected = is_nonnegative(inverse(A))
    except SingularMatrixError:
        expected = False
    c = classify_msp(A)
    assert c.minimal == expected
    if c.minimal:
        assert np.array_equal(c.left_inverse, inverse(A))


@settings(max_examples=150, deadline=None)
@given(int_matrices(5, 3, 1, 1).filter(lambda r: len(r) >= len(r[0])))
def test_msp_left_inverse_matches_column_deletion(rows):
    c = classify_msp(rows)
    assert c.minimal == cross_check_msp_by_deletion(rows)
    if c.kind == MINIMAL:
        A = rmatrix(rows)
        assert np.array_equal(c.left_inverse.dot(A), identity(A.shape[1]))
        assert is_nonnegative(c.left_inverse)


def test_msp_examples():
    assert classify_msp(identity(3)).kind == MINIMAL
    assert classify_msp([[1, 1], [1, 2], [1, 1]]).kind == REDUNDANT
    assert classify_msp([[1, -1], [-1, 1]]).kind == NOT_SEMIPOSITIVE
    with pytest.raises(DimensionError):
        classify_msp([[1, 1, 1]])
    with pytest.raises(CapacityError):
        cross_check_msp_by_deletion(identity(7))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from([(2, 2), (3, 3), (3, 2)]))
def test_msp_on_cones_has_verified_left_inverse(seed, shape):
    m, n = shape
    rng = np.random.default_rng(seed)
    K1 = random_proper_cone(rng, n, n + 1)
    K2 = random_simplicial_cone(rng, m) if m > n else random_proper_cone(rng, m, m + 1)
    for B in msp_basis(m, n, K1, K2)[:2]:
        c = classify_msp(B, K1, K2)
        assert c.minimal
        L = c.left_inverse
        assert np.array_equal(L.dot(B), identity(n))
        # L maps generators of K2 into K1
        assert all(contains(K1, L.dot(K2.generators[:, j])) for j in range(K2.num_rays))


@settings(max_examples=120, deadline=None)
@given(int_matrices(4, 4))
def test_left_sp_is_sp_of_transpose_on_orthants(rows):
    A = rmatrix(rows)
    for strict in (False, True):
        v = is_left_sp(A, strict=strict)
        assert v.semipositive == classify_sp(A.T).semipositive
        assert verify_left_sp(v, A, orthant(A.shape[1]), orthant(A.shape[0]), strict)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000), st.integers(2, 3), st.integers(2, 3))
def test_left_sp_on_cones_matches_dual_formulation(seed, m, n):
    rng = np.random.default_rng(seed)
    K1 = random_proper_cone(rng, n, n + 1)
    K2 = random_proper_cone(rng, m, m + 1)
    A = random_matrix(rng, m, n, bound=4)
    v = is_left_sp(A, K1, K2)
    assert v.semipositive == classify_sp(A.T, dual(K2), dual(K1)).semipositive


def test_2x2_closed_form_shape_check():
    with pytest.raises(DimensionError):
        sp_2x2_closed_form(identity(3))


def test_row_submatrix_limits():
    with pytest.raises(DimensionError):
        sp_via_row_submatrices([[1, 2, 3]])
    with pytest.raises(CapacityError):
        sp_via_row_submatrices(np.ones((16, 8), dtype=int))


def test_conjugation_hypotheses():
    K = cone_from_generators([[1, 1], [0, 1]])
    with pytest.raises(HypothesisError):
        conjugate_sp(identity(2), [[1, 0], [0, -1]], K.generators, K, K)
    with pytest.raises(HypothesisError):
        conjugate_sp(identity(2), K.generators, [[1, 1], [1, 1]], K, K)
    with pytest.raises(HypothesisError):
        conjugate_back(identity(2), [[1, 0], [0, 0]], inverse(K.generators), K, K)


def test_sample_sp_is_deterministic():
    a = sample_sp(3, 2, seed=5)
    b = sample_sp(3, 2, seed=5)
    assert np.array_equal(a, b)
    assert is_sp(a)
    assert not np.array_equal(a, sample_sp(3, 2, seed=6))


@pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (3, 3), (4, 3), (2, 3)])
def test_sp_basis_on_orthants(m, n):
    mats = sp_basis(m, n)
    assert len(mats) == m * n
    assert all(is_sp(B) for B in mats)


def test_msp_basis_requires_simplicial_codomain_when_tall():
    rng = np.random.default_rng(0)
    K2 = random_proper_cone(rng, 3, 5)
    if K2.num_rays > 3:
        with pytest.raises(HypothesisError):
            msp_basis(3, 2, orthant(2), K2)
    with pytest.raises(DimensionError):
        msp_basis(2, 3)


def test_decompositions_on_cones():
    rng = np.random.default_rng(21)
    for m, n in [(2, 2), (3, 2), (3, 3)]:
        K1 = random_proper_cone(rng, n, n + 1)
        K2 = random_simplicial_cone(rng, m)
        A = random_matrix(rng, m, n, bound=5)
        B, C = decompose_sum_sp(A, K1, K2)
        assert np.array_equal(B + C, A)
        assert is_sp(B, K1, K2) and is_sp(C, K1, K2)
        C1, C2 = decompose_diff_msp(A, K1, K2)
        assert np.array_equal(C1 - C2, A)
        assert classify_msp(C1, K1, K2).minimal and classify_msp(C2, K1, K2).minimal


def test_sum_decomposition_needs_two_columns():
    with pytest.raises(HypothesisError):
        decompose_sum_sp([[1], [2]])
