import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import facets_brute, frac_vector
from semipositive.cones import (cone_from_generators, contains, contains_interior, dual,
                                extend_to_simplicial, facets, format_cone, interior_point,
                                is_automorphism, is_k_inverse_nonnegative, is_nonneg_map,
                                is_proper, is_simplicial, maps_interior_to_interior, orthant,
                                parse_cone, random_proper_cone, require_proper)
from semipositive.core import (CapacityError, HypothesisError, ParseError, identity, rank,
                               rmatrix)

PYRAMID = [[1, -1, -1, 1], [1, 1, -1, -1], [1, 1, 1, 1]]


def as_set(F):
    return {tuple(frac_vector(row)) for row in F}


def test_orthant_is_self_dual():
    K = orthant(3)
    assert np.array_equal(K.generators, identity(3))
    assert np.array_equal(facets(K), identity(3))
    assert dual(K).same_as(K)


def test_two_dimensional_facets():
    K = cone_from_generators([[1, 1], [0, 1]])
    assert as_set(K.facets) == {(1, -1), (0, 1)}


def test_redundant_generator_is_dropped():
    K = cone_from_generators([[1, 1, 0], [0, 1, 1]])
    assert K.num_rays == 2
    assert sorted(K.rays) == [(0, 1), (1, 0)]


def test_square_pyramid():
    K = cone_from_generators(PYRAMID)
    assert K.facets.shape == (4, 3)
    assert as_set(K.facets) == facets_brute(PYRAMID)
    assert dual(dual(K)).same_as(K)
    assert not is_simplicial(K)


def test_half_plane_is_not_pointed():
    K = cone_from_generators([[1, -1, 0], [0, 0, 1]])
    ok, why = is_proper(K)
    assert not ok and "pointed" in why
    with pytest.raises(HypothesisError):
        require_proper(K)


def test_ray_in_plane_is_not_full_dimensional():
    K = cone_from_generators([[1], [1]])
    ok, why = is_proper(K)
    assert not ok and "full-dimensional" in why
    # facets include both signs of the normal to the span
    F = K.facets
    assert contains(K, [2, 2]) and not contains(K, [1, 2]) and not contains(K, [-1, -1])
    assert F.shape[0] == 3


def test_zero_generator_rejected():
    with pytest.raises(ValueError):
        cone_from_generators([[1, 0], [0, 0]])


def test_capacity_limit():
    K = cone_from_generators(np.hstack([np.eye(9, dtype=int), np.ones((9, 1), dtype=int)]))
    with pytest.raises(CapacityError):
        K.facets


def test_membership_and_interior():
    K = cone_from_generators(PYRAMID)
    assert contains(K, [0, 0, 1]) and contains_interior(K, [0, 0, 1])
    assert contains(K, [1, 1, 1]) and not contains_interior(K, [1, 1, 1])
    assert not contains(K, [2, 0, 1])
    assert contains_interior(K, interior_point(K))


def test_parse_and_format_round_trip():
    text = "# square pyramid\ndim 3\n1 1 1\n-1 1 1\n-1 -1 1\n1 -1 1\n2 2 2\n"
    K = parse_cone(text)
    assert K.num_rays == 4
    assert parse_cone(format_cone(K)).same_as(K)


@pytest.mark.parametrize("text", ["", "size 2\n1 0\n", "dim 2\n", "dim 2\n1 0 0\n",
                                  "dim x\n1\n", "dim 2\n0 0\n"])
def test_parse_cone_errors(text):
    with pytest.raises(ParseError):
        parse_cone(text)


def test_lazy_facets_computed_once_across_threads():
    K = cone_from_generators(PYRAMID)
    seen = []
    threads = [threading.Thread(target=lambda: seen.append(id(K.facets))) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(seen)) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4), st.integers(0, 3))
def test_facets_match_brute_force(seed, n, extra):
    K = random_proper_cone(np.random.default_rng(seed), n, n + extra)
    assert as_set(K.facets) == facets_brute(K.generators)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4), st.integers(0, 3))
def test_double_dual_and_duality_pairing(seed, n, extra):
    K = random_proper_cone(np.random.default_rng(seed), n, n + extra)
    D = dual(K)
    assert is_proper(D)[0]
    assert dual(D).same_as(K)
    # every generator of K pairs nonnegatively with every generator of K*
    assert np.all(K.generators.T.dot(D.generators) >= 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4))
def test_extend_to_simplicial(seed, n):
    rng = np.random.default_rng(seed)
    K = random_proper_cone(rng, n, n + 2)
    v = interior_point(K)
    T = extend_to_simplicial(K, v)
    assert rank(T) == n
    assert np.array_equal(T[:, 0], v)
    assert all(contains(K, T[:, j]) for j in range(n))


def test_extend_rejects_outside_vector():
    with pytest.raises(ValueError):
        extend_to_simplicial(orthant(2), [1, -1])


def test_map_predicates_on_orthants():
    K = orthant(2)
    assert is_nonneg_map([[1, 0], [2, 3]], K, K)
    assert not is_nonneg_map([[1, -1], [0, 1]], K, K)
    assert maps_interior_to_interior([[1, 0], [1, 1]], K, K)
    assert not maps_interior_to_interior([[1, 0], [0, 0]], K, K)
    # M-matrix: inverse nonnegative
    assert is_k_inverse_nonnegative([[2, -1], [-1, 2]], K)
    assert not is_k_inverse_nonnegative([[1, 1], [1, 1]], K)
    assert is_automorphism([[0, 2], [3, 0]], K)
    assert not is_automorphism([[1, 1], [0, 1]], K)


def test_automorphism_of_pyramid():
    K = cone_from_generators(PYRAMID)
    rot = rmatrix([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    assert is_automorphism(rot, K)
    assert is_automorphism(rot * 5, K)
    assert not is_automorphism(rmatrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]]), K)
