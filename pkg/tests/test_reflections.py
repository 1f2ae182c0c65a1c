"""
Quasi-reflections s_{y,e,c}: construction, the inverse formula, re-indexing, orthogonal composition
and transvections between vectors.
"""

import numpy as np
import pytest

from quasiwitt.core.forms.quadratic_space import check_isometry, quad_value
from quasiwitt.core.reflections.quasi_reflection import (
    compose_orthogonal,
    enumerate_quasi_reflections,
    identity_reflection,
    inverse,
    make_reflection,
    product_matrix,
    reindex,
)
from quasiwitt.core.reflections.transvection import transvect_to
from quasiwitt.core.utils.errors import (
    DomainViolationError,
    IdempotentsNotOrthogonalError,
    InvalidCError,
    NotEFInvertibleError,
    NoTransvectionFoundError,
)


@pytest.fixture
def matrix_space(load_space):
    space = load_space("m2f2_rank1")
    ring = space.ring
    units = {
        "e11": ring.parse([[1, 0], [0, 0]]),
        "e22": ring.parse([[0, 0], [0, 1]]),
        "e12": ring.parse([[0, 1], [0, 0]]),
    }
    return space, units


def _apply_product(reflections, x):
    for reflection in reversed(reflections):
        x = reflection(x)
    return x


# ---------------------------------------------------------
# Construction
# ---------------------------------------------------------


def test_reflection_along_a_basis_vector(load_space):
    space = load_space("diag11_f3")
    reflection = make_reflection(space, [1, 0], 1)
    assert reflection.c == 1
    assert reflection.c_inverse == 1
    assert reflection([1, 0]).tolist() == [2, 0]
    assert reflection([0, 1]).tolist() == [0, 1]
    assert reflection.as_matrix().tolist() == [[2, 0], [0, 1]]
    assert reflection.to_dict() == {"y": [[1], [0]], "e": [1], "c": [1]}


def test_reflection_along_a_diagonal_vector(load_space):
    space = load_space("diag11_f3")
    reflection = make_reflection(space, [1, 1], 1)
    assert reflection.c == 2
    assert reflection([1, 1]).tolist() == [2, 2]
    assert reflection.as_matrix().tolist() == [[0, 2], [2, 0]]


def test_invalid_data(load_space, matrix_space):
    space = load_space("diag11_f3")
    with pytest.raises(InvalidCError):
        make_reflection(space, [1, 0], 1, c=2)
    with pytest.raises(InvalidCError):
        make_reflection(space, [0, 0], 1)
    assert identity_reflection(space, 1) is None

    matrices, units = matrix_space
    e12 = units["e12"]
    with pytest.raises(DomainViolationError):
        make_reflection(matrices, [e12], e12)
    with pytest.raises(DomainViolationError):
        make_reflection(matrices, [e12], units["e11"])


@pytest.mark.parametrize("name", ["diag11_f3", "hyperbolic_f2", "m2f2_rank1", "f3xf3_rank1", "hyperbolic_f2xf2"])
def test_every_quasi_reflection_is_an_isometry_with_its_stated_inverse(name, load_space):
    space = load_space(name)
    count = 0
    for reflection in enumerate_quasi_reflections(space):
        count += 1
        assert check_isometry(reflection.as_matrix(), space, space)
        undo = inverse(reflection)
        assert np.array_equal(product_matrix(space, [reflection, undo]), space.module.presentation)
        assert np.array_equal(product_matrix(space, [undo, reflection]), space.module.presentation)
    assert count > 0


def test_reflections_fix_the_orthogonal_of_y(load_space):
    space = load_space("hyperbolic_f3")
    reflection = make_reflection(space, [1, 1], 1)
    for x in space.elements():
        if space.h([1, 1], x) == 0:
            assert np.array_equal(reflection(x), x)


# ---------------------------------------------------------
# Re-indexing and composition
# ---------------------------------------------------------


def test_reindex_writes_the_same_map(matrix_space):
    space, units = matrix_space
    reflection = next(enumerate_quasi_reflections(space, [units["e11"]]))
    moved = reindex(reflection, units["e12"], units["e22"])
    assert moved.e == units["e22"]
    assert np.array_equal(moved.as_matrix(), reflection.as_matrix())
    with pytest.raises(NotEFInvertibleError):
        reindex(reflection, 0, units["e22"])


def test_compose_orthogonal(matrix_space):
    space, units = matrix_space
    first = next(enumerate_quasi_reflections(space, [units["e11"]]))
    second = next(enumerate_quasi_reflections(space, [units["e22"]]))
    composed = compose_orthogonal(first, second)
    assert composed.e == space.ring.one
    assert np.array_equal(composed.as_matrix(), product_matrix(space, [first, second]))
    with pytest.raises(IdempotentsNotOrthogonalError):
        compose_orthogonal(first, first)


# ---------------------------------------------------------
# Transvections
# ---------------------------------------------------------


def test_single_transvection(load_space):
    space = load_space("diag11_f3")
    product = transvect_to(space, [1, 0], [0, 1], 1)
    assert len(product) == 1
    assert _apply_product(product, np.array([1, 0])).tolist() == [0, 1]
    assert transvect_to(space, [1, 0], [1, 0], 1) == []


@pytest.mark.parametrize("name", ["diag11_f3", "hyperbolic_f3", "hyperbolic_f2"])
def test_transvections_connect_vectors_of_equal_value(name, load_space):
    space = load_space(name)
    elements = [x for x in space.elements() if x.any()]
    found = 0
    for x in elements:
        for y in elements:
            if quad_value(space, x) != quad_value(space, y):
                continue
            try:
                product = transvect_to(space, x, y, 1)
            except NoTransvectionFoundError:
                continue
            found += 1
            assert len(product) <= 2
            assert np.array_equal(_apply_product(product, x), y)
            for reflection in product:
                assert check_isometry(reflection.as_matrix(), space, space)
    assert found > 0


def test_transvections_stay_in_pe(matrix_space):
    space, units = matrix_space
    with pytest.raises(DomainViolationError):
        transvect_to(space, [space.ring.one], [units["e11"]], units["e11"])
