"""
Projective modules, quadratic spaces, their classes modulo Lambda, unimodularity, isometries and
reduction modulo the radical.
"""

import itertools

import numpy as np
import pytest

from quasiwitt.core.forms.module import PresentedModule, Submodule, complement_projection, span
from quasiwitt.core.forms.quadratic_space import (
    Isometry,
    QuadraticSpace,
    check_isometry,
    classes_equal,
    classes_equal_exhaustive,
    hyperbolic,
    is_unimodular,
    orthogonal_complement,
    orthogonal_sum,
    quad_value,
    restrict,
)
from quasiwitt.core.forms.reduction import reduce_mod_radical
from quasiwitt.core.ring.linalg import mat_mul
from quasiwitt.core.utils.errors import (
    ModuleMismatchError,
    NotASummandError,
    NotInModuleError,
    RingMismatchError,
    ShapeMismatchError,
)


def _all_grams(order: int, k: int):
    for entries in itertools.product(range(order), repeat=k * k):
        yield np.array(entries, dtype=np.int64).reshape(k, k)


# ---------------------------------------------------------
# Modules
# ---------------------------------------------------------


def test_span_and_submodules(load_ring):
    ring = load_ring("f3").ring
    line = Submodule.spanned_by(ring, 2, [[1, 1]])
    assert line.size == 3
    assert line.contains([2, 2])
    assert not line.contains([1, 0])
    assert span(ring, 2, [[1, 0], [0, 1]]).shape == (9, 2)
    other = Submodule.spanned_by(ring, 2, [[1, 0]])
    assert line.intersect(other).is_zero()
    assert len(line.generators()) == 1


def test_presented_module(load_ring):
    ring = load_ring("f3").ring
    module = PresentedModule(ring, [[1, 0], [0, 0]])
    assert module.size == 3
    assert not module.is_free()
    assert PresentedModule.free(ring, 2).is_free()
    assert module.dual_rows().shape == (3, 2)
    with pytest.raises(NotInModuleError):
        module.require([0, 1])
    with pytest.raises(NotASummandError):
        PresentedModule(ring, [[2, 0], [0, 0]])


def test_present_finds_an_idempotent_for_a_summand(load_ring):
    ring = load_ring("f3").ring
    whole = PresentedModule.free(ring, 2)
    diagonal = Submodule.spanned_by(ring, 2, [[1, 1]])
    presented = whole.present(diagonal)
    assert np.array_equal(mat_mul(ring, presented.presentation, presented.presentation), presented.presentation)
    assert presented.size == 3
    assert presented.contains([1, 1])


def test_complement_projection(load_ring):
    ring = load_ring("f3").ring
    projection = complement_projection(ring, 2, [np.array([1, 1])], [np.array([0, 1])])
    assert projection.tolist() == [[1, 0], [1, 0]]


def test_modules_over_a_matrix_ring(load_ring):
    ring = load_ring("m2f2_transpose").ring
    e11 = ring.parse([[1, 0], [0, 0]])
    module = PresentedModule(ring, [[e11]])
    # e11 M_2(F_2) is the first row space, four matrices
    assert module.size == 4
    assert module.dual_rows().shape == (4, 1)


# ---------------------------------------------------------
# Forms and classes
# ---------------------------------------------------------


@pytest.mark.parametrize("name", ["hyperbolic_f3", "diag11_f3", "m2f2_rank1", "hyperbolic_f2xf2", "f3xf3_rank1"])
def test_hermitian_form_is_beta_plus_its_twist(name, load_space):
    space = load_space(name)
    ur = space.ur
    for x, y in itertools.product(space.elements(), repeat=2):
        twisted = ur.ring.mul(ur.sigma(space.beta(y, x)), ur.u)
        assert space.h(x, y) == ur.ring.add(space.beta(x, y), twisted)


def test_gram_is_normalised_to_the_module(load_ring):
    ur = load_ring("f3")
    module = PresentedModule(ur.ring, [[1, 0], [0, 0]])
    space = QuadraticSpace(ur, module, [[1, 1], [1, 1]])
    assert space.gram.tolist() == [[1, 0], [0, 0]]


def test_space_construction_errors(load_ring):
    f3, f2 = load_ring("f3"), load_ring("f2")
    with pytest.raises(ShapeMismatchError):
        QuadraticSpace(f3, PresentedModule.free(f3.ring, 2), [[1]])
    with pytest.raises(RingMismatchError):
        QuadraticSpace(f3, PresentedModule.free(f2.ring, 1), [[1]])


def test_quad_value(load_space, load_ring):
    diagonal = load_space("diag11_f3")
    value = quad_value(diagonal, [1, 1])
    assert value.representative == 2
    assert value.members == (2,)
    assert quad_value(load_space("hyperbolic_f2"), [1, 1]).representative == 1

    # with Lambda = F_2 every value is the whole ring
    symplectic = QuadraticSpace.free(load_ring("f2_max"), [[0, 1], [0, 0]])
    assert quad_value(symplectic, [1, 1]).members == (0, 1)

    ur = load_ring("f3")
    line = QuadraticSpace(ur, PresentedModule(ur.ring, [[1, 0], [0, 0]]), [[1, 0], [0, 0]])
    with pytest.raises(NotInModuleError):
        quad_value(line, [0, 1])


def test_classes_modulo_lambda(load_ring):
    f2 = load_ring("f2")
    upper = QuadraticSpace.free(f2, [[0, 1], [0, 0]])
    assert classes_equal(upper, QuadraticSpace.free(f2, [[0, 0], [1, 0]]))
    assert not classes_equal(upper, QuadraticSpace.free(f2, [[1, 1], [0, 0]]))

    f2_max = load_ring("f2_max")
    assert classes_equal(QuadraticSpace.free(f2_max, [[0, 1], [0, 0]]), QuadraticSpace.free(f2_max, [[1, 1], [0, 1]]))

    f3 = load_ring("f3")
    assert classes_equal(QuadraticSpace.free(f3, [[0, 1], [0, 0]]), QuadraticSpace.free(f3, [[0, 0], [1, 0]]))
    assert not classes_equal(QuadraticSpace.free(f3, [[0, 1], [0, 0]]), QuadraticSpace.free(f3, [[1, 1], [0, 0]]))

    with pytest.raises(ModuleMismatchError):
        classes_equal(upper, QuadraticSpace(f2, PresentedModule(f2.ring, [[1, 0], [0, 0]]), [[0, 1], [0, 0]]))


@pytest.mark.parametrize("name", ["f2", "f2_max", "f3", "f4"])
def test_generator_check_agrees_with_definition(name, load_ring):
    ur = load_ring(name)
    reference = QuadraticSpace.free(ur, [[0, 1], [0, 0]])
    grams = list(_all_grams(ur.ring.order, 2))
    if len(grams) > 81:
        grams = grams[::7]
    for gram in grams:
        other = QuadraticSpace.free(ur, gram)
        assert classes_equal(reference, other) == classes_equal_exhaustive(reference, other)


def test_generator_check_on_a_summand(load_ring):
    ur = load_ring("m2f2_transpose")
    ring = ur.ring
    e11 = ring.parse([[1, 0], [0, 0]])
    module = PresentedModule(ring, [[e11]])
    reference = QuadraticSpace(ur, module, [[0]])
    for a in range(ring.order):
        other = QuadraticSpace(ur, module, [[a]])
        assert classes_equal(reference, other) == classes_equal_exhaustive(reference, other)


@pytest.mark.parametrize(
    "name, expected",
    [
        ("diag11_f3", True),
        ("diag1_f3", True),
        ("hyperbolic_f2", True),
        ("hyperbolic_f3", True),
        ("m2f2_rank1", True),
        ("f3xf3_rank1", True),
        ("hyperbolic_f2xf2", True),
        ("zero_f3", False),
    ],
)
def test_is_unimodular(name, expected, load_space):
    assert is_unimodular(load_space(name)) is expected


def test_alternating_forms_in_characteristic_two(load_ring):
    # h = B + B^T vanishes on a diagonal Gram matrix over F_2
    assert not is_unimodular(QuadraticSpace.free(load_ring("f2"), [[1, 0], [0, 0]]))
    assert not is_unimodular(QuadraticSpace.free(load_ring("f2"), [[1]]))


def test_unimodularity_on_a_summand(load_ring):
    ur = load_ring("f3")
    line = PresentedModule(ur.ring, [[1, 0], [0, 0]])
    assert is_unimodular(QuadraticSpace(ur, line, [[1, 0], [0, 0]]))
    assert not is_unimodular(QuadraticSpace(ur, line, [[0, 1], [0, 0]]))


# ---------------------------------------------------------
# Constructions
# ---------------------------------------------------------


def test_orthogonal_sum(load_space):
    total = orthogonal_sum(load_space("diag1_f3"), load_space("diag2_f3"))
    assert total.rank == 2
    assert total.gram.tolist() == [[1, 0], [0, 2]]
    assert is_unimodular(total)
    with pytest.raises(RingMismatchError):
        orthogonal_sum(load_space("diag1_f3"), load_space("hyperbolic_f2"))


def test_check_isometry(load_space, load_isometry):
    diagonal = load_space("diag11_f3")
    assert check_isometry([[2, 0], [0, 2]], diagonal, diagonal)
    assert check_isometry(load_isometry("swap", diagonal), diagonal, diagonal)
    assert not check_isometry([[1, 0], [0, 0]], diagonal, diagonal)

    mixed = orthogonal_sum(load_space("diag1_f3"), load_space("diag2_f3"))
    assert not check_isometry(load_isometry("swap", mixed), mixed, mixed)
    with pytest.raises(ShapeMismatchError):
        check_isometry([[1]], diagonal, diagonal)


def test_isometry_inverse(load_space, load_isometry):
    space = load_space("hyperbolic_f3")
    swap = Isometry(space, space, load_isometry("swap", space))
    assert swap.verify()
    inverse = swap.inverse()
    assert inverse.verify()
    assert np.array_equal(mat_mul(space.ring, inverse.matrix, swap.matrix), np.eye(2, dtype=np.int64))


def test_restrict_and_complement(load_space, load_summand):
    hyperbolic_plane = load_space("hyperbolic_f3")
    line = restrict(hyperbolic_plane, load_summand("first_line", hyperbolic_plane))
    assert line.module.size == 3
    assert not line.gram.any()
    assert not is_unimodular(line)

    diagonal = load_space("diag11_f3")
    first = Submodule.spanned_by(diagonal.ring, 2, [[1, 0]])
    complement = orthogonal_complement(diagonal, first)
    assert complement.size == 3
    assert complement.contains([0, 1])
    assert is_unimodular(restrict(diagonal, complement))

    with pytest.raises(NotASummandError):
        restrict(line, PresentedModule(diagonal.ring, [[0, 0], [0, 1]]))


def test_hyperbolic_spaces_are_unimodular(load_ring):
    f3 = load_ring("f3")
    plane = hyperbolic(f3, PresentedModule.free(f3.ring, 1))
    assert plane.rank == 2
    assert plane.gram.tolist() == [[0, 1], [0, 0]]
    assert is_unimodular(plane)

    matrices = load_ring("m2f2_transpose")
    e11 = matrices.ring.parse([[1, 0], [0, 0]])
    assert is_unimodular(hyperbolic(matrices, PresentedModule(matrices.ring, [[e11]])))


# ---------------------------------------------------------
# Reduction modulo the radical
# ---------------------------------------------------------


def test_reduction_of_a_product(load_space):
    reduced = reduce_mod_radical(load_space("f3xf3_rank1"))
    assert len(reduced.components) == 2
    for component in reduced.components:
        assert not component.is_zero
        assert is_unimodular(component.corner_space)


def test_reduction_of_a_matrix_space(load_space):
    space = load_space("m2f2_rank1")
    (component,) = reduce_mod_radical(space).components
    assert component.factor.length == 2
    assert component.corner_space.ring.order == 2
    assert is_unimodular(component.corner_space)


def test_reduction_of_a_local_ring(load_ring):
    z4 = load_ring("z4")
    reduced = reduce_mod_radical(QuadraticSpace.free(z4, [[2, 1], [0, 2]]))
    assert reduced.quotient.order == 2
    assert reduced.space.gram.tolist() == [[0, 1], [0, 0]]
    assert is_unimodular(reduced.space)
    assert reduced.reduce([3, 2]).tolist() == [1, 0]
