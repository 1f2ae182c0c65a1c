"""
Orthogonality of the simple factors, the Dickson invariant Delta_I and the subgroup generated by
reflections.
"""

import numpy as np
import pytest

from quasiwitt.core.dickson.classification import exact_log, profiles_of
from quasiwitt.core.dickson.invariant import corner_space, delta_I, dickson_indices, dickson_invariant
from quasiwitt.core.dickson.subgroup import is_exceptional_f2_corner, reflection_existence, reflection_subgroup
from quasiwitt.core.forms.module import PresentedModule
from quasiwitt.core.forms.quadratic_space import QuadraticSpace, check_isometry
from quasiwitt.core.oracle.verification import verify_index
from quasiwitt.core.reflections.quasi_reflection import make_reflection
from quasiwitt.core.utils.config import bounds_override
from quasiwitt.core.utils.constants import CornerType, FactorKind, Parity, SubgroupCase
from quasiwitt.core.utils.errors import (
    DomainViolationError,
    HypothesisViolationError,
    NotSplitOrthogonalError,
    NotUnimodularError,
)

hyperbolic_f2_rank4 = [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]
anisotropic_f2_rank4 = [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]


@pytest.fixture
def half_space(load_ring):
    """<1> supported on the first component of F_3 x F_3 only."""
    ur = load_ring("f3xf3")
    first = ur.ring.parse([1, 0])
    return QuadraticSpace(ur, PresentedModule(ur.ring, [[first]]), [[first]])


# ---------------------------------------------------------
# Classification
# ---------------------------------------------------------


def test_exact_log():
    assert exact_log(9, 3) == 2
    assert exact_log(1, 5) == 0
    assert exact_log(10, 3) is None


@pytest.mark.parametrize(
    "name, parity, corner",
    [
        ("f2", Parity.ODD, CornerType.F2),
        ("f3", Parity.ODD, CornerType.OTHER),
        ("z4", Parity.ODD, CornerType.F2),
        ("f2t2", Parity.ODD, CornerType.F2),
        ("m2f2_transpose", Parity.EVEN, CornerType.F2),
    ],
)
def test_split_orthogonal_factors(name, parity, corner, load_ring):
    (profile,) = profiles_of(load_ring(name))
    assert profile.kind is FactorKind.SIMPLE
    assert profile.orthogonal
    assert profile.split_orthogonal
    assert profile.parity is parity
    assert profile.corner_type is corner
    assert profile.to_dict()["parity"] == parity.value


def test_matrix_factor_profile(load_ring):
    (profile,) = profiles_of(load_ring("m2f2_transpose"))
    assert profile.center_order == 2
    assert profile.degree == 2
    assert profile.lambda_dimension == 1


@pytest.mark.parametrize("name", ["f2_max", "f4", "f2xf2_exchange"])
def test_non_orthogonal_factors(name, load_ring):
    (profile,) = profiles_of(load_ring(name))
    assert not profile.orthogonal
    assert not profile.split_orthogonal
    assert profile.parity is Parity.NOT_APPLICABLE


def test_frobenius_moves_the_center(load_ring):
    (profile,) = profiles_of(load_ring("f4"))
    assert profile.center_order == 4
    assert not profile.sigma_fixes_center


def test_exchange_pair_profile(load_ring):
    (profile,) = profiles_of(load_ring("f2xf2_exchange"))
    assert profile.kind is FactorKind.EXCHANGE_PAIR
    assert profile.corner_type is CornerType.F2_SQUARED
    assert profile.to_dict()["corner"] == "F_2xF_2"


def test_products_have_one_profile_per_factor(load_ring):
    assert [profile.parity for profile in profiles_of(load_ring("f3xf3"))] == [Parity.ODD, Parity.ODD]
    mixed = profiles_of(load_ring("f3xm2f2"))
    assert sorted(profile.parity.value for profile in mixed) == ["even", "odd"]
    assert [profile.index for profile in mixed] == [0, 1]


# ---------------------------------------------------------
# Dickson invariant
# ---------------------------------------------------------


def test_indices(load_space, half_space):
    assert dickson_indices(load_space("diag11_f3")) == (0,)
    assert dickson_indices(load_space("f3xf3_rank1")) == (0, 1)
    assert dickson_indices(load_space("hyperbolic_f2xf2")) == ()
    assert len(dickson_indices(half_space)) == 1


def test_reflections_have_odd_invariant(load_space):
    space = load_space("diag11_f3")
    reflection = make_reflection(space, [1, 0], 1).as_matrix()
    assert delta_I(space, reflection) == (1,)
    assert dickson_invariant(space, 0, reflection) == 1
    assert delta_I(space, np.eye(2, dtype=np.int64)) == (0,)


def test_negation_of_an_even_dimensional_space(load_space):
    space = load_space("diag11_f3")
    assert delta_I(space, [[2, 0], [0, 2]]) == (0,)


def test_negation_over_a_product(load_space):
    space = load_space("f3xf3_rank1")
    minus_one = space.ring.parse([2, 2])
    assert delta_I(space, [[minus_one]]) == (1, 1)
    assert delta_I(space, [[space.ring.one]]) == (0, 0)


def test_invariant_is_a_homomorphism(load_space):
    space = load_space("diag11_f3")
    first = make_reflection(space, [1, 0], 1)
    second = make_reflection(space, [1, 1], 1)
    product = first.as_matrix() @ second.as_matrix() % 3
    assert delta_I(space, product) == (0,)


def test_invariant_errors(load_ring, load_space):
    with pytest.raises(NotUnimodularError):
        delta_I(load_space("zero_f3"), np.eye(2, dtype=np.int64))
    with pytest.raises(DomainViolationError):
        delta_I(load_space("diag11_f3"), [[1, 1], [0, 1]])
    alternating = QuadraticSpace.free(load_ring("f2_max"), [[0, 1], [0, 0]])
    assert dickson_indices(alternating) == ()
    with pytest.raises(NotSplitOrthogonalError):
        dickson_invariant(alternating, 0, np.eye(2, dtype=np.int64))


def test_corner_space_of_a_matrix_factor(load_space):
    corner = corner_space(load_space("m2f2_rank1"), 0)
    assert corner.ring.order == 2
    assert corner.rank == 2


# ---------------------------------------------------------
# Reflections and the generated subgroup
# ---------------------------------------------------------


@pytest.mark.parametrize("name", ["diag11_f3", "hyperbolic_f3", "f3xf3_rank1", "m2f2_rank1"])
def test_reflection_witness(name, load_space):
    space = load_space(name)
    existence = reflection_existence(space)
    assert existence.exists
    assert existence.blocking == []
    assert existence.witness.e == space.ring.one
    assert check_isometry(existence.witness.as_matrix(), space, space)
    assert existence.to_dict()["witness"] is not None


def test_an_empty_odd_factor_blocks_reflections(half_space):
    existence = reflection_existence(half_space)
    assert not existence.exists
    assert len(existence.blocking) == 1
    assert existence.witness is None

    report = reflection_subgroup(half_space)
    assert report.case is SubgroupCase.EMPTY_ODD_FACTOR
    assert report.claimed_index == 2
    index = verify_index(half_space)
    assert index.ok, index.counterexamples
    assert index.details["measured_index"] == 2

    with bounds_override(candidates=2):
        assert reflection_subgroup(half_space).claimed_index is None


@pytest.mark.parametrize(
    "name, xi, claimed, relaxed",
    [
        ("diag11_f3", (1,), 1, []),
        ("hyperbolic_f3", (1,), 1, []),
        ("hyperbolic_f2", (1,), 1, [0]),
        ("f3xf3_rank1", (1, 1), 2, []),
        ("m2f2_rank1", (0,), 2, [0]),
    ],
)
def test_claimed_index(name, xi, claimed, relaxed, load_space):
    report = reflection_subgroup(load_space(name))
    assert report.case is SubgroupCase.POPULATED
    assert report.xi == xi
    assert report.claimed_index == claimed
    assert report.relaxed == relaxed
    assert report.measured_index is None
    assert report.to_dict()["case"] == "all-odd-factors-populated"


def test_subgroup_needs_unimodularity(load_space):
    with pytest.raises(NotUnimodularError):
        reflection_subgroup(load_space("zero_f3"))
    with pytest.raises(NotUnimodularError):
        reflection_existence(load_space("zero_f3"))


def test_exceptional_f2_corner(load_ring, load_space):
    ur = load_ring("f2")
    hyperbolic = QuadraticSpace.free(ur, hyperbolic_f2_rank4)
    assert is_exceptional_f2_corner(hyperbolic)
    assert not is_exceptional_f2_corner(QuadraticSpace.free(ur, anisotropic_f2_rank4))
    assert not is_exceptional_f2_corner(load_space("hyperbolic_f2"))

    with pytest.raises(HypothesisViolationError) as error:
        reflection_subgroup(hyperbolic)
    assert error.value.index == 0
    assert reflection_subgroup(QuadraticSpace.free(ur, anisotropic_f2_rank4)).relaxed == [0]
