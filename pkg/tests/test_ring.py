"""
Finite rings, anti-structures, form parameters, radicals and the simple factors of A/J, checked on
the catalog rings.
"""

import numpy as np
import pytest

from conftest import catalog_rings
from quasiwitt.core.ring.constructors import build_ring, is_irreducible, least_irreducible, ring_order
from quasiwitt.core.ring.factors import factors_of, standard_form_conjugator
from quasiwitt.core.ring.finite_ring import CornerRing
from quasiwitt.core.ring.linalg import mat_mul, prime_field_coordinates, rank_mod_p, solve_left
from quasiwitt.core.ring.radical import (
    center,
    ef_inverse,
    full_idempotent_witness,
    idempotents,
    jacobson_radical,
    lift_idempotent,
    lift_orthogonal_system,
    radical_quotient,
)
from quasiwitt.core.ring.unitary_ring import (
    UnitaryRing,
    lambda_bounds,
    sigma_from_rule,
    validate_anti_structure,
    validate_form_parameter,
)
from quasiwitt.core.utils.config import bounds_override
from quasiwitt.core.utils.constants import FactorKind
from quasiwitt.core.utils.errors import InvalidUnitaryRingError, MalformedSpecError, OversizeRingError


def _brute_force_radical(ring) -> list[int]:
    everything = range(ring.order)
    members = []
    for a in everything:
        if all(ring.is_unit(ring.sub(ring.one, ring.mul(x, a))) for x in everything):
            members.append(a)
    return members


# ---------------------------------------------------------
# Constructors and encoding
# ---------------------------------------------------------


@pytest.mark.parametrize(
    "spec, order",
    [
        ({"residue": 4}, 4),
        ({"field": 3}, 3),
        ({"field": 2, "degree": 2}, 4),
        ({"matrix": {"field": 2}, "size": 2}, 16),
        ({"product": [{"field": 3}, {"field": 2}]}, 6),
        ({"truncated": {"field": 2}, "degree": 3}, 8),
        ({"opposite": {"matrix": {"field": 2}, "size": 2}}, 16),
    ],
)
def test_build_ring_orders(spec, order):
    ring = build_ring(spec)
    assert ring.order == order
    assert ring_order(spec) == order
    assert ring.mul(ring.one, 1 % ring.order) == 1 % ring.order


def test_field_modulus_is_checked():
    assert least_irreducible(2, 2) == [1, 1, 1]
    assert is_irreducible(3, [1, 0, 1])
    assert not is_irreducible(2, [1, 0, 1])
    with pytest.raises(MalformedSpecError):
        build_ring({"field": 2, "modulus": [1, 0, 1]})
    with pytest.raises(MalformedSpecError):
        build_ring({"field": 4})


def test_malformed_trees_are_rejected():
    with pytest.raises(MalformedSpecError):
        build_ring({"field": 2, "residue": 4})
    with pytest.raises(MalformedSpecError):
        build_ring({"product": []})
    with pytest.raises(MalformedSpecError):
        build_ring({"matrix": {"field": 2}, "size": "two"})


def test_ring_order_bound():
    with bounds_override(ring_order=8):
        with pytest.raises(OversizeRingError):
            build_ring({"matrix": {"field": 2}, "size": 2})
        assert build_ring({"field": 2, "degree": 3}).order == 8


def test_literals_round_trip():
    ring = build_ring({"product": [{"field": 3}, {"matrix": {"field": 2}, "size": 2}]})
    for code in range(ring.order):
        assert ring.parse(ring.literal(code)) == code
    assert ring.literal(ring.one) == [[1], [[[1], [0]], [[0], [1]]]]


def test_matrix_ring_multiplication():
    ring = build_ring({"matrix": {"field": 2}, "size": 2})
    e12 = ring.parse([[0, 1], [0, 0]])
    e21 = ring.parse([[0, 0], [1, 0]])
    assert ring.mul(e12, e21) == ring.parse([[1, 0], [0, 0]])
    assert ring.mul(e21, e12) == ring.parse([[0, 0], [0, 1]])
    assert ring.mul(e12, e12) == 0
    assert not ring.is_commutative()
    assert ring.units().size == 6


def test_opposite_ring_reverses_products():
    base = build_ring({"matrix": {"field": 2}, "size": 2})
    opposite = build_ring({"opposite": {"matrix": {"field": 2}, "size": 2}})
    a, b = base.parse([[0, 1], [0, 0]]), base.parse([[0, 0], [1, 0]])
    assert opposite.mul(a, b) == base.mul(b, a)


def test_galois_field_is_a_field():
    ring = build_ring({"field": 2, "degree": 3})
    assert ring.units().size == 7
    for a in range(1, ring.order):
        assert ring.mul(a, ring.inverse(a)) == ring.one
    assert ring.characteristic() == 2


# ---------------------------------------------------------
# Linear algebra helpers
# ---------------------------------------------------------


def test_rank_mod_p():
    assert rank_mod_p(np.array([[1, 2], [2, 4]]), 3) == 1
    assert rank_mod_p(np.eye(3, dtype=np.int64), 5) == 3
    assert rank_mod_p(np.array([[1, 1], [1, 1]]), 2) == 1
    assert rank_mod_p(np.zeros((2, 3), dtype=np.int64), 2) == 0


def test_prime_field_coordinates():
    ring = build_ring({"matrix": {"field": 2}, "size": 2})
    p, table = prime_field_coordinates(ring)
    assert p == 2
    assert table.shape == (16, 4)
    assert np.unique(table, axis=0).shape[0] == 16


def test_solve_left():
    ring = build_ring({"field": 3})
    left = np.array([[1, 1], [0, 1]])
    target = np.array([[1, 0], [0, 1]])
    solution = solve_left(ring, left, target)
    assert np.array_equal(mat_mul(ring, solution, left), target)


# ---------------------------------------------------------
# Anti-structures and form parameters
# ---------------------------------------------------------


@pytest.mark.parametrize("name", catalog_rings)
def test_catalog_rings_are_valid(name, load_ring_parts):
    parts = load_ring_parts(name)
    assert validate_anti_structure(parts.ring, parts.sigma, parts.u).ok
    assert validate_form_parameter(parts.ring, parts.sigma, parts.u, parts.lam).ok


@pytest.mark.parametrize("name", catalog_rings)
def test_lambda_bounds_match_definition(name, load_ring_parts):
    parts = load_ring_parts(name)
    ring, sigma, u = parts.ring, parts.sigma, parts.u
    minimum, maximum = lambda_bounds(ring, sigma, u)
    expected_min = sorted({ring.sub(a, ring.mul(int(sigma[a]), u)) for a in range(ring.order)})
    expected_max = [a for a in range(ring.order) if ring.mul(int(sigma[a]), u) == ring.neg(a)]
    assert minimum.tolist() == expected_min
    assert maximum.tolist() == expected_max


def test_lambda_bounds_of_small_rings(load_ring_parts):
    f2 = load_ring_parts("f2")
    assert lambda_bounds(f2.ring, f2.sigma, f2.u)[0].tolist() == [0]
    assert lambda_bounds(f2.ring, f2.sigma, f2.u)[1].tolist() == [0, 1]
    z4 = load_ring_parts("z4")
    assert lambda_bounds(z4.ring, z4.sigma, z4.u)[1].tolist() == [0, 2]
    exchange = load_ring_parts("f2xf2_exchange")
    both = exchange.ring.parse([1, 1])
    assert lambda_bounds(exchange.ring, exchange.sigma, exchange.u)[0].tolist() == [0, both]


def test_invalid_unit_is_reported(load_ring_parts):
    parts = load_ring_parts("bad_unit")
    report = validate_anti_structure(parts.ring, parts.sigma, parts.u)
    assert not report.ok
    assert [violation.axiom for violation in report.violations] == ["u-sigma-u"]
    assert report.to_dict()["valid"] is False


def test_identity_is_not_an_anti_automorphism_of_a_noncommutative_ring():
    ring = build_ring({"matrix": {"field": 2}, "size": 2})
    report = validate_anti_structure(ring, ring.elements(), ring.one)
    assert "anti-multiplicative" in [violation.axiom for violation in report.violations]


def test_form_parameter_violations():
    ring = build_ring({"field": 2})
    sigma = ring.elements()
    report = validate_form_parameter(ring, sigma, ring.one, [1])
    assert "subgroup" in [violation.axiom for violation in report.violations]
    with pytest.raises(InvalidUnitaryRingError):
        UnitaryRing(ring, sigma, ring.one, [1])


def test_sigma_rules():
    exchange = build_ring({"product": [{"field": 2}, {"field": 2}]})
    sigma = sigma_from_rule(exchange, "exchange")
    assert sigma[exchange.parse([1, 0])] == exchange.parse([0, 1])
    with pytest.raises(MalformedSpecError):
        sigma_from_rule(build_ring({"field": 3}), "transpose")
    f4 = build_ring({"field": 2, "degree": 2})
    frobenius = sigma_from_rule(f4, "frobenius")
    assert np.array_equal(frobenius[frobenius], f4.elements())
    assert not np.array_equal(frobenius, f4.elements())
    mapped = sigma_from_rule(build_ring({"field": 3}), {"map": [0, 1, 2]})
    assert mapped.tolist() == [0, 1, 2]


# ---------------------------------------------------------
# Radical, idempotents and lifting
# ---------------------------------------------------------


@pytest.mark.parametrize("name", catalog_rings)
def test_radical_matches_brute_force(name, load_ring_parts):
    ring = load_ring_parts(name).ring
    assert jacobson_radical(ring).tolist() == _brute_force_radical(ring)


def test_radicals_of_local_rings():
    z4 = build_ring({"residue": 4})
    assert jacobson_radical(z4).tolist() == [0, 2]
    assert radical_quotient(z4).order == 2
    dual_numbers = build_ring({"truncated": {"field": 2}, "degree": 2})
    assert jacobson_radical(dual_numbers).tolist() == [0, dual_numbers.parse([0, 1])]


def test_idempotents_and_center_of_matrix_ring():
    ring = build_ring({"matrix": {"field": 2}, "size": 2})
    assert idempotents(ring).size == 8
    assert center(ring).tolist() == [0, ring.one]


def test_ef_inverse_of_matrix_units():
    ring = build_ring({"matrix": {"field": 2}, "size": 2})
    e11 = ring.parse([[1, 0], [0, 0]])
    e22 = ring.parse([[0, 0], [0, 1]])
    e12 = ring.parse([[0, 1], [0, 0]])
    e21 = ring.parse([[0, 0], [1, 0]])
    assert ef_inverse(ring, e12, e11, e22) == e21
    assert ef_inverse(ring, 0, e11, e22) is None


@pytest.mark.parametrize("name", ["z4", "f2t2", "m2f2_transpose", "f3xm2f2"])
def test_ef_invertibility_is_decided_modulo_radical(name, load_ring_parts):
    ring = load_ring_parts(name).ring
    quotient = radical_quotient(ring)
    for e in idempotents(ring):
        for f in idempotents(ring):
            e, f = int(e), int(f)
            for a in np.unique(ring.mul(ring.mul(e, ring.elements()), f)):
                upstairs = ef_inverse(ring, int(a), e, f) is not None
                reduced = ef_inverse(quotient, quotient.reduce(int(a)), quotient.reduce(e), quotient.reduce(f)) is not None
                assert upstairs == reduced


def test_full_idempotent_witness():
    ring = build_ring({"matrix": {"field": 2}, "size": 2})
    e11 = ring.parse([[1, 0], [0, 0]])
    pairs = full_idempotent_witness(ring, e11)
    total = 0
    for x, y in pairs:
        total = ring.add(total, ring.mul(ring.mul(x, e11), y))
    assert total == ring.one
    assert len(pairs) == 2
    exchange = build_ring({"product": [{"field": 2}, {"field": 2}]})
    assert full_idempotent_witness(exchange, exchange.parse([1, 0])) is None


def test_lifting_through_the_radical():
    ring = build_ring({"product": [{"residue": 4}, {"residue": 4}]})
    quotient = radical_quotient(ring)
    assert quotient.order == 4
    halves = [int(e) for e in idempotents(quotient) if e not in (0, quotient.one)]
    lifted = lift_orthogonal_system(ring, halves)
    assert ring.add(lifted[0], lifted[1]) == ring.one
    assert ring.mul(lifted[0], lifted[1]) == 0
    for e, e_bar in zip(lifted, halves):
        assert ring.mul(e, e) == e
        assert quotient.reduce(e) == e_bar
    assert ring.mul(lift_idempotent(ring, halves[0]), lift_idempotent(ring, halves[0])) == lift_idempotent(ring, halves[0])


def test_corner_ring():
    ring = build_ring({"matrix": {"field": 2}, "size": 2})
    corner = CornerRing(ring, ring.parse([[1, 0], [0, 0]]))
    assert corner.order == 2
    assert corner.to_parent(corner.one) == ring.parse([[1, 0], [0, 0]])


# ---------------------------------------------------------
# Simple factors of A/J
# ---------------------------------------------------------


@pytest.mark.parametrize(
    "name, kinds, lengths",
    [
        ("f3", [FactorKind.SIMPLE], [1]),
        ("z4", [FactorKind.SIMPLE], [1]),
        ("f2t2", [FactorKind.SIMPLE], [1]),
        ("f2xf2_exchange", [FactorKind.EXCHANGE_PAIR], [1]),
        ("m2f2_transpose", [FactorKind.SIMPLE], [2]),
        ("f3xf3", [FactorKind.SIMPLE, FactorKind.SIMPLE], [1, 1]),
        ("f3xm2f2", [FactorKind.SIMPLE, FactorKind.SIMPLE], [2, 1]),
    ],
)
def test_simple_factors(name, kinds, lengths, load_ring):
    factors = factors_of(load_ring(name))
    assert [factor.kind for factor in factors] == kinds
    assert [factor.length for factor in factors] == lengths


@pytest.mark.parametrize("name", catalog_rings)
def test_standard_form_conjugator(name, load_ring):
    for factor in factors_of(load_ring(name)):
        ring = factor.factor_ring
        v = standard_form_conjugator(factor)
        assert v == factor.conjugator
        assert ring.is_unit(v)
        standard = factor.standard
        assert np.array_equal(standard.sigma(standard.sigma_table), ring.elements())
        assert standard.u in (ring.one, ring.neg(ring.one))


def test_exchange_factor_is_already_standard(load_ring):
    (factor,) = factors_of(load_ring("f2xf2_exchange"))
    assert factor.kind is FactorKind.EXCHANGE_PAIR
    assert standard_form_conjugator(factor) == factor.factor_ring.one
    assert factor.standard.sigma(factor.half) != factor.half
    assert factor.factor_ring.mul(factor.half, factor.standard.sigma(factor.half)) == 0


@pytest.mark.parametrize("name", catalog_rings)
def test_lifted_idempotents_are_complete_and_orthogonal(name, load_ring):
    ur = load_ring(name)
    ring = ur.ring
    lifts = [lift for factor in factors_of(ur) for lift in factor.lifts]
    total = 0
    for i, e in enumerate(lifts):
        assert ring.mul(e, e) == e
        for j, f in enumerate(lifts):
            if i != j:
                assert ring.mul(e, f) == 0
        total = ring.add(total, e)
    assert total == ring.one


def test_factors_are_cached_per_unitary_ring(load_ring):
    ur = load_ring("f3xf3")
    assert factors_of(ur) is factors_of(ur)
