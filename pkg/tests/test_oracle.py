"""
Exhaustive oracles: isometry enumeration, group closure, the verifiers, the F_2 sweep and the
document reader they are fed through.
"""

import json

import numpy as np
import pytest

from quasiwitt.core.forms.module import PresentedModule
from quasiwitt.core.forms.quadratic_space import QuadraticSpace, check_isometry, orthogonal_sum
from quasiwitt.core.oracle.enumeration import (
    closure,
    enumerate_isometries,
    enumerate_isometries_between,
    enumerate_summands,
    find_isometry,
    generating_set,
    module_endomorphisms,
)
from quasiwitt.core.oracle.sweep import f2_exception_sweep, upper_triangular_grams
from quasiwitt.core.oracle.verification import (
    measure_index,
    reflection_group,
    verify_cancellation,
    verify_dickson,
    verify_extension,
    verify_index,
)
from quasiwitt.core.reflections.quasi_reflection import enumerate_quasi_reflections
from quasiwitt.core.utils.errors import MalformedSpecError, NotUnimodularError
from quasiwitt.core.utils.serialization import DocumentReader, dumps, load_json, space_to_dict


group_orders = [
    ("diag11_f3", 8, 8),
    ("hyperbolic_f3", 4, 4),
    ("hyperbolic_f2", 2, 2),
    ("f3xf3_rank1", 4, 2),
    ("m2f2_rank1", 2, 1),
]


# ---------------------------------------------------------
# Enumeration
# ---------------------------------------------------------


@pytest.mark.parametrize("name, order, generated", group_orders)
def test_group_orders(name, order, generated, load_space):
    space = load_space(name)
    whole = enumerate_isometries(space)
    assert whole.order == order
    assert reflection_group(space).order == generated
    assert reflection_group(space).issubset(whole)
    assert all(check_isometry(psi, space, space) for psi in whole)


def test_group_table(load_space):
    space = load_space("diag11_f3")
    whole = enumerate_isometries(space)
    assert whole.is_closed()
    assert space.module.presentation in whole
    table = whole.multiplication_table()
    assert table.shape == (8, 8)
    assert table[whole.identity_index].tolist() == list(range(8))
    assert sorted(table[3].tolist()) == list(range(8))
    assert whole.to_dict() == {"order": 8, "provenance": ["enumeration"]}


def test_closure_and_generating_set(load_space, load_isometry):
    space = load_space("hyperbolic_f3")
    swap = load_isometry("swap", space)
    generated = closure(space, [swap], tags=["swap"])
    assert generated.order == 2
    assert generated.provenance == ("swap",)
    assert closure(space, []).order == 1

    whole = enumerate_isometries(space)
    generators = generating_set(whole)
    assert closure(space, generators).keys() == whole.keys()


@pytest.mark.parametrize("name", ["diag11_f3", "hyperbolic_f3", "hyperbolic_f2", "f3xf3_rank1"])
def test_quasi_reflections_generate_the_orthogonal_group(name, load_space):
    space = load_space(name)
    generated = closure(space, list(enumerate_quasi_reflections(space)))
    assert generated.keys() == enumerate_isometries(space).keys()


def test_isometries_between_different_spaces(load_space):
    twos = orthogonal_sum(load_space("diag2_f3"), load_space("diag2_f3"))
    ones = load_space("diag11_f3")
    found = enumerate_isometries_between(twos, ones, workers=2)
    assert len(found) == 8
    assert any(np.array_equal(find_isometry(twos, ones), psi) for psi in found)
    assert find_isometry(load_space("hyperbolic_f3"), load_space("diag11_f3")) is None
    assert find_isometry(load_space("hyperbolic_f3"), orthogonal_sum(load_space("diag1_f3"), load_space("diag2_f3"))) is not None
    assert find_isometry(load_space("diag1_f3"), ones) is None


def test_module_endomorphisms(load_ring):
    ring = load_ring("f3").ring
    assert module_endomorphisms(PresentedModule.free(ring, 2)).shape == (81, 2, 2)
    line = PresentedModule(ring, [[1, 0], [0, 0]])
    assert module_endomorphisms(line).shape == (3, 2, 2)


@pytest.mark.parametrize("field, count", [("f2", 5), ("f3", 6)])
def test_summands_of_a_plane(field, count, load_ring):
    ring = load_ring(field).ring
    summands = enumerate_summands(PresentedModule.free(ring, 2))
    assert len(summands) == count
    assert [summand.size for summand in summands][0] == 1
    assert summands[-1].size == ring.order**2


# ---------------------------------------------------------
# Verifiers
# ---------------------------------------------------------


@pytest.mark.parametrize(
    "name", ["diag11_f3", "hyperbolic_f3", "hyperbolic_f2", "hyperbolic_f4", "hyperbolic_f2xf2", "f3xf3_rank1", "m2f2_rank1"]
)
def test_verify_extension(name, load_space):
    report = verify_extension(load_space(name))
    assert report.ok, report.counterexamples
    assert report.checked > 0
    assert report.to_dict()["ok"]


def test_verify_extension_needs_unimodularity(load_space):
    with pytest.raises(NotUnimodularError):
        verify_extension(load_space("zero_f3"))


def test_verify_cancellation(load_space):
    base = load_space("diag1_f3")
    twos = orthogonal_sum(load_space("diag2_f3"), load_space("diag2_f3"))
    report = verify_cancellation(base, twos, load_space("diag11_f3"))
    assert report.ok, report.counterexamples
    assert report.checked > 0

    assert verify_cancellation(base, base, load_space("diag2_f3")).checked == 0


@pytest.mark.parametrize("name", ["hyperbolic_f2", "hyperbolic_f2xf2"])
def test_verify_cancellation_of_a_hyperbolic_base_in_characteristic_2(name, load_space):
    base = load_space(name)
    zero = QuadraticSpace.free(base.ur, [[0]])
    report = verify_cancellation(base, zero, zero)
    assert report.ok, report.counterexamples
    assert report.checked > 0


@pytest.mark.parametrize("name", ["diag11_f3", "hyperbolic_f3", "f3xf3_rank1", "m2f2_rank1"])
def test_verify_index(name, load_space):
    report = verify_index(load_space(name))
    assert report.ok, report.counterexamples
    assert report.details["claimed_index"] == report.details["measured_index"]


def test_measure_index(load_space):
    report = measure_index(load_space("f3xf3_rank1"))
    assert report.claimed_index == 2
    assert report.measured_index == 2
    assert report.to_dict()["measured_index"] == 2


@pytest.mark.parametrize("name", ["diag11_f3", "hyperbolic_f3", "f3xf3_rank1", "m2f2_rank1"])
def test_verify_dickson(name, load_space):
    report = verify_dickson(load_space(name))
    assert report.ok, report.counterexamples


# ---------------------------------------------------------
# F_2 sweep
# ---------------------------------------------------------


def test_upper_triangular_grams():
    grams = list(upper_triangular_grams(2))
    assert len(grams) == 8
    assert all(gram[1, 0] == 0 for gram in grams)


@pytest.mark.slow
def test_f2_sweep_of_rank_four():
    report = f2_exception_sweep(4)
    assert report.spaces == 448
    assert len(report.classes) == 2
    summary = report.summary()
    assert sorted(summary["members"].tolist()) == [168, 280]
    assert sorted(summary["order"].tolist()) == [72, 120]

    (proper,) = report.proper
    assert proper["order"] == 72
    assert proper["generated_order"] == 36
    assert proper["exceptional"]
    assert proper["hypothesis_violation"]
    assert report.to_dict()["proper"] == 1


# ---------------------------------------------------------
# Documents
# ---------------------------------------------------------


def test_rings_are_shared_between_documents(catalog):
    reader = DocumentReader()
    first = reader.space(catalog("spaces", "diag11_f3.json"))
    second = reader.space(catalog("spaces", "hyperbolic_f3.json"))
    assert first.ur is second.ur
    inline = {"ring": {"field": 3}}
    assert reader.unitary_ring(inline) is reader.unitary_ring(dict(inline))


def test_space_documents(load_space, catalog):
    space = load_space("diag11_f3")
    document = space_to_dict(space)
    assert document["gram"] == [[[1], [0]], [[0], [1]]]
    document["ring_ref"] = catalog("rings", "f3.json")
    assert np.array_equal(DocumentReader().space_from_document(document).gram, space.gram)


def test_reflection_documents(reader, load_space):
    space = load_space("diag11_f3")
    reflection = reader.reflection({"y": [1, 0], "e": 1}, space)
    assert reflection.as_matrix().tolist() == [[2, 0], [0, 1]]


def test_malformed_documents(tmp_path, reader, catalog):
    with pytest.raises(MalformedSpecError):
        reader.space(catalog("spaces", "missing_gram.json"))
    with pytest.raises(MalformedSpecError):
        load_json(str(tmp_path / "absent.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(MalformedSpecError):
        load_json(str(broken))
    listed = tmp_path / "listed.json"
    listed.write_text("[]", encoding="utf-8")
    with pytest.raises(MalformedSpecError):
        load_json(str(listed))
    with pytest.raises(MalformedSpecError):
        reader.space_from_document({"ring_ref": catalog("rings", "f3.json"), "rank": -1, "gram": []})


def test_dumps_is_stable():
    text = dumps({"b": 1, "a": [1, 2]})
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1, 2], "b": 1}
