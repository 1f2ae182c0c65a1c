from collections import Counter
from dataclasses import dataclass, field, replace
import itertools
import logging
import math

import numpy as np

from ..dickson.classification import exact_log, profiles_of
from ..dickson.invariant import delta_I, dickson_indices
from ..dickson.subgroup import ReflectionSubgroupReport, reflection_subgroup
from ..forms.quadratic_space import QuadraticSpace, is_unimodular, orthogonal_sum, restrict
from ..reflections.quasi_reflection import enumerate_quasi_reflections
from ..ring.factors import factors_of
from ..ring.finite_ring import CornerRing
from ..ring.linalg import mat_mul
from ..utils.constants import SubgroupCase
from ..utils.errors import MathematicalFailure, NotUnimodularError
from ..witt.cancellation import cancel
from ..witt.extension import extend
from ..witt.problem import ExtensionProblem
from .enumeration import (
    closure,
    enumerate_isometries,
    enumerate_isometries_between,
    enumerate_summands,
    generating_set,
    matrix_key,
)

_logger = logging.getLogger(__name__)


def _literals(ring, matrix) -> list:
    return [[ring.literal(int(a)) for a in row] for row in np.asarray(matrix)]


@dataclass
class VerificationReport:
    """
    Outcome of an exhaustive check.

    Attributes:
        what (str): Which statement was checked.
        checked (int): Number of instances tried.
        passed (int): Number of instances that behaved as claimed.
        details (dict): Counts and values specific to the statement.
        counterexamples (list): One record per failing instance.
    """

    what: str
    checked: int = 0
    passed: int = 0
    details: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples and self.passed == self.checked

    def to_dict(self) -> dict:
        return {
            "what": self.what,
            "checked": self.checked,
            "passed": self.passed,
            "ok": self.ok,
            "details": self.details,
            "counterexamples": self.counterexamples,
        }


def verify_extension(space: QuadraticSpace) -> VerificationReport:
    """
    Every isometry between restrictions of beta to two summands extends to the whole space, with V = P.
    """
    if not is_unimodular(space):
        raise NotUnimodularError()
    ring = space.ring
    report = VerificationReport("extension")
    routes = Counter()
    summands = enumerate_summands(space.module)
    for q, s in itertools.product(summands, repeat=2):
        if q.size != s.size:
            continue
        restricted_q, restricted_s = restrict(space, q), restrict(space, s)
        for psi in enumerate_isometries_between(restricted_q, restricted_s):
            report.checked += 1
            try:
                problem = ExtensionProblem(space, q, s, space.module, psi)
                result = extend(problem, unimodular=True)
                if not result.verify(problem):
                    raise AssertionError("the extension does not restrict to psi")
            except (MathematicalFailure, AssertionError) as error:
                report.counterexamples.append(
                    {"q": _literals(ring, q.presentation), "s": _literals(ring, s.presentation), "psi": _literals(ring, psi), "error": str(error)}
                )
                continue
            routes[result.route.value] += 1
            report.passed += 1
    report.details = {"summands": len(summands), "routes": dict(sorted(routes.items()))}
    _logger.info("Extension verified on %d of %d instances", report.passed, report.checked)
    return report


def verify_cancellation(base: QuadraticSpace, s1: QuadraticSpace, s2: QuadraticSpace) -> VerificationReport:
    """cancel on every isometry base + s1 -> base + s2."""
    ring = base.ring
    report = VerificationReport("cancellation")
    for iso in enumerate_isometries_between(orthogonal_sum(base, s1), orthogonal_sum(base, s2)):
        report.checked += 1
        try:
            result = cancel(base, s1, s2, iso)
        except MathematicalFailure as error:
            report.counterexamples.append({"iso": _literals(ring, iso), "error": str(error)})
            continue
        if result.verify():
            report.passed += 1
        else:
            report.counterexamples.append({"iso": _literals(ring, iso), "error": "the result is not an isometry"})
    _logger.info("Cancellation verified on %d of %d isometries", report.passed, report.checked)
    return report


def reflection_group(space: QuadraticSpace):
    """The subgroup generated by all reflections (e = 1)."""
    reflections = list(enumerate_quasi_reflections(space, [space.ring.one]))
    return closure(space, reflections, tags=[f"{len(reflections)} reflections"])


def measure_index(space: QuadraticSpace, report: ReflectionSubgroupReport | None = None) -> ReflectionSubgroupReport:
    """The subgroup report with [O : O'] counted by enumeration attached."""
    report = reflection_subgroup(space) if report is None else report
    whole = enumerate_isometries(space)
    generated = reflection_group(space)
    return replace(report, measured_index=whole.order // generated.order)


def verify_index(space: QuadraticSpace) -> VerificationReport:
    """
    [O : O'] against the predicted index, and O' = Delta_I^-1({0, xi}) as sets (O' = 1 when an odd
    factor is empty).
    """
    report = VerificationReport("index")
    claim = reflection_subgroup(space)
    whole = enumerate_isometries(space)
    generated = reflection_group(space)
    measured = whole.order // generated.order
    report.details = {
        "order": whole.order,
        "generated_order": generated.order,
        "claimed_index": claim.claimed_index,
        "measured_index": measured,
        "case": claim.case.value,
        "xi": list(claim.xi),
    }

    report.checked += 1
    if whole.order % generated.order == 0 and claim.claimed_index == measured:
        report.passed += 1
    else:
        report.counterexamples.append({"claimed_index": claim.claimed_index, "measured_index": measured})

    report.checked += 1
    if claim.case is SubgroupCase.POPULATED:
        allowed = {tuple(0 for _ in claim.xi), tuple(claim.xi)}
        predicted = [psi for psi in whole if delta_I(space, psi) in allowed]
    else:
        predicted = [space.module.presentation]
    if {matrix_key(m) for m in predicted} == generated.keys():
        report.passed += 1
    else:
        report.counterexamples.append({"set_identity": False, "predicted": len(predicted), "generated": generated.order})
    _logger.info("Index: claimed %s, measured %d", claim.claimed_index, measured)
    return report


def reflection_parities(space: QuadraticSpace, e: int, indices) -> tuple[int, ...]:
    """deg(pi_i(e) A_i pi_i(e)) mod 2 over the centers K_i, for i in indices."""
    factors = factors_of(space.ur)
    profiles = profiles_of(space.ur)
    parities = []
    for i in indices:
        projected = int(factors[i].project(e))
        if projected == 0:
            parities.append(0)
            continue
        corner = CornerRing(factors[i].factor_ring, projected)
        parities.append(math.isqrt(exact_log(corner.order, profiles[i].center_order)) % 2)
    return tuple(parities)


def verify_dickson(space: QuadraticSpace) -> VerificationReport:
    """
    Delta_I is a surjective homomorphism, and Delta_I(s) = (deg pi_i(e) A_i pi_i(e) mod 2) for every
    constructible e-reflection s.

    The homomorphism law is checked on a generating set against every element, which is enough.
    """
    if not is_unimodular(space):
        raise NotUnimodularError()
    ring = space.ring
    report = VerificationReport("dickson")
    indices = dickson_indices(space)
    whole = enumerate_isometries(space)
    values = {matrix_key(psi): delta_I(space, psi) for psi in whole}

    homomorphism = True
    for generator in generating_set(whole):
        left = values[matrix_key(generator)]
        for psi in whole:
            right = values[matrix_key(psi)]
            expected = tuple((a + b) % 2 for a, b in zip(left, right))
            if values[matrix_key(mat_mul(ring, generator, psi))] != expected:
                homomorphism = False
                report.counterexamples.append({"homomorphism": False, "generator": _literals(ring, generator), "psi": _literals(ring, psi)})
                break
        if not homomorphism:
            break
    report.checked += 1
    report.passed += int(homomorphism)

    reached = set(values.values())
    surjective = reached == set(itertools.product((0, 1), repeat=len(indices)))
    report.checked += 1
    report.passed += int(surjective)
    if not surjective:
        report.counterexamples.append({"surjective": False, "reached": [list(v) for v in sorted(reached)]})

    reflections = 0
    mismatches = 0
    for reflection in enumerate_quasi_reflections(space):
        reflections += 1
        expected = reflection_parities(space, reflection.e, indices)
        if delta_I(space, reflection.as_matrix()) != expected:
            mismatches += 1
            report.counterexamples.append({"reflection": reflection.to_dict(), "expected": list(expected)})
    report.checked += reflections
    report.passed += reflections - mismatches
    report.details = {
        "indices": list(indices),
        "order": whole.order,
        "homomorphism": homomorphism,
        "surjective": surjective,
        "reflections": reflections,
        "reflection_mismatches": mismatches,
    }
    _logger.info("Dickson checks on %d reflections, %d mismatches", reflections, mismatches)
    return report
