from dataclasses import dataclass, field
import itertools
import logging

import numpy as np

from ..forms.module import Submodule
from ..forms.quadratic_space import QuadraticSpace, is_lambda_form, is_unimodular
from ..forms.reduction import reduce_mod_radical
from ..oracle.enumeration import enumerate_isometries
from ..reflections.quasi_reflection import (
    QuasiReflection,
    compose_orthogonal,
    enumerate_quasi_reflections,
    identity_reflection,
)
from ..ring.factors import factors_of
from ..utils.constants import CornerType, Parity, SubgroupCase
from ..utils.errors import EnumerationBoundExceededError, HypothesisViolationError, NotUnimodularError
from .classification import profiles_of
from .invariant import dickson_indices

_logger = logging.getLogger(__name__)


@dataclass
class ReflectionExistence:
    """
    Whether (P, [beta]) admits a reflection.

    Attributes:
        exists (bool): Every odd split-orthogonal factor has P_i != 0.
        blocking (list[int]): Odd split-orthogonal factors with P_i = 0.
        witness (QuasiReflection | None): A reflection of the space when one exists.
    """

    exists: bool
    blocking: list[int] = field(default_factory=list)
    witness: QuasiReflection | None = None

    def to_dict(self) -> dict:
        return {
            "exists": self.exists,
            "blocking": self.blocking,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


@dataclass
class ReflectionSubgroupReport:
    """
    The subgroup O'(P, [beta]) generated by reflections, described through Delta_I.

    claimed_index is 2^(m + max(n - 1, 0)) when every odd split-orthogonal factor is populated,
    with n and m the odd and even factors of I. When an odd factor is empty O' is trivial and the
    index is |O|, counted by enumeration and left None past the enumeration bounds.
    """

    case: SubgroupCase
    indices: tuple
    xi: tuple
    claimed_index: int | None
    measured_index: int | None = None
    relaxed: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "case": self.case.value,
            "indices": list(self.indices),
            "xi": list(self.xi),
            "claimed_index": self.claimed_index,
            "measured_index": self.measured_index,
            "relaxed": self.relaxed,
        }


def is_exceptional_f2_corner(space: QuadraticSpace) -> bool:
    """
    The hyperbolic quadratic space of dimension 4 over (F_2, id, 1, 0): four-dimensional and
    holding a totally singular plane.
    """
    ring = space.ring
    if ring.order != 2 or space.module.size != 16 or space.ur.lam.size != 1:
        return False
    elements = space.elements()
    singular = [x for x in elements[1:] if space.ur.in_lambda(space.beta(x, x))]
    for x, y in itertools.combinations(singular, 2):
        plane = Submodule.spanned_by(ring, space.rank, [x, y])
        generators = np.asarray(plane.generators(), dtype=np.int64).reshape(-1, space.rank)
        if is_lambda_form(space.ur, space.gram, generators):
            return True
    return False


def _is_corner_ring(corner: QuadraticSpace) -> bool:
    """P_(i) is isomorphic to A_(i) = F_2 x F_2, the two halves then having one element each besides 0."""
    ring = corner.ring
    if corner.module.size != ring.order:
        return False
    elements = corner.elements()
    halves = [int(e) for e in range(ring.order) if e not in (0, ring.one) and ring.mul(e, e) == e]
    return all(np.unique(ring.mul(elements, e), axis=0).shape[0] == 2 for e in halves)


def _first_reflection(space: QuadraticSpace, e: int) -> QuasiReflection | None:
    return next(enumerate_quasi_reflections(space, [e]), None)


def _factor_reflection(space: QuadraticSpace, factor) -> QuasiReflection | None:
    """
    An f_i-reflection: e_i^(j)-reflections composed over j, or s_{0, f_i, a} with a unit a of
    f_i^sigma Lambda f_i when P_i = 0.
    """
    pieces = []
    for lift in factor.lifts:
        piece = _first_reflection(space, lift)
        if piece is None:
            return identity_reflection(space, factor.f)
        pieces.append(piece)
    result = pieces[0]
    for piece in pieces[1:]:
        result = compose_orthogonal(result, piece)
    return result


def reflection_existence(space: QuadraticSpace) -> ReflectionExistence:
    """
    A reflection exists exactly when every odd split-orthogonal factor has P_i != 0. The witness is
    an orthogonal composition of one f_i-reflection per factor.
    """
    if not is_unimodular(space):
        raise NotUnimodularError()
    components = reduce_mod_radical(space).components
    profiles = profiles_of(space.ur)
    blocking = [
        profile.index
        for component, profile in zip(components, profiles)
        if profile.parity is Parity.ODD and component.is_zero
    ]
    if blocking:
        _logger.info("No reflection: odd split-orthogonal factors %s are empty", blocking)
        return ReflectionExistence(False, blocking)

    witness = None
    for factor in factors_of(space.ur):
        piece = _factor_reflection(space, factor)
        if piece is None:
            witness = None
            break
        witness = piece if witness is None else compose_orthogonal(witness, piece)
    if witness is None or witness.e != space.ring.one:
        _logger.warning("Factorwise construction failed, searching all reflections")
        witness = _first_reflection(space, space.ring.one)
    _logger.info("Reflection exists, witness y=%s", None if witness is None else witness.y.tolist())
    return ReflectionExistence(witness is not None, blocking, witness)


def _check_hypotheses(space: QuadraticSpace) -> list[int]:
    """Raise on the exceptional configurations and return the factors where (1) is only relaxed."""
    relaxed = []
    components = reduce_mod_radical(space).components
    for component, profile in zip(components, profiles_of(space.ur)):
        if profile.split_orthogonal and profile.corner_type is CornerType.F2:
            if not component.is_zero and is_exceptional_f2_corner(component.corner_space):
                raise HypothesisViolationError(profile.index, "the corner space is the hyperbolic F_2 space of dimension 4")
            _logger.warning("Factor %d: split-orthogonal with D = F_2, hypothesis relaxed", profile.index)
            relaxed.append(profile.index)
        if profile.corner_type is CornerType.F2_SQUARED and _is_corner_ring(component.corner_space):
            raise HypothesisViolationError(profile.index, "P_i is isomorphic to epsilon_i A_i over F_2 x F_2")
    return relaxed


def _trivial_subgroup_index(space: QuadraticSpace) -> int | None:
    """[O : 1] = |O|, or None when O is too large to count."""
    try:
        return enumerate_isometries(space).order
    except EnumerationBoundExceededError as error:
        _logger.warning("O' is trivial but |O| is not counted: %s", error)
        return None


def reflection_subgroup(space: QuadraticSpace) -> ReflectionSubgroupReport:
    """O'(P, [beta]) = Delta_I^-1({0, xi}), or the trivial group when an odd factor is empty."""
    if not is_unimodular(space):
        raise NotUnimodularError()
    relaxed = _check_hypotheses(space)
    profiles = profiles_of(space.ur)
    indices = dickson_indices(space)
    xi = tuple(profiles[i].degree % 2 for i in indices)

    existence = reflection_existence(space)
    if not existence.exists:
        case = SubgroupCase.NO_REFLECTION if space.module.is_zero() else SubgroupCase.EMPTY_ODD_FACTOR
        claimed = 1 if case is SubgroupCase.NO_REFLECTION else _trivial_subgroup_index(space)
        report = ReflectionSubgroupReport(case, indices, xi, claimed, relaxed=relaxed)
    else:
        odd = sum(xi)
        even = len(indices) - odd
        claimed = 2 ** (even + max(odd - 1, 0))
        report = ReflectionSubgroupReport(SubgroupCase.POPULATED, indices, xi, claimed, relaxed=relaxed)
    _logger.info("Reflection subgroup: %s, claimed index %s", report.case.value, report.claimed_index)
    return report
