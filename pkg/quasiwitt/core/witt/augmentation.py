import logging

import numpy as np

from ..dickson.classification import corner_type_of
from ..forms.module import PresentedModule, Submodule
from ..forms.quadratic_space import QuadraticSpace, dual_presentation, hyperbolic, orthogonal_sum
from ..forms.reduction import reduce_mod_radical
from ..utils.constants import CornerType
from ..utils.errors import SearchExhaustedError
from .conditions import check_conditions, dual_image_is_free
from .problem import ExtensionProblem

_logger = logging.getLogger(__name__)


def block_diagonal(*blocks) -> np.ndarray:
    blocks = [np.asarray(block, dtype=np.int64) for block in blocks]
    size = sum(block.shape[0] for block in blocks)
    result = np.zeros((size, size), dtype=np.int64)
    offset = 0
    for block in blocks:
        k = block.shape[0]
        result[offset : offset + k, offset : offset + k] = block
        offset += k
    return result


def augment_hyperbolic(problem: ExtensionProblem) -> ExtensionProblem:
    """
    Adjoin the hyperbolic space of U = Q*, so that Q + U and S + U become isomorphic to their duals.

    Coordinates are P, then U*, then U. Q' = Q + 0 + U, S' = S + 0 + U, V' = V + U* + 0 and psi' is
    psi on Q and the identity on U.
    """
    space = problem.space
    ring = space.ring
    k = space.rank
    plane = hyperbolic(space.ur, dual_presentation(space.ur, problem.q))
    dual_part = plane.module.presentation[:k, :k]
    u_part = plane.module.presentation[k:, k:]
    zero = np.zeros((k, k), dtype=np.int64)
    augmented = ExtensionProblem(
        orthogonal_sum(space, plane),
        PresentedModule(ring, block_diagonal(problem.q.presentation, zero, u_part)),
        PresentedModule(ring, block_diagonal(problem.s.presentation, zero, u_part)),
        PresentedModule(ring, block_diagonal(problem.v.presentation, dual_part, zero)),
        block_diagonal(problem.psi, zero, u_part),
    )
    _logger.debug("Hyperbolic augmentation to rank %d", augmented.space.rank)
    return augmented


def _rank_two(problem: ExtensionProblem, a: int) -> ExtensionProblem:
    space = problem.space
    ring = space.ring
    one = ring.one
    plane = QuadraticSpace.free(space.ur, [[0, one], [0, int(a)]])
    head = [[one, 0], [0, 0]]
    diagonal = [[one, 0], [one, 0]]
    return ExtensionProblem(
        orthogonal_sum(space, plane),
        PresentedModule(ring, block_diagonal(problem.q.presentation, head)),
        PresentedModule(ring, block_diagonal(problem.s.presentation, head)),
        PresentedModule(ring, block_diagonal(problem.v.presentation, diagonal)),
        block_diagonal(problem.psi, head),
    )


def augmentation_constant(problem: ExtensionProblem) -> int:
    """
    The value a = gamma(w, w) of the adjoined plane.

    pi_i(a) is the least element of A_(i) other than 0 and epsilon_i on every F_2 x F_2 factor
    where L_{V_(i)}(V_(i)) is free of rank one, and 0 elsewhere. Factor values are read in the
    standard structure and carried back through the conjugating unit.
    """
    space = problem.space
    ring = space.ring
    v_elements = problem.v.elements()
    a = 0
    for component in reduce_mod_radical(space).components:
        factor = component.factor
        if corner_type_of(factor) is not CornerType.F2_SQUARED:
            continue
        corner_space = component.corner_space
        v_corner = Submodule(corner_space.ring, corner_space.rank, np.unique(component.to_corner(v_elements), axis=0))
        if not dual_image_is_free(corner_space, v_corner):
            continue
        corner_ring = corner_space.ring
        a_corner = min(c for c in range(corner_ring.order) if c not in (0, corner_ring.one))
        factor_ring = factor.factor_ring
        in_factor = factor.corner.ring.to_parent(a_corner)
        original = factor_ring.mul(factor_ring.inverse(factor.conjugator), in_factor)
        a = ring.add(a, factor.embed(original))
        _logger.debug("Factor %d contributes %s to the augmentation constant", factor.index, factor_ring.literal(original))
    return int(a)


def augment_rank_two(problem: ExtensionProblem, a: int | None = None) -> ExtensionProblem:
    """
    Adjoin a free plane with basis z, w and gamma(z, z) = 0, gamma(z, w) = 1, gamma(w, z) = 0,
    gamma(w, w) = a. Q' = Q + zA, S' = S + zA, V' = V + (z + w)A and psi' fixes z.

    Without an explicit a the designated constant is used; should the enlarged problem still fail a
    condition, every element of A is tried in canonical order.
    """
    if a is not None:
        return _rank_two(problem, a)
    designated = augmentation_constant(problem)
    augmented = _rank_two(problem, designated)
    if check_conditions(augmented).all_pass:
        _logger.debug("Rank-two augmentation with a=%s", problem.space.ring.literal(designated))
        return augmented
    _logger.warning("Designated constant %d leaves a condition failing, searching all of A", designated)
    for candidate in problem.space.ring.elements():
        if int(candidate) == designated:
            continue
        augmented = _rank_two(problem, int(candidate))
        if check_conditions(augmented).all_pass:
            return augmented
    raise SearchExhaustedError("an augmentation constant satisfying the extension conditions")
