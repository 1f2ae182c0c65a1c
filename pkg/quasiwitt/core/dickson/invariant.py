import logging
import math

import numpy as np

from ..forms.quadratic_space import QuadraticSpace, check_isometry, is_unimodular
from ..forms.reduction import FactorComponent, reduce_mod_radical
from ..ring.linalg import mat_mul, mat_sub, prime_field_coordinates, rank_mod_p
from ..utils.errors import DomainViolationError, NotSplitOrthogonalError, NotUnimodularError
from .classification import FactorProfile, profiles_of

_logger = logging.getLogger(__name__)


def corner_space(space: QuadraticSpace, index: int) -> QuadraticSpace:
    """(P_(i), [beta_(i)]) over A_(i)."""
    return reduce_mod_radical(space).components[index].corner_space


def _prime_basis(ring) -> tuple[int, np.ndarray, list[int]]:
    """(p, coordinate table, codes of the unit coordinate vectors)."""
    p, table = prime_field_coordinates(ring)
    basis = [int(np.flatnonzero(np.all(table == row, axis=1))[0]) for row in np.eye(table.shape[1], dtype=np.int64)]
    return p, table, basis


def _endomorphism_images(ring, presentation: np.ndarray, basis: list[int]) -> list[np.ndarray]:
    """E M E for M running through an F_p-basis of the k x k matrices."""
    k = presentation.shape[0]
    images = []
    for row in range(k):
        for col in range(k):
            for t in basis:
                matrix = np.zeros((k, k), dtype=np.int64)
                matrix[row, col] = t
                images.append(mat_mul(ring, mat_mul(ring, presentation, matrix), presentation))
    return images


def _prime_dimension(table: np.ndarray, p: int, matrices: list[np.ndarray]) -> int:
    if not matrices:
        return 0
    rows = np.stack([table[matrix].reshape(-1) for matrix in matrices])
    return rank_mod_p(rows, p)


def factor_dickson_invariant(component: FactorComponent, profile: FactorProfile, psi_i) -> int:
    """
    Delta(psi_i) = dim_K (1 - psi_i) E / deg E mod 2 with E = End(P_i).

    E is spanned over F_p by E_i M E_i, so both dimensions are prime-field ranks divided by
    dim_{F_p} K.
    """
    if not profile.orthogonal:
        raise NotSplitOrthogonalError(profile.index)
    if not profile.split_orthogonal:
        return 0
    space = component.space
    if not is_unimodular(space):
        raise NotUnimodularError()
    ring = space.ring
    psi_i = mat_mul(ring, np.asarray(psi_i, dtype=np.int64), space.module.presentation)
    if not check_isometry(psi_i, space, space):
        raise DomainViolationError(f"psi does not induce an isometry of P_{profile.index}")
    if space.module.is_zero():
        return 0

    p, table, basis = _prime_basis(ring)
    center_dimension = round(math.log(profile.center_order, p))
    images = _endomorphism_images(ring, space.module.presentation, basis)
    difference = mat_sub(ring, space.module.presentation, psi_i)
    ideal = [mat_mul(ring, difference, image) for image in images]

    algebra_dimension = _prime_dimension(table, p, images) // center_dimension
    degree = math.isqrt(algebra_dimension)
    assert degree * degree == algebra_dimension, f"dim_K End(P_{profile.index}) = {algebra_dimension} is not a square"
    ideal_dimension = _prime_dimension(table, p, ideal) // center_dimension
    assert ideal_dimension % degree == 0, f"deg E = {degree} does not divide {ideal_dimension}"
    _logger.debug("Factor %d: deg E=%d, dim_K (1-psi)E=%d", profile.index, degree, ideal_dimension)
    return (ideal_dimension // degree) % 2


def dickson_invariant(space: QuadraticSpace, index: int, psi) -> int:
    """Delta_i(psi) for psi in O(P, [beta]), read on the induced isometry psi_i of P_i."""
    component = reduce_mod_radical(space).components[index]
    profile = profiles_of(space.ur)[index]
    return factor_dickson_invariant(component, profile, component.project(psi))


def dickson_indices(space: QuadraticSpace) -> tuple[int, ...]:
    """I: the factors with P_i != 0 that are split-orthogonal."""
    components = reduce_mod_radical(space).components
    return tuple(
        profile.index
        for component, profile in zip(components, profiles_of(space.ur))
        if profile.split_orthogonal and not component.is_zero
    )


def delta_I(space: QuadraticSpace, psi) -> tuple[int, ...]:
    """(Delta_i(psi)) for i in I, in the order of dickson_indices."""
    if not is_unimodular(space):
        raise NotUnimodularError()
    psi = np.asarray(psi, dtype=np.int64)
    if not check_isometry(mat_mul(space.ring, psi, space.module.presentation), space, space):
        raise DomainViolationError("psi is not an isometry of the space")
    components = reduce_mod_radical(space).components
    profiles = profiles_of(space.ur)
    return tuple(
        factor_dickson_invariant(components[i], profiles[i], components[i].project(psi)) for i in dickson_indices(space)
    )
