import logging

import numpy as np

from ..forms.module import PresentedModule
from ..forms.quadratic_space import Isometry, QuadraticSpace, check_isometry, invert_on_module, is_unimodular, orthogonal_sum
from ..ring.linalg import mat_mul
from ..utils.errors import NotUnimodularBaseError, PreconditionViolationError, RingMismatchError, SearchExhaustedError
from .augmentation import block_diagonal
from .extension import extend
from .problem import ExtensionProblem

_logger = logging.getLogger(__name__)


def cancel(base: QuadraticSpace, s1: QuadraticSpace, s2: QuadraticSpace, iso) -> Isometry:
    """
    An isometry s1 -> s2 from an isometry base + s1 -> base + s2, for a unimodular base.

    Inside Z = base + s1 the copy base + 0 is sent onto iso^-1(base + 0) and this identification is
    extended to phi in O(Z). Then iso phi fixes base + 0 pointwise, so it carries its orthogonal
    complement 0 + s1 onto 0 + s2.
    """
    if not (base.ur is s1.ur is s2.ur):
        raise RingMismatchError()
    if not is_unimodular(base):
        raise NotUnimodularBaseError()
    ring = base.ring
    first = orthogonal_sum(base, s1)
    second = orthogonal_sum(base, s2)
    matrix = iso.matrix if isinstance(iso, Isometry) else np.asarray(iso, dtype=np.int64)
    if not check_isometry(matrix, first, second):
        raise PreconditionViolationError("iso is not an isometry between the two orthogonal sums")

    kb = base.rank
    base_in_first = PresentedModule(ring, block_diagonal(base.module.presentation, np.zeros((s1.rank, s1.rank), dtype=np.int64)))
    base_in_second = block_diagonal(base.module.presentation, np.zeros((s2.rank, s2.rank), dtype=np.int64))
    back = invert_on_module(ring, matrix, first.module, second.module)
    # base coordinates of the second sum read as base coordinates of the first one
    embedding = np.zeros((second.rank, first.rank), dtype=np.int64)
    embedding[:kb, :kb] = base.module.presentation
    copy = PresentedModule(ring, mat_mul(ring, mat_mul(ring, back, base_in_second), matrix))
    psi = mat_mul(ring, back, embedding)

    problem = ExtensionProblem(first, base_in_first, copy, first.module, psi)
    phi = extend(problem, unimodular=True).phi
    combined = mat_mul(ring, matrix, phi)
    result = Isometry(s1, s2, mat_mul(ring, combined[kb:, kb:], s1.module.presentation))
    if not result.verify():
        raise SearchExhaustedError("an isometry between the cancelled summands")
    _logger.info("Cancelled a unimodular base of rank %d", kb)
    return result
