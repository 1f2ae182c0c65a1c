import logging

import numpy as np

from ..forms.quadratic_space import QuadraticSpace
from ..reflections.quasi_reflection import QuasiReflection, make_reflection
from ..ring.unitary_ring import UnitaryRing, conjugated_unitary_ring
from ..utils.errors import NotAUnitError

_logger = logging.getLogger(__name__)


class ConjugationMap:
    """
    Conjugation of (sigma, u, Lambda) by a unit v, carrying (P, [beta]) to (P, [v beta]).

    Matrices of module maps are left untouched: isometries of both spaces coincide.
    """

    def __init__(self, ur: UnitaryRing, v: int, target: UnitaryRing | None = None):
        ring = ur.ring
        v = int(v)
        if not ring.is_unit(v):
            raise NotAUnitError(v)
        self.source = ur
        self.v = v
        if target is None:
            target = ur if v == ring.one else conjugated_unitary_ring(ur, v)
        self.target = target
        _logger.debug("Conjugation by %s", ring.literal(v))

    def map_element(self, a):
        return self.source.ring.mul(self.v, a)

    def map_space(self, space: QuadraticSpace) -> QuadraticSpace:
        return QuadraticSpace(self.target, space.module, self.map_element(space.gram))

    def map_isometry(self, matrix: np.ndarray) -> np.ndarray:
        return np.asarray(matrix, dtype=np.int64).copy()

    def map_reflection(self, reflection: QuasiReflection, space: QuadraticSpace | None = None) -> QuasiReflection:
        """s_{y,e,c} over [beta] is s_{y,e,vc} over [v beta]."""
        space = self.map_space(reflection.space) if space is None else space
        return make_reflection(space, reflection.y, reflection.e, self.map_element(reflection.c))

    def inverse(self) -> "ConjugationMap":
        return ConjugationMap(self.target, self.source.ring.inverse(self.v), target=self.source)


def conjugate(ur: UnitaryRing, v: int) -> ConjugationMap:
    return ConjugationMap(ur, v)
