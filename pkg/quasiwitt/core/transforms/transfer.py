import logging

import numpy as np

from ..forms.module import PresentedModule
from ..forms.quadratic_space import QuadraticSpace
from ..reflections.quasi_reflection import QuasiReflection, make_reflection
from ..ring.finite_ring import CornerRing
from ..ring.radical import full_idempotent_witness
from ..ring.unitary_ring import UnitaryRing, corner_unitary_ring
from ..utils.errors import NotFullIdempotentError, NotSymmetricIdempotentError

_logger = logging.getLogger(__name__)


class TransferMap:
    """
    e-transfer from (A, P) to (eAe, Pe).

    Pe is presented over eAe through pairs (x_l, y_l) with sum x_l e y_l = 1: a vector v of Pe
    becomes w_(i,l) = e y_l v_i, and v_i = sum_l x_l w_(i,l) brings it back. Coordinates are
    ordered with i major and l minor.
    """

    def __init__(self, ur: UnitaryRing, e: int, target: UnitaryRing | None = None):
        ring = ur.ring
        e = int(e)
        if ring.mul(e, e) != e or ur.sigma(e) != e:
            raise NotSymmetricIdempotentError(e)
        witness = full_idempotent_witness(ring, e)
        if witness is None:
            raise NotFullIdempotentError(e)
        self.source = ur
        self.e = e
        self.pairs = tuple(witness)
        if target is None:
            target = corner_unitary_ring(ur, CornerRing(ring, e))
        self.target = target
        self.corner: CornerRing = target.ring
        _logger.debug("Transfer to %s with %d pairs", self.corner.describe(), len(self.pairs))

    @property
    def multiplicity(self) -> int:
        return len(self.pairs)

    def _sandwich(self, matrix: np.ndarray, left_factors, right_factors) -> np.ndarray:
        """Block matrix with entries e l_a M_ij r_b e, in corner codes."""
        ring = self.source.ring
        matrix = np.asarray(matrix, dtype=np.int64)
        rows, cols = matrix.shape
        m = self.multiplicity
        result = np.zeros((rows * m, cols * m), dtype=np.int64)
        for a, left in enumerate(left_factors):
            for b, right in enumerate(right_factors):
                block = ring.mul(ring.mul(ring.mul(self.e, left), matrix), ring.mul(right, self.e))
                result[a::m, b::m] = self.corner.from_parent(block)
        return result

    def map_matrix(self, matrix: np.ndarray) -> np.ndarray:
        """The matrix of a module map U, transferred: e y_l U_ij x_l' e."""
        return self._sandwich(matrix, [y for _, y in self.pairs], [x for x, _ in self.pairs])

    def map_module(self, module: PresentedModule) -> PresentedModule:
        return PresentedModule(self.corner, self.map_matrix(module.presentation))

    def map_gram(self, gram: np.ndarray) -> np.ndarray:
        """e x_l^sigma B_ij x_l' e."""
        sigma = self.source.sigma
        return self._sandwich(gram, [sigma(x) for x, _ in self.pairs], [x for x, _ in self.pairs])

    def map_space(self, space: QuadraticSpace) -> QuadraticSpace:
        return QuadraticSpace(self.target, self.map_module(space.module), self.map_gram(space.gram))

    def map_vectors(self, vectors) -> np.ndarray:
        """Vectors of Pe (parent codes, shape (N, k)) to coordinates over eAe (shape (N, k m))."""
        ring = self.source.ring
        vectors = np.asarray(vectors, dtype=np.int64)
        m = self.multiplicity
        result = np.zeros((vectors.shape[0], vectors.shape[1] * m), dtype=np.int64)
        for l, (_, y) in enumerate(self.pairs):
            result[:, l::m] = self.corner.from_parent(ring.mul(ring.mul(self.e, y), vectors))
        return result

    def map_vector(self, vector) -> np.ndarray:
        return self.map_vectors(np.asarray(vector)[None, :])[0]

    def pullback_vectors(self, vectors) -> np.ndarray:
        ring = self.source.ring
        vectors = np.asarray(vectors, dtype=np.int64)
        m = self.multiplicity
        parents = self.corner.to_parent(vectors)
        result = np.zeros((vectors.shape[0], vectors.shape[1] // m), dtype=np.int64)
        for l, (x, _) in enumerate(self.pairs):
            result = ring.add(result, ring.mul(x, parents[:, l::m]))
        return np.asarray(result, dtype=np.int64)

    def pullback_vector(self, vector) -> np.ndarray:
        return self.pullback_vectors(np.asarray(vector)[None, :])[0]

    def pullback_gram(self, gram: np.ndarray) -> np.ndarray:
        """B_ij = sum over l, l' of y_l^sigma B'_(i,l),(j,l') y_l'."""
        ring = self.source.ring
        parents = self.corner.to_parent(np.asarray(gram, dtype=np.int64))
        m = self.multiplicity
        k = parents.shape[0] // m
        result = np.zeros((k, k), dtype=np.int64)
        for a, (_, y_left) in enumerate(self.pairs):
            for b, (_, y_right) in enumerate(self.pairs):
                block = ring.mul(ring.mul(self.source.sigma(y_left), parents[a::m, b::m]), y_right)
                result = ring.add(result, block)
        return np.asarray(result, dtype=np.int64)

    def pullback_form(self, module: PresentedModule, space: QuadraticSpace) -> QuadraticSpace:
        """A form on P whose transfer lies in the class of the given form on Pe."""
        return QuadraticSpace(self.source, module, self.pullback_gram(space.gram))

    def map_isometry(self, matrix: np.ndarray) -> np.ndarray:
        return self.map_matrix(matrix)

    def map_reflection(self, reflection: QuasiReflection, space: QuadraticSpace | None = None) -> QuasiReflection:
        """An f-reflection with f in eAe restricts to Pe as the f-reflection with the same datum."""
        space = self.map_space(reflection.space) if space is None else space
        return make_reflection(
            space,
            self.map_vector(reflection.y),
            self.corner.from_parent(reflection.e),
            self.corner.from_parent(reflection.c),
        )


def transfer(ur: UnitaryRing, e: int) -> TransferMap:
    return TransferMap(ur, e)
