import logging

import numpy as np

from ..ring.finite_ring import FiniteRing
from ..ring.linalg import all_vectors, apply, identity, mat_mul, mat_sub, row_apply, solve_left
from ..utils.config import check_enumeration
from ..utils.errors import NotADecompositionError, NotASummandError, NotInModuleError

_logger = logging.getLogger(__name__)


def vector_keys(vectors: np.ndarray) -> set:
    return {tuple(int(x) for x in row) for row in np.asarray(vectors)}


def span(ring: FiniteRing, k: int, generators) -> np.ndarray:
    """
    Right submodule of A^k generated by the given vectors, sorted in canonical order.
    """
    elements = np.zeros((1, k), dtype=np.int64)
    everything = ring.elements()
    for generator in generators:
        generator = np.asarray(generator, dtype=np.int64)
        multiples = np.asarray(ring.mul(generator[None, :], everything[:, None]), dtype=np.int64).reshape(-1, k)
        sums = ring.add(elements[:, None, :], np.unique(multiples, axis=0)[None, :, :]).reshape(-1, k)
        elements = np.unique(sums, axis=0)
        check_enumeration("submodule elements", elements.shape[0])
    return elements


def minimal_generators(ring: FiniteRing, elements: np.ndarray) -> list[np.ndarray]:
    """Greedy generating set: each element in canonical order is kept when not yet spanned."""
    elements = np.asarray(elements, dtype=np.int64)
    k = elements.shape[1]
    generators = []
    spanned = vector_keys(np.zeros((1, k), dtype=np.int64))
    for row in elements:
        if len(spanned) == elements.shape[0]:
            break
        if tuple(int(x) for x in row) in spanned:
            continue
        generators.append(row.copy())
        spanned = vector_keys(span(ring, k, generators))
    return generators


def complement_projection(ring: FiniteRing, k: int, image_generators, kernel_generators) -> np.ndarray:
    """
    The idempotent matrix of A^k with the given image and kernel.

    Args:
        image_generators: Vectors spanning the image summand.
        kernel_generators: Vectors spanning the kernel summand.

    Returns:
        M with M g = g on the image generators and M h = 0 on the kernel generators.
    """
    image_generators = [np.asarray(g, dtype=np.int64) for g in image_generators]
    kernel_generators = [np.asarray(h, dtype=np.int64) for h in kernel_generators]
    columns = image_generators + kernel_generators
    if not columns:
        return np.zeros((k, k), dtype=np.int64)
    left = np.stack(columns, axis=1)
    target = np.zeros_like(left)
    if image_generators:
        target[:, : len(image_generators)] = np.stack(image_generators, axis=1)
    projection = solve_left(ring, left, target)
    if projection is None or not np.array_equal(mat_mul(ring, projection, projection), projection):
        raise NotADecompositionError("image and kernel do not form a direct sum of A^k")
    return projection


class Submodule:
    """
    A right submodule of A^k given by its element set (sorted in canonical order).
    """

    def __init__(self, ring: FiniteRing, k: int, elements: np.ndarray):
        self.ring = ring
        self.rank = k
        self._elements = np.asarray(elements, dtype=np.int64).reshape(-1, k)
        self._keys = vector_keys(self._elements)

    @classmethod
    def spanned_by(cls, ring: FiniteRing, k: int, generators) -> "Submodule":
        return cls(ring, k, span(ring, k, generators))

    def elements(self) -> np.ndarray:
        return self._elements

    @property
    def size(self) -> int:
        return self._elements.shape[0]

    def contains(self, vector) -> bool:
        return tuple(int(x) for x in vector) in self._keys

    def generators(self) -> list[np.ndarray]:
        return minimal_generators(self.ring, self._elements)

    def intersect(self, other: "Submodule") -> "Submodule":
        mask = np.array([other.contains(row) for row in self._elements], dtype=bool)
        return Submodule(self.ring, self.rank, self._elements[mask])

    def is_zero(self) -> bool:
        return self.size == 1


class PresentedModule(Submodule):
    """
    A finitely generated projective right module: the column space of an idempotent E in M_k(A).
    """

    def __init__(self, ring: FiniteRing, presentation):
        presentation = np.array(presentation, dtype=np.int64)
        if presentation.size == 0:
            presentation = presentation.reshape(0, 0)
        k = presentation.shape[0]
        if presentation.shape != (k, k) or not np.array_equal(mat_mul(ring, presentation, presentation), presentation):
            raise NotASummandError("the presentation matrix is not a square idempotent")
        self.presentation = presentation
        self.presentation.setflags(write=False)
        candidates = all_vectors(ring, k)
        members = np.all(apply(ring, presentation, candidates) == candidates, axis=1)
        super().__init__(ring, k, candidates[members])
        _logger.debug("Module of rank %d with %d elements", k, self.size)

    @classmethod
    def free(cls, ring: FiniteRing, k: int) -> "PresentedModule":
        return cls(ring, identity(ring, k))

    def is_free(self) -> bool:
        return np.array_equal(self.presentation, identity(self.ring, self.rank))

    def same_as(self, other: "PresentedModule") -> bool:
        return self.ring is other.ring and np.array_equal(self.presentation, other.presentation)

    def column_generators(self) -> np.ndarray:
        """The columns E e_j, as rows of a (k, k) array."""
        return self.presentation.T.copy()

    def require(self, vector) -> np.ndarray:
        vector = np.asarray(vector, dtype=np.int64)
        if vector.shape != (self.rank,) or not self.contains(vector):
            raise NotInModuleError(vector)
        return vector

    def complement_generators(self) -> list[np.ndarray]:
        """Columns of I - E, spanning the complement of the module in A^k."""
        return list(mat_sub(self.ring, identity(self.ring, self.rank), self.presentation).T)

    def dual_rows(self) -> np.ndarray:
        """Hom(P, A) realized as the rows r of A^{1 x k} with r E = r."""
        rows = all_vectors(self.ring, self.rank)
        return rows[np.all(row_apply(self.ring, rows, self.presentation) == rows, axis=1)]

    def summand(self, elements: np.ndarray, complement: np.ndarray) -> "PresentedModule":
        """
        Present the submodule with the given elements, using another submodule of this module as its
        complement.
        """
        image = minimal_generators(self.ring, elements)
        kernel = minimal_generators(self.ring, complement) + self.complement_generators()
        return PresentedModule(self.ring, complement_projection(self.ring, self.rank, image, kernel))

    def find_complement(self, sub: Submodule) -> np.ndarray:
        """
        Elements of a complement of sub inside this module, built greedily from cyclic submodules,
        largest first and in canonical order among equal sizes.
        """
        k = self.rank
        target = self.size
        current = sub.elements()
        rows = self.elements()
        sizes = np.array([span(self.ring, k, [row]).shape[0] for row in rows])
        generators = sub.generators()
        chosen = []
        for index in np.lexsort((np.arange(rows.shape[0]), -sizes)):
            if current.shape[0] == target:
                break
            row = rows[index]
            combined = span(self.ring, k, generators + [row])
            if combined.shape[0] == current.shape[0] * sizes[index]:
                chosen.append(row)
                generators.append(row)
                current = combined
        if current.shape[0] != target:
            raise NotASummandError("no complement found among cyclic submodules")
        return span(self.ring, k, chosen)

    def present(self, sub: Submodule) -> "PresentedModule":
        """Idempotent presentation of a summand given by its elements."""
        if sub.size == self.size:
            return self
        return self.summand(sub.elements(), self.find_complement(sub))
