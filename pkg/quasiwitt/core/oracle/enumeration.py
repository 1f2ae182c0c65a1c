from concurrent.futures import ThreadPoolExecutor
import itertools
import logging
import os

import numpy as np

from ..forms.module import PresentedModule
from ..forms.quadratic_space import QuadraticSpace, check_isometry
from ..reflections.quasi_reflection import QuasiReflection
from ..ring.linalg import apply, mat_mul
from ..utils.config import check_candidates, check_enumeration

_logger = logging.getLogger(__name__)


def matrix_key(matrix) -> bytes:
    return np.ascontiguousarray(matrix, dtype=np.int64).tobytes()


def _canonical(matrices) -> list[np.ndarray]:
    unique = {matrix_key(m): np.asarray(m, dtype=np.int64) for m in matrices}
    return sorted(unique.values(), key=lambda m: tuple(m.ravel()))


class GroupTable:
    """
    A finite group of isometries of one space, elements in canonical order.

    Attributes:
        space (QuadraticSpace): The space the elements act on.
        elements (list[np.ndarray]): Matrices acting as zero off P, sorted by their entries.
        provenance (tuple[str, ...]): Where the elements come from, "enumeration" or generator tags.
    """

    def __init__(self, space: QuadraticSpace, elements, provenance=("enumeration",)):
        self.space = space
        self.elements = _canonical(elements)
        self.provenance = tuple(provenance)
        self._index = {matrix_key(m): i for i, m in enumerate(self.elements)}
        self._table = None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, matrix) -> bool:
        return matrix_key(matrix) in self._index

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, matrix) -> int:
        return self._index[matrix_key(matrix)]

    @property
    def identity_index(self) -> int:
        return self.index_of(self.space.module.presentation)

    def keys(self) -> set:
        return set(self._index)

    def issubset(self, other: "GroupTable") -> bool:
        return self.keys() <= other.keys()

    def multiplication_table(self) -> np.ndarray:
        """table[a, b] is the index of elements[a] elements[b], computed on first use."""
        if self._table is None:
            ring = self.space.ring
            size = len(self.elements)
            table = np.zeros((size, size), dtype=np.int64)
            for a, left in enumerate(self.elements):
                for b, right in enumerate(self.elements):
                    table[a, b] = self.index_of(mat_mul(ring, left, right))
            self._table = table
        return self._table

    def is_closed(self) -> bool:
        ring = self.space.ring
        return all(mat_mul(ring, a, b) in self for a in self.elements for b in self.elements)

    def to_dict(self) -> dict:
        return {"order": self.order, "provenance": list(self.provenance)}


def _column_pool(s1: QuadraticSpace, s2: QuadraticSpace, generator: np.ndarray) -> np.ndarray:
    """Images allowed for one column generator: elements of equal quadratic value."""
    if not generator.any():
        return np.zeros((1, s2.rank), dtype=np.int64)
    targets = s2.elements()
    values = s2.betas(targets, targets)
    return targets[s2.ur.in_lambda(s2.ring.sub(values, s1.beta(generator, generator)))]


def _backtrack(s1, s2, generators, pools, chosen, first_only):
    j = len(chosen)
    if j == len(generators):
        matrix = np.stack(chosen, axis=1) if chosen else np.zeros((s2.rank, 0), dtype=np.int64)
        ring = s1.ring
        if np.array_equal(mat_mul(ring, matrix, s1.module.presentation), matrix) and check_isometry(matrix, s1, s2):
            yield matrix
        return
    pool = pools[j]
    mask = np.ones(pool.shape[0], dtype=bool)
    for i, x in enumerate(chosen):
        mask &= s2.hs(np.broadcast_to(x, pool.shape), pool) == s1.h(generators[i], generators[j])
    for y in pool[mask]:
        found = False
        for matrix in _backtrack(s1, s2, generators, pools, chosen + [y], first_only):
            found = True
            yield matrix
        if found and first_only:
            return


def _prepare(s1: QuadraticSpace, s2: QuadraticSpace):
    generators = list(s1.module.column_generators())
    pools = [_column_pool(s1, s2, g) for g in generators]
    nonzero = sum(1 for g in generators if g.any())
    check_candidates("isometry candidates", s2.module.size**nonzero)
    return generators, pools


def find_isometry(s1: QuadraticSpace, s2: QuadraticSpace) -> np.ndarray | None:
    """The canonically first isometry found by the column search, or None."""
    if s1.module.size != s2.module.size:
        return None
    generators, pools = _prepare(s1, s2)
    return next(_backtrack(s1, s2, generators, pools, [], True), None)


def enumerate_isometries_between(s1: QuadraticSpace, s2: QuadraticSpace, workers: int | None = None) -> list[np.ndarray]:
    """
    Every isometry s1 -> s2, as (k2 x k1) matrices U = U E_1, in canonical order.

    An isometry is fixed by the images of the column generators of P_1, so the search runs column by
    column: a column may only go to elements of the same quadratic value, and to elements whose h
    against the columns already chosen is right. The first column's choices are spread over threads.
    """
    if s1.module.size != s2.module.size:
        return []
    generators, pools = _prepare(s1, s2)
    if not generators:
        return list(_backtrack(s1, s2, generators, pools, [], False))

    def branch(first):
        return list(_backtrack(s1, s2, generators, pools, [first], False))

    workers = workers or min(4, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        parts = list(executor.map(branch, pools[0]))
    result = _canonical(itertools.chain.from_iterable(parts))
    _logger.debug("Found %d isometries between spaces with %d elements", len(result), s1.module.size)
    return result


def enumerate_isometries(space: QuadraticSpace, workers: int | None = None) -> GroupTable:
    """O(P, [beta]) by exhaustive search."""
    group = GroupTable(space, enumerate_isometries_between(space, space, workers))
    _logger.info("|O| = %d for %s", group.order, space.describe())
    return group


def closure(space: QuadraticSpace, generators, tags=None) -> GroupTable:
    """The subgroup generated by isometries (matrices or quasi-reflections), grown breadth first."""
    ring = space.ring
    matrices = [g.as_matrix() if isinstance(g, QuasiReflection) else np.asarray(g, dtype=np.int64) for g in generators]
    identity = space.module.presentation.copy()
    seen = {matrix_key(identity): identity}
    frontier = [identity]
    while frontier:
        new = []
        for element in frontier:
            for generator in matrices:
                product = mat_mul(ring, generator, element)
                key = matrix_key(product)
                if key not in seen:
                    seen[key] = product
                    new.append(product)
        check_enumeration("group elements", len(seen))
        frontier = new
    provenance = tuple(tags) if tags is not None else (f"{len(matrices)} generators",)
    return GroupTable(space, seen.values(), provenance)


def generating_set(group: GroupTable) -> list[np.ndarray]:
    """A generating set picked greedily in canonical order."""
    chosen = []
    reached = closure(group.space, [])
    for element in group:
        if element not in reached:
            chosen.append(element)
            reached = closure(group.space, chosen)
        if reached.order == group.order:
            break
    return chosen


def _batch_mul(ring, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Products of stacked matrices (n, k, m) with (n, m, p) or with one (m, p) matrix."""
    n, k, m = left.shape
    right = np.broadcast_to(right, (n,) + right.shape[-2:])
    result = np.zeros((n, k, right.shape[2]), dtype=np.int64)
    for l in range(m):
        result = ring.add(result, ring.mul(left[:, :, l][:, :, None], right[:, l, :][:, None, :]))
    return np.asarray(result, dtype=np.int64)


def module_endomorphisms(module: PresentedModule) -> np.ndarray:
    """Every k x k matrix M with E M = M = M E, stacked in canonical order of the columns."""
    ring = module.ring
    k = module.rank
    elements = module.elements()
    check_candidates("module endomorphisms", elements.shape[0] ** k)
    if k == 0:
        return np.zeros((1, 0, 0), dtype=np.int64)
    choices = np.array(list(itertools.product(range(elements.shape[0]), repeat=k)), dtype=np.int64)
    matrices = np.swapaxes(elements[choices], 1, 2)
    keep = np.all(_batch_mul(ring, matrices, module.presentation) == matrices, axis=(1, 2))
    return matrices[keep]


def enumerate_summands(module: PresentedModule) -> list[PresentedModule]:
    """
    Every summand of P, one per image, presented by the first idempotent endomorphism found for it.
    """
    ring = module.ring
    matrices = module_endomorphisms(module)
    idempotent = np.all(_batch_mul(ring, matrices, matrices) == matrices, axis=(1, 2))
    summands = {}
    elements = module.elements()
    for projection in matrices[idempotent]:
        image = np.unique(apply(ring, projection, elements), axis=0)
        summands.setdefault(image.tobytes(), projection)
    result = [PresentedModule(ring, projection) for projection in summands.values()]
    result.sort(key=lambda summand: (summand.size, tuple(summand.presentation.ravel())))
    _logger.debug("%d summands of a module with %d elements", len(result), module.size)
    return result
