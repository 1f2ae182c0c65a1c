import numpy as np
from sympy import isprime

from ..utils.config import check_enumeration
from ..utils.errors import DomainViolationError
from .finite_ring import FiniteRing, _to_digits


def identity(ring: FiniteRing, k: int) -> np.ndarray:
    matrix = np.zeros((k, k), dtype=np.int64)
    np.fill_diagonal(matrix, ring.one)
    return matrix


def mat_add(ring: FiniteRing, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.asarray(ring.add(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)), dtype=np.int64)


def mat_sub(ring: FiniteRing, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.asarray(ring.sub(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)), dtype=np.int64)


def mat_mul(ring: FiniteRing, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    product = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for middle in range(a.shape[1]):
        product = ring.add(product, ring.mul(a[:, middle : middle + 1], b[middle : middle + 1, :]))
    return np.asarray(product, dtype=np.int64)


def scale_left(ring: FiniteRing, scalar: int, matrix: np.ndarray) -> np.ndarray:
    return np.asarray(ring.mul(scalar, np.asarray(matrix, dtype=np.int64)), dtype=np.int64)


def scale_right(ring: FiniteRing, matrix: np.ndarray, scalar: int) -> np.ndarray:
    return np.asarray(ring.mul(np.asarray(matrix, dtype=np.int64), scalar), dtype=np.int64)


def sigma_transpose(sigma: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Entrywise sigma, then transpose."""
    return np.asarray(sigma[np.asarray(matrix, dtype=np.int64)].T, dtype=np.int64)


def apply(ring: FiniteRing, matrix: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """
    Apply a matrix to a batch of column vectors given as rows.

    :param matrix: shape (m, k)
    :param vectors: shape (N, k)
    :return: shape (N, m)
    """
    matrix = np.asarray(matrix, dtype=np.int64)
    vectors = np.asarray(vectors, dtype=np.int64)
    result = np.zeros((vectors.shape[0], matrix.shape[0]), dtype=np.int64)
    for j in range(matrix.shape[1]):
        result = ring.add(result, ring.mul(matrix[None, :, j], vectors[:, j : j + 1]))
    return np.asarray(result, dtype=np.int64)


def row_apply(ring: FiniteRing, rows: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Batch of row vectors times a matrix: (N, k) x (k, m) -> (N, m)."""
    rows = np.asarray(rows, dtype=np.int64)
    matrix = np.asarray(matrix, dtype=np.int64)
    result = np.zeros((rows.shape[0], matrix.shape[1]), dtype=np.int64)
    for j in range(matrix.shape[0]):
        result = ring.add(result, ring.mul(rows[:, j : j + 1], matrix[None, j, :]))
    return np.asarray(result, dtype=np.int64)


def all_vectors(ring: FiniteRing, k: int) -> np.ndarray:
    """Every vector of A^k in canonical order (first coordinate most significant)."""
    count = ring.order**k
    check_enumeration(f"A^{k}", count)
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return _to_digits(np.arange(count), [ring.order] * k)


def solve_left(ring: FiniteRing, left: np.ndarray, target: np.ndarray) -> np.ndarray | None:
    """
    A matrix M with M @ left = target, found row by row by enumerating A^{1 x k}.

    :param left: shape (k, t)
    :param target: shape (m, t)
    :return: M of shape (m, k) with the least rows in canonical order, or None
    """
    left = np.asarray(left, dtype=np.int64)
    target = np.asarray(target, dtype=np.int64)
    rows = all_vectors(ring, left.shape[0])
    images = row_apply(ring, rows, left)
    lookup = {}
    for index in range(images.shape[0] - 1, -1, -1):
        lookup[images[index].tobytes()] = index
    solution = np.zeros((target.shape[0], left.shape[0]), dtype=np.int64)
    for i in range(target.shape[0]):
        index = lookup.get(np.ascontiguousarray(target[i]).tobytes())
        if index is None:
            return None
        solution[i] = rows[index]
    return solution


def prime_field_coordinates(ring: FiniteRing) -> tuple[int, np.ndarray]:
    """
    Coordinates of every element over the prime field, for rings of prime characteristic.

    :return: (p, table) with table[a] the coordinate vector of a
    """

    def compute():
        p = ring.characteristic()
        if not isprime(p):
            raise DomainViolationError(f"{ring.describe()} has non-prime characteristic {p}")
        known = np.zeros(ring.order, dtype=bool)
        known[0] = True
        coordinates = {0: ()}
        for candidate in range(1, ring.order):
            if known[candidate]:
                continue
            spanned = list(coordinates.items())
            coordinates = {}
            for value, coords in spanned:
                multiple = value
                for t in range(p):
                    coordinates[multiple] = coords + (t,)
                    known[multiple] = True
                    multiple = ring.add(multiple, candidate)
        dimension = len(coordinates[0])
        table = np.zeros((ring.order, dimension), dtype=np.int64)
        for value, coords in coordinates.items():
            table[value] = coords
        return p, table

    return ring._memo("prime_coordinates", compute)


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over F_p by Gaussian elimination."""
    work = np.array(matrix, dtype=np.int64) % p
    rank = 0
    rows, cols = work.shape
    for col in range(cols):
        pivots = np.flatnonzero(work[rank:, col]) + rank
        if pivots.size == 0:
            continue
        pivot = pivots[0]
        work[[rank, pivot]] = work[[pivot, rank]]
        work[rank] = (work[rank] * pow(int(work[rank, col]), -1, p)) % p
        others = np.flatnonzero(work[:, col])
        others = others[others != rank]
        work[others] = (work[others] - work[others, col : col + 1] * work[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank
