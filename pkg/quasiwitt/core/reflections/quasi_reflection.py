from dataclasses import dataclass

import numpy as np

from ..forms.module import Submodule
from ..forms.quadratic_space import QuadraticSpace
from ..ring.linalg import identity, mat_mul, mat_sub
from ..ring.radical import ef_inverse, idempotents
from ..utils.errors import (
    DomainViolationError,
    IdempotentsNotOrthogonalError,
    InvalidCError,
    NotEFInvertibleError,
    RingMismatchError,
)


@dataclass(frozen=True, eq=False)
class QuasiReflection:
    """
    The e-reflection s_{y,e,c}: x -> x - y c' h(y, x), where c' is the (e^sigma, e)-inverse of c.

    Attributes:
        space (QuadraticSpace): The space it acts on.
        y (np.ndarray): A module element with y e = y.
        e (int): The idempotent.
        c (int): An element of beta(y, y) + e^sigma Lambda e.
        c_inverse (int): c', with c c' = e^sigma and c' c = e.
    """

    space: QuadraticSpace
    y: np.ndarray
    e: int
    c: int
    c_inverse: int

    def apply(self, vectors) -> np.ndarray:
        """Image of a batch of vectors given as rows."""
        ring = self.space.ring
        vectors = np.asarray(vectors, dtype=np.int64)
        values = self.space.hs(np.broadcast_to(self.y, vectors.shape), vectors)
        scalars = ring.mul(self.c_inverse, values)
        return np.asarray(ring.sub(vectors, ring.mul(self.y[None, :], scalars[:, None])), dtype=np.int64)

    def __call__(self, vector) -> np.ndarray:
        return self.apply(np.asarray(vector)[None, :])[0]

    def as_matrix(self) -> np.ndarray:
        """(I - y c' y^{sigma T} H) E, the matrix acting as the reflection on P and as zero off P."""
        space = self.space
        ring = space.ring
        row = ring.mul(self.c_inverse, space.functionals(self.y[None, :])[0])
        rank_one = ring.mul(self.y[:, None], row[None, :])
        return mat_mul(ring, mat_sub(ring, identity(ring, space.rank), rank_one), space.module.presentation)

    def to_dict(self) -> dict:
        ring = self.space.ring
        return {
            "y": [ring.literal(int(a)) for a in self.y],
            "e": ring.literal(self.e),
            "c": ring.literal(self.c),
        }


def reflection_coset(space: QuadraticSpace, y: np.ndarray, e: int) -> np.ndarray:
    """beta(y, y) + e^sigma Lambda e, sorted."""
    return np.unique(space.ring.add(space.beta(y, y), space.ur.corner_lambda(e)))


def _check_datum(space: QuadraticSpace, y, e: int) -> np.ndarray:
    ring = space.ring
    y = space.module.require(y)
    e = int(e)
    if ring.mul(e, e) != e:
        raise DomainViolationError(f"{ring.literal(e)} is not idempotent")
    if not np.array_equal(ring.mul(y, e), y):
        raise DomainViolationError("y e != y")
    return y


def make_reflection(space: QuadraticSpace, y, e: int, c: int | None = None) -> QuasiReflection:
    """
    Build s_{y,e,c}. When c is omitted the least (e^sigma, e)-invertible element of the coset
    beta(y, y) + e^sigma Lambda e is used.
    """
    ring = space.ring
    y = _check_datum(space, y, e)
    e = int(e)
    e_sigma = space.ur.sigma(e)
    coset = reflection_coset(space, y, e)
    if c is None:
        for candidate in coset:
            inverse = ef_inverse(ring, int(candidate), e_sigma, e)
            if inverse is not None:
                return QuasiReflection(space, y, e, int(candidate), inverse)
        raise InvalidCError(int(coset[0]), "the coset holds no (e^sigma, e)-invertible element")
    c = int(c)
    if c not in set(coset.tolist()):
        raise InvalidCError(c, "not in beta(y, y) + e^sigma Lambda e")
    inverse = ef_inverse(ring, c, e_sigma, e)
    if inverse is None:
        raise InvalidCError(c, "not (e^sigma, e)-invertible")
    return QuasiReflection(space, y, e, c, inverse)


def inverse(reflection: QuasiReflection) -> QuasiReflection:
    """s_{y,e,c^sigma u}."""
    ur = reflection.space.ur
    return make_reflection(reflection.space, reflection.y, reflection.e, ur.ring.mul(ur.sigma(reflection.c), ur.u))


def reindex(reflection: QuasiReflection, a: int, f: int) -> QuasiReflection:
    """
    The same map written as an f-reflection: s_{y,e,c} = s_{ya, f, a^sigma c a} for an
    (e, f)-invertible a in eAf.
    """
    space = reflection.space
    ring = space.ring
    e = reflection.e
    a, f = int(a), int(f)
    if ring.mul(ring.mul(e, a), f) != a or ef_inverse(ring, a, e, f) is None:
        raise NotEFInvertibleError(a, e, f)
    c = ring.mul(ring.mul(space.ur.sigma(a), reflection.c), a)
    return make_reflection(space, ring.mul(reflection.y, a), f, c)


def compose_orthogonal(first: QuasiReflection, second: QuasiReflection) -> QuasiReflection:
    """
    s_{y,e,c} s_{z,f,d} = s_{y+z, e+f, c+d+h(y,z)} when e f = f e = 0.

    The new (e+f)-inverse equals c' + d' - c' h(y,z) d'.
    """
    if first.space is not second.space:
        raise RingMismatchError()
    space = first.space
    ring = space.ring
    e, f = first.e, second.e
    if ring.mul(e, f) != 0 or ring.mul(f, e) != 0:
        raise IdempotentsNotOrthogonalError(e, f)
    cross = space.h(first.y, second.y)
    c = ring.add(ring.add(first.c, second.c), cross)
    return make_reflection(space, ring.add(first.y, second.y), ring.add(e, f), c)


def identity_reflection(space: QuadraticSpace, e: int) -> QuasiReflection | None:
    """s_{0,e,a} for the least (e^sigma, e)-invertible a in e^sigma Lambda e, when one exists."""
    zero = np.zeros(space.rank, dtype=np.int64)
    try:
        return make_reflection(space, zero, e)
    except InvalidCError:
        return None


def product_matrix(space: QuadraticSpace, reflections) -> np.ndarray:
    """Matrix of r_1 r_2 ... r_m (the last one applied first), restricted to P."""
    ring = space.ring
    result = space.module.presentation.copy()
    for reflection in reversed(list(reflections)):
        result = mat_mul(ring, reflection.as_matrix(), result)
    return result


def enumerate_quasi_reflections(space: QuadraticSpace, idempotent_list=None, within: Submodule | None = None):
    """
    Every datum (y, e, c) with y in Pe and c in beta(y, y) + e^sigma Lambda e invertible.

    Idempotents default to all nonzero idempotents of the ring; [1] gives the reflections.
    When within is given, y runs through within only.
    """
    ring = space.ring
    if idempotent_list is None:
        idempotent_list = [int(e) for e in idempotents(ring) if e != 0]
    elements = (within or space.module).elements()
    for e in idempotent_list:
        e = int(e)
        e_sigma = space.ur.sigma(e)
        fixed = np.all(ring.mul(elements, e) == elements, axis=1)
        for y in elements[fixed]:
            for c in reflection_coset(space, y, e):
                inverse_c = ef_inverse(ring, int(c), e_sigma, e)
                if inverse_c is not None:
                    yield QuasiReflection(space, y.copy(), e, int(c), inverse_c)
