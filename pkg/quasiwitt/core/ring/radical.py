import logging

import numpy as np

from ..utils import constants
from ..utils.errors import DomainViolationError, NotIdempotentModJError, SearchExhaustedError
from .finite_ring import FiniteRing, QuotientRing
from .unitary_ring import UnitaryRing

_logger = logging.getLogger(__name__)


def jacobson_radical(ring: FiniteRing) -> np.ndarray:
    """
    J = {a : 1 - xa is a unit for every x}, by the quasi-regularity test.

    :return: sorted element codes of J
    """

    def compute():
        units = ring.unit_mask
        everything = ring.elements()
        members = [a for a in everything if units[ring.sub(ring.one, ring.mul(everything, a))].all()]
        _logger.debug("Radical of %s has %d elements", ring.describe(), len(members))
        return np.array(members, dtype=np.int64)

    return ring._memo("radical", compute)


def radical_quotient(ring: FiniteRing) -> QuotientRing:
    return ring._memo("radical_quotient", lambda: QuotientRing(ring, jacobson_radical(ring)))


def idempotents(ring: FiniteRing) -> np.ndarray:
    everything = ring.elements()
    return np.flatnonzero(ring.mul(everything, everything) == everything)


def center(ring: FiniteRing) -> np.ndarray:
    everything = ring.elements()
    return np.array(
        [a for a in everything if np.array_equal(ring.mul(a, everything), ring.mul(everything, a))], dtype=np.int64
    )


def central_idempotents(ring: FiniteRing) -> np.ndarray:
    middle = center(ring)
    return middle[ring.mul(middle, middle) == middle]


def _newton_lift(ring: FiniteRing, x: int) -> int:
    for _ in range(constants.max_lift_iterations):
        square = ring.mul(x, x)
        cube = ring.mul(square, x)
        following = ring.sub(ring.add(ring.add(square, square), square), ring.add(cube, cube))
        if following == x:
            return x
        x = following
    raise SearchExhaustedError("a stable idempotent lift")


def lift_idempotent(ring: FiniteRing, e_bar: int) -> int:
    """
    Lift an idempotent of A/J to an idempotent of A by iterating e <- 3e^2 - 2e^3.

    Args:
        ring (FiniteRing): The ring A.
        e_bar (int): Code of an idempotent in radical_quotient(ring).

    Returns:
        e in A with e^2 = e and e = e_bar modulo J.
    """
    quotient = radical_quotient(ring)
    if quotient.mul(e_bar, e_bar) != e_bar:
        raise NotIdempotentModJError(e_bar)
    return _newton_lift(ring, quotient.to_parent(e_bar))


def lift_orthogonal_system(ring: FiniteRing, system: list[int]) -> list[int]:
    """
    Lift a complete system of orthogonal idempotents of A/J, keeping orthogonality and completeness.

    Each idempotent is lifted inside gAg, where g is one minus the idempotents already lifted,
    and the last one is whatever remains.
    """
    quotient = radical_quotient(ring)
    for e_bar in system:
        if quotient.mul(e_bar, e_bar) != e_bar:
            raise NotIdempotentModJError(e_bar)
    lifted = []
    remaining = ring.one
    for e_bar in system[:-1]:
        start = ring.mul(ring.mul(remaining, quotient.to_parent(e_bar)), remaining)
        e = _newton_lift(ring, start)
        lifted.append(e)
        remaining = ring.sub(remaining, e)
    if system:
        lifted.append(remaining)
    return lifted


def ef_inverse(ring: FiniteRing, a: int, e: int, f: int) -> int | None:
    """
    The (e,f)-inverse of a in eAf: the least a' in fAe with a a' = e and a' a = f.

    :return: a' or None when a is not (e,f)-invertible
    """
    if ring.mul(ring.mul(e, a), f) != a:
        raise DomainViolationError(f"element {a} does not lie in eAf")
    everything = ring.elements()
    candidates = np.unique(ring.mul(ring.mul(f, everything), e))
    hits = candidates[(ring.mul(a, candidates) == e) & (ring.mul(candidates, a) == f)]
    return int(hits[0]) if hits.size else None


def full_idempotent_witness(ring: FiniteRing, e: int) -> list[tuple[int, int]] | None:
    """
    Shortest list of pairs (x_l, y_l) with sum of x_l e y_l equal to 1, or None when AeA != A.
    """
    everything = ring.elements()
    products = ring.mul(ring.mul(everything[:, None], e), everything[None, :])
    witness_of = {}
    for x, y in zip(*np.unravel_index(np.arange(products.size), products.shape)):
        witness_of.setdefault(int(products[x, y]), (int(x), int(y)))
    generators = sorted(witness_of)

    reached = {0: []}
    frontier = [0]
    while frontier:
        if ring.one in reached:
            return reached[ring.one]
        following = []
        for value in frontier:
            for generator in generators:
                total = ring.add(value, generator)
                if total not in reached:
                    reached[total] = reached[value] + [witness_of[generator]]
                    following.append(total)
        frontier = sorted(following)
    return reached.get(ring.one)


def reduce_unitary_ring(ur: UnitaryRing) -> tuple[UnitaryRing, QuotientRing]:
    """
    The induced unitary ring (A/J, sigma-bar, u-bar, Lambda-bar).
    """
    ring = ur.ring
    quotient = radical_quotient(ring)
    sigma_bar = quotient.reduce(ur.sigma(quotient.representatives))
    lam_bar = np.unique(quotient.reduce(ur.lam))
    return UnitaryRing(quotient, sigma_bar, quotient.reduce(ur.u), lam_bar), quotient
