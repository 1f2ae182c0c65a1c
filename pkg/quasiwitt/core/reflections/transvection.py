import logging

import numpy as np

from ..forms.module import Submodule
from ..forms.quadratic_space import QuadraticSpace
from ..ring.radical import ef_inverse
from ..utils.errors import DomainViolationError, InvalidCError, NoTransvectionFoundError
from .quasi_reflection import QuasiReflection, make_reflection

_logger = logging.getLogger(__name__)


def ef_inverse_table(space: QuadraticSpace, e: int) -> np.ndarray:
    """(e^sigma, e)-inverse of every element code, -1 where there is none."""
    ring = space.ring
    e_sigma = space.ur.sigma(int(e))
    table = np.full(ring.order, -1, dtype=np.int64)
    for a in np.unique(ring.mul(ring.mul(e_sigma, ring.elements()), int(e))):
        inverse = ef_inverse(ring, int(a), e_sigma, int(e))
        if inverse is not None:
            table[int(a)] = inverse
    return table


def reflection_data(space: QuadraticSpace, e: int, candidates, inverses: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Every datum of an e-reflection with y among the candidates, as arrays (Y, C, C').

    Rows come in canonical order of y, then of c inside beta(y, y) + e^sigma Lambda e.
    """
    ring = space.ring
    k = space.rank
    candidates = np.asarray(candidates, dtype=np.int64).reshape(-1, k)
    fixed = candidates[np.all(ring.mul(candidates, int(e)) == candidates, axis=1)]
    if fixed.shape[0] == 0:
        empty = np.zeros(0, dtype=np.int64)
        return np.zeros((0, k), dtype=np.int64), empty, empty
    cosets = np.sort(ring.add(space.betas(fixed, fixed)[:, None], space.ur.corner_lambda(int(e))[None, :]), axis=1)
    rows, columns = np.nonzero(inverses[cosets] >= 0)
    c = cosets[rows, columns]
    return fixed[rows], c, inverses[c]


def single_transvection(space: QuadraticSpace, x: np.ndarray, y: np.ndarray, e: int) -> QuasiReflection | None:
    """s_{x-y,e,c} with c = h(x-y, x), which sends x to y when c is (e^sigma, e)-invertible."""
    ring = space.ring
    difference = np.asarray(ring.sub(x, y), dtype=np.int64)
    c = space.h(difference, x)
    try:
        reflection = make_reflection(space, difference, e, c)
    except InvalidCError:
        return None
    return reflection if np.array_equal(reflection(x), y) else None


def two_step_transvection(
    space: QuadraticSpace, x, y, e: int, data, inverses: np.ndarray, within: Submodule | None = None
) -> list[QuasiReflection] | None:
    """
    s_{w,e,Phi(z,c)} s_{z,e,c} sending x to y, for the first datum (z, c) in data with
    Phi(z, c) = h(y, y - x) + h(y, z) c' h(z, x) (e^sigma, e)-invertible. Here w = s_{z,e,c}(x) - y.

    A datum whose reflection already sends x to y is returned alone.
    """
    ring = space.ring
    z, c, c_inverse = data
    if z.shape[0] == 0:
        return None
    xs = np.broadcast_to(x, z.shape)
    ys = np.broadcast_to(y, z.shape)
    towards = space.hs(z, xs)
    moved = np.asarray(ring.sub(xs, ring.mul(z, ring.mul(c_inverse, towards)[:, None])), dtype=np.int64)
    phi = ring.add(space.h(y, ring.sub(y, x)), ring.mul(ring.mul(space.hs(ys, z), c_inverse), towards))
    reached = np.all(moved == ys, axis=1)
    for index in np.flatnonzero(reached | (inverses[phi] >= 0)):
        first = QuasiReflection(space, z[index].copy(), int(e), int(c[index]), int(c_inverse[index]))
        if reached[index]:
            return [first]
        second = single_transvection(space, moved[index], y, e)
        if second is None or (within is not None and not within.contains(second.y)):
            continue
        _logger.debug("Two-step transvection through z=%s, c=%d", z[index].tolist(), int(c[index]))
        return [second, first]
    return None


def transvect_to(space: QuadraticSpace, x, y, e: int, within: Submodule | None = None) -> list[QuasiReflection]:
    """
    At most two e-reflections whose product sends x to y.

    Candidates z for the two-step case come from within, then c runs through the coset of z, both
    in canonical order.

    Args:
        space (QuadraticSpace): (P, [beta]).
        x (np.ndarray): Source vector, in Pe.
        y (np.ndarray): Target vector, in Pe, with the same value of beta as x.
        e (int): Code of the idempotent.
        within (Submodule | None): Where the reflection vectors may lie, P when None.

    Returns:
        A product read left to right, so the last reflection is applied first.
    """
    ring = space.ring
    x = space.module.require(x)
    y = space.module.require(y)
    e = int(e)
    if not (np.array_equal(ring.mul(x, e), x) and np.array_equal(ring.mul(y, e), y)):
        raise DomainViolationError("x and y must lie in Pe")
    if np.array_equal(x, y):
        return []

    single = single_transvection(space, x, y, e)
    if single is not None and (within is None or within.contains(single.y)):
        return [single]

    inverses = ef_inverse_table(space, e)
    data = reflection_data(space, e, (within or space.module).elements(), inverses)
    found = two_step_transvection(space, x, y, e, data, inverses, within)
    if found is None:
        raise NoTransvectionFoundError()
    return found
