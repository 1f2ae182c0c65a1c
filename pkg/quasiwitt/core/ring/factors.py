from dataclasses import dataclass
import logging
import math
import threading
import weakref

import numpy as np

from ..utils.constants import FactorKind
from ..utils.errors import SearchExhaustedError
from .finite_ring import CornerRing, FiniteRing, QuotientRing
from .radical import central_idempotents, ef_inverse, idempotents, lift_orthogonal_system, reduce_unitary_ring
from .unitary_ring import UnitaryRing, conjugated_unitary_ring, corner_unitary_ring

_logger = logging.getLogger(__name__)

_factor_cache = weakref.WeakKeyDictionary()
_factor_lock = threading.Lock()


@dataclass(frozen=True)
class SimpleFactorData:
    """
    One sigma-invariant simple factor (A_i, sigma_i, u_i, Lambda_i) of the semisimple quotient.

    Element codes of A_i refer to factor_ring; codes of Abar to quotient; lifts live in A.

    Attributes:
        index (int): Position i of the factor.
        kind (FactorKind): Simple ring or exchange pair B x B^op.
        quotient (QuotientRing): A/J.
        central (int): Central idempotent of A/J cutting out A_i.
        half (int | None): For an exchange pair, the central idempotent of the B part, in A_i.
        factor_ring (CornerRing): A_i.
        unitary (UnitaryRing): Induced structure on A_i.
        conjugator (int): Unit v_i of A_i bringing the structure to standard form.
        standard (UnitaryRing): Structure on A_i conjugated by v_i.
        epsilon (int): The sigma-fixed idempotent epsilon_i of A_i (standard structure).
        length (int): n_i.
        corner (UnitaryRing): A_(i) = epsilon_i A_i epsilon_i with the restricted standard structure.
        system (tuple): epsilon_i^(1..n_i), orthogonal, each equivalent to epsilon_i, summing to 1 in A_i.
        lifts (tuple): e_i^(1..n_i) in A.
    """

    index: int
    kind: FactorKind
    quotient: QuotientRing
    central: int
    half: int | None
    factor_ring: CornerRing
    unitary: UnitaryRing
    conjugator: int
    standard: UnitaryRing
    epsilon: int
    length: int
    corner: UnitaryRing
    system: tuple
    lifts: tuple

    @property
    def e(self) -> int:
        return self.lifts[0]

    @property
    def f(self) -> int:
        ring = self.quotient.parent
        total = 0
        for lift in self.lifts:
            total = ring.add(total, lift)
        return total

    def project(self, codes):
        """pi_i : A -> A_i."""
        return self.factor_ring.from_parent(self.quotient.reduce(codes))

    def embed(self, codes):
        """A_i -> A via the least coset representative."""
        return self.quotient.to_parent(self.factor_ring.to_parent(codes))

    def describe(self) -> str:
        return f"factor {self.index}: {self.kind.value}, n={self.length}, |A_i|={self.factor_ring.order}, |D|={self.corner.ring.order}"


def primitive_central_idempotents(ring: FiniteRing) -> list[int]:
    candidates = [int(c) for c in central_idempotents(ring) if c != 0]
    primitive = []
    for c in candidates:
        below = [d for d in candidates if d != c and ring.mul(c, d) == d]
        if not below:
            primitive.append(c)
    return primitive


def _is_primitive_corner(ur: UnitaryRing, epsilon: int, kind: FactorKind) -> bool:
    """
    epsilon A epsilon is a division ring (simple kind) or the exchange pair E x E^op of two
    division rings (exchange kind).
    """
    ring = ur.ring
    corner = CornerRing(ring, epsilon)
    corner_idempotents = [int(x) for x in idempotents(corner)]
    if kind is FactorKind.SIMPLE:
        return len(corner_idempotents) == 2
    if len(corner_idempotents) != 4:
        return False
    delta = next(corner.to_parent(x) for x in corner_idempotents if x not in (0, corner.one))
    return ur.sigma(delta) != delta and ring.mul(delta, ur.sigma(delta)) == 0


def _standard_candidate(ur: UnitaryRing, kind: FactorKind) -> int | None:
    """The least sigma-fixed idempotent with primitive corner, when the structure is an involution with u = +-1."""
    ring = ur.ring
    everything = ring.elements()
    if not np.array_equal(ur.sigma(ur.sigma_table), everything):
        return None
    if ur.u not in (ring.one, ring.neg(ring.one)):
        return None
    for epsilon in idempotents(ring):
        epsilon = int(epsilon)
        if epsilon == 0 or ur.sigma(epsilon) != epsilon or not _is_primitive_corner(ur, epsilon, kind):
            continue
        corner = CornerRing(ring, epsilon)
        tau_trivial = bool(np.array_equal(ur.sigma(corner.representatives), corner.representatives))
        if ur.u != ring.one and not tau_trivial:
            continue
        return epsilon
    return None


def _standardize(ur: UnitaryRing, kind: FactorKind) -> tuple[int, UnitaryRing, int]:
    ring = ur.ring
    tried = set()

    def attempts():
        yield ring.one
        for d in ring.elements():
            yield ring.add(int(d), ring.mul(ur.u_inverse, ur.sigma(int(d))))
        yield from (int(v) for v in ring.units())

    for v in attempts():
        if v in tried or not ring.is_unit(v):
            continue
        tried.add(v)
        standard = ur if v == ring.one else conjugated_unitary_ring(ur, v)
        epsilon = _standard_candidate(standard, kind)
        if epsilon is not None:
            return v, standard, epsilon
    raise SearchExhaustedError("a standard-form conjugator")


def standard_form_conjugator(factor: SimpleFactorData) -> int:
    """
    A unit v_i of A_i such that conjugating (sigma_i, u_i, Lambda_i) by v_i gives an involution in
    standard form: tried first v = 1, then v = d + u^-1 d^sigma, then every unit.
    """
    return _standardize(factor.unitary, factor.kind)[0]


def _complete_system(ur: UnitaryRing, epsilon: int) -> list[int]:
    """Orthogonal idempotents equivalent to epsilon, starting with epsilon, summing to 1."""
    ring = ur.ring
    system = [epsilon]
    remaining = ring.sub(ring.one, epsilon)
    while remaining != 0:
        corner = CornerRing(ring, remaining)
        found = None
        for g in corner.representatives[1:]:
            g = int(g)
            if ring.mul(g, g) != g:
                continue
            bridges = np.unique(ring.mul(ring.mul(epsilon, ring.elements()), g))
            if any(ef_inverse(ring, int(a), epsilon, g) is not None for a in bridges):
                found = g
                break
        if found is None:
            raise SearchExhaustedError("an idempotent equivalent to epsilon")
        system.append(found)
        remaining = ring.sub(remaining, found)
    return system


def factor_semisimple(ur: UnitaryRing) -> list[SimpleFactorData]:
    """
    Split (A/J, sigma-bar, u-bar, Lambda-bar) into its sigma-invariant simple factors.

    Primitive central idempotents of A/J are grouped into sigma-bar orbits; a swapped pair is
    merged into one exchange-type factor. For each factor the standard form, epsilon_i, n_i,
    the corner A_(i) and the lifted idempotents e_i^(j) are computed.

    Factors are indexed by the smallest code among the primitive central idempotents of A/J they
    hold, which need not follow the order of the factors of a product ring.
    """
    reduced, quotient = reduce_unitary_ring(ur)
    primitive = primitive_central_idempotents(quotient)
    grouped = []
    seen = set()
    for c in primitive:
        if c in seen:
            continue
        partner = reduced.sigma(c)
        seen.update({c, partner})
        if partner == c:
            grouped.append((c, None, FactorKind.SIMPLE))
        else:
            grouped.append((quotient.add(c, partner), c, FactorKind.EXCHANGE_PAIR))

    partial = []
    for index, (central, half, kind) in enumerate(grouped):
        factor_ring = CornerRing(quotient, central)
        sigma = factor_ring.from_parent(reduced.sigma(factor_ring.representatives))
        u = factor_ring.from_parent(quotient.mul(central, reduced.u))
        lam = np.unique(factor_ring.from_parent(quotient.mul(central, reduced.lam)))
        unitary = UnitaryRing(factor_ring, sigma, u, lam)
        conjugator, standard, epsilon = _standardize(unitary, kind)
        corner = corner_unitary_ring(standard, CornerRing(factor_ring, epsilon))
        length = math.isqrt(round(math.log(factor_ring.order) / math.log(corner.ring.order)))
        system = _complete_system(standard, epsilon)
        assert len(system) == length, f"factor {index}: {len(system)} idempotents for n={length}"
        partial.append((index, kind, central, half, factor_ring, unitary, conjugator, standard, epsilon, length, corner, system))

    flat = [entry[4].to_parent(e) for entry in partial for e in entry[11]]
    lifted = lift_orthogonal_system(ur.ring, flat)

    factors = []
    position = 0
    for index, kind, central, half, factor_ring, unitary, conjugator, standard, epsilon, length, corner, system in partial:
        lifts = tuple(lifted[position : position + length])
        position += length
        factors.append(
            SimpleFactorData(
                index=index,
                kind=kind,
                quotient=quotient,
                central=central,
                half=None if half is None else factor_ring.from_parent(half),
                factor_ring=factor_ring,
                unitary=unitary,
                conjugator=conjugator,
                standard=standard,
                epsilon=epsilon,
                length=length,
                corner=corner,
                system=tuple(system),
                lifts=lifts,
            )
        )
        _logger.info("Simple %s", factors[-1].describe())
    return factors


def factors_of(ur: UnitaryRing) -> list[SimpleFactorData]:
    """factor_semisimple, computed once per unitary ring."""
    with _factor_lock:
        cached = _factor_cache.get(ur)
    if cached is None:
        cached = factor_semisimple(ur)
        with _factor_lock:
            _factor_cache[ur] = cached
    return cached
