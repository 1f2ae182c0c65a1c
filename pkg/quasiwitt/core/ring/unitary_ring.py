from dataclasses import dataclass, field
import logging

import numpy as np

from ..utils.errors import InvalidUnitaryRingError, MalformedSpecError
from .finite_ring import FiniteRing, GaloisField, MatrixRing, OppositeRing, ProductRing, TruncatedPolynomialRing

_logger = logging.getLogger(__name__)


@dataclass
class Violation:
    """
    A failed axiom together with the first witness found in canonical order.

    Attributes:
        axiom (str): Short name of the violated condition.
        witness (list): Element codes exhibiting the failure.
        detail (str): Human-readable explanation.
    """

    axiom: str
    witness: list
    detail: str

    def __str__(self):
        return f"{self.axiom} (witness {self.witness}): {self.detail}"

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": [int(w) for w in self.witness], "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"valid": self.ok, "violations": [v.to_dict() for v in self.violations]}


def additive_closure(ring: FiniteRing, generators) -> np.ndarray:
    """Smallest additive subgroup containing the generators, sorted."""
    member = np.zeros(ring.order, dtype=bool)
    member[0] = True
    for generator in generators:
        frontier = np.flatnonzero(member)
        while True:
            shifted = ring.add(frontier, int(generator))
            fresh = shifted[~member[shifted]]
            if fresh.size == 0:
                break
            member[fresh] = True
            frontier = np.flatnonzero(member)
    return np.flatnonzero(member)


def _first_mismatch(left: np.ndarray, right: np.ndarray):
    hits = np.argwhere(left != right)
    return None if hits.size == 0 else [int(x) for x in hits[0]]


def validate_anti_structure(ring: FiniteRing, sigma: np.ndarray, u: int) -> ValidationReport:
    """
    Check that sigma is an anti-automorphism and that u satisfies u^sigma u = 1 and a^{sigma sigma} = u a u^-1.

    Args:
        ring (FiniteRing): The ring.
        sigma (np.ndarray): Image of every element code.
        u (int): Element code of u.

    Returns:
        A report listing every violated axiom with a witness.
    """
    report = ValidationReport()
    everything = ring.elements()
    sigma = np.asarray(sigma, dtype=np.int64)
    if sigma.shape != (ring.order,) or sigma.min() < 0 or sigma.max() >= ring.order:
        report.violations.append(Violation("total", [], "sigma is not a map of the ring to itself"))
        return report

    images, first_seen, counts = np.unique(sigma, return_index=True, return_counts=True)
    if images.size != ring.order:
        repeated = images[counts > 1][0]
        witnesses = np.flatnonzero(sigma == repeated)[:2]
        report.violations.append(Violation("bijective", list(witnesses), "two elements share an image"))

    for a in everything:
        witness = _first_mismatch(sigma[ring.add(a, everything)], ring.add(sigma[a], sigma[everything]))
        if witness is not None:
            report.violations.append(Violation("additive", [a, witness[0]], "(a+b)^sigma != a^sigma + b^sigma"))
            break
    for a in everything:
        witness = _first_mismatch(sigma[ring.mul(a, everything)], ring.mul(sigma[everything], sigma[a]))
        if witness is not None:
            report.violations.append(
                Violation("anti-multiplicative", [a, witness[0]], "(ab)^sigma != b^sigma a^sigma")
            )
            break
    if sigma[ring.one] != ring.one:
        report.violations.append(Violation("unital", [ring.one], "1^sigma != 1"))

    u_inverse = ring.inverse(u)
    if u_inverse is None:
        report.violations.append(Violation("u-unit", [u], "u is not a unit"))
        return report
    if ring.mul(int(sigma[u]), u) != ring.one:
        report.violations.append(Violation("u-sigma-u", [u], "u^sigma u != 1"))
    twisted = ring.mul(ring.mul(u, everything), u_inverse)
    bad = np.flatnonzero(sigma[sigma] != twisted)
    if bad.size:
        report.violations.append(Violation("sigma-squared", [bad[0]], "a^{sigma sigma} != u a u^-1"))
    return report


def lambda_bounds(ring: FiniteRing, sigma: np.ndarray, u: int) -> tuple[np.ndarray, np.ndarray]:
    """
    :return: (Lambda_min, Lambda_max) as sorted element sets
    """
    everything = ring.elements()
    twisted = ring.mul(sigma[everything], u)
    minimum = np.unique(ring.sub(everything, twisted))
    maximum = np.flatnonzero(twisted == ring.neg(everything))
    return minimum, maximum


def validate_form_parameter(ring: FiniteRing, sigma: np.ndarray, u: int, lam) -> ValidationReport:
    report = ValidationReport()
    lam = np.unique(np.asarray(lam, dtype=np.int64))
    mask = np.zeros(ring.order, dtype=bool)
    mask[lam] = True

    if not mask[0]:
        report.violations.append(Violation("subgroup", [0], "Lambda does not contain 0"))
    sums = ring.add(lam[:, None], lam[None, :])
    if not mask[sums].all():
        i, j = np.argwhere(~mask[sums])[0]
        report.violations.append(Violation("subgroup", [lam[i], lam[j]], "Lambda is not closed under addition"))

    minimum, maximum = lambda_bounds(ring, sigma, u)
    outside = minimum[~mask[minimum]]
    if outside.size:
        report.violations.append(Violation("contains-min", [outside[0]], "Lambda_min is not contained in Lambda"))
    max_mask = np.zeros(ring.order, dtype=bool)
    max_mask[maximum] = True
    outside = lam[~max_mask[lam]]
    if outside.size:
        report.violations.append(Violation("within-max", [outside[0]], "Lambda is not contained in Lambda_max"))

    for a in ring.elements():
        conjugates = ring.mul(ring.mul(int(sigma[a]), lam), a)
        escaped = np.flatnonzero(~mask[conjugates])
        if escaped.size:
            report.violations.append(
                Violation("conjugation-stable", [a, lam[escaped[0]]], "a^sigma Lambda a is not contained in Lambda")
            )
            break
    return report


class UnitaryRing:
    """
    A finite ring with an anti-structure (sigma, u) and a form parameter Lambda.

    The quartet is validated at construction and immutable afterwards.
    """

    def __init__(self, ring: FiniteRing, sigma: np.ndarray, u: int, lam, generators=None, validate: bool = True):
        self._ring = ring
        self._sigma = np.array(sigma, dtype=np.int64)
        self._sigma.setflags(write=False)
        self._u = int(u)
        self._lambda = np.unique(np.asarray(lam, dtype=np.int64))
        self._lambda.setflags(write=False)
        self._lambda_mask = np.zeros(ring.order, dtype=bool)
        self._lambda_mask[self._lambda] = True
        self._lambda_mask.setflags(write=False)
        self._generators = tuple(int(g) for g in (generators if generators is not None else self._lambda))
        if validate:
            report = validate_anti_structure(ring, self._sigma, self._u)
            if report.ok:
                report = validate_form_parameter(ring, self._sigma, self._u, self._lambda)
            if not report.ok:
                raise InvalidUnitaryRingError(report.violations)
        self._u_inverse = ring.inverse(self._u)
        _logger.debug("Unitary ring over %s with |Lambda| = %d", ring.describe(), self._lambda.size)

    @property
    def ring(self) -> FiniteRing:
        return self._ring

    @property
    def sigma_table(self) -> np.ndarray:
        return self._sigma

    @property
    def u(self) -> int:
        return self._u

    @property
    def u_inverse(self) -> int:
        return self._u_inverse

    @property
    def lam(self) -> np.ndarray:
        return self._lambda

    @property
    def lambda_generators(self) -> tuple:
        return self._generators

    def sigma(self, a):
        result = self._sigma[a]
        return result if isinstance(result, np.ndarray) else int(result)

    def in_lambda(self, a):
        result = self._lambda_mask[a]
        return result if isinstance(result, np.ndarray) else bool(result)

    def lambda_min(self) -> np.ndarray:
        return lambda_bounds(self._ring, self._sigma, self._u)[0]

    def lambda_max(self) -> np.ndarray:
        return lambda_bounds(self._ring, self._sigma, self._u)[1]

    def corner_lambda(self, e: int, f: int | None = None) -> np.ndarray:
        """e^sigma Lambda f as a sorted set (f defaults to e)."""
        f = e if f is None else f
        return np.unique(self._ring.mul(self._ring.mul(self.sigma(e), self._lambda), f))

    def describe(self) -> str:
        return f"({self._ring.describe()}, sigma, u={self._ring.literal(self._u)}, |Lambda|={self._lambda.size})"

    def to_dict(self) -> dict:
        ring = self._ring
        return {
            "ring": ring.describe(),
            "order": ring.order,
            "u": ring.literal(self._u),
            "lambda": [ring.literal(int(a)) for a in self._lambda],
        }


def sigma_from_rule(ring: FiniteRing, rule) -> np.ndarray:
    """
    Tabulate sigma from a structural rule.

    Rules: "identity", "transpose", {"transpose": <rule>}, "exchange", "frobenius",
    {"componentwise": [<rule>, ...]}, {"coefficientwise": <rule>}, {"opposite": <rule>},
    {"conjugate": <rule>, "by": <literal>}, {"map": [<literal of each image>]}.
    """
    everything = ring.elements()
    if rule == "identity":
        return everything
    if rule == "transpose" or (isinstance(rule, dict) and "transpose" in rule):
        if not isinstance(ring, MatrixRing):
            raise MalformedSpecError("sigma", "transpose needs a matrix ring")
        base_sigma = sigma_from_rule(ring.base, "identity" if rule == "transpose" else rule["transpose"])
        return ring.encode(base_sigma[np.transpose(ring.entries(everything), (0, 2, 1))])
    if rule == "exchange":
        if not isinstance(ring, ProductRing) or len(ring.factors) != 2 or ring.factors[0].order != ring.factors[1].order:
            raise MalformedSpecError("sigma", "exchange needs a product of two rings of equal order")
        components = ring.components(everything)
        return components[:, 1] * ring.factors[1].order + components[:, 0]
    if rule == "frobenius":
        if not isinstance(ring, GaloisField) or ring.degree % 2:
            raise MalformedSpecError("sigma", "frobenius needs GF(p^k) with k even")
        return ring.power(everything, ring.prime ** (ring.degree // 2))
    if not isinstance(rule, dict):
        raise MalformedSpecError("sigma", f"unknown rule {rule!r}")
    if "componentwise" in rule:
        if not isinstance(ring, ProductRing) or len(rule["componentwise"]) != len(ring.factors):
            raise MalformedSpecError("sigma", "componentwise rule does not match the product")
        tables = [sigma_from_rule(factor, part) for factor, part in zip(ring.factors, rule["componentwise"])]
        components = ring.components(everything)
        images = np.stack([table[components[:, i]] for i, table in enumerate(tables)], axis=1)
        codes = np.zeros(ring.order, dtype=np.int64)
        for i, factor in enumerate(ring.factors):
            codes = codes * factor.order + images[:, i]
        return codes
    if "coefficientwise" in rule:
        if not isinstance(ring, TruncatedPolynomialRing):
            raise MalformedSpecError("sigma", "coefficientwise needs a truncated polynomial ring")
        base_sigma = sigma_from_rule(ring.base, rule["coefficientwise"])
        images = base_sigma[ring.coefficients(everything)]
        codes = np.zeros(ring.order, dtype=np.int64)
        for i in range(ring.degree):
            codes = codes * ring.base.order + images[:, i]
        return codes
    if "opposite" in rule:
        if not isinstance(ring, OppositeRing):
            raise MalformedSpecError("sigma", "opposite rule needs an opposite ring")
        return sigma_from_rule(ring.base, rule["opposite"])
    if "conjugate" in rule:
        inner = sigma_from_rule(ring, rule["conjugate"])
        v = ring.parse(rule["by"])
        v_inverse = ring.inverse(v)
        if v_inverse is None:
            raise MalformedSpecError("sigma", f"conjugating element {rule['by']!r} is not a unit")
        return ring.mul(ring.mul(v, inner), v_inverse)
    if "map" in rule:
        if len(rule["map"]) != ring.order:
            raise MalformedSpecError("sigma", f"map must list {ring.order} images")
        return np.array([ring.parse(image) for image in rule["map"]], dtype=np.int64)
    raise MalformedSpecError("sigma", f"unknown rule {rule!r}")


def lambda_from_spec(ring: FiniteRing, sigma: np.ndarray, u: int, spec) -> tuple[np.ndarray, tuple]:
    """
    :return: (Lambda, generators) for "min", "max" or {"generators": [...]}
    """
    minimum, maximum = lambda_bounds(ring, sigma, u)
    if spec == "min":
        return minimum, tuple(int(a) for a in minimum)
    if spec == "max":
        return maximum, tuple(int(a) for a in maximum)
    if isinstance(spec, dict) and isinstance(spec.get("generators"), list):
        generators = tuple(ring.parse(g) for g in spec["generators"])
        return additive_closure(ring, generators), generators
    raise MalformedSpecError("lambda", f"{spec!r} is neither 'min', 'max' nor a generator list")


def conjugated_unitary_ring(ur: UnitaryRing, v: int) -> UnitaryRing:
    """
    (sigma', u', Lambda') = (a -> v a^sigma v^-1, v (v^sigma)^-1 u, v Lambda) for a unit v.
    """
    ring = ur.ring
    v_inverse = ring.inverse(v)
    sigma = ring.mul(ring.mul(v, ur.sigma_table), v_inverse)
    u = ring.mul(ring.mul(v, ring.inverse(ur.sigma(v))), ur.u)
    lam = np.unique(ring.mul(v, ur.lam))
    generators = tuple(ring.mul(v, g) for g in ur.lambda_generators)
    return UnitaryRing(ring, sigma, u, lam, generators=generators)


def corner_unitary_ring(ur: UnitaryRing, corner) -> UnitaryRing:
    """
    (eAe, sigma restricted, eu, e Lambda e) on a CornerRing of ur.ring whose idempotent is sigma-fixed.
    """
    ring = ur.ring
    e = corner.idempotent
    sigma = corner.from_parent(ur.sigma(corner.representatives))
    u = corner.from_parent(ring.mul(e, ur.u))
    lam = np.unique(corner.from_parent(ur.corner_lambda(e)))
    return UnitaryRing(corner, sigma, u, lam)
