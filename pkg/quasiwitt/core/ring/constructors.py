import itertools
import logging

from sympy import Poly, isprime, symbols

from ..utils.config import check_ring_order
from ..utils.errors import MalformedSpecError
from .finite_ring import (
    FiniteRing,
    GaloisField,
    MatrixRing,
    OppositeRing,
    ProductRing,
    ResidueRing,
    TruncatedPolynomialRing,
)

_logger = logging.getLogger(__name__)

_x = symbols("x")


def is_irreducible(prime: int, modulus: list[int]) -> bool:
    """
    :param prime: characteristic
    :param modulus: coefficients, constant term first
    """
    return Poly(list(reversed(modulus)), _x, modulus=prime).is_irreducible


def least_irreducible(prime: int, degree: int) -> list[int]:
    """Least monic irreducible polynomial of the given degree, lower coefficients in canonical order."""
    for lower in itertools.product(range(prime), repeat=degree):
        candidate = list(lower) + [1]
        if is_irreducible(prime, candidate):
            return candidate
    raise MalformedSpecError("ring", f"no irreducible polynomial of degree {degree} over F_{prime}")


def _expect_int(spec: dict, key: str) -> int:
    value = spec.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedSpecError("ring", f"'{key}' must be an integer in {spec!r}")
    return value


def ring_order(spec) -> int:
    """Order of the ring described by a constructor tree, computed without building it."""
    if not isinstance(spec, dict) or len(spec.keys() & {"residue", "field", "matrix", "product", "opposite", "truncated"}) != 1:
        raise MalformedSpecError("ring", f"{spec!r} is not a constructor tree")
    if "residue" in spec:
        return _expect_int(spec, "residue")
    if "field" in spec:
        degree = len(spec["modulus"]) - 1 if "modulus" in spec else spec.get("degree", 1)
        return _expect_int(spec, "field") ** degree
    if "matrix" in spec:
        return ring_order(spec["matrix"]) ** (_expect_int(spec, "size") ** 2)
    if "product" in spec:
        if not isinstance(spec["product"], list) or not spec["product"]:
            raise MalformedSpecError("ring", "'product' must be a non-empty list")
        order = 1
        for factor in spec["product"]:
            order *= ring_order(factor)
        return order
    if "opposite" in spec:
        return ring_order(spec["opposite"])
    return ring_order(spec["truncated"]) ** _expect_int(spec, "degree")


def _build(spec) -> FiniteRing:
    if "residue" in spec:
        return ResidueRing(_expect_int(spec, "residue"))
    if "field" in spec:
        prime = _expect_int(spec, "field")
        if not isprime(prime):
            raise MalformedSpecError("ring", f"field characteristic {prime} is not prime")
        if "modulus" in spec:
            modulus = [int(c) % prime for c in spec["modulus"]]
            if not is_irreducible(prime, modulus):
                raise MalformedSpecError("ring", f"modulus {spec['modulus']} is reducible over F_{prime}")
        else:
            modulus = least_irreducible(prime, spec.get("degree", 1))
        return GaloisField(prime, modulus)
    if "matrix" in spec:
        return MatrixRing(_build(spec["matrix"]), _expect_int(spec, "size"))
    if "product" in spec:
        return ProductRing([_build(factor) for factor in spec["product"]])
    if "opposite" in spec:
        return OppositeRing(_build(spec["opposite"]))
    return TruncatedPolynomialRing(_build(spec["truncated"]), _expect_int(spec, "degree"))


def build_ring(spec: dict) -> FiniteRing:
    """
    Build a finite ring from its constructor tree.

    Accepted nodes: {"residue": m}, {"field": p, "degree": k} or {"field": p, "modulus": [...]},
    {"matrix": <tree>, "size": n}, {"product": [<tree>, ...]}, {"opposite": <tree>},
    {"truncated": <tree>, "degree": k}.

    Args:
        spec (dict): Constructor tree.

    Returns:
        The ring with its canonical encoding.
    """
    check_ring_order(ring_order(spec))
    ring = _build(spec)
    _logger.info("Built ring %s with %d elements", ring.describe(), ring.order)
    return ring
