from dataclasses import dataclass
import logging
import math

import numpy as np

from ..ring.factors import SimpleFactorData, factors_of
from ..ring.radical import center
from ..ring.unitary_ring import UnitaryRing
from ..utils.constants import CornerType, FactorKind, Parity

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FactorProfile:
    """
    Orthogonality data of one simple factor (A_i, sigma_i, u_i, Lambda_i), read on its standard form.

    Attributes:
        index (int): Position i of the factor.
        kind (FactorKind): Simple ring or exchange pair.
        center_order (int): |K| for the center K of A_i.
        sigma_fixes_center (bool): sigma_i restricts to the identity on K.
        lambda_dimension (int | None): dim_K Lambda_i, None when Lambda_i is not a K-space.
        degree (int): n = sqrt(dim_K A_i) for a simple factor, n_i for an exchange pair.
        orthogonal (bool): The three orthogonality requirements hold.
        split_orthogonal (bool): Orthogonal and A_i is a matrix ring over K.
        parity (Parity): n mod 2 when split-orthogonal.
        corner_type (CornerType): Identification of A_(i).
    """

    index: int
    kind: FactorKind
    center_order: int
    sigma_fixes_center: bool
    lambda_dimension: int | None
    degree: int
    orthogonal: bool
    split_orthogonal: bool
    parity: Parity
    corner_type: CornerType

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind.value,
            "center_order": self.center_order,
            "sigma_fixes_center": self.sigma_fixes_center,
            "lambda_dimension": self.lambda_dimension,
            "degree": self.degree,
            "orthogonal": self.orthogonal,
            "split_orthogonal": self.split_orthogonal,
            "parity": self.parity.value,
            "corner": self.corner_type.value,
        }


def exact_log(value: int, base: int) -> int | None:
    exponent = 0
    power = 1
    while power < value:
        power *= base
        exponent += 1
    return exponent if power == value else None


def corner_type_of(factor: SimpleFactorData) -> CornerType:
    order = factor.corner.ring.order
    if factor.kind is FactorKind.SIMPLE and order == 2:
        return CornerType.F2
    if factor.kind is FactorKind.EXCHANGE_PAIR and order == 4:
        return CornerType.F2_SQUARED
    return CornerType.OTHER


def _center_data(standard: UnitaryRing) -> tuple[np.ndarray, bool]:
    middle = center(standard.ring)
    return middle, bool(np.array_equal(standard.sigma(middle), middle))


def classify_factor(factor: SimpleFactorData) -> FactorProfile:
    """
    Decide orthogonality of a simple factor.

    A_i must be simple, sigma_i must fix the center K and Lambda_i must be a K-space of
    dimension n(n-1)/2 with n = sqrt(dim_K A_i). Split-orthogonality further asks for A_(i) to
    be commutative, so that A_i is a matrix ring over K.
    """
    standard = factor.standard
    ring = standard.ring
    middle, fixes_center = _center_data(standard)
    corner_type = corner_type_of(factor)

    if factor.kind is FactorKind.EXCHANGE_PAIR:
        profile = FactorProfile(
            index=factor.index,
            kind=factor.kind,
            center_order=int(middle.size),
            sigma_fixes_center=fixes_center,
            lambda_dimension=None,
            degree=factor.length,
            orthogonal=False,
            split_orthogonal=False,
            parity=Parity.NOT_APPLICABLE,
            corner_type=corner_type,
        )
        _logger.debug("Factor %d: exchange pair, not orthogonal", factor.index)
        return profile

    lam = standard.lam
    lam_keys = set(lam.tolist())
    stable = set(np.unique(ring.mul(middle[:, None], lam[None, :])).tolist()) <= lam_keys
    lambda_dimension = exact_log(lam.size, middle.size) if stable else None
    ring_dimension = exact_log(ring.order, middle.size)
    degree = math.isqrt(ring_dimension)
    assert degree * degree == ring_dimension, f"factor {factor.index}: dim_K A_i = {ring_dimension} is not a square"

    orthogonal = fixes_center and lambda_dimension is not None and lambda_dimension == degree * (degree - 1) // 2
    split = orthogonal and factor.corner.ring.is_commutative()
    if split:
        parity = Parity.ODD if degree % 2 else Parity.EVEN
    else:
        parity = Parity.NOT_APPLICABLE
    _logger.debug(
        "Factor %d: |K|=%d, n=%d, dim Lambda=%s, orthogonal=%s, split=%s",
        factor.index,
        middle.size,
        degree,
        lambda_dimension,
        orthogonal,
        split,
    )
    return FactorProfile(
        index=factor.index,
        kind=factor.kind,
        center_order=int(middle.size),
        sigma_fixes_center=fixes_center,
        lambda_dimension=lambda_dimension,
        degree=degree,
        orthogonal=orthogonal,
        split_orthogonal=split,
        parity=parity,
        corner_type=corner_type,
    )


def profiles_of(ur: UnitaryRing) -> list[FactorProfile]:
    return [classify_factor(factor) for factor in factors_of(ur)]
