from dataclasses import dataclass
import logging

import numpy as np

from ..ring.factors import SimpleFactorData, factors_of
from ..ring.finite_ring import QuotientRing
from ..ring.radical import reduce_unitary_ring
from ..transforms.transfer import TransferMap
from .module import PresentedModule
from .quadratic_space import QuadraticSpace

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FactorComponent:
    """
    (P_i, [beta_i]) over the standardized structure of A_i and its transfer (P_(i), [beta_(i)])
    over the corner A_(i).
    """

    factor: SimpleFactorData
    space: QuadraticSpace
    transfer: TransferMap
    corner_space: QuadraticSpace

    def project(self, vectors) -> np.ndarray:
        """pi_i applied coordinatewise."""
        return np.asarray(self.factor.project(np.asarray(vectors, dtype=np.int64)), dtype=np.int64)

    def to_corner(self, vectors) -> np.ndarray:
        """pi_i followed by right multiplication with epsilon_i and the transfer coordinates."""
        factor_ring = self.factor.factor_ring
        projected = factor_ring.mul(self.project(vectors), self.factor.epsilon)
        return self.transfer.map_vectors(projected)

    @property
    def is_zero(self) -> bool:
        return self.space.module.is_zero()


@dataclass(frozen=True)
class ReducedSpace:
    space: QuadraticSpace
    quotient: QuotientRing
    components: tuple

    def reduce(self, vectors) -> np.ndarray:
        return np.asarray(self.quotient.reduce(np.asarray(vectors, dtype=np.int64)), dtype=np.int64)


def factor_component(space: QuadraticSpace, factor: SimpleFactorData) -> FactorComponent:
    factor_ring = factor.factor_ring
    module = PresentedModule(factor_ring, factor.project(space.module.presentation))
    gram = factor_ring.mul(factor.conjugator, factor.project(space.gram))
    factor_space = QuadraticSpace(factor.standard, module, gram)
    transfer = TransferMap(factor.standard, factor.epsilon, target=factor.corner)
    return FactorComponent(factor, factor_space, transfer, transfer.map_space(factor_space))


def reduce_mod_radical(space: QuadraticSpace) -> ReducedSpace:
    """
    (P/PJ, [beta mod J]) over A/J together with the components over every simple factor.

    Factor spaces are taken over the structure conjugated into standard form, which leaves
    isometries and unimodularity unchanged.
    """
    reduced_ur, quotient = reduce_unitary_ring(space.ur)
    module = PresentedModule(quotient, quotient.reduce(space.module.presentation))
    reduced = QuadraticSpace(reduced_ur, module, quotient.reduce(space.gram))
    components = tuple(factor_component(space, factor) for factor in factors_of(space.ur))
    _logger.debug("Reduced %s into %d factor components", space.describe(), len(components))
    return ReducedSpace(reduced, quotient, components)
