import logging

import numpy as np

from ..dickson.classification import FactorProfile, profiles_of
from ..forms.module import PresentedModule, Submodule
from ..forms.quadratic_space import QuadraticSpace, is_lambda_form, orthogonal_elements
from ..forms.reduction import FactorComponent, reduce_mod_radical
from ..ring.factors import factors_of
from ..ring.linalg import apply, mat_mul, mat_sub, row_apply
from ..ring.radical import idempotents
from ..ring.unitary_ring import UnitaryRing
from ..utils.constants import CornerType, FactorKind
from ..utils.errors import DomainViolationError, NotADecompositionError, ShapeMismatchError, WrongFactorTypeError
from .problem import ConditionReport, ExtensionProblem, FactorConditions

_logger = logging.getLogger(__name__)


def _literals(ring, vector) -> list:
    return [ring.literal(int(a)) for a in vector]


def _generator_rows(sub: Submodule) -> np.ndarray:
    return np.asarray(sub.generators(), dtype=np.int64).reshape(-1, sub.rank)


def is_zero_class(space: QuadraticSpace, sub: Submodule) -> bool:
    """[beta restricted to sub] = [0]."""
    return is_lambda_form(space.ur, space.gram, _generator_rows(sub))


def restricted_functionals(space: QuadraticSpace, vectors, domain: Submodule) -> np.ndarray:
    """L(v) restricted to domain, recorded by its values h(v, g) on the generators g of domain."""
    generators = _generator_rows(domain)
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, space.rank)
    if generators.shape[0] == 0:
        return np.zeros((vectors.shape[0], 0), dtype=np.int64)
    return row_apply(space.ring, space.functionals(vectors), generators.T)


def dual_is_covered(space: QuadraticSpace, module: PresentedModule, v: Submodule) -> bool:
    """L_module(V) = module*, comparing the restricted functionals r E with the realized dual."""
    rows = row_apply(space.ring, space.functionals(v.elements()), module.presentation)
    return np.unique(rows, axis=0).shape[0] == module.dual_rows().shape[0]


def self_dual_check(ur: UnitaryRing, module: PresentedModule) -> bool:
    """
    P is isomorphic to its dual.

    Every primitive idempotent of a simple factor is equivalent to its sigma-image, so only exchange
    pairs B x B^op matter: the B part and the B^op part of P_i must have the same length, which for
    finite modules is the same as having the same size.
    """
    elements = module.elements()
    for factor in factors_of(ur):
        if factor.kind is not FactorKind.EXCHANGE_PAIR:
            continue
        factor_ring = factor.factor_ring
        projected = np.unique(factor.project(elements), axis=0)
        half = factor.half
        left = np.unique(factor_ring.mul(projected, half), axis=0).shape[0]
        right = np.unique(factor_ring.mul(projected, factor.unitary.sigma(half)), axis=0).shape[0]
        if left != right:
            _logger.debug("Factor %d: halves of sizes %d and %d, module is not self-dual", factor.index, left, right)
            return False
    return True


def dual_split(module: PresentedModule, projection) -> tuple[PresentedModule, PresentedModule]:
    """
    Split P along a decomposition P* = U + U' of its realized dual.

    A row functional r and a column x pair through r x, so a projection Pi with E Pi = Pi E = Pi acts on
    both sides at once: U = {r Pi}, U' = {r (E - Pi)}, and the returned summands are the image and the
    kernel of Pi on P. U is then the annihilator of the second summand and U' the annihilator of the
    first one.
    """
    ring = module.ring
    k = module.rank
    projection = np.asarray(projection, dtype=np.int64)
    if projection.shape != (k, k):
        raise ShapeMismatchError((k, k), projection.shape)
    presentation = module.presentation
    if not (
        np.array_equal(mat_mul(ring, projection, projection), projection)
        and np.array_equal(mat_mul(ring, presentation, projection), projection)
        and np.array_equal(mat_mul(ring, projection, presentation), projection)
    ):
        raise NotADecompositionError("the projection is not an idempotent endomorphism of P")
    return PresentedModule(ring, projection), PresentedModule(ring, mat_sub(ring, presentation, projection))


def _exchange_halves(ur: UnitaryRing) -> tuple[int, int]:
    ring = ur.ring
    nontrivial = [int(e) for e in idempotents(ring) if e not in (0, ring.one)]
    if ring.order != 4 or len(nontrivial) != 2 or ur.sigma(nontrivial[0]) != nontrivial[1]:
        raise WrongFactorTypeError(f"{ur.describe()} is not F_2 x F_2 with the exchange involution")
    return nontrivial[0], nontrivial[1]


def dual_image_is_free(space: QuadraticSpace, v: Submodule) -> bool:
    """L_V(V) is isomorphic to A, for A = F_2 x F_2 with the exchange involution."""
    delta, _ = _exchange_halves(space.ur)
    ring = space.ring
    elements = v.elements()
    whole = np.unique(restricted_functionals(space, elements, v), axis=0).shape[0]
    half = np.unique(restricted_functionals(space, ring.mul(elements, delta), v), axis=0).shape[0]
    return whole == ring.order and half == 2


def f2f2_obstruction(space: QuadraticSpace, v: Submodule, x, z) -> bool:
    """
    Over F_2 x F_2 with the exchange involution and for h(x, z) = 1: True when no z' in V has
    h(x, z') = 1 and beta(z', z') in Lambda. In that case L_V(V) is free of rank one.
    """
    _exchange_halves(space.ur)
    ring = space.ring
    x = space.module.require(x)
    z = space.module.require(z)
    if not v.contains(z):
        raise DomainViolationError("z must lie in V")
    if space.h(x, z) != ring.one:
        raise DomainViolationError("h(x, z) must be 1")
    elements = v.elements()
    pairing = space.hs(np.broadcast_to(x, elements.shape), elements) == ring.one
    quadratic = space.ur.in_lambda(space.betas(elements, elements))
    obstructed = not bool(np.any(pairing & quadratic))
    if obstructed:
        assert dual_image_is_free(space, v), "L_V(V) is not free of rank one"
    return obstructed


def forbidden_vector(space: QuadraticSpace, v: Submodule, epsilon: int) -> np.ndarray | None:
    """Some z in V epsilon with h(z, z) = epsilon and [beta restricted to z-perp in V] = [0]."""
    ring = space.ring
    candidates = np.unique(ring.mul(v.elements(), epsilon), axis=0)
    for z in candidates:
        if space.h(z, z) != epsilon:
            continue
        if is_zero_class(space, orthogonal_elements(space, v, [z])):
            return z
    return None


def factor_conditions(
    component: FactorComponent, profile: FactorProfile, v_elements: np.ndarray, populated: bool
) -> FactorConditions:
    """
    (2a)-(2c) on one factor for V. A factor with Q_i = 0 takes no part in the induction and passes
    all three.
    """
    flags = FactorConditions(component.factor.index, profile.split_orthogonal, profile.corner_type, populated)
    if not populated:
        return flags
    space = component.space
    v_i = Submodule(space.ring, space.rank, np.unique(component.project(v_elements), axis=0))
    if profile.split_orthogonal:
        flags.c2a = not is_zero_class(space, v_i)
        if profile.corner_type is CornerType.F2:
            flags.c2b = not is_zero_class(space, orthogonal_elements(space, v_i, v_i.generators()))
    if profile.corner_type is CornerType.F2_SQUARED:
        z = forbidden_vector(space, v_i, component.factor.epsilon)
        if z is not None:
            flags.c2c = False
            flags.witness = _literals(space.ring, z)
    return flags


def onto_at_corner(component: FactorComponent, q_elements: np.ndarray, v_elements: np.ndarray) -> bool:
    """
    L_{Q_(i)}(V_(i)) = Q_(i)*. A_(i) is semisimple, so Q_(i)* has as many elements as Q_(i).
    """
    corner_space = component.corner_space
    q_corner = Submodule(corner_space.ring, corner_space.rank, np.unique(component.to_corner(q_elements), axis=0))
    v_corner = np.unique(component.to_corner(v_elements), axis=0)
    images = restricted_functionals(corner_space, v_corner, q_corner)
    return np.unique(images, axis=0).shape[0] == q_corner.size


def check_conditions(problem: ExtensionProblem) -> ConditionReport:
    space = problem.space
    ring = space.ring
    q, s, v = problem.q, problem.s, problem.v

    c1a = dual_is_covered(space, q, v) and dual_is_covered(space, s, v)
    witnesses = {}
    c1b = True
    generators = q.column_generators()
    differences = ring.sub(apply(ring, problem.psi, generators), generators)
    for generator, difference in zip(generators, differences):
        if not v.contains(difference):
            c1b = False
            witnesses["1b"] = _literals(ring, generator)
            break
    c1c = self_dual_check(space.ur, q) and self_dual_check(space.ur, s)

    report = ConditionReport(c1a, c1b, c1c, witnesses=witnesses)
    q_elements, s_elements, v_elements = q.elements(), s.elements(), v.elements()
    components = reduce_mod_radical(space).components
    for component, profile in zip(components, profiles_of(space.ur)):
        populated = bool(np.any(component.project(q_elements)))
        flags = factor_conditions(component, profile, v_elements, populated)
        if c1a and populated:
            flags.onto_preserved = onto_at_corner(component, q_elements, v_elements) and onto_at_corner(
                component, s_elements, v_elements
            )
        report.factors.append(flags)
    _logger.debug("Conditions: %s", report.failed() or "all pass")
    return report
