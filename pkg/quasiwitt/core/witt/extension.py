from dataclasses import dataclass
import logging

import numpy as np

from ..dickson.classification import profiles_of
from ..forms.module import PresentedModule, Submodule, span
from ..forms.quadratic_space import QuadraticSpace, is_unimodular, orthogonal_elements, restrict
from ..forms.reduction import reduce_mod_radical
from ..reflections.quasi_reflection import QuasiReflection, inverse, product_matrix
from ..reflections.transvection import (
    ef_inverse_table,
    reflection_data,
    single_transvection,
    transvect_to,
    two_step_transvection,
)
from ..ring.factors import SimpleFactorData, factors_of
from ..ring.linalg import apply, mat_mul, row_apply
from ..ring.radical import radical_quotient
from ..utils.constants import CornerType, Route
from ..utils.errors import (
    ConditionViolationError,
    DomainViolationError,
    NoTransvectionFoundError,
    PreconditionViolationError,
    SearchExhaustedError,
)
from .augmentation import augment_hyperbolic, augment_rank_two
from .conditions import check_conditions, dual_split, f2f2_obstruction, factor_conditions
from .problem import ConditionReport, ExtensionProblem, ExtensionResult

_logger = logging.getLogger(__name__)


def _fixed_by(ring, elements: np.ndarray, e: int) -> np.ndarray:
    return elements[np.all(ring.mul(elements, e) == elements, axis=1)]


def apply_product(reflections, vector) -> np.ndarray:
    """r_1 r_2 ... r_m applied to a vector, r_m first."""
    for reflection in reversed(list(reflections)):
        vector = reflection(vector)
    return vector


def apply_inverse_product(reflections, vector) -> np.ndarray:
    for reflection in reflections:
        vector = inverse(reflection)(vector)
    return vector


def _reflection_at(space: QuadraticSpace, data, index: int, e: int) -> QuasiReflection:
    z, c, c_inverse = data
    return QuasiReflection(space, z[index].copy(), int(e), int(c[index]), int(c_inverse[index]))


def _images(space: QuadraticSpace, data, vector) -> np.ndarray:
    """s_{z,e,c}(vector) for every datum, as rows."""
    ring = space.ring
    z, _, c_inverse = data
    towards = space.hs(z, np.broadcast_to(vector, z.shape))
    return np.asarray(ring.sub(vector[None, :], ring.mul(z, ring.mul(c_inverse, towards)[:, None])), dtype=np.int64)


def _finish(space: QuadraticSpace, x, y, e: int, v: Submodule, data, inverses) -> list[QuasiReflection] | None:
    if np.array_equal(x, y):
        return []
    single = single_transvection(space, x, y, e)
    if single is not None and v.contains(single.y):
        return [single]
    return two_step_transvection(space, x, y, e, data, inverses, within=v)


def reflections_sending(space: QuadraticSpace, x, y, e: int, v: Submodule) -> list[QuasiReflection]:
    """
    A product of e-reflections taken with respect to elements of V that sends x to y.

    The single reflection s_{x-y,e,h(x-y,x)} is tried first, then s_{w,e,Phi(z,c)} s_{z,e,c} for the
    first (z, c) with Phi(z, c) invertible. When neither exists (the F_2 x F_2 case), one or two
    e-reflections s_{f,e,c} s_{g,e,d} with respect to V bring x to y modulo J first, and the two
    previous steps are run from there.
    """
    if np.array_equal(x, y):
        return []
    try:
        return transvect_to(space, x, y, e, within=v)
    except NoTransvectionFoundError:
        pass

    inverses = ef_inverse_table(space, e)
    data = reflection_data(space, e, v.elements(), inverses)
    nonzero = data[0].any(axis=1)
    prefixes = tuple(part[nonzero] for part in data)
    quotient = radical_quotient(space.ring)
    target = quotient.reduce(y)
    _logger.debug("No transvection, trying %d prefix reflections", prefixes[0].shape[0])
    for index in range(prefixes[0].shape[0]):
        first = _reflection_at(space, prefixes, index, e)
        once = first(x)
        moved = np.vstack([once[None, :], _images(space, prefixes, once)])
        for position in np.flatnonzero(np.all(quotient.reduce(moved) == target, axis=1)):
            prefix = [first] if position == 0 else [_reflection_at(space, prefixes, position - 1, e), first]
            tail = _finish(space, moved[position], y, e, v, data, inverses)
            if tail is not None:
                _logger.debug("Reached x = y modulo J with %d prefix reflections", len(prefix))
                return tail + prefix
    raise SearchExhaustedError("e-reflections with respect to V sending x to psi x")


@dataclass(frozen=True)
class InductionStep:
    """
    One split Q = xA + Q'' with V' = v'A, where Q'' is the kernel of h(v', .) on Q.

    Attributes:
        factor_index (int): Simple factor whose idempotent e gives Q' = xA, isomorphic to eA.
        e (int): The idempotent.
        x (np.ndarray): Generator of Q'.
        v_prime (np.ndarray): Generator of V'.
        rest (PresentedModule): Q''.
        v_local (Submodule): V' + R = {z in V : h(z, Q'') = 0}.
        conditions_hold (bool): (2a)-(2c) hold for V' + R.
    """

    factor_index: int
    e: int
    x: np.ndarray
    v_prime: np.ndarray
    rest: PresentedModule
    v_local: Submodule
    conditions_hold: bool


class _Induction:
    """
    Search state of one Witt-I run. V is fixed for the whole run, so extensions found for a
    summand of Q are cached by the summand's elements, and so are summands without one.
    """

    def __init__(self, problem: ExtensionProblem):
        self.problem = problem
        self.space = problem.space
        self.v = problem.v
        self.components = reduce_mod_radical(problem.space).components
        self.profiles = profiles_of(problem.space.ur)
        self.factors = factors_of(problem.space.ur)
        self._solved = {}

    def step_conditions_hold(self, index: int, v: Submodule) -> bool:
        flags = factor_conditions(self.components[index], self.profiles[index], v.elements(), populated=True)
        return not flags.failed()

    def _is_exchange_f2(self, factor: SimpleFactorData) -> bool:
        return self.profiles[factor.index].corner_type is CornerType.F2_SQUARED and self.space.ring.order == 4

    def candidates(self, q: PresentedModule, factor: SimpleFactorData) -> np.ndarray:
        """
        Generators v' of V' in V = W + R, where R = {z in V : h(z, Q) = 0}.

        Elements of R are dropped since they pair trivially with Q. The remaining ones are ordered
        with the witnesses of the factor's branch first: beta-hat(z) = Lambda over F_2 x F_2,
        beta-hat(z) != Lambda in V and V-perp over F_2, beta-hat(z) != Lambda for the other
        split-orthogonal factors.
        """
        space = self.space
        ring = space.ring
        r = orthogonal_elements(space, self.v, q.column_generators())
        candidates = _fixed_by(ring, self.v.elements(), factor.e)
        candidates = candidates[np.array([not r.contains(z) for z in candidates], dtype=bool).reshape(-1)]
        if candidates.shape[0] == 0:
            return candidates
        profile = self.profiles[factor.index]
        outside = ~np.asarray(space.ur.in_lambda(space.betas(candidates, candidates)), dtype=bool)
        if profile.corner_type is CornerType.F2_SQUARED:
            witness = ~outside
        elif profile.corner_type is CornerType.F2 and profile.split_orthogonal:
            radical = orthogonal_elements(space, self.v, self.v.generators())
            witness = outside & np.array([radical.contains(z) for z in candidates], dtype=bool)
        elif profile.split_orthogonal:
            witness = outside
        else:
            witness = np.zeros(candidates.shape[0], dtype=bool)
        _logger.debug("R has %d elements, %d of %d candidates for V' are witnesses", r.size, int(witness.sum()), candidates.shape[0])
        return candidates[np.argsort(~witness, kind="stable")]

    def heads(self, q: PresentedModule, factor: SimpleFactorData) -> np.ndarray:
        """Nonzero x in Q with x e = x; over F_2 x F_2, those obstructed in V come last."""
        space = self.space
        heads = _fixed_by(space.ring, q.elements(), factor.e)
        heads = heads[heads.any(axis=1)]
        if not self._is_exchange_f2(factor) or heads.shape[0] == 0:
            return heads
        v_elements = self.v.elements()
        obstructed = np.zeros(heads.shape[0], dtype=bool)
        for index, x in enumerate(heads):
            partners = v_elements[space.hs(np.broadcast_to(x, v_elements.shape), v_elements) == space.ring.one]
            obstructed[index] = partners.shape[0] == 0 or f2f2_obstruction(space, self.v, x, partners[0])
        return heads[np.argsort(obstructed, kind="stable")]

    def steps(self, q: PresentedModule):
        """Every split of Q by a cyclic V', once per Q''."""
        space = self.space
        ring = space.ring
        q_elements = q.elements()
        for factor in self.factors:
            e = factor.e
            heads = self.heads(q, factor)
            candidates = self.candidates(q, factor)
            if heads.shape[0] == 0 or candidates.shape[0] == 0:
                continue
            inverses = ef_inverse_table(space, e)
            functionals = space.functionals(candidates)
            pairings = row_apply(ring, functionals, heads.T)
            kernels = row_apply(ring, functionals, q_elements.T) == 0
            seen = set()
            for v_prime, functional, row, kernel in zip(candidates, functionals, pairings, kernels):
                usable = np.flatnonzero(inverses[row] >= 0)
                if usable.size == 0:
                    continue
                key = kernel.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                x = heads[usable[0]]
                # projection x c' h(v', .) onto xA along Q''
                scaled = ring.mul(int(inverses[row[usable[0]]]), functional)
                projection = mat_mul(ring, ring.mul(x[:, None], scaled[None, :]), q.presentation)
                _, rest = dual_split(q, projection)
                v_local = orthogonal_elements(space, self.v, rest.column_generators())
                yield InductionStep(factor.index, e, x, v_prime, rest, v_local, self.step_conditions_hold(factor.index, v_local))

    def extend(self, q: PresentedModule) -> list[QuasiReflection]:
        key = q.elements().tobytes()
        if key not in self._solved:
            self._solved[key] = self._extend(q)
        if self._solved[key] is None:
            raise SearchExhaustedError("a cyclic summand of Q matched by a summand of V")
        return self._solved[key]

    def _attempt(self, step: InductionStep) -> list[QuasiReflection] | None:
        space = self.space
        try:
            outer = self.extend(step.rest)
        except SearchExhaustedError:
            return None
        target = apply(space.ring, self.problem.psi, step.x[None, :])[0]
        y = apply_inverse_product(outer, target)
        try:
            inner = reflections_sending(space, step.x, y, step.e, step.v_local)
        except SearchExhaustedError:
            _logger.debug("No reflections in V' + R for the cyclic summand through %s", step.x.tolist())
            return None
        _logger.debug(
            "Cyclic summand %s (factor %d) needs %d reflections, Q'' has %d elements",
            step.x.tolist(),
            step.factor_index,
            len(inner),
            step.rest.size,
        )
        return outer + inner

    def _extend(self, q: PresentedModule) -> list[QuasiReflection] | None:
        if q.is_zero():
            return []
        deferred = []
        for step in self.steps(q):
            if not step.conditions_hold:
                deferred.append(step)
                continue
            found = self._attempt(step)
            if found is not None:
                return found
        if deferred:
            _logger.debug("No V' keeping (2a)-(2c) works, trying the %d remaining splits", len(deferred))
        for step in deferred:
            found = self._attempt(step)
            if found is not None:
                return found
        return None


def _require_conditions(problem: ExtensionProblem, report: ConditionReport | None) -> ConditionReport:
    report = check_conditions(problem) if report is None else report
    if not report.all_pass:
        raise ConditionViolationError(report)
    return report


def _factorized(problem: ExtensionProblem, reflections) -> ExtensionResult:
    space = problem.space
    result = ExtensionResult(space, product_matrix(space, reflections), tuple(reflections), Route.WITT_I)
    if not result.verify(problem):
        raise SearchExhaustedError("a product of quasi-reflections restricting to psi")
    return result


def extend_cyclic(problem: ExtensionProblem, factor_index: int | None = None, report: ConditionReport | None = None) -> ExtensionResult:
    """
    Extend psi when Q is isomorphic to e_i A, as a product of e_i-reflections taken with respect to
    elements of V.
    """
    _require_conditions(problem, report)
    space = problem.space
    ring = space.ring
    k = space.rank
    factors = factors_of(space.ur)
    if factor_index is not None:
        factors = [factors[factor_index]]
    q = problem.q
    for factor in factors:
        e = factor.e
        if np.unique(ring.mul(e, ring.elements())).size != q.size:
            continue
        for x in _fixed_by(ring, q.elements(), e):
            if span(ring, k, [x]).shape[0] != q.size:
                continue
            y = apply(ring, problem.psi, x[None, :])[0]
            reflections = reflections_sending(space, x, y, e, problem.v)
            _logger.info("Cyclic extension through factor %d with %d reflections", factor.index, len(reflections))
            return _factorized(problem, reflections)
    raise DomainViolationError("Q is not isomorphic to e_i A for any of the primitive idempotents e_i")


def extend_with_reflections(problem: ExtensionProblem, report: ConditionReport | None = None) -> ExtensionResult:
    """
    Extend psi to phi in O(P, [beta]) as a product of quasi-reflections taken with respect to elements
    of V.

    Q is peeled one cyclic summand Q' = xA at a time. A cyclic V' = v'A with h(v', x) invertible
    splits Q = Q' + Q'' through the projection x c' h(v', .), Q'' is handled first with all of V,
    and the cyclic step finishes with reflections taken in V' + R = {z in V : h(z, Q'') = 0}.
    Splits for which (2a)-(2c) hold on V' + R are tried before the others.
    """
    _require_conditions(problem, report)
    reflections = _Induction(problem).extend(problem.q)
    result = _factorized(problem, reflections)
    _logger.info("Extension as a product of %d quasi-reflections", len(reflections))
    return result


def factorize_isometry(space: QuadraticSpace, psi) -> ExtensionResult:
    """psi in O(P, [beta]) written as a product of quasi-reflections."""
    return extend_with_reflections(ExtensionProblem.on_whole_space(space, psi))


def _extend_augmented(problem: ExtensionProblem, report: ConditionReport) -> ExtensionResult:
    space = problem.space
    ring = space.ring
    k = space.rank
    work = problem
    if not report.c1c:
        work = augment_hyperbolic(work)
    work = augment_rank_two(work)
    enlarged = extend_with_reflections(work).phi
    # the extension fixes z (and U), so P lands in P + zA (+ U) and the P block is an isometry
    phi = mat_mul(ring, enlarged[:k, :k], space.module.presentation)
    result = ExtensionResult(space, phi, None, Route.WITT_II_AUGMENTED)
    if not result.verify(problem):
        raise SearchExhaustedError("an augmented extension restricting to psi")
    return result


def extend(problem: ExtensionProblem, unimodular: bool = False) -> ExtensionResult:
    """
    Extend psi to phi in O(P, [beta]) with phi x - x in V.

    Args:
        problem: Q, S, V and psi.
        unimodular: Replace V by P, which needs P or Q to be unimodular.

    Returns:
        The factorized extension when every condition holds, else the augmented one. A search
        exhausted under satisfied conditions is raised, not routed around.
    """
    if unimodular:
        if not (is_unimodular(problem.space) or is_unimodular(restrict(problem.space, problem.q))):
            raise PreconditionViolationError("neither P nor Q is unimodular")
        problem = problem.with_reflection_summand(problem.space.module)
    report = check_conditions(problem)
    missing = [name for name, flag in (("1a", report.c1a), ("1b", report.c1b)) if not flag]
    if missing:
        raise PreconditionViolationError(f"condition {' and '.join(missing)} fails")
    if report.all_pass:
        result = extend_with_reflections(problem, report)
        _logger.info("Route %s", Route.WITT_I.value)
        return result
    _logger.info("Conditions %s fail, augmenting", ", ".join(report.failed()))
    result = _extend_augmented(problem, report)
    _logger.info("Route %s", Route.WITT_II_AUGMENTED.value)
    return result
