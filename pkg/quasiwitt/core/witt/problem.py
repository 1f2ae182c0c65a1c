from dataclasses import dataclass, field

import numpy as np

from ..forms.module import PresentedModule
from ..forms.quadratic_space import QuadraticSpace, check_isometry, maps_agree_on, module_map_on, restrict
from ..utils.constants import CornerType, Route
from ..utils.errors import DomainViolationError, ShapeMismatchError


@dataclass(frozen=True)
class ExtensionProblem:
    """
    An isometry psi: (Q, [beta|Q]) -> (S, [beta|S]) between summands of P, to be extended to P using
    reflections taken with respect to elements of V.

    Attributes:
        space (QuadraticSpace): (P, [beta]).
        q (PresentedModule): Domain summand of psi.
        s (PresentedModule): Target summand of psi.
        v (PresentedModule): Summand holding the reflection vectors.
        psi (np.ndarray): k x k matrix acting as psi on Q and as zero on its complement.
    """

    space: QuadraticSpace
    q: PresentedModule
    s: PresentedModule
    v: PresentedModule
    psi: np.ndarray

    def __post_init__(self):
        k = self.space.rank
        psi = np.asarray(self.psi, dtype=np.int64)
        if psi.shape != (k, k):
            raise ShapeMismatchError((k, k), psi.shape)
        restricted_q = restrict(self.space, self.q)
        restricted_s = restrict(self.space, self.s)
        restrict(self.space, self.v)
        psi = module_map_on(self.space.ring, psi, self.q)
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        if not check_isometry(psi, restricted_q, restricted_s):
            raise DomainViolationError("psi is not an isometry between the restrictions of beta to Q and S")

    @classmethod
    def on_whole_space(cls, space: QuadraticSpace, psi) -> "ExtensionProblem":
        """Q = S = V = P."""
        return cls(space, space.module, space.module, space.module, psi)

    def with_reflection_summand(self, v: PresentedModule) -> "ExtensionProblem":
        return ExtensionProblem(self.space, self.q, self.s, v, self.psi)


@dataclass
class FactorConditions:
    """Conditions (2a)-(2c) on one simple factor, plus the corner image of (1a)."""

    index: int
    split_orthogonal: bool
    corner_type: CornerType
    populated: bool
    c2a: bool = True
    c2b: bool = True
    c2c: bool = True
    onto_preserved: bool = True
    witness: list | None = None

    def failed(self) -> list[str]:
        names = []
        for name, flag in (("2a", self.c2a), ("2b", self.c2b), ("2c", self.c2c)):
            if not flag:
                names.append(f"{name}[{self.index}]")
        if not self.onto_preserved:
            names.append(f"onto-preserved[{self.index}]")
        return names

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "split_orthogonal": self.split_orthogonal,
            "corner": self.corner_type.value,
            "populated": self.populated,
            "2a": self.c2a,
            "2b": self.c2b,
            "2c": self.c2c,
            "onto_preserved": self.onto_preserved,
            "witness": self.witness,
        }


@dataclass
class ConditionReport:
    """
    Flags of the extension conditions. Witnesses are element literals of a failing instance.
    """

    c1a: bool
    c1b: bool
    c1c: bool
    factors: list[FactorConditions] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    def failed(self) -> list[str]:
        names = [name for name, flag in (("1a", self.c1a), ("1b", self.c1b), ("1c", self.c1c)) if not flag]
        for factor in self.factors:
            names.extend(factor.failed())
        return names

    @property
    def all_pass(self) -> bool:
        return not self.failed()

    def to_dict(self) -> dict:
        return {
            "1a": self.c1a,
            "1b": self.c1b,
            "1c": self.c1c,
            "factors": [factor.to_dict() for factor in self.factors],
            "witnesses": self.witnesses,
            "failed": self.failed(),
        }


@dataclass(frozen=True)
class ExtensionResult:
    """
    phi in O(P, [beta]) with phi|Q = psi.

    factors is the quasi-reflection factorization read as a product left to right (the last factor is
    applied first); it is None on the augmented route.
    """

    space: QuadraticSpace
    phi: np.ndarray
    factors: tuple | None
    route: Route

    def verify(self, problem: ExtensionProblem) -> bool:
        ring = self.space.ring
        if not check_isometry(self.phi, self.space, self.space):
            return False
        if not maps_agree_on(ring, self.phi, problem.psi, problem.q):
            return False
        if self.factors is not None:
            return all(problem.v.contains(reflection.y) for reflection in self.factors)
        return True

    def to_dict(self) -> dict:
        ring = self.space.ring
        document = {
            "phi": [[ring.literal(int(a)) for a in row] for row in self.phi],
            "route": self.route.value,
        }
        if self.factors is not None:
            document["factors"] = [reflection.to_dict() for reflection in self.factors]
        return document

