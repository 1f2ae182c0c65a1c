from dataclasses import dataclass, field
import itertools
import logging

import numpy as np
import pandas as pd

from ..dickson.subgroup import is_exceptional_f2_corner, reflection_subgroup
from ..forms.quadratic_space import QuadraticSpace, is_unimodular
from ..ring.constructors import build_ring
from ..ring.unitary_ring import UnitaryRing
from ..utils.errors import HypothesisViolationError
from .enumeration import enumerate_isometries, find_isometry
from .verification import reflection_group

_logger = logging.getLogger(__name__)


def f2_quadratic_ring() -> UnitaryRing:
    """(F_2, id, 1, {0})."""
    ring = build_ring({"field": 2})
    return UnitaryRing(ring, ring.elements(), ring.one, [0])


def upper_triangular_grams(k: int):
    """
    Over (F_2, id, 1, {0}) the Lambda-forms are the alternating matrices, so every class holds
    exactly one upper triangular Gram matrix.
    """
    positions = [(i, j) for i in range(k) for j in range(i, k)]
    for bits in itertools.product((0, 1), repeat=len(positions)):
        gram = np.zeros((k, k), dtype=np.int64)
        for (i, j), bit in zip(positions, bits):
            gram[i, j] = bit
        yield gram


@dataclass
class SweepReport:
    """
    Isometry classes of unimodular quadratic spaces over (F_2, id, 1, {0}) of one rank.

    Attributes:
        rank (int): Rank of the free module.
        spaces (int): Unimodular Gram classes seen.
        classes (list[dict]): One record per isometry class, with its first Gram matrix, |O|, |O'|
            and whether the subgroup prediction refuses it.
    """

    rank: int
    spaces: int = 0
    classes: list = field(default_factory=list)

    @property
    def proper(self) -> list[dict]:
        """Classes whose reflections generate a proper subgroup of O."""
        return [entry for entry in self.classes if entry["generated_order"] < entry["order"]]

    def summary(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.classes, columns=["members", "order", "generated_order", "exceptional", "hypothesis_violation"])
        frame.index.name = "class"
        return frame

    def to_dict(self) -> dict:
        return {"rank": self.rank, "spaces": self.spaces, "classes": self.classes, "proper": len(self.proper)}


def f2_exception_sweep(rank: int = 4) -> SweepReport:
    """
    Sort every unimodular quadratic space of the given rank over F_2 into isometry classes, then count
    O and the subgroup generated by reflections once per class.
    """
    ur = f2_quadratic_ring()
    report = SweepReport(rank)
    representatives = []
    for gram in upper_triangular_grams(rank):
        space = QuadraticSpace.free(ur, gram)
        if not is_unimodular(space):
            continue
        report.spaces += 1
        for index, representative in enumerate(representatives):
            if find_isometry(space, representative) is not None:
                report.classes[index]["members"] += 1
                break
        else:
            representatives.append(space)
            report.classes.append(_class_record(space))
    _logger.info("%d unimodular spaces of rank %d in %d classes, %d with O' != O", report.spaces, rank, len(report.classes), len(report.proper))
    return report


def _class_record(space: QuadraticSpace) -> dict:
    whole = enumerate_isometries(space)
    generated = reflection_group(space)
    try:
        reflection_subgroup(space)
        refused = False
    except HypothesisViolationError:
        refused = True
    return {
        "gram": [[int(a) for a in row] for row in space.gram],
        "members": 1,
        "order": whole.order,
        "generated_order": generated.order,
        "exceptional": is_exceptional_f2_corner(space),
        "hypothesis_violation": refused,
    }
