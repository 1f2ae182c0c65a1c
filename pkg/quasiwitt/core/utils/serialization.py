from dataclasses import dataclass
import json
import logging
import os

import numpy as np

from ..forms.module import PresentedModule
from ..forms.quadratic_space import QuadraticSpace
from ..reflections.quasi_reflection import QuasiReflection, make_reflection
from ..ring.constructors import build_ring
from ..ring.finite_ring import FiniteRing
from ..ring.linalg import identity
from ..ring.unitary_ring import UnitaryRing, lambda_from_spec, sigma_from_rule
from .errors import MalformedSpecError

_logger = logging.getLogger(__name__)


def dumps(document) -> str:
    """Byte-stable JSON text of a report."""
    return json.dumps(document, sort_keys=True, indent=2)


def load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as file:
            document = json.load(file)
    except OSError as error:
        raise MalformedSpecError("file", f"cannot read {path}: {error.strerror}")
    except json.JSONDecodeError as error:
        raise MalformedSpecError("file", f"{path} is not JSON: {error.msg} at line {error.lineno}")
    if not isinstance(document, dict):
        raise MalformedSpecError("file", f"{path} does not hold a JSON object")
    return document


def vector_literals(ring: FiniteRing, vector) -> list:
    return [ring.literal(int(a)) for a in np.asarray(vector)]


def matrix_literals(ring: FiniteRing, matrix) -> list:
    return [vector_literals(ring, row) for row in np.asarray(matrix)]


def parse_vector(ring: FiniteRing, literal, k: int) -> np.ndarray:
    if not isinstance(literal, list) or len(literal) != k:
        raise MalformedSpecError("vector", f"expected {k} element literals, found {literal!r}")
    return np.array([ring.parse(a) for a in literal], dtype=np.int64)


def parse_matrix(ring: FiniteRing, literal, rows: int, cols: int) -> np.ndarray:
    if not isinstance(literal, list) or len(literal) != rows:
        raise MalformedSpecError("matrix", f"expected {rows} rows, found {literal!r}")
    if rows == 0:
        return np.zeros((0, cols), dtype=np.int64)
    return np.stack([parse_vector(ring, row, cols) for row in literal])


@dataclass(frozen=True)
class RingParts:
    """The unvalidated pieces of a unitary ring document."""

    ring: FiniteRing
    sigma: np.ndarray
    u: int
    lam: np.ndarray
    generators: tuple

    def build(self) -> UnitaryRing:
        return UnitaryRing(self.ring, self.sigma, self.u, self.lam, generators=self.generators)


def _require(document: dict, key: str, what: str):
    if key not in document:
        raise MalformedSpecError(what, f"missing '{key}'")
    return document[key]


class DocumentReader:
    """
    Reads ring, space, summand, isometry and reflection documents.

    Rings are cached by file (or by content when given inline), so every document referring to the
    same ring gets the same UnitaryRing. Paths inside a document are relative to that document.
    """

    def __init__(self):
        self._rings = {}

    def ring_parts(self, document: dict) -> RingParts:
        if not isinstance(document, dict):
            raise MalformedSpecError("ring", f"{document!r} is not a ring document")
        ring = build_ring(_require(document, "ring", "ring"))
        sigma = sigma_from_rule(ring, document.get("sigma", "identity"))
        u = ring.parse(document["u"]) if "u" in document else ring.one
        lam, generators = lambda_from_spec(ring, sigma, u, document.get("lambda", "min"))
        return RingParts(ring, sigma, u, lam, generators)

    def unitary_ring(self, reference, base_dir: str = ".") -> UnitaryRing:
        """A unitary ring from a file path or an inline document."""
        if isinstance(reference, str):
            path = os.path.abspath(os.path.join(base_dir, reference))
            key = ("file", path)
            if key not in self._rings:
                self._rings[key] = self.ring_parts(load_json(path)).build()
                _logger.debug("Loaded unitary ring %s", path)
            return self._rings[key]
        key = ("inline", dumps(reference))
        if key not in self._rings:
            self._rings[key] = self.ring_parts(reference).build()
        return self._rings[key]

    def space_from_document(self, document: dict, base_dir: str = ".") -> QuadraticSpace:
        ur = self.unitary_ring(_require(document, "ring_ref", "space"), base_dir)
        ring = ur.ring
        k = _require(document, "rank", "space")
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise MalformedSpecError("space", f"rank must be a non-negative integer, found {k!r}")
        if "presentation" in document:
            presentation = parse_matrix(ring, document["presentation"], k, k)
        else:
            presentation = identity(ring, k)
        gram = parse_matrix(ring, _require(document, "gram", "space"), k, k)
        return QuadraticSpace(ur, PresentedModule(ring, presentation), gram)

    def space(self, path: str) -> QuadraticSpace:
        return self.space_from_document(load_json(path), os.path.dirname(os.path.abspath(path)))

    def summand(self, path: str, space: QuadraticSpace) -> PresentedModule:
        document = load_json(path)
        presentation = parse_matrix(space.ring, _require(document, "presentation", "summand"), space.rank, space.rank)
        return PresentedModule(space.ring, presentation)

    def isometry(self, path: str, rows: int, cols: int, ring: FiniteRing) -> np.ndarray:
        document = load_json(path)
        return parse_matrix(ring, _require(document, "matrix", "isometry"), rows, cols)

    def reflection(self, document: dict, space: QuadraticSpace) -> QuasiReflection:
        ring = space.ring
        y = parse_vector(ring, _require(document, "y", "reflection"), space.rank)
        e = ring.parse(_require(document, "e", "reflection"))
        c = ring.parse(document["c"]) if "c" in document else None
        return make_reflection(space, y, e, c)


def space_to_dict(space: QuadraticSpace) -> dict:
    ring = space.ring
    return {
        "rank": space.rank,
        "presentation": matrix_literals(ring, space.module.presentation),
        "gram": matrix_literals(ring, space.gram),
    }
