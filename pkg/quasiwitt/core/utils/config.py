from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, replace
import logging

from . import constants
from .errors import EnumerationBoundExceededError, OversizeRingError

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bounds:
    """
    Caps applied by every exhaustive routine.

    Attributes:
        ring_order (int): Largest ring order accepted by build_ring and the radical computations.
        enumeration (int): Largest number of vectors (module elements, dual rows) enumerated at once.
        candidates (int): Largest number of candidate matrices the oracle may consider before pruning.
    """

    ring_order: int = constants.max_ring_order
    enumeration: int = constants.max_enumeration
    candidates: int = constants.max_candidates

    def to_dict(self) -> dict:
        return {"ring_order": self.ring_order, "enumeration": self.enumeration, "candidates": self.candidates}


_active_bounds: ContextVar[Bounds] = ContextVar("quasiwitt_bounds", default=Bounds())


def current_bounds() -> Bounds:
    return _active_bounds.get()


@contextmanager
def bounds_override(**overrides):
    """
    Temporarily replace some of the active bounds.

    :param overrides: keyword arguments matching the fields of Bounds; None values are ignored
    """
    overrides = {key: value for key, value in overrides.items() if value is not None}
    token = _active_bounds.set(replace(_active_bounds.get(), **overrides))
    _logger.debug("Bounds set to %s", _active_bounds.get())
    try:
        yield _active_bounds.get()
    finally:
        _active_bounds.reset(token)


def check_ring_order(order: int) -> None:
    bound = current_bounds().ring_order
    if order > bound:
        raise OversizeRingError(order, bound)


def check_enumeration(what: str, size: int) -> None:
    bound = current_bounds().enumeration
    if size > bound:
        raise EnumerationBoundExceededError(what, size, bound)


def check_candidates(what: str, size: int) -> None:
    bound = current_bounds().candidates
    if size > bound:
        raise EnumerationBoundExceededError(what, size, bound)
