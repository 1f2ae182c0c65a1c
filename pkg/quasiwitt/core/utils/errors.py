class QuasiwittError(Exception):
    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        return self.message


class InputError(QuasiwittError):
    """Raised when the caller hands over data that does not meet an operation's preconditions."""


class MathematicalFailure(QuasiwittError):
    """Raised when a well-formed problem has no answer under the stated hypotheses."""


# input errors


class MalformedSpecError(InputError):
    def __init__(self, what: str, detail: str):
        self._what = what
        self._detail = detail
        super().__init__(f"Malformed {self._what}: {self._detail}")


class OversizeRingError(InputError):
    def __init__(self, order: int, bound: int):
        self._order = order
        self._bound = bound
        super().__init__(f"Ring of order {self._order} exceeds the configured bound {self._bound}")


class EnumerationBoundExceededError(InputError):
    def __init__(self, what: str, size: int, bound: int):
        self._what = what
        self._size = size
        self._bound = bound
        super().__init__(f"Enumerating {self._what} needs {self._size} candidates, bound is {self._bound}")


class InvalidUnitaryRingError(InputError):
    def __init__(self, violations: list):
        self.violations = violations
        super().__init__("Invalid unitary ring: " + "; ".join(str(v) for v in self.violations))


class NotInModuleError(InputError):
    def __init__(self, vector):
        self._vector = tuple(int(x) for x in vector)
        super().__init__(f"Vector {self._vector} is not an element of the module")


class ModuleMismatchError(InputError):
    def __init__(self):
        super().__init__("The two spaces are not defined on the same module")


class RingMismatchError(InputError):
    def __init__(self):
        super().__init__("The operands are defined over different unitary rings")


class ShapeMismatchError(InputError):
    def __init__(self, expected: tuple, found: tuple):
        self._expected = expected
        self._found = found
        super().__init__(f"Expected a matrix of shape {self._expected}, found {self._found}")


class DomainViolationError(InputError):
    def __init__(self, detail: str):
        self._detail = detail
        super().__init__(f"Domain violation: {self._detail}")


class NotAUnitError(InputError):
    def __init__(self, element: int):
        self._element = element
        super().__init__(f"Element {self._element} is not a unit")


class NotIdempotentModJError(InputError):
    def __init__(self, element: int):
        self._element = element
        super().__init__(f"Element {self._element} is not idempotent modulo the Jacobson radical")


class NotSymmetricIdempotentError(InputError):
    def __init__(self, element: int):
        self._element = element
        super().__init__(f"Idempotent {self._element} is not fixed by sigma")


class NotFullIdempotentError(InputError):
    def __init__(self, element: int):
        self._element = element
        super().__init__(f"Idempotent {self._element} generates a proper two-sided ideal")


class NotASummandError(InputError):
    def __init__(self, detail: str):
        self._detail = detail
        super().__init__(f"Not a summand: {self._detail}")


class NotADecompositionError(InputError):
    def __init__(self, detail: str):
        self._detail = detail
        super().__init__(f"Not a direct sum decomposition: {self._detail}")


class InvalidCError(InputError):
    def __init__(self, element: int, detail: str):
        self._element = element
        self._detail = detail
        super().__init__(f"Invalid reflection coefficient {self._element}: {self._detail}")


class NotEFInvertibleError(InputError):
    def __init__(self, element: int, e: int, f: int):
        self._element = element
        self._e = e
        self._f = f
        super().__init__(f"Element {self._element} is not ({self._e},{self._f})-invertible")


class IdempotentsNotOrthogonalError(InputError):
    def __init__(self, e: int, f: int):
        self._e = e
        self._f = f
        super().__init__(f"Idempotents {self._e} and {self._f} are not orthogonal")


# mathematical failures


class ConditionViolationError(MathematicalFailure):
    def __init__(self, report):
        self.report = report
        super().__init__("Extension conditions violated: " + ", ".join(self.report.failed()))


class PreconditionViolationError(MathematicalFailure):
    def __init__(self, detail: str):
        self._detail = detail
        super().__init__(f"Precondition violated: {self._detail}")


class NotUnimodularError(MathematicalFailure):
    def __init__(self):
        super().__init__("The quadratic space is not unimodular")


class NotUnimodularBaseError(MathematicalFailure):
    def __init__(self):
        super().__init__("The base space of the cancellation is not unimodular")


class NotSplitOrthogonalError(MathematicalFailure):
    def __init__(self, index: int):
        self._index = index
        super().__init__(f"Factor {self._index} is not split-orthogonal")


class HypothesisViolationError(MathematicalFailure):
    def __init__(self, index: int, detail: str):
        self.index = index
        self._detail = detail
        super().__init__(f"Hypothesis violated on factor {self.index}: {self._detail}")


class WrongFactorTypeError(MathematicalFailure):
    def __init__(self, detail: str):
        self._detail = detail
        super().__init__(f"Wrong factor type: {self._detail}")


class NoTransvectionFoundError(MathematicalFailure):
    def __init__(self):
        super().__init__("No pair of quasi-reflections sends x to y")


class SearchExhaustedError(MathematicalFailure):
    def __init__(self, what: str):
        self._what = what
        super().__init__(f"Exhaustive search for {self._what} found nothing")
