from abc import ABC, abstractmethod
import logging
import threading

import numpy as np

from ..utils import constants
from ..utils.errors import DomainViolationError, MalformedSpecError

_logger = logging.getLogger(__name__)


def _to_digits(codes: np.ndarray, radices: list[int]) -> np.ndarray:
    """
    Split codes into mixed-radix digits, first digit most significant.

    :param codes: integer array of shape (N,)
    :param radices: radix of each digit
    :return: array of shape (N, len(radices))
    """
    codes = np.asarray(codes, dtype=np.int64).copy()
    digits = np.zeros((codes.shape[0], len(radices)), dtype=np.int64)
    for position in range(len(radices) - 1, -1, -1):
        digits[:, position] = codes % radices[position]
        codes //= radices[position]
    return digits


def _from_digits(digits: np.ndarray, radices: list[int]) -> np.ndarray:
    codes = np.zeros(digits.shape[0], dtype=np.int64)
    for position, radix in enumerate(radices):
        codes = codes * radix + digits[:, position]
    return codes


class FiniteRing(ABC):
    """
    A finite unital ring whose elements are the integers 0..order-1.

    The encoding is canonical for each constructor: residues are their value,
    polynomials are ordered lexicographically on their coefficient vector
    (constant term first), matrices row-major, products left to right. The zero
    element is always encoded by 0.

    Subclasses implement the vectorized primitives _add_v, _mul_v and _neg_v on
    int64 arrays of equal shape. When the order is at most
    constants.max_table_order the full addition and multiplication tables are
    installed and every operation becomes a table lookup.
    """

    def __init__(self, order: int, one: int):
        self._order = int(order)
        self._one = int(one)
        self._add_table = None
        self._mul_table = None
        self._neg_table = None
        self._lock = threading.RLock()
        self._cache = {}

    def _install_tables(self) -> None:
        if self._order > constants.max_table_order:
            _logger.debug("Ring %s too large for tables (%d elements)", self.describe(), self._order)
            return
        rows, cols = np.meshgrid(np.arange(self._order), np.arange(self._order), indexing="ij")
        self._add_table = self._add_v(rows.ravel(), cols.ravel()).reshape(self._order, self._order)
        self._mul_table = self._mul_v(rows.ravel(), cols.ravel()).reshape(self._order, self._order)
        self._neg_table = self._neg_v(np.arange(self._order))

    @property
    def order(self) -> int:
        return self._order

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return self._one

    @property
    def has_tables(self) -> bool:
        return self._mul_table is not None

    def elements(self) -> np.ndarray:
        return np.arange(self._order, dtype=np.int64)

    @abstractmethod
    def _add_v(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def _mul_v(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def _neg_v(self, a: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def parse(self, literal) -> int:
        """Convert a JSON element literal into its code."""

    @abstractmethod
    def literal(self, code: int):
        """Convert a code into its JSON element literal."""

    @abstractmethod
    def describe(self) -> str:
        pass

    @staticmethod
    def _binary(function, a, b):
        scalar = np.isscalar(a) and np.isscalar(b)
        a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        result = function(a_arr.ravel(), b_arr.ravel()).reshape(a_arr.shape)
        return int(result) if scalar else result

    def add(self, a, b):
        if self._add_table is not None:
            result = self._add_table[a, b]
            return result if isinstance(result, np.ndarray) else int(result)
        return self._binary(self._add_v, a, b)

    def mul(self, a, b):
        if self._mul_table is not None:
            result = self._mul_table[a, b]
            return result if isinstance(result, np.ndarray) else int(result)
        return self._binary(self._mul_v, a, b)

    def neg(self, a):
        if self._neg_table is not None:
            result = self._neg_table[a]
            return result if isinstance(result, np.ndarray) else int(result)
        if np.isscalar(a):
            return int(self._neg_v(np.array([a], dtype=np.int64))[0])
        a_arr = np.asarray(a, dtype=np.int64)
        return self._neg_v(a_arr.ravel()).reshape(a_arr.shape)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def _memo(self, key: str, builder):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = builder()
            return self._cache[key]

    def _compute_inverses(self) -> np.ndarray:
        inverses = np.full(self._order, -1, dtype=np.int64)
        everything = self.elements()
        for a in range(self._order):
            products = self.mul(a, everything)
            hits = np.flatnonzero(products == self._one)
            if hits.size:
                inverses[a] = hits[0]
        return inverses

    @property
    def inverse_table(self) -> np.ndarray:
        """Two-sided inverse of every unit, -1 for non-units (one-sided inverses are two-sided in a finite ring)."""
        return self._memo("inverses", self._compute_inverses)

    @property
    def unit_mask(self) -> np.ndarray:
        return self._memo("units", lambda: self.inverse_table >= 0)

    def units(self) -> np.ndarray:
        return np.flatnonzero(self.unit_mask)

    def is_unit(self, a: int) -> bool:
        return bool(self.unit_mask[a])

    def inverse(self, a: int) -> int | None:
        inverse = int(self.inverse_table[a])
        return inverse if inverse >= 0 else None

    def power(self, a, exponent: int):
        result = np.full(np.shape(a), self._one, dtype=np.int64) if not np.isscalar(a) else self._one
        base = a
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def is_commutative(self) -> bool:
        def check():
            everything = self.elements()
            rows, cols = np.meshgrid(everything, everything, indexing="ij")
            return bool(np.array_equal(self.mul(rows, cols), self.mul(cols, rows)))

        return self._memo("commutative", check)

    def characteristic(self) -> int:
        total, count = self._one, 1
        while total != 0:
            total = self.add(total, self._one)
            count += 1
        return count

    def __repr__(self):
        return f"<{type(self).__name__} {self.describe()} |A|={self._order}>"


class ResidueRing(FiniteRing):
    """Z/m"""

    def __init__(self, modulus: int):
        if modulus < 1:
            raise MalformedSpecError("ring", f"residue modulus must be positive, got {modulus}")
        self.modulus = int(modulus)
        super().__init__(self.modulus, 1 % self.modulus)
        self._install_tables()

    def _add_v(self, a, b):
        return (a + b) % self.modulus

    def _mul_v(self, a, b):
        return (a * b) % self.modulus

    def _neg_v(self, a):
        return (-a) % self.modulus

    def parse(self, literal) -> int:
        if isinstance(literal, bool) or not isinstance(literal, int):
            raise MalformedSpecError("element", f"{literal!r} is not a residue of Z/{self.modulus}")
        return literal % self.modulus

    def literal(self, code: int):
        return int(code)

    def describe(self) -> str:
        return f"Z/{self.modulus}"


class GaloisField(FiniteRing):
    """
    GF(p^k) presented as F_p[x]/(m(x)) with m monic irreducible of degree k.
    """

    def __init__(self, prime: int, modulus: list[int]):
        self.prime = int(prime)
        self.modulus = np.array([c % self.prime for c in modulus], dtype=np.int64)
        self.degree = len(modulus) - 1
        if self.degree < 1 or self.modulus[-1] != 1:
            raise MalformedSpecError("ring", f"field modulus {modulus} must be monic of positive degree")
        self._radices = [self.prime] * self.degree
        one = _from_digits(np.array([[1] + [0] * (self.degree - 1)]), self._radices)[0]
        super().__init__(self.prime**self.degree, one)
        self._install_tables()

    def coefficients(self, codes) -> np.ndarray:
        return _to_digits(np.atleast_1d(codes), self._radices)

    def _add_v(self, a, b):
        return _from_digits((self.coefficients(a) + self.coefficients(b)) % self.prime, self._radices)

    def _neg_v(self, a):
        return _from_digits((-self.coefficients(a)) % self.prime, self._radices)

    def _mul_v(self, a, b):
        left, right = self.coefficients(a), self.coefficients(b)
        k = self.degree
        product = np.zeros((left.shape[0], 2 * k - 1), dtype=np.int64)
        for i in range(k):
            product[:, i : i + k] += left[:, i : i + 1] * right
        product %= self.prime
        for top in range(2 * k - 2, k - 1, -1):
            lead = product[:, top : top + 1]
            product[:, top - k : top + 1] = (product[:, top - k : top + 1] - lead * self.modulus[None, :]) % self.prime
        return _from_digits(product[:, :k], self._radices)

    def parse(self, literal) -> int:
        if isinstance(literal, int) and not isinstance(literal, bool):
            literal = [literal]
        if not isinstance(literal, list) or len(literal) > self.degree:
            raise MalformedSpecError("element", f"{literal!r} is not a coefficient list of GF({self.prime}^{self.degree})")
        padded = [int(c) % self.prime for c in literal] + [0] * (self.degree - len(literal))
        return int(_from_digits(np.array([padded]), self._radices)[0])

    def literal(self, code: int):
        return [int(c) for c in self.coefficients(code)[0]]

    def describe(self) -> str:
        return f"GF({self.prime}^{self.degree})"


class MatrixRing(FiniteRing):
    """M_n(R), encoded row-major."""

    def __init__(self, base: FiniteRing, size: int):
        self.base = base
        self.size = int(size)
        entries = self.size * self.size
        self._radices = [base.order] * entries
        identity = np.zeros((1, entries), dtype=np.int64)
        identity[0, :: self.size + 1] = base.one
        super().__init__(base.order**entries, _from_digits(identity, self._radices)[0])
        self._install_tables()

    def entries(self, codes) -> np.ndarray:
        """Entry codes of each matrix, shape (N, n, n)."""
        return _to_digits(np.atleast_1d(codes), self._radices).reshape(-1, self.size, self.size)

    def encode(self, entries: np.ndarray) -> np.ndarray:
        return _from_digits(np.asarray(entries, dtype=np.int64).reshape(-1, self.size * self.size), self._radices)

    def _add_v(self, a, b):
        return self.encode(self.base.add(self.entries(a), self.entries(b)))

    def _neg_v(self, a):
        return self.encode(self.base.neg(self.entries(a)))

    def _mul_v(self, a, b):
        left, right = self.entries(a), self.entries(b)
        product = np.zeros_like(left)
        for middle in range(self.size):
            term = self.base.mul(left[:, :, middle : middle + 1], right[:, middle : middle + 1, :])
            product = self.base.add(product, term)
        return self.encode(product)

    def unit_matrix(self, row: int, col: int) -> int:
        entries = np.zeros((self.size, self.size), dtype=np.int64)
        entries[row, col] = self.base.one
        return int(self.encode(entries)[0])

    def parse(self, literal) -> int:
        if isinstance(literal, int) and not isinstance(literal, bool):
            scalar = self.base.parse(literal)
            entries = np.zeros((self.size, self.size), dtype=np.int64)
            np.fill_diagonal(entries, scalar)
            return int(self.encode(entries)[0])
        if not isinstance(literal, list) or len(literal) != self.size or any(
            not isinstance(row, list) or len(row) != self.size for row in literal
        ):
            raise MalformedSpecError("element", f"{literal!r} is not a {self.size}x{self.size} matrix")
        entries = np.array([[self.base.parse(x) for x in row] for row in literal], dtype=np.int64)
        return int(self.encode(entries)[0])

    def literal(self, code: int):
        return [[self.base.literal(int(x)) for x in row] for row in self.entries(code)[0]]

    def describe(self) -> str:
        return f"M_{self.size}({self.base.describe()})"


class ProductRing(FiniteRing):
    """R_1 x ... x R_r, encoded left to right."""

    def __init__(self, factors: list[FiniteRing]):
        if not factors:
            raise MalformedSpecError("ring", "a product needs at least one factor")
        self.factors = list(factors)
        self._radices = [factor.order for factor in self.factors]
        one = _from_digits(np.array([[factor.one for factor in self.factors]]), self._radices)[0]
        super().__init__(int(np.prod(self._radices)), one)
        self._install_tables()

    def components(self, codes) -> np.ndarray:
        return _to_digits(np.atleast_1d(codes), self._radices)

    def _componentwise(self, operation, *arguments):
        parts = [self.components(argument) for argument in arguments]
        columns = [
            getattr(factor, operation)(*[part[:, index] for part in parts]) for index, factor in enumerate(self.factors)
        ]
        return _from_digits(np.stack(columns, axis=1), self._radices)

    def _add_v(self, a, b):
        return self._componentwise("add", a, b)

    def _mul_v(self, a, b):
        return self._componentwise("mul", a, b)

    def _neg_v(self, a):
        return self._componentwise("neg", a)

    def parse(self, literal) -> int:
        if not isinstance(literal, list) or len(literal) != len(self.factors):
            raise MalformedSpecError("element", f"{literal!r} does not have {len(self.factors)} components")
        parts = [factor.parse(part) for factor, part in zip(self.factors, literal)]
        return int(_from_digits(np.array([parts]), self._radices)[0])

    def literal(self, code: int):
        return [factor.literal(int(part)) for factor, part in zip(self.factors, self.components(code)[0])]

    def describe(self) -> str:
        return " x ".join(factor.describe() for factor in self.factors)


class OppositeRing(FiniteRing):
    """R^op: same elements, reversed multiplication."""

    def __init__(self, base: FiniteRing):
        self.base = base
        super().__init__(base.order, base.one)
        self._install_tables()

    def _add_v(self, a, b):
        return self.base.add(a, b)

    def _mul_v(self, a, b):
        return self.base.mul(b, a)

    def _neg_v(self, a):
        return self.base.neg(a)

    def parse(self, literal) -> int:
        return self.base.parse(literal)

    def literal(self, code: int):
        return self.base.literal(code)

    def describe(self) -> str:
        return f"({self.base.describe()})^op"


class TruncatedPolynomialRing(FiniteRing):
    """R[t]/(t^k) with t central."""

    def __init__(self, base: FiniteRing, degree: int):
        if degree < 1:
            raise MalformedSpecError("ring", f"truncation degree must be positive, got {degree}")
        self.base = base
        self.degree = int(degree)
        self._radices = [base.order] * self.degree
        one = _from_digits(np.array([[base.one] + [0] * (self.degree - 1)]), self._radices)[0]
        super().__init__(base.order**self.degree, one)
        self._install_tables()

    def coefficients(self, codes) -> np.ndarray:
        return _to_digits(np.atleast_1d(codes), self._radices)

    def _add_v(self, a, b):
        return _from_digits(self.base.add(self.coefficients(a), self.coefficients(b)), self._radices)

    def _neg_v(self, a):
        return _from_digits(self.base.neg(self.coefficients(a)), self._radices)

    def _mul_v(self, a, b):
        left, right = self.coefficients(a), self.coefficients(b)
        product = np.zeros_like(left)
        for i in range(self.degree):
            for j in range(self.degree - i):
                product[:, i + j] = self.base.add(product[:, i + j], self.base.mul(left[:, i], right[:, j]))
        return _from_digits(product, self._radices)

    def parse(self, literal) -> int:
        if isinstance(literal, int) and not isinstance(literal, bool):
            literal = [literal]
        if not isinstance(literal, list) or len(literal) > self.degree:
            raise MalformedSpecError("element", f"{literal!r} is not a coefficient list of length <= {self.degree}")
        coefficients = [self.base.parse(c) for c in literal] + [0] * (self.degree - len(literal))
        return int(_from_digits(np.array([coefficients]), self._radices)[0])

    def literal(self, code: int):
        return [self.base.literal(int(c)) for c in self.coefficients(code)[0]]

    def describe(self) -> str:
        return f"{self.base.describe()}[t]/(t^{self.degree})"


class SubsetRing(FiniteRing):
    """
    A ring whose elements are a set of parent codes closed under the parent
    operations once followed by a normalisation map. Codes are assigned in
    increasing order of the parent representative.
    """

    def __init__(self, parent: FiniteRing, representatives: np.ndarray, normalise: np.ndarray, one: int):
        self.parent = parent
        self.representatives = np.asarray(representatives, dtype=np.int64)
        # parent code -> code in this ring, -1 outside
        self._index = np.full(parent.order, -1, dtype=np.int64)
        self._index[self.representatives] = np.arange(self.representatives.size)
        self._normalise = normalise
        super().__init__(self.representatives.size, int(self._index[normalise[one]]))
        self._install_tables()

    def to_parent(self, codes):
        result = self.representatives[codes]
        return result if isinstance(result, np.ndarray) else int(result)

    def from_parent(self, parent_codes):
        result = self._index[self._normalise[parent_codes]]
        return result if isinstance(result, np.ndarray) else int(result)

    def _add_v(self, a, b):
        return self.from_parent(self.parent.add(self.representatives[a], self.representatives[b]))

    def _mul_v(self, a, b):
        return self.from_parent(self.parent.mul(self.representatives[a], self.representatives[b]))

    def _neg_v(self, a):
        return self.from_parent(self.parent.neg(self.representatives[a]))

    def parse(self, literal) -> int:
        code = self.from_parent(self.parent.parse(literal))
        if code < 0:
            raise DomainViolationError(f"{literal!r} does not belong to {self.describe()}")
        return code

    def literal(self, code: int):
        return self.parent.literal(self.to_parent(code))


class QuotientRing(SubsetRing):
    """A/I for a two-sided ideal I, each coset represented by its least element."""

    def __init__(self, parent: FiniteRing, ideal: np.ndarray):
        self.ideal = np.asarray(ideal, dtype=np.int64)
        everything = parent.elements()
        cosets = parent.add(everything[:, None], self.ideal[None, :])
        normalise = cosets.min(axis=1)
        super().__init__(parent, np.unique(normalise), normalise, parent.one)

    def reduce(self, parent_codes):
        return self.from_parent(parent_codes)

    def describe(self) -> str:
        return f"{self.parent.describe()}/J"


class CornerRing(SubsetRing):
    """eAe with identity e."""

    def __init__(self, parent: FiniteRing, idempotent: int):
        self.idempotent = int(idempotent)
        everything = parent.elements()
        normalise = parent.mul(parent.mul(self.idempotent, everything), self.idempotent)
        super().__init__(parent, np.unique(normalise), normalise, self.idempotent)

    def contains(self, parent_code: int) -> bool:
        return bool(self._index[parent_code] >= 0)

    def parse(self, literal) -> int:
        parent_code = self.parent.parse(literal)
        if not self.contains(parent_code):
            raise DomainViolationError(f"{literal!r} does not belong to {self.describe()}")
        return int(self._index[parent_code])

    def describe(self) -> str:
        return f"{self.idempotent}.{self.parent.describe()}.{self.idempotent}"
