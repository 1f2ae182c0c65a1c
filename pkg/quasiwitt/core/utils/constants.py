from enum import Enum
import os


base_folder = os.path.dirname(os.path.abspath(__file__))

catalog_folder = os.path.normpath(f"{base_folder}/../../../catalog")

# enumeration caps, overridable through config.bounds_override
max_ring_order = 2**16
max_enumeration = 2**20
max_candidates = 10**8

# above this order arithmetic goes through the constructor rules instead of tables
max_table_order = 1024

max_lift_iterations = 64

exit_success = 0
exit_mathematical_failure = 1
exit_input_error = 2


class Route(Enum):
    """
    how an extension was obtained
    """

    WITT_I = "witt-I"
    WITT_II_AUGMENTED = "witt-II-augmented"


class FactorKind(Enum):
    SIMPLE = "simple"
    EXCHANGE_PAIR = "exchange-pair"


class Parity(Enum):
    ODD = "odd"
    EVEN = "even"
    NOT_APPLICABLE = "n/a"


class CornerType(Enum):
    """
    identification of the division-ring part A_(i) of a simple factor
    """

    F2 = "F_2"
    F2_SQUARED = "F_2xF_2"
    OTHER = "other"


class SubgroupCase(Enum):
    POPULATED = "all-odd-factors-populated"
    EMPTY_ODD_FACTOR = "empty-odd-factor"
    NO_REFLECTION = "no-reflection"
