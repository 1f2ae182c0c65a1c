import argparse
from dataclasses import dataclass, field
import json
import logging
import os

import pandas as pd

from ..core.dickson.classification import profiles_of
from ..core.dickson.invariant import delta_I
from ..core.dickson.subgroup import reflection_existence, reflection_subgroup
from ..core.forms.quadratic_space import Isometry, is_unimodular
from ..core.oracle.enumeration import closure, enumerate_isometries
from ..core.oracle.verification import (
    measure_index,
    reflection_group,
    verify_cancellation,
    verify_dickson,
    verify_extension,
    verify_index,
)
from ..core.reflections.quasi_reflection import enumerate_quasi_reflections
from ..core.ring.factors import factors_of
from ..core.ring.unitary_ring import validate_anti_structure, validate_form_parameter
from ..core.transforms.conjugation import conjugate
from ..core.transforms.transfer import transfer
from ..core.utils import constants
from ..core.utils.config import bounds_override
from ..core.utils.errors import ConditionViolationError, InputError, MalformedSpecError, MathematicalFailure
from ..core.utils.serialization import DocumentReader, dumps, load_json, matrix_literals, space_to_dict
from ..core.witt.cancellation import cancel
from ..core.witt.extension import extend
from ..core.witt.problem import ExtensionProblem

_logger = logging.getLogger(__name__)

commands = ("validate", "classify", "extend", "cancel", "dickson", "group", "oracle-verify")
verifications = ("extension", "index", "dickson", "cancel", "all")


@dataclass
class JobSpec:
    """
    One invocation of the tool.

    Attributes:
        command (str): One of the commands above.
        paths (dict[str, str]): Input files by role ("ring", "space", "q", "s", "v", "iso", "base", "s1", "s2").
        output_format (str): "text" or "json".
        bound (int | None): Overrides the enumeration caps when set.
        what (str): Statement checked by oracle-verify.
        transfer (str | None): Element literal e; the space is e-transferred before classify or dickson.
        conjugate (str | None): Element literal v; the space is conjugated by v before classify or dickson.
        measure (bool): Also count [O : O'] by enumeration in dickson.
        seedless (bool): Refuse to run anything that would draw random numbers.
    """

    command: str
    paths: dict = field(default_factory=dict)
    output_format: str = "json"
    bound: int | None = None
    what: str = "all"
    transfer: str | None = None
    conjugate: str | None = None
    measure: bool = False
    seedless: bool = False


def _path(job: JobSpec, role: str) -> str:
    path = job.paths.get(role)
    if path is None:
        raise MalformedSpecError("command line", f"{job.command} needs --{role}")
    if not os.path.isfile(path):
        raise MalformedSpecError("file", f"{path} does not exist")
    return path


def _element_literal(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _transformed_space(job: JobSpec, reader: DocumentReader):
    space = reader.space(_path(job, "space"))
    if job.conjugate is not None:
        v = space.ring.parse(_element_literal(job.conjugate))
        space = conjugate(space.ur, v).map_space(space)
    if job.transfer is not None:
        e = space.ring.parse(_element_literal(job.transfer))
        space = transfer(space.ur, e).map_space(space)
    return space


def _validate(job: JobSpec, reader: DocumentReader) -> tuple[int, dict]:
    parts = reader.ring_parts(load_json(_path(job, "ring")))
    anti = validate_anti_structure(parts.ring, parts.sigma, parts.u)
    report = {"ring": parts.ring.describe(), "order": parts.ring.order, "anti_structure": anti.to_dict()}
    if anti.ok:
        report["form_parameter"] = validate_form_parameter(parts.ring, parts.sigma, parts.u, parts.lam).to_dict()
    valid = anti.ok and report["form_parameter"]["valid"]
    report["valid"] = valid
    return (constants.exit_success if valid else constants.exit_input_error), report


def _classify(job: JobSpec, reader: DocumentReader) -> tuple[int, dict]:
    space = _transformed_space(job, reader)
    unimodular = is_unimodular(space)
    report = {
        "space": space_to_dict(space),
        "unitary_ring": space.ur.to_dict(),
        "unimodular": unimodular,
        "factors": [factor.describe() for factor in factors_of(space.ur)],
        "profiles": [profile.to_dict() for profile in profiles_of(space.ur)],
    }
    if unimodular:
        report["reflection"] = reflection_existence(space).to_dict()
    return constants.exit_success, report


def _extend(job: JobSpec, reader: DocumentReader) -> tuple[int, dict]:
    space = reader.space(_path(job, "space"))
    q = reader.summand(_path(job, "q"), space)
    s = reader.summand(_path(job, "s"), space)
    psi = reader.isometry(_path(job, "iso"), space.rank, space.rank, space.ring)
    if "v" in job.paths:
        problem = ExtensionProblem(space, q, s, reader.summand(_path(job, "v"), space), psi)
        result = extend(problem)
    else:
        problem = ExtensionProblem(space, q, s, space.module, psi)
        result = extend(problem, unimodular=True)
    return constants.exit_success, result.to_dict()


def _cancel(job: JobSpec, reader: DocumentReader) -> tuple[int, dict]:
    base = reader.space(_path(job, "base"))
    s1 = reader.space(_path(job, "s1"))
    s2 = reader.space(_path(job, "s2"))
    rows = base.rank + s2.rank
    cols = base.rank + s1.rank
    iso = reader.isometry(_path(job, "iso"), rows, cols, base.ring)
    result: Isometry = cancel(base, s1, s2, iso)
    return constants.exit_success, {"iso": matrix_literals(base.ring, result.matrix), "verified": result.verify()}


def _dickson(job: JobSpec, reader: DocumentReader) -> tuple[int, dict]:
    space = _transformed_space(job, reader)
    subgroup = measure_index(space) if job.measure else reflection_subgroup(space)
    report = {
        "profiles": [profile.to_dict() for profile in profiles_of(space.ur)],
        "subgroup": subgroup.to_dict(),
    }
    if "iso" in job.paths:
        psi = reader.isometry(_path(job, "iso"), space.rank, space.rank, space.ring)
        report["delta"] = list(delta_I(space, psi))
    return constants.exit_success, report


def _group(job: JobSpec, reader: DocumentReader) -> tuple[int, dict]:
    space = reader.space(_path(job, "space"))
    whole = enumerate_isometries(space)
    generated = reflection_group(space)
    quasi = closure(space, list(enumerate_quasi_reflections(space)), tags=["quasi-reflections"])
    return constants.exit_success, {
        "order": whole.order,
        "reflection_subgroup_order": generated.order,
        "quasi_reflection_subgroup_order": quasi.order,
        "generated_by_quasi_reflections": quasi.keys() == whole.keys(),
    }


def _oracle_verify(job: JobSpec, reader: DocumentReader) -> tuple[int, dict]:
    if job.what not in verifications:
        raise MalformedSpecError("command line", f"--what must be one of {', '.join(verifications)}")
    reports = []
    if job.what == "cancel" or (job.what == "all" and "base" in job.paths):
        base = reader.space(_path(job, "base"))
        reports.append(verify_cancellation(base, reader.space(_path(job, "s1")), reader.space(_path(job, "s2"))))
    if job.what != "cancel":
        space = reader.space(_path(job, "space"))
        if job.what in ("extension", "all"):
            reports.append(verify_extension(space))
        if job.what in ("index", "all"):
            reports.append(verify_index(space))
        if job.what in ("dickson", "all"):
            reports.append(verify_dickson(space))
    ok = all(report.ok for report in reports)
    document = {"ok": ok, "reports": [report.to_dict() for report in reports]}
    return (constants.exit_success if ok else constants.exit_mathematical_failure), document


_dispatch = {
    "validate": _validate,
    "classify": _classify,
    "extend": _extend,
    "cancel": _cancel,
    "dickson": _dickson,
    "group": _group,
    "oracle-verify": _oracle_verify,
}


def run(job: JobSpec) -> tuple[int, dict]:
    """
    Execute one job.

    :return: the exit status (0 success, 1 mathematical failure, 2 input error) and the report
    """
    if job.command not in commands:
        return constants.exit_input_error, {"error": "MalformedSpecError", "message": f"Unknown command {job.command}"}
    if job.seedless:
        # no code path draws random numbers, so the flag only needs to be acknowledged
        _logger.info("Seedless run requested")
    reader = DocumentReader()
    try:
        with bounds_override(enumeration=job.bound, candidates=job.bound):
            status, report = _dispatch[job.command](job, reader)
    except InputError as error:
        _logger.error("%s", error)
        return constants.exit_input_error, {"error": type(error).__name__, "message": str(error)}
    except ConditionViolationError as error:
        _logger.error("%s", error)
        return constants.exit_mathematical_failure, {
            "error": type(error).__name__,
            "message": str(error),
            "conditions": error.report.to_dict(),
        }
    except MathematicalFailure as error:
        _logger.error("%s", error)
        return constants.exit_mathematical_failure, {"error": type(error).__name__, "message": str(error)}
    _logger.info("%s finished with status %d", job.command, status)
    return status, report


def render_text(report: dict) -> str:
    """Scalars as one key/value table, lists of records as one table each."""
    scalars = {}
    tables = []
    for key, value in sorted(report.items()):
        if isinstance(value, list) and value and all(isinstance(item, dict) for item in value):
            tables.append((key, pd.json_normalize(value)))
        elif isinstance(value, dict):
            tables.append((key, pd.json_normalize(value)))
        else:
            scalars[key] = json.dumps(value) if isinstance(value, list) else value
    blocks = []
    if scalars:
        blocks.append(pd.Series(scalars, dtype=object).to_string())
    for key, frame in tables:
        blocks.append(f"[{key}]\n{frame.to_string(index=False)}")
    return "\n\n".join(blocks)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasiwitt", description="Quadratic forms over finite unitary rings")
    parser.add_argument("--format", dest="output_format", choices=("text", "json"), default="json")
    parser.add_argument("--bound", type=int, default=None, help="cap on enumerated elements and oracle candidates")
    parser.add_argument("--seedless", action="store_true", help="assert that the run is deterministic")
    parser.add_argument("--verbose", action="store_true", help="log search steps")
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser("validate", help="check the axioms of a unitary ring")
    validate.add_argument("ring")

    for name, text in (("classify", "factor profiles of a space"), ("dickson", "Dickson invariants and the reflection subgroup")):
        sub = subparsers.add_parser(name, help=text)
        sub.add_argument("space")
        sub.add_argument("--transfer", default=None, help="element literal e of an e-transfer applied first")
        sub.add_argument("--conjugate", default=None, help="unit literal v of a conjugation applied first")
        if name == "dickson":
            sub.add_argument("--measure", action="store_true", help="count [O : O'] by enumeration")
            sub.add_argument("--iso", default=None, help="isometry whose Dickson invariants are reported")

    ext = subparsers.add_parser("extend", help="extend an isometry between summands")
    ext.add_argument("--space", required=True)
    ext.add_argument("--q", required=True)
    ext.add_argument("--s", required=True)
    ext.add_argument("--iso", required=True)
    ext.add_argument("--v", default=None, help="summand holding the reflection vectors, P when omitted")

    can = subparsers.add_parser("cancel", help="cancel a unimodular summand")
    for role in ("base", "s1", "s2", "iso"):
        can.add_argument(f"--{role}", required=True)

    group = subparsers.add_parser("group", help="orders of O and of its reflection subgroups")
    group.add_argument("space")

    oracle = subparsers.add_parser("oracle-verify", help="exhaustive checks on small spaces")
    oracle.add_argument("--space", default=None)
    oracle.add_argument("--what", choices=verifications, default="all")
    for role in ("base", "s1", "s2"):
        oracle.add_argument(f"--{role}", default=None)
    return parser


def job_from_arguments(arguments: argparse.Namespace) -> JobSpec:
    roles = ("ring", "space", "q", "s", "v", "iso", "base", "s1", "s2")
    paths = {role: getattr(arguments, role) for role in roles if getattr(arguments, role, None) is not None}
    return JobSpec(
        command=arguments.command,
        paths=paths,
        output_format=arguments.output_format,
        bound=arguments.bound,
        what=getattr(arguments, "what", "all"),
        transfer=getattr(arguments, "transfer", None),
        conjugate=getattr(arguments, "conjugate", None),
        measure=getattr(arguments, "measure", False),
        seedless=arguments.seedless,
    )


def main(argv=None) -> int:
    arguments = build_parser().parse_args(argv)
    if arguments.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    job = job_from_arguments(arguments)
    status, report = run(job)
    print(dumps(report) if job.output_format == "json" else render_text(report))
    return status
