"""
Verification - golden instances and randomized identity checks

Each JSON file in app/fixtures names a check and its parameters; the
suite runs them in file-name order and reports one row per fixture.
"""
import json
import logging
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from app.models.matrix import MatrixPayload
from app.services.classification import sweep, th2_spot_check
from app.services.codec import matrix_from_payload
from app.services.enumeration import (
    mixed_family_value,
    nu_diag_closed_form,
    nu_enumerate,
    upper_triangular_family_value,
    upper_triangular_parameters,
    zero_corner_family_value,
    zero_corner_parameters,
)
from app.services.extension_engine import (
    Certificate,
    OutcomeStatus,
    WitnessMode,
    assemble_simple_extension,
    certificate_identity,
    extend,
    simply_extend,
    validate_extension,
)
from app.services.matrix_core import Mat2, Mat3, char_poly3, det3, det3_permutations
from app.services.ring_core import Integers, IntegersModN

logger = logging.getLogger(__name__)

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"

CheckResult = Tuple[bool, str]


@dataclass(frozen=True)
class VerifyResult:
    name: str
    check: str
    passed: bool
    detail: str
    seconds: float


def load_fixture(path: Path) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def load_fixtures(directory: Path = FIXTURES_DIR) -> List[Dict[str, Any]]:
    return [load_fixture(path) for path in sorted(directory.glob("*.json"))]


def _matrix(fixture: Dict[str, Any]) -> Mat2:
    return matrix_from_payload(MatrixPayload.model_validate(fixture["matrix"]))


def _rows(R, rows) -> Tuple[Tuple[Any, ...], ...]:
    return tuple(tuple(R.canonical(R.parse(x)) for x in row) for row in rows)


def random_unimodular_integer_matrix(rng: random.Random, height: int) -> Mat2:
    R = Integers()
    while True:
        entries = [rng.randint(-height, height) for _ in range(4)]
        if R.is_unimodular(entries):
            return Mat2(R, *entries)


# ── Checks ──


def check_simple_extension(fixture: Dict[str, Any], seed: Optional[int]) -> CheckResult:
    A = _matrix(fixture)
    outcome = simply_extend(A)
    if outcome.status != OutcomeStatus.SIMPLE:
        return False, f"expected simple, got {outcome.status.value}"
    expected = _rows(A.ring, fixture["extension"])
    if outcome.extension.rows != expected:
        return False, f"extension {outcome.extension} differs from the expected one"
    family = fixture.get("family")
    if family:
        return _check_family(A, family, fixture["bound"])
    return True, f"route {outcome.route}"


def _check_family(A: Mat2, family: str, bound: int) -> CheckResult:
    parameters, value = {
        "zero_corner": (zero_corner_parameters, zero_corner_family_value),
        "upper_triangular": (upper_triangular_parameters, upper_triangular_family_value),
    }[family]
    sample = nu_enumerate(A, bound)
    for e, f, s, t, nu in sample.rows():
        m, k = parameters((e, f, s, t))
        if value(m, k) != nu:
            return False, f"({e}, {f}, {s}, {t}) with nu {nu} falls outside the {family} family"
    return True, f"{len(sample.gamma)} certificates in the {family} family"


def check_not_extendable(fixture: Dict[str, Any], seed: Optional[int]) -> CheckResult:
    A = _matrix(fixture)
    outcome = extend(A)
    if outcome.status != OutcomeStatus.NOT_EXTENDABLE:
        return False, f"expected not_extendable, got {outcome.status.value}"
    witness = outcome.witness
    if witness.mode != WitnessMode(fixture["mode"]):
        return False, f"witness mode {witness.mode.value}"
    expected = [A.ring.parse(x) for x in fixture["divisors"]]
    if list(witness.divisors) != expected:
        return False, f"divisors {list(witness.divisors)}"
    return True, f"{len(witness.cases)} divisor cases excluded"


def check_assembly(fixture: Dict[str, Any], seed: Optional[int]) -> CheckResult:
    A = _matrix(fixture)
    R = A.ring
    extension = assemble_simple_extension(A, Certificate(*(R.parse(x) for x in fixture["certificate"])))
    if extension.rows != _rows(R, fixture["extension"]):
        return False, f"assembled {extension}"
    _, nu, det = char_poly3(extension)
    if nu != fixture["nu"] or det != R.one:
        return False, f"nu {nu}, det {det}"
    values = set(nu_enumerate(A, fixture["bound"]).values)
    missing = [p for p in fixture.get("mixed_family", []) if mixed_family_value(p) not in values]
    if missing:
        return False, f"family members for p in {missing} not enumerated"
    return True, f"nu {nu}"


def check_given_extension(fixture: Dict[str, Any], seed: Optional[int]) -> CheckResult:
    A = _matrix(fixture)
    extension = Mat3.from_rows(A.ring, fixture["extension"])
    validate_extension(A, extension, simple=True)
    outcome = simply_extend(A)
    if outcome.status != OutcomeStatus.SIMPLE:
        return False, f"engine returned {outcome.status.value}"
    return True, f"engine route {outcome.route}"


def check_nu_residue(fixture: Dict[str, Any], seed: Optional[int]) -> CheckResult:
    A = _matrix(fixture)
    values = set(nu_enumerate(A, fixture["bound"]).values)
    modulus = fixture["modulus"]
    stray = sorted(v for v in values if v % modulus)
    if stray:
        return False, f"values {stray[:5]} not divisible by {modulus}"
    absent = [v for v in fixture["present"] if v not in values]
    if absent:
        return False, f"values {absent} missing"

    R = Integers()
    diagonal = fixture.get("diagonal", {})
    for d in diagonal.get("d", []):
        residue_class = nu_diag_closed_form(d)
        sample = nu_enumerate(Mat2(R, 1, 0, 0, d), diagonal["bound"])
        outside = [v for v in sample.values if not residue_class.contains(v)]
        if outside:
            return False, f"nu(Diag(1, {d})) has {outside[:5]} outside {residue_class.describe()}"
    return True, f"{len(values)} values"


def check_identity_fuzz(fixture: Dict[str, Any], seed: Optional[int]) -> CheckResult:
    rng = random.Random(fixture["seed"] if seed is None else seed)
    R = Integers()
    h = fixture["height"]
    for _ in range(fixture["samples"]):
        a, b, c, d, e, f, s, t = (rng.randint(-h, h) for _ in range(8))
        Q = Mat3(R, ((a, b, f), (c, d, -e), (-t, s, 0)))
        paired = (b * e + d * f) * t + (a * e + c * f) * s
        expanded = certificate_identity(Mat2(R, a, b, c, d), Certificate(e, f, s, t))
        if not det3(Q) == det3_permutations(Q) == paired == expanded:
            return False, f"identity fails at {(a, b, c, d, e, f, s, t)}"
    return True, f"{fixture['samples']} octuples"


def check_integer_completeness(fixture: Dict[str, Any], seed: Optional[int]) -> CheckResult:
    rng = random.Random(fixture["seed"] if seed is None else seed)
    routes: Dict[str, int] = {}
    for _ in range(fixture["samples"]):
        A = random_unimodular_integer_matrix(rng, fixture["height"])
        outcome = simply_extend(A)
        if outcome.status != OutcomeStatus.SIMPLE:
            return False, f"{A} returned {outcome.status.value}"
        validate_extension(A, outcome.extension, simple=True)
        routes[outcome.route] = routes.get(outcome.route, 0) + 1
    return True, ", ".join(f"{route}: {count}" for route, count in sorted(routes.items()))


def check_residue_sweep(fixture: Dict[str, Any], seed: Optional[int]) -> CheckResult:
    reports = sweep(fixture["start"], fixture["stop"])
    flags = ("sr1", "fsr15", "asr1", "pi2", "e2", "se2")
    for report in reports:
        failed = [flag for flag in flags if not getattr(report, flag)]
        if failed:
            return False, f"Z/{report.size} fails {failed}"
    for n in range(fixture["start"], min(fixture["stop"], fixture["th2_limit"]) + 1):
        if not th2_spot_check(IntegersModN(n)):
            return False, f"extendable and simply extendable differ over Z/{n}"
    return True, f"{len(reports)} rings"


CHECKS: Dict[str, Callable[[Dict[str, Any], Optional[int]], CheckResult]] = {
    "simple_extension": check_simple_extension,
    "not_extendable": check_not_extendable,
    "assembly": check_assembly,
    "given_extension": check_given_extension,
    "nu_residue": check_nu_residue,
    "identity_fuzz": check_identity_fuzz,
    "integer_completeness": check_integer_completeness,
    "residue_sweep": check_residue_sweep,
}


def run_fixture(fixture: Dict[str, Any], seed: Optional[int] = None) -> VerifyResult:
    name, check = fixture["name"], fixture["check"]
    started = time.perf_counter()
    runner = CHECKS.get(check)
    try:
        if runner is None:
            passed, detail = False, f"unknown check {check!r}"
        else:
            passed, detail = runner(fixture, seed)
    except (ValueError, RuntimeError) as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
    elapsed = time.perf_counter() - started
    if not passed:
        logger.warning("Golden check %s failed: %s", name, detail)
    return VerifyResult(name, check, passed, detail, round(elapsed, 3))


def run_verification(seed: Optional[int] = None, directory: Path = FIXTURES_DIR) -> List[VerifyResult]:
    results = [run_fixture(fixture, seed) for fixture in load_fixtures(directory)]
    logger.info("Verification: %d of %d checks passed", sum(r.passed for r in results), len(results))
    return results
