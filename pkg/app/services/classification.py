"""
Classification - brute-force ring predicates over finite rings

Stable range one, fsr 1.5 and asr 1 are checked through their quantifier
forms over Um(R^2) x R; Pi2 / E2 / SE2 by deciding every unimodular 2x2
matrix. Extendability of a single matrix is decided through its reduction
modulo the determinant, which is again a finite ring.

All exhaustive checks run on FiniteRingTables: elements are replaced by
their indices, arithmetic by table lookups and ideals by bitmasks. A matrix
is simply extendable iff its row space holds a unimodular vector
(e, f)A = (ae + cf, be + df), so only matrices with two non-unimodular
rows need a search.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from app.config import get_settings
from app.services.errors import CapExceededError, InvariantViolation, PreconditionError, RingError
from app.services.extension_engine import (
    ExtensionOutcome,
    OutcomeStatus,
    WitnessMode,
    extend,
    nonfull_factorize,
    simply_extend,
    triangular_simple_extension,
)
from app.services.matrix_core import Mat2, det2, is_unimodular_mat2, reduce_mod
from app.services.ring_core import Element, IntegersModN, Ring
from app.utils.cache import cached_report, cached_verdict

logger = logging.getLogger(__name__)

Indices = Tuple[int, int, int, int]


@dataclass(frozen=True)
class PredicateResult:
    holds: bool
    witness: Optional[Tuple[Element, ...]] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class Counterexample:
    predicate: str
    witness: Tuple[Element, ...]


@dataclass(frozen=True)
class RingClassReport:
    ring: Ring
    size: int
    sr1: bool
    fsr15: bool
    asr1: bool
    pi2: bool
    e2: bool
    se2: bool
    counterexample: Optional[Counterexample] = None
    matrices_checked: int = 0


@dataclass(frozen=True)
class MatrixClassification:
    matrix: Mat2
    unimodular: bool
    det: Element
    det_is_unit: bool
    non_full: Optional[bool] = None
    extendable: Optional[bool] = None
    simply_extendable: Optional[bool] = None
    outcome: Optional[ExtensionOutcome] = None


def _require_finite(R: Ring) -> None:
    if not R.capabilities.finite:
        raise RingError(f"{R.format_ring()} is not finite")
    cap = get_settings().ring_size_cap
    if R.size > cap:
        raise CapExceededError(f"Ring of size {R.size} exceeds the classification cap {cap}")



# ── Per-ring tables ──


class FiniteRingTables:
    """Index arithmetic over a finite ring; index i stands for elements[i]."""

    def __init__(self, R: Ring):
        self.ring = R
        self.elements: Tuple[Element, ...] = tuple(R.elements())
        self.n = n = len(self.elements)
        self.index: Dict[Element, int] = {x: i for i, x in enumerate(self.elements)}
        index = self.index
        self.add = tuple(tuple(index[R.add(x, y)] for y in self.elements) for x in self.elements)
        self.mul = tuple(tuple(index[R.mul(x, y)] for y in self.elements) for x in self.elements)
        self.neg = tuple(index[R.neg(x)] for x in self.elements)
        self.zero = index[R.zero]
        self.one = index[R.one]
        self.units: FrozenSet[int] = frozenset(i for i in range(n) if self.one in self.mul[i])
        one_minus = self.add[self.one]
        self.radical: FrozenSet[int] = frozenset(
            i for i in range(n) if all(one_minus[self.neg[p]] in self.units for p in self.mul[i])
        )

        # Ideals are bitmasks over indices; (x, y) sits at x*n + y
        self.full = (1 << n) - 1
        self._sums: Dict[Tuple[int, int], int] = {}
        principal = [self._mask(self.mul[i]) for i in range(n)]
        self.pair_ideal: Tuple[int, ...] = tuple(
            self.ideal_sum(principal[x], principal[y]) for x in range(n) for y in range(n)
        )
        self.unimodular: Tuple[bool, ...] = tuple(ideal == self.full for ideal in self.pair_ideal)

    @staticmethod
    def _mask(indices: Sequence[int]) -> int:
        mask = 0
        for i in indices:
            mask |= 1 << i
        return mask

    def _members(self, mask: int) -> List[int]:
        return [i for i in range(self.n) if mask >> i & 1]

    def ideal_sum(self, I: int, J: int) -> int:
        key = (I, J) if I <= J else (J, I)
        total = self._sums.get(key)
        if total is None:
            if self.full in key:
                total = self.full
            else:
                total = 0
                right = self._members(J)
                for i in self._members(I):
                    row = self.add[i]
                    for j in right:
                        total |= 1 << row[j]
            self._sums[key] = total
        return total

    def indices(self, entries: Sequence[Element]) -> Tuple[int, ...]:
        return tuple(self.index[x] for x in entries)

    def entries(self, indices: Sequence[int]) -> Tuple[Element, ...]:
        return tuple(self.elements[i] for i in indices)

    def row_space_has_unimodular(self, a: int, b: int, c: int, d: int) -> bool:
        """Some (e, f) makes (ae + cf, be + df) unimodular."""
        n, add, mul, unimodular = self.n, self.add, self.mul, self.unimodular
        if unimodular[a * n + b] or unimodular[c * n + d]:
            return True
        for e in range(n):
            ea, eb = mul[e][a], mul[e][b]
            for f in range(n):
                if unimodular[add[ea][mul[f][c]] * n + add[eb][mul[f][d]]]:
                    return True
        return False

    @cached_property
    def matrix_scan(self) -> Tuple[int, Tuple[Indices, ...]]:
        """
        Count of unimodular 2x2 matrices, and the ones whose row space has no
        unimodular vector, in row-major order.

        A unimodular first or second row settles a matrix at once, so only
        pairs of non-unimodular rows are visited.
        """
        n = self.n
        rows = range(n * n)
        free = [r for r in rows if not self.unimodular[r]]
        unimodular_rows = n * n - len(free)
        ideals = set(self.pair_ideal[r] for r in free)

        checked = 0
        non_simple: List[Indices] = []
        for r1 in rows:
            if self.unimodular[r1]:
                checked += n * n
                continue
            checked += unimodular_rows
            I = self.pair_ideal[r1]
            complements = {J for J in ideals if self.ideal_sum(I, J) == self.full}
            if not complements:
                continue
            a, b = divmod(r1, n)
            for r2 in free:
                if self.pair_ideal[r2] not in complements:
                    continue
                checked += 1
                c, d = divmod(r2, n)
                if not self.row_space_has_unimodular(a, b, c, d):
                    non_simple.append((a, b, c, d))
        return checked, tuple(non_simple)


@cached_verdict
def finite_tables(R: Ring) -> FiniteRingTables:
    _require_finite(R)
    return FiniteRingTables(R)


def unimodular_pairs(R: Ring) -> FrozenSet[Tuple[Element, Element]]:
    T = finite_tables(R)
    return frozenset(T.entries(divmod(r, T.n)) for r, ok in enumerate(T.unimodular) if ok)


# ── Stable range predicates ──


def sr1_check(R: Ring) -> PredicateResult:
    """Every unimodular (a, b) has a unit of the form a + b*r."""
    T = finite_tables(R)
    n, add, mul = T.n, T.add, T.mul
    for a, b in product(range(n), repeat=2):
        if T.unimodular[a * n + b] and not any(add[a][mul[b][r]] in T.units for r in range(n)):
            return PredicateResult(False, T.entries((a, b)))
    return PredicateResult(True)


def _reduction_check(T: FiniteRingTables, skipped: FrozenSet[int]) -> PredicateResult:
    n, add, mul, unimodular = T.n, T.add, T.mul, T.unimodular
    for a, b in product(range(n), repeat=2):
        if not unimodular[a * n + b]:
            continue
        shifted = {add[a][mul[b][r]] for r in range(n)}
        for c in range(n):
            if c in skipped:
                continue
            if not any(unimodular[s * n + c] for s in shifted):
                return PredicateResult(False, T.entries((a, b, c)))
    return PredicateResult(True)


def fsr15_check(R: Ring) -> PredicateResult:
    """For (a, b) unimodular and c != 0, some (a + b*r, c) is unimodular."""
    T = finite_tables(R)
    return _reduction_check(T, frozenset({T.zero}))


def asr1_check(R: Ring) -> PredicateResult:
    """As fsr15_check, with c ranging outside the Jacobson radical."""
    T = finite_tables(R)
    return _reduction_check(T, T.radical)


# ── Matrix verdicts ──


def is_simply_extendable(R: Ring, entries: Tuple[Element, ...]) -> bool:
    """A certificate (e, f, s, t) exists iff (e, f)A is unimodular for some (e, f)."""
    T = finite_tables(R)
    return T.row_space_has_unimodular(*T.indices(entries))


def is_extendable(R: Ring, entries: Tuple[Element, ...]) -> bool:
    """Extendable iff the reduction modulo det is simply extendable (det a unit: always)."""
    A = Mat2(R, *entries)
    D = det2(A)
    if R.is_unit(D):
        return True
    if R.is_zero(D):
        return is_simply_extendable(R, entries)
    reduced = reduce_mod(A, D)
    return is_simply_extendable(reduced.ring, reduced.entries)



def enforce_report_invariants(report: RingClassReport) -> RingClassReport:
    chains = (
        ("sr1", report.sr1, "fsr15", report.fsr15),
        ("fsr15", report.fsr15, "asr1", report.asr1),
        ("se2", report.se2, "e2", report.e2),
        ("e2", report.e2, "pi2", report.pi2),
    )
    for left, left_value, right, right_value in chains:
        if left_value and not right_value:
            raise InvariantViolation(f"{left} holds but {right} fails over {report.ring.format_ring()}")
    return report



@cached_report
def classify_finite_ring(R: Ring) -> RingClassReport:
    """Exhaustive report over every unimodular 2x2 matrix, first counterexample in row-major order."""
    T = finite_tables(R)
    counterexample: Optional[Counterexample] = None

    flags = {}
    for name, check in (("sr1", sr1_check), ("fsr15", fsr15_check), ("asr1", asr1_check)):
        result = check(R)
        flags[name] = result.holds
        if not result and counterexample is None:
            counterexample = Counterexample(name, result.witness)

    checked, non_simple = T.matrix_scan
    pi2 = e2 = True
    for indices in non_simple:
        entries = T.entries(indices)
        failed = "se2"
        if not is_extendable(R, entries):
            e2 = False
            failed = "e2"
            if R.is_zero(det2(Mat2(R, *entries))):
                pi2 = False
                failed = "pi2"
        if counterexample is None:
            counterexample = Counterexample(failed, entries)
        if not pi2:
            break

    report = RingClassReport(
        ring=R,
        size=R.size,
        pi2=pi2,
        e2=e2,
        se2=not non_simple,
        counterexample=counterexample,
        matrices_checked=checked,
        **flags,
    )
    enforce_report_invariants(report)
    logger.info("Classified %s: %d unimodular matrices, %d without a simple extension",
                R.format_ring(), checked, len(non_simple))
    return report


def th2_spot_check(R: Ring) -> PredicateResult:
    """Extendable iff simply extendable: no matrix lacking a simple extension is extendable."""
    T = finite_tables(R)
    for indices in T.matrix_scan[1]:
        entries = T.entries(indices)
        if is_extendable(R, entries):
            return PredicateResult(False, entries)
    return PredicateResult(True)


def triangular_check(R: Ring) -> PredicateResult:
    """Every unimodular [[a, b], [0, d]] has a simple extension with (2,3) entry -1."""
    _require_finite(R)
    minus_one = R.neg(R.one)
    for a, b, d in product(list(R.elements()), repeat=3):
        entries = (a, b, R.zero, d)
        if not R.is_unimodular(entries):
            continue
        try:
            extension = triangular_simple_extension(Mat2(R, *entries))
        except PreconditionError:
            return PredicateResult(False, entries)
        if extension.entry(1, 2) != minus_one:
            return PredicateResult(False, entries)
    return PredicateResult(True)


def classify_matrix(A: Mat2, bound: Optional[int] = None) -> MatrixClassification:
    R = A.ring
    D = det2(A)
    if not is_unimodular_mat2(A):
        return MatrixClassification(A, unimodular=False, det=D, det_is_unit=R.is_unit(D))

    non_full = None
    if R.is_zero(D):
        non_full = nonfull_factorize(A).mode == WitnessMode.FACTORIZATION

    outcome = extend(A, bound)
    if outcome.status in (OutcomeStatus.SIMPLE, OutcomeStatus.EXTENDABLE):
        extendable = True
    elif outcome.status == OutcomeStatus.NOT_EXTENDABLE:
        extendable = False
    else:
        extendable = None

    if outcome.status == OutcomeStatus.SIMPLE:
        simple: Optional[bool] = True
    elif outcome.status == OutcomeStatus.NOT_EXTENDABLE:
        simple = False
    else:
        simple_outcome = simply_extend(A, bound)
        simple = {OutcomeStatus.SIMPLE: True, OutcomeStatus.NOT_EXTENDABLE: False}.get(simple_outcome.status)

    return MatrixClassification(
        matrix=A,
        unimodular=True,
        det=D,
        det_is_unit=R.is_unit(D),
        non_full=non_full,
        extendable=extendable,
        simply_extendable=simple,
        outcome=outcome,
    )


# ── Sweeps ──


def _classify_modulus(n: int) -> RingClassReport:
    return classify_finite_ring(IntegersModN(n))


def sweep(start: int, stop: int, workers: Optional[int] = None) -> List[RingClassReport]:
    """Reports for Z/n, n = start..stop inclusive, in order."""
    if start < 2 or stop < start:
        raise PreconditionError(f"Invalid sweep range {start}..{stop}")
    workers = workers or get_settings().sweep_workers
    moduli = list(range(start, stop + 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_classify_modulus, moduli))
    else:
        reports = [_classify_modulus(n) for n in moduli]
    logger.info("Swept Z/n for n in %d..%d", start, stop)
    return reports
