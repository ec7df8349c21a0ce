"""
Tests for finite ring classification
"""
import time
from itertools import product

import pytest
from sympy import primefactors

from app.services.classification import (
    PredicateResult,
    RingClassReport,
    asr1_check,
    classify_finite_ring,
    classify_matrix,
    enforce_report_invariants,
    finite_tables,
    fsr15_check,
    is_extendable,
    is_simply_extendable,
    sr1_check,
    sweep,
    th2_spot_check,
    triangular_check,
    unimodular_pairs,
)
from app.services.errors import CapExceededError, InvariantViolation, PreconditionError, RingError
from app.services.extension_engine import OutcomeStatus, simply_extend
from app.services.matrix_core import Mat2
from app.services.ring_core import IntegersModN, QuadraticOrder, QuotientRing


def unimodular_matrix_count(n: int) -> int:
    """Quadruples over Z/n generating the unit ideal: n^4 * prod(1 - p^-4)."""
    count = n ** 4
    for p in primefactors(n):
        count = count // p ** 4 * (p ** 4 - 1)
    return count


class TestPredicates:
    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_stable_range_predicates(self, n):
        R = IntegersModN(n)
        assert sr1_check(R)
        assert fsr15_check(R)
        assert asr1_check(R)

    def test_unimodular_pairs(self):
        # 16 pairs over Z/4, minus the 4 with both entries even
        assert len(unimodular_pairs(IntegersModN(4))) == 12

    def test_predicate_result_truthiness(self):
        assert not PredicateResult(False, (1, 2))
        assert PredicateResult(True)

    def test_infinite_ring_rejected(self, ZZ):
        with pytest.raises(RingError):
            sr1_check(ZZ)

    def test_size_cap(self):
        with pytest.raises(CapExceededError):
            classify_finite_ring(IntegersModN(65))


class TestMatrixVerdicts:
    def test_verdicts_over_z6(self, z6):
        assert is_simply_extendable(z6, (1, 2, 3, 0))
        assert is_extendable(z6, (1, 2, 3, 0))
        assert is_extendable(z6, (2, 3, 3, 1))

    def test_tables_are_cached(self, z6):
        assert finite_tables(z6) is finite_tables(z6)

    def test_tables(self, z6):
        T = finite_tables(z6)
        assert T.entries(sorted(T.units)) == (1, 5)
        assert T.entries(sorted(T.radical)) == (0,)
        assert T.unimodular[T.index[2] * 6 + T.index[3]]
        assert not T.unimodular[T.index[2] * 6 + T.index[4]]

    def test_row_space_criterion(self, z6):
        # neither row is unimodular, (1, 1)A = (2, 3) is
        assert is_simply_extendable(z6, (2, 0, 0, 3))

    @pytest.mark.parametrize("ring", [
        IntegersModN(6),
        IntegersModN(4),
        QuotientRing(QuadraticOrder(5), ((2, 0),)),
    ])
    def test_verdicts_agree_with_engine(self, ring):
        elements = list(ring.elements())
        for entries in product(elements, repeat=4):
            if not ring.is_unimodular(entries):
                continue
            outcome = simply_extend(Mat2(ring, *entries))
            assert is_simply_extendable(ring, entries) == (outcome.status == OutcomeStatus.SIMPLE)


class TestClassifyFiniteRing:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_residue_rings(self, n):
        report = classify_finite_ring(IntegersModN(n))
        assert report.size == n
        assert (report.sr1, report.fsr15, report.asr1) == (True, True, True)
        assert (report.pi2, report.e2, report.se2) == (True, True, True)
        assert report.counterexample is None
        assert report.matrices_checked == unimodular_matrix_count(n)

    def test_quotient_of_quadratic_order(self):
        report = classify_finite_ring(QuotientRing(QuadraticOrder(5), ((2, 0),)))
        assert report.size == 4
        assert report.se2 and report.e2 and report.pi2

    def test_report_is_cached(self):
        R = IntegersModN(5)
        assert classify_finite_ring(R) is classify_finite_ring(R)

    def test_invariant_chain_enforced(self, z6):
        report = RingClassReport(z6, 6, sr1=True, fsr15=False, asr1=True, pi2=True, e2=True, se2=True)
        with pytest.raises(InvariantViolation, match="sr1 holds but fsr15 fails"):
            enforce_report_invariants(report)

    def test_extension_chain_enforced(self, z6):
        report = RingClassReport(z6, 6, sr1=True, fsr15=True, asr1=True, pi2=False, e2=True, se2=True)
        with pytest.raises(InvariantViolation, match="e2 holds but pi2 fails"):
            enforce_report_invariants(report)


class TestSpotChecks:
    @pytest.mark.parametrize("n", [6, 8])
    def test_extendable_iff_simply_extendable(self, n):
        assert th2_spot_check(IntegersModN(n))

    @pytest.mark.parametrize("n", [4, 6, 9])
    def test_triangular(self, n):
        assert triangular_check(IntegersModN(n))


class TestClassifyMatrix:
    def test_integer_matrix(self, ZZ):
        result = classify_matrix(Mat2(ZZ, 15, 6, 10, 14))
        assert result.unimodular
        assert result.det == 150
        assert not result.det_is_unit
        assert result.non_full is None
        assert result.extendable and result.simply_extendable
        assert result.outcome.status == OutcomeStatus.SIMPLE

    def test_determinant_zero(self, ZZ):
        result = classify_matrix(Mat2(ZZ, 2, 3, 4, 6))
        assert result.non_full is True
        assert result.simply_extendable is True

    def test_full_matrix(self):
        result = classify_matrix(Mat2(QuadraticOrder(5), (3, 0), (1, -1), (1, 1), (2, 0)))
        assert result.non_full is False
        assert result.extendable is False
        assert result.simply_extendable is False

    def test_not_unimodular(self, ZZ):
        result = classify_matrix(Mat2(ZZ, 2, 4, 6, 8))
        assert not result.unimodular
        assert result.outcome is None
        assert result.extendable is None


class TestSweep:
    def test_sweep_in_order(self):
        reports = sweep(2, 5, workers=1)
        assert [report.size for report in reports] == [2, 3, 4, 5]
        assert all(report.se2 for report in reports)

    def test_full_residue_sweep_is_fast(self):
        started = time.perf_counter()
        reports = sweep(2, 30, workers=1)
        elapsed = time.perf_counter() - started
        assert elapsed < 60
        assert [report.size for report in reports] == list(range(2, 31))
        for report in reports:
            assert (report.sr1, report.fsr15, report.asr1) == (True, True, True)
            assert (report.pi2, report.e2, report.se2) == (True, True, True)
            assert report.matrices_checked == unimodular_matrix_count(report.size)

    def test_extendable_iff_simple_up_to_16(self):
        for n in range(2, 17):
            assert th2_spot_check(IntegersModN(n))

    @pytest.mark.parametrize("start,stop", [(1, 5), (6, 5)])
    def test_invalid_range(self, start, stop):
        with pytest.raises(PreconditionError):
            sweep(start, stop, workers=1)
