"""
Tests for the extension engine
"""
import itertools
import random
from math import gcd

import pytest

import app.services.extension_engine as engine
from app.config import get_settings
from app.services.errors import (
    CapExceededError,
    InvalidCertificateError,
    InvariantViolation,
    NotUnimodularError,
    PreconditionError,
)
from app.services.extension_engine import (
    Certificate,
    ExtensionOutcome,
    FullnessWitness,
    OutcomeStatus,
    WitnessMode,
    assemble_simple_extension,
    certificate_identity,
    certificate_of,
    complete_pair,
    diagonal_reduce,
    elementary_divisor_certificate,
    extend,
    extension_from_diagonal,
    extension_from_factorization,
    factored_certificate,
    factored_form,
    find_certificate,
    fsr_reduce,
    heuristic_certificate,
    heuristic_pair,
    is_valid_certificate,
    nonfull_factorize,
    pair_from_pr6,
    pr6_pair,
    search_certificate,
    search_pair,
    simply_extend,
    stable_range2_reduce,
    transpose_certificate,
    triangular_simple_extension,
    upgrade_to_simple,
    validate_extension,
)
from app.services.matrix_core import Mat2, Mat3, det2, det3, mul2, sigma, theta, transpose2
from app.services.ring_core import (
    IntegersModN,
    LocalizedIntegers,
    QuadraticOrder,
    QuotientRing,
)


def _random_unimodular(ZZ, rng, height=50):
    while True:
        entries = [rng.randint(-height, height) for _ in range(4)]
        if ZZ.is_unimodular(entries):
            return Mat2(ZZ, *entries)


def _full_quadratic_matrix(q, a):
    R = QuadraticOrder(q)
    return Mat2(R, (a, 0), (1, -1), (1, 1), (2, 0))


# ── Certificates ──


class TestCertificates:
    def test_identity_extension(self, ZZ):
        A = Mat2(ZZ, 1, 0, 0, 1)
        extension = assemble_simple_extension(A, Certificate(1, 0, 1, 0))
        assert extension.rows == ((1, 0, 0), (0, 1, -1), (0, 1, 0))
        assert det3(extension) == 1

    def test_reference_extension(self, ZZ):
        A = Mat2(ZZ, 15, 6, 10, 14)
        extension = assemble_simple_extension(A, Certificate(-1, -2, -1, 1))
        assert extension.rows == ((15, 6, -2), (10, 14, 1), (-1, -1, 0))

    def test_invalid_certificate(self, ZZ):
        A = Mat2(ZZ, 15, 6, 10, 14)
        with pytest.raises(InvalidCertificateError, match="does not certify"):
            assemble_simple_extension(A, Certificate(1, 0, 0, 0))

    def test_certificate_read_back(self, ZZ):
        A = Mat2(ZZ, 30, 42, 70, 105)
        extension = Mat3(ZZ, ((30, 42, 1), (70, 105, 3), (1, 1, 0)))
        cert = certificate_of(extension)
        assert cert.quadruple == (-3, 1, 1, -1)
        assert is_valid_certificate(A, cert)
        assert assemble_simple_extension(A, cert) == extension

    def test_transpose_certificate(self, ZZ):
        A = Mat2(ZZ, 15, 6, 10, 14)
        cert_t = find_certificate(transpose2(A))
        cert = transpose_certificate(ZZ, cert_t)
        assert cert.via_transpose
        assert is_valid_certificate(A, cert)

    def test_identity_expansion(self, ZZ, rng):
        for _ in range(500):
            a, b, c, d, e, f, s, t = (rng.randint(-10, 10) for _ in range(8))
            Q = Mat3(ZZ, ((a, b, f), (c, d, -e), (-t, s, 0)))
            assert det3(Q) == (b * e + d * f) * t + (a * e + c * f) * s
            assert det3(Q) == certificate_identity(Mat2(ZZ, a, b, c, d), Certificate(e, f, s, t))

    def test_validate_extension_rejects(self, ZZ):
        A = Mat2(ZZ, 1, 0, 0, 1)
        with pytest.raises(InvariantViolation):
            validate_extension(A, Mat3(ZZ, ((1, 0, 0), (0, 1, 0), (0, 0, 2))), simple=False)
        with pytest.raises(InvariantViolation):
            validate_extension(A, Mat3(ZZ, ((1, 0, 0), (0, 1, 0), (0, 0, 1))), simple=True)


class TestCompletePair:
    def test_direct_pair(self, ZZ):
        cert = complete_pair(Mat2(ZZ, 15, 6, 10, 14), 1, -1)
        assert not cert.via_transpose
        assert is_valid_certificate(Mat2(ZZ, 15, 6, 10, 14), cert)

    def test_transposed_pair(self, ZZ):
        A = Mat2(ZZ, 2, 0, 2, 3)
        cert = complete_pair(A, 1, -1)
        assert cert.via_transpose
        assert is_valid_certificate(A, cert)

    def test_no_completion(self, ZZ):
        assert complete_pair(Mat2(ZZ, 15, 6, 10, 14), 0, 0) is None


# ── Closed forms ──


class TestHeuristics:
    def test_unit_entry(self, ZZ):
        A = Mat2(ZZ, 1, 7, 9, 4)
        assert heuristic_pair(A) == (1, 0)
        extension = assemble_simple_extension(A, heuristic_certificate(A))
        assert extension.rows == ((1, 7, 0), (9, 4, -1), (0, 1, 0))

    def test_diagonal(self, ZZ):
        e, f = heuristic_pair(Mat2(ZZ, 2, 0, 0, 3))
        assert 2 * e + 3 * f == 1

    def test_zero_corner_shape(self, ZZ):
        A = Mat2(ZZ, 0, 3, 2, 6)
        extension = assemble_simple_extension(A, heuristic_certificate(A))
        assert extension.rows == ((0, 3, -1), (2, 6, -1), (1, 1, 0))

    def test_upper_triangular_shape(self, ZZ):
        A = Mat2(ZZ, 6, -10, 0, -15)
        extension = assemble_simple_extension(A, heuristic_certificate(A))
        assert extension.rows == ((6, -10, -1), (0, -15, -1), (1, 1, 0))

    def test_divisibility_case(self, ZZ):
        A = Mat2(ZZ, 4, 8, 12, 5)
        cert = heuristic_certificate(A)
        assert cert is not None and is_valid_certificate(A, cert)

    def test_unimodular_column_over_gaussian_integers(self, gaussian):
        A = Mat2(gaussian, (2, 0), (1, 1), (1, -1), (3, 0))
        cert = heuristic_certificate(A)
        assert cert is not None and is_valid_certificate(A, cert)

    def test_unit_entry_over_residues(self):
        R = IntegersModN(8)
        A = Mat2(R, 3, 2, 4, 5)
        cert = heuristic_certificate(A)
        assert is_valid_certificate(A, cert)


class TestFactoredForm:
    def test_upper_triangular_form(self, ZZ):
        A = Mat2(ZZ, 6, -10, 0, 15)
        ff = factored_form(A)
        assert (ff.g, ff.h) == (6, 5)
        assert ff.l == -3
        assert det2(A) == -ff.g * ff.h * ff.l
        assert ff.a1 * ff.e1 + ff.c1 * ff.f1 == 1
        assert (A.a, A.b, A.c, A.d) == (ff.g * ff.a1, ff.h * ff.b1, ff.g * ff.c1, ff.h * ff.d1)
        assert ff.m == ff.b1 * ff.e1 + ff.d1 * ff.f1

    def test_pr6_pair_identities(self, ZZ, rng):
        checked = 0
        for _ in range(300):
            A = _random_unimodular(ZZ, rng, 30)
            ff = factored_form(A)
            if ff is None or ff.g == 0:
                continue
            wv = pr6_pair(ff)
            if wv is None:
                continue
            w, v = wv
            assert gcd(ff.g, w * ff.m + v * ff.l) == 1
            assert gcd(w, ff.h * v * ff.l) == 1
            e, f = pair_from_pr6(ff, w, v)
            assert complete_pair(A, e, f) is not None
            checked += 1
        assert checked > 0

    def test_factored_certificate(self, ZZ):
        A = Mat2(ZZ, 30, 42, 70, 105)
        cert = factored_certificate(A)
        assert cert is not None and is_valid_certificate(A, cert)

    def test_factored_form_through_integer_lift(self):
        R = IntegersModN(12)
        ff = factored_form(Mat2(R, 4, 6, 6, 3))
        assert ff is not None and ff.ring == R

    def test_no_factored_form_over_quadratic_order(self):
        assert factored_form(_full_quadratic_matrix(5, 3)) is None


class TestElementaryDivisors:
    def test_integer_completeness(self, ZZ, rng):
        for _ in range(300):
            A = _random_unimodular(ZZ, rng)
            cert = elementary_divisor_certificate(A)
            assert cert is not None and is_valid_certificate(A, cert)

    def test_localization(self):
        R = LocalizedIntegers(6)
        A = Mat2.from_rows(R, [[(5, 1), (7, 0)], [(3, 2), (11, 0)]])
        cert = elementary_divisor_certificate(A)
        assert cert is not None and is_valid_certificate(A, cert)

    def test_not_available_over_quadratic_order(self):
        assert elementary_divisor_certificate(_full_quadratic_matrix(5, 3)) is None


# ── Search ──


class TestSearch:
    def test_first_pair_in_height_order(self, ZZ):
        assert search_pair(Mat2(ZZ, 15, 6, 10, 14), 3) == (1, -1)

    def test_search_counts_pairs(self, ZZ):
        cert, searched = search_certificate(Mat2(ZZ, 15, 6, 10, 14), 3)
        assert cert is not None
        assert searched == 6

    def test_finite_ring_searched_exhaustively(self):
        R = IntegersModN(9)
        A = Mat2(R, 3, 3, 3, 1)
        cert, searched = search_certificate(A, 1)
        assert cert is not None and is_valid_certificate(A, cert)

    def test_rejects_non_unimodular(self, ZZ):
        with pytest.raises(NotUnimodularError):
            search_pair(Mat2(ZZ, 2, 4, 6, 8), 3)


# ── Determinant zero ──


class TestNonfullFactorize:
    def test_integer_factorization(self, ZZ):
        A = Mat2(ZZ, 2, 3, 4, 6)
        witness = nonfull_factorize(A)
        assert witness.mode == WitnessMode.FACTORIZATION
        assert witness.column == (1, 2)
        assert witness.row == (2, 3)

    def test_zero_first_column(self, ZZ):
        witness = nonfull_factorize(Mat2(ZZ, 0, 1, 0, 2))
        assert witness.column == (1, 2)
        assert witness.row == (0, 1)

    def test_extension_from_factorization(self, ZZ):
        A = Mat2(ZZ, 2, 3, 4, 6)
        extension = extension_from_factorization(A, nonfull_factorize(A))
        validate_extension(A, extension, simple=True)

    def test_finite_ring_factorization(self, z6):
        A = Mat2(z6, 1, 2, 3, 0)
        witness = nonfull_factorize(A)
        assert witness.mode == WitnessMode.FACTORIZATION
        (l, m), (o, q) = witness.column, witness.row
        assert (z6.mul(l, o), z6.mul(l, q), z6.mul(m, o), z6.mul(m, q)) == A.entries

    @pytest.mark.parametrize("q,a", [(5, 3), (13, 7)])
    def test_full_matrix_over_quadratic_order(self, q, a):
        B = _full_quadratic_matrix(q, a)
        witness = nonfull_factorize(B)
        assert witness.mode == WitnessMode.FULL_PROOF
        assert witness.pivot == (1, 1)
        assert witness.divisors == ((1, 0), (2, 0))
        reasons = [case.reason for case in witness.cases]
        assert reasons == [
            "2 does not divide entry (1,2) = 1-θ",
            "2 does not divide entry (2,1) = 1+θ",
        ]

    @pytest.mark.parametrize("n", range(2, 21))
    def test_factorization_iff_certificate_over_residues(self, n):
        R = IntegersModN(n)
        checked = 0
        for a, b, c, d in itertools.product(range(n), repeat=4):
            if (a * d - b * c) % n or not R.is_unimodular((a, b, c, d)):
                continue
            A = Mat2(R, a, b, c, d)
            factorizable = nonfull_factorize(A).mode == WitnessMode.FACTORIZATION
            assert factorizable == (search_pair(A, 0) is not None)
            checked += 1
        assert checked > 0

    def test_nonzero_determinant_rejected(self, ZZ):
        with pytest.raises(PreconditionError):
            nonfull_factorize(Mat2(ZZ, 1, 0, 0, 2))

    def test_non_unimodular_rejected(self, ZZ):
        with pytest.raises(NotUnimodularError) as info:
            nonfull_factorize(Mat2(ZZ, 2, 4, 4, 8))
        assert info.value.generators == [2, 4, 4, 8]


# ── Diagonal reduction and stable range ──


class TestDiagonalReduction:
    def test_random_certified_matrices(self, ZZ, rng):
        for _ in range(200):
            A = _random_unimodular(ZZ, rng)
            cert = find_certificate(A)
            M, N = diagonal_reduce(A, cert)
            assert mul2(mul2(M, A), N) == Mat2(ZZ, 1, 0, 0, det2(A))
            assert abs(det2(M)) == 1 and abs(det2(N)) == 1
            extension = extension_from_diagonal(M, N, det2(A), A)
            validate_extension(A, extension, simple=True)

    def test_rejects_invalid_certificate(self, ZZ):
        with pytest.raises(InvalidCertificateError):
            diagonal_reduce(Mat2(ZZ, 15, 6, 10, 14), Certificate(1, 0, 0, 0))

    def test_diagonal_mismatch(self, ZZ):
        A = Mat2(ZZ, 15, 6, 10, 14)
        M, N = diagonal_reduce(A, find_certificate(A))
        with pytest.raises(PreconditionError):
            extension_from_diagonal(M, N, 151, A)


class TestStableRange:
    def _triples(self, rng, count, nonzero_last=False):
        found = 0
        while found < count:
            a, b, c = (rng.randint(-50, 50) for _ in range(3))
            if gcd(gcd(a, b), c) != 1 or (nonzero_last and c == 0):
                continue
            found += 1
            yield a, b, c

    def test_stable_range2_over_integers(self, ZZ, rng):
        for e1, f1, b in self._triples(rng, 500):
            r1, r2 = stable_range2_reduce(ZZ, e1, f1, b)
            assert gcd(e1 + b * r1, f1 + b * r2) == 1

    def test_fsr_over_integers(self, ZZ, rng):
        for a, b, c in self._triples(rng, 500, nonzero_last=True):
            r = fsr_reduce(ZZ, a, b, c)
            assert gcd(a + b * r, c) == 1

    def test_fsr_over_residues(self, z6):
        r = fsr_reduce(z6, 2, 1, 4)
        assert z6.is_unimodular((z6.add(2, r), 4))

    def test_stable_range2_over_quadratic_order(self):
        R = QuadraticOrder(5)
        e1, f1, b = (2, 0), (1, 1), (3, 0)
        r1, r2 = stable_range2_reduce(R, e1, f1, b)
        assert R.is_unimodular((R.add(e1, R.mul(b, r1)), R.add(f1, R.mul(b, r2))))

    def test_candidate_limit_over_quadratic_order(self):
        R = QuadraticOrder(5)
        # (2, 1+θ) is a non-principal proper ideal, so (0, 0) is rejected
        with pytest.raises(CapExceededError, match="among 1 candidates"):
            stable_range2_reduce(R, (2, 0), (1, 1), (3, 0), limit=1)

    def test_candidate_limit_from_settings(self, monkeypatch):
        monkeypatch.setattr(get_settings(), "stable_range_candidates", 1)
        with pytest.raises(CapExceededError):
            stable_range2_reduce(QuadraticOrder(5), (2, 0), (1, 1), (3, 0))

    def test_preconditions(self, ZZ):
        with pytest.raises(PreconditionError):
            fsr_reduce(ZZ, 1, 2, 0)
        with pytest.raises(PreconditionError):
            stable_range2_reduce(ZZ, 2, 4, 6)


class TestTriangular:
    def test_random_upper_triangular(self, ZZ, rng):
        done = 0
        while done < 200:
            a, b, d = rng.randint(-50, 50), rng.randint(-50, 50), rng.randint(-50, 50)
            if a == 0 or gcd(gcd(a, b), d) != 1:
                continue
            extension = triangular_simple_extension(Mat2(ZZ, a, b, 0, d))
            assert extension.entry(1, 2) == -1
            assert theta(extension) == Mat2(ZZ, a, b, 0, d)
            assert det3(extension) == 1
            done += 1

    def test_reference_upper_triangular(self, ZZ):
        extension = triangular_simple_extension(Mat2(ZZ, 6, -10, 0, -15))
        assert extension.entry(1, 2) == -1
        assert extension.entry(2, 2) == 0

    def test_zero_corner_over_finite_ring(self, z6):
        extension = triangular_simple_extension(Mat2(z6, 0, 2, 0, 3))
        assert extension.entry(1, 2) == z6.neg(1)

    def test_zero_corner_over_integers(self, ZZ):
        with pytest.raises(PreconditionError):
            triangular_simple_extension(Mat2(ZZ, 0, 2, 0, 3))

    def test_not_triangular(self, ZZ):
        with pytest.raises(PreconditionError):
            triangular_simple_extension(Mat2(ZZ, 1, 2, 3, 4))


class TestUpgrade:
    def test_upgrade_moves_pair(self, ZZ):
        A = Mat2(ZZ, 7, 0, 0, 11)
        cert = upgrade_to_simple(A, 2, 2)
        assert is_valid_certificate(A, cert)
        assert not cert.via_transpose
        assert (cert.e - 2) % 77 == 0 and (cert.f - 2) % 77 == 0

    def test_upgrade_random_extendable_matrices(self, ZZ, rng):
        done = 0
        while done < 100:
            A = _random_unimodular(ZZ, rng, height=30)
            D = det2(A)
            if abs(D) <= 1:
                continue
            e1, f1 = rng.randint(-30, 30), rng.randint(-30, 30)
            u, w = A.a * e1 + A.c * f1, A.b * e1 + A.d * f1
            if gcd(gcd(u, w), D) != 1:
                continue
            cert = upgrade_to_simple(A, e1, f1)
            assert cert is not None
            assert is_valid_certificate(A, cert)
            if not cert.via_transpose:
                assert (cert.e - e1) % D == 0 and (cert.f - f1) % D == 0
            done += 1

    def test_upgrade_precondition(self, ZZ):
        with pytest.raises(PreconditionError):
            upgrade_to_simple(Mat2(ZZ, 7, 0, 0, 11), 7, 0)


# ── Pipelines ──


class TestSimplyExtend:
    @pytest.mark.parametrize("entries", [
        (15, 6, 10, 14),
        (30, 42, 70, 105),
        (0, 3, 2, 6),
        (6, -10, 0, -15),
        (1, 7, 9, 4),
    ])
    def test_reference_matrices(self, ZZ, entries):
        A = Mat2(ZZ, *entries)
        outcome = simply_extend(A)
        assert outcome.status == OutcomeStatus.SIMPLE
        assert outcome.extension.entry(2, 2) == 0
        assert is_valid_certificate(A, outcome.certificate)

    def test_integer_completeness(self, ZZ, rng):
        for _ in range(1000):
            A = _random_unimodular(ZZ, rng)
            outcome = simply_extend(A)
            assert outcome.status == OutcomeStatus.SIMPLE
            validate_extension(A, outcome.extension, simple=True)

    def test_determinant_zero_over_integers(self, ZZ):
        outcome = simply_extend(Mat2(ZZ, 2, 3, 4, 6))
        assert outcome.status == OutcomeStatus.SIMPLE
        assert outcome.route == "factorization"
        assert outcome.witness.mode == WitnessMode.FACTORIZATION

    @pytest.mark.parametrize("q,a", [(5, 3), (13, 7)])
    def test_full_matrix_not_extendable(self, q, a):
        outcome = simply_extend(_full_quadratic_matrix(q, a))
        assert outcome.status == OutcomeStatus.NOT_EXTENDABLE
        assert outcome.witness.mode == WitnessMode.FULL_PROOF

    def test_every_matrix_over_z4(self):
        R = IntegersModN(4)
        for entries in itertools.product(range(4), repeat=4):
            if not R.is_unimodular(entries):
                continue
            assert simply_extend(Mat2(R, *entries)).status == OutcomeStatus.SIMPLE

    def test_quotient_of_quadratic_order(self):
        R = QuotientRing(QuadraticOrder(5), ((2, 0),))
        A = Mat2.from_rows(R, [[(3, 0), (1, -1)], [(1, 1), (2, 0)]])
        assert simply_extend(A).status == OutcomeStatus.SIMPLE

    def test_localization(self):
        R = LocalizedIntegers(6)
        outcome = simply_extend(Mat2(R, (5, 0), (0, 0), (0, 0), (7, 0)))
        assert outcome.status == OutcomeStatus.SIMPLE

    def test_non_unimodular(self, ZZ):
        with pytest.raises(NotUnimodularError):
            simply_extend(Mat2(ZZ, 2, 4, 6, 8))

    def test_reduction_route(self, ZZ, monkeypatch):
        original_find = engine.find_certificate
        original_search = engine.search_certificate
        monkeypatch.setattr(
            engine, "find_certificate",
            lambda A: original_find(A) if A.ring.capabilities.finite else None,
        )
        monkeypatch.setattr(
            engine, "search_certificate",
            lambda A, bound: original_search(A, bound) if A.ring.capabilities.finite else (None, 0),
        )
        A = Mat2(ZZ, 15, 6, 10, 14)
        outcome = simply_extend(A)
        assert outcome.status == OutcomeStatus.SIMPLE
        assert outcome.route == "reduction+upgrade"

    def test_reduction_without_upgrade(self, ZZ, monkeypatch):
        original_find = engine.find_certificate
        monkeypatch.setattr(
            engine, "find_certificate",
            lambda A: original_find(A) if A.ring.capabilities.finite else None,
        )
        monkeypatch.setattr(engine, "upgrade_to_simple", lambda A, e1, f1, cap=None: None)
        A = Mat2(ZZ, 15, 6, 10, 14)
        outcome = extend(A)
        assert outcome.status == OutcomeStatus.EXTENDABLE
        assert outcome.route == "reduction"
        assert theta(outcome.extension) == A
        assert det3(outcome.extension) == 1


class TestExtend:
    def test_unit_determinant(self, ZZ):
        outcome = extend(Mat2(ZZ, 2, 1, 1, 1))
        assert outcome.status == OutcomeStatus.SIMPLE
        assert outcome.route == "unit-determinant"

    def test_full_matrix(self):
        outcome = extend(_full_quadratic_matrix(5, 3))
        assert outcome.status == OutcomeStatus.NOT_EXTENDABLE
        assert [d for d in outcome.witness.divisors] == [(1, 0), (2, 0)]

    def test_closed_form(self, ZZ):
        outcome = extend(Mat2(ZZ, 30, 42, 70, 105))
        assert outcome.status == OutcomeStatus.SIMPLE


class TestOutcome:
    def test_extendable_only(self, ZZ):
        A = Mat2(ZZ, 2, 1, 1, 1)
        outcome = ExtensionOutcome.extendable_only(A, sigma(A, 1), route="unit-determinant")
        assert outcome.decided
        assert outcome.certificate is None

    def test_factorization_cannot_refute(self, ZZ):
        witness = FullnessWitness(WitnessMode.FACTORIZATION, column=(1, 2), row=(2, 3))
        with pytest.raises(InvariantViolation):
            ExtensionOutcome.not_extendable(Mat2(ZZ, 2, 3, 4, 6), witness, route="factorization")

    def test_undecided(self, ZZ):
        outcome = ExtensionOutcome.undecided(Mat2(ZZ, 1, 0, 0, 1), 4, route="search")
        assert not outcome.decided
        assert outcome.bound == 4


class TestEquivalenceStability:
    @pytest.mark.parametrize("n", [6, 8])
    def test_transpose_and_equivalence(self, n):
        R = IntegersModN(n)
        rng = random.Random(n)
        invertible = [
            Mat2(R, a, b, c, d)
            for a, b, c, d in itertools.product(range(n), repeat=4)
            if R.is_unit(R.sub(R.mul(a, d), R.mul(b, c)))
        ]
        unimodular = [e for e in itertools.product(range(n), repeat=4) if R.is_unimodular(e)]
        assert len(unimodular) == {6: 1200, 8: 3840}[n]
        for entries in unimodular:
            A = Mat2(R, *entries)
            verdict = simply_extend(A).status
            assert simply_extend(transpose2(A)).status == verdict
            for _ in range(20):
                P, Q = rng.choice(invertible), rng.choice(invertible)
                assert simply_extend(mul2(mul2(P, A), Q)).status == verdict
