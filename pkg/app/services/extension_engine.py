"""
Extension Engine - deciding and constructing SL3-extensions

A unimodular 2x2 matrix A is extendable when it is the upper-left block of
a determinant-one 3x3 matrix A+, and simply extendable when A+ can be
chosen with (3,3) entry zero. The simple extensions of A are exactly

    [[a, b, f], [c, d, -e], [-t, s, 0]]  with  a(es) + b(et) + c(fs) + d(ft) = 1

so finding a simple extension means finding a certificate (e, f, s, t).
"""
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import islice
from typing import Iterator, List, Optional, Tuple

from sympy.ntheory.modular import crt

from app.config import get_settings
from app.services.errors import (
    CapExceededError,
    InvalidCertificateError,
    InvariantViolation,
    NotUnimodularError,
    PreconditionError,
    RingError,
)
from app.services.lattice import smith_reduce_2x2
from app.services.matrix_core import (
    Mat2,
    Mat3,
    det2,
    det3,
    inverse2,
    is_unimodular_mat2,
    mul2,
    mul3,
    reduce_mod,
    sigma,
    theta,
    transpose2,
)
from app.services.ring_core import Element, Integers, QuadraticOrder, Ring

logger = logging.getLogger(__name__)


# ── Domain types ──


@dataclass(frozen=True)
class Certificate:
    """(e, f, s, t) with a(es) + b(et) + c(fs) + d(ft) = 1 for the certified matrix."""
    e: Element
    f: Element
    s: Element
    t: Element
    via_transpose: bool = field(default=False, compare=False)

    @property
    def quadruple(self) -> Tuple[Element, Element, Element, Element]:
        return self.e, self.f, self.s, self.t


@dataclass(frozen=True)
class FactoredForm:
    """
    a = g*a1, c = g*c1, b = h*b1, d = h*d1 with a1*e1 + c1*f1 = 1,
    l = b1*c1 - a1*d1 and m = b1*e1 + d1*f1. Then det(A) = -g*h*l.
    """
    ring: Ring
    g: Element
    h: Element
    a1: Element
    b1: Element
    c1: Element
    d1: Element
    e1: Element
    f1: Element
    l: Element
    m: Element


class WitnessMode(str, Enum):
    FULL_PROOF = "full-proof"
    FACTORIZATION = "factorization"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class DivisorCase:
    """One excluded splitting of the pivot entry and the divisibility fact that fails."""
    divisor: Element
    reason: str


@dataclass(frozen=True)
class FullnessWitness:
    mode: WitnessMode
    column: Optional[Tuple[Element, Element]] = None
    row: Optional[Tuple[Element, Element]] = None
    pivot: Optional[Tuple[int, int]] = None
    divisors: Tuple[Element, ...] = ()
    cases: Tuple[DivisorCase, ...] = ()
    searched: int = 0
    modulus: Optional[Element] = None


class OutcomeStatus(str, Enum):
    SIMPLE = "simple"
    EXTENDABLE = "extendable"
    NOT_EXTENDABLE = "not_extendable"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class ExtensionOutcome:
    status: OutcomeStatus
    matrix: Mat2
    extension: Optional[Mat3] = None
    certificate: Optional[Certificate] = None
    witness: Optional[FullnessWitness] = None
    bound: Optional[int] = None
    route: str = ""

    @property
    def decided(self) -> bool:
        return self.status != OutcomeStatus.UNDECIDED

    @classmethod
    def simple(cls, A: Mat2, extension: Mat3, route: str, witness: Optional[FullnessWitness] = None) -> "ExtensionOutcome":
        validate_extension(A, extension, simple=True)
        return cls(OutcomeStatus.SIMPLE, A, extension, certificate_of(extension), witness, route=route)

    @classmethod
    def extendable_only(cls, A: Mat2, extension: Mat3, route: str) -> "ExtensionOutcome":
        validate_extension(A, extension, simple=False)
        return cls(OutcomeStatus.EXTENDABLE, A, extension, route=route)

    @classmethod
    def not_extendable(cls, A: Mat2, witness: FullnessWitness, route: str) -> "ExtensionOutcome":
        if witness.mode == WitnessMode.FACTORIZATION:
            raise InvariantViolation("A factorization witness proves extendability, not the opposite")
        return cls(OutcomeStatus.NOT_EXTENDABLE, A, witness=witness, route=route)

    @classmethod
    def undecided(cls, A: Mat2, bound: int, route: str) -> "ExtensionOutcome":
        return cls(OutcomeStatus.UNDECIDED, A, bound=bound, route=route)


# ── Certificates and assembly ──


def certificate_identity(A: Mat2, cert: Certificate) -> Element:
    """a(es) + b(et) + c(fs) + d(ft)."""
    R = A.ring
    e, f, s, t = cert.quadruple
    products = (R.mul(e, s), R.mul(e, t), R.mul(f, s), R.mul(f, t))
    return R.dot(A.entries, products)


def is_valid_certificate(A: Mat2, cert: Certificate) -> bool:
    return certificate_identity(A, cert) == A.ring.one


def _assemble(A: Mat2, cert: Certificate, corner: Element) -> Mat3:
    R = A.ring
    return Mat3(R, (
        (A.a, A.b, cert.f),
        (A.c, A.d, R.neg(cert.e)),
        (R.neg(cert.t), cert.s, corner),
    ))


def assemble_simple_extension(A: Mat2, cert: Certificate) -> Mat3:
    """[[a, b, f], [c, d, -e], [-t, s, 0]]."""
    if not is_valid_certificate(A, cert):
        R = A.ring
        raise InvalidCertificateError(
            f"({', '.join(R.format(x) for x in cert.quadruple)}) does not certify {A}: "
            f"identity evaluates to {R.format(certificate_identity(A, cert))}"
        )
    return _assemble(A, cert, A.ring.zero)


def certificate_of(extension: Mat3) -> Certificate:
    """Read (e, f, s, t) back from a simple extension."""
    R = extension.ring
    rows = extension.rows
    return Certificate(R.neg(rows[1][2]), rows[0][2], rows[2][1], R.neg(rows[2][0]))


def transpose_certificate(R: Ring, cert: Certificate) -> Certificate:
    """A certificate of A from a certificate (e, f, s, t) of A^T: (-s, -t, -e, -f)."""
    return Certificate(R.neg(cert.s), R.neg(cert.t), R.neg(cert.e), R.neg(cert.f), via_transpose=True)


def validate_extension(A: Mat2, extension: Mat3, simple: bool) -> None:
    R = A.ring
    if theta(extension) != A:
        raise InvariantViolation(f"Extension {extension} does not restrict to {A}")
    if det3(extension) != R.one:
        raise InvariantViolation(f"Extension {extension} has determinant {R.format(det3(extension))}")
    if simple and not R.is_zero(extension.entry(2, 2)):
        raise InvariantViolation(f"Simple extension {extension} has nonzero (3,3) entry")


def complete_pair(A: Mat2, e: Element, f: Element) -> Optional[Certificate]:
    """
    Certificate with first half (e, f) when (ae+cf, be+df) is unimodular.

    Falls back to the transposed pair (ae+bf, ce+df), whose Bezout witness
    certifies A^T; the result is converted back to a certificate of A.
    """
    R = A.ring
    u = R.add(R.mul(A.a, e), R.mul(A.c, f))
    w = R.add(R.mul(A.b, e), R.mul(A.d, f))
    st = R.bezout((u, w))
    if st is not None:
        return Certificate(e, f, st[0], st[1])

    u_t = R.add(R.mul(A.a, e), R.mul(A.b, f))
    w_t = R.add(R.mul(A.c, e), R.mul(A.d, f))
    st = R.bezout((u_t, w_t))
    if st is not None:
        logger.debug("Pair (%s, %s) certifies the transpose of %s", R.format(e), R.format(f), A)
        return transpose_certificate(R, Certificate(e, f, st[0], st[1]))
    return None


# ── Closed-form certificates ──


def _heuristic_candidates(A: Mat2) -> Iterator[Optional[Certificate]]:
    R = A.ring
    a, b, c, d = A.entries
    one, zero = R.one, R.zero

    # A unit entry
    inv = R.inverse(a)
    if inv is not None:
        yield Certificate(one, zero, inv, zero)
    inv = R.inverse(b)
    if inv is not None:
        yield Certificate(one, zero, zero, inv)
    inv = R.inverse(c)
    if inv is not None:
        yield Certificate(zero, one, inv, zero)
    inv = R.inverse(d)
    if inv is not None:
        yield Certificate(zero, one, zero, inv)

    # A unimodular row or column
    st = R.bezout((a, b))
    if st is not None:
        yield Certificate(one, zero, st[0], st[1])
    st = R.bezout((c, d))
    if st is not None:
        yield Certificate(zero, one, st[0], st[1])
    ef = R.bezout((a, c))
    if ef is not None:
        yield Certificate(ef[0], ef[1], one, zero)
    ef = R.bezout((b, d))
    if ef is not None:
        yield Certificate(ef[0], ef[1], zero, one)

    # Two entries in the Jacobson radical
    if R.jacobson_contains(b) and R.jacobson_contains(c):
        ef = R.bezout((a, d))
        if ef is not None:
            if R.is_zero(b) and R.is_zero(c):
                yield Certificate(ef[0], ef[1], one, one)
            else:
                yield complete_pair(A, ef[0], ef[1])
    if R.jacobson_contains(a) and R.jacobson_contains(d):
        xy = R.bezout((b, c))
        if xy is not None:
            yield complete_pair(A, xy[1], xy[0])

    # a | b and a | c, with a*q + d*f = 1
    if not R.is_zero(a):
        beta, gamma = R.divide(b, a), R.divide(c, a)
        if beta is not None and gamma is not None:
            qf = R.bezout((a, d))
            if qf is not None:
                q, f = qf
                s = R.sub(one, beta)
                yield Certificate(R.sub(q, R.mul(gamma, R.mul(f, s))), f, s, one)

    # [[0, b], [c, 1+b+c]] and [[a, b], [0, 1-a+b]]
    minus_one = R.neg(one)
    yield Certificate(one, minus_one, one, minus_one)
    yield complete_pair(A, one, minus_one)


def heuristic_certificate(A: Mat2) -> Optional[Certificate]:
    """First closed-form certificate that applies to A, if any."""
    for cert in _heuristic_candidates(A):
        if cert is not None and is_valid_certificate(A, cert):
            return cert
    return None


def heuristic_pair(A: Mat2) -> Optional[Tuple[Element, Element]]:
    cert = heuristic_certificate(A)
    return None if cert is None else (cert.e, cert.f)


# ── Factored form ──


def _factored_form_over(R: Ring, entries: Tuple[Element, ...]) -> Optional[FactoredForm]:
    a, b, c, d = entries
    g = R.gcd(a, c)
    if R.is_zero(g):
        return None
    h = R.gcd(b, d)
    a1, c1 = R.divide(a, g), R.divide(c, g)
    if R.is_zero(h):
        b1, d1 = R.one, R.zero
    else:
        b1, d1 = R.divide(b, h), R.divide(d, h)
    ef = R.bezout((a1, c1))
    if ef is None:
        raise InvariantViolation(f"Cofactors {R.format(a1)}, {R.format(c1)} of a gcd are not coprime")
    e1, f1 = ef
    l = R.sub(R.mul(b1, c1), R.mul(a1, d1))
    m = R.add(R.mul(b1, e1), R.mul(d1, f1))
    return FactoredForm(R, g, h, a1, b1, c1, d1, e1, f1, l, m)


def factored_form(A: Mat2) -> Optional[FactoredForm]:
    """
    Column gcds of A and the derived (l, m). Rings without a gcd are handled
    through an integer lift when one exists (residue rings); None otherwise
    or when the first column is zero.
    """
    R = A.ring
    if R.capabilities.gcd:
        return _factored_form_over(R, A.entries)
    lift = R.integer_lift(A.entries)
    if lift is None:
        return None
    ints, _ = lift
    ff = _factored_form_over(Integers(), tuple(ints))
    if ff is None:
        return None
    values = (ff.g, ff.h, ff.a1, ff.b1, ff.c1, ff.d1, ff.e1, ff.f1, ff.l, ff.m)
    return FactoredForm(R, *(R.from_int(x) for x in values))


def pr6_pair(ff: FactoredForm) -> Optional[Tuple[Element, Element]]:
    """(w, v) with (g, wm+vl) and (w, hvl) unimodular, from whichever of (g,l), (g,m), (h,m), (h,l) is unimodular."""
    R = ff.ring
    if R.is_zero(ff.g):
        raise PreconditionError("pr6_pair needs g != 0")
    if R.is_unimodular((ff.g, ff.l)):
        return ff.g, R.one
    if R.is_unimodular((ff.g, ff.m)):
        return R.one, R.zero
    wv = R.bezout((ff.m, R.mul(ff.h, ff.l)))
    if wv is not None:
        return wv[0], R.mul(ff.h, wv[1])
    pq = R.bezout((ff.l, ff.m))
    if pq is not None and R.is_unimodular((ff.h, ff.l)):
        p, q = pq
        return R.add(R.mul(ff.h, q), ff.l), R.sub(R.mul(ff.h, p), ff.m)
    return None


def pair_from_pr6(ff: FactoredForm, w: Element, v: Element) -> Tuple[Element, Element]:
    """(e, f) = (w*e1 + c1*v, w*f1 - a1*v)."""
    R = ff.ring
    return (
        R.add(R.mul(w, ff.e1), R.mul(ff.c1, v)),
        R.sub(R.mul(w, ff.f1), R.mul(ff.a1, v)),
    )


def factored_certificate(A: Mat2) -> Optional[Certificate]:
    """Certificate through the factored form of A, then of A^T."""
    R = A.ring
    for M, transposed in ((A, False), (transpose2(A), True)):
        ff = factored_form(M)
        if ff is None or R.is_zero(ff.g):
            continue
        wv = pr6_pair(ff)
        if wv is None:
            continue
        cert = complete_pair(M, *pair_from_pr6(ff, *wv))
        if cert is None:
            continue
        if transposed:
            cert = transpose_certificate(R, cert)
        if is_valid_certificate(A, cert):
            return cert
    return None


def elementary_divisor_certificate(A: Mat2) -> Optional[Certificate]:
    """
    Certificate from the Smith form of an integer lift of A.

    M*A*N = Diag(p, *) with p the gcd of the entries; when p is a unit of the
    ring, the first row of M and p^-1 times the first column of N certify A.
    """
    R = A.ring
    lift = R.integer_lift(A.entries)
    if lift is None:
        return None
    ints, scale = lift
    M, N, (d1, _) = smith_reduce_2x2(*ints)
    inv = R.inverse(R.mul(scale, R.from_int(d1)))
    if inv is None:
        return None
    cert = Certificate(
        R.from_int(M[0][0]),
        R.from_int(M[0][1]),
        R.mul(R.from_int(N[0][0]), inv),
        R.mul(R.from_int(N[1][0]), inv),
    )
    return cert if is_valid_certificate(A, cert) else None


def find_certificate(A: Mat2) -> Optional[Certificate]:
    """Closed forms, then the factored form, then the elementary-divisor route."""
    for route in (heuristic_certificate, factored_certificate, elementary_divisor_certificate):
        cert = route(A)
        if cert is not None:
            logger.debug("Certificate for %s found by %s", A, route.__name__)
            return cert
    return None


# ── Bounded search ──


def _candidate_pairs(R: Ring, bound: int) -> Iterator[Tuple[Element, Element]]:
    """All pairs over a finite ring; pairs of height <= bound in increasing height otherwise."""
    if R.capabilities.finite:
        cap = get_settings().finite_search_cap
        if R.size > cap:
            raise CapExceededError(f"Ring of size {R.size} exceeds the search cap {cap}")
        elements = list(R.elements())
        for e in elements:
            for f in elements:
                yield e, f
        return

    pool: List[Element] = []
    for h in range(bound + 1):
        pool.extend(R.shell(h))
        for e in pool:
            for f in pool:
                if h == 0 or R.height(e) == h or R.height(f) == h:
                    yield e, f


def _search(A: Mat2, bound: int) -> Tuple[Optional[Tuple[Element, Element]], Optional[Certificate], int]:
    if not is_unimodular_mat2(A):
        raise NotUnimodularError(A.entries)
    searched = 0
    for e, f in _candidate_pairs(A.ring, bound):
        searched += 1
        cert = complete_pair(A, e, f)
        if cert is not None:
            return (e, f), cert, searched
    return None, None, searched


def search_pair(A: Mat2, bound: int) -> Optional[Tuple[Element, Element]]:
    """First (e, f) in increasing height accepted by complete_pair."""
    pair, _, _ = _search(A, bound)
    return pair


def search_certificate(A: Mat2, bound: int) -> Tuple[Optional[Certificate], int]:
    _, cert, searched = _search(A, bound)
    return cert, searched


# ── Determinant zero: factorizations ──


def _check_factorization(A: Mat2, witness: FullnessWitness) -> FullnessWitness:
    R = A.ring
    (l, m), (o, q) = witness.column, witness.row
    product = (R.mul(l, o), R.mul(l, q), R.mul(m, o), R.mul(m, q))
    if product != A.entries:
        raise InvariantViolation(f"Column {witness.column} times row {witness.row} is not {A}")
    return witness


def _factorize_by_gcd(A: Mat2) -> FullnessWitness:
    R = A.ring
    a, b, c, d = A.entries
    g = R.gcd(a, c)
    if R.is_zero(g):
        # zero first column: A = (b, d)^T (0, 1)
        witness = FullnessWitness(WitnessMode.FACTORIZATION, column=(b, d), row=(R.zero, R.one))
        return _check_factorization(A, witness)
    a1, c1 = R.divide(a, g), R.divide(c, g)
    # a*d = b*c forces a1 | b (and c1 | d when a1 = 0)
    h = R.divide(b, a1) if not R.is_zero(a1) else R.divide(d, c1)
    if h is None:
        raise InvariantViolation(f"Cofactor division failed for {A}")
    witness = FullnessWitness(WitnessMode.FACTORIZATION, column=(a1, c1), row=(g, h))
    return _check_factorization(A, witness)


def _factorize_by_search(A: Mat2) -> FullnessWitness:
    cert = find_certificate(A)
    searched = 0
    if cert is None:
        cert, searched = search_certificate(A, 0)
    if cert is None:
        return FullnessWitness(WitnessMode.EXHAUSTIVE, searched=searched)
    M, N = diagonal_reduce(A, cert)
    M_inv, N_inv = inverse2(M), inverse2(N)
    witness = FullnessWitness(
        WitnessMode.FACTORIZATION,
        column=(M_inv.a, M_inv.c),
        row=(N_inv.a, N_inv.b),
        searched=searched,
    )
    return _check_factorization(A, witness)


def _factorize_by_divisors(A: Mat2) -> FullnessWitness:
    R = A.ring
    rows = A.rows
    nonzero = [(i, j) for i in range(2) for j in range(2) if not R.is_zero(rows[i][j])]
    i, j = min(nonzero, key=lambda ij: (R.norm(rows[ij[0]][ij[1]]), ij))
    i2, j2 = 1 - i, 1 - j
    x = rows[i][j]
    fmt = R.format

    divisors = R.divisors_up_to_units(x)
    cases: List[DivisorCase] = []
    for delta in divisors:
        column: List[Element] = [R.zero, R.zero]
        row: List[Element] = [R.zero, R.zero]
        column[i] = delta
        row[j] = R.divide(x, delta)
        row[j2] = R.divide(rows[i][j2], delta)
        if row[j2] is None:
            cases.append(DivisorCase(delta, f"{fmt(delta)} does not divide entry ({i + 1},{j2 + 1}) = {fmt(rows[i][j2])}"))
            continue
        column[i2] = R.divide(rows[i2][j], row[j])
        if column[i2] is None:
            cases.append(DivisorCase(delta, f"{fmt(row[j])} does not divide entry ({i2 + 1},{j + 1}) = {fmt(rows[i2][j])}"))
            continue
        if R.mul(column[i2], row[j2]) != rows[i2][j2]:
            cases.append(DivisorCase(
                delta,
                f"{fmt(column[i2])}*{fmt(row[j2])} differs from entry ({i2 + 1},{j2 + 1}) = {fmt(rows[i2][j2])}",
            ))
            continue
        witness = FullnessWitness(WitnessMode.FACTORIZATION, column=tuple(column), row=tuple(row))
        return _check_factorization(A, witness)

    logger.debug("%s is full: %d divisor cases of %s excluded", A, len(cases), fmt(x))
    return FullnessWitness(
        WitnessMode.FULL_PROOF,
        pivot=(i, j),
        divisors=tuple(divisors),
        cases=tuple(cases),
    )


def nonfull_factorize(A: Mat2) -> FullnessWitness:
    """
    Decide whether a determinant-zero unimodular A is a column times a row.

    Returns a factorization witness, or a proof that none exists: a divisor
    case analysis over quadratic orders, an exhaustive search over finite rings.
    """
    R = A.ring
    if not is_unimodular_mat2(A):
        raise NotUnimodularError(A.entries)
    if not R.is_zero(det2(A)):
        raise PreconditionError(f"{A} has nonzero determinant {R.format(det2(A))}")
    if R.capabilities.gcd:
        return _factorize_by_gcd(A)
    if R.capabilities.finite:
        return _factorize_by_search(A)
    if isinstance(R, QuadraticOrder):
        return _factorize_by_divisors(A)
    raise RingError(f"No factorization method over {R.format_ring()}")


def extension_from_factorization(A: Mat2, witness: FullnessWitness) -> Mat3:
    """[[lo, lq, f], [mo, mq, -e], [-t, s, 0]] with el + fm = 1 and so + tq = 1."""
    if witness.mode != WitnessMode.FACTORIZATION:
        raise PreconditionError("extension_from_factorization needs a factorization witness")
    _check_factorization(A, witness)
    R = A.ring
    ef = R.bezout(witness.column)
    st = R.bezout(witness.row)
    if ef is None or st is None:
        raise NotUnimodularError(list(witness.column) + list(witness.row))
    return assemble_simple_extension(A, Certificate(ef[0], ef[1], st[0], st[1]))


# ── Diagonal reduction ──


def diagonal_reduce(A: Mat2, cert: Certificate) -> Tuple[Mat2, Mat2]:
    """M, N in SL2 with M*A*N = Diag(1, det A); M has first row (e, f), N first column (s, t)."""
    if not is_valid_certificate(A, cert):
        raise InvalidCertificateError(f"Certificate does not certify {A}")
    R = A.ring
    xy = R.bezout((cert.e, cert.f))
    xy2 = R.bezout((cert.s, cert.t))
    if xy is None or xy2 is None:
        raise InvariantViolation("Certificate halves are not unimodular")
    x, y = xy
    x2, y2 = xy2
    M = Mat2(R, cert.e, cert.f, R.neg(y), x)
    N = Mat2(R, cert.s, R.neg(y2), cert.t, x2)

    P = mul2(mul2(M, A), N)
    N = mul2(N, Mat2(R, R.one, R.neg(P.b), R.zero, R.one))
    M = mul2(Mat2(R, R.one, R.zero, R.neg(P.c), R.one), M)

    D = mul2(mul2(M, A), N)
    expected = Mat2(R, R.one, R.zero, R.zero, det2(A))
    if D != expected:
        raise InvariantViolation(f"Diagonal reduction of {A} produced {D}")
    return M, N


def extension_from_diagonal(M: Mat2, N: Mat2, d: Element, A: Optional[Mat2] = None) -> Mat3:
    """sigma(M^-1) * [[1, 0, 0], [0, d, 1], [0, -1, 0]] * sigma(N^-1)."""
    R = M.ring
    d = R.canonical(d)
    core = Mat3(R, (
        (R.one, R.zero, R.zero),
        (R.zero, d, R.one),
        (R.zero, R.neg(R.one), R.zero),
    ))
    extension = mul3(mul3(sigma(inverse2(M), det2(M)), core), sigma(inverse2(N), det2(N)))
    restricted = mul2(mul2(inverse2(M), Mat2(R, R.one, R.zero, R.zero, d)), inverse2(N))
    validate_extension(restricted, extension, simple=True)
    if A is not None and restricted != A:
        raise PreconditionError(f"M*A*N is not Diag(1, {R.format(d)})")
    return extension


# ── Stable range reductions ──


def _crt_choice(R: Ring, primes: List[int], a: Element, b: Element) -> int:
    """r with a + b*r nonzero mod every listed prime that does not divide b."""
    moduli, residues = [], []
    for p in primes:
        if R.residue_mod_prime(b, p) == 0:
            continue
        moduli.append(p)
        residues.append(0 if R.residue_mod_prime(a, p) != 0 else 1)
    if not moduli:
        return 0
    return int(crt(moduli, residues)[0])


def stable_range2_reduce(
    R: Ring,
    e1: Element,
    f1: Element,
    b: Element,
    cap: Optional[int] = None,
    limit: Optional[int] = None,
) -> Tuple[Element, Element]:
    """
    (r1, r2) with (e1 + b*r1, f1 + b*r2) unimodular.

    Without gcds the pairs are searched by height up to cap, trying at most
    limit of them.
    """
    if not R.is_unimodular((e1, f1, b)):
        raise PreconditionError("stable_range2_reduce needs a unimodular triple")
    if R.is_unimodular((e1, f1)):
        return R.zero, R.zero

    if R.capabilities.gcd:
        r1 = R.zero if not R.is_zero(e1) else R.one
        pivot = R.add(e1, R.mul(b, r1))
        r2 = R.from_int(_crt_choice(R, R.prime_divisors(pivot), f1, b))
        result = (r1, r2)
    else:
        settings = get_settings()
        cap = cap if cap is not None else settings.stable_range_cap
        limit = limit if limit is not None else settings.stable_range_candidates
        result = None
        for r1, r2 in islice(_candidate_pairs(R, cap), limit):
            if R.is_unimodular((R.add(e1, R.mul(b, r1)), R.add(f1, R.mul(b, r2)))):
                result = (r1, r2)
                break
        if result is None:
            raise CapExceededError(f"No stable range reduction of height <= {cap} among {limit} candidates")

    r1, r2 = result
    if not R.is_unimodular((R.add(e1, R.mul(b, r1)), R.add(f1, R.mul(b, r2)))):
        raise InvariantViolation("Stable range reduction is not unimodular")
    return result


def fsr_reduce(R: Ring, a: Element, b: Element, c: Element) -> Element:
    """r with (a + b*r, c) unimodular."""
    if R.is_zero(c) or not R.is_unimodular((a, b, c)):
        raise PreconditionError("fsr_reduce needs a unimodular triple with c != 0")
    if R.capabilities.gcd:
        r = R.from_int(_crt_choice(R, R.prime_divisors(c), a, b))
    elif R.capabilities.finite:
        r = next((x for x in R.elements() if R.is_unimodular((R.add(a, R.mul(b, x)), c))), None)
        if r is None:
            raise PreconditionError(f"No reduction of ({R.format(a)}, {R.format(b)}, {R.format(c)}) exists")
    else:
        raise RingError(f"fsr_reduce is not available over {R.format_ring()}")
    if not R.is_unimodular((R.add(a, R.mul(b, r)), c)):
        raise InvariantViolation("fsr reduction is not unimodular")
    return r


def triangular_simple_extension(A: Mat2) -> Mat3:
    """Simple extension of [[a, b], [0, d]] with (2,3) entry -1."""
    R = A.ring
    if not R.is_zero(A.c):
        raise PreconditionError(f"{A} is not upper triangular")
    if not is_unimodular_mat2(A):
        raise NotUnimodularError(A.entries)
    a, b, d = A.a, A.b, A.d

    if R.is_zero(a):
        if not R.capabilities.finite:
            raise PreconditionError("The (1,1) entry is zero")
        # stable range one: b + d*f is a unit for some f
        for f in R.elements():
            inv = R.inverse(R.add(b, R.mul(d, f)))
            if inv is not None:
                return assemble_simple_extension(A, Certificate(R.one, f, R.zero, inv))
        raise InvariantViolation(f"No unit of the form b + d*f for {A}")

    f = fsr_reduce(R, b, d, a)
    st = R.bezout((a, R.add(b, R.mul(d, f))))
    if st is None:
        raise InvariantViolation("fsr reduction did not produce a coprime pair")
    return assemble_simple_extension(A, Certificate(R.one, f, st[0], st[1]))


def upgrade_to_simple(A: Mat2, e1: Element, f1: Element, cap: Optional[int] = None) -> Optional[Certificate]:
    """Move (e1, f1) by multiples of det(A) until it completes to a certificate."""
    R = A.ring
    D = det2(A)
    u = R.add(R.mul(A.a, e1), R.mul(A.c, f1))
    w = R.add(R.mul(A.b, e1), R.mul(A.d, f1))
    if not R.is_unimodular((u, w, D)):
        raise PreconditionError("(ae+cf, be+df, det) is not unimodular")
    try:
        r1, r2 = stable_range2_reduce(R, e1, f1, D, cap)
    except CapExceededError as e:
        logger.warning("Upgrade of %s abandoned: %s", A, e)
        return None
    e = R.add(e1, R.mul(D, r1))
    f = R.add(f1, R.mul(D, r2))
    cert = complete_pair(A, e, f)
    if cert is None:
        raise InvariantViolation(f"Upgraded pair ({R.format(e)}, {R.format(f)}) does not complete for {A}")
    return cert


# ── Pipelines ──


def _effective_bound(R: Ring, bound: Optional[int]) -> int:
    settings = get_settings()
    bound = bound or settings.default_search_bound
    if isinstance(R, QuadraticOrder):
        bound = min(bound, settings.quadratic_search_bound)
    return bound


def _extend_by_reduction(A: Mat2, bound: int) -> ExtensionOutcome:
    """Extendability through the simple extendability of A modulo det(A), then lift."""
    R = A.ring
    D = det2(A)
    reduced_matrix = reduce_mod(A, D)
    Q = reduced_matrix.ring
    try:
        reduced = simply_extend(reduced_matrix, bound)
    except CapExceededError as e:
        logger.warning("Reduction of %s modulo %s too large: %s", A, R.format(D), e)
        return ExtensionOutcome.undecided(A, bound, route="reduction")

    if reduced.status == OutcomeStatus.NOT_EXTENDABLE:
        return ExtensionOutcome.not_extendable(A, replace(reduced.witness, modulus=D), route="reduction")
    if reduced.status != OutcomeStatus.SIMPLE:
        return ExtensionOutcome.undecided(A, bound, route="reduction")

    lifted = Certificate(*(R.lift_from(Q, x) for x in reduced.certificate.quadruple))
    B = _assemble(A, lifted, R.zero)
    w = R.divide(R.sub(det3(B), R.one), D)
    if w is None:
        raise InvariantViolation(f"det(B) - 1 is not a multiple of {R.format(D)}")
    extension = B.with_entry(2, 2, R.neg(w))
    validate_extension(A, extension, simple=False)

    cert = upgrade_to_simple(A, lifted.e, lifted.f)
    if cert is not None:
        return ExtensionOutcome.simple(A, assemble_simple_extension(A, cert), route="reduction+upgrade")
    return ExtensionOutcome.extendable_only(A, extension, route="reduction")


def simply_extend(A: Mat2, bound: Optional[int] = None) -> ExtensionOutcome:
    """
    Decide simple extendability of A and construct an extension.

    Determinant zero goes through factorizations. Otherwise: closed forms,
    factored form, elementary divisors, bounded search, and finally the
    mod-det reduction followed by the stable range upgrade.
    """
    R = A.ring
    if not is_unimodular_mat2(A):
        raise NotUnimodularError(A.entries)
    effective = _effective_bound(R, bound)

    if R.is_zero(det2(A)):
        witness = nonfull_factorize(A)
        if witness.mode == WitnessMode.FACTORIZATION:
            return ExtensionOutcome.simple(A, extension_from_factorization(A, witness), "factorization", witness)
        return ExtensionOutcome.not_extendable(A, witness, route="factorization")

    cert = find_certificate(A)
    if cert is not None:
        return ExtensionOutcome.simple(A, assemble_simple_extension(A, cert), route="closed-form")

    try:
        cert, searched = search_certificate(A, effective)
    except CapExceededError as e:
        logger.warning("Search for %s abandoned: %s", A, e)
        return ExtensionOutcome.undecided(A, effective, route="search")
    if cert is not None:
        return ExtensionOutcome.simple(A, assemble_simple_extension(A, cert), route="search")
    if R.capabilities.finite:
        return ExtensionOutcome.not_extendable(A, FullnessWitness(WitnessMode.EXHAUSTIVE, searched=searched), "search")

    logger.debug("Search exhausted at height %d for %s, reducing modulo det", effective, A)
    outcome = _extend_by_reduction(A, effective)
    if outcome.status == OutcomeStatus.NOT_EXTENDABLE and R.capabilities.gcd:
        raise InvariantViolation(f"{A} reported not extendable over an elementary divisor ring")
    if outcome.status in (OutcomeStatus.SIMPLE, OutcomeStatus.NOT_EXTENDABLE):
        return outcome
    return ExtensionOutcome.undecided(A, effective, route="search")


def extend(A: Mat2, bound: Optional[int] = None) -> ExtensionOutcome:
    """Decide extendability of A; extendable with a zero corner whenever a certificate turns up."""
    R = A.ring
    if not is_unimodular_mat2(A):
        raise NotUnimodularError(A.entries)
    D = det2(A)

    inv = R.inverse(D)
    if inv is not None:
        cert = heuristic_certificate(A)
        if cert is not None:
            return ExtensionOutcome.simple(A, assemble_simple_extension(A, cert), route="unit-determinant")
        return ExtensionOutcome.extendable_only(A, sigma(A, inv), route="unit-determinant")

    if R.is_zero(D):
        return simply_extend(A, bound)

    cert = find_certificate(A)
    if cert is not None:
        return ExtensionOutcome.simple(A, assemble_simple_extension(A, cert), route="closed-form")
    return _extend_by_reduction(A, _effective_bound(R, bound))