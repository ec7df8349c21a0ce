"""
Matrix Core - 2x2 and 3x3 matrices over a ring

Matrices are immutable values; every operation returns a new matrix.
"""
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence, Tuple

from app.services.errors import PreconditionError, RingError
from app.services.ring_core import Element, Ring


@dataclass(frozen=True)
class Mat2:
    """[[a, b], [c, d]] over ring."""
    ring: Ring
    a: Element
    b: Element
    c: Element
    d: Element

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence[Element]]) -> "Mat2":
        if len(rows) != 2 or any(len(row) != 2 for row in rows):
            raise RingError("A 2x2 matrix needs two rows of two entries")
        return cls(ring, *(ring.canonical(x) for row in rows for x in row))

    @property
    def rows(self) -> Tuple[Tuple[Element, Element], Tuple[Element, Element]]:
        return (self.a, self.b), (self.c, self.d)

    @property
    def entries(self) -> Tuple[Element, Element, Element, Element]:
        return self.a, self.b, self.c, self.d

    def __str__(self) -> str:
        f = self.ring.format
        return f"[[{f(self.a)}, {f(self.b)}], [{f(self.c)}, {f(self.d)}]]"


@dataclass(frozen=True)
class Mat3:
    """3x3 matrix over ring, row-major."""
    ring: Ring
    rows: Tuple[Tuple[Element, Element, Element], ...]

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence[Element]]) -> "Mat3":
        if len(rows) != 3 or any(len(row) != 3 for row in rows):
            raise RingError("A 3x3 matrix needs three rows of three entries")
        return cls(ring, tuple(tuple(ring.canonical(x) for x in row) for row in rows))

    def entry(self, i: int, j: int) -> Element:
        return self.rows[i][j]

    def with_entry(self, i: int, j: int, value: Element) -> "Mat3":
        rows = [list(row) for row in self.rows]
        rows[i][j] = value
        return Mat3(self.ring, tuple(tuple(row) for row in rows))

    def __str__(self) -> str:
        f = self.ring.format
        return "[" + ", ".join("[" + ", ".join(f(x) for x in row) + "]" for row in self.rows) + "]"


# ── 2x2 ──


def identity2(R: Ring) -> Mat2:
    return Mat2(R, R.one, R.zero, R.zero, R.one)


def det2(A: Mat2) -> Element:
    R = A.ring
    return R.sub(R.mul(A.a, A.d), R.mul(A.b, A.c))


def trace2(A: Mat2) -> Element:
    return A.ring.add(A.a, A.d)


def mul2(X: Mat2, Y: Mat2) -> Mat2:
    R = X.ring
    return Mat2(
        R,
        R.add(R.mul(X.a, Y.a), R.mul(X.b, Y.c)),
        R.add(R.mul(X.a, Y.b), R.mul(X.b, Y.d)),
        R.add(R.mul(X.c, Y.a), R.mul(X.d, Y.c)),
        R.add(R.mul(X.c, Y.b), R.mul(X.d, Y.d)),
    )


def transpose2(A: Mat2) -> Mat2:
    return Mat2(A.ring, A.a, A.c, A.b, A.d)


def inverse2(A: Mat2) -> Mat2:
    """Inverse of A; det2(A) must be a unit."""
    R = A.ring
    inv = R.inverse(det2(A))
    if inv is None:
        raise PreconditionError(f"Matrix {A} is not invertible")
    return Mat2(R, R.mul(A.d, inv), R.neg(R.mul(A.b, inv)), R.neg(R.mul(A.c, inv)), R.mul(A.a, inv))


def is_unimodular_mat2(A: Mat2) -> bool:
    """Whether the four entries generate the unit ideal."""
    return A.ring.is_unimodular(A.entries)


def reduce_mod(A: Mat2, a: Element) -> Mat2:
    """A modulo the ideal (a), as a matrix over quotient_ring(R, a)."""
    R = A.ring
    Q = R.quotient(a)
    return Mat2(Q, *(R.reduce_into(Q, x) for x in A.entries))


def lift_mat2(R: Ring, A: Mat2) -> Mat2:
    """Entrywise canonical preimage in R of a matrix over a quotient of R."""
    return Mat2(R, *(R.lift_from(A.ring, x) for x in A.entries))


# ── 3x3 ──


def identity3(R: Ring) -> Mat3:
    return Mat3(R, tuple(tuple(R.one if i == j else R.zero for j in range(3)) for i in range(3)))


def det3(Q: Mat3) -> Element:
    """Cofactor expansion along the first row."""
    R = Q.ring
    (a, b, c), (d, e, f), (g, h, i) = Q.rows
    minor0 = R.sub(R.mul(e, i), R.mul(f, h))
    minor1 = R.sub(R.mul(d, i), R.mul(f, g))
    minor2 = R.sub(R.mul(d, h), R.mul(e, g))
    return R.add(R.sub(R.mul(a, minor0), R.mul(b, minor1)), R.mul(c, minor2))


def _sign(perm: Tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def det3_permutations(Q: Mat3) -> Element:
    """Leibniz alternating sum; independent check of det3."""
    R = Q.ring
    total = R.zero
    for perm in permutations(range(3)):
        term = R.one
        for i, j in enumerate(perm):
            term = R.mul(term, Q.rows[i][j])
        total = R.add(total, term) if _sign(perm) > 0 else R.sub(total, term)
    return total


def char_poly3(Q: Mat3) -> Tuple[Element, Element, Element]:
    """(trace, nu, det) with chi(x) = x^3 - trace x^2 + nu x - det; nu is the sum of principal 2x2 minors."""
    R = Q.ring
    m = Q.rows
    trace = R.add(R.add(m[0][0], m[1][1]), m[2][2])
    nu = R.zero
    for i, j in ((0, 1), (0, 2), (1, 2)):
        nu = R.add(nu, R.sub(R.mul(m[i][i], m[j][j]), R.mul(m[i][j], m[j][i])))
    return trace, nu, det3(Q)


def mul3(X: Mat3, Y: Mat3) -> Mat3:
    R = X.ring
    return Mat3(
        R,
        tuple(
            tuple(R.dot(X.rows[i], [Y.rows[k][j] for k in range(3)]) for j in range(3))
            for i in range(3)
        ),
    )


def transpose3(Q: Mat3) -> Mat3:
    return Mat3(Q.ring, tuple(tuple(Q.rows[j][i] for j in range(3)) for i in range(3)))


def theta(Q: Mat3) -> Mat2:
    """Upper-left 2x2 block."""
    return Mat2(Q.ring, Q.rows[0][0], Q.rows[0][1], Q.rows[1][0], Q.rows[1][1])


def sigma(M: Mat2, det_inverse: Element) -> Mat3:
    """[[a, b, 0], [c, d, 0], [0, 0, det(M)^-1]]."""
    R = M.ring
    det_inverse = R.canonical(det_inverse)
    if R.mul(det2(M), det_inverse) != R.one:
        raise PreconditionError(f"{R.format(det_inverse)} is not the inverse of det {R.format(det2(M))}")
    return Mat3(R, ((M.a, M.b, R.zero), (M.c, M.d, R.zero), (R.zero, R.zero, det_inverse)))
