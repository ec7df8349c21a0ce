"""
Integer lattices with tracked generator combinations

The Hermite basis of the Z-span of a list of integer vectors, where every
basis row remembers the integer combination of the input generators that
produced it. Membership tests therefore come with a witness, which is how
unimodularity certificates are produced over quadratic orders and their
quotients.
"""
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy.core.intfunc import igcdex

IntMatrix2 = Tuple[Tuple[int, int], Tuple[int, int]]


@dataclass(frozen=True)
class LatticeRow:
    """One Hermite basis row: its vector, pivot column and generator combination."""
    vector: Tuple[int, ...]
    pivot: int
    combination: Tuple[int, ...]


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x, y, g = igcdex(a, b)
    return int(x), int(y), int(g)


def _combine(u: Sequence[int], v: Sequence[int], x: int, y: int) -> List[int]:
    return [x * p + y * q for p, q in zip(u, v)]


class IntegerLattice:
    """Z-span of integer generators in a fixed ambient dimension, in Hermite form."""

    __slots__ = ("dimension", "generator_count", "rows", "_by_pivot")

    def __init__(self, generators: Sequence[Sequence[int]], dimension: int):
        self.dimension = dimension
        self.generator_count = len(generators)
        for vec in generators:
            if len(vec) != dimension:
                raise ValueError(f"Generator {tuple(vec)} does not live in dimension {dimension}")
        self.rows: Tuple[LatticeRow, ...] = self._echelon(generators)
        self._by_pivot: Dict[int, LatticeRow] = {row.pivot: row for row in self.rows}

    def _echelon(self, generators: Sequence[Sequence[int]]) -> Tuple[LatticeRow, ...]:
        n = self.generator_count
        work = [
            ([int(c) for c in vec], [1 if j == i else 0 for j in range(n)])
            for i, vec in enumerate(generators)
        ]
        pivots: List[Tuple[List[int], List[int], int]] = []

        for col in range(self.dimension):
            active = [w for w in work if w[0][col] != 0]
            if not active:
                continue
            rest = [w for w in work if w[0][col] == 0]
            pivot_vec, pivot_comb = active[0]
            for vec, comb in active[1:]:
                a, b = pivot_vec[col], vec[col]
                x, y, g = _xgcd(a, b)
                ag, bg = a // g, b // g
                # [[x, y], [-b/g, a/g]] has determinant 1
                new_vec = _combine(pivot_vec, vec, -bg, ag)
                new_comb = _combine(pivot_comb, comb, -bg, ag)
                pivot_vec = _combine(pivot_vec, vec, x, y)
                pivot_comb = _combine(pivot_comb, comb, x, y)
                rest.append((new_vec, new_comb))
            if pivot_vec[col] < 0:
                pivot_vec = [-c for c in pivot_vec]
                pivot_comb = [-c for c in pivot_comb]
            pivots.append((pivot_vec, pivot_comb, col))
            work = rest

        # Reduce the entries above each pivot into [0, pivot)
        for i in range(len(pivots)):
            vec_i, comb_i, _ = pivots[i]
            for j in range(i + 1, len(pivots)):
                vec_j, comb_j, col_j = pivots[j]
                k = vec_i[col_j] // vec_j[col_j]
                if k:
                    vec_i = _combine(vec_i, vec_j, 1, -k)
                    comb_i = _combine(comb_i, comb_j, 1, -k)
            pivots[i] = (vec_i, comb_i, pivots[i][2])

        return tuple(
            LatticeRow(vector=tuple(vec), pivot=col, combination=tuple(comb))
            for vec, comb, col in pivots
        )

    @property
    def rank(self) -> int:
        return len(self.rows)

    def index(self) -> int:
        """Index of the lattice in Z^dimension, 0 when it is not of full rank."""
        if self.rank < self.dimension:
            return 0
        result = 1
        for row in self.rows:
            result *= row.vector[row.pivot]
        return result

    def express(self, target: Sequence[int]) -> Optional[List[int]]:
        """Integer combination of the generators equal to target, or None."""
        remainder = [int(c) for c in target]
        coefficients = [0] * self.generator_count
        for col in range(self.dimension):
            if remainder[col] == 0:
                continue
            row = self._by_pivot.get(col)
            if row is None:
                return None
            pivot = row.vector[col]
            if remainder[col] % pivot:
                return None
            k = remainder[col] // pivot
            remainder = _combine(remainder, row.vector, 1, -k)
            coefficients = _combine(coefficients, row.combination, 1, k)
        return coefficients

    def __contains__(self, vec: Sequence[int]) -> bool:
        return self.express(vec) is not None

    def reduce(self, vec: Sequence[int]) -> Tuple[int, ...]:
        """Canonical residue of vec modulo the lattice (pivot coordinates in [0, pivot))."""
        remainder = [int(c) for c in vec]
        for row in self.rows:
            k = remainder[row.pivot] // row.vector[row.pivot]
            if k:
                remainder = _combine(remainder, row.vector, 1, -k)
        return tuple(remainder)

    def residues(self) -> Iterator[Tuple[int, ...]]:
        """Every canonical residue once, lexicographically. Full rank only."""
        if self.rank < self.dimension:
            raise ValueError("Residues of a lattice that is not of full rank are infinite")
        ranges = [range(self._by_pivot[col].vector[col]) for col in range(self.dimension)]
        return (tuple(vec) for vec in product(*ranges))


def _mat_mul(x: List[List[int]], y: List[List[int]]) -> List[List[int]]:
    return [
        [x[i][0] * y[0][j] + x[i][1] * y[1][j] for j in range(2)]
        for i in range(2)
    ]


def smith_reduce_2x2(a: int, b: int, c: int, d: int) -> Tuple[IntMatrix2, IntMatrix2, Tuple[int, int]]:
    """
    Diagonalize the integer matrix [[a, b], [c, d]].

    Returns (M, N, (d1, d2)) with M, N in GL2(Z) and M·A·N = Diag(d1, d2),
    where d1 divides d2. |d1| is the gcd of the four entries.
    """
    work = [[a, b], [c, d]]
    left = [[1, 0], [0, 1]]
    right = [[1, 0], [0, 1]]

    while True:
        if work[0][1] != 0:
            x, y, g = _xgcd(work[0][0], work[0][1])
            p, q = work[0][0] // g, work[0][1] // g
            step = [[x, -q], [y, p]]
            work = _mat_mul(work, step)
            right = _mat_mul(right, step)
        if work[1][0] != 0:
            x, y, g = _xgcd(work[0][0], work[1][0])
            p, q = work[0][0] // g, work[1][0] // g
            step = [[x, y], [-q, p]]
            work = _mat_mul(step, work)
            left = _mat_mul(step, left)
        if work[0][1] != 0:
            continue
        if work[0][0] == 0:
            if work[1][1] == 0:
                break
            swap = [[0, 1], [1, 0]]
            work = _mat_mul(_mat_mul(swap, work), swap)
            left = _mat_mul(swap, left)
            right = _mat_mul(right, swap)
            continue
        if work[1][1] % work[0][0] != 0:
            add_row = [[1, 1], [0, 1]]
            work = _mat_mul(add_row, work)
            left = _mat_mul(add_row, left)
            continue
        break

    return (
        ((left[0][0], left[0][1]), (left[1][0], left[1][1])),
        ((right[0][0], right[0][1]), (right[1][0], right[1][1])),
        (work[0][0], work[1][1]),
    )
