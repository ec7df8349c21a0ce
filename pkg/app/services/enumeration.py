"""
Enumeration - simple extensions of integer matrices and their nu values

For A over Z, the simple extensions are parameterized by the quadruples
(e, f, s, t) with a(es) + b(et) + c(fs) + d(ft) = 1, and each one has
middle characteristic coefficient nu = det(A) + es + ft.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from sympy.core.intfunc import igcdex

from app.config import get_settings
from app.services.errors import CapExceededError, NotUnimodularError, PreconditionError, RingError
from app.services.matrix_core import Mat2, det2, is_unimodular_mat2
from app.services.ring_core import Element, Integers, Ring

logger = logging.getLogger(__name__)

Quadruple = Tuple[int, int, int, int]


@dataclass(frozen=True)
class NuSample:
    matrix: Mat2
    bound: int
    gamma: Tuple[Quadruple, ...]
    values: Tuple[int, ...]

    def rows(self) -> List[Tuple[int, int, int, int, int]]:
        """(e, f, s, t, nu) for every enumerated quadruple."""
        det = det2(self.matrix)
        return [(e, f, s, t, det + e * s + f * t) for e, f, s, t in self.gamma]


@dataclass(frozen=True)
class ResidueClass:
    """base + modulus * R."""
    ring: Ring
    base: Element
    modulus: Element

    def contains(self, value: Element) -> bool:
        R = self.ring
        return R.divide(R.sub(R.canonical(value), self.base), self.modulus) is not None

    def describe(self) -> str:
        R = self.ring
        if R.is_zero(self.modulus):
            return "{" + R.format(self.base) + "}"
        return f"{R.format(self.base)} + {R.format(self.modulus)}R"


def _ceil_div(p: int, q: int) -> int:
    return -((-p) // q)


def _k_window(x0: int, dx: int, bound: int) -> Optional[Tuple[Optional[int], Optional[int]]]:
    """Range of k with |x0 + k*dx| <= bound; (None, None) when unconstrained, None when empty."""
    if dx == 0:
        return (None, None) if abs(x0) <= bound else None
    lo, hi = (-bound - x0, bound - x0) if dx > 0 else (x0 - bound, x0 + bound)
    step = abs(dx)
    return _ceil_div(lo, step), hi // step


def _check_integer_matrix(A: Mat2) -> None:
    if not isinstance(A.ring, Integers):
        raise RingError("Enumeration is only supported over the integers")
    if not is_unimodular_mat2(A):
        raise NotUnimodularError(A.entries)


def gamma_enumerate(A: Mat2, bound: int) -> List[Quadruple]:
    """
    Every (e, f, s, t) of height <= bound certifying A, lexicographically.

    For each (e, f) the condition is linear in (s, t): s*u + t*w = 1 with
    u = ae + cf and w = be + df, whose solutions form one line.
    """
    _check_integer_matrix(A)
    cap = get_settings().enumeration_bound_cap
    if bound < 1 or bound > cap:
        raise CapExceededError(f"Enumeration bound must lie in [1, {cap}], got {bound}")
    a, b, c, d = A.entries
    found: List[Quadruple] = []
    for e in range(-bound, bound + 1):
        for f in range(-bound, bound + 1):
            u, w = a * e + c * f, b * e + d * f
            x, y, g = (int(v) for v in igcdex(u, w))
            if g != 1:
                continue
            # s = x + k*w, t = y - k*u
            s_window = _k_window(x, w, bound)
            t_window = _k_window(y, -u, bound)
            if s_window is None or t_window is None:
                continue
            lows = [v for v in (s_window[0], t_window[0]) if v is not None]
            highs = [v for v in (s_window[1], t_window[1]) if v is not None]
            for k in range(max(lows), min(highs) + 1):
                found.append((e, f, x + k * w, y - k * u))
    found.sort()
    return found


def nu_enumerate(A: Mat2, bound: int) -> NuSample:
    gamma = gamma_enumerate(A, bound)
    det = det2(A)
    values = sorted({det + e * s + f * t for e, f, s, t in gamma})
    logger.debug("nu(%s) at bound %d: %d quadruples, %d values", A, bound, len(gamma), len(values))
    return NuSample(A, bound, tuple(gamma), tuple(values))


def nu_diag_closed_form(d: Element, ring: Optional[Ring] = None) -> ResidueClass:
    """nu(Diag(1, d)) = 2 + (d - 1)R."""
    R = ring or Integers()
    if R.kind not in ("Z", "Zloc"):
        raise PreconditionError("The closed form is stated over the integers and their localizations")
    d = R.canonical(d)
    return ResidueClass(R, R.from_int(2), R.sub(d, R.one))


# ── Parameterized families over Z ──
# [[0, 3], [2, 6]]: ft = m, fs = 3k - 1 and nu = -4 + m - 6k + (-6k^2 + 5k - 1)/m.


def zero_corner_parameters(quadruple: Quadruple) -> Tuple[int, int]:
    """(m, k) of a certificate of [[0, 3], [2, 6]]."""
    e, f, s, t = quadruple
    if (f * s + 1) % 3:
        raise PreconditionError(f"{quadruple} does not certify [[0, 3], [2, 6]]")
    return f * t, (f * s + 1) // 3


def zero_corner_family_value(m: int, k: int) -> Optional[int]:
    numerator = -6 * k * k + 5 * k - 1
    if m == 0 or numerator % m:
        return None
    return -4 + m - 6 * k + numerator // m


def zero_corner_family_contains(value: int, radius: int) -> bool:
    """Whether some (m, k) with |m|, |k| <= radius realizes value."""
    return any(
        zero_corner_family_value(m, k) == value
        for k in range(-radius, radius + 1)
        for m in range(-radius, radius + 1)
    )


# [[6, -10], [0, -15]]: es = 1 + 5k, et = 3m - 1, ft = 1 + 2k - 2m and nu = -88 + 7k - 2m.


def upper_triangular_parameters(quadruple: Quadruple) -> Tuple[int, int]:
    """(m, k) of a certificate of [[6, -10], [0, -15]]."""
    e, f, s, t = quadruple
    if (e * s - 1) % 5 or (e * t + 1) % 3:
        raise PreconditionError(f"{quadruple} does not certify [[6, -10], [0, -15]]")
    return (e * t + 1) // 3, (e * s - 1) // 5


def upper_triangular_family_value(m: int, k: int) -> Optional[int]:
    # et = 3m - 1 must divide es*ft = (1 + 5k)(1 + 2k - 2m)
    divisor = 3 * m - 1
    if ((1 + 5 * k) * (1 + 2 * k - 2 * m)) % divisor:
        return None
    return -88 + 7 * k - 2 * m


def upper_triangular_family_contains(value: int, radius: int) -> bool:
    return any(
        upper_triangular_family_value(m, k) == value
        for k in range(-radius, radius + 1)
        for m in range(-radius, radius + 1)
    )


def mixed_family_value(p: int) -> int:
    """Members 149 - 6p^2 - 6p (p odd) of nu([[15, 6], [10, 14]])."""
    if p % 2 == 0:
        raise PreconditionError("The family is indexed by odd p")
    return 149 - 6 * p * p - 6 * p
