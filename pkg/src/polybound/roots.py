"""Positive roots of the auxiliary real equations behind the Cauchy-type bounds.

Every equation handled here has exactly one root in the bracket it is
searched on, so plain bisection followed by a guarded Newton polish is enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import BracketInvalid, PreconditionViolated

_COARSE_WIDTH = 1e-8
_FINE_WIDTH = 1e-14
_MAX_BISECTIONS = 200
_MAX_NEWTON = 5


@dataclass(frozen=True)
class ScalarPolynomial:
    """Real polynomial, coefficients lowest degree first."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs or coeffs[-1] == 0.0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self) -> "ScalarPolynomial":
        if self.degree == 0:
            raise ValueError("derivative of a constant has no leading coefficient")
        return ScalarPolynomial(tuple(i * c for i, c in enumerate(self.coefficients) if i))

    def scale(self, x: float) -> float:
        """Sum of |c_i| |x|^i, the natural magnitude for residuals at x."""
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * abs(x) + abs(c)
        return acc


def _split(lo: float, hi: float) -> float:
    # geometric midpoints keep relative accuracy for roots far below the bracket top
    if lo > 0.0 and hi > 4.0 * lo:
        return math.sqrt(lo) * math.sqrt(hi)
    if lo == 0.0 and hi > 1e-280:
        return hi * 2.0 ** -32
    return 0.5 * (lo + hi)


def bracketed_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 0.0,
    fprime: Optional[Callable[[float], float]] = None,
) -> float:
    """Root of a continuous monotone ``f`` on ``[lo, hi]``.

    Bisects to a relative width of 1e-8, then tries at most five Newton steps
    (only if ``fprime`` is given) that must stay inside the bracket; otherwise
    bisection continues down to 1e-14 relative width. A residual ``|f| <= tol``
    also ends the Newton phase.
    """
    if lo > hi:
        lo, hi = hi, lo
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketInvalid(f"f({lo!r}) = {flo!r} and f({hi!r}) = {fhi!r} have the same sign")
    rising = fhi > 0

    def bisect(lo, hi, width):
        for _ in range(_MAX_BISECTIONS):
            if hi - lo <= width * max(abs(lo), abs(hi)) or hi <= 1e-300:
                break
            mid = _split(lo, hi)
            if not lo < mid < hi:
                break
            fm = f(mid)
            if fm == 0.0:
                return mid, mid
            if (fm > 0) == rising:
                hi = mid
            else:
                lo = mid
        return lo, hi

    lo, hi = bisect(lo, hi, _COARSE_WIDTH)
    if lo == hi:
        return lo
    if fprime is not None:
        x = 0.5 * (lo + hi)
        for _ in range(_MAX_NEWTON):
            fx = f(x)
            if fx == 0.0 or abs(fx) <= tol:
                return x
            d = fprime(x)
            if d == 0.0 or not math.isfinite(d):
                break
            nxt = x - fx / d
            if not lo <= nxt <= hi:
                break
            if (fx > 0) == rising:
                hi = x
            else:
                lo = x
            if abs(nxt - x) <= 4e-16 * abs(x):
                return nxt
            x = nxt
    lo, hi = bisect(lo, hi, _FINE_WIDTH)
    if lo == hi:
        return lo
    flo, fhi = f(lo), f(hi)
    return lo if abs(flo) <= abs(fhi) else hi


def _positive_root(poly: ScalarPolynomial, lo: float, hi: float) -> float:
    return bracketed_root(poly, lo, hi, fprime=poly.derivative())


def cauchy_upper_root(norms: Sequence[float], m: int) -> float:
    """Positive root of z^m - norms[m-1] z^(m-1) - ... - norms[0].

    ``norms`` holds ||A_0||, ..., ||A_(m-1)||. All-zero norms give 0.0, the only
    nonnegative root of z^m.
    """
    norms = [float(x) for x in norms]
    if len(norms) != m or m < 1:
        raise ValueError(f"expected {m} norms, got {len(norms)}")
    if any(x < 0 or not math.isfinite(x) for x in norms):
        raise ValueError("norms must be finite and nonnegative")
    if not any(norms):
        return 0.0
    # strip z^j factors so the constant term is negative and 0 is not a root
    j = next(i for i, x in enumerate(norms) if x > 0)
    g = ScalarPolynomial(tuple(-x for x in norms[j:]) + (1.0,))
    return _positive_root(g, 0.0, 1.0 + max(norms))


def cauchy_lower_root(norms: Sequence[float], a0_inv_norm_recip: float, m: int) -> float:
    """Positive root of z^m + norms[m-2] z^(m-1) + ... + norms[0] z - c.

    ``norms`` holds ||A_1||, ..., ||A_(m-1)|| and ``c`` is 1/||A_0^-1||.
    """
    norms = [float(x) for x in norms]
    c = float(a0_inv_norm_recip)
    if len(norms) != m - 1 or m < 1:
        raise ValueError(f"expected {m - 1} norms, got {len(norms)}")
    if any(x < 0 or not math.isfinite(x) for x in norms):
        raise ValueError("norms must be finite and nonnegative")
    if not c > 0 or not math.isfinite(c):
        raise ValueError("1/||A0^-1|| must be positive and finite")
    h = ScalarPolynomial((-c,) + tuple(norms) + (1.0,))
    # h(c^(1/m)) >= 0 since the z^m term alone reaches c there; widened for rounding
    return _positive_root(h, 0.0, c ** (1.0 / m) * (1.0 + 1e-12))


def delta_root(M: float, k: int) -> float:
    """Positive root other than 1 of z^k - (1+M) z^(k-1) + M.

    Solved on the factor left after dividing out (z - 1), namely
    z^(k-1) - M (z^(k-2) + ... + 1), which has a single sign change.
    """
    if k < 2:
        raise ValueError(f"exponent k must be at least 2, got {k}")
    M = float(M)
    if M < 0 or not math.isfinite(M):
        raise ValueError("M must be finite and nonnegative")
    return cauchy_upper_root([M] * (k - 1), k - 1)


def datt_govil_fixed_point(M: float, m: int) -> float:
    """Root in (0, 1) of x = 1 - (Mx + 1)^(-m), which exists when m*M > 1.

    phi(x) = x - 1 + (Mx+1)^(-m) is convex with phi(0) = 0 and phi'(0) < 0,
    so the root lies between the minimizer x* of phi and 1. It is solved for
    y = 1 - x, which keeps full relative precision when the root is close to 1;
    the root then sits below 1 - (1+M)^(-m) as it must.
    """
    M = float(M)
    if m < 1:
        raise ValueError(f"degree must be at least 1, got {m}")
    if not (m * M > 1) or not math.isfinite(M):
        raise PreconditionViolated(f"m*M = {m * M!r} must exceed 1")
    log_base = math.log1p(M)
    ratio = M / (1.0 + M)

    def psi(y):
        # y - (1 + M - M y)^(-m), with the base factored as (1+M)(1 - y M/(1+M))
        return y - math.exp(-m * (log_base + math.log1p(-ratio * y)))

    def dpsi(y):
        return 1.0 - m * ratio * math.exp(-m * (log_base + math.log1p(-ratio * y)) - math.log1p(-ratio * y))

    x_star = math.expm1(math.log(m * M) / (m + 1)) / M
    y_lo = math.exp(-m * log_base)
    y = bracketed_root(psi, y_lo, 1.0 - x_star, fprime=dpsi)
    closed_form = -math.expm1(-m * log_base)
    # both sides agree to within an ulp when y is tiny; never report above the closed form
    root = min(1.0 - y, closed_form)
    return min(max(root, math.nextafter(0.0, 1.0)), math.nextafter(1.0, 0.0))
