"""Catalogue of eigenvalue-modulus bounds for matrix polynomials.

Every bound returns an ``AnnulusBound``. Input properties that a bound
requires (dominance, Hermitian coefficients, Loewner monotonicity) are
reported as inapplicability; structural problems such as a non-monic input to
a monic-only bound or a singular A0 where the formula needs ||A0^-1|| raise.

Maxima over empty index sets are taken to be 0.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import DEFAULT_TOLERANCES, AnnulusBound, BoundId, MatrixPolynomial, NormKind, Tolerances
from .errors import (
    InvalidParameter,
    NoApplicableBound,
    NotMonic,
    SingularCoefficient,
    SingularMatrix,
)
from .linalg import condition_number, hermitian_extremes, inverse, is_hermitian, is_loewner_geq, is_positive_definite, matrix_norm
from .pep import monicize
from .roots import cauchy_lower_root, cauchy_upper_root, datt_govil_fixed_point, delta_root

EK_VARIANTS = ("hermitian_monotone", "hermitian_monotone_dual", "positive_definite")
CAUCHY_DISK_VARIANTS = ("r1", "r2", "r3", "r4")
JLR_VARIANTS = ("base", "diff", "am1_product", "shift_product")
JLR_SIDES = ("upper", "lower")

_EK_IDS = {
    "hermitian_monotone": BoundId.EK_HERMITIAN_MONOTONE,
    "hermitian_monotone_dual": BoundId.EK_HERMITIAN_MONOTONE_DUAL,
    "positive_definite": BoundId.EK_POSITIVE_DEFINITE,
}
_DISK_IDS = {
    "r1": BoundId.CAUCHY_R1,
    "r2": BoundId.CAUCHY_R2,
    "r3": BoundId.CAUCHY_R3,
    "r4": BoundId.CAUCHY_R4,
}
_JLR_IDS = {
    ("base", "upper"): BoundId.JLR_BASE_UPPER,
    ("base", "lower"): BoundId.JLR_BASE_LOWER,
    ("diff", "upper"): BoundId.JLR_DIFF_UPPER,
    ("diff", "lower"): BoundId.JLR_DIFF_LOWER,
    ("am1_product", "upper"): BoundId.JLR_AM1_PRODUCT_UPPER,
    ("am1_product", "lower"): BoundId.JLR_AM1_PRODUCT_LOWER,
    ("shift_product", "upper"): BoundId.JLR_SHIFT_PRODUCT_UPPER,
    ("shift_product", "lower"): BoundId.JLR_SHIFT_PRODUCT_LOWER,
}


def _max(values: Iterable[float]) -> float:
    return max(values, default=0.0)


class NormSummary:
    """Coefficient norms and the maxima derived from them, computed lazily.

    With A(-1) = 0:

    * ``norms[i]`` = ||A_i||, i = 0..m
    * ``M`` = max_{i<m} ||A_i||, ``M_prime`` = max_{i>=1} ||A_i||
    * ``diff_norms[j]`` = ||A_j - A_(j-1)||, j = 0..m; ``M_tilde`` is their max
    * ``alpha`` = max_{i<=m-2} ||A_i||
    """

    def __init__(self, P: MatrixPolynomial, kind: NormKind = NormKind.TWO,
                 tolerances: Tolerances = DEFAULT_TOLERANCES):
        self.P = P
        self.kind = NormKind.parse(kind)
        self.tolerances = tolerances

    def _norm(self, a) -> float:
        return matrix_norm(a, self.kind)

    @property
    def m(self) -> int:
        return self.P.degree

    @cached_property
    def norms(self) -> tuple:
        return tuple(self._norm(a) for a in self.P.coefficients)

    @cached_property
    def M(self) -> float:
        return _max(self.norms[:-1])

    @cached_property
    def M_prime(self) -> float:
        return _max(self.norms[1:])

    @cached_property
    def diff_norms(self) -> tuple:
        A = self.P.coefficients
        return (self.norms[0],) + tuple(self._norm(A[j] - A[j - 1]) for j in range(1, self.m + 1))

    @cached_property
    def M_tilde(self) -> float:
        return _max(self.diff_norms)

    @cached_property
    def alpha(self) -> float:
        return _max(self.norms[: self.m - 1])

    @cached_property
    def gamma(self) -> float:
        """max ||A_j - A_(j-1)|| over j = 0..m-1."""
        return _max(self.diff_norms[:-1])

    @cached_property
    def delta(self) -> float:
        """max ||A_(m-1) A_i - A_(i-1)|| over i = 0..m-1."""
        A = self.P.coefficients
        am1 = A[self.m - 1]
        return _max(self._norm(am1 @ A[i] - (A[i - 1] if i else 0)) for i in range(self.m))

    @cached_property
    def epsilon(self) -> float:
        """max ||(I - A_(m-1)) A_i + A_(i-1)|| over i = 0..m-1."""
        A = self.P.coefficients
        shift = np.eye(self.P.size) - A[self.m - 1]
        return _max(self._norm(shift @ A[i] + (A[i - 1] if i else 0)) for i in range(self.m))

    @cached_property
    def a0_inverse(self) -> Optional[np.ndarray]:
        try:
            return inverse(self.P[0], pivot_tol=self.tolerances.pivot_tol)
        except SingularMatrix:
            return None

    @cached_property
    def a0_inv_norm(self) -> Optional[float]:
        inv = self.a0_inverse
        return None if inv is None else self._norm(inv)

    @cached_property
    def am_inv_norm(self) -> Optional[float]:
        try:
            return self._norm(inverse(self.P.leading, pivot_tol=self.tolerances.pivot_tol))
        except SingularMatrix:
            return None

    def a0_inv_norm_recip(self) -> float:
        """1/||A0^-1||; raises SingularCoefficient when A0 is singular."""
        if self.a0_inv_norm is None:
            raise SingularCoefficient("A0 is singular")
        return 1.0 / self.a0_inv_norm


class ReciprocalQuantities:
    """L_i = A0^-1 A_i (i = 1..m-1), L_m = A0^-1 for a monic polynomial, with L_(m+1) = 0."""

    def __init__(self, summary: NormSummary):
        inv = summary.a0_inverse
        if inv is None:
            raise SingularCoefficient("A0 is singular")
        P = summary.P
        self.summary = summary
        self.L = (None,) + tuple(inv @ P[i] for i in range(1, P.degree)) + (inv,)

    def _norm(self, a) -> float:
        return self.summary._norm(a)

    @property
    def m(self) -> int:
        return self.summary.m

    def _next(self, i):
        return self.L[i + 1] if i < self.m else 0

    @cached_property
    def l1_norm(self) -> float:
        return self._norm(self.L[1])

    @cached_property
    def i_minus_l1_norm(self) -> float:
        return self._norm(np.eye(self.summary.P.size) - self.L[1])

    @cached_property
    def beta(self) -> float:
        return _max(self._norm(self.L[i]) for i in range(2, self.m + 1))

    @cached_property
    def gamma_prime(self) -> float:
        return _max(self._norm(self.L[i] - self._next(i)) for i in range(1, self.m + 1))

    @cached_property
    def delta_prime(self) -> float:
        L1 = self.L[1]
        return _max(self._norm(L1 @ self.L[i] - self._next(i)) for i in range(1, self.m + 1))

    @cached_property
    def epsilon_prime(self) -> float:
        shift = np.eye(self.summary.P.size) - self.L[1]
        return _max(self._norm(shift @ self.L[i] + self._next(i)) for i in range(1, self.m + 1))


def _require_monic(P: MatrixPolynomial, tolerances: Tolerances):
    if not P.is_monic(tolerances.monic_tol):
        raise NotMonic("bound requires a monic matrix polynomial; use monicize() first")


def _summary(P, kind, summary, tolerances) -> NormSummary:
    kind = NormKind.parse(kind)
    if summary is not None:
        if summary.P is not P or summary.kind is not kind:
            raise ValueError("summary was computed for a different polynomial or norm")
        return summary
    return NormSummary(P, kind, tolerances)


def _jlr_radius(a: float, b: float) -> float:
    # larger root of (x - 1)(x - a) = b
    return 0.5 * (1.0 + a + math.sqrt((1.0 - a) ** 2 + 4.0 * b))


def _annulus(source: BoundId, lower: Optional[float], upper: Optional[float], **kw) -> AnnulusBound:
    # tight bounds (e.g. Iz + cI) can invert by rounding; lowering a lower radius is always safe
    if lower is not None and upper is not None and upper < lower <= upper * (1.0 + 1e-12):
        lower = upper
    return AnnulusBound(source, lower=lower, upper=upper, **kw)


def _lq_norm(values: Sequence[float], q: float) -> float:
    """(sum v^q)^(1/q) without overflow for large q or large values."""
    top = max(values)
    if top == 0.0:
        return 0.0
    return top * math.fsum((v / top) ** q for v in values) ** (1.0 / q)


# -- bounds on P directly ---------------------------------------------------------

def dominance_upper(P: MatrixPolynomial, kind: NormKind = NormKind.TWO, *,
                    summary: Optional[NormSummary] = None,
                    tolerances: Tolerances = DEFAULT_TOLERANCES) -> AnnulusBound:
    """|lambda| < 1 + ||Am|| ||Am^-1|| whenever ||Am|| > ||A_i|| for every i < m."""
    s = _summary(P, kind, summary, tolerances)
    if s.am_inv_norm is None:
        raise SingularCoefficient("Am is singular")
    lead = s.norms[-1]
    for i, v in enumerate(s.norms[:-1]):
        if not lead > v:
            return AnnulusBound.inapplicable(BoundId.DOMINANCE, f"dominance fails at i={i}")
    kappa = condition_number(P.leading, s.kind) if P.size == 1 else lead * s.am_inv_norm
    return AnnulusBound(BoundId.DOMINANCE, upper=1.0 + kappa, upper_strict=True)


def enestrom_kakeya(P: MatrixPolynomial, variant: str = "hermitian_monotone", *,
                    tolerances: Tolerances = DEFAULT_TOLERANCES) -> AnnulusBound:
    """Enestrom-Kakeya type annuli for Hermitian coefficients.

    hermitian_monotone: Am >= ... >= A0 >= 0, Am > 0 gives
        lambda_min(A0) / (2 lambda_max(Am)) <= |lambda| <= 1.
    hermitian_monotone_dual: A0 >= ... >= Am > 0 gives |lambda| >= 1.
    positive_definite: all A_i > 0 gives
        min lambda_min(A_i)/lambda_max(A_(i+1)) <= |lambda| <= max lambda_max(A_i)/lambda_min(A_(i+1)).
    """
    if variant not in _EK_IDS:
        raise InvalidParameter(f"unknown Enestrom-Kakeya variant {variant!r}")
    source = _EK_IDS[variant]
    herm, psd = tolerances.herm_tol, tolerances.psd_tol
    A = P.coefficients
    m = P.degree
    for i, a in enumerate(A):
        if not is_hermitian(a, herm):
            return AnnulusBound.inapplicable(source, f"coefficients not Hermitian (A{i})")

    if variant == "positive_definite":
        for i, a in enumerate(A):
            if not is_positive_definite(a, psd, herm):
                return AnnulusBound.inapplicable(source, f"A{i} not positive definite")
        ext = [hermitian_extremes(a, herm) for a in A]
        lower = min(ext[i].lambda_min / ext[i + 1].lambda_max for i in range(m))
        upper = max(ext[i].lambda_max / ext[i + 1].lambda_min for i in range(m))
        return _annulus(source, lower, upper)

    if variant == "hermitian_monotone":
        for i in range(m):
            if not is_loewner_geq(A[i + 1], A[i], psd, herm):
                return AnnulusBound.inapplicable(source, f"Loewner chain fails at link {i}: A{i + 1} >= A{i}")
        if not is_loewner_geq(A[0], np.zeros_like(A[0]), psd, herm):
            return AnnulusBound.inapplicable(source, "A0 not positive semidefinite")
        if not is_positive_definite(A[m], psd, herm):
            return AnnulusBound.inapplicable(source, "Am not positive definite")
        lo = max(hermitian_extremes(A[0], herm).lambda_min, 0.0)
        hi = hermitian_extremes(A[m], herm).lambda_max
        return AnnulusBound(source, lower=lo / (2.0 * hi), upper=1.0)

    for i in range(m):
        if not is_loewner_geq(A[i], A[i + 1], psd, herm):
            return AnnulusBound.inapplicable(source, f"Loewner chain fails at link {i}: A{i} >= A{i + 1}")
    if not is_positive_definite(A[m], psd, herm):
        return AnnulusBound.inapplicable(source, "Am not positive definite")
    return AnnulusBound(source, lower=1.0)


# -- bounds on monic P ------------------------------------------------------------

def cauchy_classic(P: MatrixPolynomial, kind: NormKind = NormKind.TWO, *,
                   summary: Optional[NormSummary] = None,
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> AnnulusBound:
    """r <= |lambda| <= R from the positive roots of the Cauchy polynomials h and g.

    The lower radius is omitted when A0 is singular.
    """
    _require_monic(P, tolerances)
    s = _summary(P, kind, summary, tolerances)
    m = s.m
    upper = cauchy_upper_root(s.norms[:m], m)
    lower = None
    if s.a0_inv_norm is not None:
        lower = cauchy_lower_root(s.norms[1:m], 1.0 / s.a0_inv_norm, m)
    return _annulus(BoundId.CAUCHY, lower, upper)


def cauchy_disk(P: MatrixPolynomial, variant: str = "r1", kind: NormKind = NormKind.TWO, *,
                summary: Optional[NormSummary] = None,
                tolerances: Tolerances = DEFAULT_TOLERANCES) -> AnnulusBound:
    """Disks centred at 0.

    r1 = max(1, delta) with delta the root != 1 of z^(m+1) - (1+M) z^m + M (closed);
    r2 the same on (1 - z) P(z), i.e. with M_tilde and exponent m+2 (closed);
    r3 = 1 + M and r4 = 1 + M_tilde (open).
    """
    if variant not in _DISK_IDS:
        raise InvalidParameter(f"unknown Cauchy disk variant {variant!r}")
    _require_monic(P, tolerances)
    s = _summary(P, kind, summary, tolerances)
    source = _DISK_IDS[variant]
    m = s.m
    if variant == "r1":
        return AnnulusBound(source, upper=max(1.0, delta_root(s.M, m + 1)))
    if variant == "r2":
        return AnnulusBound(source, upper=max(1.0, delta_root(s.M_tilde, m + 2)))
    if variant == "r3":
        return AnnulusBound(source, upper=1.0 + s.M, upper_strict=True)
    return AnnulusBound(source, upper=1.0 + s.M_tilde, upper_strict=True)


def jlr_family(P: MatrixPolynomial, variant: str = "base", side: str = "upper",
               kind: NormKind = NormKind.TWO, *,
               summary: Optional[NormSummary] = None,
               reciprocal: Optional[ReciprocalQuantities] = None,
               tolerances: Tolerances = DEFAULT_TOLERANCES) -> AnnulusBound:
    """Joyal-Labelle-Rahman type bound and its product / reversal variants.

    Upper sides apply the base bound 1/2 {1 + a + [(1 - a)^2 + 4 b]^(1/2)} to
    P, (1 - z) P, (Iz - A(m-1)) P and (Iz + I - A(m-1)) P. Lower sides are the
    reciprocal statements built from L_i = A0^-1 A_i.
    """
    if (variant, side) not in _JLR_IDS:
        raise InvalidParameter(f"unknown JLR variant/side {variant!r}/{side!r}")
    _require_monic(P, tolerances)
    s = _summary(P, kind, summary, tolerances)
    source = _JLR_IDS[variant, side]

    if side == "upper":
        m = s.m
        if variant == "base":
            r = _jlr_radius(s.norms[m - 1], s.alpha)
        elif variant == "diff":
            r = _jlr_radius(s.diff_norms[m], s.gamma)
        elif variant == "am1_product":
            r = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * s.delta))
        else:
            r = 1.0 + math.sqrt(s.epsilon)
        return AnnulusBound(source, upper=r)

    rq = reciprocal if reciprocal is not None else ReciprocalQuantities(s)
    if variant == "base":
        r = 1.0 / _jlr_radius(rq.l1_norm, rq.beta)
    elif variant == "diff":
        r = 1.0 / _jlr_radius(rq.i_minus_l1_norm, rq.gamma_prime)
    elif variant == "am1_product":
        r = 2.0 / (1.0 + math.sqrt(1.0 + 4.0 * rq.delta_prime))
    else:
        r = 1.0 / (1.0 + math.sqrt(rq.epsilon_prime))
    return AnnulusBound(source, lower=r)


def datt_govil(P: MatrixPolynomial, closed_form: bool = False, kind: NormKind = NormKind.TWO, *,
               summary: Optional[NormSummary] = None,
               tolerances: Tolerances = DEFAULT_TOLERANCES) -> AnnulusBound:
    """Datt-Govil annulus.

    lower = ||A0^-1||^-1 / (2 (1+M)^(m-1) (mM + 1)); upper = 1 + lambda0 M,
    or 1 when mM <= 1. The closed form replaces lambda0 by 1 - (1+M)^-m and is
    strict.
    """
    _require_monic(P, tolerances)
    s = _summary(P, kind, summary, tolerances)
    m, M = s.m, s.M
    c = s.a0_inv_norm_recip()
    log_den = math.log(2.0) + (m - 1) * math.log1p(M) + math.log1p(m * M)
    lower = math.exp(math.log(c) - log_den)
    if closed_form:
        source = BoundId.DATT_GOVIL_CLOSED_FORM
        upper = 1.0 - math.expm1(-m * math.log1p(M)) * M
        return _annulus(source, lower, upper, upper_strict=True)
    if m * M > 1.0:
        upper = 1.0 + datt_govil_fixed_point(M, m) * M
    else:
        upper = 1.0
    return _annulus(BoundId.DATT_GOVIL, lower, upper)


def ratio_bounds(P: MatrixPolynomial, kind: NormKind = NormKind.TWO, *,
                 summary: Optional[NormSummary] = None,
                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> AnnulusBound:
    """c / (c + M') < |lambda| < 1 + M with c = ||A0^-1||^-1."""
    _require_monic(P, tolerances)
    s = _summary(P, kind, summary, tolerances)
    c = s.a0_inv_norm_recip()
    return _annulus(BoundId.RATIO, c / (c + s.M_prime), 1.0 + s.M, lower_strict=True, upper_strict=True)


def holder_bounds(P: MatrixPolynomial, p: float = 2.0, kind: NormKind = NormKind.TWO, *,
                  summary: Optional[NormSummary] = None,
                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> AnnulusBound:
    """Hoelder-conjugate annulus for 1/p + 1/q = 1.

    (c^q / (M'_p^q + c^q))^(1/q) < |lambda| < (1 + M_p^q)^(1/q), with M_p and
    M'_p the p-norms of (||A_0||..||A_(m-1)||) and (||A_1||..||A_m||).
    """
    p = float(p)
    if not math.isfinite(p) or p <= 1.0:
        raise InvalidParameter(f"Hoelder exponent must be a finite real > 1, got {p!r}")
    _require_monic(P, tolerances)
    s = _summary(P, kind, summary, tolerances)
    c = s.a0_inv_norm_recip()
    q = p / (p - 1.0)
    m_p = _lq_norm(s.norms[:-1], p)
    m_prime_p = _lq_norm(s.norms[1:], p)
    return _annulus(BoundId.HOLDER, c / _lq_norm([m_prime_p, c], q), _lq_norm([1.0, m_p], q),
                    lower_strict=True, upper_strict=True, parameter=p)


# -- catalogue ----------------------------------------------------------------------

def _guard(source: BoundId, fn, *args, parameter=None, **kwargs) -> AnnulusBound:
    try:
        return fn(*args, **kwargs)
    except SingularCoefficient as exc:
        return AnnulusBound.inapplicable(source, str(exc), parameter=parameter)


def all_bounds(P: MatrixPolynomial, kind: NormKind = NormKind.TWO,
               holder_ps: Sequence[float] = (2.0,),
               tolerances: Tolerances = DEFAULT_TOLERANCES) -> list:
    """Every bound in catalogue order.

    Dominance and Enestrom-Kakeya run on P itself; everything else on its
    monicization. Bounds needing a nonsingular A0 are reported inapplicable
    when it is singular.
    """
    kind = NormKind.parse(kind)
    Q = monicize(P, tolerances)
    ps = NormSummary(P, kind, tolerances)
    s = ps if Q is P else NormSummary(Q, kind, tolerances)
    out = [dominance_upper(P, kind, summary=ps, tolerances=tolerances)]
    out += [enestrom_kakeya(P, v, tolerances=tolerances) for v in EK_VARIANTS]
    out.append(cauchy_classic(Q, kind, summary=s, tolerances=tolerances))
    out += [cauchy_disk(Q, v, kind, summary=s, tolerances=tolerances) for v in CAUCHY_DISK_VARIANTS]

    try:
        rq = ReciprocalQuantities(s)
    except SingularCoefficient:
        rq = None
    for variant in JLR_VARIANTS:
        for side in JLR_SIDES:
            if side == "lower" and rq is None:
                out.append(AnnulusBound.inapplicable(_JLR_IDS[variant, side], "A0 is singular"))
                continue
            out.append(jlr_family(Q, variant, side, kind, summary=s, reciprocal=rq, tolerances=tolerances))

    out.append(_guard(BoundId.DATT_GOVIL, datt_govil, Q, False, kind, summary=s, tolerances=tolerances))
    out.append(_guard(BoundId.DATT_GOVIL_CLOSED_FORM, datt_govil, Q, True, kind, summary=s,
                      tolerances=tolerances))
    out.append(_guard(BoundId.RATIO, ratio_bounds, Q, kind, summary=s, tolerances=tolerances))
    for p in holder_ps:
        out.append(_guard(BoundId.HOLDER, holder_bounds, Q, p, kind, parameter=float(p), summary=s,
                          tolerances=tolerances))
    return out


def best_enclosure(bounds: Sequence[AnnulusBound]) -> AnnulusBound:
    """Largest applicable lower radius with smallest applicable upper radius.

    Ties go to the earliest bound; strictness comes from the attaining bound.
    """
    lowers = [b for b in bounds if b.applicable and b.lower is not None]
    uppers = [b for b in bounds if b.applicable and b.upper is not None]
    if not lowers or not uppers:
        raise NoApplicableBound("need at least one applicable lower and one applicable upper radius")
    lo = lowers[0]
    for b in lowers[1:]:
        if b.lower > lo.lower:
            lo = b
    hi = uppers[0]
    for b in uppers[1:]:
        if b.upper < hi.upper:
            hi = b
    if lo is hi:
        return lo
    return AnnulusBound(
        BoundId.BEST_ENCLOSURE,
        lower=lo.lower, lower_strict=lo.lower_strict,
        upper=hi.upper, upper_strict=hi.upper_strict,
        contributors=(lo.name, hi.name),
    )
