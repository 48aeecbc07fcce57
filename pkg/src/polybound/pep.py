"""Ground-truth spectra via monicization and block-companion linearization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOLERANCES, MatrixPolynomial, Tolerances
from .errors import CapExceeded, NotMonic, SingularCoefficient, SingularMatrix
from .linalg import eig_cap, general_eigenvalues, lu_factor


@dataclass(frozen=True)
class SpectrumSummary:
    eigenvalues: np.ndarray
    min_modulus: float
    max_modulus: float
    residuals: np.ndarray
    flagged: int

    @property
    def count(self) -> int:
        return len(self.eigenvalues)


def monicize(P: MatrixPolynomial, tolerances: Tolerances = DEFAULT_TOLERANCES) -> MatrixPolynomial:
    """Am^-1 P(z), with the leading block set to the identity exactly."""
    n = P.size
    if P.is_monic(tolerances.monic_tol):
        if np.array_equal(P.leading, np.eye(n)):
            return P
        return MatrixPolynomial(P.coefficients[:-1] + (np.eye(n),), P.description)
    try:
        lu = lu_factor(P.leading, pivot_tol=tolerances.pivot_tol)
    except SingularMatrix as exc:
        raise SingularCoefficient(f"Am is singular ({exc})") from None
    coeffs = tuple(lu.solve(a) for a in P.coefficients[:-1]) + (np.eye(n),)
    return MatrixPolynomial(coeffs, P.description)


def reversal(P: MatrixPolynomial) -> MatrixPolynomial:
    """z^m P(1/z): the coefficient sequence reversed."""
    return MatrixPolynomial(tuple(reversed(P.coefficients)), P.description)


def companion(P: MatrixPolynomial) -> np.ndarray:
    """Block companion matrix of a monic polynomial.

    Identity blocks on the block superdiagonal, last block row
    [-A0, -A1, ..., -A(m-1)].
    """
    n, m = P.size, P.degree
    if not np.array_equal(P.leading, np.eye(n)):
        raise NotMonic("companion needs a leading coefficient exactly equal to I")
    c = np.zeros((m * n, m * n), dtype=np.complex128)
    if m > 1:
        c[: (m - 1) * n, n:] = np.eye((m - 1) * n)
    c[(m - 1) * n:, :] = -np.hstack(P.coefficients[:-1])
    return c


def pivot_residual(P: MatrixPolynomial, lam: complex) -> float:
    """Smallest LU pivot of P(lam) relative to sum_i ||A_i||_inf |lam|^i."""
    lu = lu_factor(P(lam), check=False)
    r = abs(lam)
    scale = sum(float(np.max(np.sum(np.abs(a), axis=1))) * r ** i for i, a in enumerate(P.coefficients))
    return lu.min_pivot / scale if scale > 0 else lu.min_pivot


def solve_spectrum(P: MatrixPolynomial, tolerances: Tolerances = DEFAULT_TOLERANCES,
                   cap: int | None = None) -> SpectrumSummary:
    """All m*n eigenvalues of P with residual flags.

    A residual above ``tolerances.residual_tol`` is flagged, not raised.
    """
    cap = eig_cap() if cap is None else cap
    if P.size * P.degree > cap:
        raise CapExceeded(f"m*n = {P.size * P.degree} exceeds eigensolver cap {cap}")
    Q = monicize(P, tolerances)
    eigs = general_eigenvalues(companion(Q), cap=cap)
    residuals = np.array([pivot_residual(Q, lam) for lam in eigs])
    moduli = np.abs(eigs)
    return SpectrumSummary(
        eigenvalues=eigs,
        min_modulus=float(np.min(moduli)),
        max_modulus=float(np.max(moduli)),
        residuals=residuals,
        flagged=int(np.sum(residuals > tolerances.residual_tol)),
    )
