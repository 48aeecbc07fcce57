"""Dense kernels: subordinate norms, LU, Hermitian Jacobi, Loewner tests, eigenvalues."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOLERANCES, NormKind
from .errors import CapExceeded, ConvergenceFailure, NotHermitian, ShapeError, SingularMatrix

DEFAULT_EIG_CAP = 256
EIG_CAP_ENV = "POLYBOUND_EIG_CAP"

# cyclic Jacobi switches from scalar loops to vectorized row updates above this size
_SMALL_JACOBI = 16


def eig_cap() -> int:
    """Eigensolver size cap, overridable through ``POLYBOUND_EIG_CAP``."""
    raw = os.environ.get(EIG_CAP_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_EIG_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{EIG_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{EIG_CAP_ENV} must be positive, got {cap}")
    return cap


def _square(a, what="matrix") -> np.ndarray:
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ShapeError(f"{what} must be square, got shape {arr.shape}")
    return arr


# -- norms ---------------------------------------------------------------------

def matrix_norm(a, kind: NormKind = NormKind.TWO) -> float:
    """Subordinate matrix norm.

    one: max absolute column sum; infinity: max absolute row sum; two: the
    square root of the largest eigenvalue of A*A from the Jacobi solver.
    """
    a = _square(a)
    kind = NormKind.parse(kind)
    if kind is NormKind.ONE:
        return float(np.max(np.sum(np.abs(a), axis=0)))
    if kind is NormKind.INFINITY:
        return float(np.max(np.sum(np.abs(a), axis=1)))
    if not np.any(a):
        return 0.0
    gram = a.conj().T @ a
    w = _jacobi_eigh(0.5 * (gram + gram.conj().T), vectors=False)[0]
    return math.sqrt(max(w[-1], 0.0))


def frobenius_norm(a) -> float:
    """Frobenius norm; diagnostics only, never used in bounds (not subordinate)."""
    return float(np.sqrt(np.sum(np.abs(_square(a)) ** 2)))


def condition_number(a, kind: NormKind = NormKind.TWO) -> float:
    """||A|| * ||A^-1||.

    For 1x1 matrices this is exactly 1 for every subordinate norm, and is
    returned as such rather than as a rounded product.
    """
    a = _square(a)
    if a.shape[0] == 1:
        if a[0, 0] == 0:
            raise SingularMatrix("zero 1x1 matrix")
        return 1.0
    return matrix_norm(a, kind) * matrix_norm(inverse(a), kind)


# -- LU ------------------------------------------------------------------------

@dataclass(frozen=True)
class LuFactors:
    """Partial-pivoted LU: ``A[perm] = L @ U`` with L unit lower triangular.

    ``lu`` stores the strictly lower part of L and all of U in one matrix.
    """

    lu: np.ndarray
    perm: np.ndarray
    sign: int

    @property
    def pivots(self) -> np.ndarray:
        return np.diagonal(self.lu).copy()

    @property
    def min_pivot(self) -> float:
        return float(np.min(np.abs(np.diagonal(self.lu))))

    @property
    def lower(self) -> np.ndarray:
        return np.tril(self.lu, -1) + np.eye(self.lu.shape[0])

    @property
    def upper(self) -> np.ndarray:
        return np.triu(self.lu)

    def solve(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=np.complex128)
        x = b[self.perm].reshape(b.shape[0], -1).copy()
        lu = self.lu
        n = lu.shape[0]
        for k in range(n):
            x[k + 1:] -= np.outer(lu[k + 1:, k], x[k])
        for k in range(n - 1, -1, -1):
            x[k] /= lu[k, k]
            x[:k] -= np.outer(lu[:k, k], x[k])
        return x.reshape(b.shape)


def lu_factor(a, pivot_tol: float = DEFAULT_TOLERANCES.pivot_tol, check: bool = True) -> LuFactors:
    """Gaussian elimination with partial pivoting.

    Raises SingularMatrix when a pivot magnitude drops below
    ``pivot_tol`` times the largest initial column one-norm (unless
    ``check`` is false, in which case elimination simply skips zero pivots).
    """
    lu = np.array(_square(a), dtype=np.complex128)
    n = lu.shape[0]
    threshold = pivot_tol * float(np.max(np.sum(np.abs(lu), axis=0)))
    perm = list(range(n))
    sign = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[k], perm[p] = perm[p], perm[k]
            sign = -sign
        pivot = lu[k, k]
        if check and (abs(pivot) <= threshold or pivot == 0):
            raise SingularMatrix(f"pivot {abs(pivot):.3e} at step {k} below threshold {threshold:.3e}")
        if pivot == 0:
            continue
        lu[k + 1:, k] /= pivot
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return LuFactors(lu=lu, perm=np.array(perm, dtype=np.intp), sign=sign)


def inverse(a, pivot_tol: float = DEFAULT_TOLERANCES.pivot_tol) -> np.ndarray:
    a = _square(a)
    return lu_factor(a, pivot_tol=pivot_tol).solve(np.eye(a.shape[0], dtype=np.complex128))


# -- Hermitian eigenvalues ---------------------------------------------------------

@dataclass(frozen=True)
class HermitianExtremes:
    lambda_min: float
    lambda_max: float


# Off-diagonal entries this small next to the diagonal are annihilated outright.
_NEGLIGIBLE = 1.1e-16
_TINY = 1e-300


def _rotation_tangent(theta: float) -> float:
    """Smaller root of t^2 + 2 theta t - 1 = 0, safe for huge theta."""
    if abs(theta) > 1e150:
        return 0.5 / theta
    return (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))


def _jacobi_eigh(h: np.ndarray, vectors: bool = True, tol: float = 1e-15, max_sweeps: int = 60):
    """Cyclic complex Jacobi on an exactly Hermitian matrix.

    Returns ascending eigenvalues and (optionally) the matrix of eigenvectors.
    """
    n = h.shape[0]
    if n > _SMALL_JACOBI:
        return _jacobi_eigh_vectorized(h, vectors, tol, max_sweeps)
    a = [[complex(x) for x in row] for row in h.tolist()]
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)] if vectors else None
    for _ in range(max_sweeps):
        off = 0.0
        diag = 0.0
        for i in range(n):
            row = a[i]
            for j in range(n):
                if i != j:
                    off += row[j].real ** 2 + row[j].imag ** 2
            diag += row[i].real ** 2
        if off <= tol * tol * diag or off == 0.0:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                mag = abs(apq)
                app = a[p][p].real
                aqq = a[q][q].real
                if mag <= _NEGLIGIBLE * (abs(app) + abs(aqq)) or mag < _TINY:
                    a[p][q] = a[q][p] = 0j
                    continue
                rotated = True
                ph = apq / mag
                t = _rotation_tangent((aqq - app) / (2.0 * mag))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                sph = s * ph
                sphc = s * ph.conjugate()
                for k in range(n):
                    row = a[k]
                    akp = row[p]
                    akq = row[q]
                    row[p] = c * akp - sphc * akq
                    row[q] = sph * akp + c * akq
                rp = a[p]
                rq = a[q]
                for k in range(n):
                    apk = rp[k]
                    aqk = rq[k]
                    rp[k] = c * apk - sph * aqk
                    rq[k] = sphc * apk + c * aqk
                rp[q] = 0j
                rq[p] = 0j
                rp[p] = complex(app - t * mag)
                rq[q] = complex(aqq + t * mag)
                if vectors:
                    for k in range(n):
                        row = v[k]
                        vkp = row[p]
                        vkq = row[q]
                        row[p] = c * vkp - sphc * vkq
                        row[q] = sph * vkp + c * vkq
        if not rotated:
            break
    else:
        raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.array([a[i][i].real for i in range(n)])
    order = np.argsort(w, kind="stable")
    if vectors:
        return w[order], np.array(v, dtype=np.complex128)[:, order]
    return w[order], None


def _jacobi_eigh_vectorized(h, vectors, tol, max_sweeps):
    n = h.shape[0]
    a = np.array(h, dtype=np.complex128)
    v = np.eye(n, dtype=np.complex128) if vectors else None
    for _ in range(max_sweeps):
        d = np.real(np.diagonal(a))
        off = float(np.sum(np.abs(a) ** 2) - np.sum(d ** 2))
        if off <= tol * tol * float(np.sum(d ** 2)) or off <= 0.0:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                app = a[p, p].real
                aqq = a[q, q].real
                if mag <= _NEGLIGIBLE * (abs(app) + abs(aqq)) or mag < _TINY:
                    a[p, q] = a[q, p] = 0.0
                    continue
                rotated = True
                ph = apq / mag
                t = _rotation_tangent((aqq - app) / (2.0 * mag))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s * ph], [-s * np.conj(ph), c]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.conj().T @ a[[p, q], :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                if vectors:
                    v[:, [p, q]] = v[:, [p, q]] @ rot
        if not rotated:
            break
    else:
        raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.real(np.diagonal(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], (v[:, order] if vectors else None)


def _symmetrize(a, herm_tol: float) -> np.ndarray:
    a = _square(a)
    scale = float(np.max(np.sum(np.abs(a), axis=1)))
    skew = float(np.max(np.sum(np.abs(a - a.conj().T), axis=1)))
    if skew > herm_tol * scale:
        raise NotHermitian(f"||A - A*||_inf = {skew:.3e} exceeds {herm_tol:g} * ||A||_inf")
    return 0.5 * (a + a.conj().T)


def is_hermitian(a, herm_tol: float = DEFAULT_TOLERANCES.herm_tol) -> bool:
    try:
        _symmetrize(a, herm_tol)
    except NotHermitian:
        return False
    return True


def hermitian_eigensystem(a, herm_tol: float = DEFAULT_TOLERANCES.herm_tol):
    """All eigenvalues (ascending) and eigenvectors of the symmetrized matrix."""
    return _jacobi_eigh(_symmetrize(a, herm_tol), vectors=True)


def hermitian_eigenvalues(a, herm_tol: float = DEFAULT_TOLERANCES.herm_tol) -> np.ndarray:
    return _jacobi_eigh(_symmetrize(a, herm_tol), vectors=False)[0]


def hermitian_extremes(a, herm_tol: float = DEFAULT_TOLERANCES.herm_tol) -> HermitianExtremes:
    w = hermitian_eigenvalues(a, herm_tol)
    return HermitianExtremes(lambda_min=float(w[0]), lambda_max=float(w[-1]))


def is_loewner_geq(a, b, psd_tol: float = DEFAULT_TOLERANCES.psd_tol,
                   herm_tol: float = DEFAULT_TOLERANCES.herm_tol) -> bool:
    """A >= B in the Loewner order, i.e. A - B positive semidefinite within tolerance."""
    a = _symmetrize(a, herm_tol)
    b = _symmetrize(b, herm_tol)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    d = a - b
    scale = max(1.0, float(np.max(np.sum(np.abs(d), axis=1))))
    return hermitian_extremes(d, herm_tol).lambda_min >= -psd_tol * scale


def is_positive_definite(a, psd_tol: float = DEFAULT_TOLERANCES.psd_tol,
                         herm_tol: float = DEFAULT_TOLERANCES.herm_tol) -> bool:
    a = _symmetrize(a, herm_tol)
    scale = max(1.0, float(np.max(np.sum(np.abs(a), axis=1))))
    return hermitian_extremes(a, herm_tol).lambda_min > psd_tol * scale


# -- general eigenvalues -----------------------------------------------------------

def general_eigenvalues(a, cap: int | None = None) -> np.ndarray:
    """All eigenvalues of a dense complex matrix, with multiplicity.

    Backed by LAPACK's geev (balancing, Hessenberg reduction, shifted QR).
    """
    a = _square(a)
    cap = eig_cap() if cap is None else cap
    if a.shape[0] > cap:
        raise CapExceeded(f"matrix size {a.shape[0]} exceeds eigensolver cap {cap}")
    if not np.all(np.isfinite(a)):
        raise ConvergenceFailure("matrix has non-finite entries")
    try:
        w = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"QR iteration failed to converge: {exc}") from None
    if not np.all(np.isfinite(w)):
        raise ConvergenceFailure("eigenvalue computation produced non-finite values")
    return w
