"""Data model: matrix polynomials, annulus bounds, reports and the instance format."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ParseError, PolynomialError, ShapeError, SingularCoefficient


class NormKind(enum.Enum):
    """Subordinate matrix norms admitted in bound computations."""

    ONE = "one"
    TWO = "two"
    INFINITY = "infinity"

    @classmethod
    def parse(cls, text) -> "NormKind":
        if isinstance(text, NormKind):
            return text
        key = str(text).strip().lower()
        aliases = {
            "1": cls.ONE, "one": cls.ONE,
            "2": cls.TWO, "two": cls.TWO,
            "inf": cls.INFINITY, "infinity": cls.INFINITY,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown norm kind {text!r}; expected 1, 2 or inf") from None


class BoundId(enum.Enum):
    """Identifiers of the bound catalogue, in catalogue order."""

    DOMINANCE = "dominance"
    EK_HERMITIAN_MONOTONE = "ek_hermitian_monotone"
    EK_HERMITIAN_MONOTONE_DUAL = "ek_hermitian_monotone_dual"
    EK_POSITIVE_DEFINITE = "ek_positive_definite"
    CAUCHY = "cauchy"
    CAUCHY_R1 = "cauchy_r1"
    CAUCHY_R2 = "cauchy_r2"
    CAUCHY_R3 = "cauchy_r3"
    CAUCHY_R4 = "cauchy_r4"
    JLR_BASE_UPPER = "jlr_base_upper"
    JLR_BASE_LOWER = "jlr_base_lower"
    JLR_DIFF_UPPER = "jlr_diff_upper"
    JLR_DIFF_LOWER = "jlr_diff_lower"
    JLR_AM1_PRODUCT_UPPER = "jlr_am1_product_upper"
    JLR_AM1_PRODUCT_LOWER = "jlr_am1_product_lower"
    JLR_SHIFT_PRODUCT_UPPER = "jlr_shift_product_upper"
    JLR_SHIFT_PRODUCT_LOWER = "jlr_shift_product_lower"
    DATT_GOVIL = "datt_govil"
    DATT_GOVIL_CLOSED_FORM = "datt_govil_closed_form"
    RATIO = "ratio"
    HOLDER = "holder"
    BEST_ENCLOSURE = "best_enclosure"


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared across modules."""

    herm_tol: float = 1e-10
    psd_tol: float = 1e-10
    pivot_tol: float = 1e-12
    monic_tol: float = 1e-14
    enclosure_tol: float = 1e-6
    residual_tol: float = 1e-5

    def to_dict(self) -> dict:
        return {
            "herm_tol": self.herm_tol,
            "psd_tol": self.psd_tol,
            "pivot_tol": self.pivot_tol,
            "monic_tol": self.monic_tol,
            "enclosure_tol": self.enclosure_tol,
            "residual_tol": self.residual_tol,
        }


DEFAULT_TOLERANCES = Tolerances()


def as_complex_matrix(a, *, what="matrix") -> np.ndarray:
    """Return a read-only complex128 copy of ``a``; rejects non-finite entries."""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{what} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise PolynomialError(f"{what} has non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """P(z) = A0 + A1 z + ... + Am z^m, coefficients stored lowest degree first."""

    coefficients: tuple
    description: Optional[str] = None

    def __post_init__(self):
        coeffs = tuple(
            as_complex_matrix(a, what=f"coefficient A{i}")
            for i, a in enumerate(self.coefficients)
        )
        if len(coeffs) < 2:
            raise ShapeError("a matrix polynomial needs at least two coefficients (degree >= 1)")
        n = coeffs[0].shape[0]
        for i, a in enumerate(coeffs):
            if a.shape[0] != a.shape[1]:
                raise ShapeError(f"coefficient A{i} is not square: shape {a.shape}")
            if a.shape[0] != n:
                raise ShapeError(f"coefficient A{i} has size {a.shape[0]}, expected {n}")
        if not np.any(coeffs[-1]):
            raise PolynomialError("leading coefficient is the zero matrix")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def size(self) -> int:
        return self.coefficients[0].shape[0]

    @property
    def leading(self) -> np.ndarray:
        return self.coefficients[-1]

    def __getitem__(self, i) -> np.ndarray:
        return self.coefficients[i]

    def __len__(self) -> int:
        return len(self.coefficients)

    def __call__(self, z) -> np.ndarray:
        """Evaluate P(z) by Horner's rule."""
        out = np.array(self.coefficients[-1], dtype=np.complex128)
        for a in reversed(self.coefficients[:-1]):
            out = out * z + a
        return out

    def is_monic(self, tol: float = DEFAULT_TOLERANCES.monic_tol) -> bool:
        eye = np.eye(self.size)
        return float(np.max(np.sum(np.abs(self.leading - eye), axis=1))) <= tol

    def scaled(self, c) -> "MatrixPolynomial":
        return MatrixPolynomial(tuple(c * a for a in self.coefficients), self.description)

    def __eq__(self, other):
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return (
            self.description == other.description
            and len(self) == len(other)
            and all(np.array_equal(a, b) for a, b in zip(self.coefficients, other.coefficients))
        )

    __hash__ = None

    def __repr__(self):
        return f"MatrixPolynomial(n={self.size}, m={self.degree})"


def validate(
    P: MatrixPolynomial,
    require_A0_invertible: bool = True,
    require_Am_invertible: bool = True,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> MatrixPolynomial:
    """Confirm the standing nonsingularity assumptions on A0 and/or Am.

    Shape invariants are enforced at construction; this adds the LU-based
    invertibility checks and returns ``P`` unchanged.
    """
    from .linalg import lu_factor
    from .errors import SingularMatrix

    if not isinstance(P, MatrixPolynomial):
        P = MatrixPolynomial(tuple(P))
    checks = []
    if require_A0_invertible:
        checks.append((0, "A0"))
    if require_Am_invertible:
        checks.append((P.degree, "Am"))
    for index, name in checks:
        try:
            lu_factor(P[index], pivot_tol=tolerances.pivot_tol)
        except SingularMatrix as exc:
            raise SingularCoefficient(f"{name} is singular ({exc})") from None
    return P


@dataclass(frozen=True)
class AnnulusBound:
    """A statement ``lower (<|<=) |lambda| (<|<=) upper`` produced by one bound.

    Either radius may be absent. Inapplicable bounds carry no radii and a
    reason instead.
    """

    source: BoundId
    lower: Optional[float] = None
    lower_strict: bool = False
    upper: Optional[float] = None
    upper_strict: bool = False
    applicable: bool = True
    reason: Optional[str] = None
    parameter: Optional[float] = None
    contributors: tuple = ()

    def __post_init__(self):
        if self.applicable:
            if self.reason is not None:
                raise ValueError("applicable bound must not carry a reason")
            if self.lower is None and self.upper is None:
                raise ValueError("applicable bound needs at least one radius")
        else:
            if not self.reason:
                raise ValueError("inapplicable bound needs a reason")
            if self.lower is not None or self.upper is not None:
                raise ValueError("inapplicable bound must not carry radii")
        for name in ("lower", "upper"):
            value = getattr(self, name)
            if value is not None:
                if not math.isfinite(value) or value < 0:
                    raise ValueError(f"{name} radius must be finite and nonnegative, got {value}")
                object.__setattr__(self, name, float(value))
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise ValueError(f"lower radius {self.lower} exceeds upper radius {self.upper}")

    @classmethod
    def inapplicable(cls, source: BoundId, reason: str, parameter=None) -> "AnnulusBound":
        return cls(source=source, applicable=False, reason=reason, parameter=parameter)

    @property
    def name(self) -> str:
        if self.parameter is None:
            return self.source.value
        return f"{self.source.value}[p={self.parameter:g}]"

    def contains(self, modulus: float, tol: float = 0.0) -> bool:
        """Whether ``modulus`` lies in the annulus, each radius relaxed by tol*(1+radius)."""
        if not self.applicable:
            return True
        if self.lower is not None and modulus < self.lower - tol * (1.0 + self.lower):
            return False
        if self.upper is not None and modulus > self.upper + tol * (1.0 + self.upper):
            return False
        return True

    def to_dict(self) -> dict:
        return {
            "id": self.name,
            "source": self.source.value,
            "parameter": self.parameter,
            "lower": self.lower,
            "lower_strict": self.lower_strict,
            "upper": self.upper,
            "upper_strict": self.upper_strict,
            "applicable": self.applicable,
            "reason": self.reason,
            "contributors": list(self.contributors),
        }


@dataclass(frozen=True)
class BoundReport:
    """Catalogue output for one instance next to its ground-truth spectrum."""

    instance: dict
    norm: NormKind
    bounds: tuple
    true_min_modulus: float
    true_max_modulus: float
    verdicts: tuple
    sharpest_upper: Optional[str] = None
    sharpest_lower: Optional[str] = None

    @property
    def all_enclosed(self) -> bool:
        return all(v is not False for v in self.verdicts)

    def violations(self) -> list:
        return [b.name for b, v in zip(self.bounds, self.verdicts) if v is False]


# -- instance (de)serialization ------------------------------------------------

def _encode_number(x: float):
    # integral values print without a trailing ".0" so canonical documents round-trip as text
    if x.is_integer() and abs(x) < 2.0**53 and not (x == 0.0 and math.copysign(1.0, x) < 0):
        return int(x)
    return x


def instance_to_dict(P: MatrixPolynomial) -> dict:
    doc = {
        "coefficients": [
            [[[_encode_number(float(z.real)), _encode_number(float(z.imag))] for z in row] for row in a]
            for a in P.coefficients
        ]
    }
    if P.description is not None:
        doc["description"] = P.description
    return doc


def write_instance(P: MatrixPolynomial) -> str:
    """Serialize ``P`` to the canonical compact JSON instance document."""
    return json.dumps(instance_to_dict(P), separators=(",", ":"), sort_keys=True, allow_nan=False)


def _parse_number(value, path) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {type(value).__name__}", path)
    value = float(value)
    if not math.isfinite(value):
        raise ParseError("non-finite number", path)
    return value


def instance_from_dict(doc) -> MatrixPolynomial:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    unknown = set(doc) - {"coefficients", "description"}
    if unknown:
        raise ParseError(f"unexpected keys {sorted(unknown)}")
    if "coefficients" not in doc:
        raise ParseError("missing required key 'coefficients'")
    description = doc.get("description")
    if description is not None and not isinstance(description, str):
        raise ParseError("must be a string", "$.description")
    coeffs = doc["coefficients"]
    if not isinstance(coeffs, list) or len(coeffs) < 2:
        raise ParseError("must be an array of at least two matrices", "$.coefficients")
    n = None
    matrices = []
    for i, mat in enumerate(coeffs):
        mpath = f"$.coefficients[{i}]"
        if not isinstance(mat, list) or not mat:
            raise ParseError("must be a non-empty array of rows", mpath)
        if n is None:
            n = len(mat)
        if len(mat) != n:
            raise ParseError(f"has {len(mat)} rows, expected {n}", mpath)
        out = np.empty((n, n), dtype=np.complex128)
        for r, row in enumerate(mat):
            rpath = f"{mpath}[{r}]"
            if not isinstance(row, list) or len(row) != n:
                raise ParseError(f"must be an array of {n} entries", rpath)
            for c, entry in enumerate(row):
                epath = f"{rpath}[{c}]"
                if not isinstance(entry, list) or len(entry) != 2:
                    raise ParseError("entry must be a [re, im] pair", epath)
                out[r, c] = complex(_parse_number(entry[0], epath + "[0]"),
                                    _parse_number(entry[1], epath + "[1]"))
        matrices.append(out)
    try:
        return MatrixPolynomial(tuple(matrices), description)
    except PolynomialError as exc:
        raise ParseError(str(exc), "$.coefficients") from None


def read_instance(text: str) -> MatrixPolynomial:
    """Parse a JSON instance document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    return instance_from_dict(doc)
