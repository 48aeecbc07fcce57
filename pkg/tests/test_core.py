import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from polybound import (
    AnnulusBound,
    BoundId,
    MatrixPolynomial,
    NormKind,
    ParseError,
    PolynomialError,
    ShapeError,
    SingularCoefficient,
    read_instance,
    validate,
    write_instance,
)

I2 = np.eye(2)


def test_validate_identity_coefficients():
    P = MatrixPolynomial((I2, I2))
    assert validate(P, True, True) is P


def test_validate_zero_a0_is_singular():
    P = MatrixPolynomial((np.zeros((2, 2)), I2))
    with pytest.raises(SingularCoefficient, match="A0"):
        validate(P, require_A0_invertible=True, require_Am_invertible=False)
    assert validate(P, require_A0_invertible=False) is P


def test_validate_singular_leading():
    P = MatrixPolynomial((I2, np.array([[1.0, 0.0], [0.0, 0.0]])))
    with pytest.raises(SingularCoefficient, match="Am"):
        validate(P)


def test_mixed_sizes_rejected():
    with pytest.raises(ShapeError):
        MatrixPolynomial((np.eye(2), np.eye(3)))
    with pytest.raises(ShapeError):
        validate([np.eye(2), np.eye(3)])


@pytest.mark.parametrize(
    "coeffs",
    [
        (np.ones((2, 3)), np.ones((2, 3))),
        (np.eye(2),),
        (np.ones(2), np.ones(2)),
    ],
)
def test_shape_errors(coeffs):
    with pytest.raises(ShapeError):
        MatrixPolynomial(coeffs)


def test_zero_leading_and_non_finite_rejected():
    with pytest.raises(PolynomialError, match="leading"):
        MatrixPolynomial((I2, np.zeros((2, 2))))
    with pytest.raises(PolynomialError, match="non-finite"):
        MatrixPolynomial((np.array([[np.nan]]), np.eye(1)))
    with pytest.raises(PolynomialError):
        MatrixPolynomial((np.array([[np.inf]]), np.eye(1)))


def test_polynomial_is_immutable_and_evaluates():
    A0 = np.array([[1.0, 2.0], [3.0, 4.0]])
    P = MatrixPolynomial((A0, I2, 2 * I2))
    A0[0, 0] = 99.0  # caller's copy
    assert P[0][0, 0] == 1.0
    with pytest.raises(ValueError):
        P[0][0, 0] = 5.0
    z = 0.5 - 1j
    np.testing.assert_allclose(P(z), P[0] + P[1] * z + P[2] * z**2)
    assert (P.degree, P.size) == (2, 2)


def test_read_smallest_instance():
    P = read_instance('{"coefficients":[[[[1,0]]],[[[0,1]]]]}')
    assert (P.size, P.degree) == (1, 1)
    assert P[0][0, 0] == 1 and P[1][0, 0] == 1j


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('{"description": "x"}', "coefficients"),
        ("{not json", "malformed"),
        ('{"coefficients":[[[[1,0]]]]}', "at least two"),
        ('{"coefficients":[[[[1,0]]],[[[1]]]]}', "[re, im]"),
        ('{"coefficients":[[[[1,0]]],[[[1,"a"]]]]}', "number"),
        ('{"coefficients":[[[[1,0]]],[[[NaN,0]]]]}', "non-finite"),
        ('{"coefficients":[[[[1,0]]],[[[1,0],[1,0]]]]}', "entries"),
        ('{"coefficients":[[[[1,0]]],[[[0,0]]]]}', "leading"),
        ('{"coefficients":[[[[1,0]]],[[[1,0]]]], "extra": 1}', "unexpected"),
        ("[1, 2]", "object"),
    ],
)
def test_read_rejects(text, fragment):
    with pytest.raises(ParseError, match=None) as info:
        read_instance(text)
    assert fragment in str(info.value)


def test_parse_error_carries_path():
    with pytest.raises(ParseError) as info:
        read_instance('{"coefficients":[[[[1,0]]],[[[1,true]]]]}')
    assert info.value.path == "$.coefficients[1][0][0][1]"


def test_write_scalar_example():
    P = MatrixPolynomial((np.eye(1), np.eye(1)))
    assert write_instance(P) == '{"coefficients":[[[[1,0]]],[[[1,0]]]]}'


def test_write_shape_and_round_trip(rng):
    coeffs = tuple(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3))
    P = MatrixPolynomial(coeffs, description="n=2, m=2")
    doc = json.loads(write_instance(P))
    assert len(doc["coefficients"]) == 3
    assert all(len(mat) == 2 and all(len(row) == 2 for row in mat) for mat in doc["coefficients"])
    assert read_instance(write_instance(P)) == P


def test_canonical_document_round_trips_as_text():
    text = '{"coefficients":[[[[0.1,-2.5]]],[[[1,0]]]],"description":"tiny"}'
    assert write_instance(read_instance(text)) == text


def test_write_is_deterministic_and_sorted():
    P = MatrixPolynomial((np.eye(1), np.eye(1)), description="d")
    text = write_instance(P)
    assert text == write_instance(P)
    assert text.index('"coefficients"') < text.index('"description"')


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 3),
    m=st.integers(1, 3),
    data=st.data(),
)
def test_round_trip_property(n, m, data):
    re = data.draw(arrays(np.float64, (m + 1, n, n), elements=finite))
    im = data.draw(arrays(np.float64, (m + 1, n, n), elements=finite))
    if not (np.any(re[-1]) or np.any(im[-1])):
        re[-1, 0, 0] = 1.0  # leading block must be nonzero
    P = MatrixPolynomial(tuple(re[i] + 1j * im[i] for i in range(m + 1)))
    Q = read_instance(write_instance(P))
    assert Q == P
    for a, b in zip(P.coefficients, Q.coefficients):
        assert a.tobytes() == b.tobytes()
    validate(Q, require_A0_invertible=False, require_Am_invertible=False)


def test_norm_kind_parse():
    assert NormKind.parse("1") is NormKind.ONE
    assert NormKind.parse("inf") is NormKind.INFINITY
    assert NormKind.parse(NormKind.TWO) is NormKind.TWO
    with pytest.raises(ValueError):
        NormKind.parse("fro")


def test_annulus_invariants():
    b = AnnulusBound(BoundId.RATIO, lower=0.5, upper=2.0, lower_strict=True)
    assert b.contains(1.0) and not b.contains(3.0) and not b.contains(0.1)
    assert b.contains(2.0 + 1e-7, tol=1e-6)
    with pytest.raises(ValueError):
        AnnulusBound(BoundId.RATIO, lower=3.0, upper=2.0)
    with pytest.raises(ValueError):
        AnnulusBound(BoundId.RATIO)
    with pytest.raises(ValueError):
        AnnulusBound(BoundId.RATIO, lower=1.0, applicable=False, reason="x")
    with pytest.raises(ValueError):
        AnnulusBound(BoundId.RATIO, applicable=False)
    with pytest.raises(ValueError):
        AnnulusBound(BoundId.RATIO, upper=math.inf)
    off = AnnulusBound.inapplicable(BoundId.DOMINANCE, "dominance fails at i=0")
    assert not off.applicable and off.lower is None and off.upper is None
    assert off.contains(1e300)


def test_annulus_name_includes_parameter():
    assert AnnulusBound(BoundId.HOLDER, upper=1.0, parameter=2.0).name == "holder[p=2]"
    assert AnnulusBound(BoundId.CAUCHY, upper=1.0).name == "cauchy"
