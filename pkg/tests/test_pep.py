import numpy as np
import pytest

from polybound import (
    CapExceeded,
    MatrixPolynomial,
    NotMonic,
    SingularCoefficient,
    companion,
    monicize,
    reversal,
    solve_spectrum,
)

from conftest import match_multisets, random_complex

I2 = np.eye(2)


def scalar(*coeffs):
    return MatrixPolynomial(tuple(np.array([[c]], dtype=complex) for c in coeffs))


def random_polynomial(rng, n, m):
    return MatrixPolynomial(tuple(random_complex(rng, n) for _ in range(m + 1)))


def test_monicize_examples():
    P = MatrixPolynomial((I2, 3 * I2, I2))
    assert monicize(P) is P
    Q = monicize(MatrixPolynomial((4 * I2, 2 * I2)))
    np.testing.assert_allclose(Q[0], 2 * I2)
    np.testing.assert_array_equal(Q.leading, I2)
    with pytest.raises(SingularCoefficient):
        monicize(MatrixPolynomial((I2, np.diag([1.0, 0.0]))))


def test_monicize_nearly_monic_snaps_to_identity():
    P = MatrixPolynomial((I2, I2 * (1 + 1e-16)))
    np.testing.assert_array_equal(monicize(P).leading, I2)


def test_monicize_preserves_eigenvalues(rng):
    P = random_polynomial(rng, 3, 3)
    e1 = solve_spectrum(P).eigenvalues
    e2 = solve_spectrum(monicize(P)).eigenvalues
    assert match_multisets(e1, e2).max() < 1e-8 * np.abs(e1).max()


def test_reversal_examples(rng):
    P = scalar(-2, 1)  # z - 2
    R = reversal(P)  # 1 - 2z
    assert R[0][0, 0] == 1 and R[1][0, 0] == -2
    assert solve_spectrum(R).eigenvalues[0] == pytest.approx(0.5)
    Q = random_polynomial(rng, 2, 4)
    assert reversal(reversal(Q)) == Q


def test_companion_examples():
    # z^2 - 1
    np.testing.assert_array_equal(companion(scalar(-1, 0, 1)), [[0, 1], [1, 0]])
    # I z - B has companion B
    B = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(companion(MatrixPolynomial((-B, I2))), B)
    c = companion(scalar(1, 1, 1))  # z^2 + z + 1
    roots = np.exp(2j * np.pi / 3 * np.array([1, 2]))
    assert match_multisets(np.linalg.eigvals(c), roots).max() < 1e-12
    with pytest.raises(NotMonic):
        companion(scalar(1, 2))


def test_companion_block_layout(rng):
    P = monicize(random_polynomial(rng, 2, 3))
    c = companion(P)
    assert c.shape == (6, 6)
    np.testing.assert_array_equal(c[0:2, 2:4], I2)
    np.testing.assert_array_equal(c[2:4, 4:6], I2)
    np.testing.assert_array_equal(c[4:6, 0:2], -P[0])
    np.testing.assert_array_equal(c[4:6, 4:6], -P[2])


def test_spectrum_examples():
    s = solve_spectrum(MatrixPolynomial((-0.5 * I2, I2)))
    np.testing.assert_allclose(s.eigenvalues, [0.5, 0.5])
    assert s.min_modulus == s.max_modulus == pytest.approx(0.5)
    # (z-1)(z+1)(z-2)
    s = solve_spectrum(scalar(2, -1, -2, 1))
    assert match_multisets(s.eigenvalues, np.array([1, -1, 2])).max() < 1e-8
    # diag(z - 3, z + 1/4)
    s = solve_spectrum(MatrixPolynomial((np.diag([-3.0, 0.25]), I2)))
    assert (s.min_modulus, s.max_modulus) == pytest.approx((0.25, 3.0))


def test_spectrum_count_and_residuals(rng):
    for n, m in [(1, 1), (2, 3), (3, 5), (5, 9)]:
        P = random_polynomial(rng, n, m)
        s = solve_spectrum(P)
        assert s.count == m * n
        assert s.flagged == 0
        # each eigenvalue makes P(lambda) numerically singular
        for lam in s.eigenvalues[:5]:
            sv = np.linalg.svd(P(lam), compute_uv=False)
            assert sv[-1] <= 1e-8 * sum(np.linalg.norm(a, 2) * abs(lam) ** i for i, a in enumerate(P.coefficients))


def test_det_residual(rng):
    from polybound.linalg import lu_factor

    # det Q(lambda) has degree m*n, so the pivot product is normalized by (1+|lambda|)^(m*n)
    for n, m in [(1, 5), (2, 2), (3, 4), (5, 9)]:
        Q = monicize(random_polynomial(rng, n, m))
        for lam in solve_spectrum(Q).eigenvalues:
            pivots = np.abs(lu_factor(Q(lam), check=False).pivots)
            assert np.prod(pivots) / (1 + abs(lam)) ** (m * n) <= 1e-5


def test_scalar_spectrum_matches_closed_form(rng):
    # quadratic formula as the independent oracle
    for _ in range(20):
        a0, a1 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        disc = np.sqrt(a1 * a1 - 4 * a0)
        expected = np.array([(-a1 + disc) / 2, (-a1 - disc) / 2])
        got = solve_spectrum(scalar(a0, a1, 1)).eigenvalues
        assert match_multisets(got, expected).max() < 1e-10 * max(1, np.abs(expected).max())


@pytest.mark.parametrize("n, m", [(1, 2), (2, 5), (5, 9)])
def test_reciprocal_duality(rng, n, m):
    P = random_polynomial(rng, n, m)
    e = solve_spectrum(P).eigenvalues
    r = solve_spectrum(reversal(P)).eigenvalues
    assert match_multisets(1 / e, r).max() < 1e-8 * np.abs(r).max()


def test_cap_exceeded():
    P = MatrixPolynomial((np.eye(3), np.eye(3), np.eye(3)))
    with pytest.raises(CapExceeded):
        solve_spectrum(P, cap=5)
