from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beltrami_lab.orthopoly import (
    Polynomial,
    char_poly,
    check_interlacing,
    eigenpair,
    gegenbauer32,
    hypergeometric_residual,
    isolate_roots,
    jacobi11,
    jacobi11_poly,
    jacobi11_with_derivative,
    rotsyst_residuals,
    sturm_count,
    turan_margin,
)

F = Fraction


def test_polynomial_arithmetic():
    p = Polynomial([1, 2])
    q = Polynomial([0, 0, 3])
    assert (p * q).coefficients == (0, 0, 3, 6)
    assert (p - p).is_zero() and (p - p).degree == -1
    assert Polynomial([1, 0, 0]).degree == 0
    assert p.compose(Polynomial([1, 1])) == Polynomial([3, 2])
    assert q.deriv() == Polynomial([0, 6])
    assert p.exact(F(1, 2)) == 2


@pytest.mark.parametrize("m", range(11))
def test_jacobi_at_one(m):
    assert jacobi11(m, 1.0) == pytest.approx(m + 1, abs=1e-12)
    assert jacobi11_poly(m).exact(1) == m + 1


def test_jacobi_zero_and_parity():
    x = np.linspace(-1, 1, 41)
    assert np.all(jacobi11(0, x) == 1)
    for m in range(9):
        assert np.allclose(jacobi11(m, -x), (-1) ** m * jacobi11(m, x), atol=1e-12)


def test_recurrence_matches_exact_polynomial():
    x = np.linspace(-1, 1, 101)
    for n in range(12):
        assert np.allclose(jacobi11(n, x), jacobi11_poly(n)(x), atol=1e-9)
        v, d = jacobi11_with_derivative(n, x)
        assert np.allclose(v, jacobi11(n, x), atol=1e-12)
        assert np.allclose(d, jacobi11_poly(n).deriv()(x), atol=1e-8)


@pytest.mark.parametrize("m", range(2, 13))
def test_gegenbauer_normalisation_agrees(m):
    z = np.linspace(0, 1, 57)
    pair = eigenpair(m)
    F_geg = gegenbauer32(m - 1, 1 - 2 * z) / gegenbauer32(m - 1, 1.0)
    G_geg = (m - 1) / (m + 1) * gegenbauer32(m - 2, 1 - 2 * z) / gegenbauer32(m - 2, 1.0)
    assert np.allclose(pair.F(z), F_geg, atol=1e-12)
    assert np.allclose(pair.G(z), G_geg, atol=1e-12)


def test_eigenpair_small_cases():
    p2 = eigenpair(2)
    assert p2.F == Polynomial([1, -2]) and p2.G == Polynomial([F(1, 3)])
    p3 = eigenpair(3)
    assert p3.F == Polynomial([1, -5, 5]) and p3.G == Polynomial([F(1, 2), -1])
    with pytest.raises(ValueError):
        eigenpair(1)


@pytest.mark.parametrize("m", range(2, 16))
def test_eigenpair_invariants(m):
    pair = eigenpair(m)
    assert pair.F.degree == m - 1 and pair.G.degree == m - 2
    assert pair.F.exact(0) == 1
    assert pair.G.exact(0) == F(m - 1, m + 1)
    r1, r2 = rotsyst_residuals(pair.F, pair.G, 2 * m)
    assert r1.is_zero() and r2.is_zero()
    assert hypergeometric_residual(pair.F, 2 * m).is_zero()


def test_char_poly_anchors():
    assert char_poly(2) == Polynomial([F(2, 3), F(-4, 3)])
    assert char_poly(3) == Polynomial([F(1, 2), -3, 3])
    assert char_poly(4) == Polynomial([F(2, 5), F(-24, 5), 12, -8])


def test_root_isolation():
    assert isolate_roots(char_poly(2), 0, 1) == pytest.approx([0.5], abs=1e-12)
    r = isolate_roots(char_poly(3), 0, 1)
    assert r == pytest.approx(sorted([(3 - np.sqrt(3)) / 6, (3 + np.sqrt(3)) / 6]), abs=1e-12)


@pytest.mark.parametrize("m", range(2, 21))
def test_char_poly_has_roots_and_sturm_agrees(m):
    p = char_poly(m)
    roots = isolate_roots(p, 0.0, 1.0)
    assert roots
    assert len(roots) == sturm_count(p, 0, 1)
    for r in roots:
        # exact sign change across each root
        lo, hi = Fraction(r - 1e-9), Fraction(r + 1e-9)
        assert p.exact(lo) * p.exact(hi) < 0


def test_interlacing():
    assert check_interlacing(2)[0]
    ok, margin = check_interlacing(3)
    assert ok and margin > 0
    ok, margin = check_interlacing(10)
    assert ok and margin > 0


@pytest.mark.parametrize("m", [2, 3, 5, 8, 12])
def test_turan_positive(m):
    assert turan_margin(m, 1000) > 0


def test_turan_degenerates_at_endpoint():
    # at w = 1 the two sides differ only by the factor m^2/(m^2 - 1) applied to (m+1)(m-1)
    for m in range(2, 8):
        lhs = jacobi11(m - 1, 1.0) ** 2
        rhs = jacobi11(m, 1.0) * jacobi11(m - 2, 1.0) * m * m / (m * m - 1)
        assert lhs == pytest.approx(rhs)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=20), min_size=1, max_size=6),
       st.fractions(min_value=-3, max_value=3, max_denominator=10))
def test_polynomial_exact_evaluation_is_a_ring_map(coeffs, z):
    p = Polynomial(coeffs)
    q = Polynomial([1, z])
    assert (p * q).exact(z) == p.exact(z) * q.exact(z)
    assert (p + q).exact(z) == p.exact(z) + q.exact(z)
    assert p.deriv().exact(z) * 1 == sum(k * c * z ** (k - 1) for k, c in enumerate(p.coefficients) if k)
