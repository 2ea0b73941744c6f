from fractions import Fraction

import numpy as np
import pytest

from beltrami_lab.manifold import curl_s3_numeric, hopf_grid, laplace_beltrami_s3
from beltrami_lab.nodal import SphericalHarmonic, s2_eigenfunction
from beltrami_lab.orthopoly import Polynomial, eigenpair
from beltrami_lab.sphere_fields import (
    AxisymmetricField,
    anti_hopf_field,
    build_kl_field,
    build_Vm,
    builtin_example,
    curl_axisymmetric,
    homotopy_Vtm,
    hopf_field,
    min_norm,
    norm_range,
    s1_invariant_field,
    sample_field,
)

F = Fraction


def test_V2_and_V3_match_displayed_phi_components():
    s = np.linspace(0, np.pi / 2, 33)
    z = np.cos(s) ** 2
    a, b = build_Vm(2).phi_components(s)
    assert np.allclose(a, -(3 * np.cos(2 * s) - 1) / 3, atol=1e-15)
    assert np.allclose(b, -(3 * np.cos(2 * s) + 1) / 3, atol=1e-15)
    a, b = build_Vm(3).phi_components(s)
    assert np.allclose(a, 1.5 - 6 * z + 5 * z**2, atol=1e-14)
    assert np.allclose(b, 0.5 - 4 * z + 5 * z**2, atol=1e-14)


@pytest.mark.parametrize("m", [2, 3, 4, 7, 12])
def test_link_values(m):
    at0, at_half = build_Vm(m).link_values()
    assert at0 == F(2 * (-1) ** (m + 1), m + 1)
    assert at_half == F(2, m + 1)


def test_frame_evaluation_at_link_uses_no_chart():
    V = build_Vm(2)
    f, f1, f2 = V(0.0, 0.3, 1.0)
    assert (f, f1, f2) == pytest.approx((-2 / 3, 0.0, 0.0))
    f, f1, f2 = V(np.pi / 2, 0.3, 1.0)
    # at s = pi/2, d/dphi2 = R there with the frame normalisation
    assert f == pytest.approx(2 / 3) and abs(f1) < 1e-15 and abs(f2) < 1e-15


def test_negative_m_swaps_pair():
    V = build_Vm(-3)
    pair = eigenpair(3)
    assert V.F == pair.G and V.G == pair.F and V.lam == -6
    with pytest.raises(ValueError):
        build_Vm(1)
    with pytest.raises(ValueError):
        build_Vm(-1)


@pytest.mark.parametrize("m", [m for m in range(-12, 13) if abs(m) >= 2])
def test_exact_curl_identity(m):
    V = build_Vm(m)
    assert curl_axisymmetric(V).is_multiple_of(V, 2 * m)


def test_curl_of_hopf_fields():
    assert curl_axisymmetric(hopf_field()).is_multiple_of(hopf_field(), 2)
    assert curl_axisymmetric(anti_hopf_field()).is_multiple_of(anti_hopf_field(), -2)


@pytest.mark.parametrize("m", [-3, 2, 5])
def test_fd_curl_agrees_with_exact_curl(m):
    V = build_Vm(m)
    S, P1, P2 = hopf_grid(12, margin=0.01)
    fd = np.array(curl_s3_numeric(V, S, P1, P2, 1e-3, richardson=True))
    exact = np.array(np.broadcast_arrays(*curl_axisymmetric(V)(S, P1, P2)))
    assert np.max(np.abs(fd - exact)) < 1e-7


def test_stable_evaluation_matches_exact_polynomials():
    for m in (2, 6, 12, -9):
        V = build_Vm(m)
        z = np.linspace(0, 1, 101)
        Fz, Gz, dF, dG = V.eval_with_derivative(z)
        assert np.allclose(Fz, V.F(z), atol=1e-8)
        assert np.allclose(Gz, V.G(z), atol=1e-8)
        assert np.allclose(dF, V.F.deriv()(z), atol=1e-6)
        assert np.allclose(dG, V.G.deriv()(z), atol=1e-6)


def test_component_laplacian_small_m():
    V = build_Vm(2)
    S, P1, P2 = hopf_grid(8, margin=0.01)
    for i in range(3):
        g = lambda s, a, b, i=i: np.broadcast_arrays(*V(s, a, b))[i]  # noqa: E731
        lap = laplace_beltrami_s3(g, S, P1, P2, 1e-3, richardson=True)
        assert np.max(np.abs(lap + 8 * g(S, P1, P2))) < 1e-5


def test_min_norm_values():
    val, where = min_norm(build_Vm(2))
    # |V2|^2 = (5 + 3 cos 4s)/9, minimal at s = pi/4
    assert val == pytest.approx(1 / 3, abs=1e-12)
    assert where.s == pytest.approx(np.pi / 4, abs=1e-6)
    assert min_norm(hopf_field())[0] == pytest.approx(1.0)
    assert min_norm(build_Vm(3))[0] > 0.2
    with pytest.raises(ValueError):
        min_norm(build_Vm(2), n=16)


def test_min_norm_grid_path_for_frame_fields():
    V = builtin_example("nonkkps2")
    val, _ = min_norm(V, 32)
    assert val > 0.2


@pytest.mark.parametrize("m", range(2, 9))
def test_norm_is_not_constant(m):
    lo, hi = norm_range(build_Vm(m), 33)
    assert hi - lo > 0.1


def test_homotopy_endpoints():
    assert homotopy_Vtm(2, 0).F == build_Vm(2).F and homotopy_Vtm(2, 0).G == build_Vm(2).G
    assert homotopy_Vtm(5, 0).F == build_Vm(5).F
    end2 = homotopy_Vtm(2, 1)
    assert end2.F.is_zero() and not end2.G.is_zero()
    end3 = homotopy_Vtm(3, 1)
    assert end3.G.is_zero() and not end3.F.is_zero()
    with pytest.raises(ValueError):
        homotopy_Vtm(2, F(3, 2))


@pytest.mark.parametrize("m", range(2, 9))
def test_homotopy_never_vanishes(m):
    s = np.linspace(0, np.pi / 2, 201)
    worst = min(float(homotopy_Vtm(m, F(k, 63)).norm(s).min()) for k in range(64))
    assert worst > 0


def test_s1_invariant_constant_harmonic_is_scaled_hopf():
    V = s1_invariant_field(SphericalHarmonic(0, [1.5]), 0)
    S, P1, P2 = hopf_grid(6, margin=0.1)
    f, f1, f2 = V(S, P1, P2)
    assert np.allclose(f, 3.0) and np.allclose(f1, 0) and np.allclose(f2, 0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_s1_invariant_is_eigenfield(k, rng):
    fbar = s2_eigenfunction(k, rng.standard_normal(2 * k + 1))
    V = s1_invariant_field(fbar, k)
    S, P1, P2 = hopf_grid(8, margin=0.05)
    curl = np.array(curl_s3_numeric(V, S, P1, P2, 1e-3, richardson=True))
    vals = np.array(V(S, P1, P2))
    assert np.max(np.abs(curl - (2 + 2 * k) * vals)) < 1e-6


def test_s1_invariant_rejects_wrong_degree():
    with pytest.raises(ValueError):
        s1_invariant_field(s2_eigenfunction(2, np.ones(5)), 1)


def test_s1_invariant_generic_is_nonvanishing(rng):
    V = s1_invariant_field(s2_eigenfunction(1, [0.3, -0.8, 0.5]), 1)
    assert min_norm(V, 32)[0] > 0


def test_nonkkps2_is_eigenfield():
    V = builtin_example("nonkkps2")
    S, P1, P2 = hopf_grid(16, margin=0.01)
    curl = np.array(curl_s3_numeric(V, S, P1, P2, 1e-3, richardson=True))
    assert np.max(np.abs(curl - 4 * np.array(V(S, P1, P2)))) < 1e-6
    plain = np.array(curl_s3_numeric(V, S, P1, P2, 1e-3))
    assert np.max(np.abs(plain - 4 * np.array(V(S, P1, P2)))) < 1e-3


def test_builtin_names():
    for name in ("hopf", "antihopf", "v2", "v3", "nonkkps2"):
        assert builtin_example(name) is not None
    with pytest.raises(KeyError):
        builtin_example("nope")


def test_kl_field_factor():
    V = build_kl_field(2, 3)
    S, P1, P2 = hopf_grid(10, margin=0.02)
    curl = np.array(curl_s3_numeric(V, S, P1, P2, 1e-3, richardson=True))
    factor = V.factor(S, P1, P2)
    assert np.max(np.abs(curl - factor * np.array(V(S, P1, P2)))) < 1e-7
    with pytest.raises(ValueError):
        build_kl_field(0, 1)


def test_scaling_and_axisymmetric_equality():
    V = build_Vm(3).scaled(2)
    assert V.is_multiple_of(build_Vm(3), 2)
    assert AxisymmetricField(Polynomial([1]), Polynomial([0]), F(2), "x") == hopf_field().__class__(
        Polynomial([1]), Polynomial([0]), F(2), "x")


def test_sample_rows():
    rows = sample_field(build_Vm(2), 4)
    assert rows.shape == (64, 6)
    assert np.allclose(rows[0, :3], [0, 0, 0])
