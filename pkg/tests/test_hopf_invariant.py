import warnings

import numpy as np
import pytest

from beltrami_lab.hopf_invariant import (
    AxiProfile,
    HopfConsistencyError,
    UnderResolvedWarning,
    anti_hopf_profile,
    dufraine_linking_check,
    gauss_profile,
    hopf_class_formula,
    hopf_class_Vm,
    hopf_link_linking,
    hopf_profile,
    primitive,
    whitehead_hopf_invariant,
)
from beltrami_lab.sphere_fields import build_Vm, hopf_field


def test_reference_maps():
    assert abs(whitehead_hopf_invariant(anti_hopf_profile()).value + 1) < 1e-10
    assert abs(whitehead_hopf_invariant(hopf_profile()).value) < 1e-14


@pytest.mark.parametrize("m,expected", [(2, -1), (3, 0)])
def test_low_modes_by_quadrature(m, expected):
    r = whitehead_hopf_invariant(gauss_profile(build_Vm(m)), 2048)
    assert abs(r.value - expected) < 1e-4
    assert r.integer == expected and not r.under_resolved


@pytest.mark.parametrize("m", [m for m in range(-8, 9) if abs(m) >= 2])
def test_formula_agrees_with_quadrature(m):
    assert hopf_class_Vm(m) == hopf_class_formula(m)


def test_formula_pattern():
    assert [hopf_class_formula(m) for m in (2, 3, 4, 5)] == [-1, 0, -1, 0]
    assert [hopf_class_formula(m) for m in (-2, -3, -4)] == [0, -1, 0]
    with pytest.raises(ValueError):
        hopf_class_formula(1)


def test_V2_profile_closed_form():
    # F = -cos 2s, G = 1/3 gives a = -2c / sqrt(1 + 3c^2), b = sin 2s / sqrt(1 + 3c^2)
    s = np.linspace(0, np.pi / 2, 101)
    c = np.cos(2 * s)
    prof = gauss_profile(build_Vm(2))
    d = np.sqrt(1 + 3 * c**2)
    assert np.allclose(prof.a(s), -2 * c / d, atol=1e-14)
    assert np.allclose(prof.b(s), np.sin(2 * s) / d, atol=1e-14)
    h = 1e-6
    fd = (prof.a(s[1:-1] + h) - prof.a(s[1:-1] - h)) / (2 * h)
    assert np.allclose(prof.derivative(s[1:-1]), fd, atol=1e-7)


def test_primitive_boundary_values_and_derivative():
    prof = anti_hopf_profile()
    s = np.linspace(0, np.pi / 2, 41)
    c1, c2 = primitive(prof, s)
    assert abs(c1[-1]) < 1e-15 and abs(c2[0]) < 1e-15
    # w = 2 sin 2s, so c2 = 1 - cos 2s and c1 = -1 - cos 2s
    assert np.allclose(c2, 1 - np.cos(2 * s), atol=1e-13)
    assert np.allclose(c1, -1 - np.cos(2 * s), atol=1e-13)


def test_invariant_under_reparametrisation():
    prof = gauss_profile(build_Vm(4))
    sigma = lambda s: s + 0.2 * np.sin(4 * s) / 4  # noqa: E731
    dsigma = lambda s: 1 + 0.2 * np.cos(4 * s)  # noqa: E731
    a = whitehead_hopf_invariant(prof).value
    b = whitehead_hopf_invariant(prof.reparametrize(sigma, dsigma)).value
    assert abs(a - b) < 1e-8


def test_under_resolved_warning():
    wobbly = AxiProfile(lambda s: np.cos(40 * s), lambda s: np.sin(40 * s), lambda s: -40 * np.sin(40 * s))
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        r = whitehead_hopf_invariant(wobbly, n=4, n_inner=4)
    assert r.under_resolved == any(issubclass(w.category, UnderResolvedWarning) for w in rec)


def test_gauss_profile_rejects_vanishing_field():
    V = build_Vm(2)
    with pytest.raises(ValueError):
        gauss_profile(V.scaled(0))


def test_hopf_link():
    assert abs(abs(hopf_link_linking()) - 1) < 1e-6


@pytest.mark.parametrize("m", [2, 5])
def test_collinearity_circles_link_once(m):
    r = dufraine_linking_check(m)
    assert r.abs_link == 1
    assert abs(abs(r.linking) - 1) < 1e-6


def test_consistency_error_is_runtime_error():
    assert issubclass(HopfConsistencyError, RuntimeError)
