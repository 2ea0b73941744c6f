import numpy as np
import pytest

from beltrami_lab.openbook import (
    angle_difference,
    binding_positivity,
    closed_form_dtheta,
    dalpha_on_page_fd,
    dalpha_on_page_minus,
    dtheta_dt_fd,
    dtheta_dt_tilde,
    get_book,
    openbook_margins,
    page_area_positivity,
    pi_minus,
    pi_tilde,
    supported_field,
    theta_consistency,
    theta_tilde,
)
from beltrami_lab.sphere_fields import build_Vm


def test_supported_fields():
    assert supported_field("pi_minus").is_multiple_of(build_Vm(2), -1.5)
    assert supported_field("pi_tilde").is_multiple_of(build_Vm(3), 2)
    with pytest.raises(KeyError):
        get_book("pi_plus")


def test_pi_minus_page_area_form():
    r = page_area_positivity("pi_minus", grid=64)
    assert r.max_deviation < 1e-10
    assert r.margin > 0
    assert np.allclose(r.values, 2 * np.sin(2 * r.s), atol=1e-12)


def test_pi_minus_page_fd_agrees():
    V = supported_field("pi_minus")
    rng = np.random.default_rng(3)
    s = rng.uniform(0.1, 1.4, 40)
    p1, p2 = rng.uniform(0, 2 * np.pi, (2, 40))
    assert np.allclose(dalpha_on_page_fd(V, s, p1, p2), dalpha_on_page_minus(V, s), atol=1e-7)


def test_pi_tilde_matches_closed_form():
    r = page_area_positivity("pi_tilde", grid=48)
    assert r.max_deviation < 1e-10
    assert r.margin > 0


def test_pi_tilde_closed_form_for_V3():
    s = np.linspace(0.05, 1.5, 23)
    s = s[np.abs(s - np.pi / 4) > 1e-3]
    t = np.linspace(0, 7, 19)
    S, T = np.meshgrid(s, t, indexing="ij")
    assert np.allclose(dtheta_dt_tilde(build_Vm(3), S, T), closed_form_dtheta(S, T), atol=1e-11)
    assert np.allclose(dtheta_dt_fd(build_Vm(3), S, T), closed_form_dtheta(S, T), atol=1e-8)


def test_page_rate_scales_linearly():
    s = np.array([0.3, 1.2])
    t = np.array([0.7, 2.0])
    V3 = build_Vm(3)
    # doubling the field doubles the rate and halves the time needed
    assert np.allclose(dtheta_dt_tilde(V3.scaled(2), s, t), 2 * dtheta_dt_tilde(V3, s, 2 * t))
    a = dalpha_on_page_minus(build_Vm(2).scaled(3), s)
    assert np.allclose(a, 3 * dalpha_on_page_minus(build_Vm(2), s))


def test_bindings_positive_and_tangent():
    for name, expected in (("pi_minus", [1.0, 1.0]), ("pi_tilde", [1.0, 0.5, 1.0])):
        margins = binding_positivity(name)
        assert [m.pairing_min for m in margins] == pytest.approx(expected, abs=1e-12)
        assert all(m.positive for m in margins)
        assert max(m.tangency_residual for m in margins) < 1e-12


def test_bindings_are_where_theta_is_undefined():
    for book in (pi_minus(), pi_tilde()):
        t = np.linspace(0, 2 * np.pi, 9)
        for b in book.bindings:
            p = b.points(t)
            assert np.allclose(np.sum(p * p, -1), 1)
            if b.s == pytest.approx(np.pi / 4):
                assert np.allclose(p[:, :2], p[:, 2:])


def test_theta_real_and_complex_agree():
    assert theta_consistency(pi_minus()) < 1e-12
    assert theta_consistency(pi_tilde()) < 1e-12


def test_theta_tilde_value():
    s, p1, p2 = 0.4, 0.3, 1.1
    z1, z2 = np.cos(s) * np.exp(1j * p1), np.sin(s) * np.exp(1j * p2)
    ref = np.angle(z1 * z2 * np.conj(z1 - z2) ** 2)
    assert abs(angle_difference(theta_tilde(s, p1, p2), ref)) < 1e-13


def test_margins_dict_keys():
    m = openbook_margins("pi_tilde", grid=24)
    assert set(m) == {f"openbook_pi_tilde_{k}" for k in ("page", "page_deviation", "binding", "tangency")}
    assert m["openbook_pi_tilde_binding"] == pytest.approx(0.5)
