import json
import math

import numpy as np
import pytest

from beltrami_lab.contact import (
    S3,
    T3,
    ContactReport,
    OneForm,
    Verdict,
    check_linear_homotopy,
    characteristic_polynomial,
    characteristic_surface_s3,
    collinearity_sets,
    compute_c0,
    contact_volume,
    giroux_classify,
    sample_points,
    verify_named_homotopy,
)
from beltrami_lab.orthopoly import sturm_count
from beltrami_lab.sphere_fields import anti_hopf_field, build_Vm, builtin_example, hopf_field, min_norm
from beltrami_lab.torus_fields import WaveSpec, build_Vk, collinear_pair, eta_m


def test_contact_volume_of_hopf_field():
    pts = sample_points(S3, 12)
    assert np.allclose(contact_volume(hopf_field(), pts), 2)
    assert np.allclose(contact_volume(anti_hopf_field(), pts), -2)


def test_contact_volume_is_lambda_norm_squared():
    V = build_Vm(2)
    pts = sample_points(S3, 16, closed=False)
    norm2 = np.sum(OneForm(V)(pts) ** 2, -1)
    assert np.allclose(contact_volume(V, pts), float(V.lam) * norm2, atol=1e-13)
    inner = pts[1:-1]
    fd = contact_volume(V, inner, method="fd")
    assert np.max(np.abs(fd - float(V.lam) * norm2[1:-1])) < 1e-8


def test_contact_volume_torus():
    V = build_Vk(WaveSpec((1, 2, 0), (2, -1, 1)))
    x = sample_points(T3, 8)
    lam = math.sqrt(5)
    assert np.allclose(contact_volume(V, x), lam * 6)
    assert np.allclose(contact_volume(V, x, method="fd"), lam * 6, atol=1e-8)
    with pytest.raises(ValueError):
        contact_volume(V, x, method="spectral")


def test_characteristic_surface_of_V2():
    roots = characteristic_surface_s3(build_Vm(2))
    assert len(roots) == 1 and abs(roots[0] - np.pi / 4) < 1e-10
    assert len(characteristic_surface_s3(build_Vm(3))) == 2
    assert characteristic_surface_s3(hopf_field()) == []


@pytest.mark.parametrize("m", [m for m in range(-20, 21) if abs(m) >= 2])
def test_Vm_overtwisted(m):
    V = build_Vm(m)
    c = giroux_classify(V)
    assert c.verdict is Verdict.OVERTWISTED
    p = characteristic_polynomial(V)
    assert c.certificate["sturm_count"] == len(c.certificate["roots_s"])
    assert sturm_count(p, 0, 1) >= len(c.certificate["roots_s"])


def test_hopf_fields_tight():
    assert giroux_classify(hopf_field()).verdict is Verdict.TIGHT
    assert giroux_classify(anti_hopf_field()).verdict is Verdict.TIGHT


def test_non_axisymmetric_field_rejected():
    with pytest.raises(ValueError):
        giroux_classify(builtin_example("nonkkps2"))


def test_torus_plane_waves_tight():
    c = giroux_classify(eta_m(5))
    assert c.verdict is Verdict.TIGHT
    neg = giroux_classify(eta_m(-3))
    assert neg.verdict is Verdict.TIGHT
    assert neg.certificate["orientation"] == "negative"


def test_collinearity_of_consecutive_Vm():
    sets = collinearity_sets(build_Vm(2), build_Vm(3), grid=32)
    assert len(sets.plus) and len(sets.minus)
    assert np.allclose(sets.plus[:, 0], np.pi / 2)
    assert np.allclose(sets.minus[:, 0], 0)


def test_hopf_pair_collinear_on_links():
    sets = collinearity_sets(hopf_field(), anti_hopf_field(), grid=16)
    assert set(np.round(sets.plus[:, 0], 12)) == {0.0}
    assert set(np.round(sets.minus[:, 0], 12)) == {round(np.pi / 2, 12)}


def test_torus_pair_collinear():
    V, W = collinear_pair(1)
    sets = collinearity_sets(V, W, grid=16)
    assert not sets.empty


def test_c0_values():
    c, info = compute_c0(build_Vm(2), build_Vm(3))
    assert c == pytest.approx(4 / 3, abs=1e-9)
    c, _ = compute_c0(hopf_field(), anti_hopf_field(), grid=16)
    assert c == pytest.approx(1.0, abs=1e-12)
    c, _ = compute_c0(*collinear_pair(2), grid=16)
    assert c == pytest.approx(1.0, abs=1e-9)


def test_c0_never_aligned():
    V = eta_m(1)
    W = build_Vk(WaveSpec((0, 0, 1), (1, 0, 0)))  # eta rotated by a quarter turn
    c, info = compute_c0(V, W, grid=12)
    assert math.isinf(c) and info["flag"] == "never aligned"


def test_homotopy_V2_to_nonkkps2_positive():
    cert = check_linear_homotopy(build_Vm(2), builtin_example("nonkkps2"), lam=4, grid=24, t_samples=32)
    assert cert.margin > 0


def test_homotopy_torus_shifted_path():
    V, W = collinear_pair(1)
    cert = check_linear_homotopy(V, W, grid=16, t_samples=32, c=0.5)
    # |V + c t W|^2 >= (1 - c)^2 on unit fields
    assert cert.margin >= 0.25 - 1e-12


def test_homotopy_with_itself_is_min_norm():
    V = build_Vm(2)
    cert = check_linear_homotopy(V, V, grid=33, t_samples=9)
    mn, _ = min_norm(V, 33, refine=False)
    assert cert.margin == pytest.approx(float(V.lam) * mn**2, rel=1e-12)


def test_homotopy_symmetric_under_swap():
    V, W = build_Vm(2), builtin_example("nonkkps2")
    a = check_linear_homotopy(V, W, lam=4, grid=16, t_samples=17)
    b = check_linear_homotopy(W, V, lam=4, grid=16, t_samples=17)
    assert a.margin == pytest.approx(b.margin, rel=1e-12)


def test_homotopy_rejects_different_eigenvalues():
    with pytest.raises(ValueError):
        check_linear_homotopy(build_Vm(2), build_Vm(3))


def test_named_sqrt2_homotopy():
    out = verify_named_homotopy("t3_sqrt2_class", grid=16)
    assert out["max_deviation"] < 1e-12
    assert out["endpoint_residual_t1"] < 1e-12 and out["endpoint_residual_t0"] < 1e-12
    assert out["min_by_t"][-1] == pytest.approx(math.sqrt(2))
    assert out["margin"] == pytest.approx(1.0)
    assert out["fd_deviation"] < 1e-6  # plain central differences, h = 1e-3


def test_named_ex_final():
    out = verify_named_homotopy("ex_final", grid=16)
    assert out["max_deviation"] < 1e-12 and out["endpoint_residual_t0"] < 1e-12
    assert out["margin"] == pytest.approx(1.0, abs=0.02)
    assert out["fd_deviation"] < 1e-5


@pytest.mark.parametrize("kl", [(1, 1), (2, 3), (-1, 2)])
def test_named_kl_family(kl):
    out = verify_named_homotopy(f"s3_kl_family({kl[0]},{kl[1]})", grid=16, t_samples=5)
    assert out["max_deviation"] < 1e-10
    assert out["fd_deviation"] < 1e-6
    if kl == (1, 1):
        assert out["margin"] == pytest.approx(2.0)


def test_named_unknown():
    with pytest.raises(ValueError):
        verify_named_homotopy("no_such_path")


def test_report_json_roundtrip():
    r = ContactReport("V_2", 3.0, 1e-12, 1 / 3, [np.pi / 4], Verdict.OVERTWISTED, -1,
                      {"c0": math.inf, "x": np.float64(0.1 + 0.2)})
    text = r.to_json()
    d = json.loads(text)
    assert d["margins"]["c0"] == "inf"
    assert d["margins"]["x"] == 0.3
    assert ContactReport.from_dict(d).to_json() == text
