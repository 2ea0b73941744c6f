import numpy as np
import pytest

from beltrami_lab.nodal import (
    T2Eigenfunction,
    T2Mode,
    extract_nodal_set,
    lattice_points,
    regularity_margin,
    s2_eigenfunction,
    s2_nodal_regularity,
    search_contractible,
    symmetry_orbits,
)


def sin_x1():
    return T2Eigenfunction(1, (T2Mode((1, 0), 0.0, 1.0),))


def test_lattice_counts():
    assert len(lattice_points(25)) == 12 and symmetry_orbits(25) == 2
    assert len(lattice_points(1)) == 4 and symmetry_orbits(1) == 1
    assert lattice_points(3) == []


def test_eigenfunction_validation():
    with pytest.raises(ValueError):
        T2Eigenfunction(2, (T2Mode((1, 0), 1.0, 0.0),))
    with pytest.raises(ValueError):
        T2Eigenfunction(0, ())


def test_eigenfunction_derivatives(rng):
    f = T2Eigenfunction.from_coefficients(25, rng.standard_normal((6, 2)))
    x1, x2 = rng.uniform(0, 2 * np.pi, (2, 50))
    h11, _, h22 = f.hessian(x1, x2)
    assert np.allclose(h11 + h22, -25 * f(x1, x2))
    h = 1e-6
    g1, g2 = f.gradient(x1, x2)
    assert np.allclose(g1, (f(x1 + h, x2) - f(x1 - h, x2)) / (2 * h), atol=1e-6)
    assert np.allclose(g2, (f(x1, x2 + h) - f(x1, x2 - h)) / (2 * h), atol=1e-6)
    assert T2Eigenfunction.from_dict(f.to_dict()) == f


def test_two_parallel_circles():
    curves = extract_nodal_set(sin_x1(), 256)
    assert len(curves.components) == 2
    assert all(abs(c.homology[0]) == 0 and abs(c.homology[1]) == 1 for c in curves.components)
    assert curves.margin == pytest.approx(1.0, abs=1e-12)
    assert not curves.irregular_suspected and not curves.has_disk_component()
    assert regularity_margin(sin_x1(), curves) == pytest.approx(curves.margin)
    for c in curves.components:
        assert np.allclose(np.sin(c.points[:, 0]), 0, atol=1e-12)


def test_cos_plus_cos_is_flagged_irregular():
    f = T2Eigenfunction(1, (T2Mode((1, 0), 1.0, 0.0), T2Mode((0, 1), 1.0, 0.0)))
    curves = extract_nodal_set(f, 256)
    assert curves.irregular_suspected and curves.margin < 1e-6


def test_product_of_sines_is_flagged_irregular():
    f = T2Eigenfunction(2, (T2Mode((1, 1), -0.5, 0.0), T2Mode((1, -1), 0.5, 0.0)))
    x = np.linspace(0, 2 * np.pi, 7)
    assert np.allclose(f(x, x[::-1]), np.sin(x) * np.sin(x[::-1]))
    assert extract_nodal_set(f, 256).irregular_suspected


def test_search_finds_contractible_component():
    r = search_contractible(25, trials=50, seed=7)
    assert r.success
    c = r.curves
    assert len(c.components) >= 2 and c.has_disk_component() and c.margin > 1e-3
    # vertices are zeros up to linear-interpolation error h^2 max|D^2 f| / 8
    f = r.eigenfunction
    amp = sum(np.hypot(m.cos, m.sin) for m in f.modes)
    bound = (2 * np.pi / c.grid) ** 2 * 25 * amp / 8
    for comp in c.components:
        assert np.max(np.abs(f(comp.points[:, 0], comp.points[:, 1]))) < bound


def test_search_rejects_single_orbit():
    with pytest.raises(ValueError):
        search_contractible(1)


def test_homology_stable_under_refinement():
    f = search_contractible(25, trials=50, seed=7).eigenfunction
    classes = [sorted(tuple(abs(v) for v in c.homology) for c in extract_nodal_set(f, n).components)
               for n in (128, 256, 512)]
    assert classes[0] == classes[1] == classes[2]


def test_sphere_equator_regular():
    fbar = s2_eigenfunction(1, [1.0, 0.0, 0.0])  # height function
    assert s2_nodal_regularity(fbar) == pytest.approx(1.0, abs=1e-3)
    p = np.array([[0.6, 0.0, 0.8]])
    assert np.allclose(fbar.ambient_laplacian(p), 0)
    with pytest.raises(ValueError):
        s2_eigenfunction(0, [1.0])
