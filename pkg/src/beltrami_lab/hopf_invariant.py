"""Hopf invariants of axisymmetric Gauss maps S^3 -> S^2 through Whitehead's integral."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .manifold import ORIENTATION, embed, gauss_legendre
from .sphere_fields import AxisymmetricField, build_Vm, homotopy_Vtm

HALF_PI = np.pi / 2


class HopfConsistencyError(RuntimeError):
    pass


class UnderResolvedWarning(RuntimeWarning):
    pass


@dataclass
class AxiProfile:
    """Map ``(s, phi1, phi2) -> (a(s), b(s) sin psi, -b(s) cos psi)``, ``psi = phi1 + phi2``.

    ``da`` is optional; without it ``a'`` is taken by central differences.
    """

    a: Callable
    b: Callable
    da: Callable | None = None
    name: str = ""

    def check_unit(self, n: int = 1001) -> float:
        s = np.linspace(0.0, HALF_PI, n)
        return float(np.max(np.abs(self.a(s) ** 2 + self.b(s) ** 2 - 1)))

    def derivative(self, s):
        if self.da is not None:
            return self.da(s)
        h = 1e-5
        return (self.a(s + h) - self.a(s - h)) / (2 * h)

    def area_density(self, s):
        """``w`` with pullback area form ``w ds ^ (dphi1 + dphi2)``; equals ``a b b' - a' b^2 = -a'``."""
        return -self.derivative(s)

    def reparametrize(self, sigma: Callable, dsigma: Callable) -> "AxiProfile":
        """Compose with a diffeomorphism ``sigma`` of [0, pi/2]."""
        da = None
        if self.da is not None:
            da = lambda s: self.da(sigma(s)) * dsigma(s)  # noqa: E731
        return AxiProfile(lambda s: self.a(sigma(s)), lambda s: self.b(sigma(s)), da, f"{self.name}∘sigma")


def gauss_profile(V: AxisymmetricField, check: bool = True) -> AxiProfile:
    """Gauss map profile ``a = (F + cos2s G)/H``, ``b = sin2s G/H``, ``H = |V|``.

    ``a'`` is exact: with ``N = F + (2z - 1) G`` and ``H^2 = F^2 + 2(2z-1)FG + G^2``,
    ``da/ds = -sin2s (N_z H^2 - N (H^2)_z / 2) / H^3``.
    """

    def parts(s):
        s = np.asarray(s, dtype=float)
        z = np.cos(s) ** 2
        F, G, Fz, Gz = V.eval_with_derivative(z)
        x = 2 * z - 1
        N = F + x * G
        H2 = F * F + 2 * x * F * G + G * G
        if np.any(H2 <= 0):
            raise ValueError("the field vanishes; Gauss map undefined")
        Nz = Fz + 2 * G + x * Gz
        H2z = 2 * F * Fz + 4 * F * G + 2 * x * (Fz * G + F * Gz) + 2 * G * Gz
        return s, G, N, H2, Nz, H2z

    def a(s):
        _, _, N, H2, _, _ = parts(s)
        return N / np.sqrt(H2)

    def b(s):
        s, G, _, H2, _, _ = parts(s)
        return np.sin(2 * s) * G / np.sqrt(H2)

    def da(s):
        s, _, N, H2, Nz, H2z = parts(s)
        return -np.sin(2 * s) * (Nz * H2 - 0.5 * N * H2z) / H2**1.5

    prof = AxiProfile(a, b, da, f"gauss({V.name})")
    if check and prof.check_unit() > 1e-12:
        raise ValueError("profile is not unit length")
    return prof


def primitive(profile: AxiProfile, s, n_inner: int = 64):
    """Coefficients of ``A = c1 dphi1 + c2 dphi2`` with ``c1' = c2' = w``, ``c1(pi/2) = 0``, ``c2(0) = 0``."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    x, wq = gauss_legendre(n_inner)
    # Gauss-Legendre on [0, s] and [s, pi/2] for every s at once
    left = 0.5 * s[:, None] * (x + 1)
    c2 = 0.5 * s * np.sum(wq * profile.area_density(left), axis=1)
    right = s[:, None] + 0.5 * (HALF_PI - s[:, None]) * (x + 1)
    c1 = -0.5 * (HALF_PI - s) * np.sum(wq * profile.area_density(right), axis=1)
    return c1, c2


@dataclass
class WhiteheadResult:
    value: float
    integer: int
    distance: float
    resolution: int
    under_resolved: bool


def whitehead_hopf_invariant(profile: AxiProfile, n: int = 2048, n_inner: int = 64) -> WhiteheadResult:
    """``(1/16 pi^2) * integral over S^3 of A ^ dA`` by Gauss-Legendre quadrature in s.

    ``A ^ dA = (c2 - c1) w ds ^ dphi1 ^ dphi2``; the angular integrals give ``4 pi^2``
    and the coordinate 3-form integrates with the sign of the volume-form coefficient.
    """
    x, wq = gauss_legendre(n)
    s = 0.25 * np.pi * (x + 1)
    c1, c2 = primitive(profile, s, n_inner)
    integrand = (c2 - c1) * profile.area_density(s)
    coordinate_integral = 0.25 * np.pi * np.sum(wq * integrand) * 4 * np.pi**2
    value = float(np.sign(ORIENTATION) * coordinate_integral / (16 * np.pi**2))
    k = int(round(value))
    dist = abs(value - k)
    if dist > 0.01:
        import warnings

        warnings.warn(f"Whitehead integral {value} is {dist:.3g} from an integer", UnderResolvedWarning)
    return WhiteheadResult(value, k, dist, n, dist > 0.01)


def hopf_profile() -> AxiProfile:
    return AxiProfile(lambda s: np.ones_like(np.asarray(s, float)), lambda s: np.zeros_like(np.asarray(s, float)),
                      lambda s: np.zeros_like(np.asarray(s, float)), "hopf")


def anti_hopf_profile() -> AxiProfile:
    return AxiProfile(lambda s: np.cos(2 * np.asarray(s)), lambda s: np.sin(2 * np.asarray(s)),
                      lambda s: -2 * np.sin(2 * np.asarray(s)), "antihopf")


def hopf_class_formula(m: int) -> int:
    if abs(m) < 2:
        raise ValueError("|m| >= 2 required")
    sign = 1 if m > 0 else -1
    parity = 1 if m % 2 else -1  # (-1)^(m+1)
    return (sign * parity - 1) // 2


def hopf_class_Vm(m: int, n: int = 2048, cross_check: bool = True) -> int:
    """Hopf class of the Gauss map of ``V_m``, cross-checked by quadrature and homotopy endpoint."""
    value = hopf_class_formula(m)
    if not cross_check:
        return value
    quad = whitehead_hopf_invariant(gauss_profile(build_Vm(m)), n)
    if quad.integer != value or quad.under_resolved:
        raise HopfConsistencyError(f"m={m}: formula {value}, quadrature {quad.value}")
    if m > 0:
        end = homotopy_Vtm(m, 1)
        # R has class 0, R' (either sign) class -1
        endpoint = 0 if end.G.is_zero() else -1
        if endpoint != value:
            raise HopfConsistencyError(f"m={m}: formula {value}, homotopy endpoint {endpoint}")
    return value


# --- linking of the collinearity circles --------------------------------------------


def _stereographic(p, pole):
    pole = pole / np.linalg.norm(pole)
    # orthonormal basis of the complement of the pole
    basis = np.linalg.svd(pole[None, :])[2][1:]
    d = 1 - p @ pole
    return (p @ basis.T) / d[:, None]


def gauss_linking(curve1: np.ndarray, curve2: np.ndarray) -> float:
    """Gauss linking integral of two closed curves sampled uniformly in their parameter."""
    def spectral_derivative(c):
        n = len(c)
        k = np.fft.fftfreq(n, d=1.0 / n)
        return np.real(np.fft.ifft(1j * k[:, None] * np.fft.fft(c, axis=0), axis=0))

    d1, d2 = spectral_derivative(curve1), spectral_derivative(curve2)
    r = curve1[:, None, :] - curve2[None, :, :]
    cr = np.cross(d1[:, None, :], d2[None, :, :])
    integrand = np.sum(r * cr, axis=-1) / np.linalg.norm(r, axis=-1) ** 3
    h1, h2 = 2 * np.pi / len(curve1), 2 * np.pi / len(curve2)
    return float(integrand.sum() * h1 * h2 / (4 * np.pi))


def hopf_link_linking(n: int = 256, pole=(1 / np.sqrt(2), 0.0, 1 / np.sqrt(2), 0.0)) -> float:
    """Linking number of the circles ``{s = 0}`` and ``{s = pi/2}`` after stereographic projection."""
    t = np.arange(n) * 2 * np.pi / n
    c0 = embed(np.zeros_like(t), t, np.zeros_like(t))
    c1 = embed(np.full_like(t, HALF_PI), np.zeros_like(t), t)
    pole = np.asarray(pole, dtype=float)
    return gauss_linking(_stereographic(c0, pole), _stereographic(c1, pole))


@dataclass
class LinkingResult:
    m: int
    linking: float
    plus_s: list
    minus_s: list

    @property
    def abs_link(self) -> int:
        return abs(int(round(self.linking)))


def dufraine_linking_check(m: int, grid: int = 33, n: int = 256) -> LinkingResult:
    """Collinearity circles of ``(V_m, V_{m+1})`` and their linking number."""
    from .contact import collinearity_sets

    if m < 2:
        raise ValueError("m >= 2 required")
    sets = collinearity_sets(build_Vm(m), build_Vm(m + 1), grid=grid)
    plus_s = sorted(set(np.round(sets.plus[:, 0], 12)))
    minus_s = sorted(set(np.round(sets.minus[:, 0], 12)))
    if plus_s != [round(HALF_PI, 12)] or minus_s != [0.0]:
        raise ValueError(f"collinearity off the Hopf link: C+ at s={plus_s}, C- at s={minus_s}")
    return LinkingResult(m, hopf_link_linking(n), plus_s, minus_s)
