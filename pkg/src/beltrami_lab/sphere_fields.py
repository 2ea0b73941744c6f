"""Curl eigenfields on the round 3-sphere.

Fields are evaluated in the orthonormal frame ``{R, X1, X2}``; every field object is
callable as ``V(s, phi1, phi2) -> (f, f1, f2)``.  Axisymmetric fields
``F(z) R + G(z) R'`` with ``z = cos^2 s`` carry exact polynomial coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .manifold import HopfPoint, embed, frame_vectors, hopf_grid
from .nodal import SphericalHarmonic
from .orthopoly import TWO_Z_MINUS_1, Polynomial, eigenpair, jacobi11_poly, jacobi11_with_derivative


@dataclass(frozen=True)
class AxisymmetricField:
    """``V = F(cos^2 s) R + G(cos^2 s) R'``."""

    F: Polynomial
    G: Polynomial
    lam: Fraction | None = None
    name: str = ""
    # optional stable evaluator z -> (F, G, dF/dz, dG/dz); monomial Horner loses digits for large m
    stable: Callable | None = field(default=None, compare=False, repr=False)

    def _eval(self, z):
        if self.stable is not None:
            return self.stable(z)[:2]
        return self.F(z), self.G(z)

    def eval_with_derivative(self, z):
        """``(F, G, F_z, G_z)`` at ``z``."""
        if self.stable is not None:
            return self.stable(z)
        return self.F(z), self.G(z), self.F.deriv()(z), self.G.deriv()(z)

    def __call__(self, s, phi1, phi2):
        s = np.asarray(s, dtype=float)
        z = np.cos(s) ** 2
        F, G = self._eval(z)
        psi = np.asarray(phi1) + np.asarray(phi2)
        # R' = cos2s R + sin2s sin(psi) X1 - sin2s cos(psi) X2
        return F + np.cos(2 * s) * G, G * np.sin(2 * s) * np.sin(psi), -G * np.sin(2 * s) * np.cos(psi)

    def phi_components(self, s):
        """Coefficients of ``d/dphi1`` and ``d/dphi2``."""
        z = np.cos(np.asarray(s, dtype=float)) ** 2
        F, G = self._eval(z)
        return F + G, F - G

    def norm(self, s):
        s = np.asarray(s, dtype=float)
        z = np.cos(s) ** 2
        F, G = self._eval(z)
        return np.sqrt(np.maximum(F * F + 2 * np.cos(2 * s) * F * G + G * G, 0.0))

    def link_values(self) -> tuple[Fraction, Fraction]:
        """Exact ``V|_{s=0}`` as a multiple of ``d/dphi1`` and ``V|_{s=pi/2}`` as a multiple of ``d/dphi2``."""
        return self.F.exact(1) + self.G.exact(1), self.F.exact(0) - self.G.exact(0)

    def scaled(self, c) -> "AxisymmetricField":
        c = Fraction(c)
        ev = None
        if self.stable is not None:
            base = self.stable
            ev = lambda z: tuple(float(c) * v for v in base(z))  # noqa: E731
        return AxisymmetricField(self.F * c, self.G * c, self.lam, f"{c}*{self.name}", ev)

    def coframe_polys(self) -> tuple[Polynomial, Polynomial]:
        """Dual 1-form ``p(z) dphi1 + q(z) dphi2``."""
        one_minus_z = Polynomial.linear(1, -1)
        return (self.F + self.G) * Polynomial.linear(0, 1), (self.F - self.G) * one_minus_z

    def is_multiple_of(self, other: "AxisymmetricField", c) -> bool:
        c = Fraction(c)
        return self.F == other.F * c and self.G == other.G * c


class FrameField:
    """A vector field on S^3 given by a callable returning frame components."""

    def __init__(self, components: Callable, lam=None, name: str = "", factor: Callable | None = None):
        self._components = components
        self.lam = lam
        self.name = name
        self.factor = factor

    def __call__(self, s, phi1, phi2):
        return self._components(s, phi1, phi2)

    @classmethod
    def from_embedding(cls, fn: Callable, **kwargs) -> "FrameField":
        """Wrap ``fn(p) -> (f, f1, f2)`` defined on embedded points ``p`` of shape (..., 4)."""
        return cls(lambda s, a, b: fn(embed(s, a, b)), **kwargs)


def hopf_field() -> AxisymmetricField:
    return AxisymmetricField(Polynomial.constant(1), Polynomial.constant(0), Fraction(2), "hopf")


def anti_hopf_field() -> AxisymmetricField:
    return AxisymmetricField(Polynomial.constant(0), Polynomial.constant(1), Fraction(-2), "antihopf")


def build_Vm(m: int) -> AxisymmetricField:
    """The eigenfield with eigenvalue ``2m``; negative ``m`` swaps the roles of ``F`` and ``G``."""
    if abs(m) <= 1:
        raise ValueError("|m| >= 2 required; use hopf_field / anti_hopf_field for eigenvalue +-2")
    n = abs(m)
    pair = eigenpair(n)

    def stable(z):
        x = 1 - 2 * np.asarray(z, dtype=float)
        f, df = jacobi11_with_derivative(n - 1, x)
        g, dg = jacobi11_with_derivative(n - 2, x)
        F, G, dF, dG = f / n, g / (n + 1), -2 * df / n, -2 * dg / (n + 1)
        return (F, G, dF, dG) if m > 0 else (G, F, dG, dF)

    if m > 0:
        return AxisymmetricField(pair.F, pair.G, Fraction(2 * m), f"V{m}", stable)
    return AxisymmetricField(pair.G, pair.F, Fraction(2 * m), f"V'{n}", stable)


def curl_axisymmetric(V: AxisymmetricField) -> AxisymmetricField:
    """Exact curl, ``[(2z-1)F' + 2F + G'] R - [(2z-1)G' + 2G + F'] R'``."""
    dF, dG = V.F.deriv(), V.G.deriv()
    F = TWO_Z_MINUS_1 * dF + 2 * V.F + dG
    G = -(TWO_Z_MINUS_1 * dG + 2 * V.G + dF)
    return AxisymmetricField(F, G, None, f"curl {V.name}")


def homotopy_Vtm(m: int, t) -> AxisymmetricField:
    """Nonvanishing path from ``V_m`` (t = 0) to a multiple of ``R`` or ``R'`` (t = 1)."""
    if m < 2:
        raise ValueError("m >= 2 required")
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    # argument (t - 1) cos 2s = (t - 1)(2z - 1)
    arg = TWO_Z_MINUS_1 * (t - 1)
    a = jacobi11_poly(m - 1).exact(1 - t) / m**2
    b = jacobi11_poly(m).exact(1 - t) / (m + 1) ** 2
    F = jacobi11_poly(m - 1).compose(arg) * a
    G = jacobi11_poly(m - 2).compose(arg) * b
    fa, fb, tm1 = float(a), float(b), float(t - 1)

    def stable(z):
        x = tm1 * (2 * np.asarray(z, dtype=float) - 1)
        f, df = jacobi11_with_derivative(m - 1, x)
        g, dg = jacobi11_with_derivative(m - 2, x)
        return fa * f, fb * g, 2 * tm1 * fa * df, 2 * tm1 * fb * dg

    return AxisymmetricField(F, G, None, f"V{m}^t(t={float(t):g})", stable)


def min_norm(V, n: int = 64, refine: bool = True) -> tuple[float, HopfPoint]:
    """Minimum of ``|V|`` on a closed Hopf grid (the Hopf link is included).

    Axisymmetric fields are scanned in s only and refined by a bounded 1-D search.
    """
    if n < 32:
        raise ValueError("grid resolution must be at least 32")
    if isinstance(V, AxisymmetricField):
        s = np.linspace(0.0, np.pi / 2, 4 * n + 1)
        norms = V.norm(s)
        i = int(np.argmin(norms))
        best_s, best = float(s[i]), float(norms[i])
        if refine and 0 < i < len(s) - 1:
            res = minimize_scalar(lambda x: float(V.norm(x)), bounds=(s[i - 1], s[i + 1]), method="bounded",
                                  options={"xatol": 1e-12})
            if res.fun < best:
                best_s, best = float(res.x), float(res.fun)
        return best, HopfPoint(best_s, 0.0, 0.0)
    S, P1, P2 = hopf_grid(n, closed=True)
    f, f1, f2 = V(S, P1, P2)
    norms = np.sqrt(f**2 + f1**2 + f2**2)
    idx = np.unravel_index(np.argmin(norms), norms.shape)
    return float(norms[idx]), HopfPoint(float(S[idx]), float(P1[idx]), float(P2[idx]))


def norm_range(V, n: int = 64) -> tuple[float, float]:
    S, P1, P2 = hopf_grid(n, closed=True)
    f, f1, f2 = V(S, P1, P2)
    norms = np.sqrt(f**2 + f1**2 + f2**2)
    return float(norms.min()), float(norms.max())


# --- S^1-invariant fields from S^2 eigenfunctions ---------------------------------


def hopf_map(p) -> np.ndarray:
    """Hopf map onto the unit sphere (twice the projection onto the radius-1/2 sphere)."""
    p = np.asarray(p, dtype=float)
    x1, y1, x2, y2 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    return np.stack([2 * (x1 * x2 + y1 * y2), 2 * (y1 * x2 - x1 * y2), x1**2 + y1**2 - x2**2 - y2**2], axis=-1)


def _hopf_map_jacobian(p) -> np.ndarray:
    x1, y1, x2, y2 = (p[..., i] for i in range(4))
    rows = [
        [2 * x2, 2 * y2, 2 * x1, 2 * y1],
        [-2 * y2, 2 * x2, 2 * y1, -2 * x1],
        [2 * x1, 2 * y1, -2 * x2, -2 * y2],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


def s1_invariant_field(fbar: SphericalHarmonic, k: int) -> FrameField:
    """``lam f R + X2(f) X1 - X1(f) X2`` with ``f = fbar o Hopf map`` and ``lam = 2 + 2k``.

    ``fbar`` must be a degree-k spherical harmonic, i.e. an eigenfunction with
    eigenvalue ``4k(k+1)`` on the sphere of radius 1/2.
    """
    if fbar.k != k:
        raise ValueError(
            f"eigenvalue {4 * fbar.k * (fbar.k + 1)} on the radius-1/2 sphere is not 4k(k+1) for k={k}"
        )
    lam = 2 + 2 * k

    def components(p):
        q = hopf_map(p)
        grad = np.einsum("...ij,...i->...j", _hopf_map_jacobian(p), fbar.ambient_gradient(q))
        _, X1, X2 = frame_vectors(p)
        dX1 = np.sum(grad * X1, axis=-1)
        dX2 = np.sum(grad * X2, axis=-1)
        return lam * fbar(q), dX2, -dX1

    field = FrameField.from_embedding(components, lam=lam, name=f"s1inv(k={k})")
    field.fbar = fbar
    return field


# --- closed-form examples -------------------------------------------------------


def _nonkkps2(p):
    x1, y1, x2, y2 = (p[..., i] for i in range(4))
    f = 0.5 * (x1**2 + 4 * x1 * x2 - x2**2 + 2 * (y1**2 - y2**2))
    return f, -(x2 * y1 + x1 * y2), -(x1**2 - x2**2 + y1 * y2)


def build_kl_field(k: int, l: int) -> FrameField:
    """Beltrami field ``(l d/dphi1 + k d/dphi2)/(k^2 sin^2 s + l^2 cos^2 s)`` with nonconstant factor."""
    if k * l == 0:
        raise ValueError("k and l must be nonzero")

    def denom(s):
        return k**2 * np.sin(s) ** 2 + l**2 * np.cos(s) ** 2

    def components(s, phi1, phi2):
        s = np.asarray(s, dtype=float)
        d = denom(s)
        psi = np.asarray(phi1) + np.asarray(phi2)
        sc = np.sin(s) * np.cos(s) * (l - k) / d
        return (l * np.cos(s) ** 2 + k * np.sin(s) ** 2) / d, sc * np.sin(psi), -sc * np.cos(psi)

    return FrameField(components, lam=None, name=f"kl({k},{l})", factor=lambda s, a, b: 2 * k * l / denom(s))


def builtin_example(name: str):
    name = name.lower()
    table = {
        "hopf": hopf_field,
        "antihopf": anti_hopf_field,
        "v2": lambda: build_Vm(2),
        "v3": lambda: build_Vm(3),
        "nonkkps2": lambda: FrameField.from_embedding(_nonkkps2, lam=4, name="nonkkps2"),
    }
    if name not in table:
        raise KeyError(f"unknown example {name!r}; choose from {sorted(table)}")
    return table[name]()


def sample_field(V, n: int) -> np.ndarray:
    """Rows ``(s, phi1, phi2, f, f1, f2)`` on a closed ``n^3`` Hopf grid."""
    S, P1, P2 = hopf_grid(n, closed=True)
    comps = np.broadcast_arrays(*V(S, P1, P2))
    return np.column_stack([a.ravel() for a in (S, P1, P2, *comps)])
