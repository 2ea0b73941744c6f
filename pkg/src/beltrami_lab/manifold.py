"""Coordinates, frames, differential operators and quadrature on round S^3 and flat T^3.

Points of S^3 are given in Hopf coordinates ``(s, phi1, phi2)`` with the embedding
``(x1, y1, x2, y2) = (cos s e^{i phi1}, sin s e^{i phi2})``.  The orthonormal frame
``{R, X1, X2}`` is declared positive, which fixes the volume form
``ORIENTATION * sin s cos s ds ^ dphi1 ^ dphi2`` with ``ORIENTATION = -1``.
Every sign downstream (curl, Whitehead integral) is derived from that constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

TWO_PI = 2.0 * np.pi

# sign of the ds^dphi1^dphi2 coefficient of vol_g when {R, X1, X2} is positive
ORIENTATION = -1.0

DEFAULT_STEP = 1e-3


class DegenerateCoordinateError(ValueError):
    """Raised when a finite-difference stencil would touch the Hopf link."""


@dataclass(frozen=True)
class HopfPoint:
    s: float
    phi1: float
    phi2: float

    def __post_init__(self):
        if not (0.0 <= self.s <= np.pi / 2):
            raise ValueError(f"s must lie in [0, pi/2], got {self.s}")
        object.__setattr__(self, "phi1", float(np.mod(self.phi1, TWO_PI)))
        object.__setattr__(self, "phi2", float(np.mod(self.phi2, TWO_PI)))

    def embedding(self) -> np.ndarray:
        return embed(self.s, self.phi1, self.phi2)


@dataclass(frozen=True)
class TorusPoint:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        for name in ("x1", "x2", "x3"):
            object.__setattr__(self, name, float(np.mod(getattr(self, name), TWO_PI)))

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])


@dataclass(frozen=True)
class FrameVector:
    """Components of a tangent vector along ``R``, ``X1``, ``X2``."""

    f: float
    f1: float
    f2: float

    def norm(self) -> float:
        return float(np.sqrt(self.f**2 + self.f1**2 + self.f2**2))

    def as_array(self) -> np.ndarray:
        return np.array([self.f, self.f1, self.f2])


def embed(s, phi1, phi2) -> np.ndarray:
    """Embedding in R^4, stacked on the last axis."""
    s, phi1, phi2 = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (s, phi1, phi2)))
    c, sn = np.cos(s), np.sin(s)
    return np.stack([c * np.cos(phi1), c * np.sin(phi1), sn * np.cos(phi2), sn * np.sin(phi2)], axis=-1)


def hopf_coordinates(p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of :func:`embed` for points of the unit sphere in R^4."""
    p = np.asarray(p, dtype=float)
    x1, y1, x2, y2 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    s = np.arctan2(np.hypot(x2, y2), np.hypot(x1, y1))
    return s, np.mod(np.arctan2(y1, x1), TWO_PI), np.mod(np.arctan2(y2, x2), TWO_PI)


def frame_vectors(p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The frame ``R, X1, X2`` as ambient 4-vectors at embedded points ``p``."""
    p = np.asarray(p, dtype=float)
    x1, y1, x2, y2 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    R = np.stack([-y1, x1, -y2, x2], axis=-1)
    X1 = np.stack([-x2, y2, x1, -y1], axis=-1)
    X2 = np.stack([-y2, -x2, y1, x1], axis=-1)
    return R, X1, X2


def frame_at(p: HopfPoint) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return frame_vectors(p.embedding())


def coordinate_vectors(s, phi1, phi2) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ambient 4-vectors of ``d/ds``, ``d/dphi1``, ``d/dphi2``."""
    s, phi1, phi2 = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (s, phi1, phi2)))
    c, sn = np.cos(s), np.sin(s)
    zero = np.zeros_like(s)
    ds = np.stack([-sn * np.cos(phi1), -sn * np.sin(phi1), c * np.cos(phi2), c * np.sin(phi2)], axis=-1)
    d1 = np.stack([-c * np.sin(phi1), c * np.cos(phi1), zero, zero], axis=-1)
    d2 = np.stack([zero, zero, -sn * np.sin(phi2), sn * np.cos(phi2)], axis=-1)
    return ds, d1, d2


def frame_to_coordinate(f, f1, f2, s, phi1, phi2):
    """Convert frame components into contravariant Hopf-coordinate components.

    Singular on the Hopf link; callers stay away from it.
    """
    psi = phi1 + phi2
    t, ct = np.tan(s), 1.0 / np.tan(s)
    vs = f1 * np.cos(psi) + f2 * np.sin(psi)
    v1 = f + t * (f1 * np.sin(psi) - f2 * np.cos(psi))
    v2 = f - ct * (f1 * np.sin(psi) - f2 * np.cos(psi))
    return vs, v1, v2


def coordinate_to_frame(vs, v1, v2, s, phi1, phi2):
    psi = phi1 + phi2
    c2, s2 = np.cos(s) ** 2, np.sin(s) ** 2
    sc = np.sin(s) * np.cos(s)
    f = c2 * v1 + s2 * v2
    f1 = vs * np.cos(psi) + sc * np.sin(psi) * (v1 - v2)
    f2 = vs * np.sin(psi) - sc * np.cos(psi) * (v1 - v2)
    return f, f1, f2


def volume_density(s) -> np.ndarray:
    """Coefficient of ``ds ^ dphi1 ^ dphi2`` in the oriented volume form."""
    return ORIENTATION * np.sin(s) * np.cos(s)


def _check_chart(s, h):
    s = np.asarray(s, dtype=float)
    if h <= 0:
        raise ValueError("step h must be positive")
    if np.any(s < h) or np.any(s > np.pi / 2 - h):
        raise DegenerateCoordinateError(
            f"finite differences need s in [{h}, pi/2 - {h}]; the Hopf coordinate chart is singular there"
        )


# Scalar fields on S^3 are callables g(s, phi1, phi2) -> array.
# Vector fields are callables returning frame components (f, f1, f2).
FrameCallable = Callable[..., tuple]


def _curl_once(components: FrameCallable, s, phi1, phi2, h):
    def covariant(ss, a, b):
        f, f1, f2 = components(ss, a, b)
        vs, v1, v2 = frame_to_coordinate(f, f1, f2, ss, a, b)
        return vs, np.cos(ss) ** 2 * v1, np.sin(ss) ** 2 * v2

    def diff(axis):
        shift = [np.zeros_like(s), np.zeros_like(s), np.zeros_like(s)]
        shift[axis] = h
        plus = covariant(s + shift[0], phi1 + shift[1], phi2 + shift[2])
        minus = covariant(s - shift[0], phi1 - shift[1], phi2 - shift[2])
        return [(p - m) / (2 * h) for p, m in zip(plus, minus)]

    (ds_as, ds_a1, ds_a2) = diff(0)
    (d1_as, _, d1_a2) = diff(1)
    (d2_as, d2_a1, _) = diff(2)
    omega = volume_density(s)
    # i_W vol = d(alpha) solved componentwise
    ws = (d1_a2 - d2_a1) / omega
    w1 = -(ds_a2 - d2_as) / omega
    w2 = (ds_a1 - d1_as) / omega
    return coordinate_to_frame(ws, w1, w2, s, phi1, phi2)


def curl_s3_numeric(components: FrameCallable, s, phi1, phi2, h: float = DEFAULT_STEP, richardson: bool = False):
    """Central-difference curl of a frame-component field, returned in frame components.

    The curl is the field ``W`` with ``i_W vol_g = d(alpha)``, ``alpha`` the metric dual.
    Second order in ``h``; ``richardson=True`` combines steps ``h`` and ``h/2``
    for fourth order.
    """
    s, phi1, phi2 = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (s, phi1, phi2)))
    _check_chart(s, h)
    coarse = np.array(_curl_once(components, s, phi1, phi2, h))
    if not richardson:
        return tuple(coarse)
    fine = np.array(_curl_once(components, s, phi1, phi2, h / 2))
    return tuple((4 * fine - coarse) / 3)


def _laplace_once(g, s, phi1, phi2, h):
    g0 = g(s, phi1, phi2)
    gsp, gsm = g(s + h, phi1, phi2), g(s - h, phi1, phi2)
    g1p, g1m = g(s, phi1 + h, phi2), g(s, phi1 - h, phi2)
    g2p, g2m = g(s, phi1, phi2 + h), g(s, phi1, phi2 - h)
    d_s = (gsp - gsm) / (2 * h)
    d_ss = (gsp - 2 * g0 + gsm) / h**2
    d_11 = (g1p - 2 * g0 + g1m) / h**2
    d_22 = (g2p - 2 * g0 + g2m) / h**2
    # (1/sqrt g) d_s(sqrt g d_s) with sqrt g = sin s cos s
    cot2 = np.cos(2 * s) / (np.sin(s) * np.cos(s))
    return d_ss + cot2 * d_s + d_11 / np.cos(s) ** 2 + d_22 / np.sin(s) ** 2


def laplace_beltrami_s3(g: Callable, s, phi1, phi2, h: float = DEFAULT_STEP, richardson: bool = False):
    """Finite-difference Laplace-Beltrami operator (``div grad``) in Hopf coordinates."""
    s, phi1, phi2 = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (s, phi1, phi2)))
    _check_chart(s, h)
    coarse = _laplace_once(g, s, phi1, phi2, h)
    if not richardson:
        return coarse
    fine = _laplace_once(g, s, phi1, phi2, h / 2)
    return (4 * fine - coarse) / 3


def curl_r3_numeric(field: Callable, x, h: float = DEFAULT_STEP) -> np.ndarray:
    """Central-difference Euclidean curl of ``field(x) -> (..., 3)`` at points ``x`` of shape (..., 3)."""
    x = np.asarray(x, dtype=float)
    jac = np.empty(x.shape + (3,))
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        jac[..., :, j] = (np.asarray(field(x + e)) - np.asarray(field(x - e))) / (2 * h)
    return np.stack(
        [jac[..., 2, 1] - jac[..., 1, 2], jac[..., 0, 2] - jac[..., 2, 0], jac[..., 1, 0] - jac[..., 0, 1]],
        axis=-1,
    )


def hopf_grid(n_s: int, n_phi: int | None = None, closed: bool = False, margin: float = 0.0):
    """Product grid in Hopf coordinates, broadcastable arrays of shape (n_s, n_phi, n_phi).

    ``closed=True`` includes the Hopf link (s = 0 and pi/2); otherwise the
    s-nodes are cell centres of [margin, pi/2 - margin].
    """
    n_phi = n_s if n_phi is None else n_phi
    if closed:
        s = np.linspace(0.0, np.pi / 2, n_s)
    else:
        edges = np.linspace(margin, np.pi / 2 - margin, n_s + 1)
        s = 0.5 * (edges[1:] + edges[:-1])
    phi = np.arange(n_phi) * TWO_PI / n_phi
    return np.meshgrid(s, phi, phi, indexing="ij")


def torus_grid(n: int):
    x = np.arange(n) * TWO_PI / n
    return np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)


@lru_cache(maxsize=32)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = roots_legendre(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def quadrature_s3(g: Callable, n_s: int = 64, n_phi: int = 64) -> float:
    """Integral of ``g(s, phi1, phi2)`` against the Riemannian volume of S^3.

    Gauss-Legendre in s, trapezoid (spectrally accurate) in the periodic angles.
    """
    x, w = gauss_legendre(n_s)
    s = (np.pi / 4) * (x + 1)
    ws = (np.pi / 4) * w * np.abs(volume_density(s))
    phi = np.arange(n_phi) * TWO_PI / n_phi
    S, P1, P2 = np.meshgrid(s, phi, phi, indexing="ij")
    vals = np.broadcast_to(np.asarray(g(S, P1, P2), dtype=float), S.shape)
    return float(np.einsum("i,ijk->", ws, vals) * (TWO_PI / n_phi) ** 2)


def integrate_3form_s3(coef: Callable, n_s: int = 64, n_phi: int = 64) -> float:
    """Integral over oriented S^3 of the 3-form ``coef(s, phi1, phi2) ds ^ dphi1 ^ dphi2``."""
    # ds^dphi1^dphi2 = vol_g / volume_density
    return quadrature_s3(lambda s, a, b: coef(s, a, b) / volume_density(s), n_s, n_phi)


def quadrature_t3(g: Callable, n: int = 32) -> float:
    """Integral of ``g(x)`` (x of shape (..., 3)) over the flat torus, trapezoid rule."""
    pts = torus_grid(n)
    vals = np.broadcast_to(np.asarray(g(pts), dtype=float), pts.shape[:-1])
    return float(vals.sum() * (TWO_PI / n) ** 3)
