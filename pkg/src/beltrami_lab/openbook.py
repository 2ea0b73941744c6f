"""Planar open books of S^3 supporting the contact structures of V2 and V3.

Two books are provided:

* ``pi_minus(z1, z2) = z1 conj(z2) / |z1 conj(z2)|``, page angle ``phi1 - phi2``,
  binding the negative Hopf link;
* ``pi_tilde(z1, z2) = z1 z2 conj(z1 - z2)^2 / (|z1 z2| |z1 - z2|^2)``, binding the
  Hopf link together with the circle ``{s = pi/4, phi1 = phi2}``.

Support is checked the usual way: ``d alpha`` must be an area form on pages and
``alpha`` must be positive on the oriented binding, where ``alpha`` is the metric
dual of the field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .manifold import TWO_PI, embed, frame_vectors
from .sphere_fields import AxisymmetricField, build_Vm

HALF_PI = np.pi / 2


@dataclass(frozen=True)
class Binding:
    """Oriented binding circle ``t -> (s, phi1(t), phi2(t))`` with phi-velocities ``(d1, d2)``."""

    s: float
    phi1: Callable
    phi2: Callable
    d1: float
    d2: float
    label: str

    def points(self, t):
        t = np.asarray(t, dtype=float)
        return embed(np.full_like(t, self.s), self.phi1(t), self.phi2(t))

    def tangent(self, t):
        """Ambient velocity; the coordinate vector of a degenerate angle is zero there anyway."""
        t = np.asarray(t, dtype=float)
        s, p1, p2 = np.full_like(t, self.s), self.phi1(t), self.phi2(t)
        c, sn = np.cos(s), np.sin(s)
        return np.stack(
            [-c * np.sin(p1) * self.d1, c * np.cos(p1) * self.d1, -sn * np.sin(p2) * self.d2, sn * np.cos(p2) * self.d2],
            axis=-1,
        )


@dataclass(frozen=True)
class OpenBook:
    name: str
    theta: Callable  # (s, phi1, phi2) -> page angle
    theta_complex: Callable  # embedded points (..., 4) -> page angle
    bindings: tuple[Binding, ...] = field(default_factory=tuple)


def _theta_minus(s, phi1, phi2):
    return np.mod(np.asarray(phi1) - np.asarray(phi2), TWO_PI)


def _theta_minus_complex(p):
    p = np.asarray(p, dtype=float)
    z1, z2 = p[..., 0] + 1j * p[..., 1], p[..., 2] + 1j * p[..., 3]
    return np.mod(np.angle(z1 * np.conj(z2)), TWO_PI)


def theta_tilde(s, phi1, phi2):
    """Coordinate formula ``phi1 + phi2 - 2 arctan(...)`` with the one-argument arctan."""
    s, phi1, phi2 = (np.asarray(a, dtype=float) for a in (s, phi1, phi2))
    num = np.cos(s) * np.sin(phi1) - np.sin(s) * np.sin(phi2)
    den = np.cos(s) * np.cos(phi1) - np.sin(s) * np.cos(phi2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return phi1 + phi2 - 2 * np.arctan(num / den)


def theta_tilde_complex(p):
    p = np.asarray(p, dtype=float)
    z1, z2 = p[..., 0] + 1j * p[..., 1], p[..., 2] + 1j * p[..., 3]
    return np.angle(z1 * z2 * np.conj(z1 - z2) ** 2)


def pi_minus() -> OpenBook:
    bindings = (
        Binding(0.0, lambda t: t, lambda t: np.zeros_like(t), 1.0, 0.0, "s=0"),
        Binding(HALF_PI, lambda t: np.zeros_like(t), lambda t: -t, 0.0, -1.0, "s=pi/2"),
    )
    return OpenBook("pi_minus", _theta_minus, _theta_minus_complex, bindings)


def pi_tilde() -> OpenBook:
    bindings = (
        Binding(0.0, lambda t: t, lambda t: np.zeros_like(t), 1.0, 0.0, "s=0"),
        Binding(np.pi / 4, lambda t: -t, lambda t: -t, -1.0, -1.0, "s=pi/4"),
        Binding(HALF_PI, lambda t: np.zeros_like(t), lambda t: t, 0.0, 1.0, "s=pi/2"),
    )
    return OpenBook("pi_tilde", theta_tilde, theta_tilde_complex, bindings)


def get_book(name: str) -> OpenBook:
    books = {"pi_minus": pi_minus, "pi_tilde": pi_tilde}
    if name not in books:
        raise KeyError(f"unknown open book {name!r}")
    return books[name]()


def supported_field(name: str) -> AxisymmetricField:
    """The field each book is built for: ``-(3/2) V2`` and ``2 V3``."""
    if name == "pi_minus":
        return build_Vm(2).scaled(Fraction(-3, 2))
    if name == "pi_tilde":
        return build_Vm(3).scaled(2)
    raise KeyError(name)


def angle_difference(a, b):
    """Signed difference reduced to ``(-pi, pi]``."""
    d = np.mod(np.asarray(a) - np.asarray(b) + np.pi, TWO_PI) - np.pi
    return np.where(d <= -np.pi, d + TWO_PI, d)


def theta_consistency(book: OpenBook, n: int = 48, mask: float = 1e-6) -> float:
    """Max mod-2pi gap between the coordinate and complex page angles off the binding.

    Points where the arctan argument has a vanishing denominator are masked.
    """
    s = (np.arange(n) + 0.5) * HALF_PI / n
    phi = np.arange(n) * TWO_PI / n + 0.1
    S, P1, P2 = np.meshgrid(s, phi, phi, indexing="ij")
    p = embed(S, P1, P2)
    z1, z2 = p[..., 0] + 1j * p[..., 1], p[..., 2] + 1j * p[..., 3]
    keep = (np.abs(z1 * z2 * (z1 - z2)) > mask) & (np.abs((z1 - z2).real) > mask)
    gap = np.abs(angle_difference(book.theta(S, P1, P2), book.theta_complex(p)))
    return float(np.max(gap[keep]))


# --- page positivity -------------------------------------------------------------------


@dataclass
class PagePositivity:
    book: str
    s: np.ndarray
    t: np.ndarray | None
    values: np.ndarray
    expected: np.ndarray
    max_deviation: float

    @property
    def margin(self) -> float:
        return float(np.min(self.values))


def _page_grid_s(n: int) -> np.ndarray:
    # open page: the binding s = 0, pi/2 (and pi/4 for pi_tilde) is excluded by cell centres
    return (np.arange(n) + 0.5) * HALF_PI / n


def dalpha_on_page_minus(V: AxisymmetricField, s):
    """``d alpha (-d_s, d_phi1 + d_phi2)`` on a ``pi_minus`` page, exact in z.

    A page ``phi1 - phi2 = const`` is parametrized by ``(s, phi1)``; its ``d_phi1``
    is the ambient ``d_phi1 + d_phi2``.  With ``alpha = p dphi1 + q dphi2``
    the pullback is ``(p + q) dphi1``, so the pairing is ``-(p + q)'(s)``.
    """
    p, q = V.coframe_polys()
    dz = (p + q).deriv()
    s = np.asarray(s, dtype=float)
    return np.sin(2 * s) * dz(np.cos(s) ** 2)  # -d/ds = sin2s d/dz


def _alpha_pair(V, s, phi1, phi2, vec):
    """``alpha(vec)`` for ambient ``vec`` with ``alpha`` the metric dual of ``V``."""
    p = embed(s, phi1, phi2)
    f, f1, f2 = V(s, phi1, phi2)
    R, X1, X2 = frame_vectors(p)
    amb = np.asarray(f)[..., None] * R + np.asarray(f1)[..., None] * X1 + np.asarray(f2)[..., None] * X2
    return np.sum(amb * vec, axis=-1)


def dalpha_on_page_fd(V, s, phi1, phi2, h: float = 1e-4):
    """Same pairing by finite differences; works for any frame field.

    For commuting coordinate fields ``X = -d_s``, ``Y = d_phi1 + d_phi2``:
    ``d alpha(X, Y) = X alpha(Y) - Y alpha(X)``.
    """
    s, phi1, phi2 = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (s, phi1, phi2)))

    def d_s(a, b, c):
        c_, sn = np.cos(a), np.sin(a)
        return np.stack([-sn * np.cos(b), -sn * np.sin(b), c_ * np.cos(c), c_ * np.sin(c)], axis=-1)

    def d_y(a, b, c):
        c_, sn = np.cos(a), np.sin(a)
        return np.stack([-c_ * np.sin(b), c_ * np.cos(b), -sn * np.sin(c), sn * np.cos(c)], axis=-1)

    def alpha_y(a, b, c):
        return _alpha_pair(V, a, b, c, d_y(a, b, c))

    def alpha_x(a, b, c):
        return -_alpha_pair(V, a, b, c, d_s(a, b, c))

    x_alpha_y = -(alpha_y(s + h, phi1, phi2) - alpha_y(s - h, phi1, phi2)) / (2 * h)
    y_alpha_x = (alpha_x(s, phi1 + h, phi2 + h) - alpha_x(s, phi1 - h, phi2 - h)) / (2 * h)
    return x_alpha_y - y_alpha_x


def closed_form_dtheta(s, t):
    """Rate of the page angle along the displayed integral curves of ``V3``."""
    return np.cos(2 * s) ** 2 / (1 - np.cos(t * np.cos(2 * s)) * np.sin(2 * s))


def dtheta_dt_tilde(V: AxisymmetricField, s, t):
    """``d/dt Theta(s, u1 t, u2 t)`` with ``(u1, u2)`` the phi-velocities of ``V`` at ``s``.

    ``Theta = phi1 + phi2 - 2 arg(w)``, ``w = cos s e^{i u1 t} - sin s e^{i u2 t}``.
    """
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    u1, u2 = V.phi_components(s)
    w = np.cos(s) * np.exp(1j * u1 * t) - np.sin(s) * np.exp(1j * u2 * t)
    dw = 1j * (u1 * np.cos(s) * np.exp(1j * u1 * t) - u2 * np.sin(s) * np.exp(1j * u2 * t))
    return u1 + u2 - 2 * np.imag(dw / w)


def dtheta_dt_fd(V: AxisymmetricField, s, t, h: float = 1e-5):
    """Independent path: central difference of the complex page angle along the orbit."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    u1, u2 = V.phi_components(s)

    def theta(tt):
        return theta_tilde_complex(embed(s, u1 * tt, u2 * tt))

    return angle_difference(theta(t + h), theta(t - h)) / (2 * h)


def page_area_positivity(book: OpenBook | str, V=None, grid: int = 64, t_max: float = 10.0) -> PagePositivity:
    """Page positivity of ``book`` for ``V`` (default: the book's own field).

    ``pi_minus``: exact pairing of ``d alpha`` with the page frame, compared with ``2 sin 2s``
    when ``V`` is the default field.
    ``pi_tilde``: ``dTheta/dt`` along the orbits of ``V`` on a ``(s, t)`` grid, compared with the
    closed form (time-rescaled when ``V = c V3``).
    """
    if isinstance(book, str):
        book = get_book(book)
    default = V is None
    if default:
        V = supported_field(book.name)
    s = _page_grid_s(grid)
    if book.name == "pi_minus":
        values = dalpha_on_page_minus(V, s)
        expected = 2 * np.sin(2 * s) if default else values
        return PagePositivity(book.name, s, None, values, expected, float(np.max(np.abs(values - expected))))
    if book.name == "pi_tilde":
        s = s[np.abs(s - np.pi / 4) > 1e-9]
        t = np.linspace(0.0, t_max, grid)
        S, T = np.meshgrid(s, t, indexing="ij")
        values = dtheta_dt_tilde(V, S, T)
        # V = c V3 runs the V3 curves at speed c
        c = _multiple_of_v3(V)
        expected = c * closed_form_dtheta(S, c * T) if c is not None else values
        return PagePositivity(book.name, S, T, values, expected, float(np.max(np.abs(values - expected))))
    raise KeyError(book.name)


def _multiple_of_v3(V) -> float | None:
    v3 = build_Vm(3)
    if not isinstance(V, AxisymmetricField) or V.F.degree != v3.F.degree:
        return None
    c = V.F.coefficients[-1] / v3.F.coefficients[-1]
    return float(c) if c > 0 and V.is_multiple_of(v3, c) else None


# --- binding ---------------------------------------------------------------------------


@dataclass
class BindingMargin:
    label: str
    pairing_min: float
    pairing_max: float
    tangency_residual: float

    @property
    def positive(self) -> bool:
        return self.pairing_min > 0


def binding_positivity(book: OpenBook | str, V=None, n: int = 128) -> list[BindingMargin]:
    """``alpha(T)`` along each oriented binding circle, plus how far ``V`` is from tangent.

    Computed in R^4 so the degenerate circles need no special chart.
    """
    if isinstance(book, str):
        book = get_book(book)
    if V is None:
        V = supported_field(book.name)
    t = np.arange(n) * TWO_PI / n
    out = []
    for b in book.bindings:
        s = np.full_like(t, b.s)
        p1, p2 = b.phi1(t), b.phi2(t)
        T = b.tangent(t)
        f, f1, f2 = V(s, p1, p2)
        R, X1, X2 = frame_vectors(b.points(t))
        amb = np.asarray(f)[..., None] * R + np.asarray(f1)[..., None] * X1 + np.asarray(f2)[..., None] * X2
        pair = np.sum(amb * T, axis=-1)
        tt = np.sum(T * T, axis=-1)
        perp = amb - (pair / tt)[:, None] * T
        resid = np.linalg.norm(perp, axis=-1) / np.linalg.norm(amb, axis=-1)
        out.append(BindingMargin(b.label, float(pair.min()), float(pair.max()), float(resid.max())))
    return out


def openbook_margins(book: OpenBook | str, V=None, grid: int = 64) -> dict:
    """Margins in the shape stored under ``margins`` of a contact report."""
    if isinstance(book, str):
        book = get_book(book)
    page = page_area_positivity(book, V, grid)
    binds = binding_positivity(book, V)
    return {
        f"openbook_{book.name}_page": page.margin,
        f"openbook_{book.name}_page_deviation": page.max_deviation,
        f"openbook_{book.name}_binding": min(b.pairing_min for b in binds),
        f"openbook_{book.name}_tangency": max(b.tangency_residual for b in binds),
    }
