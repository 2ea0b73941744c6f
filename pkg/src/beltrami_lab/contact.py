"""Contact forms dual to Beltrami fields: contact volume, characteristic surfaces,
Giroux-type tightness verdicts, collinearity sets and linear contact homotopies."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable

import numpy as np
import sympy
from scipy.optimize import minimize_scalar

from .manifold import DEFAULT_STEP, curl_r3_numeric, curl_s3_numeric, hopf_grid, torus_grid
from .nodal import extract_nodal_set
from .orthopoly import TWO_Z_MINUS_1, Polynomial, isolate_roots, sturm_count
from .sphere_fields import AxisymmetricField, FrameField, curl_axisymmetric, min_norm
from .torus_fields import ProfileField, TorusField, TorusMode, min_norm_t3

S3, T3 = "S3", "T3"


class Verdict(str, Enum):
    TIGHT = "Tight"
    OVERTWISTED = "Overtwisted"
    INCONCLUSIVE = "Inconclusive"


def manifold_of(V) -> str:
    if isinstance(V, (AxisymmetricField, FrameField)):
        return S3
    if isinstance(V, (TorusField, ProfileField)):
        return T3
    tag = getattr(V, "manifold", None)
    if tag in (S3, T3):
        return tag
    raise TypeError(f"cannot tell which manifold {V!r} lives on; pass manifold=")


def evaluate(V, points, manifold: str | None = None) -> np.ndarray:
    """Field components at ``points`` (..., 3): frame components on S^3, Cartesian on T^3."""
    manifold = manifold or manifold_of(V)
    points = np.asarray(points, dtype=float)
    if manifold == S3:
        comps = V(points[..., 0], points[..., 1], points[..., 2])
        return np.stack(np.broadcast_arrays(*comps), axis=-1)
    return np.asarray(V(points), dtype=float)


def sample_points(manifold: str, n: int, closed: bool = True) -> np.ndarray:
    if manifold == S3:
        return np.stack(hopf_grid(n, closed=closed), axis=-1)
    return torus_grid(n)


class OneForm:
    """Metric dual of a field. In an orthonormal frame the coefficients equal the field components."""

    def __init__(self, field, manifold: str | None = None):
        self.field = field
        self.manifold = manifold or manifold_of(field)

    def __call__(self, points) -> np.ndarray:
        return evaluate(self.field, points, self.manifold)

    def pair(self, W, points) -> np.ndarray:
        return np.sum(self(points) * evaluate(W, points, self.manifold), axis=-1)


def _curl_values(V, points, manifold, method, h):
    if method == "analytic":
        if isinstance(V, AxisymmetricField):
            return evaluate(curl_axisymmetric(V), points, S3)
        if isinstance(V, TorusField):
            return V.curl()(points)
        if isinstance(V, ProfileField):
            return V.curl_at(points)
        method = "fd"
    if method != "fd":
        raise ValueError(f"unknown method {method!r}")
    if manifold == S3:
        c = curl_s3_numeric(V, points[..., 0], points[..., 1], points[..., 2], h, richardson=True)
        return np.stack(c, axis=-1)
    return curl_r3_numeric(V, points, h)


def contact_volume(V, points, method: str = "analytic", manifold: str | None = None, h: float = DEFAULT_STEP):
    """Coefficient of ``alpha ^ d alpha`` relative to ``vol_g``, i.e. ``<V, curl V>``.

    ``method="analytic"`` uses an exact curl when the field has one and falls back to
    Richardson-extrapolated finite differences otherwise.
    """
    manifold = manifold or manifold_of(V)
    points = np.asarray(points, dtype=float)
    return np.sum(evaluate(V, points, manifold) * _curl_values(V, points, manifold, method, h), axis=-1)


# --- characteristic surfaces and Giroux verdicts ------------------------------------


def characteristic_polynomial(V: AxisymmetricField) -> Polynomial:
    """``<Z, V>`` as a polynomial in z, for the circle-action generator ``Z``.

    ``Z = R`` for positive eigenvalues; for negative ones the orientation-reversing
    symmetry swapping ``R`` and ``R'`` makes ``R'`` the generator.
    """
    if V.lam is not None and V.lam < 0:
        return V.G + TWO_Z_MINUS_1 * V.F
    return V.F + TWO_Z_MINUS_1 * V.G


def characteristic_surface_s3(V: AxisymmetricField, tol: float = 1e-14) -> list[float]:
    """Radii ``s0`` of the tori where the generator is tangent to ``ker alpha``."""
    p = characteristic_polynomial(V)
    if p.is_zero():
        raise ValueError("the generator is tangent to the contact planes everywhere")
    if p.degree <= 0:
        return []
    return sorted(math.acos(math.sqrt(z)) for z in isolate_roots(p, 0.0, 1.0, tol))


@dataclass
class Classification:
    verdict: Verdict
    certificate: dict


def _plane_wave_certificate(V: TorusField, n: int = 8) -> Classification | None:
    if len(V.modes) != 1:
        return None
    mode = V.modes[0]
    k = mode.k
    knorm = sympy.sqrt(sum(x * x for x in k))
    a = mode.cos
    axk = (a[1] * k[2] - a[2] * k[1], a[2] * k[0] - a[0] * k[2], a[0] * k[1] - a[1] * k[0])
    if sympy.simplify(sum(x * y for x, y in zip(a, k))) != 0:
        return None
    if all(sympy.simplify(c - x / knorm) == 0 for c, x in zip(mode.sin, axk)):
        sign = 1
    elif all(sympy.simplify(c + x / knorm) == 0 for c, x in zip(mode.sin, axk)):
        sign = -1
    else:
        return None
    af = np.array([float(x) for x in a])
    kf = np.array(k, dtype=float)
    bnorm, kn = np.linalg.norm(af), np.linalg.norm(kf)
    # rows map {sign * a x k/|k|, a, k/|k|} (normalised) onto the standard basis
    Q = np.array([sign * np.cross(af, kf) / (bnorm * kn), af / bnorm, kf / kn])
    y = np.random.default_rng(0).uniform(0, 2 * np.pi, (n**3, 3))
    rotated = V(y @ Q) @ Q.T
    model = bnorm * np.stack([np.sin(kn * y[:, 2]), np.cos(kn * y[:, 2]), 0 * y[:, 2]], axis=-1)
    residual = float(np.max(np.abs(rotated - model)))
    det = float(np.linalg.det(Q))
    ok = residual < 1e-12 and abs(abs(det) - 1) < 1e-12 and abs(np.max(np.abs(Q @ Q.T - np.eye(3)))) < 1e-12
    if not ok:
        return None
    return Classification(
        Verdict.TIGHT,
        {
            "kind": "rotation to standard form on the universal cover",
            "model": "sin(x3) dx1 + cos(x3) dx2 after rescaling x3",
            "rotation_det": det,
            "orientation": "positive" if det > 0 else "negative",
            "model_residual": residual,
        },
    )


def giroux_classify(V, manifold: str | None = None, n_nodal: int = 256, min_margin: float = 1e-3,
                    norm_grid: int = 32) -> Classification:
    """Tight / overtwisted verdict for circle-invariant fields.

    On S^3 (axisymmetric fields) the verdict is Overtwisted iff the characteristic
    polynomial has a root in (0, 1). On T^3 a single plane wave is Tight via an explicit
    rotation to the standard form; an ansatz field built from a T^2 eigenfunction is
    Overtwisted when its nodal set is regular, disconnected and has a contractible
    component, and Inconclusive otherwise.
    """
    manifold = manifold or manifold_of(V)
    if manifold == S3:
        if not isinstance(V, AxisymmetricField):
            raise ValueError("criterion inapplicable: field is not axisymmetric")
        mn, _ = min_norm(V, max(norm_grid, 32))
        if mn <= 0:
            raise ValueError("field vanishes; no contact structure")
        p = characteristic_polynomial(V)
        roots = characteristic_surface_s3(V)
        cert = {
            "generator": "R" if (V.lam is None or V.lam > 0) else "R'",
            "polynomial": [str(c) for c in p.coefficients],
            "roots_z": [math.cos(s) ** 2 for s in roots],
            "roots_s": roots,
            "sturm_count": sturm_count(p, 0, 1) - (1 if p.exact(1) == 0 else 0) if p.degree > 0 else 0,
            "min_norm": mn,
        }
        return Classification(Verdict.OVERTWISTED if roots else Verdict.TIGHT, cert)

    if isinstance(V, TorusField):
        wave = _plane_wave_certificate(V)
        if wave is not None:
            return wave
        f = getattr(V, "t2", None)
        if f is None:
            raise ValueError("criterion inapplicable: field is neither a plane wave nor an x3-invariant ansatz")
        mn, _ = min_norm_t3(V, norm_grid)
        if mn <= 0:
            raise ValueError("field vanishes; no contact structure")
        curves = extract_nodal_set(f, n_nodal)
        regular = curves.margin > min_margin and not curves.irregular_suspected
        cert = {
            "kind": "nodal set of the T^2 eigenfunction",
            "n_components": len(curves.components),
            "homology": [list(c.homology) for c in curves.components],
            "regularity_margin": curves.margin,
            "has_disk_component": curves.has_disk_component(),
            "min_norm": mn,
            "nodal": curves.to_dict(),
        }
        if regular and len(curves.components) >= 2 and curves.has_disk_component():
            return Classification(Verdict.OVERTWISTED, cert)
        return Classification(Verdict.INCONCLUSIVE, cert)
    raise ValueError("criterion inapplicable for this field type")


# --- collinearity and the constant c0 -----------------------------------------------


@dataclass
class CollinearitySets:
    plus: np.ndarray
    minus: np.ndarray
    tol: float
    plus_margin: float  # min |V/|V| - W/|W|| over the grid
    minus_margin: float  # min |V/|V| + W/|W|| over the grid
    ratios_plus: np.ndarray = field(default_factory=lambda: np.empty(0))
    ratios_minus: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def empty(self) -> bool:
        return len(self.plus) == 0 and len(self.minus) == 0


def _unit_and_norm(X):
    n = np.linalg.norm(X, axis=-1)
    if np.any(n == 0):
        raise ValueError("field vanishes on the grid")
    return X / n[..., None], n


def collinearity_sets(V, W, grid: int = 32, tol: float = 1e-8, manifold: str | None = None,
                      points=None) -> CollinearitySets:
    """Grid points where ``|V x W| / (|V||W|) < tol``, split by the sign of ``V . W``."""
    manifold = manifold or manifold_of(V)
    pts = sample_points(manifold, grid).reshape(-1, 3) if points is None else np.asarray(points).reshape(-1, 3)
    u, nu = _unit_and_norm(evaluate(V, pts, manifold))
    w, nw = _unit_and_norm(evaluate(W, pts, manifold))
    cross = np.linalg.norm(np.cross(u, w), axis=-1)
    dot = np.sum(u * w, axis=-1)
    hit = cross < tol
    plus, minus = hit & (dot > 0), hit & (dot < 0)
    return CollinearitySets(
        pts[plus], pts[minus], tol,
        float(np.min(np.linalg.norm(u - w, axis=-1))),
        float(np.min(np.linalg.norm(u + w, axis=-1))),
        (nu / nw)[plus], (nu / nw)[minus],
    )


def _refine_axis(manifold: str) -> tuple[int, float, float]:
    # the coordinate transverse to the symmetry: s on S^3, x3 on T^3
    return (0, 0.0, np.pi / 2) if manifold == S3 else (2, -np.inf, np.inf)


def compute_c0(V, W, grid: int = 32, tol: float = 1e-8, manifold: str | None = None,
               n_candidates: int = 200) -> tuple[float, dict]:
    """``min |V|/|W|`` over the collinearity set ``C = C+ u C-``.

    Grid hits are combined with near-collinear candidates refined by a bounded 1-D
    search of the normalised cross product along ``s`` (S^3) or ``x3`` (T^3).
    Returns ``(inf, {"flag": "never aligned"})`` if nothing is found.
    """
    manifold = manifold or manifold_of(V)
    pts = sample_points(manifold, grid).reshape(-1, 3)
    u, nu = _unit_and_norm(evaluate(V, pts, manifold))
    w, nw = _unit_and_norm(evaluate(W, pts, manifold))
    cross = np.linalg.norm(np.cross(u, w), axis=-1)
    ratio = nu / nw
    hit = cross < tol
    grid_value = float(np.min(ratio[hit])) if hit.any() else math.inf
    best = grid_value
    axis, lo_lim, hi_lim = _refine_axis(manifold)
    step = (np.pi / 2 if manifold == S3 else 2 * np.pi) / grid
    order = np.argsort(cross)[:n_candidates]
    refined = 0
    for i in order:
        if cross[i] > 1e-2:
            break
        p0 = pts[i].copy()

        def at(x, p0=p0):
            q = p0.copy()
            q[axis] = x
            a = evaluate(V, q[None], manifold)[0]
            b = evaluate(W, q[None], manifold)[0]
            return a, b

        def obj(x):
            a, b = at(x)
            return np.linalg.norm(np.cross(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))

        lo, hi = max(p0[axis] - step, lo_lim), min(p0[axis] + step, hi_lim)
        res = minimize_scalar(obj, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        if res.fun < tol:
            a, b = at(res.x)
            best = min(best, float(np.linalg.norm(a) / np.linalg.norm(b)))
            refined += 1
    if math.isinf(best):
        return math.inf, {"flag": "never aligned", "grid": grid}
    return best, {"grid_value": grid_value, "refined_points": refined, "grid": grid, "tol": tol}


# --- linear contact homotopies ------------------------------------------------------


@dataclass
class HomotopyCertificate:
    margin: float
    argmin: tuple
    beta_sign: int
    grid: int
    t_samples: int
    caveat: str = "positivity certified on the sampled grid only"

    def to_dict(self) -> dict:
        return {"margin": self.margin, "argmin": list(self.argmin), "beta_sign": self.beta_sign,
                "grid": self.grid, "t_samples": self.t_samples, "caveat": self.caveat}


def _eigenvalue(V):
    lam = getattr(V, "lam", None)
    return None if lam is None else float(lam)


def check_linear_homotopy(V, W, lam=None, grid: int = 32, t_samples: int = 64, c: float | None = None,
                          manifold: str | None = None, beta_sign: int | None = None) -> HomotopyCertificate:
    """Minimum over grid x [0, 1] of the contact volume along a linear path of dual forms.

    Default path ``t alpha + (1 - t) beta`` with ``beta -> -beta`` when ``C+`` is empty;
    with ``c`` given, the shifted path ``alpha + c t beta``. The volume is
    ``lam * Q(t)`` and the reported margin is ``min |lam| Q``.
    """
    lv, lw = _eigenvalue(V), _eigenvalue(W)
    if lv is not None and lw is not None and not math.isclose(lv, lw, rel_tol=1e-12):
        raise ValueError(f"eigenvalues differ: {lv} vs {lw}")
    lam = float(lam) if lam is not None else (lv if lv is not None else lw)
    if lam is None or lam == 0:
        raise ValueError("a nonzero common eigenvalue is required")
    manifold = manifold or manifold_of(V)
    pts = sample_points(manifold, grid).reshape(-1, 3)
    a = evaluate(V, pts, manifold)
    b = evaluate(W, pts, manifold)
    aa, bb, ab = np.sum(a * a, -1), np.sum(b * b, -1), np.sum(a * b, -1)
    t = np.linspace(0.0, 1.0, t_samples)[:, None]
    if c is not None:
        Q = c * c * t * t * bb + 2 * c * t * ab + aa
        sign = 1
    else:
        if beta_sign is None:
            sets = collinearity_sets(V, W, points=pts, manifold=manifold)
            sign = -1 if (len(sets.plus) == 0 and len(sets.minus) > 0) else 1
        else:
            sign = beta_sign
        ab = sign * ab
        Q = t * t * aa + (1 - t) ** 2 * bb + 2 * t * (1 - t) * ab
    vol = abs(lam) * Q
    i, j = np.unravel_index(np.argmin(vol), vol.shape)
    return HomotopyCertificate(float(vol[i, j]), (float(t[i, 0]), *map(float, pts[j])), sign, grid, t_samples)


# --- named closed-form homotopies ---------------------------------------------------


def t3_sqrt2_path(t) -> TorusField:
    """``sqrt(t+1) sin x1 dx2 + cos x1 dx3 - (3t/sqrt 2) sin x1 dx1``."""
    t = sympy.Rational(Fraction(t).limit_denominator(10**12)) if not isinstance(t, sympy.Basic) else t
    return TorusField(
        [TorusMode((1, 0, 0), (0, 0, 1), (-3 * t / sympy.sqrt(2), sympy.sqrt(t + 1), 0))], f"alpha_t(t={t})"
    )


def psi_pullback_eta(x) -> np.ndarray:
    """Pullback of the k=(1,1,0), b=(0,0,1) eigenform by ``(2x1 - x2, -x1 + x2, x3)``."""
    x = np.asarray(x, dtype=float)
    M = np.array([[2, -1, 0], [-1, 1, 0], [0, 0, 1]], dtype=float)
    y = x @ M.T
    ph = y[..., 0] + y[..., 1]
    eta = np.stack([-np.sin(ph) / np.sqrt(2), np.sin(ph) / np.sqrt(2), np.cos(ph)], axis=-1)
    return eta @ M


def ex_final_path(t) -> ProfileField:
    """Profile field with ``F_t = -2 x3 + t cos x3``; factor ``2 + t sin x3``."""
    return ProfileField(lambda x3: -2 * x3 + t * np.cos(x3), lambda x3: -2 - t * np.sin(x3), f"ex_final(t={t})")


def ex_final_explicit(t, x) -> np.ndarray:
    """The displayed ``alpha_t`` written out componentwise."""
    x3 = np.asarray(x, dtype=float)[..., 2]
    g = 2 * x3 - t * np.cos(x3)
    r = 1 / np.sqrt(2)
    return np.stack([r * (np.cos(g) - np.sin(g)), -r * (np.cos(g) + np.sin(g)), 0 * g], axis=-1)


def _kl_symbolic():
    s, A, B = sympy.symbols("s A B", positive=True)
    D = A**2 * sympy.cos(s) ** 2 + B**2 * sympy.sin(s) ** 2
    p = A * sympy.cos(s) ** 2 / D
    q = B * sympy.sin(s) ** 2 / D
    # alpha ^ d alpha = (q p' - p q') ds^dphi1^dphi2 and vol = -sin s cos s ds^dphi1^dphi2
    vol = sympy.simplify((q * sympy.diff(p, s) - p * sympy.diff(q, s)) / (-sympy.sin(s) * sympy.cos(s)))
    return sympy.lambdify((s, A, B), vol, "numpy"), vol


_KL_VOLUME = None


def kl_path_field(k: int, l: int, t: float) -> FrameField:
    A, B = 1 + t * (l - 1), 1 + t * (k - 1)

    def comps(s, phi1, phi2):
        s = np.asarray(s, dtype=float)
        D = A**2 * np.cos(s) ** 2 + B**2 * np.sin(s) ** 2
        v1, v2 = A / D, B / D
        psi = np.asarray(phi1) + np.asarray(phi2)
        sc = np.sin(s) * np.cos(s) * (v1 - v2)
        return v1 * np.cos(s) ** 2 + v2 * np.sin(s) ** 2, sc * np.sin(psi), -sc * np.cos(psi)

    return FrameField(comps, name=f"kl_path({k},{l},t={t})")


def verify_named_homotopy(name: str, grid: int = 32, t_samples: int = 11, k: int = 1, l: int = 1) -> dict:
    """Contact volume along a named closed-form path, compared with its closed form.

    Returns ``margin`` (min volume over grid x t), ``max_deviation`` from the closed
    form, ``fd_deviation`` from an independent finite-difference evaluation, and
    endpoint residuals where the path has named endpoints.
    """
    global _KL_VOLUME
    ts = np.linspace(0.0, 1.0, t_samples)
    out: dict = {"name": name, "grid": grid, "t_samples": t_samples}
    if name == "t3_sqrt2_class":
        x = torus_grid(grid)
        vols, dev, fd = [], 0.0, 0.0
        for t in ts:
            path = t3_sqrt2_path(t)
            v = contact_volume(path, x)
            closed = math.sqrt(t + 1)
            vols.append(float(v.min()))
            dev = max(dev, float(np.max(np.abs(v - closed))))
            fd = max(fd, float(np.max(np.abs(contact_volume(path, x[::4, ::4, ::4], method="fd") - closed))))
        x = x.reshape(-1, 3)
        out["endpoint_residual_t1"] = float(np.max(np.abs(t3_sqrt2_path(1)(x) - psi_pullback_eta(x))))
        model = np.stack([0 * x[:, 0], np.sin(x[:, 0]), np.cos(x[:, 0])], axis=-1)
        out["endpoint_residual_t0"] = float(np.max(np.abs(t3_sqrt2_path(0)(x) - model)))
        out["closed_form"] = "sqrt(t+1)"
    elif name == "ex_final":
        x = torus_grid(grid)
        vols, dev, fd = [], 0.0, 0.0
        for t in ts:
            path = ex_final_path(t)
            v = contact_volume(path, x)
            closed = 2 + t * np.sin(x[..., 2])
            vols.append(float(v.min()))
            dev = max(dev, float(np.max(np.abs(v - closed))), float(np.max(np.abs(path(x) - ex_final_explicit(t, x)))))
            explicit = lambda y, t=t: ex_final_explicit(t, y)  # noqa: E731
            xs = x[::4, ::4, ::4]
            fd_v = np.sum(explicit(xs) * curl_r3_numeric(explicit, xs, DEFAULT_STEP), -1)
            fd = max(fd, float(np.max(np.abs(fd_v - (2 + t * np.sin(xs[..., 2]))))))
        x = x.reshape(-1, 3)
        x3 = x[:, 2]
        r = 1 / np.sqrt(2)
        alpha0 = -r * np.stack([np.sin(2 * x3), np.cos(2 * x3), 0 * x3], -1) + r * np.stack(
            [np.cos(2 * x3), -np.sin(2 * x3), 0 * x3], -1)
        out["endpoint_residual_t0"] = float(np.max(np.abs(ex_final_path(0.0)(x) - alpha0)))
        out["closed_form"] = "2 + t sin x3"
    elif name in ("s3_kl_family",) or name.startswith("s3_kl_family("):
        if "(" in name:
            k, l = (int(v) for v in name[name.index("(") + 1: name.index(")")].split(","))
        if k * l == 0:
            raise ValueError("k and l must be nonzero")
        if _KL_VOLUME is None:
            _KL_VOLUME = _kl_symbolic()[0]
        S, P1, P2 = hopf_grid(grid, margin=0.0)
        vols, dev, fd = [], 0.0, 0.0
        for t in ts:
            A, B = 1 + t * (l - 1), 1 + t * (k - 1)
            D = A**2 * np.cos(S) ** 2 + B**2 * np.sin(S) ** 2
            closed = 2 * A * B / D**2
            v = np.broadcast_to(_KL_VOLUME(S, A, B), S.shape)
            vols.append(float(v.min()))
            dev = max(dev, float(np.max(np.abs(v - closed))))
            path = kl_path_field(k, l, t)
            sub = (S[::4, ::4, ::4], P1[::4, ::4, ::4], P2[::4, ::4, ::4])
            fd_v = contact_volume(path, np.stack(sub, -1), method="fd", manifold=S3)
            fd = max(fd, float(np.max(np.abs(fd_v - closed[::4, ::4, ::4]))))
        out["closed_form"] = "2AB/D^2, A = 1+t(l-1), B = 1+t(k-1), D = A^2 cos^2 s + B^2 sin^2 s"
        out["k"], out["l"] = k, l
    else:
        raise ValueError(f"unknown homotopy {name!r}")
    out["margin"] = min(vols)
    out["min_by_t"] = vols
    out["max_deviation"] = dev
    out["fd_deviation"] = fd
    return out


# --- reports ------------------------------------------------------------------------


def _round(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
        return float(f"{x:.15g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_round(v) for v in x]
    if isinstance(x, Enum):
        return x.value
    return str(x)


@dataclass
class ContactReport:
    field: str
    eigenvalue: float | None
    eig_residual: float | None
    min_norm: float
    char_surface: list | dict
    verdict: Verdict
    hopf_invariant: int | None = None
    margins: dict = field(default_factory=dict)
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "lambda": _round(self.eigenvalue),
            "eig_residual": _round(self.eig_residual),
            "min_norm": _round(self.min_norm),
            "char_surface": _round(self.char_surface),
            "verdict": self.verdict.value,
            "hopf_invariant": self.hopf_invariant,
            "margins": _round(self.margins),
            "certificate": _round(self.certificate),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> "ContactReport":
        return cls(d["field"], d["lambda"], d["eig_residual"], d["min_norm"], d["char_surface"],
                   Verdict(d["verdict"]), d["hopf_invariant"], d.get("margins", {}), d.get("certificate", {}))


def to_json_value(x):
    """Round floats to 15 significant digits and make a structure JSON-safe."""
    return _round(x)
