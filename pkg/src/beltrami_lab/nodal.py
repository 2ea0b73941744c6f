"""Laplace eigenfunctions on T^2 and S^2 and the topology of their nodal sets.

Nodal curves on the torus are extracted with a periodic marching-squares pass.
Saddle cells are resolved by evaluating the eigenfunction at the cell centre,
and each closed component gets its homology class from the winding of its lift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import sympy
from matplotlib.path import Path

TWO_PI = 2.0 * np.pi
IRREGULAR_THRESHOLD = 1e-6


# --- T^2 eigenfunctions ---------------------------------------------------------


def lattice_points(lam: int) -> list[tuple[int, int]]:
    r = math.isqrt(lam)
    return [(a, b) for a in range(-r, r + 1) for b in range(-r, r + 1) if a * a + b * b == lam]


def lattice_modes(lam: int) -> list[tuple[int, int]]:
    """One representative of each pair ``{k, -k}`` with ``|k|^2 = lam``."""
    return [k for k in lattice_points(lam) if k[0] > 0 or (k[0] == 0 and k[1] > 0)]


def symmetry_orbits(lam: int) -> int:
    """Number of lattice-mode orbits under the symmetry group of the square lattice."""
    return len({tuple(sorted((abs(a), abs(b)))) for a, b in lattice_points(lam)})


@dataclass(frozen=True)
class T2Mode:
    k: tuple[int, int]
    cos: float
    sin: float


@dataclass(frozen=True)
class T2Eigenfunction:
    """``f(x) = sum cos_j cos(k_j . x) + sin_j sin(k_j . x)`` with every ``|k_j|^2 = eigenvalue``."""

    eigenvalue: int
    modes: tuple[T2Mode, ...]

    def __post_init__(self):
        if self.eigenvalue <= 0:
            raise ValueError("eigenvalue must be a positive integer")
        for mode in self.modes:
            if mode.k[0] ** 2 + mode.k[1] ** 2 != self.eigenvalue:
                raise ValueError(f"mode {mode.k} does not satisfy |k|^2 = {self.eigenvalue}")
        if not any(m.cos != 0 or m.sin != 0 for m in self.modes):
            raise ValueError("eigenfunction has no nonzero coefficient")

    @classmethod
    def from_coefficients(cls, lam: int, coefficients) -> "T2Eigenfunction":
        modes = lattice_modes(lam)
        coefficients = np.asarray(coefficients, dtype=float).reshape(len(modes), 2)
        return cls(lam, tuple(T2Mode(k, float(a), float(b)) for k, (a, b) in zip(modes, coefficients)))

    def _phases(self, x1, x2):
        x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
        for mode in self.modes:
            yield mode, mode.k[0] * x1 + mode.k[1] * x2

    def __call__(self, x1, x2):
        out = 0.0
        for mode, th in self._phases(x1, x2):
            out = out + mode.cos * np.cos(th) + mode.sin * np.sin(th)
        return out

    def gradient(self, x1, x2):
        d1 = d2 = 0.0
        for mode, th in self._phases(x1, x2):
            dth = -mode.cos * np.sin(th) + mode.sin * np.cos(th)
            d1 = d1 + mode.k[0] * dth
            d2 = d2 + mode.k[1] * dth
        return d1, d2

    def hessian(self, x1, x2):
        h11 = h12 = h22 = 0.0
        for mode, th in self._phases(x1, x2):
            v = mode.cos * np.cos(th) + mode.sin * np.sin(th)
            k1, k2 = mode.k
            h11, h12, h22 = h11 - k1 * k1 * v, h12 - k1 * k2 * v, h22 - k2 * k2 * v
        return h11, h12, h22

    def to_dict(self) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "modes": [{"k": list(m.k), "cos": m.cos, "sin": m.sin} for m in self.modes],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "T2Eigenfunction":
        return cls(
            int(data["eigenvalue"]),
            tuple(T2Mode(tuple(m["k"]), float(m["cos"]), float(m["sin"])) for m in data["modes"]),
        )


# --- nodal curve extraction -----------------------------------------------------


@dataclass
class NodalComponent:
    points: np.ndarray  # lifted polyline in radians, shape (N, 2), not repeating the first vertex
    homology: tuple[int, int]
    crossing_homology: tuple[int, int]
    closure_error: float
    depth: int = 0

    @property
    def contractible(self) -> bool:
        return self.homology == (0, 0)


@dataclass
class NodalCurveSet:
    components: list[NodalComponent]
    margin: float
    grid: int
    irregular_suspected: bool
    warnings: list[str] = field(default_factory=list)

    @property
    def contractible(self) -> list[NodalComponent]:
        return [c for c in self.components if c.contractible]

    def has_disk_component(self) -> bool:
        # an innermost null-homologous curve bounds a disk of the complement
        return bool(self.contractible)

    def to_dict(self) -> dict:
        return {
            "grid": self.grid,
            "margin": self.margin,
            "irregular_suspected": self.irregular_suspected,
            "components": [
                {
                    "homology": list(c.homology),
                    "contractible": c.contractible,
                    "nesting_depth": c.depth,
                    "vertices": np.mod(c.points, TWO_PI).round(12).tolist(),
                }
                for c in self.components
            ],
        }


def _cut_pairs(case: int, center_positive: bool) -> list[tuple[int, int]]:
    # edge slots: 0 bottom, 1 right, 2 top, 3 left
    cut = {"BL": (0, 3), "BR": (0, 1), "TR": (1, 2), "TL": (2, 3)}
    if case == 5:  # BL and TR positive
        return [cut["BR"], cut["TL"]] if center_positive else [cut["BL"], cut["TR"]]
    # case 10: BR and TL positive
    return [cut["BL"], cut["TR"]] if center_positive else [cut["BR"], cut["TL"]]


def extract_nodal_set(f: T2Eigenfunction, n: int = 256) -> NodalCurveSet:
    """Zero-level curves of ``f`` on an ``n x n`` periodic grid."""
    if n < 64:
        raise ValueError("nodal extraction needs n >= 64")
    h = TWO_PI / n
    x = np.arange(n) * h
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    F = f(X1, X2)
    pos = F > 0
    Fr, Fu = np.roll(F, -1, axis=0), np.roll(F, -1, axis=1)
    cross_h = pos != np.roll(pos, -1, axis=0)  # edge (i,j)-(i+1,j)
    cross_v = pos != np.roll(pos, -1, axis=1)  # edge (i,j)-(i,j+1)

    def hid(i, j):
        return (i % n) * n + (j % n)

    def vid(i, j):
        return n * n + (i % n) * n + (j % n)

    def edge_point(e):
        if e < n * n:
            i, j = divmod(e, n)
            t = F[i, j] / (F[i, j] - Fr[i, j])
            return (i + t, float(j))
        i, j = divmod(e - n * n, n)
        t = F[i, j] / (F[i, j] - Fu[i, j])
        return (float(i), j + t)

    case = (
        pos.astype(int)
        + 2 * np.roll(pos, -1, axis=0)
        + 4 * np.roll(np.roll(pos, -1, axis=0), -1, axis=1)
        + 8 * np.roll(pos, -1, axis=1)
    )
    adjacency: dict[int, list[tuple[int, int]]] = {}
    for i, j in zip(*np.nonzero((case != 0) & (case != 15))):
        i, j = int(i), int(j)
        slots = [hid(i, j), vid(i + 1, j), hid(i, j + 1), vid(i, j)]
        crossing = [bool(cross_h[i, j]), bool(cross_v[(i + 1) % n, j]), bool(cross_h[i, (j + 1) % n]), bool(cross_v[i, j])]
        c = int(case[i, j])
        if c in (5, 10):
            center = f((i + 0.5) * h, (j + 0.5) * h)
            pairs = _cut_pairs(c, bool(center > 0))
        else:
            idx = [k for k in range(4) if crossing[k]]
            pairs = [(idx[0], idx[1])]
        cell = i * n + j
        for a, b in pairs:
            adjacency.setdefault(slots[a], []).append((slots[b], cell))
            adjacency.setdefault(slots[b], []).append((slots[a], cell))

    components = []
    visited: set[int] = set()
    for start in adjacency:
        if start in visited:
            continue
        chain, cur, via = [start], start, adjacency[start][0][1]
        visited.add(start)
        nxt = adjacency[start][0][0]
        while nxt != start:
            chain.append(nxt)
            visited.add(nxt)
            links = adjacency[nxt]
            nxt_link = links[0] if links[1][1] == via else links[1]
            cur, via = nxt, nxt_link[1]
            nxt = nxt_link[0]
        raw = np.array([edge_point(e) for e in chain])
        components.append(_component_from_cycle(raw, n))

    warnings = []
    if components:
        margin = min(_point_margin(f, components), _node_margin(f, F, X1, X2, h))
    else:
        margin = float("inf")
        warnings.append("empty nodal set")
    if any(c.closure_error > 1e-6 for c in components):
        warnings.append("component lift is not closed to 1e-6")
    _assign_depths(components)
    irregular = margin < IRREGULAR_THRESHOLD
    if irregular:
        warnings.append("irregular suspected")
    return NodalCurveSet(components, margin, n, irregular, warnings)


def _component_from_cycle(raw: np.ndarray, n: int) -> NodalComponent:
    steps = np.diff(np.vstack([raw, raw[:1]]), axis=0)
    steps -= n * np.round(steps / n)
    lifted = raw[0] + np.vstack([np.zeros(2), np.cumsum(steps[:-1], axis=0)])
    total = steps.sum(axis=0) / n
    homology = tuple(int(round(v)) for v in total)
    closure = float(np.max(np.abs(total - np.round(total))))
    # independent count: signed crossings of the lift with the lines x_a = c + n Z
    closed = np.vstack([lifted, lifted[-1:] + steps[-1:]])
    crossing = []
    for axis in (0, 1):
        c = 0.5 + 1.0 / math.pi  # never on a grid line or edge midpoint
        levels = np.floor((closed[:, axis] - c) / n)
        crossing.append(int(np.sum(np.diff(levels))))
    return NodalComponent(lifted * TWO_PI / n, homology, tuple(crossing), closure)


def _assign_depths(components: list[NodalComponent]) -> None:
    loops = [c for c in components if c.contractible]
    paths = [Path(c.points) for c in loops]
    for inner in loops:
        probe = inner.points[0]
        depth = 0
        for outer, path in zip(loops, paths):
            if outer is inner:
                continue
            centre = outer.points.mean(axis=0)
            shifted = probe - TWO_PI * np.round((probe - centre) / TWO_PI)
            if path.contains_point(shifted):
                depth += 1
        inner.depth = depth


def _point_margin(f, components) -> float:
    pts = np.concatenate([c.points for c in components])
    g1, g2 = f.gradient(pts[:, 0], pts[:, 1])
    return float(np.min(np.hypot(g1, g2)))


def _node_margin(f, F, X1, X2, h) -> float:
    # grid nodes within about one cell of the zero set, |f| <= |grad f| h
    g1, g2 = f.gradient(X1, X2)
    g = np.hypot(g1, g2)
    near = np.abs(F) <= g * h
    return float(np.min(g[near])) if near.any() else float("inf")


def regularity_margin(f: T2Eigenfunction, curves: NodalCurveSet) -> float:
    """Minimum of ``|grad f|`` over the extracted nodal points and the grid nodes next to them."""
    if not curves.components:
        return float("inf")
    n = curves.grid
    h = TWO_PI / n
    x = np.arange(n) * h
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    return min(_point_margin(f, curves.components), _node_margin(f, f(X1, X2), X1, X2, h))


@dataclass
class SearchResult:
    success: bool
    eigenfunction: T2Eigenfunction
    curves: NodalCurveSet
    trials: int


def search_contractible(
    lam: int, trials: int = 100, seed: int = 0, n: int = 256, min_margin: float = 1e-3
) -> SearchResult:
    """Random search for a ``lam``-eigenfunction whose regular, disconnected nodal set has a contractible component."""
    if symmetry_orbits(lam) < 2 or len(lattice_points(lam)) < 4:
        raise ValueError(
            f"eigenvalue {lam} has {len(lattice_points(lam))} lattice modes in "
            f"{symmetry_orbits(lam)} symmetry orbit(s); the search needs at least two orbits"
        )
    rng = np.random.default_rng(seed)
    n_modes = len(lattice_modes(lam))
    best = None
    for trial in range(1, trials + 1):
        f = T2Eigenfunction.from_coefficients(lam, rng.standard_normal((n_modes, 2)))
        curves = extract_nodal_set(f, n)
        score = (curves.margin > min_margin, len(curves.components) >= 2, len(curves.contractible))
        if score[0] and score[1] and score[2] > 0:
            return SearchResult(True, f, curves, trial)
        if best is None or score > best[0]:
            best = (score, f, curves)
    return SearchResult(False, best[1], best[2], trials)


# --- S^2 eigenfunctions ---------------------------------------------------------


@lru_cache(maxsize=None)
def _harmonic_basis(k: int) -> tuple[np.ndarray, ...]:
    """Coefficient arrays ``C[i, j, l]`` of ``u^i v^j w^l`` for a basis of degree-k harmonic polynomials."""
    u, v, w, x = sympy.symbols("u v w x", real=True)
    r2 = u**2 + v**2 + w**2
    basis = []
    for m in range(k + 1):
        q = sympy.Poly(sympy.diff(sympy.legendre(k, x), x, m), x)
        radial = 0
        for (j,), c in q.terms():
            radial += c * w**j * r2 ** ((k - m - j) // 2)
        z = sympy.expand((u + sympy.I * v) ** m)
        parts = [sympy.re(z)] if m == 0 else [sympy.re(z), sympy.im(z)]
        for part in parts:
            poly = sympy.Poly(sympy.expand(part * radial), u, v, w)
            arr = np.zeros((k + 1, k + 1, k + 1))
            for (a, b, c), coef in poly.terms():
                arr[a, b, c] = float(coef)
            arr /= np.max(np.abs(arr))
            basis.append(arr)
    return tuple(basis)


class SphericalHarmonic:
    """Degree-k spherical harmonic on the unit sphere, stored as a harmonic polynomial on R^3."""

    def __init__(self, k: int, coefficients):
        if k < 0:
            raise ValueError("degree must be non-negative")
        basis = _harmonic_basis(k)
        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.shape != (2 * k + 1,):
            raise ValueError(f"degree {k} needs {2 * k + 1} coefficients")
        self.k = k
        self.coefficients = coefficients
        self.poly = sum(c * b for c, b in zip(coefficients, basis))
        self._grad = [np.polynomial.polynomial.polyder(self.poly, axis=a) for a in range(3)]

    @property
    def eigenvalue(self) -> int:
        """Eigenvalue of ``-Laplacian`` on the unit sphere."""
        return self.k * (self.k + 1)

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        return np.polynomial.polynomial.polyval3d(p[..., 0], p[..., 1], p[..., 2], self.poly)

    def ambient_gradient(self, p):
        p = np.asarray(p, dtype=float)
        return np.stack(
            [np.polynomial.polynomial.polyval3d(p[..., 0], p[..., 1], p[..., 2], g) for g in self._grad], axis=-1
        )

    def surface_gradient(self, p):
        p = np.asarray(p, dtype=float)
        g = self.ambient_gradient(p)
        return g - np.sum(g * p, axis=-1, keepdims=True) * p

    def ambient_laplacian(self, p):
        p = np.asarray(p, dtype=float)
        total = 0.0
        for a in range(3):
            d2 = np.polynomial.polynomial.polyder(self.poly, m=2, axis=a)
            total = total + np.polynomial.polynomial.polyval3d(p[..., 0], p[..., 1], p[..., 2], d2)
        return total


def s2_eigenfunction(k: int, coefficients) -> SphericalHarmonic:
    if k < 1:
        raise ValueError("need degree k >= 1 for a nonconstant eigenfunction")
    return SphericalHarmonic(k, coefficients)


def sphere_points(theta, phi) -> np.ndarray:
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


def s2_nodal_regularity(fbar: SphericalHarmonic, n: int = 256) -> float:
    """Min of the surface gradient over zero crossings on a latitude-longitude grid.

    Rows are cell-centred in the polar angle, so neither pole is a grid node.
    Returns ``inf`` for an empty nodal set.
    """
    theta = (np.arange(n) + 0.5) * np.pi / n
    phi = np.arange(2 * n) * np.pi / n
    T, P = np.meshgrid(theta, phi, indexing="ij")
    vals = fbar(sphere_points(T, P))
    margins = []
    for axis, shifted in ((0, vals[1:, :]), (1, np.roll(vals, -1, axis=1))):
        base = vals[:-1, :] if axis == 0 else vals
        mask = (base > 0) != (shifted > 0)
        if not mask.any():
            continue
        t = base[mask] / (base[mask] - shifted[mask])
        if axis == 0:
            th = T[:-1, :][mask] + t * (np.pi / n)
            ph = P[:-1, :][mask]
        else:
            th = T[mask]
            ph = P[mask] + t * (np.pi / n)
        g = fbar.surface_gradient(sphere_points(th, ph))
        margins.append(np.min(np.linalg.norm(g, axis=-1)))
    # a crossing through the pole cap between the first/last rows and the pole itself
    for row in (0, n - 1):
        ring = vals[row]
        pole = np.array([0.0, 0.0, 1.0 if row == 0 else -1.0])
        pv = fbar(pole)
        mask = (ring > 0) != (pv > 0)
        if mask.any():
            margins.append(np.min(np.linalg.norm(fbar.surface_gradient(sphere_points(T[row][mask], P[row][mask])), axis=-1)))
    return float(min(margins)) if margins else float("inf")
