"""Curl eigenfields and Beltrami fields on the flat torus T^3 = R^3 / (2 pi Z)^3.

Trigonometric fields are stored as mode lists with exact (sympy) coefficients so
that curls and eigen-identities are checked symbolically; floats appear only when
a field is evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Callable, Sequence

import numpy as np
import sympy

from .manifold import TWO_PI, curl_r3_numeric, torus_grid
from .nodal import T2Eigenfunction


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _exact(x):
    if isinstance(x, sympy.Basic):
        return x
    if isinstance(x, Fraction):
        return sympy.Rational(x.numerator, x.denominator)
    if isinstance(x, float):
        # exact binary value of the double
        return sympy.Rational(x)
    return sympy.sympify(x)


@dataclass(frozen=True)
class WaveSpec:
    """Plane-wave data: integer wave vector ``k`` and amplitude ``b`` with ``b . k = 0`` exactly."""

    k: tuple[int, int, int]
    b: tuple[Fraction, Fraction, Fraction]

    def __init__(self, k: Sequence[int], b: Sequence):
        k = tuple(int(x) for x in k)
        if len(k) != 3 or not any(k):
            raise ValueError("k must be a nonzero integer 3-vector")
        b = tuple(Fraction(x) for x in b)
        if len(b) != 3 or not any(b):
            raise ValueError("b must be a nonzero 3-vector")
        scale = lcm(*(x.denominator for x in b))
        ib = [int(x * scale) for x in b]
        if sum(x * y for x, y in zip(ib, k)) != 0:
            raise ValueError(f"b = {b} is not perpendicular to k = {k}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "b", b)

    @property
    def k_norm2(self) -> int:
        return sum(x * x for x in self.k)

    @classmethod
    def parse(cls, k: str, b: str) -> "WaveSpec":
        return cls([int(x) for x in k.split(",")], [Fraction(x) for x in b.split(",")])


@dataclass(frozen=True)
class TorusMode:
    """``cos(k . x) a + sin(k . x) c`` with 3-vector coefficients ``a``, ``c``."""

    k: tuple[int, int, int]
    cos: tuple
    sin: tuple


def _canonical(k):
    # first nonzero entry positive; cos is even and sin odd in k
    for x in k:
        if x != 0:
            return (k, 1) if x > 0 else (tuple(-y for y in k), -1)
    return k, 1


class TorusField:
    """Finite Fourier sum ``sum_j cos(k_j . x) a_j + sin(k_j . x) c_j`` on T^3."""

    def __init__(self, modes: Sequence[TorusMode], name: str = "", lam=None):
        merged: dict[tuple, list] = {}
        for mode in modes:
            k, sign = _canonical(tuple(int(x) for x in mode.k))
            a = [_exact(x) for x in mode.cos]
            c = [sign * _exact(x) for x in mode.sin]
            if k == (0, 0, 0):
                c = [sympy.Integer(0)] * 3
            if k in merged:
                merged[k] = [[x + y for x, y in zip(merged[k][0], a)], [x + y for x, y in zip(merged[k][1], c)]]
            else:
                merged[k] = [a, c]
        self.modes = tuple(
            TorusMode(k, tuple(a), tuple(c))
            for k, (a, c) in sorted(merged.items())
        )
        self.name = name
        # eigenvalue stored through its square so irrational |k| never rounds
        self.lam = lam

    @cached_property
    def _arrays(self):
        K = np.array([m.k for m in self.modes], dtype=float).reshape(-1, 3)
        A = np.array([[float(x) for x in m.cos] for m in self.modes]).reshape(-1, 3)
        C = np.array([[float(x) for x in m.sin] for m in self.modes]).reshape(-1, 3)
        return K, A, C

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        K, A, C = self._arrays
        phase = x @ K.T
        return np.cos(phase) @ A + np.sin(phase) @ C

    def jacobian(self, x) -> np.ndarray:
        """``J[..., i, j] = dV_i / dx_j``."""
        x = np.asarray(x, dtype=float)
        K, A, C = self._arrays
        phase = x @ K.T
        return np.einsum("...n,ni,nj->...ij", -np.sin(phase), A, K) + np.einsum(
            "...n,ni,nj->...ij", np.cos(phase), C, K
        )

    def curl(self) -> "TorusField":
        """Exact curl: ``a -> k x c`` on cosines and ``c -> -k x a`` on sines."""
        out = []
        for m in self.modes:
            kc = _cross(m.k, m.sin)
            ka = _cross(m.k, m.cos)
            out.append(TorusMode(m.k, kc, tuple(-x for x in ka)))
        return TorusField(out, f"curl {self.name}")

    def curl_at(self, x) -> np.ndarray:
        return self.curl()(x)

    def divergence_free(self) -> bool:
        return all(
            sympy.simplify(sum(k * a for k, a in zip(m.k, vec))) == 0 for m in self.modes for vec in (m.cos, m.sin)
        )

    def scaled(self, c) -> "TorusField":
        c = _exact(c)
        return TorusField(
            [TorusMode(m.k, tuple(c * x for x in m.cos), tuple(c * x for x in m.sin)) for m in self.modes],
            f"{c}*{self.name}",
        )

    def __add__(self, other: "TorusField") -> "TorusField":
        return TorusField(self.modes + other.modes, f"{self.name}+{other.name}")

    def __sub__(self, other: "TorusField") -> "TorusField":
        return self + other.scaled(-1)

    def is_zero(self) -> bool:
        return all(sympy.simplify(x) == 0 for m in self.modes for x in m.cos + m.sin)

    def equals(self, other: "TorusField") -> bool:
        """Exact identity of the two trigonometric sums."""
        return (self - other).is_zero()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "modes": [{"k": list(m.k), "cos": [str(x) for x in m.cos], "sin": [str(x) for x in m.sin]}
                      for m in self.modes],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TorusField":
        modes = [
            TorusMode(tuple(m["k"]), tuple(sympy.sympify(x) for x in m["cos"]),
                      tuple(sympy.sympify(x) for x in m["sin"]))
            for m in data["modes"]
        ]
        return cls(modes, data.get("name", ""))


def build_Vk(spec: WaveSpec) -> TorusField:
    """``cos(k . x) b + |k|^{-1} sin(k . x) b x k``, a curl eigenfield with eigenvalue ``|k|``."""
    b = tuple(_exact(x) for x in spec.b)
    knorm = sympy.sqrt(spec.k_norm2)
    bxk = tuple(x / knorm for x in _cross(b, spec.k))
    return TorusField([TorusMode(spec.k, b, bxk)], f"V_k(k={spec.k})", lam=knorm)


def eta_m(m: int) -> TorusField:
    """Dual field of ``sin(m x3) dx1 + cos(m x3) dx2``."""
    if m == 0:
        raise ValueError("m must be nonzero")
    # equals build_Vk with k = (0, 0, m), b = (0, 1, 0) when m > 0; eigenvalue m for either sign
    return TorusField([TorusMode((0, 0, m), (0, 1, 0), (1, 0, 0))], f"eta_{m}", lam=sympy.Integer(m))


def collinear_pair(m: int) -> tuple[TorusField, TorusField]:
    """``sin(m x3) dx1 + cos(m x3) dx2`` and ``-sin(m x2) dx1 + cos(m x2) dx3``: unit fields, both eigenvalue m."""
    if m <= 0:
        raise ValueError("m must be positive")
    W = TorusField([TorusMode((0, m, 0), (0, 0, 1), (-1, 0, 0))], f"W_{m}", lam=sympy.Integer(m))
    return eta_m(m), W


def build_from_t2_eigenfunction(f: T2Eigenfunction, Lambda: int | None = None) -> TorusField:
    """``df/dx2 d/dx1 - df/dx1 d/dx2 + sqrt(Lambda) f d/dx3``."""
    Lambda = f.eigenvalue if Lambda is None else int(Lambda)
    if Lambda <= 0:
        raise ValueError("eigenvalue must be positive")
    for mode in f.modes:
        if mode.k[0] ** 2 + mode.k[1] ** 2 != Lambda:
            raise ValueError(f"mode {mode.k} is not in the {Lambda}-eigenspace")
    lam = sympy.sqrt(Lambda)
    modes = []
    for mode in f.modes:
        k1, k2 = mode.k
        c, s = _exact(mode.cos), _exact(mode.sin)
        modes.append(TorusMode((k1, k2, 0), (s * k2, -s * k1, lam * c), (-c * k2, c * k1, lam * s)))
    field = TorusField(modes, f"ansatz(Lambda={Lambda})", lam=lam)
    if field.is_zero():
        raise ValueError("eigenfunction gives the zero field")
    field.t2 = f
    return field


def is_eigenfield(V: TorusField, lam) -> bool:
    return V.curl().equals(V.scaled(lam))


# --- Beltrami fields with nonconstant factor ----------------------------------------


class ProfileField:
    """``cos(F(x3) - pi/4) d/dx1 + sin(F(x3) - pi/4) d/dx2``; ``curl V = -F'(x3) V``."""

    def __init__(self, F: Callable, dF: Callable, name: str = ""):
        self.F = F
        self.dF = dF
        self.name = name

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        g = self.F(x[..., 2]) - np.pi / 4
        return np.stack([np.cos(g), np.sin(g), np.zeros_like(g)], axis=-1)

    def factor(self, x):
        return -self.dF(np.asarray(x, dtype=float)[..., 2])

    def curl_at(self, x):
        return self.factor(x)[..., None] * self(x)


def build_nonconstant_example(F="-2*x3 + cos(x3)", n_check: int = 4096) -> tuple[ProfileField, Callable]:
    """Unit Beltrami field with factor ``f = -F'``; ``F`` is a sympy expression in ``x3``."""
    x3 = sympy.Symbol("x3", real=True)
    expr = sympy.sympify(F, locals={"x3": x3})
    dexpr = sympy.diff(expr, x3)
    Ff = sympy.lambdify(x3, expr, "numpy")
    dFf = sympy.lambdify(x3, dexpr, "numpy")

    def vec(fn):
        return lambda t: np.broadcast_to(np.asarray(fn(t), dtype=float), np.shape(t)).copy()

    Ff, dFf = vec(Ff), vec(dFf)
    t = np.linspace(0.0, TWO_PI, n_check, endpoint=False)
    if np.max(np.abs(dFf(t + TWO_PI) - dFf(t))) > 1e-12:
        raise ValueError("F' is not 2pi-periodic")
    jump = (Ff(t + TWO_PI) - Ff(t)) / TWO_PI
    if np.max(np.abs(jump - np.round(jump))) > 1e-10:
        raise ValueError("F(x3 + 2pi) - F(x3) is not a multiple of 2pi; the field would not descend to T^3")
    if np.max(dFf(t)) >= 0:
        raise ValueError("F' must be strictly negative")
    field = ProfileField(Ff, dFf, f"profile({expr})")
    field.expr = expr
    return field, field.factor


def curl_t3(V, p, h: float = 1e-3) -> np.ndarray:
    """Curl on T^3: exact for trigonometric / profile fields, central differences otherwise."""
    p = np.asarray(p, dtype=float)
    if hasattr(V, "curl_at"):
        return V.curl_at(p)
    return curl_r3_numeric(V, p, h)


# --- diagnostics --------------------------------------------------------------


def energy_density(V: TorusField, x) -> np.ndarray:
    """``sum |grad phi_i|^2`` of the Gauss map ``phi = V/|V|``; uses ``|V|`` constant for V_k."""
    J = V.jacobian(x)
    n2 = np.sum(V(x) ** 2, axis=-1)
    return np.sum(J**2, axis=(-1, -2)) / n2


def gauss_map_normal(spec: WaveSpec, V: TorusField, n: int = 16) -> float:
    """Max of ``|k . V(x)|`` on a grid; zero because the image lies in a great circle."""
    x = torus_grid(n)
    return float(np.max(np.abs(V(x) @ np.array(spec.k, dtype=float))))


def min_norm_t3(V, n: int = 64) -> tuple[float, np.ndarray]:
    x = torus_grid(n)
    norms = np.linalg.norm(V(x), axis=-1)
    idx = np.unravel_index(np.argmin(norms), norms.shape)
    return float(norms[idx]), x[idx]


def sample_field(V, n: int) -> np.ndarray:
    """Rows ``(x1, x2, x3, A, B, C)`` on an ``n^3`` grid."""
    x = torus_grid(n).reshape(-1, 3)
    return np.column_stack([x, V(x)])
