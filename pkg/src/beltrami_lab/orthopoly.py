"""Jacobi polynomials P_n^(1,1), the coefficient pairs (F_m, G_m) and their root structure.

Coefficients are kept as exact ``Fraction`` objects; floats only appear at evaluation.
The variable of every :class:`Polynomial` built here is ``z = cos^2 s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np


class MultipleRootWarning(RuntimeWarning):
    pass


class Polynomial:
    """Univariate polynomial with exact rational coefficients, ascending degree."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable = (0,)):
        coeffs = [c if isinstance(c, Fraction) else Fraction(c) for c in coefficients]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients: tuple[Fraction, ...] = tuple(coeffs) if coeffs else (Fraction(0),)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def linear(cls, a, b) -> "Polynomial":
        """``a + b z``."""
        return cls([a, b])

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return len(self.coefficients) == 1 and self.coefficients[0] == 0

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        out = np.zeros_like(z)
        for c in reversed(self.coefficients):
            out = out * z + float(c)
        return out if out.ndim else float(out)

    def exact(self, z) -> Fraction:
        z = Fraction(z)
        out = Fraction(0)
        for c in reversed(self.coefficients):
            out = out * z + c
        return out

    def sign(self, z) -> int:
        """Exact sign at a float or rational point; immune to cancellation."""
        v = self.exact(z)
        return (v > 0) - (v < 0)

    def deriv(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coefficients)][1:] or [0])

    def compose(self, inner: "Polynomial") -> "Polynomial":
        out = Polynomial()
        for c in reversed(self.coefficients):
            out = out * inner + Polynomial.constant(c)
        return out

    def floats(self) -> np.ndarray:
        return np.array([float(c) for c in self.coefficients])

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (Fraction(0),) * (n - len(self.coefficients))
        b = other.coefficients + (Fraction(0),) * (n - len(other.coefficients))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coefficients)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = Fraction(scalar)
        return Polynomial(c / scalar for c in self.coefficients)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return isinstance(other, Polynomial) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coefficients]})"


def _as_poly(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial.constant(x)


Z = Polynomial.linear(0, 1)
ONE_MINUS_2Z = Polynomial.linear(1, -2)
TWO_Z_MINUS_1 = Polynomial.linear(-1, 2)


@lru_cache(maxsize=None)
def jacobi11_poly(n: int) -> Polynomial:
    """``P_n^(1,1)(x)`` as an exact polynomial in x, normalised by ``P_n(1) = n + 1``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n == 0:
        return Polynomial.constant(1)
    if n == 1:
        return Polynomial.linear(0, 2)
    x = Polynomial.linear(0, 1)
    # three-term recurrence specialised to alpha = beta = 1
    p1, p2 = jacobi11_poly(n - 1), jacobi11_poly(n - 2)
    return (x * p1 * (2 * n + 1) - p2 * n) * Fraction(n + 1, n * (n + 2))


def jacobi11(n: int, x):
    """Evaluate ``P_n^(1,1)`` by the three-term recurrence in floating point."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    p_prev, p = np.ones_like(x), 2.0 * x
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    for k in range(2, n + 1):
        p_prev, p = p, (k + 1) * ((2 * k + 1) * x * p - k * p_prev) / (k * (k + 2))
    return p if p.ndim else float(p)


def jacobi11_with_derivative(n: int, x):
    """``(P_n(x), P_n'(x))`` by differentiating the recurrence alongside the values."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    p_prev, p = np.ones_like(x), 2.0 * x
    d_prev, d = np.zeros_like(x), np.full_like(x, 2.0)
    if n == 0:
        return p_prev, d_prev
    for k in range(2, n + 1):
        c = (k + 1) / (k * (k + 2))
        p_prev, p, d_prev, d = (
            p,
            c * ((2 * k + 1) * x * p - k * p_prev),
            d,
            c * ((2 * k + 1) * (p + x * d) - k * d_prev),
        )
    return p, d


def gegenbauer32(n: int, x):
    """Gegenbauer ``C_n^(3/2)`` from its generating function ``(1 - 2xt + t^2)^(-3/2)``."""
    x = np.asarray(x, dtype=float)
    c_prev, c = np.ones_like(x), 3.0 * x
    if n == 0:
        return c_prev
    for k in range(2, n + 1):
        # k C_k = 2(k + 1/2) x C_{k-1} - (k + 1) C_{k-2}
        c_prev, c = c, (2 * (k + 0.5) * x * c - (k + 1) * c_prev) / k
    return c


@dataclass(frozen=True)
class EigenPair:
    m: int
    F: Polynomial
    G: Polynomial


@lru_cache(maxsize=None)
def eigenpair(m: int) -> EigenPair:
    """``F_m(z) = P_{m-1}(1-2z)/m`` and ``G_m(z) = P_{m-2}(1-2z)/(m+1)``."""
    if m < 2:
        raise ValueError(f"eigenpair needs m >= 2, got {m}")
    F = jacobi11_poly(m - 1).compose(ONE_MINUS_2Z) / m
    G = jacobi11_poly(m - 2).compose(ONE_MINUS_2Z) / (m + 1)
    return EigenPair(m, F, G)


def char_poly(m: int) -> Polynomial:
    """``F_m(z) + (2z - 1) G_m(z)``, whose roots in (0, 1) give the characteristic tori."""
    pair = eigenpair(m)
    return pair.F + TWO_Z_MINUS_1 * pair.G


def rotsyst_residuals(F: Polynomial, G: Polynomial, lam) -> tuple[Polynomial, Polynomial]:
    """Residuals of the axisymmetric eigen-system; both vanish identically for an eigenpair."""
    dF, dG = F.deriv(), G.deriv()
    r1 = TWO_Z_MINUS_1 * dF + 2 * F + dG - lam * F
    r2 = TWO_Z_MINUS_1 * dG + 2 * G + dF + lam * G
    return r1, r2


def hypergeometric_residual(F: Polynomial, lam) -> Polynomial:
    z_zm1 = Polynomial([0, -1, 1])
    lam = Fraction(lam)
    return 4 * z_zm1 * F.deriv().deriv() + 8 * TWO_Z_MINUS_1 * F.deriv() - (lam + 4) * (lam - 2) * F


# --- root isolation -------------------------------------------------------------


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.deriv()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        q = _poly_rem(seq[-2], seq[-1])
        if q.is_zero():
            break
        seq.append(-q)
    return seq


def _poly_rem(a: Polynomial, b: Polynomial) -> Polynomial:
    rem = list(a.coefficients)
    db, lead = b.degree, b.coefficients[-1]
    while len(rem) - 1 >= db and any(rem):
        shift = len(rem) - 1 - db
        factor = rem[-1] / lead
        for i, c in enumerate(b.coefficients):
            rem[shift + i] -= factor * c
        rem.pop()
    return Polynomial(rem or [0])


def sturm_count(p: Polynomial, a, b) -> int:
    """Number of distinct real roots in ``(a, b]`` by Sturm's theorem (exact arithmetic)."""
    seq = sturm_sequence(p)

    def changes(x):
        signs = [q.exact(x) for q in seq]
        signs = [v for v in signs if v != 0]
        return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))

    return changes(Fraction(a)) - changes(Fraction(b))


def _bisect(p: Polynomial, lo: float, hi: float, tol: float) -> float:
    # exact signs: float Horner loses every digit near roots of high-degree p
    slo = p.sign(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        sm = p.sign(mid)
        if sm == 0:
            return mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def isolate_roots(p: Polynomial, a: float, b: float, tol: float = 1e-13) -> list[float]:
    """Real roots of ``p`` in the open interval ``(a, b)``.

    Exact sign changes are bracketed on a uniform grid of ``10 * deg`` cells and
    bisected to ``tol``.  The bracket count is cross-checked against an exact Sturm count; on
    disagreement the grid is refined, and a persistent mismatch is reported as a
    possible multiple root.
    """
    if a >= b:
        raise ValueError("need a < b")
    if p.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    if p.degree == 0:
        return []
    expected = sturm_count(p, a, b) - (1 if p.exact(b) == 0 else 0)
    cells = 10 * p.degree
    for _ in range(12):
        xs = np.linspace(a, b, cells + 1)
        signs = [p.sign(float(x)) for x in xs]
        roots = []
        for i in range(cells):
            if i > 0 and signs[i] == 0:
                roots.append(float(xs[i]))
            elif signs[i] * signs[i + 1] < 0:
                roots.append(float(_bisect(p, xs[i], xs[i + 1], tol)))
        if len(roots) == expected:
            return sorted(roots)
        cells *= 4
    import warnings

    warnings.warn(
        f"possible multiple root: {len(roots)} sign changes vs {expected} distinct roots in ({a}, {b})",
        MultipleRootWarning,
    )
    return sorted(roots)


def check_interlacing(m: int, tol: float = 1e-13) -> tuple[bool, float]:
    """Whether the roots of ``F_m`` and ``G_m`` in [0, 1] strictly separate each other.

    Returns the verdict and the minimum distance between an F-root and a G-root.
    """
    pair = eigenpair(m)
    rf = isolate_roots(pair.F, 0.0, 1.0, tol)
    rg = isolate_roots(pair.G, 0.0, 1.0, tol)
    if not rg:
        return True, float("inf")
    margin = min(abs(x - y) for x in rf for y in rg)
    ok = margin > 0 and len(rf) == len(rg) + 1
    for lo, hi in zip(rg, rg[1:]):
        ok &= sum(1 for x in rf if lo < x < hi) == 1
    return bool(ok), float(margin)


def turan_margin(m: int, n_grid: int = 1000) -> float:
    """Minimum over open (-1, 1) of ``P_{m-1}^2 - m^2/(m^2-1) P_m P_{m-2}``."""
    if m < 2:
        raise ValueError("m >= 2 required")
    w = np.linspace(-1.0, 1.0, n_grid + 2)[1:-1]
    gap = jacobi11(m - 1, w) ** 2 - (m * m / (m * m - 1.0)) * jacobi11(m, w) * jacobi11(m - 2, w)
    return float(np.min(gap))


def sign_changes(values: Sequence[float]) -> int:
    v = [x for x in values if x != 0]
    return sum(1 for a, b in zip(v, v[1:]) if (a > 0) != (b > 0))
