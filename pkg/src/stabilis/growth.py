"""Szasz-type bounds for stable polynomials normalised by ``f(0) = 1``.

Every ``|a|`` entering a constant is replaced by the rational upper bound
``|re a| + |im a|``. That only loosens the bounds, so a reported violation is
always a genuine one. The coefficient bound is compared exactly after
squaring; growth bounds compare a float maximum over the distinguished
boundary of the polydisk (maximum principle) with a relative slack of 1e-10
in favour of the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from gmpy2 import mpq

from .errors import EmptySupportError, PreconditionError
from .multiindex import factorial, power
from .multivariate import SamplingConfig, check_stability
from .poly import MPoly, UPoly, support_extrema
from .scalar import Scalar, rational_str
from .univariate import is_stable_uni, numeric_roots

__all__ = [
    "SZASZ_B1",
    "BoundReport",
    "GrowthConstants",
    "szasz_root_sum_check",
    "szasz_univariate_growth_check",
    "coefficient_bound_check",
    "growth_constants",
    "growth_bound_check",
    "minimal_support_growth_constants",
    "polydisk_max",
    "StirlingBounds",
    "stirling_bounds",
]

# sqrt(2e^2 - e) / (e - 1) to 20 digits
SZASZ_B1 = 2.0210460182654043585
_SZASZ_B1_TEXT = "2.0210460182654043585"

_RTOL = 1e-10


def _numeric(x: float) -> dict:
    return {"numeric": "%.17g" % (float(x) + 0.0)}


@dataclass
class BoundReport:
    """``value <= bound`` for a named inequality, with the slack used."""

    name: str
    holds: bool
    value: float
    bound: float
    details: dict = field(default_factory=dict)
    exact: bool = False

    @property
    def margin(self) -> str:
        return f"{_fmt(self.value)} ≤ {_fmt(self.bound)}" if self.holds else f"{_fmt(self.value)} > {_fmt(self.bound)}"

    def to_json(self):
        out = {
            "check": self.name,
            "holds": self.holds,
            "value": _numeric(self.value),
            "bound": _numeric(self.bound),
            "margin": self.margin,
            "exact_comparison": self.exact,
        }
        out.update(self.details)
        return out


def _fmt(x) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf"
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return "%.6g" % x


def _le(value: float, bound: float) -> bool:
    return value <= bound * (1 + _RTOL) + _RTOL * 1e-300


def _normalised_uni(p) -> UPoly:
    if isinstance(p, MPoly):
        if p.nvars != 1:
            raise PreconditionError("a univariate polynomial is required")
        p = UPoly.from_mpoly(p)
    elif not isinstance(p, UPoly):
        p = UPoly(p)
    if p.is_zero() or p.coeffs[0] != Scalar(1):
        raise PreconditionError("constant term must be 1")
    if not is_stable_uni(p).stable:
        raise PreconditionError("polynomial is not stable")
    return p


def _coef(p: UPoly, k: int) -> Scalar:
    return p.coeffs[k] if k < len(p.coeffs) else Scalar(0)


def szasz_root_sum_check(p) -> BoundReport:
    """``sum |xi_j|^2 <= 3|a_1|^2 + 2|a_2|`` for ``p = prod (1 + xi_j z)``."""
    p = _normalised_uni(p)
    a1, a2 = _coef(p, 1), _coef(p, 2)
    bound = 3 * a1.abs_bound() ** 2 + 2 * a2.abs_bound()
    if p.degree <= 0:
        return BoundReport("szasz-root-sum", True, 0.0, float(bound), exact=True)
    roots = numeric_roots(p, precision=50).roots
    total = sum(abs(1 / r) ** 2 for r in roots)
    return BoundReport("szasz-root-sum", _le(total, float(bound)), float(total), float(bound), {"bound_exact": rational_str(bound)})


def _circle(r: float, points: int):
    return r * np.exp(2j * np.pi * np.arange(points) / points)


def szasz_univariate_growth_check(p, r, points: int = 256) -> BoundReport:
    """``max_{|z| <= r} |p(z)| <= exp(r|a_1| + 3r^2|a_1|^2 + 3r^2|a_2|)``."""
    p = _normalised_uni(p)
    r = float(r)
    a1, a2 = float(_coef(p, 1).abs_bound()), float(_coef(p, 2).abs_bound())
    expo = r * a1 + 3 * r * r * a1 * a1 + 3 * r * r * a2
    z = _circle(r, points)
    coeffs = [complex(c) for c in reversed(p.coeffs)]
    mx = float(np.max(np.abs(np.polyval(coeffs, z)))) if r > 0 else 1.0
    bound = math.exp(expo) if expo < 700 else math.inf
    return BoundReport("szasz-growth", _le(mx, bound), mx, bound, {"radius": _numeric(r), "grid_points": points, "exponent": _numeric(expo)})


def _check_normalised(f: MPoly, cfg, check: bool):
    if f.constant_term() != Scalar(1):
        raise PreconditionError("constant term must be 1")
    if check:
        v = check_stability(f, cfg or SamplingConfig())
        if v.refuted:
            raise PreconditionError("polynomial is not stable")


def _first_second(f: MPoly):
    """``(sum_i |a(e_i)|, sum_{i,j} |a(e_i + e_j)|)`` with rational abs bounds; ordered pairs."""
    n = f.nvars
    s1 = mpq(0)
    s2 = mpq(0)
    for i in range(n):
        e = [0] * n
        e[i] = 1
        s1 += f.coeff(tuple(e)).abs_bound()
    for i in range(n):
        for j in range(n):
            e = [0] * n
            e[i] += 1
            e[j] += 1
            s2 += f.coeff(tuple(e)).abs_bound()
    return s1, s2


def coefficient_bound_check(f: MPoly, cfg: SamplingConfig | None = None, check: bool = True) -> BoundReport:
    """``|a(b)| <= |b|^(-|b|/2) b^b / b! A^|b|`` for every ``b`` in the support.

    Compared exactly after squaring: ``|a(b)|^2 |b|^|b| (b!)^2 <= (b^b)^2 (A^2)^|b|``.
    """
    _check_normalised(f, cfg, check)
    s1, s2 = _first_second(f)
    A2 = 3 * s1 * s1 + 2 * s2
    worst = None
    ok = True
    for beta, c in f.terms.items():
        k = sum(beta)
        if k == 0:
            continue
        lhs = c.abs2() * mpq(k) ** k * factorial(beta) ** 2
        rhs = mpq(power(beta, beta)) ** 2 * A2**k
        if lhs > rhs:
            ok = False
        ratio = float(lhs / rhs) if rhs else math.inf
        if worst is None or ratio > worst[0]:
            worst = (ratio, beta, c)
    if worst is None:
        return BoundReport("coefficient-bound", True, 0.0, 0.0, {"A2": rational_str(A2)}, exact=True)
    ratio, beta, c = worst
    k = sum(beta)
    bound = math.sqrt(float(power(beta, beta)) ** 2 / float(factorial(beta)) ** 2 * float(A2) ** k / float(k) ** k)
    details = {"A2": rational_str(A2), "worst_monomial": list(beta), "worst_coefficient": str(c)}
    return BoundReport("coefficient-bound", ok, math.sqrt(float(c.abs2())), bound, details, exact=True)


@dataclass
class GrowthConstants:
    """``max_{|z_i| <= r} |f| <= B exp(C r^2)``; ``C = C_over_e2 * e^2`` when that is set."""

    B: float
    C: float
    A2: object = None
    C_over_e2: object = None
    notes: list = field(default_factory=list)

    def bound(self, r) -> float:
        x = self.C * float(r) ** 2
        return self.B * math.exp(x) if x < 700 else math.inf

    def to_json(self):
        out = {"B": _numeric(self.B), "C": _numeric(self.C)}
        if self.A2 is not None:
            out["A2"] = rational_str(self.A2)
        if self.C_over_e2 is not None:
            out["C_over_e2"] = rational_str(self.C_over_e2)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def szasz_B(n: int) -> float:
    return 2.0 ** (n - 1) * SZASZ_B1


def growth_constants(f: MPoly, cfg: SamplingConfig | None = None, check: bool = True) -> GrowthConstants:
    """``B = 2^(n-1) sqrt(2e^2-e)/(e-1)``, ``C = 6e^2 (sum|a(e_i)|)^2 + 4e^2 sum|a(e_i+e_j)|``."""
    _check_normalised(f, cfg, check)
    s1, s2 = _first_second(f)
    ce = 6 * s1 * s1 + 4 * s2
    C = float(ce) * math.e**2
    return GrowthConstants(szasz_B(f.nvars), C, 3 * s1 * s1 + 2 * s2, ce, [f"B = 2^{f.nvars - 1} * {_SZASZ_B1_TEXT}"])


def polydisk_max(f: MPoly, r, points: int | None = None, budget: int = 1 << 16) -> float:
    """Max of ``|f|`` over a grid on the torus ``|z_i| = r``."""
    n = f.nvars
    r = float(r)
    if f.is_zero():
        return 0.0
    if n == 0 or r == 0:
        return abs(complex(f.constant_term()))
    if points is None:
        points = max(8, min(64, int(round(budget ** (1.0 / n)))))
    circ = _circle(r, points)
    grids = np.meshgrid(*([circ] * n), indexing="ij")
    val = np.zeros(grids[0].shape, dtype=complex)
    for alpha, c in f.terms.items():
        term = np.full(grids[0].shape, complex(c))
        for i, e in enumerate(alpha):
            if e:
                term = term * grids[i] ** e
        val += term
    return float(np.max(np.abs(val)))


def growth_bound_check(f: MPoly, r, constants: GrowthConstants | None = None, cfg: SamplingConfig | None = None, points: int | None = None) -> BoundReport:
    """Polydisk maximum at radius ``r`` against ``B exp(C r^2)``."""
    if constants is None:
        constants = growth_constants(f, cfg)
    mx = polydisk_max(f, r, points)
    bound = constants.bound(r)
    return BoundReport("growth-bound", _le(mx, bound), mx, bound, {"radius": _numeric(float(r)), "constants": constants.to_json()})


def minimal_support_growth_constants(f: MPoly, cfg: SamplingConfig | None = None, check: bool = True) -> GrowthConstants:
    """Constants for stable ``f`` with ``f(0)`` possibly zero.

    Recursion: ``f(0) != 0`` scales the normalised constants by ``|f(0)|``;
    in one variable ``f = z^k g`` uses ``r^k <= e^(k r^2)``; otherwise, with
    ``a`` a minimal support element of largest size and ``i`` its lowest
    nonzero index, ``|f|_r <= |f(z_i = 0)|_r + r |df/dz_i|_r`` gives
    ``C = max(C1, C2 + 1)`` and ``B = 2 max(B1, B2)``. Each step lowers the
    number of variables or the total degree, so the recursion ends.
    """
    if f.is_zero():
        raise EmptySupportError("growth constants of the zero polynomial")
    if check:
        v = check_stability(f, cfg or SamplingConfig())
        if v.refuted:
            raise PreconditionError("polynomial is not stable")
    return _ms_constants(f)


def _ms_constants(f: MPoly) -> GrowthConstants:
    c0 = f.constant_term()
    if c0 == Scalar(1):
        return growth_constants(f, check=False)
    if not c0.is_zero():
        g = growth_constants(f.scale(c0.inverse()), check=False)
        scale = math.sqrt(float(c0.abs2()))
        return GrowthConstants(g.B * scale, g.C, g.A2, g.C_over_e2, [f"f(0) = {c0}"])
    if f.nvars == 1:
        k = min(a[0] for a in f.support())
        g = f.map_exponents(1, lambda a: (a[0] - k,))
        inner = _ms_constants(g)
        return GrowthConstants(inner.B, inner.C + k, None, None, [f"factor z^{k}", *inner.notes])
    mins = support_extrema(f).minimal
    k = max(sum(a) for a in mins)
    alpha = sorted((a for a in mins if sum(a) == k), reverse=True)[0]
    i = next(j for j, e in enumerate(alpha) if e > 0)
    f0 = MPoly(f.nvars, {a: c for a, c in f.terms.items() if a[i] == 0}).drop_var(i)
    df = f.derivative(i)
    g2 = _ms_constants(df)
    B2, C2 = g2.B, g2.C
    if f0.is_zero():
        B1, C1 = 0.0, 0.0
    else:
        g1 = _ms_constants(f0)
        B1, C1 = g1.B, g1.C
    return GrowthConstants(2 * max(B1, B2), max(C1, C2 + 1), notes=[f"split on z{i + 1}"])


@dataclass(frozen=True)
class StirlingBounds:
    n: int
    lower: float
    ratio: object
    upper: float
    holds: bool

    def to_json(self):
        return {"n": self.n, "lower": _numeric(self.lower), "ratio": rational_str(self.ratio), "upper": _numeric(self.upper), "holds": self.holds}


def stirling_bounds(n: int) -> StirlingBounds:
    """``e^-n <= n!/n^n <= (en+1) e^-n``, the middle term exact."""
    if n < 0:
        raise ValueError("n must be non-negative")
    ratio = mpq(math.factorial(n), n**n) if n else mpq(1)
    with mpmath.workdps(50):
        lo = mpmath.e ** (-n)
        hi = (mpmath.e * n + 1) * mpmath.e ** (-n)
        mid = mpmath.mpf(int(ratio.numerator)) / int(ratio.denominator)
        holds = bool(lo <= mid <= hi)
        lower, upper = float(lo), float(hi)
    if not holds:
        raise AssertionError(f"Stirling-type bounds fail at n={n}")
    return StirlingBounds(n, lower, ratio, upper, holds)
