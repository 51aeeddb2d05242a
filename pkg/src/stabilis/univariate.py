"""Exact univariate decisions: Sturm counts, real-rootedness, interlacing,
proper position and upper half-plane stability.

Real polynomials are handled internally as lists of ``mpq`` (lowest degree
first, no trailing zeros). Public functions also accept :class:`UPoly` values
and one-variable :class:`MPoly` values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from .errors import EmptySupportError, PreconditionError
from .poly import MPoly, UPoly
from .scalar import Scalar, rational_str, to_rational

__all__ = [
    "RootIsolation",
    "UniVerdict",
    "UniWitness",
    "sturm_sequence",
    "sturm_count",
    "isolate_real_roots",
    "is_real_rooted",
    "square_free_part",
    "square_free_decomposition",
    "wronskian_sign_on_R",
    "interlace",
    "proper_position_uni",
    "upper_root_count",
    "is_stable_uni",
    "is_strictly_stable_uni",
    "numeric_roots",
    "NumericRoots",
    "oracle_is_stable",
]

STABLE = "Stable"
NOT_STABLE = "NotStable"
ZERO_POLY = "ZeroPolynomial"

_ZERO = mpq(0)
_ONE = mpq(1)


# ---------------------------------------------------------------------------
# dense rational kernels


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _deg(a):
    return len(a) - 1


def _add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, v in enumerate(b):
        out[k] += v
    return _trim(out)


def _sub(a, b):
    out = list(a) + [_ZERO] * max(0, len(b) - len(a))
    for k, v in enumerate(b):
        out[k] -= v
    return _trim(out)


def _mul(a, b):
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _scale(a, c):
    if c == 0:
        return []
    return [c * x for x in a]


def _deriv(a):
    return _trim([a[k] * k for k in range(1, len(a))])


def _divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = _deg(b)
    lb = b[-1]
    if len(a) <= db:
        return [], _trim(a)
    q = [_ZERO] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c == 0:
            continue
        c = c / lb
        q[k - db] = c
        for j in range(db + 1):
            a[k - db + j] -= c * b[j]
    return _trim(q), _trim(a[:db])


def _rem(a, b):
    return _divmod(a, b)[1]


def _monic(a):
    if not a:
        return a
    lc = a[-1]
    return [x / lc for x in a]


def _gcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _rem(a, b)
    return _monic(a)


def _eval(a, x):
    acc = _ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _sign(x):
    return (x > 0) - (x < 0)


def _sign_at_inf(a, plus: bool):
    s = _sign(a[-1])
    if not plus and _deg(a) % 2:
        s = -s
    return s


def _variations(signs):
    v = 0
    last = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


def _real_coeffs(p):
    """Coerce a real UPoly / MPoly / sequence into a trimmed ``mpq`` list."""
    if isinstance(p, MPoly):
        p = UPoly.from_mpoly(p)
    if isinstance(p, UPoly):
        re, im = p.parts()
        if any(x != 0 for x in im):
            raise PreconditionError("expected a real polynomial")
        return _trim(list(re))
    out = []
    for c in p:
        if isinstance(c, Scalar):
            if c.im != 0:
                raise PreconditionError("expected a real polynomial")
            out.append(c.re)
        else:
            out.append(to_rational(c))
    return _trim(out)


def _complex_parts(p):
    if isinstance(p, MPoly):
        p = UPoly.from_mpoly(p)
    if not isinstance(p, UPoly):
        p = UPoly(p)
    re, im = p.parts()
    return _trim(list(re)), _trim(list(im))


# ---------------------------------------------------------------------------
# Sturm machinery


def _signed_remainder_sequence(f0, f1):
    seq = [f0]
    a, b = f0, f1
    while b:
        seq.append(b)
        a, b = b, _scale(_rem(a, b), mpq(-1))
    return seq


def sturm_sequence(p):
    """Classical Sturm sequence ``p, p', -rem(p, p'), ...``."""
    a = _real_coeffs(p)
    if not a:
        raise EmptySupportError("Sturm sequence of the zero polynomial")
    return _signed_remainder_sequence(a, _deriv(a))


def _var_at(seq, x):
    if x == math.inf:
        return _variations([_sign_at_inf(s, True) for s in seq])
    if x == -math.inf:
        return _variations([_sign_at_inf(s, False) for s in seq])
    return _variations([_sign(_eval(s, x)) for s in seq])


def _as_endpoint(x):
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return x
    return to_rational(x)


def _sqf(a):
    g = _gcd(a, _deriv(a))
    return _monic(_divmod(a, g)[0]) if _deg(g) > 0 else _monic(a)


def _sturm_count_seq(seq, a, b):
    return _var_at(seq, a) - _var_at(seq, b)


def sturm_count(p, a=-math.inf, b=math.inf) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval ``(a, b]``."""
    c = _real_coeffs(p)
    if not c:
        raise EmptySupportError("sturm_count of the zero polynomial")
    s = _sqf(c)
    seq = _signed_remainder_sequence(s, _deriv(s))
    a, b = _as_endpoint(a), _as_endpoint(b)
    if a == math.inf or b == -math.inf:
        return 0
    if not (a == -math.inf or b == math.inf) and a >= b:
        return 0
    return _sturm_count_seq(seq, a, b)


def square_free_part(p):
    c = _real_coeffs(p)
    if not c:
        raise EmptySupportError("square-free part of the zero polynomial")
    return UPoly(_sqf(c))


def _yun(a):
    """Square-free decomposition ``a = lc * prod f_m^m`` (Yun); returns ``[(f_m, m)]``."""
    a = _monic(a)
    if _deg(a) <= 0:
        return []
    out = []
    da = _deriv(a)
    g = _gcd(a, da)
    b = _divmod(a, g)[0]
    c = _divmod(da, g)[0]
    d = _sub(c, _deriv(b))
    m = 1
    while _deg(b) > 0:
        f = _gcd(b, d)
        b = _divmod(b, f)[0]
        c = _divmod(d, f)[0]
        d = _sub(c, _deriv(b))
        if _deg(f) > 0:
            out.append((f, m))
        m += 1
    return out


def square_free_decomposition(p):
    """List of ``(UPoly factor, multiplicity)`` with monic square-free coprime factors."""
    c = _real_coeffs(p)
    if not c:
        raise EmptySupportError("square-free decomposition of the zero polynomial")
    return [(UPoly(f), m) for f, m in _yun(c)]


def _cauchy_bound(a):
    lc = abs(a[-1])
    m = max((abs(x) for x in a[:-1]), default=_ZERO)
    return _ONE + m / lc


@dataclass(frozen=True)
class RootIsolation:
    """Disjoint half-open intervals ``(lo, hi]``, each holding one distinct real root."""

    intervals: tuple
    multiplicities: tuple

    def __len__(self):
        return len(self.intervals)

    def to_json(self):
        return [
            {"interval": [rational_str(lo), rational_str(hi)], "multiplicity": m}
            for (lo, hi), m in zip(self.intervals, self.multiplicities)
        ]


def _isolate_sqf(s, lo=None, hi=None):
    if _deg(s) <= 0:
        return []
    seq = _signed_remainder_sequence(s, _deriv(s))
    if lo is None:
        m = _cauchy_bound(s)
        lo, hi = -m, m
    out = []
    stack = [(lo, hi, _sturm_count_seq(seq, lo, hi))]
    while stack:
        a, b, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        k1 = _sturm_count_seq(seq, a, mid)
        stack.append((mid, b, k - k1))
        stack.append((a, mid, k1))
    out.sort()
    return out


def isolate_real_roots(p) -> RootIsolation:
    """Exact isolation of the distinct real roots of ``p`` with multiplicities."""
    c = _real_coeffs(p)
    if not c:
        raise EmptySupportError("root isolation of the zero polynomial")
    if _deg(c) == 0:
        return RootIsolation((), ())
    s = _sqf(c)
    ivs = _isolate_sqf(s)
    factors = _yun(c)
    mults = []
    for lo, hi in ivs:
        m = 0
        for f, k in factors:
            if _sturm_count_seq(_signed_remainder_sequence(f, _deriv(f)), lo, hi):
                m = k
                break
        mults.append(m)
    return RootIsolation(tuple(ivs), tuple(mults))


def _real_rooted(c):
    if _deg(c) <= 0:
        return True
    s = _sqf(c)
    seq = _signed_remainder_sequence(s, _deriv(s))
    return _sturm_count_seq(seq, -math.inf, math.inf) == _deg(s)


def is_real_rooted(p) -> bool:
    """True iff every complex root of the real polynomial ``p`` is real."""
    c = _real_coeffs(p)
    if not c:
        raise EmptySupportError("is_real_rooted of the zero polynomial")
    return _real_rooted(c)


def _real_root_count_mult(c):
    """Real roots of ``c`` counted with multiplicity."""
    total = 0
    for f, m in _yun(c):
        seq = _signed_remainder_sequence(f, _deriv(f))
        total += m * _sturm_count_seq(seq, -math.inf, math.inf)
    return total


# ---------------------------------------------------------------------------
# Wronskian sign, interlacing, proper position

NONPOSITIVE = "NonPositive"
NONNEGATIVE = "NonNegative"
INDEFINITE = "Indefinite"
ZERO_SIGN = "Zero"


def wronskian_sign_on_R(W) -> str:
    """Global sign of a real polynomial on the real line."""
    c = _real_coeffs(W)
    if not c:
        return ZERO_SIGN
    for f, m in _yun(c):
        if m % 2 and _sturm_count_seq(_signed_remainder_sequence(f, _deriv(f)), -math.inf, math.inf):
            return INDEFINITE
    # every real root has even multiplicity, so the sign is that at +infinity
    return NONNEGATIVE if c[-1] > 0 else NONPOSITIVE


def _merged_root_counts(f, g):
    """For each distinct real root of ``f*g`` in increasing order: (mult in f, mult in g)."""
    h = _sqf(_mul(f, g))
    ivs = _isolate_sqf(h)
    ff, gf = _yun(f), _yun(g)
    fseqs = [(_signed_remainder_sequence(p, _deriv(p)), m) for p, m in ff]
    gseqs = [(_signed_remainder_sequence(p, _deriv(p)), m) for p, m in gf]
    rows = []
    for lo, hi in ivs:
        mf = sum(m for seq, m in fseqs if _sturm_count_seq(seq, lo, hi))
        mg = sum(m for seq, m in gseqs if _sturm_count_seq(seq, lo, hi))
        rows.append((mf, mg))
    return rows


def _interlace(f, g):
    diffs = [0]
    cf = cg = 0
    for mf, mg in _merged_root_counts(f, g):
        cf += mf
        cg += mg
        diffs.append(cf - cg)
    return set(diffs) <= {0, 1} or set(diffs) <= {-1, 0}


def interlace(f, g) -> bool:
    """Weak interlacing of the (multi)sets of real roots of ``f`` and ``g``.

    The merged sorted root list must alternate between the two polynomials,
    common roots being allowed to appear in either order.
    """
    a, b = _real_coeffs(f), _real_coeffs(g)
    if not a or not b:
        raise PreconditionError("interlace needs nonzero polynomials")
    if not _real_rooted(a) or not _real_rooted(b):
        raise PreconditionError("interlace needs real-rooted polynomials")
    return _interlace(a, b)


def _proportional(a, b):
    if len(a) != len(b):
        return False
    k = len(a) - 1
    c = a[k] / b[k]
    return all(x == c * y for x, y in zip(a, b))


def proper_position_uni(f, g) -> bool:
    """Decide ``f << g`` (``g + i f`` stable) by real-rootedness, interlacing and
    the sign of ``W[f, g] = f'g - fg'``."""
    a, b = _real_coeffs(f), _real_coeffs(g)
    if not a and not b:
        return False
    if not a:
        return _real_rooted(b)
    if not b:
        return _real_rooted(a)
    if _proportional(a, b):
        return _real_rooted(b)
    if not (_real_rooted(a) and _real_rooted(b)):
        return False
    if not _interlace(a, b):
        return False
    w = _sub(_mul(_deriv(a), b), _mul(a, _deriv(b)))
    return wronskian_sign_on_R(w) in (NONPOSITIVE, ZERO_SIGN)


# ---------------------------------------------------------------------------
# stability via the Cauchy index


def _rotate(re, im):
    """Multiply ``re + i im`` by ``conj(lc) (1 + i)`` so both parts share a positive leading coefficient."""
    n = max(len(re), len(im))
    re = re + [_ZERO] * (n - len(re))
    im = im + [_ZERO] * (n - len(im))
    cr, ci = re[-1], -im[-1]
    # w = (cr + i ci)(1 + i)
    wr, wi = cr - ci, cr + ci
    P = _trim([wr * x - wi * y for x, y in zip(re, im)])
    Q = _trim([wr * y + wi * x for x, y in zip(re, im)])
    return P, Q


def _upper_count_parts(re, im):
    """Exact number of roots (with multiplicity) in the open upper half-plane."""
    d = max(len(re), len(im)) - 1
    if d <= 0:
        return 0
    P, Q = _rotate(re, im)
    seq = _signed_remainder_sequence(P, Q)
    h = seq[-1]
    dh = _deg(h)
    ind = _var_at(seq, -math.inf) - _var_at(seq, math.inf)
    n_plus_reduced = ((d - dh) - ind) // 2
    n_plus_h = 0
    if dh > 0:
        n_plus_h = (dh - _real_root_count_mult(h)) // 2
    return n_plus_reduced + n_plus_h


def _shift_imag(re, im, y):
    """Parts of ``t -> p(t + i y)`` for rational ``y``."""
    p = UPoly.from_parts(re, im).compose_linear(Scalar(1), Scalar(0, y))
    r, s = p.parts()
    return _trim(list(r)), _trim(list(s))


def upper_root_count(p, y=0) -> int:
    """Number of roots of ``p`` with imaginary part strictly greater than ``y``."""
    re, im = _complex_parts(p)
    if not re and not im:
        raise EmptySupportError("root count of the zero polynomial")
    y = to_rational(y)
    if y != 0:
        re, im = _shift_imag(re, im, y)
    return _upper_count_parts(re, im)


@dataclass(frozen=True)
class UniWitness:
    """Certificate that a polynomial has roots in the open upper half-plane.

    ``count`` roots (with multiplicity) have imaginary part greater than
    ``im_lower`` (an exact rational, at least 0). ``approx_root`` is a numeric
    root inside that region; ``exact_root`` is set when a Gaussian-rational
    root was verified by exact evaluation.
    """

    im_lower: object
    count: int
    approx_root: complex | None = None
    exact_root: Scalar | None = None

    def to_json(self):
        out = {"im_lower": rational_str(self.im_lower), "count": self.count}
        if self.approx_root is not None:
            out["approx_root"] = {
                "re": {"numeric": "%.17g" % (self.approx_root.real + 0.0)},
                "im": {"numeric": "%.17g" % (self.approx_root.imag + 0.0)},
            }
        if self.exact_root is not None:
            out["exact_root"] = str(self.exact_root)
        return out


@dataclass(frozen=True)
class UniVerdict:
    status: str
    witness: UniWitness | None = None
    method: str = "cauchy-index"

    @property
    def stable(self) -> bool:
        return self.status == STABLE

    def __bool__(self):
        return self.stable

    def to_json(self):
        out = {"status": self.status, "exact": True, "method": self.method}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _rationalize(x: float, den=10**6):
    return mpq(Fraction(x).limit_denominator(den))


def _witness(p: UPoly) -> UniWitness:
    roots = numeric_roots(p).roots
    upper = sorted((r for r in roots if r.imag > 0), key=lambda r: -r.imag)
    re, im = _complex_parts(p)
    for r in upper:
        cand = Scalar(_rationalize(r.real), _rationalize(r.imag))
        if cand.im > 0 and p(cand).is_zero():
            k = upper_root_count(p, cand.im / 2)
            return UniWitness(cand.im / 2, k, r, cand)
    if upper:
        r = upper[0]
        y = _rationalize(r.imag / 2, 10**4)
        if y > 0:
            re2, im2 = _shift_imag(re, im, y)
            k = _upper_count_parts(re2, im2)
            if k > 0:
                return UniWitness(y, k, r)
    return UniWitness(_ZERO, _upper_count_parts(re, im), upper[0] if upper else None)


def is_stable_uni(p, method: str = "cauchy") -> UniVerdict:
    """Exact upper half-plane stability of a complex univariate polynomial.

    ``method="cauchy"`` (default) counts upper half-plane roots through the
    Cauchy index of a rotated real/imaginary split. ``method="hb"`` instead
    splits ``p = P + iQ`` and decides ``Q << P`` by interlacing.
    """
    if isinstance(p, MPoly):
        p = UPoly.from_mpoly(p)
    elif not isinstance(p, UPoly):
        p = UPoly(p)
    tags = {"cauchy": "cauchy-index", "hb": "hermite-biehler"}
    if method not in tags:
        raise ValueError(f"unknown method {method!r}")
    tag = tags[method]
    if p.is_zero():
        return UniVerdict(ZERO_POLY, method=tag)
    if p.degree == 0:
        return UniVerdict(STABLE, method=tag)
    re, im = _complex_parts(p)
    if method == "cauchy":
        ok = _upper_count_parts(re, im) == 0
    else:
        ok = proper_position_uni(im, re)
    if ok:
        return UniVerdict(STABLE, method=tag)
    return UniVerdict(NOT_STABLE, _witness(p), method=tag)


def is_strictly_stable_uni(p) -> bool:
    """Non-vanishing on the closed upper half-plane."""
    if isinstance(p, MPoly):
        p = UPoly.from_mpoly(p)
    elif not isinstance(p, UPoly):
        p = UPoly(p)
    if p.is_zero():
        raise EmptySupportError("strict stability of the zero polynomial")
    if p.degree == 0:
        return True
    re, im = _complex_parts(p)
    if _upper_count_parts(re, im):
        return False
    # real roots of p are the real roots of gcd(Re p, Im p)
    h = _gcd(re, im) if im else _monic(re)
    if _deg(h) <= 0:
        return True
    s = _sqf(h)
    return _sturm_count_seq(_signed_remainder_sequence(s, _deriv(s)), -math.inf, math.inf) == 0


# ---------------------------------------------------------------------------
# floating-point oracle


@dataclass(frozen=True)
class NumericRoots:
    roots: tuple
    band: float
    indeterminate: tuple = field(default=())

    @property
    def has_indeterminate(self) -> bool:
        return bool(self.indeterminate)


def _mpf(q):
    import mpmath

    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def numeric_roots(p, precision: int | None = None, band: float = 1e-9) -> NumericRoots:
    """Approximate roots via numpy's companion matrix, or mpmath when ``precision``
    (decimal digits) is given. Roots with ``|Im| <= band`` are flagged."""
    if isinstance(p, MPoly):
        p = UPoly.from_mpoly(p)
    elif not isinstance(p, UPoly):
        p = UPoly(p)
    if p.degree == 0 or p.is_zero():
        raise PreconditionError("numeric_roots needs a nonconstant polynomial")
    coeffs = [complex(c) for c in reversed(p.coeffs)]
    if precision is None:
        roots = tuple(complex(r) for r in np.roots(np.array(coeffs, dtype=complex)))
    else:
        import mpmath

        with mpmath.workdps(precision):
            mc = [mpmath.mpc(_mpf(c.re), _mpf(c.im)) for c in reversed(p.coeffs)]
            try:
                rs = mpmath.polyroots(mc, maxsteps=200, extraprec=4 * precision)
            except mpmath.libmp.NoConvergence:
                return NumericRoots((), band, ("no-convergence",))
            roots = tuple(complex(r) for r in rs)
    ind = tuple(r for r in roots if abs(r.imag) <= band)
    return NumericRoots(roots, band, ind)


def oracle_is_stable(p, band: float = 1e-9, precision: int | None = None):
    """Floating-point verdict: True/False, or None when a root sits inside the band.

    Double precision splits a repeated real root by about ``sqrt(eps)``, well
    outside a 1e-9 band; pass ``precision`` (decimal digits) for such inputs.
    """
    if isinstance(p, MPoly):
        p = UPoly.from_mpoly(p)
    elif not isinstance(p, UPoly):
        p = UPoly(p)
    if p.degree == 0:
        return True
    nr = numeric_roots(p, precision=precision, band=band)
    if nr.has_indeterminate and not nr.roots:
        return None
    if any(r.imag > band for r in nr.roots):
        return False
    if nr.has_indeterminate:
        return None
    return True
