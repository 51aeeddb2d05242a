"""Sparse multivariate polynomials over the Gaussian rationals.

Variables are addressed by 0-based index in the library API; the text grammar
names them ``z1 .. zn`` (see :mod:`stabilis.parsing`).
"""

from __future__ import annotations

from types import MappingProxyType

from gmpy2 import mpq

from .errors import DimensionError, EmptySupportError, PreconditionError
from .scalar import ONE, ZERO, Scalar, to_rational

__all__ = [
    "MPoly",
    "UPoly",
    "NEG_INF",
    "grlex_key",
    "restrict_to_line",
    "line_restriction_parts",
    "specialize",
    "scale_var",
    "invert_var",
    "reciprocal",
    "identify_vars",
    "support_extrema",
    "SupportExtrema",
]

NEG_INF = float("-inf")


def grlex_key(alpha):
    """Sort key; ``sorted(..., key=grlex_key, reverse=True)`` gives graded-lex order."""
    return (sum(alpha), alpha)


class MPoly:
    """Immutable sparse polynomial: a map exponent-tuple -> nonzero Scalar."""

    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != nvars:
                raise DimensionError(f"exponent {alpha} has length != {nvars}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            c = Scalar.coerce(c)
            if c.is_zero():
                continue
            prev = clean.get(alpha)
            c = c if prev is None else prev + c
            if c.is_zero():
                clean.pop(alpha, None)
            else:
                clean[alpha] = c
        self._n = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, nvars, terms):
        p = object.__new__(cls)
        p._n = nvars
        p._terms = terms
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MPoly":
        return cls._from_clean(nvars, {})

    @classmethod
    def constant(cls, c, nvars: int) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, nvars: int) -> "MPoly":
        alpha = [0] * nvars
        alpha[i] = 1
        return cls._from_clean(nvars, {tuple(alpha): ONE})

    @classmethod
    def monomial(cls, alpha, coeff=1) -> "MPoly":
        return cls(len(alpha), {tuple(alpha): coeff})

    @classmethod
    def parse(cls, text: str, nvars=None) -> "MPoly":
        from .parsing import parse_polynomial

        return parse_polynomial(text, nvars=nvars)

    # -- structure --------------------------------------------------------
    @property
    def nvars(self) -> int:
        return self._n

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        """Terms in graded-lex order (highest first)."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def support(self):
        return set(self._terms)

    def coeff(self, alpha) -> Scalar:
        return self._terms.get(tuple(alpha), ZERO)

    def constant_term(self) -> Scalar:
        return self.coeff((0,) * self._n)

    def deg(self, i: int):
        if not self._terms:
            return NEG_INF
        return max(alpha[i] for alpha in self._terms)

    def degrees(self):
        """Degree vector; the zero polynomial gets ``-inf`` in every slot."""
        return tuple(self.deg(i) for i in range(self._n))

    def total_degree(self):
        if not self._terms:
            return NEG_INF
        return max(sum(a) for a in self._terms)

    def is_real(self) -> bool:
        return all(c.im == 0 for c in self._terms.values())

    def is_multiaffine(self) -> bool:
        return all(a <= 1 for alpha in self._terms for a in alpha)

    def is_constant(self) -> bool:
        return all(not any(alpha) for alpha in self._terms)

    def parts(self):
        """Split into real-coefficient polynomials ``(F, G)`` with ``self = F + iG``."""
        re = {a: Scalar._raw(c.re, mpq(0)) for a, c in self._terms.items() if c.re != 0}
        im = {a: Scalar._raw(c.im, mpq(0)) for a, c in self._terms.items() if c.im != 0}
        return MPoly._from_clean(self._n, re), MPoly._from_clean(self._n, im)

    def conj(self) -> "MPoly":
        return MPoly._from_clean(self._n, {a: c.conj() for a, c in self._terms.items()})

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if other._n != self._n:
            raise DimensionError(f"nvars mismatch: {self._n} vs {other._n}")

    def _lift(self, other):
        if isinstance(other, MPoly):
            self._check(other)
            return other
        try:
            c = Scalar.coerce(other)
        except (TypeError, ValueError):
            return None
        return MPoly.constant(c, self._n)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for a, c in o._terms.items():
            prev = out.get(a)
            if prev is None:
                out[a] = c
            else:
                s = prev + c
                if s.is_zero():
                    del out[a]
                else:
                    out[a] = s
        return MPoly._from_clean(self._n, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._from_clean(self._n, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "MPoly":
        c = Scalar.coerce(c)
        if c.is_zero():
            return MPoly.zero(self._n)
        return MPoly._from_clean(self._n, {a: c * v for a, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, MPoly):
            self._check(other)
            out = {}
            for a, c in self._terms.items():
                for b, d in other._terms.items():
                    e = tuple(x + y for x, y in zip(a, b))
                    v = c * d
                    prev = out.get(e)
                    out[e] = v if prev is None else prev + v
            return MPoly._from_clean(self._n, {k: v for k, v in out.items() if not v.is_zero()})
        try:
            c = Scalar.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MPoly):
            if not other.is_constant() or other.is_zero():
                return NotImplemented
            other = other.constant_term()
        c = Scalar.coerce(other)
        return self.scale(c.inverse())

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = MPoly.constant(1, self._n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self._n == other._n and self._terms == other._terms
        try:
            c = Scalar.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self == MPoly.constant(c, self._n)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, frozenset(self._terms.items())))
        return self._hash

    # -- calculus / evaluation ----------------------------------------
    def derivative(self, j: int) -> "MPoly":
        """Formal partial derivative in variable ``j``."""
        if not 0 <= j < self._n:
            raise IndexError(f"variable index {j} out of range")
        out = {}
        for a, c in self._terms.items():
            if a[j]:
                b = list(a)
                b[j] -= 1
                out[tuple(b)] = c * a[j]
        return MPoly._from_clean(self._n, out)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return self.evaluate(point)

    def evaluate(self, point) -> Scalar:
        """Exact evaluation at a point of Gaussian rationals."""
        if len(point) != self._n:
            raise DimensionError(f"point has {len(point)} coordinates, need {self._n}")
        pt = [Scalar.coerce(x) for x in point]
        pows = [{} for _ in range(self._n)]
        total = ZERO
        for a, c in self._terms.items():
            v = c
            for i, e in enumerate(a):
                if e:
                    p = pows[i].get(e)
                    if p is None:
                        p = pt[i] ** e
                        pows[i][e] = p
                    v = v * p
            total = total + v
        return total

    def evaluate_complex(self, point) -> complex:
        """Floating-point evaluation (used only by numeric cross-checks)."""
        total = 0j
        for a, c in self._terms.items():
            v = complex(c)
            for x, e in zip(point, a):
                if e:
                    v *= x**e
            total += v
        return total

    def compose(self, subs) -> "MPoly":
        """Substitute ``z_i := subs[i]``; all substitutes share one ring."""
        if len(subs) != self._n:
            raise DimensionError("need one substitute per variable")
        if self._n == 0:
            return self
        m = subs[0].nvars
        for s in subs:
            if s.nvars != m:
                raise DimensionError("substitutes live in different rings")
        pows = [[MPoly.constant(1, m)] for _ in range(self._n)]
        result = MPoly.zero(m)
        for a, c in self._terms.items():
            term = MPoly.constant(c, m)
            for i, e in enumerate(a):
                while len(pows[i]) <= e:
                    pows[i].append(pows[i][-1] * subs[i])
                if e:
                    term = term * pows[i][e]
            result = result + term
        return result

    def map_exponents(self, nvars: int, fn) -> "MPoly":
        """Rebuild with each exponent vector sent through ``fn`` (coefficients summed)."""
        out = {}
        for a, c in self._terms.items():
            b = tuple(fn(a))
            prev = out.get(b)
            out[b] = c if prev is None else prev + c
        return MPoly._from_clean(nvars, {k: v for k, v in out.items() if not v.is_zero()})

    def embed(self, nvars: int, positions) -> "MPoly":
        """Place variable ``i`` at slot ``positions[i]`` of a ring with ``nvars`` variables."""

        def fn(a):
            b = [0] * nvars
            for i, e in enumerate(a):
                b[positions[i]] += e
            return b

        return self.map_exponents(nvars, fn)

    def drop_var(self, i: int) -> "MPoly":
        """Remove a variable that does not occur."""
        if self.deg(i) not in (0, NEG_INF):
            raise PreconditionError(f"variable {i} still occurs")
        return self.map_exponents(self._n - 1, lambda a: a[:i] + a[i + 1:])

    def __repr__(self):
        return f"MPoly({self._n}, {str(self)!r})"

    def __str__(self):
        from .parsing import serialize

        return serialize(self)


class UPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Scalar.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_parts(cls, re, im=None) -> "UPoly":
        im = im or []
        n = max(len(re), len(im))
        cs = []
        for k in range(n):
            a = re[k] if k < len(re) else mpq(0)
            b = im[k] if k < len(im) else mpq(0)
            cs.append(Scalar._raw(mpq(a), mpq(b)))
        return cls(cs)

    @classmethod
    def from_mpoly(cls, f: MPoly) -> "UPoly":
        if f.nvars != 1:
            raise DimensionError("UPoly.from_mpoly needs a 1-variable polynomial")
        if f.is_zero():
            return cls()
        cs = [ZERO] * (f.deg(0) + 1)
        for (k,), c in f.terms.items():
            cs[k] = c
        return cls(cs)

    def to_mpoly(self) -> MPoly:
        return MPoly(1, {(k,): c for k, c in enumerate(self.coeffs)})

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_real(self) -> bool:
        return all(c.im == 0 for c in self.coeffs)

    def parts(self):
        """Real and imaginary coefficient lists (``mpq``), lowest degree first."""
        return [c.re for c in self.coeffs], [c.im for c in self.coeffs]

    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __call__(self, x):
        x = Scalar.coerce(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other])
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UPoly([(a[k] if k < len(a) else ZERO) + (b[k] if k < len(b) else ZERO) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            c = Scalar.coerce(other)
            return UPoly([c * x for x in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "UPoly":
        return UPoly([c * k for k, c in enumerate(self.coeffs)][1:])

    def compose_linear(self, lam, alpha) -> "UPoly":
        """``t -> p(lam * t + alpha)`` for Gaussian-rational ``lam, alpha``."""
        lin = UPoly([alpha, lam])
        acc = UPoly()
        for c in reversed(self.coeffs):
            acc = acc * lin + UPoly([c])
        return acc

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        from .parsing import serialize

        return serialize(self.to_mpoly(), names=["t"])


# ---------------------------------------------------------------------------
# line restrictions


def _conv(a, b):
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def line_restriction_parts(f: MPoly, lam, alpha):
    """Real and imaginary coefficient lists of ``t -> f(lam*t + alpha)``.

    ``lam`` and ``alpha`` are real rational vectors; ``lam`` may contain zeros
    (used by closed-domain sampling). Returns ``(re, im)`` lists of ``mpq``.
    """
    n = f.nvars
    lam = [to_rational(x) for x in lam]
    alpha = [to_rational(x) for x in alpha]
    if len(lam) != n or len(alpha) != n:
        raise DimensionError("line direction/offset length != nvars")
    pows = [[[mpq(1)]] for _ in range(n)]
    lin = [[alpha[i], lam[i]] if lam[i] != 0 else [alpha[i]] for i in range(n)]
    d = 0
    for a in f.terms:
        d = max(d, sum(a[i] for i in range(n) if lam[i] != 0))
    re = [mpq(0)] * (d + 1)
    im = [mpq(0)] * (d + 1)
    for a, c in f.terms.items():
        prod = [mpq(1)]
        for i, e in enumerate(a):
            if e:
                pl = pows[i]
                while len(pl) <= e:
                    pl.append(_conv(pl[-1], lin[i]))
                prod = _conv(prod, pl[e])
        cr, ci = c.re, c.im
        if cr != 0:
            for k, v in enumerate(prod):
                if v:
                    re[k] += cr * v
        if ci != 0:
            for k, v in enumerate(prod):
                if v:
                    im[k] += ci * v
    return re, im


def restrict_to_line(f: MPoly, lam, alpha) -> UPoly:
    """The univariate polynomial ``t -> f(lam*t + alpha)`` for ``lam > 0``."""
    lam = [to_rational(x) for x in lam]
    if any(x <= 0 for x in lam):
        raise PreconditionError("line direction must be strictly positive")
    re, im = line_restriction_parts(f, lam, alpha)
    return UPoly.from_parts(re, im)


# ---------------------------------------------------------------------------
# closure transforms


def _check_index(f, i):
    if not 0 <= i < f.nvars:
        raise IndexError(f"variable index {i} out of range for {f.nvars} variables")


def specialize(f: MPoly, i: int, mu) -> MPoly:
    """Set ``z_i = mu`` (real) and drop the variable."""
    _check_index(f, i)
    mu = Scalar.coerce(mu)
    if not mu.is_real():
        raise PreconditionError("specialization value must be real")
    out = {}
    for a, c in f.terms.items():
        b = a[:i] + a[i + 1:]
        v = c * (mu ** a[i])
        prev = out.get(b)
        out[b] = v if prev is None else prev + v
    return MPoly(f.nvars - 1, out)


def scale_var(f: MPoly, i: int, lam) -> MPoly:
    """``z_i -> lam * z_i`` for rational ``lam > 0``."""
    _check_index(f, i)
    lam = to_rational(lam)
    if lam <= 0:
        raise PreconditionError("scale factor must be positive")
    return MPoly(f.nvars, {a: c * (lam ** a[i]) for a, c in f.terms.items()})


def reciprocal(f: MPoly, i: int, d: int, sign: int = -1) -> MPoly:
    """``z_i^d * f(.., sign/z_i, ..)``; requires ``d >= deg_{z_i} f``."""
    _check_index(f, i)
    if f.is_zero():
        return f
    if d < f.deg(i):
        raise PreconditionError(f"exponent {d} below degree {f.deg(i)} in variable {i}")
    out = {}
    for a, c in f.terms.items():
        b = list(a)
        b[i] = d - a[i]
        out[tuple(b)] = c * (sign ** a[i])
    return MPoly(f.nvars, out)


def invert_var(f: MPoly, i: int) -> MPoly:
    """``z_i^{d_i} f(.., -1/z_i, ..)`` with ``d_i = deg_{z_i} f``."""
    if f.is_zero():
        raise EmptySupportError("invert_var needs a nonzero polynomial")
    return reciprocal(f, i, f.deg(i), -1)


def identify_vars(f: MPoly, i: int, j: int) -> MPoly:
    """Replace ``z_i`` by ``z_j`` and drop variable ``i``."""
    _check_index(f, i)
    _check_index(f, j)
    if i == j:
        raise PreconditionError("identify_vars needs two distinct variables")

    def fn(a):
        b = list(a)
        b[j] += b[i]
        del b[i]
        return b

    return f.map_exponents(f.nvars - 1, fn)


# ---------------------------------------------------------------------------
# support


class SupportExtrema:
    __slots__ = ("minimal", "maximal")

    def __init__(self, minimal, maximal):
        self.minimal = minimal
        self.maximal = maximal

    @property
    def unique_max(self) -> bool:
        return len(self.maximal) == 1

    def __iter__(self):
        return iter((self.minimal, self.maximal))

    def __repr__(self):
        return f"SupportExtrema(minimal={self.minimal}, maximal={self.maximal})"


def support_extrema(f: MPoly) -> SupportExtrema:
    """Minimal and maximal elements of ``supp(f)`` under the product order."""
    if f.is_zero():
        raise EmptySupportError("the zero polynomial has empty support")
    supp = sorted(f.support(), key=grlex_key)

    def dominated(a, b):
        return a != b and all(x <= y for x, y in zip(a, b))

    minimal = [a for a in supp if not any(dominated(b, a) for b in supp)]
    maximal = [a for a in supp if not any(dominated(a, b) for b in supp)]
    return SupportExtrema(minimal, maximal)
