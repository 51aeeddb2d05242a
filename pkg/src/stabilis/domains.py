"""Open circular domains as Moebius preimages of the upper half-plane.

A domain is ``C = phi^{-1}(H)`` for ``phi(z) = (a z + b) / (c z + d)``. The
determinant ``ad - bc`` is only required to be nonzero; it is carried along
exactly instead of being normalised to one, since its square root is usually
not a Gaussian rational.

``Phi_kappa(f) = prod (c_i z_i + d_i)^kappa_i f(phi_1(z_1), ..)`` sends
``H``-stable polynomials to ``C``-stable ones. Stability on a product of
domains is decided by pulling back to ``H`` (the inverse transform) and
cross-checked by freezing all but one coordinate at exact rational points of
the domains.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import DomainError, InconsistencyError, ParseError, PreconditionError, SchemaError
from .multiindex import leq
from .multivariate import (
    EXACT,
    PASSED,
    REFUTED,
    ZERO,
    MultiVerdict,
    MultiWitness,
    SamplingConfig,
    _first_bad_sample,
    _trim,
    check_stability,
    sample_probe,
    slice_parts,
    verify_witness,
)
from .operators import (
    INCONCLUSIVE,
    NOT_PRESERVER,
    PRESERVER_DEGENERATE,
    PRESERVER_SYMBOL,
    CertificationReport,
    LinearOperatorSpec,
    algebraic_symbol,
    halfplane_symbol_truncation,
    range_dimension,
    symbol_text,
)
from .parsing import parse_scalar
from .poly import MPoly, UPoly, line_restriction_parts
from .scalar import ONE, ZERO as SZERO, Scalar, rational_str
from .univariate import _rationalize, _upper_count_parts, _witness, is_strictly_stable_uni, numeric_roots

__all__ = [
    "MoebiusMap",
    "CircularDomain",
    "DomainWitness",
    "upper_half_plane",
    "rotated_half_plane",
    "unit_disk",
    "exterior_unit_disk",
    "disk",
    "exterior_disk",
    "parse_domain",
    "parse_domains",
    "domain_from_json",
    "phi_kappa_transform",
    "phi_kappa_inverse",
    "roundtrip_constant",
    "check_domain_stability",
    "verify_domain_witness",
    "MembershipReport",
    "n_kappa_membership",
    "lee_yang_membership",
    "domain_symbol",
    "symbol_reduction",
    "certify_domain_preserver",
    "certify_lee_yang_preserver",
    "OUT_OF_SCOPE",
    "check_strict_stability",
    "StrictReport",
    "strict_sufficiency_check",
]

OUT_OF_SCOPE = "Degenerate-OutOfScope"


# ---------------------------------------------------------------------------
# Moebius maps and domains


@dataclass(frozen=True)
class MoebiusMap:
    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, Scalar.coerce(getattr(self, k)))
        if self.det.is_zero():
            raise DomainError("Moebius map needs ad - bc != 0")

    @property
    def det(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        """Image of ``z``; ``None`` at the pole."""
        z = Scalar.coerce(z)
        den = self.c * z + self.d
        if den.is_zero():
            return None
        return (self.a * z + self.b) / den

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def to_json(self):
        return {k: str(getattr(self, k)) for k in "abcd"}


def _im_form(phi: MoebiusMap):
    """``(A, beta, B0)`` with ``Im phi(z) |cz+d|^2 = A|z|^2 + Im(beta z) + B0``."""
    a, b, c, d = phi.a, phi.b, phi.c, phi.d
    A = (a * c.conj()).im
    beta = a * d.conj() - b.conj() * c
    B0 = (b * d.conj()).im
    return A, beta, B0


def _rational_sqrt(q):
    q = mpq(q)
    if q < 0:
        return None
    from gmpy2 import is_square, isqrt

    n, d = q.numerator, q.denominator
    if is_square(n) and is_square(d):
        return mpq(isqrt(n), isqrt(d))
    return None


class CircularDomain:
    """``C = {z : Im phi(z) > 0}``: an open disk, half-plane or disk exterior."""

    def __init__(self, phi: MoebiusMap, label: str | None = None):
        self.phi = phi
        self.label = label
        A, beta, B0 = _im_form(phi)
        # Im(beta z) = beta.re * y + beta.im * x
        self._form = (A, beta, B0)
        if A == 0:
            self.kind = "halfplane"
            self.center = None
            self.radius2 = None
            self.normal = (beta.im, beta.re)
            self.offset = B0
        else:
            cx = -beta.im / (2 * A)
            cy = -beta.re / (2 * A)
            self.center = Scalar(cx, cy)
            self.radius2 = cx * cx + cy * cy - B0 / A
            self.normal = None
            self.offset = None
            self.kind = "exterior" if A > 0 else "disk"
            if self.radius2 <= 0:
                raise DomainError("Moebius coefficients give an empty or degenerate domain")

    @property
    def convex(self) -> bool:
        return self.kind != "exterior"

    def contains(self, z) -> bool:
        """Exact membership; the pole of ``phi`` is never inside."""
        w = self.phi(z)
        return w is not None and w.im > 0

    def contains_by_shape(self, z) -> bool:
        """Membership from the disk / half-plane inequality (independent of ``phi``)."""
        z = Scalar.coerce(z)
        if self.kind == "halfplane":
            nx, ny = self.normal
            return nx * z.re + ny * z.im + self.offset > 0
        d2 = (z - self.center).abs2()
        return d2 < self.radius2 if self.kind == "disk" else d2 > self.radius2

    def reflect(self) -> "CircularDomain":
        """Interior of the complement: ``-phi`` swaps the two sides of the real line."""
        p = self.phi
        lab = None
        if self.label:
            lab = self.label[:-2] if self.label.endswith("^r") else self.label + "^r"
        return CircularDomain(MoebiusMap(-p.a, -p.b, p.c, p.d), lab)

    def pullback(self, u):
        """Point of ``C`` corresponding to ``u`` in ``H`` (``None`` for infinity)."""
        return self.phi.inverse()(u)

    def sample(self, k: int, cfg: SamplingConfig | None = None):
        """``k``-th exact sample point inside the domain."""
        cfg = cfg or SamplingConfig()
        s = _disk_grid(k, cfg)
        r = _rational_sqrt(self.radius2) if self.kind != "halfplane" else None
        if r is not None and self.kind == "disk":
            return self.center + s * Scalar(r)
        if r is not None and self.kind == "exterior":
            if s.is_zero():
                s = Scalar(mpq(1, 2))
            return self.center + Scalar(r) / s
        # Cayley pullback: s in the unit disk -> u = i(1+s)/(1-s) in H -> C
        u = Scalar(0, 1) * (ONE + s) / (ONE - s)
        z = self.pullback(u)
        if z is None:
            u = u + Scalar(0, 1)
            z = self.pullback(u)
        return z

    def to_json(self):
        out = {"kind": self.kind, "phi": self.phi.to_json()}
        if self.label:
            out["label"] = self.label
        if self.center is not None:
            out["center"] = str(self.center)
            out["radius2"] = rational_str(self.radius2)
        return out

    def __eq__(self, other):
        return isinstance(other, CircularDomain) and self.phi == other.phi

    def __hash__(self):
        return hash(self.phi)

    def __repr__(self):
        return f"CircularDomain({self.label or self.kind}, phi={self.phi.to_json()})"


def _disk_grid(k: int, cfg: SamplingConfig) -> Scalar:
    """Rational points of the open unit disk: a few fixed ones, then seeded draws."""
    fixed = [Scalar(mpq(1, 2)), Scalar(mpq(-1, 2)), Scalar(0, mpq(1, 2)), Scalar(0, mpq(-1, 2)), Scalar(0)]
    if k < len(fixed):
        return fixed[k]
    rng = random.Random(cfg.seed * 1_000_003 + 700_001 + k)
    q = rng.randint(2, max(2, cfg.height))
    rho = mpq(rng.randint(1, q - 1), q)
    t = mpq(rng.randint(-cfg.height, cfg.height), rng.randint(1, cfg.height))
    cos, sin = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
    if rng.random() < 0.5:
        cos = -cos
    return Scalar(rho * cos, rho * sin)


def upper_half_plane() -> CircularDomain:
    return CircularDomain(MoebiusMap(1, 0, 0, 1), "H")


_DIRECTIONS = {0: (1, 0), 45: (1, 1), 90: (0, 1), 135: (-1, 1), 180: (-1, 0), 225: (-1, -1), 270: (0, -1), 315: (1, -1)}


def rotated_half_plane(theta=None, direction=None) -> CircularDomain:
    """``{z : Im(u z) > 0}`` with ``u`` a positive multiple of ``exp(i theta)``.

    ``theta`` in degrees must be a multiple of 45; any nonzero Gaussian
    rational ``direction`` may be given instead.
    """
    if direction is None:
        t = int(theta) % 360
        if t not in _DIRECTIONS or int(theta) != theta:
            raise DomainError("theta must be a multiple of 45 degrees; pass an explicit direction otherwise")
        direction = Scalar(*_DIRECTIONS[t])
        label = f"H@{int(theta)}"
    else:
        direction = Scalar.coerce(direction)
        label = f"H@({direction})"
    if direction.is_zero():
        raise DomainError("direction must be nonzero")
    return CircularDomain(MoebiusMap(direction, 0, 0, 1), label)


def unit_disk() -> CircularDomain:
    return CircularDomain(MoebiusMap(-1, Scalar(0, 1), Scalar(0, -1), 1), "D")


def exterior_unit_disk() -> CircularDomain:
    return CircularDomain(MoebiusMap(1, Scalar(0, -1), Scalar(0, -1), 1), "Dext")


def disk(center, radius) -> CircularDomain:
    """Open disk with Gaussian-rational ``center`` and positive rational ``radius``."""
    c, r = Scalar.coerce(center), Scalar.coerce(radius)
    if not r.is_real() or r.re <= 0:
        raise DomainError("radius must be a positive rational")
    i = Scalar(0, 1)
    return CircularDomain(MoebiusMap(-1, c + i * r, -i, i * c + r), f"disk({c},{r})")


def exterior_disk(center, radius) -> CircularDomain:
    c, r = Scalar.coerce(center), Scalar.coerce(radius)
    if not r.is_real() or r.re <= 0:
        raise DomainError("radius must be a positive rational")
    i = Scalar(0, 1)
    return CircularDomain(MoebiusMap(1, -c - i * r, -i, i * c + r), f"ext({c},{r})")


def parse_domain(text: str) -> CircularDomain:
    """Shorthand: ``H``, ``D``, ``Dext``, ``H@<degrees>`` or ``H@<direction>``."""
    s = text.strip()
    if s == "H":
        return upper_half_plane()
    if s == "D":
        return unit_disk()
    if s == "Dext":
        return exterior_unit_disk()
    if s.startswith("H@"):
        arg = s[2:].strip()
        if arg.lstrip("-").isdigit():
            return rotated_half_plane(int(arg))
        return rotated_half_plane(direction=parse_scalar(arg))
    raise ParseError(f"unknown domain shorthand {s!r}", 0)


def parse_domains(text: str, nvars: int | None = None):
    """Comma separated shorthands; a single entry is repeated to ``nvars``."""
    parts = [p for p in text.split(",") if p.strip()]
    doms = [parse_domain(p) for p in parts]
    if nvars is not None:
        if len(doms) == 1:
            doms = doms * nvars
        elif len(doms) != nvars:
            raise DomainError(f"{len(doms)} domains given for {nvars} variables")
    return doms


def domain_from_json(obj, ptr: str = "") -> CircularDomain:
    if isinstance(obj, str):
        return parse_domain(obj)
    if not isinstance(obj, dict):
        raise SchemaError("domain must be an object or a shorthand string", ptr)
    kind = obj.get("kind")
    if kind not in ("halfplane", "disk", "exterior", "moebius"):
        raise SchemaError("kind must be halfplane, disk, exterior or moebius", ptr + "/kind")
    phi = obj.get("phi")
    if phi is None:
        if kind == "halfplane":
            return upper_half_plane()
        if kind in ("disk", "exterior") and "center" not in obj:
            return unit_disk() if kind == "disk" else exterior_unit_disk()
        if kind in ("disk", "exterior"):
            try:
                c, r = parse_scalar(str(obj["center"])), parse_scalar(str(obj["radius"]))
            except KeyError as e:
                raise SchemaError(f"missing {e.args[0]}", ptr) from None
            return disk(c, r) if kind == "disk" else exterior_disk(c, r)
        raise SchemaError("moebius domain needs phi", ptr + "/phi")
    if not isinstance(phi, dict):
        raise SchemaError("phi must be an object", ptr + "/phi")
    try:
        coef = [parse_scalar(str(phi[k])) for k in "abcd"]
    except KeyError as e:
        raise SchemaError(f"missing coefficient {e.args[0]}", ptr + "/phi") from None
    except ParseError as e:
        raise SchemaError(f"bad coefficient: {e}", ptr + "/phi") from None
    dom = CircularDomain(MoebiusMap(*coef))
    if kind != "moebius" and dom.kind != kind:
        raise SchemaError(f"phi describes a {dom.kind}, not a {kind}", ptr + "/kind")
    return dom


# ---------------------------------------------------------------------------
# the transform Phi_kappa


def _maps(doms):
    return [d.phi if isinstance(d, CircularDomain) else d for d in doms]


def _linear_powers(p: Scalar, q: Scalar, r: Scalar, s: Scalar, e: int, k: int):
    """Coefficients of ``(p t + q)^e (r t + s)^(k - e)``, lowest first."""
    out = [ONE]
    for _ in range(e):
        out = _umul(out, [q, p])
    for _ in range(k - e):
        out = _umul(out, [s, r])
    return out


def _umul(a, b):
    out = [SZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def phi_kappa_transform(f: MPoly, maps, kappa=None) -> MPoly:
    """``prod (c_i z_i + d_i)^kappa_i f(phi_1(z_1), .., phi_n(z_n))``."""
    maps = _maps(maps)
    if len(maps) != f.nvars:
        raise DomainError(f"{len(maps)} maps for {f.nvars} variables")
    kappa = tuple(kappa) if kappa is not None else tuple(max(0, d) for d in f.degrees())
    if len(kappa) != f.nvars:
        raise DomainError("kappa length differs from the number of variables")
    if not all(leq(a, kappa) for a in f.support()):
        raise DomainError(f"degree {f.degrees()} exceeds kappa={kappa}")
    n = f.nvars
    cache = {}
    out = {}
    for alpha, coef in f.terms.items():
        factors = []
        for i, e in enumerate(alpha):
            key = (i, e)
            if key not in cache:
                m = maps[i]
                cache[key] = [(j, v) for j, v in enumerate(_linear_powers(m.a, m.b, m.c, m.d, e, kappa[i])) if not v.is_zero()]
            factors.append(cache[key])
        terms = [((), coef)]
        for fac in factors:
            terms = [(ex + (j,), c * v) for ex, c in terms for j, v in fac]
        for ex, c in terms:
            prev = out.get(ex)
            out[ex] = c if prev is None else prev + c
    return MPoly(n, out)


def phi_kappa_inverse(g: MPoly, maps, kappa=None) -> MPoly:
    """Inverse transform up to the constant :func:`roundtrip_constant`."""
    return phi_kappa_transform(g, [m.inverse() for m in _maps(maps)], kappa)


def roundtrip_constant(maps, kappa) -> Scalar:
    """``prod (a_i d_i - b_i c_i)^kappa_i``: the factor of ``Phi^{-1}(Phi(f))`` over ``f``."""
    out = ONE
    for m, k in zip(_maps(maps), kappa):
        out = out * m.det ** int(k)
    return out


# ---------------------------------------------------------------------------
# stability on a product of domains


@dataclass(frozen=True)
class DomainWitness:
    """Refutation of stability on a product of domains.

    ``point`` is an exact zero inside the product. Otherwise ``slice_index``
    and ``fixed`` describe a frozen slice whose pulled-back univariate
    polynomial has ``uni.count`` roots above ``Im = uni.im_lower``; or
    ``transported`` refutes the pulled-back polynomial (degree ``kappa``) on
    the upper half-plane. ``at_infinity`` flags zeros that sit at the pole of
    the pullback (a degree drop in a non-convex coordinate).
    """

    point: tuple | None = None
    slice_index: int | None = None
    fixed: tuple | None = None
    uni: object = None
    transported: MultiWitness | None = None
    kappa: tuple | None = None
    at_infinity: tuple | None = None
    approx_point: tuple | None = None
    note: str | None = None

    def to_json(self):
        out = {}
        if self.point is not None:
            out["point"] = [str(x) for x in self.point]
        if self.slice_index is not None:
            out["slice"] = {"variable": self.slice_index + 1, "fixed": [None if x is None else str(x) for x in self.fixed]}
        if self.uni is not None:
            out["pulled_back_root"] = self.uni.to_json()
        if self.transported is not None:
            out["transported"] = {"kappa": list(self.kappa), "witness": self.transported.to_json()}
        if self.at_infinity:
            out["at_infinity"] = [i + 1 for i in self.at_infinity]
        if self.approx_point is not None:
            out["approx_point"] = [{"re": "%.17g" % (z.real + 0.0), "im": "%.17g" % (z.imag + 0.0)} for z in self.approx_point]
        if self.note:
            out["note"] = self.note
        return out


def _pullback_uni(re, im, m: MoebiusMap):
    """``(-c u + a)^d p((d u - b)/(-c u + a))`` for ``p`` given by parts."""
    coeffs = [Scalar._raw(x, y) for x, y in zip(re + [mpq(0)] * (len(im) - len(re)), im + [mpq(0)] * (len(re) - len(im)))]
    d = len(coeffs) - 1
    inv = m.inverse()
    out = [SZERO] * (d + 1)
    for k, c in enumerate(coeffs):
        if c.is_zero():
            continue
        for j, v in enumerate(_linear_powers(inv.a, inv.b, inv.c, inv.d, k, d)):
            out[j] = out[j] + c * v
    return UPoly(out)


def _slice_has_root(f: MPoly, doms, j, fixed, cfg=None):
    """Whether the slice through ``fixed`` has a zero in ``doms[j]``; returns the pulled-back poly."""
    re, im = slice_parts(f, j, fixed)
    if not re and not im:
        return True, None
    if max(len(re), len(im)) <= 1:
        return False, None
    q = _pullback_uni(re, im, doms[j].phi)
    qr, qi = _parts(q)
    return _upper_count_parts(qr, qi) > 0, q


def _parts(q: UPoly):
    return [c.re for c in q.coeffs], [c.im for c in q.coeffs]


def _domain_probe(k: int, doms, cfg: SamplingConfig):
    n = len(doms)
    j = (n - 1 - k) % n
    m = k // n
    fixed = [None if i == j else doms[i].sample(m + 7 * i, cfg) for i in range(n)]
    return j, tuple(fixed)


def _slice_witness(f: MPoly, doms, j, fixed, q) -> DomainWitness:
    def at(t):
        return tuple(t if i == j else x for i, x in enumerate(fixed))

    if q is None:
        # the slice vanishes identically: any point of doms[j] works
        return DomainWitness(point=at(doms[j].sample(0)), slice_index=j, fixed=fixed)
    re, im = slice_parts(f, j, fixed)
    p = UPoly([Scalar._raw(x, y) for x, y in zip(re + [mpq(0)] * (len(im) - len(re)), im + [mpq(0)] * (len(re) - len(im)))])
    for r in numeric_roots(p).roots:
        z = Scalar(_rationalize(r.real), _rationalize(r.imag))
        if doms[j].contains(z) and p(z).is_zero():
            return DomainWitness(point=at(z), slice_index=j, fixed=fixed)
    return DomainWitness(slice_index=j, fixed=fixed, uni=_witness(q))


def _transported_witness(g_witness: MultiWitness, doms, kappa) -> DomainWitness:
    point, infinity, approx = None, None, None
    if g_witness.point is not None:
        pts = [d.pullback(u) for d, u in zip(doms, g_witness.point)]
        infinity = tuple(i for i, z in enumerate(pts) if z is None)
        if not infinity:
            point = tuple(pts)
    else:
        from .multivariate import _approx_point

        ap = _approx_point(g_witness)
        if ap is not None:
            approx = []
            for d, u in zip(doms, ap):
                inv = d.phi.inverse()
                num = complex(inv.a) * u + complex(inv.b)
                den = complex(inv.c) * u + complex(inv.d)
                approx.append(num / den if den != 0 else complex("inf"))
            approx = tuple(approx)
    return DomainWitness(point=point, transported=g_witness, kappa=tuple(kappa), at_infinity=infinity or None, approx_point=approx)


def check_domain_stability(f: MPoly, doms, cfg: SamplingConfig | None = None, kappa=None) -> MultiVerdict:
    """Non-vanishing on ``doms[0] x .. x doms[n-1]``.

    With ``kappa`` (at least the degree of ``f``) the pullback uses that degree,
    so in non-convex coordinates a degree below ``kappa_j`` is refuted as a
    zero at infinity; this is membership in ``N_kappa``. Without it the exact
    degrees are used, which tests plain stability on the product.
    """
    cfg = cfg or SamplingConfig()
    doms = list(doms)
    if len(doms) != f.nvars:
        raise DomainError(f"{len(doms)} domains for {f.nvars} variables")
    if f.is_zero():
        return MultiVerdict(ZERO)
    kappa = tuple(kappa) if kappa is not None else tuple(max(0, d) for d in f.degrees())
    g = phi_kappa_inverse(f, doms, kappa)
    if f.nvars > 1:
        for k in range(cfg.samples):
            j, fixed = _domain_probe(k, doms, cfg)
            bad, q = _slice_has_root(f, doms, j, fixed)
            if bad:
                w = _slice_witness(f, doms, j, fixed, q)
                if w.point is not None:
                    u = tuple(d.phi(z) for d, z in zip(doms, w.point))
                    if any(x is None or x.im <= 0 for x in u) or not g.evaluate(list(u)).is_zero():
                        raise InconsistencyError("direct zero does not transport to a zero of the pullback")
                return MultiVerdict(REFUTED, w, detail="direct slice")
    vg = check_stability(g, cfg)
    if vg.refuted:
        return MultiVerdict(REFUTED, _transported_witness(vg.witness, doms, kappa), detail="pullback to H")
    if vg.status == ZERO:
        return MultiVerdict(REFUTED, DomainWitness(note="pullback vanishes identically"))
    if vg.status == EXACT:
        return MultiVerdict(EXACT, detail="pullback to H: " + (vg.detail or "exact"))
    return MultiVerdict(PASSED, samples=cfg.samples, seed=cfg.seed, detail="pullback to H and direct slices")


def verify_domain_witness(f: MPoly, doms, w: DomainWitness) -> bool:
    """Exact re-check of a :class:`DomainWitness`."""
    doms = list(doms)
    if w.point is not None:
        return all(d.contains(z) for d, z in zip(doms, w.point)) and f.evaluate(list(w.point)).is_zero()
    if w.slice_index is not None:
        j = w.slice_index
        if not all(doms[i].contains(x) for i, x in enumerate(w.fixed) if i != j):
            return False
        bad, _ = _slice_has_root(f, doms, j, w.fixed)
        return bad
    if w.transported is not None:
        return verify_witness(phi_kappa_inverse(f, doms, w.kappa), w.transported)
    return False


# ---------------------------------------------------------------------------
# N_kappa and Lee-Yang classes


@dataclass
class MembershipReport:
    member: bool
    certified: bool
    stability: MultiVerdict | None = None
    degree_failures: list = field(default_factory=list)
    maxsupport_unique: bool | None = None
    notes: list = field(default_factory=list)
    parts: dict = field(default_factory=dict)

    def to_json(self):
        out = {"member": self.member, "certified": self.certified}
        if self.stability is not None:
            out["stability"] = self.stability.to_json()
        if self.degree_failures:
            out["degree_failures"] = [{"variable": j + 1, "degree": d, "required": k} for j, d, k in self.degree_failures]
        if self.maxsupport_unique is not None:
            out["unique_maximal_support_on_nonconvex_block"] = self.maxsupport_unique
        if self.parts:
            out["parts"] = {k: v.to_json() for k, v in self.parts.items()}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def n_kappa_membership(f: MPoly, doms, kappa, cfg: SamplingConfig | None = None) -> MembershipReport:
    """Membership in ``N_kappa(C_1, .., C_n)``."""
    cfg = cfg or SamplingConfig()
    doms = list(doms)
    kappa = tuple(kappa)
    if len(doms) != f.nvars or len(kappa) != f.nvars:
        raise DomainError("domains, kappa and polynomial disagree in length")
    if f.is_zero():
        return MembershipReport(False, True, MultiVerdict(ZERO), notes=["the zero polynomial is not stable"])
    if not all(leq(a, kappa) for a in f.support()):
        return MembershipReport(False, True, notes=[f"degree {f.degrees()} exceeds kappa={kappa}"])
    J = [j for j, d in enumerate(doms) if not d.convex]
    fails = [(j, max(0, f.deg(j)), kappa[j]) for j in J if f.deg(j) != kappa[j]]
    uniq = None
    if J:
        proj = {tuple(a[j] for j in J) for a in f.support()}
        maximal = [a for a in proj if not any(b != a and leq(a, b) for b in proj)]
        uniq = len(maximal) == 1
    if fails:
        return MembershipReport(False, True, degree_failures=fails, maxsupport_unique=uniq, notes=["degree below kappa in a non-convex coordinate"])
    v = check_domain_stability(f, doms, cfg, kappa)
    rep = MembershipReport(v.passed, v.certified, v, maxsupport_unique=uniq)
    if v.passed and uniq is False:
        raise InconsistencyError("stable on a product with exterior domains but the support has no unique maximum")
    return rep


def lee_yang_membership(f: MPoly, doms, kappa, cfg: SamplingConfig | None = None) -> MembershipReport:
    """``f`` in ``N_kappa(C) cap N_kappa(C^r)``."""
    doms = list(doms)
    inner = n_kappa_membership(f, doms, kappa, cfg)
    outer = n_kappa_membership(f, [d.reflect() for d in doms], kappa, cfg)
    member = inner.member and outer.member
    if member:
        certified = inner.certified and outer.certified
    else:
        certified = (not inner.member and inner.certified) or (not outer.member and outer.certified)
    return MembershipReport(member, certified, parts={"C": inner, "C^r": outer})


# ---------------------------------------------------------------------------
# domain symbols and preservers


def _pair_form(m: MoebiusMap, n: int, i: int, sign: int) -> MPoly:
    z = MPoly.var(i, 2 * n)
    w = MPoly.var(n + i, 2 * n)
    left = (z.scale(m.a) + m.b) * (w.scale(m.c) + m.d)
    right = (w.scale(m.a) + m.b) * (z.scale(m.c) + m.d)
    return left + right if sign > 0 else left - right


def domain_symbol(T: LinearOperatorSpec, doms, kappa=None, sign: int = 1) -> MPoly:
    """``T[prod ((a z + b)(c w + d) +- (a w + b)(c z + d))^kappa_i]``, ``T`` acting on ``z``."""
    T = T.with_kappa(kappa) if kappa is not None else T
    maps = _maps(doms)
    n, m = T.nvars, T.out_nvars
    if len(maps) != n:
        raise DomainError(f"{len(maps)} domains for {n} variables")
    P = MPoly.constant(1, 2 * n)
    for i, k in enumerate(T.kappa):
        P = P * _pair_form(maps[i], n, i, sign) ** k
    out = MPoly.zero(m + n)
    for ab, c in P.terms.items():
        alpha, beta = ab[:n], ab[n:]
        img = T.images[alpha]
        if img.is_zero():
            continue
        wpart = MPoly.monomial((0,) * m + tuple(beta), c)
        out = out + img.embed(m + n, list(range(m))) * wpart
    return out


def symbol_reduction(doms, kappa):
    """Recognise the symbol as a constant times ``T[(1+zw)^kappa]`` or ``T[(z+w)^kappa]``.

    Returns ``(form, constant)`` with ``form`` one of ``"1+zw"``, ``"z+w"``,
    or ``None`` when the coordinates do not share one of those shapes.
    """
    forms, const = set(), ONE
    for m, k in zip(_maps(doms), kappa):
        ac, bd, mid = m.a * m.c, m.b * m.d, m.a * m.d + m.b * m.c
        if mid.is_zero() and ac == bd:
            forms.add("1+zw")
            const = const * (ac + ac) ** int(k)
        elif ac.is_zero() and bd.is_zero():
            forms.add("z+w")
            const = const * mid ** int(k)
        else:
            return None, None
    if len(forms) > 1:
        return None, None
    return (forms.pop() if forms else "z+w"), const


def _reduced_symbol(T, form):
    if form == "1+zw":
        return halfplane_symbol_truncation(T, T.kappa)
    return algebraic_symbol(T)


def certify_domain_preserver(T: LinearOperatorSpec, doms, kappa=None, cfg: SamplingConfig | None = None) -> CertificationReport:
    """Preservation of ``N_kappa(C_1..C_n)`` into ``N(C_1..C_n)``.

    As for the half-plane: the domain symbol is always tested, and operators
    of rank at most one are decided by their generator.
    """
    cfg = cfg or SamplingConfig.certification()
    T = T.with_kappa(kappa) if kappa is not None else T
    doms = list(doms)
    S = domain_symbol(T, doms, sign=1)
    rep = CertificationReport(NOT_PRESERVER, symbol=S, symbol_text=symbol_text(S, T))
    form, const = symbol_reduction(doms, T.kappa)
    if form is not None:
        rep.notes.append(f"symbol = {const} * T[({form})^kappa]")
    vb = check_domain_stability(S, doms + doms, cfg)
    rep.symbol_verdicts["b"] = vb
    info = range_dimension(T)
    rep.rank = info
    if info.rank == 0:
        rep.verdict, rep.branch, rep.certified = PRESERVER_DEGENERATE, "a", True
        rep.notes.append("T is the zero operator")
        return rep
    if info.rank == 1:
        vp = check_domain_stability(info.basis[0], doms, cfg)
        rep.symbol_verdicts["a:P"] = vp
        rep.branch = "a"
        if vp.passed:
            rep.verdict, rep.certified = PRESERVER_DEGENERATE, vp.certified
            return _strict(rep, cfg)
        rep.verdict, rep.certified = NOT_PRESERVER, True
        rep.notes.append("range is one-dimensional but its generator is not stable on the domains")
        return rep
    if vb.passed:
        rep.verdict, rep.branch, rep.certified = PRESERVER_SYMBOL, "b", vb.certified
        return _strict(rep, cfg)
    rep.certified = vb.refuted
    return rep


def _strict(rep, cfg):
    if cfg.strict and rep.is_preserver and not rep.certified:
        rep.notes.append("acceptance rests on sampling; certified output was demanded")
        rep.verdict = INCONCLUSIVE
    return rep


def certify_lee_yang_preserver(T: LinearOperatorSpec, doms, kappa=None, cfg: SamplingConfig | None = None) -> CertificationReport:
    """Preservation of the ``kappa``-Lee-Yang property for operators of rank above two."""
    cfg = cfg or SamplingConfig.certification()
    T = T.with_kappa(kappa) if kappa is not None else T
    doms = list(doms)
    refl = [d.reflect() for d in doms]
    info = range_dimension(T)
    rep = CertificationReport(NOT_PRESERVER, rank=info)
    if info.rank <= 2:
        rep.verdict = OUT_OF_SCOPE
        rep.notes.append(f"degenerate: range has dimension {info.rank} <= 2, outside the characterization")
        return rep
    passed = []
    refuted_all = True
    for branch, sign in (("a", 1), ("b", -1)):
        S = domain_symbol(T, doms, sign=sign)
        if branch == "a":
            rep.symbol, rep.symbol_text = S, symbol_text(S, T)
        else:
            rep.notes.append("minus-sign symbol " + symbol_text(S, T))
        v1 = check_domain_stability(S, doms + doms, cfg)
        v2 = check_domain_stability(S, refl + refl, cfg)
        rep.symbol_verdicts[branch + ":C"] = v1
        rep.symbol_verdicts[branch + ":C^r"] = v2
        if v1.passed and v2.passed:
            passed.append((branch, v1.certified and v2.certified))
        refuted_all = refuted_all and (v1.refuted or v2.refuted)
    if passed:
        # prefer a certified branch, then the plus-sign one
        branch, cert = sorted(passed, key=lambda x: (not x[1], x[0]))[0]
        rep.verdict, rep.branch, rep.certified = PRESERVER_SYMBOL, branch, cert
        return _strict(rep, cfg)
    rep.certified = refuted_all
    return rep


# ---------------------------------------------------------------------------
# strict stability (closed half-plane) and the sufficient conditions


def _strict_probe_ok(f: MPoly, probe) -> bool:
    if probe[0] == "line":
        re, im = line_restriction_parts(f, probe[1], probe[2])
        re, im = _trim(re), _trim(im)
    else:
        re, im = slice_parts(f, probe[1], probe[2])
    if not re and not im:
        return False
    n = max(len(re), len(im))
    re = re + [mpq(0)] * (n - len(re))
    im = im + [mpq(0)] * (n - len(im))
    return is_strictly_stable_uni(UPoly([Scalar._raw(x, y) for x, y in zip(re, im)]))


def check_strict_stability(f: MPoly, cfg: SamplingConfig | None = None) -> MultiVerdict:
    """Non-vanishing on the closed upper half-plane power, by exact probes.

    Probes may freeze coordinates at real values, so boundary points are seen.
    """
    cfg = cfg or SamplingConfig()
    if f.is_zero():
        return MultiVerdict(ZERO)
    if f.is_constant():
        return MultiVerdict(EXACT, detail="nonzero constant")
    k = _first_bad_sample(f, cfg, allow_zero=True, probe_check=_strict_probe_ok)
    if k is None:
        if f.nvars == 1:
            return MultiVerdict(EXACT, detail="one variable")
        return MultiVerdict(PASSED, samples=cfg.samples, seed=cfg.seed)
    probe = sample_probe(k, f.nvars, cfg, allow_zero=True)
    if probe[0] == "line":
        w = MultiWitness(tuple(probe[1]), tuple(probe[2]), note="restriction has a root in the closed upper half-plane")
    else:
        w = MultiWitness(slice_index=probe[1], fixed=probe[2], note="slice has a root in the closed upper half-plane")
    return MultiVerdict(REFUTED, w)


@dataclass
class StrictReport:
    sufficient: bool
    symbol: MPoly
    symbol_text: str
    verdict: MultiVerdict
    domain: CircularDomain | None = None

    @property
    def conclusion(self) -> str:
        return "sufficient condition met" if self.sufficient else "no conclusion"

    def to_json(self):
        out = {"conclusion": self.conclusion, "symbol": self.symbol_text, "verdict": self.verdict.to_json()}
        if self.domain is not None:
            out["domain"] = self.domain.to_json()
        return out


def strict_sufficiency_check(T: LinearOperatorSpec, kappa=None, domain: CircularDomain | None = None, cfg: SamplingConfig | None = None) -> StrictReport:
    """Sufficient test for preserving strict (closed-domain) stability.

    Without ``domain`` the algebraic symbol must be non-vanishing on the closed
    upper half-plane power. With a convex ``domain`` the domain symbol is
    pulled back to ``H`` and tested there on the closed half-plane. Failure is
    not a refutation: the condition is not necessary.
    """
    cfg = cfg or SamplingConfig()
    T = T.with_kappa(kappa) if kappa is not None else T
    if domain is None:
        G = algebraic_symbol(T)
        v = check_strict_stability(G, cfg)
    else:
        if not domain.convex:
            raise PreconditionError("the closed-domain condition needs a convex domain")
        G = domain_symbol(T, [domain] * T.nvars)
        doms = [domain] * (T.out_nvars + T.nvars)
        v = check_strict_stability(phi_kappa_inverse(G, doms), cfg)
    return StrictReport(v.passed, G, symbol_text(G, T), v, domain)
