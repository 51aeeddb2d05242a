"""Multivariate stability: exact refutation along rational lines, sampled
acceptance, proper position, Wronskians, the Lieb-Sokal transform and a
generator of stable polynomials.

A polynomial ``f`` in ``n`` variables is stable iff every restriction
``t -> f(lam*t + alpha)`` with ``lam > 0`` is stable. Each sampled line is
decided exactly, so a refutation is a certificate; passing all samples is
reported as ``PassedSamples`` and never claimed as a proof.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from gmpy2 import mpq

from .errors import DimensionError, EmptySupportError, InconsistencyError, PreconditionError
from .multiindex import box
from .poly import MPoly, UPoly, line_restriction_parts
from .scalar import Scalar, rational_str
from .univariate import (
    UniWitness,
    _rationalize,
    _upper_count_parts,
    is_stable_uni,
)

__all__ = [
    "SamplingConfig",
    "MultiVerdict",
    "MultiWitness",
    "REFUTED",
    "PASSED",
    "EXACT",
    "ZERO",
    "sample_line",
    "sample_probe",
    "slice_parts",
    "check_stability",
    "check_real_stability",
    "verify_witness",
    "wronskian_j",
    "proper_position_multi",
    "hko_pencil_check",
    "HKOReport",
    "lieb_sokal",
    "generate_stable",
    "random_poly",
    "random_stable",
    "random_real_stable",
    "perturbation_epsilon",
    "is_complex_multiple_of_real_stable",
    "RealMultiple",
]

REFUTED = "RefutedWithWitness"
PASSED = "PassedSamples"
EXACT = "ExactStable"
ZERO = "ZeroPolynomial"

_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]


@dataclass(frozen=True)
class SamplingConfig:
    """Knobs for sampled acceptance. Identical config and input give identical verdicts.

    ``samples`` lines are tested; the first ``sweep`` of them follow a fixed
    Halton-type schedule, the rest are drawn from ``random.Random`` seeded per
    sample index, so the outcome does not depend on ``workers``.
    """

    samples: int = 64
    seed: int = 0
    height: int = 32
    strict: bool = False
    workers: int = 1
    sweep: int | None = None

    def with_samples(self, n: int) -> "SamplingConfig":
        return replace(self, samples=n)

    @classmethod
    def certification(cls, **kw) -> "SamplingConfig":
        kw.setdefault("samples", 256)
        return cls(**kw)

    def to_json(self):
        return {"samples": self.samples, "seed": self.seed, "height": self.height, "strict": self.strict}


def _halton(k: int, base: int) -> mpq:
    f, r = mpq(1), mpq(0)
    while k:
        f /= base
        r += f * (k % base)
        k //= base
    return r


def _rand_pos(rng, h):
    return mpq(rng.randint(1, h), rng.randint(1, h))


def _rand_real(rng, h):
    return mpq(rng.randint(-h, h), rng.randint(1, h))


def sample_line(k: int, n: int, cfg: SamplingConfig, allow_zero: bool = False):
    """The ``k``-th sampled line ``(lam, alpha)`` in ``n`` variables.

    With ``allow_zero`` some direction components are zero (used for checks on
    closed domains, where a frozen coordinate is a real boundary value).
    """
    sweep = cfg.sweep if cfg.sweep is not None else max(1, cfg.samples // 4)
    if k == 0:
        return [mpq(1)] * n, [mpq(0)] * n
    if k < sweep:
        lam = []
        alpha = []
        for j in range(n):
            h1 = _halton(k, _PRIMES[(2 * j) % len(_PRIMES)])
            h2 = _halton(k, _PRIMES[(2 * j + 1) % len(_PRIMES)])
            lam.append((1 + 15 * h1) / (16 - 15 * h1))
            alpha.append(8 * (2 * h2 - 1))
        return lam, alpha
    rng = random.Random(cfg.seed * 1_000_003 + k)
    h = cfg.height
    lam = [_rand_pos(rng, h) for _ in range(n)]
    if allow_zero:
        for j in range(n):
            if rng.random() < 0.25:
                lam[j] = mpq(0)
        if not any(lam):
            lam[rng.randrange(n)] = _rand_pos(rng, h)
    alpha = [_rand_real(rng, h) for _ in range(n)]
    return lam, alpha


@dataclass(frozen=True)
class MultiWitness:
    """Refutation certificate.

    Either an exact ``point`` of the open upper half-plane power where the
    polynomial vanishes, or a line ``(lam, alpha)`` or coordinate slice
    ``(slice_index, fixed)`` whose restriction has the upper half-plane roots
    described by ``uni``. ``note`` carries free-form
    context (for instance a nonreal coefficient).
    """

    lam: tuple | None = None
    alpha: tuple | None = None
    uni: UniWitness | None = None
    point: tuple | None = None
    note: str | None = None
    slice_index: int | None = None
    fixed: tuple | None = None

    def to_json(self):
        out = {}
        if self.lam is not None:
            out["lambda"] = [rational_str(x) for x in self.lam]
            out["alpha"] = [rational_str(x) for x in self.alpha]
        if self.slice_index is not None:
            out["slice"] = {
                "variable": self.slice_index + 1,
                "fixed": [None if x is None else str(x) for x in self.fixed],
            }
        if self.uni is not None:
            out["root"] = self.uni.to_json()
        if self.point is not None:
            out["point"] = [str(x) for x in self.point]
        if self.note is not None:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class MultiVerdict:
    status: str
    witness: MultiWitness | None = None
    samples: int = 0
    seed: int | None = None
    detail: str | None = None

    @property
    def refuted(self) -> bool:
        return self.status == REFUTED

    @property
    def passed(self) -> bool:
        """Stable verdict, exact or sampled."""
        return self.status in (PASSED, EXACT)

    @property
    def certified(self) -> bool:
        return self.status in (EXACT, REFUTED, ZERO)

    def __bool__(self):
        return self.passed

    def to_json(self):
        out = {"status": self.status, "certified": self.certified}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.status == PASSED:
            out["samples"] = self.samples
            out["seed"] = self.seed
        if self.detail:
            out["detail"] = self.detail
        return out


# ---------------------------------------------------------------------------
# single-line decisions


def _line_point(lam, alpha, t: Scalar):
    return tuple(Scalar(a) + t * Scalar(l) for l, a in zip(lam, alpha))


def _line_witness(f: MPoly, lam, alpha, re, im) -> MultiWitness:
    from .univariate import _witness

    u = UPoly.from_parts(re, im)
    if u.is_zero():
        # f vanishes on the whole line, in particular at t = i
        return MultiWitness(tuple(lam), tuple(alpha), point=_line_point(lam, alpha, Scalar(0, 1)))
    w = _witness(u)
    point = None
    if w.exact_root is not None:
        point = _line_point(lam, alpha, w.exact_root)
    return MultiWitness(tuple(lam), tuple(alpha), uni=w, point=point)


def _check_line(f: MPoly, lam, alpha) -> bool:
    """True if the restriction to the line is stable (and not identically zero)."""
    re, im = line_restriction_parts(f, lam, alpha)
    re, im = _trim(re), _trim(im)
    if not re and not im:
        return False
    return _upper_count_parts(re, im) == 0


def slice_parts(f: MPoly, j: int, fixed):
    """Coefficient lists of ``t -> f(c_1, .., t, .., c_n)`` (``fixed[j]`` is ignored)."""
    d = max(0, f.deg(j))
    re = [mpq(0)] * (d + 1)
    im = [mpq(0)] * (d + 1)
    pows = [{} for _ in fixed]
    for a, c in f.terms.items():
        v = c
        for i, e in enumerate(a):
            if i == j or not e:
                continue
            p = pows[i].get(e)
            if p is None:
                p = fixed[i] ** e
                pows[i][e] = p
            v = v * p
        re[a[j]] += v.re
        im[a[j]] += v.im
    return _trim(re), _trim(im)


def _check_slice(f: MPoly, j, fixed) -> bool:
    re, im = slice_parts(f, j, fixed)
    if not re and not im:
        return False
    return _upper_count_parts(re, im) == 0


def _rand_upper(rng, h, allow_real=False):
    re = _rand_real(rng, h)
    if allow_real and rng.random() < 0.25:
        return Scalar._raw(re, mpq(0))
    return Scalar._raw(re, _rand_pos(rng, h))


def sample_probe(k: int, n: int, cfg: SamplingConfig, allow_zero: bool = False):
    """The ``k``-th probe: even ``k`` is a real line, odd ``k`` a coordinate slice.

    A slice ``("slice", j, fixed)`` freezes every coordinate but ``j`` at a
    Gaussian-rational point of the upper half-plane. Slices catch zeros that
    only lines of measure zero can see, e.g. for products of real linear forms.
    With ``allow_zero`` frozen values may also be real (closed-domain checks).
    """
    if n == 1 or k % 2 == 0:
        lam, alpha = sample_line(k // 2 if n > 1 else k, n, cfg, allow_zero)
        return ("line", lam, alpha)
    m = k // 2
    j = (n - 1 - m) % n
    if m == 0:
        fixed = [Scalar(0, 1)] * n
    else:
        rng = random.Random(cfg.seed * 1_000_003 + 500_009 + m)
        fixed = [_rand_upper(rng, cfg.height, allow_zero) for _ in range(n)]
    fixed[j] = None
    return ("slice", j, tuple(fixed))


def _check_probe(f: MPoly, probe) -> bool:
    if probe[0] == "line":
        return _check_line(f, probe[1], probe[2])
    return _check_slice(f, probe[1], probe[2])


def _sample_chunk(args):
    f, ks, n, cfg, allow_zero = args
    for k in ks:
        if not _check_probe(f, sample_probe(k, n, cfg, allow_zero)):
            return k
    return None


def _first_bad_sample(f: MPoly, cfg: SamplingConfig, allow_zero=False, probe_check=None):
    n = f.nvars
    check = probe_check or _check_probe
    workers = cfg.workers or 1
    if workers <= 1 or cfg.samples < 16 or probe_check is not None:
        for k in range(cfg.samples):
            if not check(f, sample_probe(k, n, cfg, allow_zero)):
                return k
        return None
    chunk = max(4, cfg.samples // (4 * workers))
    jobs = [(f, list(range(s, min(s + chunk, cfg.samples))), n, cfg, allow_zero) for s in range(0, cfg.samples, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        hits = [k for k in ex.map(_sample_chunk, jobs) if k is not None]
    return min(hits) if hits else None


def _slice_witness(f: MPoly, j, fixed, re, im) -> MultiWitness:
    from .univariate import _witness

    u = UPoly.from_parts(re, im)
    def at(t):
        return tuple(t if i == j else x for i, x in enumerate(fixed))

    if u.is_zero():
        return MultiWitness(slice_index=j, fixed=tuple(fixed), point=at(Scalar(0, 1)))
    w = _witness(u)
    point = at(w.exact_root) if w.exact_root is not None else None
    return MultiWitness(uni=w, point=point, slice_index=j, fixed=tuple(fixed))


def probe_witness(f: MPoly, probe) -> MultiWitness:
    if probe[0] == "line":
        re, im = line_restriction_parts(f, probe[1], probe[2])
        return _line_witness(f, probe[1], probe[2], _trim(re), _trim(im))
    re, im = slice_parts(f, probe[1], probe[2])
    return _slice_witness(f, probe[1], probe[2], re, im)


def _effective_univariate(f: MPoly):
    used = [i for i in range(f.nvars) if f.deg(i) > 0]
    if len(used) != 1:
        return None, None
    i = used[0]
    return i, UPoly.from_mpoly(f.map_exponents(1, lambda a: (a[i],)))


def check_stability(f: MPoly, cfg: SamplingConfig | None = None) -> MultiVerdict:
    """Stability on the open upper half-plane power.

    Exact when at most one variable occurs; otherwise ``cfg.samples`` probes
    (real lines and coordinate slices) are each decided exactly.
    """
    cfg = cfg or SamplingConfig()
    if f.is_zero():
        return MultiVerdict(ZERO)
    if f.is_constant():
        return MultiVerdict(EXACT, detail="nonzero constant")
    i, u = _effective_univariate(f)
    if u is not None:
        v = is_stable_uni(u)
        if v.stable:
            return MultiVerdict(EXACT, detail="one active variable")
        # along the diagonal line the restriction is u itself
        lam = tuple([mpq(1)] * f.nvars)
        alpha = tuple([mpq(0)] * f.nvars)
        point = None
        if v.witness.exact_root is not None:
            point = tuple(v.witness.exact_root if j == i else Scalar(0, 1) for j in range(f.nvars))
        return MultiVerdict(REFUTED, MultiWitness(lam, alpha, uni=v.witness, point=point), detail="one active variable")
    k = _first_bad_sample(f, cfg)
    if k is None:
        return MultiVerdict(PASSED, samples=cfg.samples, seed=cfg.seed)
    return MultiVerdict(REFUTED, probe_witness(f, sample_probe(k, f.nvars, cfg)))


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def check_real_stability(f: MPoly, cfg: SamplingConfig | None = None) -> MultiVerdict:
    """Real stability: real coefficients plus stability."""
    if not f.is_real():
        for alpha, c in f.items():
            if c.im != 0:
                name = "*".join(f"z{j + 1}^{e}" for j, e in enumerate(alpha) if e) or "1"
                return MultiVerdict(REFUTED, MultiWitness(note=f"nonreal coefficient {c} at {name}"))
    return check_stability(f, cfg)


def verify_witness(f: MPoly, w: MultiWitness) -> bool:
    """Re-check a refutation certificate exactly."""
    if w.point is not None:
        return all(x.im > 0 for x in w.point) and f.evaluate(list(w.point)).is_zero()
    if w.note is not None and w.lam is None and w.slice_index is None:
        return not f.is_real()
    if w.lam is not None:
        re, im = line_restriction_parts(f, w.lam, w.alpha)
        re, im = _trim(re), _trim(im)
    elif w.slice_index is not None:
        if any(x.im <= 0 for i, x in enumerate(w.fixed) if i != w.slice_index):
            return False
        re, im = slice_parts(f, w.slice_index, w.fixed)
    else:
        return False
    if not re and not im:
        return True
    y = w.uni.im_lower if w.uni is not None else mpq(0)
    from .univariate import _shift_imag

    if y != 0:
        re, im = _shift_imag(re, im, y)
    return _upper_count_parts(re, im) > 0


# ---------------------------------------------------------------------------
# Wronskians and proper position


def wronskian_j(g: MPoly, f: MPoly, j: int) -> MPoly:
    """``dg/dz_j * f - g * df/dz_j``."""
    if g.nvars != f.nvars:
        raise DimensionError("wronskian_j needs polynomials in the same ring")
    return g.derivative(j) * f - g * f.derivative(j)


def _extend(f: MPoly, extra: int = 1) -> MPoly:
    return f.embed(f.nvars + extra, list(range(f.nvars)))


def _transport_point_to_pencil(f, g, point):
    """Exact zero of ``g + z_{n+1} f`` from an approximate zero of ``g + i f``."""
    pt = []
    for x in point:
        z = complex(x)
        if z.imag <= 0:
            return None
        pt.append(Scalar(_rationalize(z.real), _rationalize(z.imag)))
    fv = f.evaluate(pt)
    if fv.is_zero():
        return None
    zeta = -g.evaluate(pt) / fv
    if zeta.im <= 0:
        return None
    return tuple(pt) + (zeta,)


def _approx_point(w: MultiWitness):
    if w.point is not None:
        return [complex(x) for x in w.point]
    if w.uni is None or w.uni.approx_root is None:
        return None
    t = w.uni.approx_root
    if w.slice_index is not None:
        return [t if i == w.slice_index else complex(x) for i, x in enumerate(w.fixed)]
    return [float(l) * t + float(a) for l, a in zip(w.lam, w.alpha)]


def proper_position_multi(f: MPoly, g: MPoly, cfg: SamplingConfig | None = None) -> MultiVerdict:
    """Decide ``f << g``, i.e. stability of ``g + i f``.

    In strict mode (real ``f, g``) the verdict is cross-checked against
    ``g + z_{n+1} f`` in ``n + 1`` variables; a disagreement is first resolved
    by transporting the witness from one route to the other and only raises
    :class:`InconsistencyError` when that fails.
    """
    cfg = cfg or SamplingConfig()
    if f.nvars != g.nvars:
        raise DimensionError("proper_position_multi needs polynomials in the same ring")
    if f.is_zero() and g.is_zero():
        return MultiVerdict(ZERO, detail="f = g = 0")
    h = g + f.scale(Scalar(0, 1))
    v1 = check_stability(h, cfg)
    if not cfg.strict or not (f.is_real() and g.is_real()):
        return v1
    n = f.nvars
    pencil = _extend(g) + MPoly.var(n, n + 1) * _extend(f)
    v2 = check_stability(pencil, cfg)
    if v1.passed == v2.passed:
        return v1
    if v1.refuted:
        p = _approx_point(v1.witness)
        pt = _transport_point_to_pencil(f, g, p) if p is not None else None
        if pt is not None and pencil.evaluate(list(pt)).is_zero():
            return v1
        raise InconsistencyError("proper position routes disagree and the witness did not transport")
    # v2 refuted: move its witness onto the line through the zero
    p = _approx_point(v2.witness)
    if p is not None:
        lam = [_rationalize(z.imag) for z in p[:n]]
        alpha = [_rationalize(z.real) for z in p[:n]]
        if all(l > 0 for l in lam):
            re, im = line_restriction_parts(h, lam, alpha)
            re, im = _trim(re), _trim(im)
            if (not re and not im) or _upper_count_parts(re, im) > 0:
                return MultiVerdict(REFUTED, _line_witness(h, lam, alpha, re, im), detail="witness transported from the pencil route")
    raise InconsistencyError("proper position routes disagree and the witness did not transport")


@dataclass
class HKOReport:
    pencil_ok: bool
    failing_member: tuple | None
    members_checked: int
    f_ll_g: MultiVerdict
    g_ll_f: MultiVerdict
    wronskian_signs: dict = field(default_factory=dict)
    wronskian_consistent: bool = True

    @property
    def consistent(self) -> bool:
        pp = self.f_ll_g.passed or self.g_ll_f.passed or self.f_ll_g.status == ZERO
        return self.pencil_ok == pp and self.wronskian_consistent

    def to_json(self):
        return {
            "pencil_ok": self.pencil_ok,
            "failing_member": None if self.failing_member is None else [rational_str(x) for x in self.failing_member],
            "members_checked": self.members_checked,
            "f_ll_g": self.f_ll_g.to_json(),
            "g_ll_f": self.g_ll_f.to_json(),
            "wronskian_signs": self.wronskian_signs,
            "wronskian_consistent": self.wronskian_consistent,
            "consistent": self.consistent,
        }


def hko_pencil_check(f: MPoly, g: MPoly, cfg: SamplingConfig | None = None, members: int = 16, points: int = 32) -> HKOReport:
    """Sampled check that every nonzero ``a f + b g`` is real stable, compared
    with the proper-position verdicts and the Wronskian sign rule."""
    cfg = cfg or SamplingConfig()
    if not (f.is_real() and g.is_real()):
        raise PreconditionError("pencil check needs real polynomials")
    if f.nvars != g.nvars:
        raise DimensionError("pencil check needs polynomials in the same ring")
    rng = random.Random(cfg.seed * 7919 + 17)
    pairs = [(mpq(1), mpq(0)), (mpq(0), mpq(1)), (mpq(1), mpq(1)), (mpq(1), mpq(-1))]
    while len(pairs) < members:
        pairs.append((_rand_real(rng, cfg.height), _rand_real(rng, cfg.height)))
    failing = None
    for a, b in pairs:
        m = f.scale(a) + g.scale(b)
        if m.is_zero():
            continue
        if check_stability(m, cfg).refuted:
            failing = (a, b)
            break
    fg = proper_position_multi(f, g, cfg)
    gf = proper_position_multi(g, f, cfg)
    signs = {}
    ok = True
    for j in range(f.nvars):
        W = wronskian_j(g, f, j)
        seen = set()
        for _ in range(points):
            x = [_rand_real(rng, cfg.height) for _ in range(f.nvars)]
            v = W.evaluate(x).re
            seen.add((v > 0) - (v < 0))
        signs[f"z{j + 1}"] = sorted(seen)
        if gf.passed and 1 in seen:
            ok = False
        if fg.passed and -1 in seen:
            ok = False
    return HKOReport(failing is None, failing, len(pairs), fg, gf, signs, ok)


# ---------------------------------------------------------------------------
# Lieb-Sokal and generators


def lieb_sokal(P: MPoly, Q: MPoly, j: int, cfg: SamplingConfig | None = None, check_input: bool = True):
    """``P - dQ/dz_j`` for stable ``P + w Q`` of degree at most one in ``z_j``."""
    cfg = cfg or SamplingConfig()
    if P.nvars != Q.nvars:
        raise DimensionError("P and Q must share a ring")
    if not 0 <= j < P.nvars:
        raise IndexError(f"variable index {j} out of range")
    if P.deg(j) > 1 or Q.deg(j) > 1:
        raise PreconditionError(f"P + wQ has degree > 1 in z{j + 1}")
    if check_input:
        n = P.nvars
        whole = _extend(P) + MPoly.var(n, n + 1) * _extend(Q)
        v = check_stability(whole, cfg)
        if v.refuted:
            raise PreconditionError("P + wQ is not stable")
    out = P - Q.derivative(j)
    return out, check_stability(out, cfg)


def _im_vector(W):
    W = [Scalar.coerce(x) for x in W]
    if any(x.im <= 0 for x in W):
        raise PreconditionError("W must lie in the open upper half-plane")
    return W


def perturbation_epsilon(kappa, W, f: MPoly) -> mpq | None:
    """Rational ``eps`` with ``(z+W)^kappa + eps f`` stable, or None when ``f = 0``."""
    W = _im_vector(W)
    n = len(kappa)
    if f.nvars != n:
        raise DimensionError("f and kappa disagree on the number of variables")
    if any(f.deg(i) > kappa[i] for i in range(n)) and not f.is_zero():
        raise PreconditionError("f must have degree at most kappa")
    if f.is_zero():
        return None
    # expand f in powers of u = z + W, i.e. compute f(u - W)
    subs = [MPoly.var(i, n) - W[i] for i in range(n)]
    c = f.compose(subs)
    Y = [x.im for x in W]
    total = mpq(0)
    for alpha, coeff in c.terms.items():
        w = mpq(1)
        for a, k, y in zip(alpha, kappa, Y):
            w *= y ** (a - k) if a >= k else 1 / y ** (k - a)
        total += coeff.abs_bound() * w
    return 1 / (2 * total)


def generate_stable(kappa, W, f: MPoly | None = None, eps=None) -> MPoly:
    """``(z + W)^kappa + eps f`` with ``eps`` small enough to keep stability."""
    W = _im_vector(W)
    n = len(kappa)
    base = MPoly.constant(1, n)
    for i, k in enumerate(kappa):
        base = base * (MPoly.var(i, n) + W[i]) ** k
    if f is None or f.is_zero():
        return base
    bound = perturbation_epsilon(kappa, W, f)
    if eps is None:
        eps = bound
    else:
        eps = mpq(Fraction(eps)) if not isinstance(eps, type(mpq())) else eps
        if eps > bound:
            raise PreconditionError(f"eps exceeds the guaranteed bound {rational_str(bound)}")
    return base + f.scale(eps)


def random_poly(rng: random.Random, kappa, height: int = 5, density: float = 0.7, complex_coeffs=True) -> MPoly:
    """Random polynomial of degree at most ``kappa`` with small Gaussian-rational coefficients."""
    terms = {}
    for alpha in box(kappa):
        if rng.random() < density:
            re = mpq(rng.randint(-height, height), rng.randint(1, 3))
            im = mpq(rng.randint(-height, height), rng.randint(1, 3)) if complex_coeffs else mpq(0)
            terms[alpha] = Scalar._raw(re, im)
    return MPoly(len(kappa), terms)


def random_stable(rng: random.Random, kappa, height: int = 4, complex_coeffs=True) -> MPoly:
    """Stable polynomial from the generator with a random centre and perturbation."""
    W = []
    for _ in kappa:
        re = mpq(rng.randint(-height, height), rng.randint(1, 3))
        im = mpq(rng.randint(1, height), rng.randint(1, 3))
        W.append(Scalar._raw(re, im) if complex_coeffs else Scalar._raw(mpq(0), im))
    f = random_poly(rng, kappa, height, complex_coeffs=complex_coeffs)
    return generate_stable(kappa, W, f)


def random_real_stable(rng: random.Random, kappa) -> MPoly:
    """Product of real linear forms with nonnegative variable coefficients, within ``kappa``."""
    n = len(kappa)
    f = MPoly.constant(1, n)
    room = list(kappa)
    while any(room):
        i = rng.choice([j for j in range(n) if room[j]])
        form = MPoly.var(i, n) + mpq(rng.randint(-6, 6), rng.randint(1, 3))
        room[i] -= 1
        others = [j for j in range(n) if room[j] and j != i]
        if others and rng.random() < 0.5:
            j = rng.choice(others)
            form = form + MPoly.var(j, n).scale(mpq(rng.randint(1, 4), rng.randint(1, 3)))
            room[j] -= 1
        f = f * form
    return f


@dataclass(frozen=True)
class RealMultiple:
    result: bool
    factor: Scalar | None = None
    real_poly: MPoly | None = None
    verdict: MultiVerdict | None = None

    def __bool__(self):
        return self.result

    def to_json(self):
        out = {"result": self.result}
        if self.factor is not None:
            out["factor"] = str(self.factor)
            out["real_poly"] = str(self.real_poly)
        if self.verdict is not None:
            out["verdict"] = self.verdict.to_json()
        return out


def is_complex_multiple_of_real_stable(f: MPoly, cfg: SamplingConfig | None = None) -> RealMultiple:
    """Is ``f = c g`` with ``c`` complex and ``g`` real stable?"""
    if f.is_zero():
        raise EmptySupportError("the zero polynomial is excluded")
    c = f.items()[0][1]
    g = f.scale(c.inverse())
    if not g.is_real():
        return RealMultiple(False)
    v = check_stability(g, cfg)
    return RealMultiple(v.passed, c, g, v)
