"""Linear operators on polynomial spaces of bounded degree, their symbols and
the stability-preserver certifiers.

An operator is stored as its monomial table ``alpha -> T(z^alpha)`` for all
``alpha <= kappa``. Operators defined on the whole ring (diagonal or
differential) keep a generator so the table can be rebuilt for any ``kappa``.

Symbols live in ``out_nvars + nvars`` variables ordered ``z`` (codomain)
then ``w`` (domain).
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import DomainError, PreconditionError, SchemaError
from .multiindex import binom, box, factorial, falling, jensen, leq
from .multivariate import (
    MultiVerdict,
    SamplingConfig,
    _approx_point,
    check_real_stability,
    check_stability,
    generate_stable,
    proper_position_multi,
    random_poly,
    random_real_stable,
)
from .parsing import parse_polynomial, parse_scalar, serialize
from .poly import MPoly, reciprocal
from .scalar import Scalar

__all__ = [
    "LinearOperatorSpec",
    "CertificationReport",
    "RangeInfo",
    "RefuterResult",
    "apply",
    "algebraic_symbol",
    "alt_symbol",
    "reflected_symbol",
    "halfplane_symbol_truncation",
    "transcendental_truncation",
    "transcendental_truncation_check",
    "alt_symbol_identity_holds",
    "range_dimension",
    "certify_complex_preserver",
    "certify_real_preserver",
    "certify_transcendental",
    "refute_preserver",
    "jensen_operator",
    "parse_operator",
    "operator_from_json",
    "symbol_text",
]

PRESERVER_DEGENERATE = "Preserver-Degenerate"
PRESERVER_SYMBOL = "Preserver-SymbolStable"
NOT_PRESERVER = "NotPreserver"
INCONCLUSIVE = "Inconclusive"


def _monomial(alpha, n=None):
    return MPoly.monomial(tuple(alpha), 1)


class LinearOperatorSpec:
    """Linear map ``K_kappa[z_1..z_n] -> K[z_1..z_m]`` given by its monomial table."""

    def __init__(self, nvars: int, kappa, images, kind: str = "table", out_nvars: int | None = None, generator=None, meta=None):
        kappa = tuple(int(k) for k in kappa)
        if len(kappa) != nvars:
            raise DomainError("kappa length differs from nvars")
        if any(k < 0 for k in kappa):
            raise DomainError("kappa entries must be non-negative")
        self.nvars = nvars
        self.kappa = kappa
        self.out_nvars = nvars if out_nvars is None else out_nvars
        self.kind = kind
        self.generator = generator
        self.meta = dict(meta or {})
        table = {}
        for alpha in box(kappa):
            img = images.get(alpha) if isinstance(images, dict) else None
            if img is None:
                img = MPoly.zero(self.out_nvars)
            if img.nvars != self.out_nvars:
                raise DomainError(f"image of {alpha} has {img.nvars} variables, expected {self.out_nvars}")
            table[alpha] = img
        if isinstance(images, dict):
            extra = [a for a in images if not leq(a, kappa)]
            if extra:
                raise DomainError(f"table entries outside kappa: {extra[:3]}")
        self.images = table

    # -- constructors ---------------------------------------------------
    @classmethod
    def table(cls, nvars, kappa, images, out_nvars=None):
        images = {tuple(a): (p if isinstance(p, MPoly) else parse_polynomial(p, nvars=out_nvars or nvars)) for a, p in images.items()}
        return cls(nvars, kappa, images, "table", out_nvars)

    @classmethod
    def from_generator(cls, nvars, kappa, gen, kind, out_nvars=None, meta=None):
        images = {a: gen(a) for a in box(kappa)}
        return cls(nvars, kappa, images, kind, out_nvars, generator=gen, meta=meta)

    @classmethod
    def diagonal(cls, kappa, values):
        """``z^alpha -> lambda(alpha) z^alpha``; ``values`` is a dict or a callable."""
        n = len(kappa)
        if callable(values):
            fn = values
        else:
            vals = {tuple(a): Scalar.coerce(v) for a, v in values.items()}

            def fn(a):
                return vals.get(tuple(a), Scalar(0))

        def gen(alpha):
            return MPoly.monomial(alpha, fn(alpha))

        return cls.from_generator(n, kappa, gen, "diagonal")

    @classmethod
    def differential(cls, kappa, terms):
        """``sum c z^a d^b`` from ``[(c, a, b), ...]``."""
        n = len(kappa)
        terms = [(Scalar.coerce(c), tuple(a), tuple(b)) for c, a, b in terms]
        for _, a, b in terms:
            if len(a) != n or len(b) != n:
                raise DomainError("differential term exponent has wrong length")

        def gen(gamma):
            out = {}
            for c, a, b in terms:
                k = falling(gamma, b)
                if k == 0:
                    continue
                e = tuple(x + y - z for x, y, z in zip(a, gamma, b))
                out[e] = out.get(e, Scalar(0)) + c * k
            return MPoly(n, out)

        return cls.from_generator(n, kappa, gen, "differential", meta={"terms": terms})

    @classmethod
    def from_function(cls, nvars, kappa, fn, out_nvars=None, kind="function"):
        """Tabulate a Python function ``MPoly -> MPoly`` on the monomials."""

        def gen(alpha):
            return fn(MPoly.monomial(alpha, 1))

        return cls.from_generator(nvars, kappa, gen, kind, out_nvars)

    @classmethod
    def identity(cls, kappa):
        return cls.diagonal(kappa, lambda a: Scalar(1))

    @classmethod
    def derivative(cls, kappa, j: int = 0):
        n = len(kappa)
        b = tuple(1 if i == j else 0 for i in range(n))
        return cls.differential(kappa, [(1, (0,) * n, b)])

    # -- structure --------------------------------------------------------
    def image(self, alpha) -> MPoly:
        alpha = tuple(alpha)
        if alpha in self.images:
            return self.images[alpha]
        if self.generator is not None and len(alpha) == self.nvars:
            return self.generator(alpha)
        raise DomainError(f"operator table has no entry for {alpha}")

    def with_kappa(self, kappa) -> "LinearOperatorSpec":
        """Same operator on ``K_kappa``; needs a generator unless ``kappa <= self.kappa``."""
        kappa = tuple(kappa)
        if len(kappa) != self.nvars:
            raise DomainError("kappa length differs from nvars")
        if kappa == self.kappa:
            return self
        if self.generator is None and not leq(kappa, self.kappa):
            raise DomainError(f"operator table covers kappa={self.kappa}, not {kappa}")
        images = {a: self.image(a) for a in box(kappa)}
        return LinearOperatorSpec(self.nvars, kappa, images, self.kind, self.out_nvars, self.generator, self.meta)

    def codomain_degree(self):
        gamma = [0] * self.out_nvars
        for img in self.images.values():
            for i in range(self.out_nvars):
                d = img.deg(i)
                if d != float("-inf"):
                    gamma[i] = max(gamma[i], d)
        return tuple(gamma)

    def is_real(self) -> bool:
        return all(p.is_real() for p in self.images.values())

    def __call__(self, f: MPoly) -> MPoly:
        return apply(self, f)

    def __add__(self, other):
        if (other.nvars, other.kappa, other.out_nvars) != (self.nvars, self.kappa, self.out_nvars):
            raise DomainError("operators act on different spaces")
        return LinearOperatorSpec(self.nvars, self.kappa, {a: self.images[a] + other.images[a] for a in self.images}, "table", self.out_nvars)

    def scale(self, c) -> "LinearOperatorSpec":
        return LinearOperatorSpec(self.nvars, self.kappa, {a: p.scale(c) for a, p in self.images.items()}, "table", self.out_nvars)

    def compose(self, inner: "LinearOperatorSpec") -> "LinearOperatorSpec":
        """``self o inner`` on the domain of ``inner``."""
        images = {}
        for a, p in inner.images.items():
            images[a] = apply(self, p)
        return LinearOperatorSpec(inner.nvars, inner.kappa, images, "composition", self.out_nvars)

    def to_json(self):
        return {
            "nvars": self.nvars,
            "out_nvars": self.out_nvars,
            "kappa": list(self.kappa),
            "kind": "table",
            "images": [{"monomial": list(a), "poly": serialize(p)} for a, p in sorted(self.images.items()) if not p.is_zero()],
        }

    def __repr__(self):
        return f"LinearOperatorSpec(nvars={self.nvars}, kappa={self.kappa}, kind={self.kind!r})"


def apply(T: LinearOperatorSpec, f: MPoly) -> MPoly:
    """``T(f)`` by linearity over the monomial table."""
    if f.nvars != T.nvars:
        raise DomainError(f"f has {f.nvars} variables, operator expects {T.nvars}")
    out = MPoly.zero(T.out_nvars)
    for alpha, c in f.terms.items():
        if not leq(alpha, T.kappa):
            raise DomainError(f"monomial {alpha} exceeds kappa={T.kappa}")
        out = out + T.images[alpha].scale(c)
    return out


# ---------------------------------------------------------------------------
# symbols


def _lift_z(p: MPoly, n: int) -> MPoly:
    return p.embed(p.nvars + n, list(range(p.nvars)))


def _wmono(m: int, alpha) -> MPoly:
    return MPoly.monomial((0,) * m + tuple(alpha), 1)


def _symbol(T, kappa, weight, wexp):
    T = T.with_kappa(kappa) if kappa is not None else T
    m, n = T.out_nvars, T.nvars
    out = {}
    for alpha in box(T.kappa):
        c = weight(alpha, T.kappa)
        if c == 0:
            continue
        img = T.images[alpha]
        we = wexp(alpha, T.kappa)
        for beta, v in img.terms.items():
            key = beta + tuple(we)
            prev = out.get(key)
            v = v * c
            out[key] = v if prev is None else prev + v
    return MPoly(m + n, out)


def algebraic_symbol(T: LinearOperatorSpec, kappa=None) -> MPoly:
    """``G_T(z, w) = sum binom(kappa, alpha) T(z^alpha) w^(kappa - alpha)``."""
    return _symbol(T, kappa, lambda a, k: binom(k, a), lambda a, k: [x - y for x, y in zip(k, a)])


def alt_symbol(T: LinearOperatorSpec, kappa=None) -> MPoly:
    """``T[(1 - zw)^kappa] = sum (-1)^|alpha| binom(kappa, alpha) T(z^alpha) w^alpha``."""
    return _symbol(T, kappa, lambda a, k: (-1) ** sum(a) * binom(k, a), lambda a, k: a)


def reflected_symbol(T: LinearOperatorSpec, kappa=None) -> MPoly:
    """``G_T(z, -w)``."""
    return _symbol(T, kappa, lambda a, k: (-1) ** (sum(k) - sum(a)) * binom(k, a), lambda a, k: [x - y for x, y in zip(k, a)])


def halfplane_symbol_truncation(T: LinearOperatorSpec, beta) -> MPoly:
    """``sum_{alpha <= beta} binom(beta, alpha) T(z^alpha) w^alpha`` (sign-free truncation)."""
    return _symbol(T, beta, lambda a, k: binom(k, a), lambda a, k: a)


def transcendental_truncation(T: LinearOperatorSpec, beta) -> MPoly:
    """``sum_{alpha <= beta} (beta)_alpha (-1)^alpha T(z^alpha) w^alpha / alpha!``.

    Computed from the falling factorial and ``alpha!`` directly, as the
    truncation of the series ``T[exp(-z.w)]`` by the Jensen-type weights.
    """
    return _symbol(T, beta, lambda a, k: mpq(falling(k, a) * (-1) ** sum(a), factorial(a)), lambda a, k: a)


def alt_symbol_identity_holds(T: LinearOperatorSpec, kappa=None) -> bool:
    """Check ``w^kappa G_T(z, -1/w) == (-1)^|kappa| T[(1 - zw)^kappa]`` exactly."""
    T = T.with_kappa(kappa) if kappa is not None else T
    G = algebraic_symbol(T)
    m = T.out_nvars
    R = G
    for i, k in enumerate(T.kappa):
        R = reciprocal(R, m + i, k, -1)
    A = alt_symbol(T)
    return R == A.scale((-1) ** sum(T.kappa))


def symbol_text(G: MPoly, T: LinearOperatorSpec) -> str:
    names = [f"z{i + 1}" for i in range(T.out_nvars)] + [f"w{i + 1}" for i in range(T.nvars)]
    return serialize(G, names)


# ---------------------------------------------------------------------------
# range dimension


@dataclass
class RangeInfo:
    rank: int
    basis: list
    pivots: list

    def to_json(self):
        return {"rank": self.rank, "basis": [str(p) for p in self.basis], "pivot_monomials": [list(a) for a in self.pivots]}


def range_dimension(T: LinearOperatorSpec) -> RangeInfo:
    """Rank of ``{T(z^alpha)}`` over the coefficient field, with a basis of images."""
    rows = []  # reduced rows: (pivot monomial, dict)
    basis, pivots = [], []
    for alpha in sorted(T.images):
        vec = dict(T.images[alpha].terms)
        for piv, row in rows:
            c = vec.get(piv)
            if c is None or c.is_zero():
                continue
            for k, v in row.items():
                nv = vec.get(k, Scalar(0)) - c * v
                if nv.is_zero():
                    vec.pop(k, None)
                else:
                    vec[k] = nv
        if not vec:
            continue
        piv = max(vec, key=lambda a: (sum(a), a))
        inv = vec[piv].inverse()
        row = {k: v * inv for k, v in vec.items()}
        # keep earlier rows reduced against the new pivot
        new_rows = []
        for p, r in rows:
            c = r.get(piv)
            if c is not None and not c.is_zero():
                r = dict(r)
                for k, v in row.items():
                    nv = r.get(k, Scalar(0)) - c * v
                    if nv.is_zero():
                        r.pop(k, None)
                    else:
                        r[k] = nv
            new_rows.append((p, r))
        rows = new_rows + [(piv, row)]
        basis.append(T.images[alpha])
        pivots.append(alpha)
    return RangeInfo(len(basis), basis, pivots)


# ---------------------------------------------------------------------------
# refuter


@dataclass
class RefuterResult:
    f: MPoly
    image: MPoly
    verdict: MultiVerdict
    source: str
    seconds: float = 0.0

    def to_json(self):
        return {
            "f": str(self.f),
            "T(f)": str(self.image),
            "T(f)_verdict": self.verdict.to_json(),
            "source": self.source,
        }


def _power_form(kappa, W):
    n = len(kappa)
    base = MPoly.constant(1, n)
    for i, k in enumerate(kappa):
        base = base * (MPoly.var(i, n) + W[i]) ** k
    return base


def _w_from_witness(v: MultiVerdict, m: int, n: int):
    """Domain point ``W`` (the ``w`` block) of a symbol refutation, as Gaussian rationals."""
    from .univariate import _rationalize

    w = v.witness
    if w is None:
        return None, None
    if w.point is not None:
        return list(w.point[m:]), list(w.point[:m])
    pts = _approx_point(w)
    if pts is None:
        return None, None
    W = [Scalar(_rationalize(z.real), _rationalize(z.imag)) for z in pts[m:]]
    if any(x.im <= 0 for x in W):
        return None, None
    return W, None


def refute_preserver(T: LinearOperatorSpec, symbol_verdict: MultiVerdict | None = None, cfg=None, real=False, budget: float = 10.0, tries: int = 200):
    """Search for a (real) stable ``f`` in the domain with ``T(f)`` refuted.

    Candidates: ``(z + i)^kappa``, the power form centred at the symbol's
    witness, then generated stable perturbations. Best effort: returns None
    when nothing is found within ``budget`` seconds.
    """
    cfg = cfg or SamplingConfig()
    start = time.monotonic()
    n, m = T.nvars, T.out_nvars
    check = check_real_stability if real else check_stability
    cands = []
    cands.append(("W=(i,...,i)", [Scalar(0, 1)] * n))
    if symbol_verdict is not None and symbol_verdict.refuted:
        W, _ = _w_from_witness(symbol_verdict, m, n)
        if W is not None and all(x.im > 0 for x in W):
            cands.append(("W from symbol witness", W))

    def attempt(f, source):
        img = apply(T, f)
        if img.is_zero():
            return None
        v = check(img, cfg)
        if v.refuted:
            return RefuterResult(f, img, v, source, time.monotonic() - start)
        return None

    for source, W in cands:
        base = _power_form(T.kappa, W)
        if real:
            F, G = base.parts()
            for a, b in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2)]:
                g = F.scale(a) + G.scale(b)
                if g.is_zero():
                    continue
                r = attempt(g, source + f", real part combination ({a},{b})")
                if r:
                    return r
        else:
            r = attempt(base, source)
            if r:
                return r
    rng = random.Random(cfg.seed * 31 + 7)
    for k in range(tries):
        if time.monotonic() - start > budget:
            break
        if real:
            f = random_real_stable(rng, T.kappa)
        else:
            W = [Scalar(mpq(rng.randint(-4, 4), rng.randint(1, 3)), mpq(rng.randint(1, 4), rng.randint(1, 3))) for _ in range(n)]
            f = generate_stable(T.kappa, W, random_poly(rng, T.kappa))
        r = attempt(f, f"generated sample {k}")
        if r:
            return r
    return None


# ---------------------------------------------------------------------------
# certification reports


@dataclass
class CertificationReport:
    verdict: str
    branch: str | None = None
    certified: bool = False
    symbol: MPoly | None = None
    symbol_text: str | None = None
    symbol_verdicts: dict = field(default_factory=dict)
    rank: RangeInfo | None = None
    refutation: RefuterResult | None = None
    notes: list = field(default_factory=list)

    @property
    def is_preserver(self) -> bool:
        return self.verdict in (PRESERVER_DEGENERATE, PRESERVER_SYMBOL)

    def to_json(self):
        out = {"verdict": self.verdict, "branch": self.branch, "certified": self.certified}
        if self.symbol_text is not None:
            out["symbol"] = self.symbol_text
        out["symbol_verdicts"] = {k: v.to_json() for k, v in self.symbol_verdicts.items()}
        if self.rank is not None:
            out["range"] = self.rank.to_json()
        if self.refutation is not None:
            out["refutation"] = self.refutation.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _finish(rep: CertificationReport, cfg: SamplingConfig):
    if cfg.strict and rep.is_preserver and not rep.certified:
        rep.notes.append("acceptance rests on sampling; certified output was demanded")
        rep.verdict = INCONCLUSIVE
    return rep


def certify_complex_preserver(T: LinearOperatorSpec, kappa=None, cfg: SamplingConfig | None = None, refute: bool = True) -> CertificationReport:
    """Stability preservation on ``C_kappa``.

    The symbol branch (b) is always evaluated and reported. Operators of rank
    at most one are decided by the rank-one branch (a), which is exact when
    the generator ``P`` is; otherwise the symbol verdict decides.
    """
    cfg = cfg or SamplingConfig.certification()
    T = T.with_kappa(kappa) if kappa is not None else T
    G = algebraic_symbol(T)
    rep = CertificationReport(NOT_PRESERVER, symbol=G, symbol_text=symbol_text(G, T))
    vb = check_stability(G, cfg)
    rep.symbol_verdicts["b"] = vb
    info = range_dimension(T)
    rep.rank = info
    if info.rank == 0:
        rep.verdict, rep.branch, rep.certified = PRESERVER_DEGENERATE, "a", True
        rep.notes.append("T is the zero operator")
        return rep
    if info.rank == 1:
        vp = check_stability(info.basis[0], cfg)
        rep.symbol_verdicts["a:P"] = vp
        rep.branch = "a"
        if vp.passed:
            rep.verdict, rep.certified = PRESERVER_DEGENERATE, vp.certified
            return _finish(rep, cfg)
        rep.verdict, rep.certified = NOT_PRESERVER, True
        rep.notes.append("range is one-dimensional but its generator is not stable")
        return rep
    if vb.passed:
        rep.verdict, rep.branch, rep.certified = PRESERVER_SYMBOL, "b", vb.certified
        return _finish(rep, cfg)
    rep.certified = vb.refuted
    if refute:
        rep.refutation = refute_preserver(T, vb, cfg)
    return rep


def certify_real_preserver(T: LinearOperatorSpec, kappa=None, cfg: SamplingConfig | None = None, refute: bool = True) -> CertificationReport:
    """Real stability preservation on ``R_kappa``: branches (b), (c), then the rank-two branch (a)."""
    cfg = cfg or SamplingConfig.certification()
    T = T.with_kappa(kappa) if kappa is not None else T
    if not T.is_real():
        raise PreconditionError("real certification needs real images")
    G = algebraic_symbol(T)
    rep = CertificationReport(NOT_PRESERVER, symbol=G, symbol_text=symbol_text(G, T))
    vb = check_real_stability(G, cfg)
    rep.symbol_verdicts["b"] = vb
    info = range_dimension(T)
    rep.rank = info
    if vb.passed:
        rep.verdict, rep.branch, rep.certified = PRESERVER_SYMBOL, "b", vb.certified
        return _finish(rep, cfg)
    Gm = reflected_symbol(T)
    vc = check_real_stability(Gm, cfg)
    rep.symbol_verdicts["c"] = vc
    if vc.passed:
        rep.verdict, rep.branch, rep.certified = PRESERVER_SYMBOL, "c", vc.certified
        rep.notes.append("reflected symbol G_T(z,-w) = " + symbol_text(Gm, T))
        return _finish(rep, cfg)
    if info.rank == 0:
        rep.verdict, rep.branch, rep.certified = PRESERVER_DEGENERATE, "a", True
        rep.notes.append("T is the zero operator")
        return rep
    if info.rank <= 2:
        rep.branch = "a"
        if info.rank == 1:
            P = info.basis[0]
            vp = check_real_stability(P, cfg)
            rep.symbol_verdicts["a:P"] = vp
            ok, cert = vp.passed, vp.certified
        else:
            P, Q = info.basis
            v1 = proper_position_multi(P, Q, cfg)
            rep.symbol_verdicts["a:P<<Q"] = v1
            ok, cert = v1.passed, v1.certified
            if not ok:
                v2 = proper_position_multi(Q, P, cfg)
                rep.symbol_verdicts["a:Q<<P"] = v2
                ok, cert = v2.passed, v2.certified
                if ok:
                    rep.notes.append("basis reordered: Q << P")
        if ok:
            rep.verdict, rep.certified = PRESERVER_DEGENERATE, cert
            return _finish(rep, cfg)
        rep.verdict, rep.certified = NOT_PRESERVER, True
        rep.notes.append("range has dimension <= 2 but its basis is not in proper position")
        return rep
    rep.certified = vb.refuted and vc.refuted
    if refute:
        rep.refutation = refute_preserver(T, vb, cfg, real=True)
    return rep


# ---------------------------------------------------------------------------
# transcendental truncations


def transcendental_truncation_check(T: LinearOperatorSpec, beta, cfg: SamplingConfig | None = None):
    """Stability (or vanishing) of the ``beta``-truncation; returns ``(poly, verdict)``."""
    cfg = cfg or SamplingConfig()
    P = transcendental_truncation(T, beta)
    return P, check_stability(P, cfg)


@dataclass
class SweepReport:
    beta_max: tuple
    checked: list
    first_refutation: tuple | None = None
    refutation_verdict: MultiVerdict | None = None

    @property
    def passed(self) -> bool:
        return self.first_refutation is None

    def to_json(self):
        out = {
            "beta_max": list(self.beta_max),
            "checked": [{"beta": list(b), "status": v.status} for b, v in self.checked],
            "result": "passed up to beta_max" if self.passed else "refuted",
        }
        if not self.passed:
            out["first_refutation"] = list(self.first_refutation)
            out["verdict"] = self.refutation_verdict.to_json()
        return out


def certify_transcendental(T: LinearOperatorSpec, beta_max, cfg: SamplingConfig | None = None) -> SweepReport:
    """Check every truncation ``beta <= beta_max`` in graded order; stop at the first refutation."""
    cfg = cfg or SamplingConfig()
    order = sorted(box(tuple(beta_max)), key=lambda b: (sum(b), b))
    rep = SweepReport(tuple(beta_max), [])
    for beta in order:
        _, v = transcendental_truncation_check(T, beta, cfg)
        rep.checked.append((beta, v))
        if v.refuted:
            rep.first_refutation = beta
            rep.refutation_verdict = v
            break
    return rep


def jensen_operator(beta, kappa=None, normalized: bool = False) -> LinearOperatorSpec:
    """Diagonal ``z^alpha -> (beta)_alpha z^alpha``, or ``J(alpha, beta) z^alpha`` when normalized."""
    beta = tuple(beta)
    kappa = beta if kappa is None else tuple(kappa)
    if normalized:
        T = LinearOperatorSpec.diagonal(kappa, lambda a: Scalar(jensen(a, beta)))
    else:
        T = LinearOperatorSpec.diagonal(kappa, lambda a: Scalar(falling(beta, a)))
    T.kind = "jensen"
    T.meta["beta"] = beta
    return T


# ---------------------------------------------------------------------------
# JSON


def _get(obj, key, ptr, typ=None, required=True):
    if key not in obj:
        if required:
            raise SchemaError(f"missing key {key!r}", ptr)
        return None
    v = obj[key]
    if typ is not None and not isinstance(v, typ):
        raise SchemaError(f"{key!r} has the wrong type", f"{ptr}/{key}")
    return v


def _exponent(v, n, ptr):
    if not isinstance(v, list) or len(v) != n or not all(isinstance(x, int) and x >= 0 for x in v):
        raise SchemaError(f"expected a list of {n} non-negative integers", ptr)
    return tuple(v)


def operator_from_json(obj, kappa=None) -> LinearOperatorSpec:
    """Build an operator from its JSON description (see the README for the schema)."""
    if not isinstance(obj, dict):
        raise SchemaError("operator must be a JSON object", "")
    n = _get(obj, "nvars", "", int)
    if n < 1:
        raise SchemaError("nvars must be positive", "/nvars")
    out_n = obj.get("out_nvars", n)
    if not isinstance(out_n, int) or out_n < 1:
        raise SchemaError("out_nvars must be a positive integer", "/out_nvars")
    k = obj.get("kappa")
    if k is not None:
        k = _exponent(k, n, "/kappa")
    if kappa is not None:
        kappa = tuple(kappa)
        if len(kappa) != n:
            raise SchemaError(f"kappa must have {n} entries", "/kappa")
    kind = _get(obj, "kind", "", str)
    try:
        if kind == "table":
            if k is None:
                raise SchemaError("table operators need kappa", "/kappa")
            imgs = {}
            for idx, item in enumerate(_get(obj, "images", "", list)):
                ptr = f"/images/{idx}"
                if not isinstance(item, dict):
                    raise SchemaError("image entry must be an object", ptr)
                a = _exponent(_get(item, "monomial", ptr), n, ptr + "/monomial")
                text = _get(item, "poly", ptr, str)
                try:
                    imgs[a] = parse_polynomial(text, nvars=out_n)
                except ValueError as e:
                    raise SchemaError(str(e), ptr + "/poly") from None
            T = LinearOperatorSpec(n, k, imgs, "table", out_n)
            return T.with_kappa(kappa) if kappa is not None else T
        if kind == "diagonal":
            vals = {}
            for idx, item in enumerate(_get(obj, "diag", "", list)):
                ptr = f"/diag/{idx}"
                if not isinstance(item, dict):
                    raise SchemaError("diag entry must be an object", ptr)
                a = _exponent(_get(item, "monomial", ptr), n, ptr + "/monomial")
                try:
                    vals[a] = parse_scalar(str(_get(item, "value", ptr)))
                except ValueError as e:
                    raise SchemaError(str(e), ptr + "/value") from None
            kk = kappa or k
            if kk is None:
                raise SchemaError("diagonal operators need kappa", "/kappa")
            return LinearOperatorSpec.diagonal(kk, vals)
        if kind == "differential":
            terms = []
            for idx, item in enumerate(_get(obj, "diff", "", list)):
                ptr = f"/diff/{idx}"
                if not isinstance(item, dict):
                    raise SchemaError("diff entry must be an object", ptr)
                try:
                    c = parse_scalar(str(_get(item, "coeff", ptr)))
                except ValueError as e:
                    raise SchemaError(str(e), ptr + "/coeff") from None
                terms.append((c, _exponent(_get(item, "zexp", ptr), n, ptr + "/zexp"), _exponent(_get(item, "dexp", ptr), n, ptr + "/dexp")))
            kk = kappa or k
            if kk is None:
                raise SchemaError("differential operators need kappa (in the file or on the command line)", "/kappa")
            return LinearOperatorSpec.differential(kk, terms)
    except DomainError as e:
        raise SchemaError(str(e), "") from None
    raise SchemaError(f"unknown kind {kind!r}", "/kind")


def parse_operator(text: str, kappa=None) -> LinearOperatorSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg}", f"char {e.pos}") from None
    return operator_from_json(obj, kappa)
