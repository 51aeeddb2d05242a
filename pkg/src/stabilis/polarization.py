"""Polarization of polynomials and operators.

A polynomial of degree at most ``kappa`` is lifted to the block-symmetric
multi-affine polynomial in variables ``z_{i,j}`` (``1 <= j <= kappa_i``),
flattened block by block into one variable list. Projection sends every
``z_{i,j}`` back to ``z_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import DomainError, PreconditionError
from .multiindex import binom, box, leq
from .multivariate import (
    MultiVerdict,
    MultiWitness,
    SamplingConfig,
    check_stability,
    verify_witness,
)
from .operators import LinearOperatorSpec, algebraic_symbol
from .parsing import polarized_names, serialize
from .poly import MPoly, UPoly
from .scalar import Scalar
from .univariate import upper_root_count

__all__ = [
    "PolarizedVars",
    "polarize",
    "project",
    "polarize_operator",
    "reconstruct_operator",
    "polarized_symbol_identity_check",
    "GWSReport",
    "gws_consistency_check",
]


class PolarizedVars:
    """Flat layout of the variables ``z_{i,j}``; blocks are contiguous."""

    def __init__(self, kappa):
        self.kappa = tuple(int(k) for k in kappa)
        if any(k < 0 for k in self.kappa):
            raise DomainError("block sizes must be non-negative")
        self.offsets = []
        pos = 0
        for k in self.kappa:
            self.offsets.append(pos)
            pos += k
        self.nvars = pos

    def position(self, i: int, j: int) -> int:
        """Flat index of ``z_{i,j}`` (both 0-based)."""
        if not (0 <= i < len(self.kappa) and 0 <= j < self.kappa[i]):
            raise DomainError(f"no polarized variable ({i + 1},{j + 1})")
        return self.offsets[i] + j

    def block(self, i: int):
        return range(self.offsets[i], self.offsets[i] + self.kappa[i])

    def owner(self):
        """Block index of every flat position."""
        return [i for i, k in enumerate(self.kappa) for _ in range(k)]

    def names(self):
        return polarized_names(self.kappa)

    def __repr__(self):
        return f"PolarizedVars({self.kappa})"


def _elementary(m: int):
    """Exponent vectors of ``E_0..E_m`` in ``m`` variables, by convolution."""
    # E(t) = prod (1 + x_j t); track the coefficient of t^k as a set of exponents
    levels = [[()]]
    for j in range(m):
        nxt = [[] for _ in range(j + 2)]
        for k, monos in enumerate(levels):
            for a in monos:
                nxt[k].append(a + (0,))
                nxt[k + 1].append(a + (1,))
        levels = nxt
    return levels


def polarize(f: MPoly, kappa) -> MPoly:
    """Block-symmetric multi-affine lift of ``f``."""
    kappa = tuple(kappa)
    if len(kappa) != f.nvars:
        raise DomainError("kappa length differs from the number of variables")
    if not all(leq(a, kappa) for a in f.support()):
        raise DomainError(f"degree {f.degrees()} exceeds kappa={kappa}")
    E = [_elementary(k) for k in kappa]
    out = {}
    for alpha, c in f.terms.items():
        c = c * Scalar(mpq(1, binom(kappa, alpha)))
        parts = [()]
        for i, a in enumerate(alpha):
            parts = [p + e for p in parts for e in E[i][a]]
        for e in parts:
            prev = out.get(e)
            out[e] = c if prev is None else prev + c
    return MPoly(sum(kappa), out)


def project(F: MPoly, kappa) -> MPoly:
    """Substitute ``z_{i,j} -> z_i``."""
    pv = PolarizedVars(kappa)
    if F.nvars != pv.nvars:
        raise DomainError(f"polynomial has {F.nvars} variables, blocks need {pv.nvars}")
    if not F.is_multiaffine():
        raise PreconditionError("projection expects a multi-affine polynomial")
    owner = pv.owner()
    n = len(pv.kappa)

    def fn(e):
        a = [0] * n
        for p, x in enumerate(e):
            a[owner[p]] += x
        return a

    return F.map_exponents(n, fn)


def polarize_operator(T: LinearOperatorSpec, kappa=None, gamma=None) -> LinearOperatorSpec:
    """``Pi(T) = lift_gamma o T o project_kappa`` on multi-affine polynomials."""
    T = T.with_kappa(kappa) if kappa is not None else T
    kappa = T.kappa
    gamma = tuple(gamma) if gamma is not None else T.codomain_degree()
    if len(gamma) != T.out_nvars:
        raise DomainError("gamma length differs from the codomain variables")
    N = sum(kappa)
    owner = PolarizedVars(kappa).owner()
    cache = {}
    images = {}
    for e in box((1,) * N):
        alpha = [0] * len(kappa)
        for p, x in enumerate(e):
            alpha[owner[p]] += x
        alpha = tuple(alpha)
        if alpha not in cache:
            cache[alpha] = polarize(T.images[alpha], gamma)
        images[e] = cache[alpha]
    meta = {"kappa": kappa, "gamma": gamma}
    return LinearOperatorSpec(N, (1,) * N, images, "polarized", sum(gamma), meta=meta)


def reconstruct_operator(PT: LinearOperatorSpec, kappa, gamma) -> LinearOperatorSpec:
    """``project_gamma o Pi(T) o lift_kappa``; recovers ``T``."""
    kappa, gamma = tuple(kappa), tuple(gamma)
    images = {}
    for alpha in box(kappa):
        lifted = polarize(MPoly.monomial(alpha, 1), kappa)
        img = MPoly.zero(PT.out_nvars)
        for e, c in lifted.terms.items():
            img = img + PT.images[e].scale(c)
        images[alpha] = project(img, gamma)
    return LinearOperatorSpec(len(kappa), kappa, images, "table", len(gamma))


def polarized_symbol_identity_check(T: LinearOperatorSpec, kappa=None, gamma=None) -> bool:
    """Compare the symbol of ``Pi(T)`` with the polarization of the symbol of ``T``."""
    T = T.with_kappa(kappa) if kappa is not None else T
    gamma = tuple(gamma) if gamma is not None else T.codomain_degree()
    PT = polarize_operator(T, gamma=gamma)
    lhs = algebraic_symbol(PT)
    rhs = polarize(algebraic_symbol(T), gamma + T.kappa)
    return lhs == rhs


@dataclass
class GWSReport:
    kappa: tuple
    original: MultiVerdict
    polarized: MultiVerdict
    polarized_poly: MPoly
    diagonal_witness: MultiWitness | None = None
    diagonal_ok: bool | None = None
    region_lower: object = None
    region_count: int | None = None

    @property
    def agree(self) -> bool:
        return self.original.refuted == self.polarized.refuted

    @property
    def consistent(self) -> bool:
        """Verdicts agree and every transported witness checks out."""
        if not self.agree:
            return False
        if self.diagonal_ok is False:
            return False
        if self.region_count is not None and self.region_count == 0:
            return False
        return True

    def to_json(self):
        out = {
            "kappa": list(self.kappa),
            "f": self.original.to_json(),
            "polarized": serialize(self.polarized_poly, polarized_names(self.kappa)),
            "polarized_verdict": self.polarized.to_json(),
            "agree": self.agree,
            "consistent": self.consistent,
        }
        if self.diagonal_witness is not None:
            out["diagonal_witness"] = {"witness": self.diagonal_witness.to_json(), "verified": self.diagonal_ok}
        if self.region_count is not None:
            out["region"] = {"im_greater_than": str(self.region_lower), "roots_of_f": self.region_count}
        return out


def _lower_im_bound(w: MultiWitness):
    """Rational ``m`` with every coordinate of the refuting zero above ``Im = m``."""
    if w.point is not None:
        return min(x.im for x in w.point) / 2
    if w.uni is None:
        return None
    y = mpq(w.uni.im_lower)
    if w.slice_index is not None:
        return min([y] + [x.im for i, x in enumerate(w.fixed) if i != w.slice_index])
    return min(w.lam) * y


def gws_consistency_check(f, kappa=None, cfg: SamplingConfig | None = None) -> GWSReport:
    """Stability of ``f`` against stability of its polarization.

    A refutation of ``f`` is carried to the diagonal line of the polarized
    ring, where the restriction is ``f`` itself. For univariate ``f`` a
    refutation of the polarization bounds the imaginary parts of its zero
    from below by some ``m``; the half-plane ``Im z > m`` is a convex circular
    domain containing every coordinate, so ``f`` must have a root there, and
    the exact count is recorded.
    """
    if isinstance(f, UPoly):
        f = f.to_mpoly()
    cfg = cfg or SamplingConfig()
    kappa = tuple(kappa) if kappa is not None else tuple(max(d, 0) for d in f.degrees())
    F = polarize(f, kappa)
    vf = check_stability(f, cfg)
    vF = check_stability(F, cfg)
    rep = GWSReport(kappa, vf, vF, F)
    N = F.nvars
    if vf.refuted and N > 0 and vf.witness is not None and vf.witness.uni is not None:
        w = vf.witness
        lam = tuple([mpq(1)] * N)
        alpha = tuple([mpq(0)] * N)
        point = None
        if f.nvars == 1 and w.uni.exact_root is not None:
            point = tuple([w.uni.exact_root] * N)
        dw = MultiWitness(lam, alpha, uni=w.uni, point=point)
        rep.diagonal_witness = dw
        rep.diagonal_ok = verify_witness(F, dw)
    if vF.refuted and f.nvars == 1 and vF.witness is not None:
        m = _lower_im_bound(vF.witness)
        if m is not None and m >= 0:
            rep.region_lower = m
            rep.region_count = upper_root_count(UPoly.from_mpoly(f), m)
    return rep
