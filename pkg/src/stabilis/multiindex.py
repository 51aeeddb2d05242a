"""Multi-index combinatorics: binomials, falling factorials, Jensen multipliers."""

from __future__ import annotations

import itertools
import math

from gmpy2 import mpq

__all__ = [
    "leq",
    "box",
    "binom",
    "falling",
    "jensen",
    "factorial",
    "power",
]


def leq(alpha, beta) -> bool:
    """Product order on N^n."""
    return all(a <= b for a, b in zip(alpha, beta))


def box(kappa):
    """All multi-indices ``alpha <= kappa`` in lexicographic order."""
    return list(itertools.product(*(range(k + 1) for k in kappa)))


def binom(kappa, alpha) -> int:
    """Multi-index binomial, zero unless ``alpha <= kappa``."""
    if len(kappa) != len(alpha):
        raise ValueError("multi-index length mismatch")
    if not leq(alpha, kappa) or any(a < 0 for a in alpha):
        return 0
    out = 1
    for k, a in zip(kappa, alpha):
        out *= math.comb(k, a)
    return out


def factorial(alpha) -> int:
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def power(beta, alpha) -> int:
    """``beta ** alpha`` componentwise, with ``0 ** 0 = 1``."""
    out = 1
    for b, a in zip(beta, alpha):
        out *= b**a
    return out


def falling(beta, alpha) -> int:
    """``(beta)_alpha = beta! / (beta - alpha)!``, zero unless ``alpha <= beta``."""
    if not leq(alpha, beta):
        return 0
    out = 1
    for b, a in zip(beta, alpha):
        out *= math.perm(b, a)
    return out


def jensen(alpha, beta) -> mpq:
    """Jensen multiplier ``J(alpha, beta) = (beta)_alpha * beta^(-alpha)``.

    Uses ``k^(+-k) = 1`` for ``k = 0``; when ``beta_i = 0`` and ``alpha_i > 0``
    the falling factorial already vanishes.
    """
    num = falling(beta, alpha)
    if num == 0:
        return mpq(0)
    return mpq(num, power(beta, alpha))
