import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from stabilis import I, Scalar, UPoly
from stabilis.errors import PreconditionError
from stabilis.univariate import (
    INDEFINITE,
    NONPOSITIVE,
    NOT_STABLE,
    STABLE,
    ZERO_POLY,
    interlace,
    is_real_rooted,
    is_stable_uni,
    is_strictly_stable_uni,
    numeric_roots,
    oracle_is_stable,
    proper_position_uni,
    sturm_count,
    upper_root_count,
    wronskian_sign_on_R,
)

t = UPoly([0, 1])


def U(*c):
    return UPoly(list(c))


def test_sturm_examples():
    assert sturm_count(U(-1, 0, 1)) == 2
    assert sturm_count(U(1, 0, 1)) == 0
    assert sturm_count(U(0, -1, 0, 1), 0) == 1


def test_real_rooted_examples():
    assert is_real_rooted((t - 1) * (t - 1) * (t + 2))
    assert not is_real_rooted(U(1, 0, 1))
    assert is_real_rooted(U(5))


def test_wronskian_sign():
    assert wronskian_sign_on_R(U(-1)) == NONPOSITIVE
    assert wronskian_sign_on_R(U(0, 0, -1)) == NONPOSITIVE
    assert wronskian_sign_on_R(t) == INDEFINITE


def test_interlace_examples():
    assert interlace(t, U(-1, 0, 1))
    assert not interlace(t - 3, U(-1, 0, 1))
    assert interlace(t, t)
    with pytest.raises(PreconditionError):
        interlace(U(1, 0, 1), t)


def test_proper_position_examples():
    assert proper_position_uni(U(1), t)
    assert not proper_position_uni(t, U(1))
    assert proper_position_uni(t, U(-1, 0, 1))


def test_stability_examples():
    assert is_stable_uni(t + I).status == STABLE
    v = is_stable_uni(t - I)
    assert v.status == NOT_STABLE and v.witness.exact_root == I
    w = is_stable_uni(U(-1, -2 * I, 1))
    assert w.status == NOT_STABLE and w.witness.count == 2
    assert is_stable_uni(U(5)).stable
    assert is_stable_uni(U(0)).status == ZERO_POLY


def test_strict_examples():
    assert is_strictly_stable_uni(t + I)
    assert not is_strictly_stable_uni(t)
    assert not is_strictly_stable_uni(U(1, 0, 1))


def test_numeric_roots_examples():
    r = sorted(numeric_roots(U(1, 0, 1)).roots, key=lambda z: z.imag)
    assert abs(r[0] + 1j) < 1e-12 and abs(r[1] - 1j) < 1e-12
    for z in numeric_roots(U(-1, -2 * I, 1), precision=40).roots:
        assert abs(z - 1j) < 1e-12
    r = sorted(numeric_roots((t + I) * (t - 2)).roots, key=lambda z: z.imag)
    assert abs(r[0] + 1j) < 1e-12 and abs(r[1] - 2) < 1e-12


def test_hb_route_matches_cauchy():
    rng = random.Random(5)
    for _ in range(100):
        p = UPoly([Scalar(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(rng.randint(1, 6))])
        assert is_stable_uni(p).status == is_stable_uni(p, method="hb").status


def test_witness_regions_are_certified():
    rng = random.Random(11)
    for _ in range(100):
        p = UPoly([Scalar(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(rng.randint(2, 6))])
        v = is_stable_uni(p)
        if v.status == NOT_STABLE:
            assert v.witness.count > 0
            assert upper_root_count(p, v.witness.im_lower) == v.witness.count
            if v.witness.exact_root is not None:
                assert p(v.witness.exact_root).is_zero()


def _stable_strategy():
    # products of (t - r) with Im r <= 0
    root = st.builds(lambda a, b: Scalar(mpq(a, 3), mpq(-b, 3)), st.integers(-9, 9), st.integers(0, 9))
    return st.lists(root, min_size=1, max_size=5)


@settings(max_examples=50, deadline=None)
@given(_stable_strategy(), _stable_strategy(), st.integers(1, 7), st.integers(-5, 5))
def test_closure_properties(r1, r2, lam, a):
    p = UPoly([1])
    for r in r1:
        p = p * UPoly([-r, 1])
    q = UPoly([1])
    for r in r2:
        q = q * UPoly([-r, 1])
    assert is_stable_uni(p).stable and is_stable_uni(q).stable
    assert is_stable_uni(p * q).stable
    assert is_stable_uni(p.compose_linear(mpq(lam, 2), a)).stable
    # t^d p(-1/t)
    d = p.degree
    inv = UPoly([p.coeffs[d - k] * (-1) ** (d - k) for k in range(d + 1)])
    assert is_stable_uni(inv).stable


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5), st.lists(st.integers(-6, 6), min_size=1, max_size=5))
def test_hermite_biehler(fc, gc):
    f, g = UPoly(fc), UPoly(gc)
    assert proper_position_uni(f, g) == (is_stable_uni(g + f * I).stable)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=2, max_size=7))
def test_oracle_agreement(cs):
    p = UPoly([Scalar(a, b) for a, b in cs])
    if p.is_zero():
        return
    o = oracle_is_stable(p)
    if o is None:
        return
    assert is_stable_uni(p).stable == o
