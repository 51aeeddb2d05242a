import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from stabilis import (
    I,
    MPoly,
    Scalar,
    UPoly,
    binom,
    falling,
    identify_vars,
    invert_var,
    jensen,
    parse_polynomial,
    restrict_to_line,
    scale_var,
    serialize,
    specialize,
    support_extrema,
)
from stabilis.errors import DimensionError, EmptySupportError, ParseError, PreconditionError
from stabilis.multivariate import random_poly

P = parse_polynomial


def test_scalar_canonical_form():
    a = Scalar(mpq(2, 4), mpq(-6, 8))
    assert a.re == mpq(1, 2) and a.im == mpq(-3, 4)
    assert Scalar(1, 2) * Scalar(1, -2) == Scalar(5)
    assert (Scalar(3, 4).abs2(), Scalar(3, -4).abs_bound()) == (25, 7)
    assert str(Scalar(mpq(1, 3), mpq(2, 3))) == "(1+2i)/3"
    with pytest.raises(ZeroDivisionError):
        Scalar(1) / Scalar(0)


def test_ring_examples():
    assert P("(z1+z2)*(z1-z2)") == P("z1^2-z2^2")
    assert P("z1^2*z2").derivative(0) == P("2*z1*z2")
    assert P("z1*z2+1").evaluate([I, I]).is_zero()


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        P("z1") + P("z1*z2")


def test_line_restriction():
    assert restrict_to_line(P("z1*z2"), (1, 2), (0, 0)) == UPoly([0, 0, 2])
    assert restrict_to_line(P("z1+z2"), (1, 1), (1, -1)) == UPoly([0, 2])
    assert restrict_to_line(P("z1^2-z2"), (1, 1), (0, 0)) == UPoly([0, -1, 1])
    with pytest.raises(PreconditionError):
        restrict_to_line(P("z1+z2"), (1, 0), (0, 0))


def test_closure_transforms():
    assert invert_var(P("z+1"), 0) == P("z-1")
    assert invert_var(P("z^2+1"), 0) == P("z^2+1")
    assert identify_vars(P("z1*z2+z1"), 0, 1) == P("z1^2+z1")
    assert specialize(P("z1+z2"), 1, 3) == P("z1+3")
    assert scale_var(P("z1+z2"), 0, 2) == P("2*z1+z2")
    with pytest.raises(PreconditionError):
        specialize(P("z1+z2"), 1, I)


def test_support_extrema():
    s = support_extrema(P("1+z1*z2"))
    assert s.minimal == [(0, 0)] and s.maximal == [(1, 1)] and s.unique_max
    assert sorted(support_extrema(P("z1+z2")).minimal) == [(0, 1), (1, 0)]
    s = support_extrema(P("z1^2*z2+z1*z2^2"))
    assert sorted(s.maximal) == [(1, 2), (2, 1)] and not s.unique_max
    with pytest.raises(EmptySupportError):
        support_extrema(MPoly.zero(2))


def test_multiindex():
    assert binom((2, 2), (1, 3)) == 0
    assert binom((3, 2), (1, 1)) == 6
    assert falling((3,), (2,)) == 6
    assert jensen((1,), (2,)) == 1
    assert jensen((0,), (0,)) == 1


def test_parse_examples():
    f = P("z1*z2 + 1")
    assert dict(f.terms) == {(1, 1): Scalar(1), (0, 0): Scalar(1)}
    g = P("(1+2i)/3 * z1^2")
    assert g.coeff((2,)) == Scalar(mpq(1, 3), mpq(2, 3))


@pytest.mark.parametrize("text,pos", [("z1*", 3), ("z1+)", 3), ("2z1", 1), ("z1^-1", 3)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as e:
        P(text)
    assert e.value.pos is not None


def _poly_strategy():
    return st.builds(
        lambda seed, k1, k2: random_poly(random.Random(seed), (k1, k2), height=6),
        st.integers(0, 10**6),
        st.integers(0, 3),
        st.integers(0, 3),
    )


@settings(max_examples=60, deadline=None)
@given(_poly_strategy())
def test_serialize_roundtrip(f):
    text = serialize(f)
    assert P(text, nvars=2) == f
    assert serialize(P(text, nvars=2)) == text


@settings(max_examples=40, deadline=None)
@given(_poly_strategy(), _poly_strategy(), _poly_strategy())
def test_ring_laws(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f - f).is_zero()


@settings(max_examples=40, deadline=None)
@given(_poly_strategy(), _poly_strategy(), st.integers(1, 5), st.integers(-4, 4))
def test_restriction_is_a_ring_map(f, g, lam, a):
    line = ((1, lam), (a, 0))
    assert restrict_to_line(f * g, *line) == restrict_to_line(f, *line) * restrict_to_line(g, *line)
    assert restrict_to_line(f + g, *line) == restrict_to_line(f, *line) + restrict_to_line(g, *line)


@settings(max_examples=40, deadline=None)
@given(_poly_strategy())
def test_antichains(f):
    if f.is_zero():
        return
    s = support_extrema(f)
    for group in (s.minimal, s.maximal):
        for a in group:
            for b in group:
                assert a == b or not all(x <= y for x, y in zip(a, b))


@settings(max_examples=40, deadline=None)
@given(_poly_strategy())
def test_double_inversion(f):
    if f.is_zero() or f.deg(0) < 0:
        return
    d = f.deg(0)
    v = min(a[0] for a in f.support())
    twice = invert_var(invert_var(f, 0), 0)
    # z^v * twice = (-1)^d f, where z^v is the largest power of z dividing f
    assert twice * MPoly.monomial((v, 0)) == f.scale((-1) ** d)
