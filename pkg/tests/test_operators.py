import json
import random
import time

import pytest
from gmpy2 import mpq

from stabilis import (
    LinearOperatorSpec,
    MPoly,
    SamplingConfig,
    Scalar,
    algebraic_symbol,
    alt_symbol,
    alt_symbol_identity_holds,
    apply,
    certify_complex_preserver,
    certify_real_preserver,
    certify_transcendental,
    check_stability,
    halfplane_symbol_truncation,
    jensen_operator,
    parse_operator,
    parse_polynomial,
    range_dimension,
    reflected_symbol,
    transcendental_truncation,
    transcendental_truncation_check,
)
from stabilis.errors import DomainError, PreconditionError, SchemaError
from stabilis.multivariate import random_stable
from stabilis.operators import NOT_PRESERVER, PRESERVER_DEGENERATE, PRESERVER_SYMBOL

from .helpers import random_operator


def Z(text, n=None):
    """Parse with the symbol-ring names ``z1.. w1..``."""
    return parse_polynomial(text, nvars=n)


def _sym(text, m=1, n=1):
    names = [f"z{i + 1}" for i in range(m)] + [f"w{i + 1}" for i in range(n)]
    return parse_polynomial(text, nvars=m + n, names=names)


def _eval_op(kappa=(2,)):
    # T(f) = f(1) + f(2) z
    def fn(f):
        a, b = f.evaluate([Scalar(1)]), f.evaluate([Scalar(2)])
        return MPoly.constant(a, 1) + MPoly.var(0, 1).scale(b)

    return LinearOperatorSpec.from_function(1, kappa, fn)


def _neg_square():
    return LinearOperatorSpec.table(1, (2,), {(0,): "1", (1,): "z1", (2,): "-z1^2"})


def test_apply_examples():
    assert apply(LinearOperatorSpec.identity((2,)), Z("z^2+1")) == Z("z^2+1")
    assert apply(LinearOperatorSpec.derivative((2,)), Z("z^2")) == Z("2*z")
    fact = LinearOperatorSpec.diagonal((2,), {(0,): 1, (1,): 1, (2,): 2})
    assert apply(fact, Z("1+z^2")) == Z("1+2*z^2")
    with pytest.raises(DomainError):
        apply(LinearOperatorSpec.identity((1,)), Z("z^2"))


def test_algebraic_symbol_examples():
    assert algebraic_symbol(LinearOperatorSpec.identity((2,))) == _sym("(z1+w1)^2")
    assert algebraic_symbol(LinearOperatorSpec.derivative((2,))) == _sym("2*z1+2*w1")


@pytest.mark.parametrize("m", range(1, 9))
def test_symbol_of_one_plus_derivative(m):
    S = LinearOperatorSpec.differential((m,), [(1, (0,), (0,)), (1, (0,), (1,))])
    expected = _sym(f"({m}+z1+w1)*(z1+w1)^{m - 1}")
    assert algebraic_symbol(S) == expected


def test_alt_and_reflected_examples():
    assert alt_symbol(LinearOperatorSpec.identity((1,))) == _sym("1-z1*w1")
    assert alt_symbol(LinearOperatorSpec.derivative((2,))) == _sym("-2*w1+2*z1*w1^2")
    flip = LinearOperatorSpec.from_function(1, (2,), lambda f: f.compose([MPoly.var(0, 1).scale(-1)]))
    assert algebraic_symbol(flip) == _sym("(w1-z1)^2")
    assert reflected_symbol(flip) == _sym("(z1+w1)^2")


def test_alt_identity_random():
    rng = random.Random(2)
    for _ in range(30):
        assert alt_symbol_identity_holds(random_operator(rng, rng.choice([(2,), (3, 2), (1, 3)])))


def test_symbol_linearity():
    rng = random.Random(7)
    for _ in range(10):
        T1, T2 = random_operator(rng, (2, 1)), random_operator(rng, (2, 1))
        a, b = Scalar(2, -1), Scalar(mpq(1, 3))
        lhs = algebraic_symbol(T1.scale(a) + T2.scale(b))
        assert lhs == algebraic_symbol(T1).scale(a) + algebraic_symbol(T2).scale(b)


def test_range_dimension_examples():
    r = range_dimension(LinearOperatorSpec.table(1, (2,), {(0,): "1", (2,): "1"}))
    assert r.rank == 1 and r.basis == [Z("1", 1)]
    assert range_dimension(LinearOperatorSpec.identity((2,))).rank == 3
    r = range_dimension(_eval_op())
    assert r.rank == 2


def test_certify_derivative():
    rep = certify_complex_preserver(LinearOperatorSpec.derivative((2,)))
    assert rep.verdict == PRESERVER_SYMBOL and rep.branch == "b"
    assert rep.symbol_text == "2*z1+2*w1"


def test_certify_negative_with_refuter():
    start = time.monotonic()
    rep = certify_complex_preserver(_neg_square())
    assert time.monotonic() - start < 10
    assert rep.verdict == NOT_PRESERVER and rep.certified
    assert rep.symbol_verdicts["b"].refuted
    ref = rep.refutation
    assert ref is not None and ref.verdict.refuted
    assert check_stability(ref.f).passed


def test_refuter_example_polynomial():
    f = Z("(z+i)^2")
    img = apply(_neg_square(), f)
    assert img == Z("-z^2+2*i*z-1")
    v = check_stability(img)
    assert v.refuted
    r = v.witness.uni.approx_root
    assert abs(r - 1j * (1 + 2**0.5)) < 1e-9


def test_degenerate_complex():
    T = LinearOperatorSpec.from_function(1, (3,), lambda f: MPoly.constant(f.constant_term(), 1) * Z("z+i"))
    rep = certify_complex_preserver(T)
    assert rep.verdict == PRESERVER_DEGENERATE and rep.branch == "a" and rep.certified


def test_real_certification_branches():
    assert certify_real_preserver(LinearOperatorSpec.identity((2,))).branch == "b"
    flip = LinearOperatorSpec.from_function(1, (2,), lambda f: f.compose([MPoly.var(0, 1).scale(-1)]))
    rep = certify_real_preserver(flip)
    assert rep.branch == "c" and rep.verdict == PRESERVER_SYMBOL
    assert rep.symbol_verdicts["b"].refuted
    rep = certify_real_preserver(_eval_op())
    assert rep.branch == "a" and rep.verdict == PRESERVER_DEGENERATE
    with pytest.raises(PreconditionError):
        certify_real_preserver(LinearOperatorSpec.table(1, (1,), {(0,): "i", (1,): "z1"}))


def test_truncation_examples():
    ident = LinearOperatorSpec.identity((3,))
    P, v = transcendental_truncation_check(ident, (1,))
    assert P == _sym("1-z1*w1") and v.passed
    P, v = transcendental_truncation_check(LinearOperatorSpec.derivative((2,)), (2,))
    assert P == _sym("2*w1*(z1*w1-1)") and v.passed
    T = LinearOperatorSpec.diagonal((3,), {(0,): 1})
    P, v = transcendental_truncation_check(T, (3,))
    assert P == _sym("1") and v.passed
    with pytest.raises(DomainError):
        transcendental_truncation(LinearOperatorSpec.table(1, (1,), {(0,): "1"}), (2,))


def test_sweep():
    rep = certify_transcendental(LinearOperatorSpec.derivative((4,)), (3,))
    assert rep.passed and [b for b, _ in rep.checked] == [(0,), (1,), (2,), (3,)]
    rep = certify_transcendental(_neg_square(), (2,))
    assert not rep.passed and rep.first_refutation == (2,)


def test_halfplane_truncation_examples():
    assert halfplane_symbol_truncation(LinearOperatorSpec.identity((1,)), (1,)) == _sym("1+z1*w1")
    assert halfplane_symbol_truncation(LinearOperatorSpec.derivative((1,)), (1,)) == _sym("w1")
    T = LinearOperatorSpec.diagonal((2,), {(0,): 1, (1,): 1, (2,): mpq(1, 2)})
    assert halfplane_symbol_truncation(T, (2,)) == _sym("1+2*z1*w1+1/2*z1^2*w1^2")


def test_jensen_examples():
    T = jensen_operator((2,))
    assert algebraic_symbol(T) == _sym("w1^2+4*z1*w1+2*z1^2")
    assert range_dimension(jensen_operator((0,), kappa=(2,))).rank == 1
    vals = [jensen_operator((m,), kappa=(2,), normalized=True).images[(2,)].coeff((2,)) for m in (2, 4, 8, 16)]
    assert all(a.re < b.re < 1 for a, b in zip(vals, vals[1:]))


def test_jensen_certified():
    for beta in [(1,), (3,), (2, 2), (4, 1)]:
        rep = certify_complex_preserver(jensen_operator(beta))
        assert rep.is_preserver


def test_preserver_maps_stable_to_stable():
    rng = random.Random(9)
    T = LinearOperatorSpec.differential((2, 2), [(1, (0, 0), (0, 0)), (1, (0, 0), (1, 0)), (1, (0, 0), (0, 1))])
    assert certify_complex_preserver(T).is_preserver
    for _ in range(10):
        f = random_stable(rng, (2, 2))
        assert not check_stability(apply(T, f)).refuted


def test_operator_json_roundtrip():
    T = _neg_square()
    U = parse_operator(json.dumps(T.to_json()))
    assert U.images == T.images
    D = parse_operator('{"kind":"differential","nvars":1,"diff":[{"coeff":"1","zexp":[0],"dexp":[1]}]}', kappa=(2,))
    assert D.images == LinearOperatorSpec.derivative((2,)).images


@pytest.mark.parametrize(
    "text,pointer",
    [
        ('{"kind":"table","nvars":1}', "/kappa"),
        ('{"kind":"table","nvars":1,"kappa":[1],"images":[{"monomial":[1,0],"poly":"z"}]}', "/images/0/monomial"),
        ('{"kind":"table","nvars":1,"kappa":[1],"images":[{"monomial":[1],"poly":"z*"}]}', "/images/0/poly"),
        ('{"kind":"nope","nvars":1}', "/kind"),
        ("[1,2]", ""),
    ],
)
def test_operator_schema_errors(text, pointer):
    with pytest.raises(SchemaError) as e:
        parse_operator(text)
    assert e.value.pointer == pointer


def test_refuter_on_real_side():
    rep = certify_real_preserver(_neg_square())
    assert rep.verdict == NOT_PRESERVER
