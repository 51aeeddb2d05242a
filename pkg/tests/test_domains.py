import json
import random

import pytest
from gmpy2 import mpq

from stabilis import (
    I,
    CircularDomain,
    LinearOperatorSpec,
    MoebiusMap,
    MPoly,
    SamplingConfig,
    Scalar,
    algebraic_symbol,
    certify_complex_preserver,
    certify_domain_preserver,
    certify_lee_yang_preserver,
    check_domain_stability,
    disk,
    domain_from_json,
    domain_symbol,
    exterior_disk,
    exterior_unit_disk,
    halfplane_symbol_truncation,
    invert_var,
    lee_yang_membership,
    n_kappa_membership,
    parse_domains,
    parse_polynomial,
    phi_kappa_inverse,
    phi_kappa_transform,
    rotated_half_plane,
    roundtrip_constant,
    strict_sufficiency_check,
    symbol_reduction,
    unit_disk,
    upper_half_plane,
    verify_domain_witness,
)
from stabilis.domains import OUT_OF_SCOPE
from stabilis.errors import DomainError, ParseError, PreconditionError, SchemaError
from stabilis.multivariate import random_poly, random_stable
from stabilis.operators import NOT_PRESERVER, PRESERVER_DEGENERATE, PRESERVER_SYMBOL

from .helpers import random_operator

P = parse_polynomial
H, D, DX = upper_half_plane(), unit_disk(), exterior_unit_disk()


def _sym(text, n=1):
    names = [f"z{i + 1}" for i in range(n)] + [f"w{i + 1}" for i in range(n)]
    return parse_polynomial(text, nvars=2 * n, names=names)


def test_contains_examples():
    assert H.contains(I)
    assert D.contains(0) and not D.contains(2)
    assert DX.contains(3) and not DX.contains(0)
    assert (H.kind, D.kind, DX.kind) == ("halfplane", "disk", "exterior")
    assert D.convex and not DX.convex


def test_contains_matches_shape():
    rng = random.Random(1)
    doms = [H, D, DX, rotated_half_plane(45), rotated_half_plane(200 - 20), disk(Scalar(1, 1), 2), exterior_disk(Scalar(-1), mpq(1, 2))]
    for _ in range(300):
        z = Scalar(mpq(rng.randint(-40, 40), rng.randint(1, 9)), mpq(rng.randint(-40, 40), rng.randint(1, 9)))
        for C in doms:
            if C.phi(z) is None:
                continue
            assert C.contains(z) == C.contains_by_shape(z)


def test_reflect_examples():
    lower = H.reflect()
    assert lower.contains(-I) and not lower.contains(I)
    assert D.reflect().kind == "exterior" and D.reflect().contains(3)
    assert DX.reflect().kind == "disk"
    for C in (H, D, DX, rotated_half_plane(90)):
        assert C.reflect().reflect().kind == C.kind


def test_samples_lie_inside():
    cfg = SamplingConfig()
    for C in (H, D, DX, rotated_half_plane(135), disk(Scalar(0, 2), 3), exterior_disk(1, 2)):
        for k in range(40):
            assert C.contains(C.sample(k, cfg))


def test_transform_examples():
    inv = MoebiusMap(0, -1, 1, 0)
    f = P("z^2+3*z-1")
    assert phi_kappa_transform(f, [inv], (2,)) == invert_var(f, 0)
    cay = MoebiusMap(I, I, -1, 1)
    assert phi_kappa_transform(P("z+i"), [cay], (1,)) == MPoly.constant(Scalar(0, 2), 1)


def test_roundtrip_constant():
    rng = random.Random(4)
    for _ in range(20):
        kappa = (rng.randint(0, 3), rng.randint(0, 2))
        f = random_poly(rng, kappa)
        doms = [rng.choice([H, D, DX, rotated_half_plane(45)]) for _ in kappa]
        g = phi_kappa_transform(f, doms, kappa)
        back = phi_kappa_inverse(g, doms, kappa)
        c = roundtrip_constant(doms, kappa)
        assert back == f.scale(c)
        assert c == D.phi.det ** 0 * doms[0].phi.det ** kappa[0] * doms[1].phi.det ** kappa[1]


def test_transport_keeps_stability():
    rng = random.Random(6)
    cfg = SamplingConfig(samples=32)
    for _ in range(8):
        f = random_stable(rng, (2, 1))
        doms = [D, DX]
        g = phi_kappa_transform(f, doms, (2, 1))
        assert not check_domain_stability(g, doms, cfg, (2, 1)).refuted


def test_membership_examples():
    r = n_kappa_membership(MPoly.constant(1, 2), [DX, DX], (1, 1))
    assert not r.member and r.degree_failures
    assert n_kappa_membership(P("1+z1*z2"), [D, D], (1, 1)).member
    r = n_kappa_membership(P("z1+z2"), [D, D], (1, 1))
    assert not r.member
    w = r.stability.witness
    assert w.point is not None and verify_domain_witness(P("z1+z2"), [D, D], w)


def test_lee_yang_examples():
    r = lee_yang_membership(P("1+z1*z2"), [D, D], (1, 1))
    assert r.member
    r = lee_yang_membership(P("z1+z2"), [D, D], (1, 1))
    assert not r.member and r.certified
    assert list(r.parts["C"].stability.witness.point) == [Scalar(mpq(1, 2)), Scalar(mpq(-1, 2))]
    r = lee_yang_membership(MPoly.constant(1, 2), [D, D], (1, 1))
    assert not r.member and r.parts["C^r"].degree_failures


def test_lee_yang_reflection_symmetry():
    rng = random.Random(8)
    for _ in range(6):
        f = random_poly(rng, (1, 1), height=3)
        a = lee_yang_membership(f, [D, D], (1, 1))
        b = lee_yang_membership(f, [DX, DX], (1, 1))
        assert a.member == b.member


def test_domain_symbol_reductions():
    ident = LinearOperatorSpec.identity((1,))
    assert domain_symbol(ident, [H]) == algebraic_symbol(ident)
    form, const = symbol_reduction([D], (1,))
    assert form == "1+zw"
    assert domain_symbol(ident, [D]) == _sym("1+z1*w1").scale(const)
    rng = random.Random(5)
    for _ in range(15):
        T = random_operator(rng, rng.choice([(1,), (2,), (2, 1)]))
        doms = [rng.choice([D, DX]) for _ in T.kappa]
        form, const = symbol_reduction(doms, T.kappa)
        assert domain_symbol(T, doms) == halfplane_symbol_truncation(T, T.kappa).scale(const)
        assert domain_symbol(T, [H] * T.nvars) == algebraic_symbol(T)


def test_domain_preserver_examples():
    rep = certify_domain_preserver(LinearOperatorSpec.identity((1, 1)), [D, D])
    assert rep.verdict == PRESERVER_SYMBOL and rep.branch == "b"
    T = LinearOperatorSpec.from_function(1, (2,), lambda f: MPoly.constant(f.constant_term(), 1))
    for doms in ([D], [DX], [H]):
        rep = certify_domain_preserver(T, doms)
        assert rep.verdict == PRESERVER_DEGENERATE and rep.branch == "a"
    neg = LinearOperatorSpec.table(1, (2,), {(0,): "1", (1,): "z1", (2,): "-z1^2"})
    a = certify_domain_preserver(neg, [H])
    b = certify_complex_preserver(neg)
    assert a.verdict == b.verdict == NOT_PRESERVER


def test_lee_yang_preserver_examples():
    ident = LinearOperatorSpec.identity((1, 1))
    rep = certify_lee_yang_preserver(ident, [D, D])
    assert rep.verdict == PRESERVER_SYMBOL and rep.branch == "a"
    flip = LinearOperatorSpec.from_function(2, (1, 1), lambda f: f.compose([MPoly.var(0, 2).scale(-1), MPoly.var(1, 2).scale(-1)]))
    rep = certify_lee_yang_preserver(flip, [D, D])
    assert rep.is_preserver
    assert {"a:C", "a:C^r", "b:C", "b:C^r"} <= set(rep.symbol_verdicts)
    small = LinearOperatorSpec.identity((1,))
    rep = certify_lee_yang_preserver(small, [D])
    assert rep.verdict == OUT_OF_SCOPE


def test_strict_examples():
    shift = LinearOperatorSpec.from_function(1, (2,), lambda f: f.compose([MPoly.var(0, 1) + I]))
    assert algebraic_symbol(shift) == _sym("(z1+w1+i)^2")
    assert strict_sufficiency_check(shift).conclusion == "sufficient condition met"
    assert strict_sufficiency_check(LinearOperatorSpec.identity((2,))).conclusion == "no conclusion"
    assert strict_sufficiency_check(LinearOperatorSpec.derivative((2,))).conclusion == "no conclusion"
    with pytest.raises(PreconditionError):
        strict_sufficiency_check(shift, domain=DX)


def test_parsing_domains():
    doms = parse_domains("D,Dext")
    assert [d.kind for d in doms] == ["disk", "exterior"]
    assert len(parse_domains("H", 3)) == 3
    h = parse_domains("H@90")[0]
    assert h.contains(1) and not h.contains(-1)
    with pytest.raises(ParseError):
        parse_domains("Q")
    with pytest.raises(DomainError):
        parse_domains("D,D", 3)


def test_domain_json():
    d = domain_from_json({"kind": "moebius", "phi": {"a": "-1", "b": "i", "c": "-i", "d": "1"}})
    assert d == D
    assert domain_from_json(json.loads('"Dext"')) == DX
    with pytest.raises(SchemaError):
        domain_from_json({"kind": "moebius", "phi": {"a": "1"}})


def test_moebius_rejects_singular():
    with pytest.raises(DomainError):
        MoebiusMap(1, 1, 1, 1)
    assert isinstance(CircularDomain(MoebiusMap(1, 0, 0, 1)), CircularDomain)
