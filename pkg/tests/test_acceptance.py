"""Acceptance gate: twelve criteria at their stated sizes and tolerances.

Each test prints one ``PASS``/``FAIL`` line (outside pytest's capture) and
then asserts, so ``pytest tests/test_acceptance.py`` is the whole gate.
"""

import math
import random
import time

import pytest
from gmpy2 import mpq

from stabilis import (
    LinearOperatorSpec,
    MPoly,
    SamplingConfig,
    Scalar,
    UPoly,
    algebraic_symbol,
    alt_symbol,
    alt_symbol_identity_holds,
    apply,
    box,
    certify_complex_preserver,
    certify_real_preserver,
    check_stability,
    coefficient_bound_check,
    domain_symbol,
    growth_bound_check,
    growth_constants,
    gws_consistency_check,
    halfplane_symbol_truncation,
    is_stable_uni,
    jensen_operator,
    lee_yang_membership,
    lieb_sokal,
    parse_polynomial,
    phi_kappa_inverse,
    phi_kappa_transform,
    polarized_symbol_identity_check,
    proper_position_uni,
    roundtrip_constant,
    symbol_reduction,
    szasz_root_sum_check,
    szasz_univariate_growth_check,
    transcendental_truncation,
    transcendental_truncation_check,
    unit_disk,
    verify_domain_witness,
)
from stabilis.growth import SZASZ_B1
from stabilis.multivariate import random_poly, random_stable
from stabilis.operators import NOT_PRESERVER, PRESERVER_SYMBOL
from stabilis.univariate import oracle_is_stable

from .helpers import random_operator

P = parse_polynomial


@pytest.fixture
def report(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {tag}: {detail}")
        assert ok, f"{tag}: {detail}"

    return emit


def _sym(text, m=1, n=1):
    names = [f"z{i + 1}" for i in range(m)] + [f"w{i + 1}" for i in range(n)]
    return parse_polynomial(text, nvars=m + n, names=names)


def _gauss(rng, h=6):
    return Scalar(mpq(rng.randint(-h, h), rng.randint(1, 4)), mpq(rng.randint(-h, h), rng.randint(1, 4)))


def _from_roots(roots, lead=Scalar(1)):
    p = UPoly([lead])
    for r in roots:
        p = p * UPoly([-r, 1])
    return p


def test_c1_univariate_oracle(report):
    rng = random.Random(101)
    start = time.monotonic()
    agree = excluded = total = k = 0
    while total < 1000:
        k += 1
        d = rng.randint(1, 8)
        if k % 2:
            p = UPoly([_gauss(rng) for _ in range(d)] + [Scalar(rng.randint(1, 5), rng.randint(-3, 3))])
        else:
            # roots in the closed lower half-plane, one perturbed upward now and then
            roots = [Scalar(mpq(rng.randint(-9, 9), rng.randint(1, 3)), -mpq(rng.randint(0, 6), rng.randint(1, 3))) for _ in range(d)]
            if rng.random() < 0.3:
                roots[0] = Scalar(roots[0].re, mpq(rng.randint(1, 5), 7))
            p = _from_roots(roots, _gauss(rng) or Scalar(1))
        if p.is_zero():
            continue
        oracle = oracle_is_stable(p, precision=50)
        if oracle is None:
            excluded += 1
            continue
        total += 1
        agree += is_stable_uni(p).stable == oracle
    elapsed = time.monotonic() - start
    ok = agree == total and elapsed < 60
    report("C1", ok, f"{agree}/{total} agree, {excluded} indeterminate excluded, {elapsed:.1f}s")


def _interlacing_pair(rng, d):
    xs = sorted({mpq(rng.randint(-40, 40), rng.randint(1, 3)) for _ in range(2 * d + 1)})
    if len(xs) < 2 * d:
        return None
    f_roots, g_roots = xs[0 : 2 * d : 2][:d], xs[1 : 2 * d : 2][:d]
    f = _from_roots([Scalar(x) for x in f_roots[: max(d - rng.randint(0, 1), 0)]], Scalar(rng.randint(1, 4)))
    g = _from_roots([Scalar(x) for x in g_roots], Scalar(rng.choice([-3, -1, 1, 2])))
    return f, g


def test_c2_hermite_biehler(report):
    rng = random.Random(202)
    agree = total = positives = 0
    while total < 500:
        d = rng.randint(1, 6)
        if total % 2:
            f = UPoly([Scalar(mpq(rng.randint(-9, 9), rng.randint(1, 3))) for _ in range(rng.randint(1, d + 1))])
            g = UPoly([Scalar(mpq(rng.randint(-9, 9), rng.randint(1, 3))) for _ in range(d + 1)])
        else:
            pair = _interlacing_pair(rng, d)
            if pair is None:
                continue
            f, g = pair
        if f.is_zero() and g.is_zero():
            continue
        total += 1
        lhs = proper_position_uni(f, g)
        rhs = is_stable_uni(g + f * UPoly([Scalar(0, 1)])).stable
        positives += lhs
        agree += lhs == rhs
    report("C2", agree == total, f"{agree}/{total} agree ({positives} in proper position)")


def test_c3_symbol_identities(report):
    bad = []
    for m in range(1, 9):
        S = LinearOperatorSpec.differential((m,), [(1, (0,), (0,)), (1, (0,), (1,))])
        if algebraic_symbol(S) != _sym(f"({m}+z1+w1)*(z1+w1)^{m - 1}"):
            bad.append(f"S m={m}")
    rng = random.Random(303)
    for k in range(100):
        n = 1 + k % 2
        kappa = tuple(rng.randint(0, 3) for _ in range(n))
        if not alt_symbol_identity_holds(random_operator(rng, kappa)):
            bad.append(f"alt {kappa}")
    report("C3", not bad, "S symbol m<=8 and 100 alt identities exact" if not bad else str(bad[:5]))


def test_c4_polarized_symbol(report):
    rng = random.Random(404)
    start = time.monotonic()
    bad = 0
    for k in range(100):
        n = 1 + k % 2
        kappa = (rng.randint(0, 3),) if n == 1 else (rng.randint(0, 3), rng.randint(0, 2))
        T = random_operator(rng, kappa, out_degree=2)
        bad += not polarized_symbol_identity_check(T)
    elapsed = time.monotonic() - start
    report("C4", bad == 0 and elapsed < 120, f"{100 - bad}/100 exact, {elapsed:.1f}s")


def test_c5_preserver_positives(report):
    cfg = SamplingConfig.certification()
    ops = {"d/dz": LinearOperatorSpec.derivative((3,)), "identity": LinearOperatorSpec.identity((2, 2))}
    for k in range(1, 5):
        terms = [(math.comb(k, j), (0,), (j,)) for j in range(k + 1)]
        ops[f"(1+d/dz)^{k}"] = LinearOperatorSpec.differential((k + 1,), terms)
    for b in range(1, 5):
        ops[f"Jensen ({b})"] = jensen_operator((b,))
    for beta in box((4, 4)):
        if any(beta):
            ops[f"Jensen {beta}"] = jensen_operator(beta)
    bad = []
    for name, T in ops.items():
        rep = certify_complex_preserver(T, cfg=cfg)
        if rep.verdict != PRESERVER_SYMBOL or rep.branch != "b" or rep.symbol_verdicts["b"].refuted:
            bad.append(f"{name}: {rep.verdict}/{rep.branch}")
        if T.is_real():
            rr = certify_real_preserver(T, cfg=cfg)
            if not rr.is_preserver or rr.branch != "b":
                bad.append(f"{name} real: {rr.verdict}/{rr.branch}")
    report("C5", not bad, f"{len(ops)} operators certified via branch b at 256 samples" if not bad else str(bad[:5]))


def test_c6_negative_with_witness(report):
    T = LinearOperatorSpec.table(1, (2,), {(0,): "1", (1,): "z1", (2,): "-z1^2"})
    start = time.monotonic()
    rep = certify_complex_preserver(T)
    elapsed = time.monotonic() - start
    ref = rep.refutation
    f = P("(z+i)^2")
    img = apply(T, f)
    v = check_stability(img)
    root = v.witness.uni.approx_root if v.refuted else None
    ok = (
        rep.verdict == NOT_PRESERVER
        and rep.certified
        and rep.symbol_verdicts["b"].refuted
        and ref is not None
        and ref.verdict.refuted
        and check_stability(ref.f).passed
        and img == P("-z^2+2*i*z-1")
        and root is not None
        and abs(root - 1j * (1 + math.sqrt(2))) < 1e-9
        and elapsed < 10
    )
    report("C6", ok, f"refuter f = {ref.f if ref else None}, T((z+i)^2) root {root}, {elapsed:.2f}s")


def test_c7_real_branch_c(report):
    flip = LinearOperatorSpec.from_function(1, (2,), lambda f: f.compose([MPoly.var(0, 1).scale(-1)]))
    rep = certify_real_preserver(flip)
    G = algebraic_symbol(flip)
    ok = rep.verdict == PRESERVER_SYMBOL and rep.branch == "c" and G == _sym("(w1-z1)^2")
    report("C7", ok, f"branch {rep.branch}, G_T(z,-w) = (z+w)^2")


def test_c8_lieb_sokal(report):
    rng = random.Random(808)
    cfg = SamplingConfig(samples=128)
    refuted = tried = 0
    while tried < 200:
        n = rng.randint(1, 2)
        j = rng.randrange(n)
        kappa = tuple(1 if i == j else rng.randint(0, 2) for i in range(n)) + (1,)
        F = random_stable(rng, kappa, height=3)
        Pz = MPoly(n, {a[:n]: c for a, c in F.terms.items() if a[n] == 0})
        Qz = MPoly(n, {a[:n]: c for a, c in F.terms.items() if a[n] == 1})
        if Qz.is_zero():
            continue
        tried += 1
        _, v = lieb_sokal(Pz, Qz, j, cfg)
        refuted += v.refuted
    report("C8", refuted == 0, f"{tried - refuted}/{tried} outputs not refuted at 128 samples")


def test_c9_polarization_consistency(report):
    rng = random.Random(909)
    bad = []
    stable = unstable = 0
    for k in range(200):
        d = rng.randint(1, 5)
        roots = [Scalar(mpq(rng.randint(-8, 8), rng.randint(1, 3)), -mpq(rng.randint(1, 6), rng.randint(1, 3))) for _ in range(d)]
        if k % 2:
            roots[rng.randrange(d)] = Scalar(mpq(rng.randint(-8, 8), rng.randint(1, 3)), mpq(rng.randint(1, 6), rng.randint(1, 3)))
        f = _from_roots(roots, _gauss(rng) or Scalar(1)).to_mpoly()
        r = gws_consistency_check(f, (d,))
        stable += not r.original.refuted
        unstable += r.original.refuted
        expect_refuted = bool(k % 2)
        if r.original.refuted != expect_refuted or not r.consistent:
            bad.append(k)
        elif expect_refuted and not (r.diagonal_ok and r.region_count):
            bad.append(k)
    report("C9", not bad, f"200 inputs ({stable} stable, {unstable} refuted), verdicts and witnesses agree" if not bad else f"mismatch at {bad[:5]}")


def test_c10_szasz(report):
    rng = random.Random(1010)
    bad = []
    done = 0
    while done < 500:
        n = rng.randint(1, 3)
        total = rng.randint(1, 6)
        kappa = [0] * n
        for _ in range(total):
            kappa[rng.randrange(n)] += 1
        f = random_stable(rng, tuple(kappa), height=3)
        c0 = f.constant_term()
        if c0.is_zero():
            continue
        f = f.scale(c0.inverse())
        done += 1
        checks = [coefficient_bound_check(f, check=False)]
        g = growth_constants(f, check=False)
        for r in (mpq(1, 2), 1, 2):
            checks.append(growth_bound_check(f, r, g, points=24 if n == 3 else None))
        if n == 1:
            checks.append(szasz_root_sum_check(f))
            for r in (mpq(1, 2), 1, 2):
                checks.append(szasz_univariate_growth_check(f, r))
        bad += [(done, c.name, c.margin) for c in checks if not c.holds]
    B = growth_constants(P("1+z")).B
    ok = not bad and f"{B:.4f}" == "2.0210" and B == SZASZ_B1
    report("C10", ok, f"500 stable inputs, no violation; B(n=1) = {B:.10f}" if not bad else str(bad[:5]))


def test_c11_truncation_equals_alt(report):
    rng = random.Random(1111)
    bad = []
    for k in range(50):
        n = 1 + k % 2
        T = random_operator(rng, (3,) * n)
        for beta in box((3,) * n):
            if transcendental_truncation(T, beta) != alt_symbol(T, beta):
                bad.append((k, beta))
    ident_fail = []
    for kappa in ((1,), (2,), (3,), (1, 1), (2, 1)):
        I_ = LinearOperatorSpec.identity(kappa)
        for beta in box(kappa):
            _, v = transcendental_truncation_check(I_, beta)
            if not v.passed:
                ident_fail.append(beta)
    report("C11", not bad and not ident_fail, "50 operators, all beta <= (3,3) exact; identity truncations pass" if not (bad or ident_fail) else f"{bad[:3]} {ident_fail[:3]}")


def test_c12_domain_transport(report):
    rng = random.Random(1212)
    D = unit_disk()
    bad = []
    for _ in range(20):
        kappa = (rng.randint(0, 3), rng.randint(0, 3))
        f = random_poly(rng, kappa)
        doms = [D, D]
        c = roundtrip_constant(doms, kappa)
        expected = D.phi.det ** (kappa[0] + kappa[1])
        if c != expected or phi_kappa_inverse(phi_kappa_transform(f, doms, kappa), doms, kappa) != f.scale(c):
            bad.append(("roundtrip", kappa))
        T = random_operator(rng, kappa)
        form, const = symbol_reduction(doms, kappa)
        if form != "1+zw" or domain_symbol(T, doms) != halfplane_symbol_truncation(T, kappa).scale(const):
            bad.append(("symbol", kappa))
    good = lee_yang_membership(P("1+z1*z2"), [D, D], (1, 1))
    badp = lee_yang_membership(P("z1+z2"), [D, D], (1, 1))
    w = badp.parts["C"].stability.witness
    point = list(w.point) if w is not None and w.point is not None else None
    ok = (
        not bad
        and good.member
        and not badp.member
        and point == [Scalar(mpq(1, 2)), Scalar(mpq(-1, 2))]
        and verify_domain_witness(P("z1+z2"), [D, D], w)
    )
    report("C12", ok, f"roundtrip and unit-disk symbol exact on 20 cases; z1+z2 witness {point and [str(x) for x in point]}" if ok else str(bad[:3]))
