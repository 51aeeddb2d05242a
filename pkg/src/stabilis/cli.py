"""``stabilis`` command line.

Every verb prints one report (JSON by default) and exits with

* 0  stable / preserver / member / bound holds,
* 1  refuted, with the witness in the report,
* 2  inconclusive, out of scope, or sampled-only under ``--strict``,
* 3  malformed input.

The ``replay`` block of a report holds everything needed to reproduce it
byte for byte: the argument vector, the effective seed and the version.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .domains import (
    OUT_OF_SCOPE,
    certify_domain_preserver,
    certify_lee_yang_preserver,
    check_domain_stability,
    domain_symbol,
    lee_yang_membership,
    parse_domain,
    parse_domains,
    phi_kappa_inverse,
    phi_kappa_transform,
    roundtrip_constant,
    strict_sufficiency_check,
)
from .errors import InconsistencyError, StabilisError
from .growth import (
    coefficient_bound_check,
    growth_bound_check,
    growth_constants,
    minimal_support_growth_constants,
    szasz_root_sum_check,
    szasz_univariate_growth_check,
)
from .multivariate import ZERO, SamplingConfig, check_real_stability, check_stability, proper_position_multi
from .operators import (
    INCONCLUSIVE,
    NOT_PRESERVER,
    algebraic_symbol,
    alt_symbol,
    certify_complex_preserver,
    certify_real_preserver,
    certify_transcendental,
    parse_operator,
    reflected_symbol,
    symbol_text,
    transcendental_truncation,
)
from .parsing import default_names, parse_polynomial, polarized_names, serialize
from .polarization import polarize, polarize_operator, project

EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    """Bad command-line input that the library never saw."""


# ---------------------------------------------------------------------------
# argument helpers


def _tuple_arg(text: str, what: str):
    s = text.strip().strip("()[]")
    try:
        vals = tuple(int(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise InputError(f"{what} must be comma separated integers, got {text!r}") from None
    if not vals or any(v < 0 for v in vals):
        raise InputError(f"{what} must be non-negative integers, got {text!r}")
    return vals


def _kappa(args, n: int | None = None):
    if args.kappa is None:
        return None
    k = _tuple_arg(args.kappa, "--kappa")
    if n is not None and len(k) == 1 and n > 1:
        k = k * n
    if n is not None and len(k) != n:
        raise InputError(f"--kappa has {len(k)} entries, expected {n}")
    return k


def _poly(text: str | None, flag: str = "--poly"):
    if text is None:
        raise InputError(f"{flag} is required")
    return parse_polynomial(text)


def _operator(args):
    if args.op is None:
        raise InputError("--op is required")
    src = args.op
    if not src.lstrip().startswith("{"):
        try:
            with open(src, encoding="utf-8") as fh:
                src = fh.read()
        except OSError as e:
            raise InputError(f"cannot read operator file {args.op!r}: {e.strerror}") from None
    try:
        n = json.loads(src).get("nvars")
    except (json.JSONDecodeError, AttributeError):
        n = None
    k = _kappa(args, n if isinstance(n, int) else None)
    return parse_operator(src, k)


def _domains(args, n: int):
    if args.domains is None:
        raise InputError("--domains is required")
    return parse_domains(args.domains, n)


def _seed(args) -> int:
    env = os.environ.get("STABILIS_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise InputError(f"STABILIS_SEED must be an integer, got {env!r}") from None
    return args.seed


def _config(args, certification: bool = False) -> SamplingConfig:
    samples = args.samples if args.samples is not None else (256 if certification else 64)
    if samples < 1:
        raise InputError("--samples must be positive")
    if args.height < 1:
        raise InputError("--height must be positive")
    return SamplingConfig(samples=samples, seed=_seed(args), height=args.height, strict=args.strict, workers=max(1, args.threads))


def _verdict_code(v, strict: bool) -> int:
    if v.refuted:
        return EXIT_REFUTED
    if v.passed:
        return EXIT_INCONCLUSIVE if strict and not v.certified else EXIT_OK
    return EXIT_INCONCLUSIVE


def _cert_code(rep) -> int:
    if rep.is_preserver:
        return EXIT_OK
    if rep.verdict == NOT_PRESERVER and rep.certified:
        return EXIT_REFUTED
    if rep.verdict in (INCONCLUSIVE, OUT_OF_SCOPE):
        return EXIT_INCONCLUSIVE
    return EXIT_INCONCLUSIVE if not rep.certified else EXIT_REFUTED


def _names(f):
    return default_names(f.nvars)


# ---------------------------------------------------------------------------
# verbs; each returns (result dict, exit code)


def cmd_check_stability(args):
    f = _poly(args.poly)
    cfg = _config(args)
    out = {"poly": serialize(f, _names(f))}
    if args.domains:
        doms = _domains(args, f.nvars)
        v = check_domain_stability(f, doms, cfg, _kappa(args, f.nvars))
        out["domains"] = [d.to_json() for d in doms]
    else:
        v = check_stability(f, cfg)
    out["verdict"] = v.to_json()
    if v.status == ZERO:
        out["note"] = "the zero polynomial is neither stable nor refutable"
    return out, _verdict_code(v, cfg.strict)


def cmd_check_real_stability(args):
    f = _poly(args.poly)
    cfg = _config(args)
    if not f.is_real():
        raise InputError("real stability needs real coefficients")
    v = check_real_stability(f, cfg)
    return {"poly": serialize(f, _names(f)), "verdict": v.to_json()}, _verdict_code(v, cfg.strict)


def cmd_proper_position(args):
    f, g = _poly(args.f, "--f"), _poly(args.g, "--g")
    n = max(f.nvars, g.nvars)
    f, g = parse_polynomial(args.f, nvars=n), parse_polynomial(args.g, nvars=n)
    cfg = _config(args)
    v = proper_position_multi(f, g, cfg)
    out = {"f": serialize(f, default_names(n)), "g": serialize(g, default_names(n)), "relation": "f << g", "verdict": v.to_json()}
    return out, _verdict_code(v, cfg.strict)


def cmd_symbol(args):
    T = _operator(args)
    kind = args.kind
    if kind == "algebraic":
        G = algebraic_symbol(T)
    elif kind == "alt":
        G = alt_symbol(T)
    elif kind == "reflected":
        G = reflected_symbol(T)
    elif kind == "truncation":
        if args.beta_max is None:
            raise InputError("--beta-max is required for the truncation symbol")
        G = transcendental_truncation(T, _tuple_arg(args.beta_max, "--beta-max"))
    else:
        doms = _domains(args, T.nvars)
        G = domain_symbol(T, doms, sign=-1 if kind == "domain-minus" else 1)
    return {"kind": kind, "kappa": list(T.kappa), "symbol": symbol_text(G, T)}, EXIT_OK


def cmd_certify(args):
    T = _operator(args)
    rep = certify_complex_preserver(T, cfg=_config(args, True))
    return rep.to_json(), _cert_code(rep)


def cmd_certify_real(args):
    T = _operator(args)
    rep = certify_real_preserver(T, cfg=_config(args, True))
    return rep.to_json(), _cert_code(rep)


def cmd_certify_domain(args):
    T = _operator(args)
    rep = certify_domain_preserver(T, _domains(args, T.nvars), cfg=_config(args, True))
    return rep.to_json(), _cert_code(rep)


def cmd_certify_ly(args):
    T = _operator(args)
    rep = certify_lee_yang_preserver(T, _domains(args, T.nvars), cfg=_config(args, True))
    return rep.to_json(), _cert_code(rep)


def cmd_truncation_sweep(args):
    T = _operator(args)
    if args.beta_max is None:
        raise InputError("--beta-max is required")
    beta = _tuple_arg(args.beta_max, "--beta-max")
    if len(beta) == 1 and T.nvars > 1:
        beta = beta * T.nvars
    if len(beta) != T.nvars:
        raise InputError(f"--beta-max has {len(beta)} entries, expected {T.nvars}")
    cfg = _config(args)
    rep = certify_transcendental(T, beta, cfg)
    if not rep.passed:
        return rep.to_json(), EXIT_REFUTED
    certified = all(v.certified for _, v in rep.checked)
    return rep.to_json(), EXIT_INCONCLUSIVE if cfg.strict and not certified else EXIT_OK


def cmd_polarize(args):
    if args.op is not None:
        T = _operator(args)
        PT = polarize_operator(T)
        return {"kappa": list(T.kappa), "gamma": list(PT.meta["gamma"]), "operator": PT.to_json()}, EXIT_OK
    f = _poly(args.poly)
    k = _kappa(args, f.nvars) or tuple(max(0, d) for d in f.degrees())
    F = polarize(f, k)
    return {"poly": serialize(f, _names(f)), "kappa": list(k), "polarized": serialize(F, polarized_names(k))}, EXIT_OK


def cmd_project(args):
    if args.kappa is None:
        raise InputError("--kappa is required")
    k = _tuple_arg(args.kappa, "--kappa")
    names = polarized_names(k)
    F = parse_polynomial(args.poly, nvars=len(names), names=names) if args.poly is not None else _poly(None)
    f = project(F, k)
    return {"poly": serialize(F, names), "kappa": list(k), "projected": serialize(f, default_names(len(k)))}, EXIT_OK


def cmd_transform(args):
    f = _poly(args.poly)
    doms = _domains(args, f.nvars)
    k = _kappa(args, f.nvars) or tuple(max(0, d) for d in f.degrees())
    g = phi_kappa_inverse(f, doms, k) if args.inverse else phi_kappa_transform(f, doms, k)
    out = {
        "poly": serialize(f, _names(f)),
        "kappa": list(k),
        "direction": "inverse" if args.inverse else "forward",
        "domains": [d.to_json() for d in doms],
        "result": serialize(g, _names(g)),
        "roundtrip_constant": str(roundtrip_constant(doms, k)),
    }
    return out, EXIT_OK


def cmd_ly_member(args):
    f = _poly(args.poly)
    doms = _domains(args, f.nvars)
    k = _kappa(args, f.nvars) or tuple(max(0, d) for d in f.degrees())
    cfg = _config(args)
    rep = lee_yang_membership(f, doms, k, cfg)
    out = {"poly": serialize(f, _names(f)), "kappa": list(k), "report": rep.to_json()}
    if rep.member:
        return out, EXIT_INCONCLUSIVE if cfg.strict and not rep.certified else EXIT_OK
    return out, EXIT_REFUTED if rep.certified else EXIT_INCONCLUSIVE


def _radii(args):
    try:
        rs = [float(x) for x in args.radius.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--radius must be comma separated numbers, got {args.radius!r}") from None
    if not rs or any(r < 0 for r in rs):
        raise InputError("--radius must be non-negative")
    return rs


def cmd_szasz(args):
    f = _poly(args.poly)
    cfg = _config(args)
    checks = []
    if f.nvars <= 1:
        checks.append(szasz_root_sum_check(f))
        for r in _radii(args):
            checks.append(szasz_univariate_growth_check(f, r))
    else:
        checks.append(coefficient_bound_check(f, cfg))
    ok = all(c.holds for c in checks)
    out = {"poly": serialize(f, _names(f)), "holds": ok, "checks": [c.to_json() for c in checks]}
    out["margin"] = checks[0].margin
    return out, EXIT_OK if ok else EXIT_REFUTED


def cmd_growth(args):
    f = _poly(args.poly)
    cfg = _config(args)
    if f.constant_term().is_zero() or args.minimal_support:
        consts = minimal_support_growth_constants(f, cfg)
    else:
        consts = growth_constants(f, cfg)
    checks = [growth_bound_check(f, r, consts, cfg, points=args.points) for r in _radii(args)]
    ok = all(c.holds for c in checks)
    out = {"poly": serialize(f, _names(f)), "constants": consts.to_json(), "holds": ok, "checks": [c.to_json() for c in checks]}
    return out, EXIT_OK if ok else EXIT_REFUTED


def cmd_strict_check(args):
    T = _operator(args)
    dom = parse_domain(args.domain) if args.domain else None
    cfg = _config(args, True)
    rep = strict_sufficiency_check(T, domain=dom, cfg=cfg)
    if not rep.sufficient:
        return rep.to_json(), EXIT_INCONCLUSIVE
    return rep.to_json(), EXIT_INCONCLUSIVE if cfg.strict and not rep.verdict.certified else EXIT_OK


VERBS = {
    "check-stability": (cmd_check_stability, "stability of a polynomial on H^n (or on --domains)"),
    "check-real-stability": (cmd_check_real_stability, "real stability of a real polynomial"),
    "proper-position": (cmd_proper_position, "test f << g"),
    "symbol": (cmd_symbol, "print an operator symbol"),
    "certify": (cmd_certify, "certify a stability preserver"),
    "certify-real": (cmd_certify_real, "certify a real stability preserver"),
    "certify-domain": (cmd_certify_domain, "certify a preserver on a product of circular domains"),
    "certify-ly": (cmd_certify_ly, "certify a Lee-Yang preserver"),
    "truncation-sweep": (cmd_truncation_sweep, "check the truncated symbols up to --beta-max"),
    "polarize": (cmd_polarize, "polarize a polynomial (--poly) or an operator (--op)"),
    "project": (cmd_project, "project a polarized polynomial back"),
    "transform": (cmd_transform, "apply the domain transform Phi_kappa or its inverse"),
    "ly-member": (cmd_ly_member, "Lee-Yang membership on a domain product"),
    "szasz": (cmd_szasz, "Szasz root-sum / coefficient bounds"),
    "growth": (cmd_growth, "growth constants and the polydisk bound"),
    "strict-check": (cmd_strict_check, "sufficient condition for preserving strict stability"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--poly", help="polynomial text, e.g. 'z1*z2 + 1'")
    common.add_argument("--op", help="operator JSON: a file path or an inline object")
    common.add_argument("--kappa", help="degree bound, e.g. '2' or '2,1'")
    common.add_argument("--domains", help="comma separated domains: H, D, Dext, H@<deg>")
    common.add_argument("--samples", type=int, default=None, help="sampled probes (default 64, 256 when certifying)")
    common.add_argument("--seed", type=int, default=0, help="sampling seed; STABILIS_SEED overrides")
    common.add_argument("--height", type=int, default=32, help="bound on sampled numerators")
    common.add_argument("--strict", action="store_true", help="exit 2 unless the result is certified")
    common.add_argument("--beta-max", dest="beta_max", help="truncation box, e.g. '3,3'")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--threads", type=int, default=1, help="worker processes for sampling")

    p = argparse.ArgumentParser(prog="stabilis", description="Exact checks for multivariate stable polynomials and their preservers.")
    p.add_argument("--version", action="version", version=f"stabilis {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")
    for verb, (_, helptext) in VERBS.items():
        sp = sub.add_parser(verb, parents=[common], help=helptext)
        if verb == "proper-position":
            sp.add_argument("--f", required=True)
            sp.add_argument("--g", required=True)
        elif verb == "symbol":
            sp.add_argument("--kind", choices=("algebraic", "alt", "reflected", "truncation", "domain", "domain-minus"), default="algebraic")
        elif verb == "transform":
            sp.add_argument("--inverse", action="store_true", help="apply the inverse maps")
        elif verb in ("szasz", "growth"):
            sp.add_argument("--radius", default="1", help="comma separated radii")
            if verb == "growth":
                sp.add_argument("--points", type=int, default=None, help="grid points per circle")
                sp.add_argument("--minimal-support", dest="minimal_support", action="store_true")
        elif verb == "strict-check":
            sp.add_argument("--domain", help="convex domain shorthand")
    return p


# ---------------------------------------------------------------------------
# output


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar_text(v)}")
    else:
        lines.append(pad + _scalar_text(obj))
    return lines


def _scalar_text(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def _render(report: dict, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(_text(report))
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def _execute(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return None, (0 if e.code == 0 else EXIT_INPUT), "json"
    fn = VERBS[args.verb][0]
    try:
        result, code = fn(args)
    except InconsistencyError as e:
        result, code = {"error": "internal inconsistency", "message": str(e)}, EXIT_INCONCLUSIVE
    except (InputError, StabilisError, ValueError, ZeroDivisionError) as e:
        result, code = {"error": type(e).__name__, "message": str(e)}, EXIT_INPUT
        if getattr(e, "pos", None) is not None:
            result["position"] = e.pos
        if getattr(e, "pointer", None) is not None:
            result["pointer"] = e.pointer or "/"
    try:
        seed = _seed(args)
    except InputError:
        seed = None
    report = {
        "command": args.verb,
        "exit_code": code,
        "result": result,
        "replay": {"argv": list(argv), "seed": seed, "version": __version__},
    }
    return report, code, args.format


def run(argv=None):
    """Parse ``argv`` and execute; returns ``(report, exit_code)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    report, code, _ = _execute(argv)
    return report, code


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    report, code, fmt = _execute(argv)
    if report is not None:
        print(_render(report, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
