"""Polynomial text grammar and canonical serialization.

Grammar (whitespace is ignored between tokens)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' INT)?
    atom    := NUMBER | NUMBER 'i' | 'i' | VAR | '(' expr ')'

``VAR`` is ``z<k>``, ``w<k>``, ``z<k>_<j>`` or ``z_<k>_<j>`` (1-based), or any name
from an explicit ``names`` list. Division is only allowed by a nonzero constant.
Implicit multiplication (``2z1``, ``z1 z2``, ``(z1)(z2)``) is rejected.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .poly import MPoly
from .scalar import ONE, Scalar

__all__ = [
    "parse_polynomial",
    "parse_scalar",
    "serialize",
    "default_names",
    "symbol_names",
    "polarized_names",
]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)(?P<imag>i(?![A-Za-z0-9_]))?|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)
_Z = re.compile(r"^z(\d*)$")
_W = re.compile(r"^w(\d*)$")
_ZP = re.compile(r"^z_?(\d+)_(\d+)$")


def default_names(n: int):
    return [f"z{k + 1}" for k in range(n)]


def symbol_names(n: int):
    """Names for the ``2n`` variables of an operator symbol: ``z1..zn, w1..wn``."""
    return default_names(n) + [f"w{k + 1}" for k in range(n)]


def polarized_names(gamma):
    """Names ``z{i}_{j}`` for the polarized ring of block sizes ``gamma``."""
    return [f"z{i + 1}_{j + 1}" for i, g in enumerate(gamma) for j in range(g)]


def _tokenize(text):
    pos = 0
    toks = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = pos
        if m.group("num") is not None:
            if m.group("imag"):
                toks.append(("imag", int(m.group("num")), start))
            else:
                toks.append(("num", int(m.group("num")), start))
        elif m.group("name") is not None:
            name = m.group("name")
            if name == "i":
                toks.append(("imag", 1, start))
            else:
                toks.append(("name", name, start))
        else:
            toks.append(("op", m.group("op"), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


def _infer_names(toks, nvars):
    zs, ws, blocks = set(), set(), {}
    for kind, val, pos in toks:
        if kind != "name":
            continue
        if m := _Z.match(val):
            k = int(m.group(1) or 1)
            if k == 0:
                raise ParseError(f"variable index must start at 1: {val}", pos)
            zs.add(k)
        elif m := _W.match(val):
            k = int(m.group(1) or 1)
            if k == 0:
                raise ParseError(f"variable index must start at 1: {val}", pos)
            ws.add(k)
        elif m := _ZP.match(val):
            i, j = int(m.group(1)), int(m.group(2))
            if i == 0 or j == 0:
                raise ParseError(f"variable index must start at 1: {val}", pos)
            blocks[i] = max(blocks.get(i, 0), j)
        else:
            raise ParseError(f"unknown variable {val!r}", pos)
    if blocks:
        if zs or ws:
            raise ParseError("cannot mix polarized and plain variable names", 0)
        gamma = [blocks.get(i, 0) for i in range(1, max(blocks) + 1)]
        return polarized_names(gamma)
    n = max(zs | ws | {0})
    if ws:
        if nvars is not None:
            if nvars % 2 or nvars // 2 < n:
                raise ParseError(f"symbol text needs an even nvars >= {2 * n}", 0)
            n = nvars // 2
        return symbol_names(n)
    if nvars is not None:
        if nvars < n:
            raise ParseError(f"variable z{n} exceeds nvars={nvars}", 0)
        n = nvars
    return default_names(n)


class _Parser:
    def __init__(self, text, toks, names):
        self.text = text
        self.toks = toks
        self.k = 0
        self.index = {nm: i for i, nm in enumerate(names)}
        self.n = len(names)

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}", t[2])

    def parse(self):
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError("unexpected token (implicit multiplication is not allowed)", t[2])
        return p

    def expr(self):
        p = self.term()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                q = self.term()
                p = p + q if t[1] == "+" else p - q
            else:
                return p

    def term(self):
        p = self.unary()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "*/":
                self.take()
                q = self.unary()
                if t[1] == "*":
                    p = p * q
                else:
                    if not q.is_constant():
                        raise ParseError("division by a non-constant", t[2])
                    c = q.constant_term()
                    if c.is_zero():
                        raise ParseError("division by zero", t[2])
                    p = p.scale(c.inverse())
            else:
                return p

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            p = self.unary()
            return -p if t[1] == "-" else p
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num":
                raise ParseError("exponent must be a non-negative integer", e[2])
            return base**e[1]
        return base

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return MPoly.constant(val, self.n)
        if kind == "imag":
            return MPoly.constant(Scalar(0, val), self.n)
        if kind == "name":
            if val not in self.index:
                raise ParseError(f"unknown variable {val!r}", pos)
            return MPoly.var(self.index[val], self.n)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect(")")
            return p
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def parse_polynomial(text: str, nvars=None, names=None) -> MPoly:
    """Parse polynomial text into an :class:`MPoly`.

    Without ``names`` the variable layout is inferred: ``z1..zn`` (``n`` the
    largest index, or ``nvars``), ``z1..zn, w1..wn`` when any ``w`` occurs, or
    the polarized layout when ``z{i}_{j}`` names occur.
    """
    if not isinstance(text, str):
        raise TypeError("polynomial text must be a string")
    toks = _tokenize(text)
    if names is None:
        names = _infer_names(toks, nvars)
    else:
        names = list(names)
        if nvars is not None and nvars != len(names):
            raise ParseError("nvars disagrees with the supplied variable names", 0)
    # accept both spellings of polarized names, and bare z / w for z1 / w1
    alias = {}
    if "z1" in names and "z" not in names:
        alias["z"] = "z1"
    if "w1" in names and "w" not in names:
        alias["w"] = "w1"
    for nm in names:
        if m := _ZP.match(nm):
            alias[f"z{m.group(1)}_{m.group(2)}"] = nm
            alias[f"z_{m.group(1)}_{m.group(2)}"] = nm
    if alias:
        toks = [(k, alias.get(v, v), p) if k == "name" else (k, v, p) for k, v, p in toks]
    if len(toks) == 1:
        raise ParseError("empty polynomial", 0)
    return _Parser(text, toks, names).parse()


def parse_scalar(text: str) -> Scalar:
    """Parse a constant such as ``3``, ``-3/2``, ``2i`` or ``(1+2i)/3``."""
    p = parse_polynomial(text, names=[])
    return p.constant_term()


def _monomial(alpha, names):
    parts = []
    for e, nm in zip(alpha, names):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append(f"{nm}^{e}")
    return "*".join(parts)


def serialize(f: MPoly, names=None) -> str:
    """Canonical text: graded-lex order (highest first), canonical coefficients."""
    if names is None:
        names = default_names(f.nvars)
    if f.is_zero():
        return "0"
    out = []
    for alpha, c in f.items():
        mono = _monomial(alpha, names)
        if not mono:
            s = str(c)
        elif c == ONE:
            s = mono
        elif c == -ONE:
            s = "-" + mono
        else:
            s = f"{c}*{mono}"
        if out and not s.startswith("-"):
            out.append("+")
        out.append(s)
    return "".join(out)
