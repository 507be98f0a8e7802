"""Parsing and printing of rational-map expressions in the variable ``z``.

Grammar (implicit multiplication binds like ``*``)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary | unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['+' | '-'] INT)?
    atom   := NUMBER | 'z' | 'i' | '(' expr ')'

Everything is evaluated with exact rational-map arithmetic, so nested
quotients such as ``1/(1 + 1/z)`` are normalized on the fly.
"""

import re

import numpy as np

from .errors import ParseError
from .ratfun import RationalMap

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(src):
    toks = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        text = m.group(kind)
        if kind == "name":
            # split glued names such as "iz" or "zi" into single letters
            for k, ch in enumerate(text):
                if ch not in "zi":
                    raise ParseError(f"unknown symbol {text!r}", start)
                toks.append(("name", ch, start + k))
        else:
            toks.append((kind, text, start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.take()
        if t[1] != text:
            raise ParseError(f"expected {text!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def parse(self):
        v = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            r = self.term()
            v = v + r if op == "+" else v - r
        return v

    def _starts_factor(self, t):
        return t[0] in ("num", "name") or t[1] == "("

    def term(self):
        v = self.unary()
        while True:
            t = self.peek()
            if t[1] == "*":
                self.take()
                v = v * self.unary()
            elif t[1] == "/":
                self.take()
                r = self.unary()
                if r.is_zero():
                    raise ParseError("division by the zero polynomial", t[2])
                v = v / r
            elif self._starts_factor(t):
                v = v * self.power()
            else:
                return v

    def unary(self):
        t = self.peek()
        if t[1] == "-":
            self.take()
            return -self.unary()
        if t[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[1] != "^":
            return base
        self.take()
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        e = self.take()
        if e[0] != "num" or not e[1].isdigit():
            raise ParseError("exponent must be an integer", e[2])
        k = sign * int(e[1])
        if k < 0 and base.is_zero():
            raise ParseError("negative power of zero", t[2])
        return base**k

    def atom(self):
        t = self.take()
        kind, text, pos = t
        if kind == "num":
            return RationalMap.constant(float(text))
        if kind == "name":
            return RationalMap.identity() if text == "z" else RationalMap.constant(1j)
        if text == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)


def parse_map(src):
    """Parse an expression such as ``"(z^2+2z+1)/(z^2-2z+5)"``."""
    if not isinstance(src, str):
        raise ParseError("expression must be a string", 0)
    return _Parser(src).parse()


def parse_complex(src):
    """Parse a constant such as ``"0.5-2i"``."""
    m = parse_map(src)
    if not m.is_constant():
        raise ParseError(f"{src!r} is not a constant", 0)
    return complex(m(0.0))


# -- printing ---------------------------------------------------------------


def _num(x):
    return format(float(x), ".15g")


def _coeff(c, drop):
    """Sign and body of a coefficient; ``drop`` is the negligible size."""
    re_, im = c.real, c.imag
    if abs(im) <= drop:
        return ("-" if re_ < 0 else "+"), _num(abs(re_))
    if abs(re_) <= drop:
        body = "i" if abs(abs(im) - 1) <= drop else _num(abs(im)) + "i"
        return ("-" if im < 0 else "+"), body
    return "+", "(" + _num(re_) + ("+" if im >= 0 else "-") + _num(abs(im)) + "i)"


def format_poly(coeffs, rel=1e-14):
    c = np.asarray(coeffs, dtype=complex)
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    drop = rel * scale
    parts = []
    for k in range(c.size - 1, -1, -1):
        if abs(c[k]) <= drop:
            continue
        sign, body = _coeff(c[k], drop)
        if k == 0:
            term = body
        else:
            zk = "z" if k == 1 else f"z^{k}"
            if body == "1":
                term = zk
            else:
                term = body + "*" + zk
        parts.append((sign, term))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        out += sign + term
    return out


def format_map(phi):
    num = format_poly(phi.num.coeffs)
    den_c = phi.den.coeffs
    if den_c.size == 1 and abs(den_c[0] - 1) <= 1e-14:
        return num
    return f"({num})/({format_poly(den_c)})"
