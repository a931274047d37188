"""Polynomials over Q(sqrt2, sqrt5) and the text grammar for scalars.

Grammar (whitespace between factors means multiplication)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/')? unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | 'r2' | 'r5' | 'r10' | 'x' INT | '(' expr ')'

Division is only allowed by nonzero constants.  The same grammar parses the
scalar form ``"1/2 + 3/4 r2 - r10"`` (a polynomial with no variables).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .scalar import ONE, R2, R5, R10, ZERO, ExtScalar

__all__ = ["Polynomial", "ParseError", "parse_polynomial", "parse_scalar"]


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", column: int | None = None):
        self.message = message
        self.text = text
        self.column = column
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"{message}{where}: {text!r}" if text else message)


_TOKEN = re.compile(r"\s*(?:(\d+)|(r10|r2|r5)|x(\d+)|([-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError("unexpected character", text, col)
        col = m.start() + len(m.group(0)) - len(m.group(0).lstrip()) + 1
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), col))
        elif m.group(2) is not None:
            out.append(("rad", m.group(2), col))
        elif m.group(3) is not None:
            out.append(("var", int(m.group(3)), col))
        else:
            out.append(("op", m.group(4), col))
        pos = m.end()
    return out


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial: mapping exponent tuple -> ExtScalar coefficient."""

    nvars: int
    terms: tuple  # sorted tuple of (exponents, coefficient), no zero coefficients

    @classmethod
    def from_dict(cls, nvars: int, d: dict) -> "Polynomial":
        items = tuple(sorted((e, c) for e, c in d.items() if not c.is_zero()))
        return cls(nvars, items)

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls.from_dict(nvars, {(0,) * nvars: ExtScalar.coerce(c)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls.from_dict(nvars, {tuple(e): ONE})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e, _ in self.terms)

    def constant_value(self) -> ExtScalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms[0][1] if self.terms else ZERO

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def __add__(self, other):
        other = self._lift(other)
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, ZERO) + c
        return Polynomial.from_dict(self.nvars, d)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        d: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, ZERO) + c1 * c2
        return Polynomial.from_dict(self.nvars, d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Polynomial.constant(self.nvars, ONE)
        for _ in range(n):
            out = out * self
        return out

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different numbers of variables")
            return other
        return Polynomial.constant(self.nvars, other)

    def derivative(self, i: int) -> "Polynomial":
        d: dict = {}
        for e, c in self.terms:
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            d[tuple(e2)] = d.get(tuple(e2), ZERO) + c * e[i]
        return Polynomial.from_dict(self.nvars, d)

    def __call__(self, point, convert=None):
        """Evaluate at ``point``; entries may be any ring elements (duals, floats).

        ``convert`` maps each coefficient first, e.g. ``embed_float`` for
        float-mode evaluation.
        """
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = 0
        for e, c in self.terms:
            term = convert(c) if convert is not None else c
            for x, k in zip(point, e):
                for _ in range(k):
                    term = term * x
            total = term + total
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mono = " ".join(
                f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            cs = str(c)
            if not mono:
                parts.append(cs if c.is_rational() else f"({cs})")
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append((cs if c.is_rational() else f"({cs})") + " " + mono)
        return " + ".join(parts).replace("+ -", "- ")


class _Parser:
    def __init__(self, text: str, nvars: int | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.nvars = nvars
        self.radicals = {"r2": R2, "r5": R5, "r10": R10}

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg: str, tok=None):
        col = tok[2] if tok else len(self.text) + 1
        raise ParseError(msg, self.text, col)

    def parse(self) -> dict:
        if not self.tokens:
            self.fail("empty expression")
        out = self.expr()
        if self.peek() is not None:
            self.fail("unexpected token", self.peek())
        return out

    # polynomials are dicts {exponent-tuple-as-sparse-dict: ExtScalar} here;
    # exponents stored as tuple of (var, power) pairs, sorted
    def expr(self):
        acc = self.term()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.take()
            rhs = self.term()
            acc = _padd(acc, rhs if tok[1] == "+" else _pscale(rhs, -ONE))
        return acc

    def term(self):
        acc = self.unary()
        while (tok := self.peek()) is not None:
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs = self.unary()
                if tok[1] == "*":
                    acc = _pmul(acc, rhs)
                else:
                    const = _pconst(rhs)
                    if const is None:
                        self.fail("division by a non-constant", tok)
                    if const.is_zero():
                        self.fail("division by zero", tok)
                    acc = _pscale(acc, ONE / const)
            elif tok[0] in ("int", "rad", "var") or tok[:2] == ("op", "("):
                acc = _pmul(acc, self.unary())
            else:
                break
        return acc

    def unary(self):
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.unary()
            return inner if tok[1] == "+" else _pscale(inner, -ONE)
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.take()
            if exp is None or exp[0] != "int":
                self.fail("expected integer exponent", exp)
            out = {(): ONE}
            for _ in range(exp[1]):
                out = _pmul(out, base)
            return out
        return base

    def atom(self):
        tok = self.take()
        if tok is None:
            self.fail("unexpected end of expression")
        kind, val, col = tok
        if kind == "int":
            return {(): ExtScalar(val)} if val else {}
        if kind == "rad":
            return {(): self.radicals[val]}
        if kind == "var":
            if val < 1:
                self.fail("variables are numbered from x1", tok)
            if self.nvars is not None and val > self.nvars:
                self.fail(f"variable x{val} exceeds arity {self.nvars}", tok)
            return {((val - 1, 1),): ONE}
        if val == "(":
            inner = self.expr()
            close = self.take()
            if close is None or close[:2] != ("op", ")"):
                self.fail("expected ')'", close)
            return inner
        self.fail("unexpected token", tok)


def _mono_mul(a, b):
    d = dict(a)
    for v, k in b:
        d[v] = d.get(v, 0) + k
    return tuple(sorted(d.items()))


def _padd(p, q):
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, ZERO) + c
    return {m: c for m, c in out.items() if not c.is_zero()}


def _pmul(p, q):
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            out[m] = out.get(m, ZERO) + c1 * c2
    return {m: c for m, c in out.items() if not c.is_zero()}


def _pscale(p, c):
    return {m: v * c for m, v in p.items() if not (v * c).is_zero()}


def _pconst(p):
    if not p:
        return ZERO
    if list(p) == [()]:
        return p[()]
    return None


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    raw = _Parser(text, nvars).parse()
    d = {}
    for mono, c in raw.items():
        e = [0] * nvars
        for v, k in mono:
            e[v] = k
        d[tuple(e)] = c
    return Polynomial.from_dict(nvars, d)


def parse_scalar(text) -> ExtScalar:
    """Parse ``"p/q + r/s r2 + t/u r5 + v/w r10"`` (ints and Fractions pass through)."""
    if isinstance(text, ExtScalar):
        return text
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return ExtScalar(text)
    if not isinstance(text, str):
        raise ParseError(f"expected a scalar string, got {type(text).__name__}")
    parser = _Parser(text, 0)
    raw = parser.parse()
    const = _pconst(raw)
    if const is None:  # pragma: no cover - nvars=0 rejects variables earlier
        raise ParseError("scalar must not contain variables", text)
    return const
