"""Exact arithmetic in Q(sqrt2, sqrt5) plus forward-mode dual numbers.

An :class:`ExtScalar` is ``a + b*r2 + c*r5 + d*r10`` with rational
coordinates.  :class:`Dual` carries a value and a first derivative and is
used to differentiate the (rational) decomposition pipeline exactly.

The pipeline is written against duck-typed scalars; :func:`is_zero` and
:func:`sign` are the only places that branch on the concrete type.
"""

from __future__ import annotations

import contextvars
import math
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational

__all__ = [
    "ExtScalar",
    "Dual",
    "DivisionByZero",
    "ZERO",
    "ONE",
    "R2",
    "R5",
    "R10",
    "PHI",
    "ext_mul",
    "ext_inverse",
    "embed_float",
    "is_zero",
    "is_exact_zero",
    "sign",
    "float_tolerance",
    "to_float",
    "value_of",
]

SQRT2 = math.sqrt(2.0)
SQRT5 = math.sqrt(5.0)
SQRT10 = math.sqrt(10.0)

# single global absolute tolerance for float-mode zero tests
float_tolerance: contextvars.ContextVar[float] = contextvars.ContextVar(
    "float_tolerance", default=1e-9
)


class DivisionByZero(ZeroDivisionError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as a rational coordinate")


_F0 = Fraction(0)


def _cadd(x, y):
    if not y:
        return x
    if not x:
        return y
    return x + y


class ExtScalar:
    """Element ``a + b*sqrt2 + c*sqrt5 + d*sqrt10`` of Q(sqrt2, sqrt5)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "c", _frac(c))
        object.__setattr__(self, "d", _frac(d))

    def __setattr__(self, name, value):
        raise AttributeError("ExtScalar is immutable")

    def __reduce__(self):
        # copy, deepcopy and pickle go through the constructor
        return (ExtScalar, self.coords)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    @classmethod
    def coerce(cls, x) -> "ExtScalar":
        if isinstance(x, ExtScalar):
            return x
        return cls(_frac(x))

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if type(other) is not ExtScalar:
            if isinstance(other, Dual):
                return NotImplemented
            try:
                other = ExtScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return _new(
            _cadd(self.a, other.a), _cadd(self.b, other.b),
            _cadd(self.c, other.c), _cadd(self.d, other.d),
        )

    __radd__ = __add__

    def __neg__(self):
        return _new(-self.a, -self.b, -self.c, -self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if type(other) is not ExtScalar:
            if isinstance(other, Dual):
                return NotImplemented
            try:
                other = ExtScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return _new(
            _cadd(self.a, -other.a), _cadd(self.b, -other.b),
            _cadd(self.c, -other.c), _cadd(self.d, -other.d),
        )

    def __rsub__(self, other):
        return ExtScalar.coerce(other) - self

    def __mul__(self, other):
        if type(other) is ExtScalar:
            return ext_mul(self, other)
        if isinstance(other, Dual):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            f = Fraction(other)
            return _new(self.a * f, self.b * f, self.c * f, self.d * f)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero in Q(sqrt2, sqrt5)")
            f = Fraction(1) / Fraction(other)
            return ExtScalar(self.a * f, self.b * f, self.c * f, self.d * f)
        if not isinstance(other, ExtScalar):
            return NotImplemented
        return ext_mul(self, ext_inverse(other))

    def __rtruediv__(self, other):
        return ExtScalar.coerce(other) * ext_inverse(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ext_inverse(self) ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison / hashing --------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, ExtScalar):
            return self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.a)
        return hash(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __float__(self):
        return embed_float(self)

    def conjugate(self, flip2: bool = False, flip5: bool = False) -> "ExtScalar":
        """Galois conjugate: sqrt2 -> -sqrt2 and/or sqrt5 -> -sqrt5."""
        b = -self.b if flip2 else self.b
        c = -self.c if flip5 else self.c
        d = -self.d if flip2 != flip5 else self.d
        return ExtScalar(self.a, b, c, d)

    # text -------------------------------------------------------------------

    def __str__(self):
        terms = []
        for coef, name in zip(self.coords, ("", "r2", "r5", "r10")):
            if coef == 0:
                continue
            mag = abs(coef)
            if name and mag == 1:
                body = name
            elif name:
                body = f"{mag} {name}"
            else:
                body = str(mag)
            sign_ = "-" if coef < 0 else "+"
            terms.append((sign_, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, body in terms[1:]:
            out += f" {s} {body}"
        return out

    def __repr__(self):
        return f"ExtScalar({str(self)!r})"


# basis product e_i * e_j = factor * e_k over {1, r2, r5, r10}
_PRODUCT = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((1, 1), (2, 0), (1, 3), (2, 2)),
    ((1, 2), (1, 3), (5, 0), (5, 1)),
    ((1, 3), (2, 2), (5, 1), (10, 0)),
)


def ext_mul(x: ExtScalar, y: ExtScalar) -> ExtScalar:
    xs = [(i, c) for i, c in enumerate((x.a, x.b, x.c, x.d)) if c]
    if not xs:
        return ZERO
    ys = [(j, c) for j, c in enumerate((y.a, y.b, y.c, y.d)) if c]
    if not ys:
        return ZERO
    out = [_F0, _F0, _F0, _F0]
    for i, a in xs:
        row = _PRODUCT[i]
        for j, b in ys:
            f, k = row[j]
            t = a * b
            out[k] = out[k] + (t if f == 1 else t * f)
    return _new(*out)


def _new(a, b, c, d) -> ExtScalar:
    # trusted constructor: coordinates are already Fractions
    obj = object.__new__(ExtScalar)
    _SET_A(obj, a)
    _SET_B(obj, b)
    _SET_C(obj, c)
    _SET_D(obj, d)
    return obj


_SET_A = ExtScalar.a.__set__
_SET_B = ExtScalar.b.__set__
_SET_C = ExtScalar.c.__set__
_SET_D = ExtScalar.d.__set__


def _mult_matrix(x: ExtScalar) -> list[list[Fraction]]:
    # column j holds the coordinates of x * basis_j
    basis = (ExtScalar(1), ExtScalar(0, 1), ExtScalar(0, 0, 1), ExtScalar(0, 0, 0, 1))
    cols = [ext_mul(x, e).coords for e in basis]
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def ext_inverse(x: ExtScalar) -> ExtScalar:
    """Inverse by solving the 4x4 rational system ``M_x y = 1``."""
    if x.is_zero():
        raise DivisionByZero("ExtScalar zero has no inverse")
    if x.is_rational():
        return ExtScalar(1 / x.a)
    m = _mult_matrix(x)
    aug = [row + [Fraction(int(i == 0))] for i, row in enumerate(m)]
    n = 4
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [vr - f * vc for vr, vc in zip(aug[r], aug[col])]
    return ExtScalar(*(aug[i][n] for i in range(n)))


def embed_float(x) -> float:
    if isinstance(x, ExtScalar):
        return (
            float(x.a) + float(x.b) * SQRT2 + float(x.c) * SQRT5 + float(x.d) * SQRT10
        )
    if isinstance(x, Dual):
        return embed_float(x.value)
    return float(x)


to_float = embed_float


def _decimal_value(x: ExtScalar, digits: int = 60) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        def q(f: Fraction) -> Decimal:
            return Decimal(f.numerator) / Decimal(f.denominator)
        return (
            q(x.a)
            + q(x.b) * Decimal(2).sqrt()
            + q(x.c) * Decimal(5).sqrt()
            + q(x.d) * Decimal(10).sqrt()
        )


def _ext_sign(x: ExtScalar) -> int:
    if x.is_zero():
        return 0
    f = embed_float(x)
    if abs(f) >= 1e-6:
        return 1 if f > 0 else -1
    scale = max(abs(Fraction(c)) for c in x.coords) + 1
    digits = 60
    while True:
        v = _decimal_value(x, digits)
        # a nonzero element has a nonzero real value; refine until it clears
        # the rounding error of the evaluation
        with localcontext() as ctx:
            ctx.prec = digits
            bound = Decimal(scale.numerator) / Decimal(scale.denominator)
            bound *= Decimal(10) ** (-(digits - 10))
        if abs(v) > bound:
            return 1 if v > 0 else -1
        digits *= 2


class Dual:
    """``value + deriv * eps`` with ``eps**2 = 0``."""

    __slots__ = ("value", "deriv")

    def __init__(self, value, deriv=0):
        self.value = value
        self.deriv = deriv

    @staticmethod
    def _parts(x):
        if isinstance(x, Dual):
            return x.value, x.deriv
        return x, 0

    def __add__(self, other):
        v, d = Dual._parts(other)
        return Dual(self.value + v, self.deriv + d)

    __radd__ = __add__

    def __sub__(self, other):
        v, d = Dual._parts(other)
        return Dual(self.value - v, self.deriv - d)

    def __rsub__(self, other):
        v, d = Dual._parts(other)
        return Dual(v - self.value, d - self.deriv)

    def __neg__(self):
        return Dual(-self.value, -self.deriv)

    def __mul__(self, other):
        v, d = Dual._parts(other)
        return Dual(self.value * v, self.value * d + self.deriv * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v, d = Dual._parts(other)
        q = self.value / v
        return Dual(q, (self.deriv - q * d) / v)

    def __rtruediv__(self, other):
        return Dual(other) / self

    def __pow__(self, n: int):
        out = Dual(1)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        # pivot semantics: only the value decides
        return is_zero(self.value)

    def __repr__(self):
        return f"Dual({self.value!r}, {self.deriv!r})"


def is_zero(x) -> bool:
    """Zero test used for pivoting; floats use the active tolerance."""
    if isinstance(x, (ExtScalar, Dual)):
        return x.is_zero()
    if isinstance(x, float):
        return abs(x) <= float_tolerance.get()
    return x == 0


def is_exact_zero(x) -> bool:
    """Like :func:`is_zero` but a dual must vanish in both parts."""
    if isinstance(x, Dual):
        return is_zero(x.value) and is_zero(x.deriv)
    return is_zero(x)


def value_of(x):
    """Value part of a dual number; other scalars unchanged."""
    return x.value if isinstance(x, Dual) else x


def sign(x) -> int:
    if isinstance(x, ExtScalar):
        return _ext_sign(x)
    if isinstance(x, Dual):
        return sign(x.value)
    if is_zero(x):
        return 0
    return 1 if x > 0 else -1


ZERO = ExtScalar(0)
ONE = ExtScalar(1)
R2 = ExtScalar(0, 1)
R5 = ExtScalar(0, 0, 1)
R10 = ExtScalar(0, 0, 0, 1)
PHI = ExtScalar(Fraction(1, 2), 0, Fraction(1, 2))
