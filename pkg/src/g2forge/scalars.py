"""Exact arithmetic in the real quadratic field Q(sqrt2, sqrt3).

Every number handled by g2forge lives in the degree-4 field
``Q(sqrt2, sqrt3) = span{1, sqrt2, sqrt3, sqrt6}``; this module implements
that field with arbitrary-precision rational components and no floating
point.  The exact sign of an element is decided by a zero test followed by
rational interval refinement, so comparisons are always correct.

The textual syntax is ``<rat>(("+"|"-")<rat>"*"("r2"|"r3"|"r6"))*`` with
``sqrt(2)``/``sqrt(3)``/``sqrt(6)`` accepted as synonyms; rendering is
canonical (component order 1, r2, r3, r6; zero components omitted).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering
from math import isqrt

from .errors import DivisionByZero, NegativeInput, NotRepresentable, ParseError

_RADICAL_SQUARE = {"r2": 2, "r3": 3, "r6": 6}


def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


def _isqrt_interval(d: int, prec: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure of sqrt(d) with width 2**-prec."""
    scale = 1 << prec
    lo = isqrt(d * scale * scale)
    return Fraction(lo, scale), Fraction(lo + 1, scale)


def _interval_scale(c: Fraction, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    if c >= 0:
        return c * lo, c * hi
    return c * hi, c * lo


@total_ordering
class QuadScalar:
    """Element ``q1 + q2*sqrt2 + q3*sqrt3 + q6*sqrt6`` with rational qi.

    Values are immutable; all operations are pure.  Equality is exact
    componentwise equality (the representation is unique).
    """

    __slots__ = ("q1", "q2", "q3", "q6")

    def __init__(self, q1=0, q2=0, q3=0, q6=0):
        object.__setattr__(self, "q1", _fraction(q1))
        object.__setattr__(self, "q2", _fraction(q2))
        object.__setattr__(self, "q3", _fraction(q3))
        object.__setattr__(self, "q6", _fraction(q6))

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, p, q=1) -> "QuadScalar":
        return cls(Fraction(p, q))

    @classmethod
    def coerce(cls, x) -> "QuadScalar":
        if isinstance(x, QuadScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to QuadScalar")

    # -- basic structure ----------------------------------------------

    @property
    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.q1, self.q2, self.q3, self.q6)

    def is_zero(self) -> bool:
        return not (self.q1 or self.q2 or self.q3 or self.q6)

    def is_rational(self) -> bool:
        return not (self.q2 or self.q3 or self.q6)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.q1

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadScalar(other)
        if not isinstance(other, QuadScalar):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "QuadScalar":
        if not isinstance(other, (QuadScalar, int, Fraction)):
            return NotImplemented
        other = QuadScalar.coerce(other)
        return QuadScalar(
            self.q1 + other.q1, self.q2 + other.q2, self.q3 + other.q3, self.q6 + other.q6
        )

    __radd__ = __add__

    def __neg__(self) -> "QuadScalar":
        return QuadScalar(-self.q1, -self.q2, -self.q3, -self.q6)

    def __sub__(self, other) -> "QuadScalar":
        return self + (-QuadScalar.coerce(other))

    def __rsub__(self, other) -> "QuadScalar":
        return (-self) + QuadScalar.coerce(other)

    def __mul__(self, other) -> "QuadScalar":
        if not isinstance(other, (QuadScalar, int, Fraction)):
            return NotImplemented
        other = QuadScalar.coerce(other)
        a1, a2, a3, a6 = self.components
        b1, b2, b3, b6 = other.components
        # multiplication table: r2*r3 = r6, r2*r6 = 2*r3, r3*r6 = 3*r2, r6*r6 = 6
        return QuadScalar(
            a1 * b1 + 2 * a2 * b2 + 3 * a3 * b3 + 6 * a6 * b6,
            a1 * b2 + a2 * b1 + 3 * (a3 * b6 + a6 * b3),
            a1 * b3 + a3 * b1 + 2 * (a2 * b6 + a6 * b2),
            a1 * b6 + a6 * b1 + a2 * b3 + a3 * b2,
        )

    __rmul__ = __mul__

    def conjugate(self, flip2: bool, flip3: bool) -> "QuadScalar":
        """Galois conjugate flipping the signs of sqrt2 and/or sqrt3."""
        s2 = -1 if flip2 else 1
        s3 = -1 if flip3 else 1
        return QuadScalar(self.q1, s2 * self.q2, s3 * self.q3, s2 * s3 * self.q6)

    def conjugates(self) -> tuple["QuadScalar", ...]:
        """All four Galois conjugates (identity first)."""
        return (
            self,
            self.conjugate(True, False),
            self.conjugate(False, True),
            self.conjugate(True, True),
        )

    def norm(self) -> Fraction:
        """Field norm: product of the four conjugates (a rational number)."""
        c0, c2, c3, c23 = self.conjugates()
        n = c0 * c2 * c3 * c23
        assert n.is_rational(), "field norm must be rational"
        return n.q1

    def inverse(self) -> "QuadScalar":
        """Multiplicative inverse, via the three nontrivial conjugates."""
        if self.is_zero():
            raise DivisionByZero("0 has no inverse")
        _, c2, c3, c23 = self.conjugates()
        numer = c2 * c3 * c23
        return numer * QuadScalar(Fraction(1) / self.norm())

    def __truediv__(self, other) -> "QuadScalar":
        return self * QuadScalar.coerce(other).inverse()

    def __rtruediv__(self, other) -> "QuadScalar":
        return QuadScalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "QuadScalar":
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- order / sign --------------------------------------------------

    def interval(self, prec: int = 40) -> tuple[Fraction, Fraction]:
        """Rational enclosure of the real value at the given precision."""
        lo = hi = self.q1
        for coeff, d in ((self.q2, 2), (self.q3, 3), (self.q6, 6)):
            if coeff:
                rlo, rhi = _isqrt_interval(d, prec)
                tlo, thi = _interval_scale(coeff, rlo, rhi)
                lo, hi = lo + tlo, hi + thi
        return lo, hi

    def sign(self) -> int:
        """Exact sign under the real embedding sqrt2 = 1.4142..., sqrt3 = 1.7320..."""
        if self.is_zero():
            return 0
        prec = 20
        while True:
            lo, hi = self.interval(prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            # nonzero field elements are bounded away from 0, so this terminates
            prec *= 2

    def __lt__(self, other) -> bool:
        return (self - QuadScalar.coerce(other)).sign() < 0

    def abs(self) -> "QuadScalar":
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        lo, hi = self.interval(60)
        return float((lo + hi) / 2)

    # -- roots ----------------------------------------------------------

    def sqrt_if_exact(self):
        """Exact square root inside the field, or None when absent.

        Raises NegativeInput when the element is negative.
        """
        if self.sign() < 0:
            raise NegativeInput(f"sqrt of negative scalar {self}")
        root = _sqrt_in_k(self)
        if root is None:
            return None
        return root if root.sign() >= 0 else -root

    def nth_root_if_exact(self, n: int):
        """Exact real n-th root inside the field, or None when absent."""
        if n <= 0:
            raise ValueError("root order must be positive")
        if n == 1:
            return self
        if n % 2 == 0:
            half = self.sqrt_if_exact()
            if half is None:
                return None
            return half.nth_root_if_exact(n // 2)
        return _odd_root_in_k(self, n)

    # -- rendering ------------------------------------------------------

    def __str__(self) -> str:
        return render_scalar(self)

    def __repr__(self) -> str:
        return f"QuadScalar({render_scalar(self)!r})"


ZERO = QuadScalar(0)
ONE = QuadScalar(1)
R2 = QuadScalar(0, 1)
R3 = QuadScalar(0, 0, 1)
R6 = QuadScalar(0, 0, 0, 1)
HALF = QuadScalar(Fraction(1, 2))


def rat(p, q=1) -> QuadScalar:
    """Shorthand for the rational scalar p/q."""
    return QuadScalar(Fraction(p, q))


# ---------------------------------------------------------------------------
# exact roots
# ---------------------------------------------------------------------------


def _sqrt_rational(x: Fraction):
    """Square root of a nonnegative rational inside Q, or None."""
    if x < 0:
        return None
    if x == 0:
        return Fraction(0)
    n = x.numerator * x.denominator
    r = isqrt(n)
    if r * r != n:
        return None
    return Fraction(r, x.denominator)


def _sqrt_in_q3(c1: Fraction, c3: Fraction):
    """Square root of c1 + c3*sqrt3 in Q(sqrt3), as a (p, q) pair, or None."""
    if c3 == 0:
        p = _sqrt_rational(c1)
        if p is not None:
            return (p, Fraction(0))
        q2 = c1 / 3
        q = _sqrt_rational(q2)
        if q is not None:
            return (Fraction(0), q)
        return None
    disc = _sqrt_rational(c1 * c1 - 3 * c3 * c3)
    if disc is None:
        return None
    for branch in (disc, -disc):
        p = _sqrt_rational((c1 + branch) / 2)
        if p is not None and p != 0:
            q = c3 / (2 * p)
            if p * p + 3 * q * q == c1 and 2 * p * q == c3:
                return (p, q)
    return None


class _F3:
    """Tiny helper for Q(sqrt3) pairs (a, b) = a + b*sqrt3."""

    @staticmethod
    def mul(x, y):
        return (x[0] * y[0] + 3 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    @staticmethod
    def sub(x, y):
        return (x[0] - y[0], x[1] - y[1])

    @staticmethod
    def add(x, y):
        return (x[0] + y[0], x[1] + y[1])

    @staticmethod
    def half(x):
        return (x[0] / 2, x[1] / 2)

    @staticmethod
    def is_zero(x):
        return x[0] == 0 and x[1] == 0

    @staticmethod
    def inverse(x):
        n = x[0] * x[0] - 3 * x[1] * x[1]
        if n == 0:
            raise DivisionByZero("zero in Q(sqrt3)")
        return (x[0] / n, -x[1] / n)


def _sqrt_in_k(a: QuadScalar):
    """Square root in Q(sqrt2, sqrt3) via the tower over Q(sqrt3), or None.

    Writes a = A + B*sqrt2 with A, B in Q(sqrt3); a square root u + v*sqrt2
    needs u^2 + 2v^2 = A and 2uv = B.
    """
    A = (a.q1, a.q3)
    B = (a.q2, a.q6)
    if _F3.is_zero(B):
        u = _sqrt_in_q3(*A)
        if u is not None:
            return QuadScalar(u[0], 0, u[1], 0)
        v = _sqrt_in_q3(A[0] / 2, A[1] / 2)
        if v is not None:
            return QuadScalar(0, v[0], 0, v[1])
        return None
    # u^2 solves t^2 - A t + B^2/2 = 0, so t = (A +- sqrt(A^2 - 2 B^2)) / 2
    disc = _F3.sub(_F3.mul(A, A), _F3.mul((Fraction(2), Fraction(0)), _F3.mul(B, B)))
    s = _sqrt_in_q3(*disc)
    if s is None:
        return None
    for branch in (s, (-s[0], -s[1])):
        t = _F3.half(_F3.add(A, branch))
        u = _sqrt_in_q3(*t)
        if u is None or _F3.is_zero(u):
            continue
        v = _F3.mul(B, _F3.inverse((2 * u[0], 2 * u[1])))
        candidate = QuadScalar(u[0], v[0], u[1], v[1])
        if candidate * candidate == a:
            return candidate
    return None


def _int_nth_root(n: int, k: int):
    """Floor k-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _rational_odd_root(x: Fraction, k: int):
    sign = -1 if x < 0 else 1
    ax = abs(x)
    # k-th root of n/d is (n d^(k-1))^(1/k) / d
    n = ax.numerator * ax.denominator ** (k - 1)
    r = _int_nth_root(n, k)
    if r**k != n:
        return None
    return Fraction(sign * r, ax.denominator)


def _odd_root_in_k(a: QuadScalar, k: int):
    """Odd k-th root in the field: exact for rationals, otherwise recovered
    from the four real embeddings and verified exactly before returning."""
    if a.is_rational():
        r = _rational_odd_root(a.q1, k)
        return None if r is None else QuadScalar(r)
    for prec in (64, 128, 256, 512):
        roots = []
        for conj in a.conjugates():
            lo, hi = conj.interval(prec)
            mid = (lo + hi) / 2
            neg = mid < 0
            scaled = abs(mid) * (1 << (k * prec))
            r = _int_nth_root(scaled.numerator // scaled.denominator, k)
            t = Fraction(r, 1 << prec)
            roots.append(-t if neg else t)
        t1, t2, t3, t6 = roots
        comps_exact = (
            (t1 + t2 + t3 + t6) / 4,
            (t1 - t2 + t3 - t6) / 4,  # still to be divided by sqrt2
            (t1 + t2 - t3 - t6) / 4,  # by sqrt3
            (t1 - t2 - t3 + t6) / 4,  # by sqrt6
        )
        lo2, hi2 = _isqrt_interval(2, prec)
        lo3, hi3 = _isqrt_interval(3, prec)
        lo6, hi6 = _isqrt_interval(6, prec)
        approx = (
            comps_exact[0],
            comps_exact[1] * 2 / (lo2 + hi2),
            comps_exact[2] * 2 / (lo3 + hi3),
            comps_exact[3] * 2 / (lo6 + hi6),
        )
        for bound in (10**6, 10**12):
            candidate = QuadScalar(*(c.limit_denominator(bound) for c in approx))
            if candidate**k == a:
                return candidate
    return None


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------

_RAT_RE = re.compile(r"(\d+)(?:\s*/\s*(\d+))?")
_RADICAL_RE = re.compile(r"r2|r3|r6|sqrt\(\s*(2|3|6)\s*\)")


def render_scalar(x: QuadScalar) -> str:
    """Canonical text: components in order 1, r2, r3, r6; zeros omitted."""
    parts = []
    if x.q1:
        parts.append((x.q1, None))
    for coeff, tag in ((x.q2, "r2"), (x.q3, "r3"), (x.q6, "r6")):
        if coeff:
            parts.append((coeff, tag))
    if not parts:
        return "0"
    out = []
    for i, (coeff, tag) in enumerate(parts):
        sign = "-" if coeff < 0 else ("+" if i else "")
        mag = abs(coeff)
        if tag is None:
            body = str(mag)
        elif mag == 1:
            body = tag
        else:
            body = f"{mag}*{tag}"
        out.append(sign + body)
    return "".join(out)


class _ScalarParser:
    def __init__(self, text: str, offset: int = 0):
        self.text = text
        self.pos = 0
        self.offset = offset

    def error(self, message: str):
        raise ParseError(message, self.offset + self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def take_sign(self, required: bool) -> int:
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
            return sign
        if required:
            self.error("expected '+' or '-'")
        return 1

    def try_radical(self):
        self.skip_ws()
        m = _RADICAL_RE.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        d = int(m.group(1)) if m.group(1) else _RADICAL_SQUARE[m.group(0)]
        return d

    def take_rational(self) -> Fraction:
        self.skip_ws()
        m = _RAT_RE.match(self.text, self.pos)
        if not m:
            self.error("expected a rational number")
        self.pos = m.end()
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            self.error("zero denominator")
        return Fraction(num, den)

    def parse_term(self, sign: int) -> QuadScalar:
        d = self.try_radical()
        if d is not None:
            return sign * _radical_scalar(d)
        coeff = sign * self.take_rational()
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "*":
            self.pos += 1
            d = self.try_radical()
            if d is None:
                self.error("expected r2, r3, r6 or sqrt(...) after '*'")
            return coeff * _radical_scalar(d)
        return QuadScalar(coeff)

    def parse(self) -> QuadScalar:
        if self.at_end():
            self.error("empty scalar")
        total = ZERO
        sign = self.take_sign(required=False)
        total = total + self.parse_term(sign)
        while not self.at_end():
            sign = self.take_sign(required=True)
            total = total + self.parse_term(sign)
        return total


def _radical_scalar(d: int) -> QuadScalar:
    return {2: R2, 3: R3, 6: R6}[d]


def parse_scalar(text: str, offset: int = 0) -> QuadScalar:
    """Parse the scalar grammar; raises ParseError with a byte offset."""
    return _ScalarParser(text, offset).parse()
