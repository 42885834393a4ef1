"""Prime fields and the rational field, as scalar domains for `Matrix`."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Fq:
    """An element of the prime field F_q, stored as its residue in [0, q)."""

    __slots__ = ("value", "q")

    def __init__(self, value: int, q: int):
        self.value = value % q
        self.q = q

    def _coerce(self, other) -> int:
        if isinstance(other, Fq):
            if other.q != self.q:
                raise ValueError(f"mixed moduli {self.q} and {other.q}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fq(self.value + o, self.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fq(self.value - o, self.q)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fq(o - self.value, self.q)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fq(self.value * o, self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return Fq(-self.value, self.q)

    def inverse(self) -> "Fq":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.q)
        return Fq(pow(self.value, -1, self.q), self.q)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Fq(o, self.q).inverse()

    def __rtruediv__(self, other):
        return Fq(other, self.q) / self

    def __eq__(self, other):
        if isinstance(other, Fq):
            return self.q == other.q and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.q
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.q))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fq({self.value}, {self.q})"


class Field:
    """Scalar domain: knows how to build elements, zero and one."""

    def __init__(self, name: str, convert):
        self.name = name
        self._convert = convert

    def __call__(self, x):
        return self._convert(x)

    @property
    def zero(self):
        return self._convert(0)

    @property
    def one(self):
        return self._convert(1)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


QQ = Field("QQ", Fraction)


@lru_cache(maxsize=None)
def GF(q: int) -> Field:
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")

    def convert(x):
        if isinstance(x, Fq):
            return x
        if isinstance(x, Fraction):
            return Fq(x.numerator, q) / x.denominator
        return Fq(int(x), q)

    return Field(f"GF({q})", convert)
