"""Univariate polynomials with rational coefficients, Lagrange interpolation,
and a small sparse multivariate polynomial type for chart eliminations."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class UniPoly:
    """Polynomial in one variable; `coeffs[i]` multiplies q**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if not self.coeffs or not other.coeffs:
            return UniPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def has_nonneg_integer_coeffs(self) -> bool:
        return all(c.denominator == 1 and c >= 0 for c in self.coeffs)

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if mono and c == 1:
                parts.append(mono)
            elif mono:
                parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        return " + ".join(parts).replace("+ -", "- ")


def lagrange_interpolate(samples: Sequence[tuple[int, int]]) -> UniPoly:
    """The unique polynomial of degree < len(samples) through the samples."""
    if not samples:
        raise ValueError("need at least one sample")
    xs = [Fraction(x) for x, _ in samples]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissa in interpolation samples")
    total = UniPoly([])
    for i, (xi, (_, yi)) in enumerate(zip(xs, samples)):
        basis = UniPoly([1])
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * UniPoly([-xj, 1])
                denom *= xi - xj
        total = total + basis * UniPoly([Fraction(yi) / denom])
    return total


# -- multivariate ------------------------------------------------------------

Monomial = tuple  # exponent vector


class MultiPoly:
    """Sparse polynomial over QQ in a fixed, ordered set of variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        self.vars = tuple(vars)
        t = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                if len(mono) != len(self.vars):
                    raise ValueError("exponent vector length mismatch")
                t[tuple(mono)] = c
        self.terms = t

    # construction helpers
    @classmethod
    def const(cls, vars, c) -> "MultiPoly":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars, name) -> "MultiPoly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): 1})

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError("variable sets differ")
            return other
        return MultiPoly.const(self.vars, other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return MultiPoly(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        return MultiPoly(self.vars, t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        return self == self._lift(other)

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def variables(self) -> list[str]:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return [self.vars[i] for i in sorted(used)]

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((m[i] for m in self.terms), default=0)

    def split_linear(self, name: str):
        """Write self = c*x + r with x absent from c and r.

        Returns (c, r) or None when x occurs nonlinearly.
        """
        i = self.vars.index(name)
        if self.degree_in(name) > 1:
            return None
        c, r = {}, {}
        for m, k in self.terms.items():
            if m[i] == 1:
                mm = list(m)
                mm[i] = 0
                c[tuple(mm)] = k
            else:
                r[m] = k
        return MultiPoly(self.vars, c), MultiPoly(self.vars, r)

    def subs(self, name: str, value: "MultiPoly") -> "MultiPoly":
        i = self.vars.index(name)
        value = self._lift(value)
        out = MultiPoly(self.vars)
        powers = {0: MultiPoly.const(self.vars, 1)}
        for m, k in self.terms.items():
            e = m[i]
            if e not in powers:
                p = powers[max(powers)]
                for _ in range(e - max(powers)):
                    p = p * value
                powers[e] = p
            mm = list(m)
            mm[i] = 0
            out = out + MultiPoly(self.vars, {tuple(mm): k}) * powers[e]
        return out

    def evaluate(self, point: Mapping[str, object]):
        acc = 0
        for m, k in self.terms.items():
            term = k
            for name, e in zip(self.vars, m):
                if e:
                    term = term * point[name] ** e
            acc = acc + term
        return acc

    def evaluate_mod(self, point: Mapping[str, int], q: int) -> int:
        acc = 0
        for m, k in self.terms.items():
            term = k.numerator * pow(k.denominator, -1, q)
            for name, e in zip(self.vars, m):
                if e:
                    term = term * pow(point[name], e, q)
            acc += term
        return acc % q

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"

        def key(item):
            m = item[0]
            return (-sum(m), tuple(-e for e in m))

        parts = []
        for m, c in sorted(self.terms.items(), key=key):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, m) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")
