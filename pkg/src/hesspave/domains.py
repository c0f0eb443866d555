"""Pluggable exact scalar domains: rationals, prime fields, polynomials.

Elements support +, -, * via Python operators; each domain knows how to make
0, 1, embed integers, and (for fields) divide.  Polynomial scalars are sparse
multivariate polynomials in variables x[a,b] indexed by integer pairs, with
rational coefficients and a canonical normal form, so equality is exact term
comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

Pair = tuple[int, int]
Monomial = tuple[tuple[Pair, int], ...]  # sorted ((a,b), exponent) pairs


class GF:
    """Element of a prime field F_p, p < 2^31."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other) -> "GF":
        if isinstance(other, GF):
            if other.p != self.p:
                raise ValueError(f"mixed characteristics {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return GF(other, self.p)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else GF(self.v + o.v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else GF(self.v - o.v, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else GF(o.v - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else GF(self.v * o.v, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GF(-self.v, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GF(self.v * pow(o.v, -1, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == other % self.p
        return isinstance(other, GF) and self.p == other.p and self.v == other.v

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps: dict[Pair, int] = dict(m1)
    for var, e in m2:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


class Poly:
    """Sparse multivariate polynomial over Q in variables x[a,b]."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction | int] | None = None):
        self.terms: dict[Monomial, Fraction | int] = {
            m: c for m, c in (terms or {}).items() if c != 0
        }

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, a: int, b: int) -> "Poly":
        return cls({(((a, b), 1),): 1})

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        terms = dict(self.terms)
        for m, c in o.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Poly(terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        terms: dict[Monomial, Fraction | int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return Poly(terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        return o is not NotImplemented and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset((m, Fraction(c)) for m, c in self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def variables(self) -> set[Pair]:
        return {var for m in self.terms for var, _ in m}

    def substitute(self, values: Mapping[Pair, object], domain: "Domain") -> object:
        """Evaluate with the given variable values in the target domain."""
        total = domain.zero()
        for mono, coeff in self.terms.items():
            term = domain.from_int(1) * coeff if isinstance(coeff, int) else domain.from_fraction(coeff)
            for var, e in mono:
                if var not in values:
                    raise KeyError(f"no value for variable x{var}")
                for _ in range(e):
                    term = term * values[var]
            total = total + term
        return total

    def subs_zero(self, zero_vars: set[Pair]) -> "Poly":
        """Set the listed variables to zero."""
        return Poly(
            {
                m: c
                for m, c in self.terms.items()
                if not any(var in zero_vars for var, _ in m)
            }
        )

    def monomial_list(self) -> list[dict]:
        """Serialization: sorted list of {coeff, vars} records."""
        out = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            out.append(
                {
                    "coeff": str(c),
                    "vars": [[a, b, e] for (a, b), e in mono],
                }
            )
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            factors = [f"x{a}{b}" if e == 1 else f"x{a}{b}^{e}" for (a, b), e in mono]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(str(c) + "*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


class Domain:
    """Base class for scalar domains; subclasses fix the element type."""

    kind: str

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, k: int):
        raise NotImplementedError

    def from_fraction(self, q: Fraction):
        raise NotImplementedError

    def is_field(self) -> bool:
        return False

    def div(self, a, b):
        raise NotImplementedError(f"{self.kind} does not support division")


@dataclass(frozen=True)
class RationalDomain(Domain):
    kind: str = "Rational"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, k: int):
        return Fraction(k)

    def from_fraction(self, q: Fraction):
        return q

    def is_field(self) -> bool:
        return True

    def div(self, a, b):
        return Fraction(a) / Fraction(b)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeFieldDomain(Domain):
    p: int = 2

    def __post_init__(self):
        if not _is_prime(self.p) or self.p >= 2**31:
            raise ValueError(f"p must be a prime < 2^31, got {self.p}")

    @property
    def kind(self) -> str:  # type: ignore[override]
        return f"PrimeField({self.p})"

    def zero(self):
        return GF(0, self.p)

    def one(self):
        return GF(1, self.p)

    def from_int(self, k: int):
        return GF(k, self.p)

    def from_fraction(self, q: Fraction):
        return GF(q.numerator, self.p) / GF(q.denominator, self.p)

    def is_field(self) -> bool:
        return True

    def div(self, a, b):
        return a / b

    def elements(self):
        return [GF(v, self.p) for v in range(self.p)]


@dataclass(frozen=True)
class PolynomialDomain(Domain):
    """Multivariate polynomials over Q; variables are created on demand."""

    kind: str = "Polynomial"

    def zero(self):
        return Poly()

    def one(self):
        return Poly.const(1)

    def from_int(self, k: int):
        return Poly.const(k)

    def from_fraction(self, q: Fraction):
        return Poly.const(q)

    def var(self, a: int, b: int) -> Poly:
        return Poly.var(a, b)


RATIONALS = RationalDomain()
POLYNOMIALS = PolynomialDomain()
