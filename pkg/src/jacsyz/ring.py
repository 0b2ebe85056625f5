"""Sparse multivariate polynomials over Q or a prime field.

A polynomial is a dict mapping exponent tuples to nonzero coefficients.
Coefficients over Q are ``gmpy2.mpq``; over GF(p) they are plain ints in
``[0, p)``.  Values are treated as immutable once constructed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

from gmpy2 import is_prime, mpq

Monomial = Tuple[int, ...]

DEFAULT_PRIME = 2147483647


class RingMismatchError(ValueError):
    pass


class NonHomogeneousError(ValueError):
    pass


class CharacteristicError(ValueError):
    """Raised when the base field characteristic is too small for an argument."""


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# --------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class Field:
    """Q when ``p == 0``, otherwise GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p and not (self.p > 1 and is_prime(self.p)):
            raise ValueError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x):
        p = self.p
        if p:
            if isinstance(x, int):
                return x % p
            x = mpq(x)
            return int(x.numerator) * pow(int(x.denominator), -1, p) % p
        if isinstance(x, Fraction):
            return mpq(x.numerator, x.denominator)
        return mpq(x)

    def inv(self, a):
        if self.p:
            return pow(a, -1, self.p)
        return 1 / mpq(a)

    def one(self):
        return self(1)

    def format(self, c) -> str:
        if self.p:
            c = c - self.p if c > self.p // 2 else c
            return str(c)
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"

    def __str__(self):
        return f"GF({self.p})" if self.p else "QQ"


QQ = Field(0)


def GF(p: int = DEFAULT_PRIME) -> Field:
    return Field(p)


def field_from_string(text: str) -> Field:
    """Parse ``q`` or ``fp:<prime>`` (``fp`` alone means the default prime)."""
    text = text.strip().lower()
    if text in ("q", "qq"):
        return QQ
    if text == "fp":
        return GF()
    if text.startswith("fp:"):
        return GF(int(text[3:]))
    raise ValueError(f"unknown field {text!r}; expected 'q' or 'fp:<prime>'")


@dataclass(frozen=True)
class RingSpec:
    """The graded ring k[x0..x_{nvars-1}]."""

    nvars: int
    field: Field = QQ

    def __post_init__(self):
        if self.nvars < 3:
            raise ValueError("the ring needs at least 3 variables")

    @property
    def n(self) -> int:
        return self.nvars - 1

    def zero_mono(self) -> Monomial:
        return (0,) * self.nvars

    def var_mono(self, i: int) -> Monomial:
        return tuple(1 if j == i else 0 for j in range(self.nvars))

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {self.zero_mono(): c})

    def var(self, i: int) -> "Polynomial":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        return Polynomial(self, {self.var_mono(i): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], c=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): c})

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)

    def with_field(self, fld: Field) -> "RingSpec":
        return RingSpec(self.nvars, fld)


# --------------------------------------------------------------------------
# monomials


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x + y for x, y in zip(a, b)])


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a."""
    return tuple([x - y for x, y in zip(a, b)])


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if a divides b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x if x > y else y for x, y in zip(a, b)])


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def monomials_of_degree(nvars: int, d: int) -> Iterator[Monomial]:
    """All exponent vectors of total degree d, in lex-descending order."""
    if d < 0:
        return
    if nvars == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            yield (first,) + rest


# --------------------------------------------------------------------------
# term orders


@dataclass(frozen=True)
class TermOrder:
    """GrevLex or Lex, with a variable precedence (highest first).

    ``rank`` maps a monomial to a tuple; a smaller rank is a LARGER monomial,
    so ``sorted(..., key=order.rank)`` lists terms leading-first and heaps
    pop the leading term.
    """

    kind: str = "grevlex"
    precedence: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.precedence is not None:
            if sorted(self.precedence) != list(range(len(self.precedence))):
                raise ValueError("precedence must be a permutation of 0..nvars-1")

    def rank(self, m: Monomial) -> tuple:
        if self.precedence is not None:
            m = tuple(m[v] for v in self.precedence)
        if self.kind == "lex":
            return tuple([-x for x in m])
        return (-sum(m),) + m[::-1]

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.rank(a) < self.rank(b)


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


# --------------------------------------------------------------------------
# polynomials


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Dict[Monomial, object] | None = None, *, _clean=False):
        self.ring = ring
        self._hash = None
        if _clean:
            self.terms = terms
            return
        fld = ring.field
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != ring.nvars:
                raise ValueError(f"monomial {m} has wrong length for {ring.nvars} variables")
            c = fld(c)
            if c:
                clean[m] = c
        self.terms = clean

    # -- basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self) -> int:
        """Maximum total degree of a term; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self) -> Optional[int]:
        """The common degree of all terms, or None if not homogeneous.

        The zero polynomial has no degree and returns None.
        """
        degs = {sum(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self) -> bool:
        return not self.terms or self.degree() is not None

    def homogeneous_component(self, t: int) -> "Polynomial":
        return Polynomial(self.ring, {m: c for m, c in self.terms.items() if sum(m) == t}, _clean=True)

    def coefficient(self, m: Sequence[int]):
        return self.terms.get(tuple(m), self.ring.field(0))

    def sorted_terms(self, order: TermOrder = GREVLEX) -> list:
        return sorted(self.terms.items(), key=lambda mc: order.rank(mc[0]))

    def leading_term(self, order: TermOrder = GREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = min(self.terms, key=order.rank)
        return m, self.terms[m]

    # -- arithmetic
    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "mpq":
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if p:
                    v %= p
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, {m: (-c) % p for m, c in self.terms.items()}, _clean=True)
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple([a + b for a, b in zip(m1, m2)])
                v = out.get(m, 0) + c1 * c2
                if p:
                    v %= p
                out[m] = v
        return Polynomial(self.ring, {m: c for m, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        fld = self.ring.field
        c = fld(c)
        if not c:
            return self.ring.zero()
        p = fld.p
        if p:
            return Polynomial(self.ring, {m: v * c % p for m, v in self.terms.items()}, _clean=True)
        return Polynomial(self.ring, {m: v * c for m, v in self.terms.items()}, _clean=True)

    def mul_monomial(self, mono: Monomial, c=1) -> "Polynomial":
        out = Polynomial(self.ring, {mono_mul(m, mono): v for m, v in self.terms.items()}, _clean=True)
        return out if c == 1 else out.scale(c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution
    def derivative(self, i: int) -> "Polynomial":
        if not 0 <= i < self.ring.nvars:
            raise IndexError(f"variable index {i} out of range for {self.ring.nvars} variables")
        fld = self.ring.field
        out = {}
        for m, c in self.terms.items():
            k = m[i]
            if k:
                v = fld(c * k)
                if v:
                    out[m[:i] + (k - 1,) + m[i + 1:]] = v
        return Polynomial(self.ring, out, _clean=True)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace x_i by images[i]."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        target = images[0].ring
        result = target.zero()
        cache: dict = {}
        for m, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(m):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            result = result + term
        return result

    def to_ring(self, ring: RingSpec) -> "Polynomial":
        """Reinterpret the coefficients in another field (same nvars)."""
        if ring.nvars != self.ring.nvars:
            raise RingMismatchError("cannot change the number of variables")
        return Polynomial(ring, dict(self.terms))

    # -- printing
    def to_str(self, order: TermOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        fld = self.ring.field
        pieces = []
        for m, c in self.sorted_terms(order):
            s = fld.format(c)
            neg = s.startswith("-")
            if neg:
                s = s[1:]
            factors = [f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(m) if k]
            if s == "1" and factors:
                body = "*".join(factors)
            else:
                body = "*".join([s] + factors)
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r}, nvars={self.ring.nvars})"


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|x(?P<var>\d+)|(?P<op>[-+*^()])|(?P<bad>\S))")


class _Parser:
    def __init__(self, text: str, ring: RingSpec):
        self.ring = ring
        self.tokens = []
        for mt in _TOKEN.finditer(text):
            if mt.group("int") is not None:
                self.tokens.append(("int", int(mt.group("int")), mt.start("int")))
            elif mt.group("var") is not None:
                self.tokens.append(("var", int(mt.group("var")), mt.start("var") - 1))
            elif mt.group("op") is not None:
                self.tokens.append(("op", mt.group("op"), mt.start("op")))
            elif mt.group("bad") is not None:
                ch = mt.group("bad")
                pos = mt.start("bad")
                if ch == "/":
                    raise PolyParseError("division is not supported", pos)
                raise PolyParseError(f"unexpected character {ch!r}", pos)
        self.end = len(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", None, self.end)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise PolyParseError("empty expression", 0)
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "eof":
            if kind in ("int", "var") or val == "(":
                raise PolyParseError("implicit multiplication is not allowed; use '*'", pos)
            raise PolyParseError(f"unexpected token {val!r}", pos)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self) -> Polynomial:
        p = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.unary()
            else:
                return p

    def unary(self) -> Polynomial:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            p = self.unary()
            return -p if val == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise PolyParseError("exponent must be a nonnegative integer literal", pos)
            nk, nv, npos = self.peek()
            if nk == "op" and nv == "^":
                raise PolyParseError("chained exponents are ambiguous; use parentheses", npos)
            base = base ** val
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "int":
            return self.ring.const(val)
        if kind == "var":
            if val >= self.ring.nvars:
                raise PolyParseError(f"variable x{val} out of range for {self.ring.nvars} variables", pos)
            return self.ring.var(val)
        if kind == "op" and val == "(":
            p = self.expr()
            k2, v2, p2 = self.take()
            if not (k2 == "op" and v2 == ")"):
                raise PolyParseError("expected ')'", p2)
            return p
        if kind == "eof":
            raise PolyParseError("unexpected end of input", pos)
        raise PolyParseError(f"unexpected token {val!r}", pos)


def parse_poly(text: str, ring: RingSpec) -> Polynomial:
    """Parse the text grammar: ``x<i>``, integers, ``+ - * ^`` and parentheses."""
    return _Parser(text, ring).parse()


def max_variable_index(text: str) -> int:
    """Largest ``x<i>`` index mentioned in ``text`` (-1 if none)."""
    return max((int(v) for v in re.findall(r"x(\d+)", text)), default=-1)


# --------------------------------------------------------------------------
# functional API


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p * q


def scalar_mul(c, p: Polynomial) -> Polynomial:
    return p.scale(c)


def total_degree(p: Polynomial) -> int:
    return p.total_degree()


def is_homogeneous(p: Polynomial) -> bool:
    return p.is_homogeneous()


def homogeneous_component(p: Polynomial, t: int) -> Polynomial:
    return p.homogeneous_component(t)


def derivative(p: Polynomial, i: int) -> Polynomial:
    return p.derivative(i)


def require_characteristic(fld: Field, degree: int):
    """Euler-relation arguments need char 0 or char > degree."""
    if fld.p and fld.p <= degree:
        raise CharacteristicError(
            f"characteristic {fld.p} is too small for degree {degree}; use Q or a larger prime")


def euler_check(f: Polynomial) -> bool:
    """Whether sum_i x_i * df/dx_i == deg(f) * f."""
    d = f.degree()
    if d is None:
        if f.is_zero():
            return True
        raise NonHomogeneousError("Euler relation needs a homogeneous polynomial")
    require_characteristic(f.ring.field, d)
    ring = f.ring
    lhs = ring.zero()
    for i in range(ring.nvars):
        lhs = lhs + ring.var(i) * f.derivative(i)
    return lhs == f.scale(d)


def fermat(ring: RingSpec, e: int) -> Polynomial:
    """x0^e + ... + xn^e."""
    return Polynomial(ring, {tuple(e if j == i else 0 for j in range(ring.nvars)): 1
                             for i in range(ring.nvars)})


def product(polys: Iterable[Polynomial], ring: RingSpec) -> Polynomial:
    out = ring.one()
    for p in polys:
        out = out * p
    return out
