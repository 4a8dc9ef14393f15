"""Exact base-ring arithmetic: QQ[x1..xn] with a monomial order, and ZZ.

Ring elements are `Polynomial` values over the polynomial backend and plain
Python ints over the integer backend; both support +, -, * so the vector and
matrix helpers below are backend-agnostic.  All values are immutable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Mono = tuple  # exponent vector, one entry per ring variable

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

DEGREVLEX = "degrevlex"
LEX = "lex"


class ParseError(ValueError):
    """Syntax error in a polynomial literal; carries the offset and token."""

    def __init__(self, text: str, pos: int, message: str):
        self.text = text
        self.pos = pos
        self.token = text[pos:pos + 12] if pos < len(text) else "<end>"
        super().__init__(f"at position {pos} near {self.token!r}: {message}")


@dataclass(frozen=True)
class RingDescriptor:
    """Base ring: kind "QQ" (polynomials over the rationals) or "ZZ"."""

    kind: str
    variables: tuple = ()
    order: str | None = None

    def __post_init__(self):
        if self.kind not in ("QQ", "ZZ"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        object.__setattr__(self, "variables", tuple(self.variables))
        if self.kind == "ZZ":
            if self.variables:
                raise ValueError("integer ring takes no variables")
            if self.order is not None:
                raise ValueError("integer ring takes no monomial order")
        else:
            if self.order is None:
                object.__setattr__(self, "order", DEGREVLEX)
            if self.order not in (DEGREVLEX, LEX):
                raise ValueError(f"unknown monomial order {self.order!r}")
            seen = set()
            for name in self.variables:
                if not _NAME_RE.match(name):
                    raise ValueError(f"bad variable name {name!r}")
                if name in seen:
                    raise ValueError(f"duplicate variable name {name!r}")
                seen.add(name)

    @property
    def is_poly(self) -> bool:
        return self.kind == "QQ"

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def zero(self):
        return Polynomial(self, ()) if self.is_poly else 0

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        if not self.is_poly:
            return int(n)
        n = Fraction(n)
        if n == 0:
            return Polynomial(self, ())
        return Polynomial(self, (((0,) * self.nvars, n),))

    def variable(self, name: str) -> "Polynomial":
        if not self.is_poly:
            raise ValueError("integer ring has no variables")
        i = self.variables.index(name)
        expo = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, ((expo, Fraction(1)),))

    def parse(self, text: str):
        return parse_element(text, self)

    def to_str(self, elem) -> str:
        return str(elem) if self.is_poly else str(int(elem))


def poly_ring(*variables: str, order: str = DEGREVLEX) -> RingDescriptor:
    return RingDescriptor("QQ", tuple(variables), order)


def int_ring() -> RingDescriptor:
    return RingDescriptor("ZZ")


# ---------------------------------------------------------------------------
# monomial orders

def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Mono, b: Mono) -> Mono:
    """a / b, assuming b | a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_key(e: Mono, order: str):
    """Sort key: bigger monomial (in the order) gets the bigger key."""
    if order == LEX:
        return e
    if order == DEGREVLEX:
        return (sum(e), tuple(-x for x in reversed(e)))
    raise ValueError(f"unknown monomial order {order!r}")


def monomial_compare(a: Mono, b: Mono, order: str) -> int:
    """Total order on exponent vectors: -1, 0, or 1."""
    if len(a) != len(b):
        raise ValueError(f"exponent length mismatch: {len(a)} vs {len(b)}")
    ka, kb = mono_key(a, order), mono_key(b, order)
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# polynomials

class Polynomial:
    """Multivariate polynomial over QQ, terms kept sorted descending."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingDescriptor, terms):
        self.ring = ring
        terms = tuple(terms)
        if terms and not _is_sorted(terms, ring.order):
            terms = tuple(sorted(terms, key=lambda t: mono_key(t[0], ring.order),
                                 reverse=True))
        self.terms = terms
        self._hash = None

    @staticmethod
    def from_dict(ring: RingDescriptor, data: dict) -> "Polynomial":
        terms = tuple(sorted(
            ((e, c) for e, c in data.items() if c != 0),
            key=lambda t: mono_key(t[0], ring.order), reverse=True))
        return Polynomial(ring, terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def leading_term(self):
        """(monomial, coefficient) of the largest term; polynomial must be nonzero."""
        return self.terms[0]

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def constant_value(self) -> Fraction:
        """Value as a constant; raises if non-constant."""
        if self.is_zero:
            return Fraction(0)
        if len(self.terms) == 1 and not any(self.terms[0][0]):
            return self.terms[0][1]
        raise ValueError(f"non-constant polynomial {self}")

    @property
    def is_unit(self) -> bool:
        return len(self.terms) == 1 and not any(self.terms[0][0])

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        data = dict(self.terms)
        for e, c in other.terms:
            s = data.get(e, 0) + c
            if s:
                data[e] = s
            else:
                del data[e]
        return Polynomial.from_dict(self.ring, data)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Polynomial(self.ring, ())
        data: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = mono_mul(e1, e2)
                s = data.get(e, 0) + c1 * c2
                if s:
                    data[e] = s
                else:
                    del data[e]
        return Polynomial.from_dict(self.ring, data)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial(self.ring, ())
        return Polynomial(self.ring, tuple((e, k * c) for e, k in self.terms))

    def mul_term(self, mono: Mono, coeff) -> "Polynomial":
        coeff = Fraction(coeff)
        if coeff == 0:
            return Polynomial(self.ring, ())
        return Polynomial(self.ring,
                          tuple((mono_mul(e, mono), c * coeff) for e, c in self.terms))

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return const(self.ring, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = const(self.ring, other)
        return (isinstance(other, Polynomial) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.terms))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            factors = []
            if mag != 1 or not any(e):
                factors.append(str(mag))
            for name, k in zip(self.ring.variables, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            body = "*".join(factors)
            if i == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    __repr__ = __str__


def _is_sorted(terms, order) -> bool:
    for (e1, _), (e2, _) in zip(terms, terms[1:]):
        if mono_key(e1, order) <= mono_key(e2, order):
            return False
    return True


def const(ring: RingDescriptor, c) -> Polynomial:
    c = Fraction(c)
    if c == 0:
        return Polynomial(ring, ())
    return Polynomial(ring, (((0,) * ring.nvars, c),))


Elem = Union[Polynomial, int]


def elem_is_zero(e: Elem) -> bool:
    return e.is_zero if isinstance(e, Polynomial) else e == 0


def elem_is_unit(e: Elem) -> bool:
    return e.is_unit if isinstance(e, Polynomial) else e in (1, -1)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|([()+\-*/^]))")


def _tokenize(text: str):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == m.start():
            if text[pos:].strip() == "":
                break
            raise ParseError(text, pos, "unrecognized character")
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive descent over: sum -> product -> power -> atom."""

    def __init__(self, text: str, ring: RingDescriptor):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        raise ParseError(self.text, self.peek()[2], message)

    def parse(self) -> Polynomial:
        p = self.sum()
        if self.peek()[0] != "end":
            self.fail("trailing input")
        return p

    def sum(self) -> Polynomial:
        neg = False
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.next()
            neg = val == "-"
        p = self.product()
        if neg:
            p = -p
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                q = self.product()
                p = p - q if val == "-" else p + q
            else:
                return p

    def product(self) -> Polynomial:
        p = self.power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                p = p * self.power()
            else:
                return p

    def power(self) -> Polynomial:
        p = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, n, _ = self.peek()
            if kind != "num":
                self.fail("exponent must be a nonnegative integer")
            self.next()
            return p ** n
        return p

    def atom(self) -> Polynomial:
        kind, val, pos = self.peek()
        if kind == "num":
            self.next()
            # rational literal p/q: only directly after an integer literal
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.next()
                k3, v3, _ = self.peek()
                if k3 != "num":
                    self.fail("denominator must be an integer")
                self.next()
                if v3 == 0:
                    raise ParseError(self.text, pos, "zero denominator")
                return const(self.ring, Fraction(val, v3))
            return const(self.ring, val)
        if kind == "name":
            self.next()
            if val not in self.ring.variables:
                raise ParseError(self.text, pos, f"unknown variable {val!r}")
            return self.ring.variable(val)
        if kind == "op" and val == "(":
            self.next()
            p = self.sum()
            kind, val, _ = self.peek()
            if kind != "op" or val != ")":
                self.fail("expected ')'")
            self.next()
            return p
        if kind == "op" and val == "-":
            self.next()
            return -self.atom()
        self.fail("expected a number, variable, or '('")


def poly_parse(text: str, ring: RingDescriptor) -> Polynomial:
    if not ring.is_poly:
        raise ValueError("poly_parse requires the polynomial backend")
    return _Parser(text, ring).parse()


def parse_element(text: str, ring: RingDescriptor) -> Elem:
    """Parse a ring element: Polynomial over QQ, int over ZZ."""
    if ring.is_poly:
        return poly_parse(text, ring)
    p = _Parser(text, RingDescriptor("QQ")).parse()
    v = p.constant_value()
    if v.denominator != 1:
        raise ParseError(text, 0, f"{v} is not an integer")
    return int(v)


# ---------------------------------------------------------------------------
# free vectors and maps between free modules
#
# A map R^a -> R^b is stored as a tuple of a image vectors, each of length b
# (images of the basis vectors).  Matrices-as-grids appear only at the
# serialization boundary.

Vec = tuple


def vzero(ring: RingDescriptor, n: int) -> Vec:
    z = ring.zero()
    return (z,) * n


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def vscale(c, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def vis_zero(u: Vec) -> bool:
    return all(elem_is_zero(a) for a in u)


def vconcat(u: Vec, v: Vec) -> Vec:
    return tuple(u) + tuple(v)


def apply_images(images, coeffs: Iterable, ring: RingDescriptor, target_len: int) -> Vec:
    """Sum of coeff_i * images[i]; the image of `coeffs` under the map."""
    out = list(vzero(ring, target_len))
    for c, img in zip(coeffs, images):
        if elem_is_zero(c):
            continue
        for j, a in enumerate(img):
            out[j] = out[j] + c * a
    return tuple(out)


def transpose_images(images, ring: RingDescriptor, target_len: int):
    """Images of the dual map: map R^a -> R^b becomes R^b -> R^a."""
    a = len(images)
    return tuple(tuple(images[i][j] for i in range(a)) for j in range(target_len))


def identity_images(ring: RingDescriptor, n: int):
    one, zero = ring.one(), ring.zero()
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def unit_vector(ring: RingDescriptor, n: int, i: int) -> Vec:
    return tuple(ring.one() if j == i else ring.zero() for j in range(n))
