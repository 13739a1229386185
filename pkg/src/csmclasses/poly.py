"""Sparse multivariate polynomials over a prime field or the rationals.

A polynomial maps exponent tuples to nonzero coefficients.  Variables are
positional and split into an x-block, a y-block and trailing auxiliary
variables::

    x0 .. x{x_count-1}, y0 .. y{y_count-1}, t0 .. t{aux_count-1}

Coefficients are Python ints reduced into [0, p) for a prime field, and
ints or Fractions (normalized to int when integral) over the rationals.
Values are treated as immutable once built.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

MAX_EXP = (1 << 15) - 1
DEFAULT_PRIME = 32003

Exponent = tuple[int, ...]


class PolyError(ValueError):
    pass


class PolySyntaxError(PolyError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class UnknownVariableError(PolyError):
    pass


class ExponentOverflowError(PolyError):
    pass


class BadPrimeError(PolyError):
    pass


class NotBihomogeneousError(PolyError):
    pass


@dataclass(frozen=True)
class Ring:
    """Coefficient ring tag: ``Ring(p)`` is GF(p), ``Ring(None)`` is QQ."""

    p: int | None = None

    @property
    def is_field_mod_p(self) -> bool:
        return self.p is not None

    def convert(self, c) -> int | Fraction:
        if self.p is None:
            c = Fraction(c)
            return c.numerator if c.denominator == 1 else c
        if isinstance(c, Fraction):
            if c.denominator % self.p == 0:
                raise BadPrimeError(f"denominator {c.denominator} vanishes mod {self.p}")
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        return int(c) % self.p

    def __str__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = Ring(None)


def GF(p: int = DEFAULT_PRIME) -> Ring:
    return Ring(p)


@dataclass(frozen=True)
class VarSpec:
    x_count: int
    y_count: int = 0
    aux_count: int = 0

    def __post_init__(self):
        if self.x_count < 1 or self.y_count < 0 or self.aux_count < 0:
            raise ValueError(f"invalid variable counts {self}")

    @property
    def nvars(self) -> int:
        return self.x_count + self.y_count + self.aux_count

    @property
    def x_indices(self) -> range:
        return range(self.x_count)

    @property
    def y_indices(self) -> range:
        return range(self.x_count, self.x_count + self.y_count)

    def names(self) -> list[str]:
        return ([f"x{i}" for i in range(self.x_count)]
                + [f"y{j}" for j in range(self.y_count)]
                + [f"t{k}" for k in range(self.aux_count)])

    def with_aux(self, aux_count: int) -> VarSpec:
        return VarSpec(self.x_count, self.y_count, aux_count)


@dataclass(frozen=True)
class BiDegree:
    a: int
    b: int

    def __add__(self, other: BiDegree) -> BiDegree:
        return BiDegree(self.a + other.a, self.b + other.b)

    def __le__(self, other: BiDegree) -> bool:  # componentwise
        return self.a <= other.a and self.b <= other.b


def degrevlex_key(e: Exponent):
    """Sort key realizing degree-reverse-lexicographic order (x0 > x1 > ...)."""
    return (sum(e), tuple(-v for v in reversed(e)))


class MultiPoly:
    """Exact sparse polynomial over a ring, living over a VarSpec."""

    __slots__ = ("vars", "ring", "terms")

    def __init__(self, vars: VarSpec, ring: Ring, terms: Mapping[Exponent, object] | None = None,
                 *, _trusted: bool = False):
        self.vars = vars
        self.ring = ring
        if _trusted:
            self.terms = terms
            return
        clean: dict[Exponent, object] = {}
        n = vars.nvars
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise PolyError(f"exponent {e} does not match {n} variables")
            if any(v > MAX_EXP for v in e):
                raise ExponentOverflowError(f"exponent in {e} exceeds {MAX_EXP}")
            if any(v < 0 for v in e):
                raise PolyError("negative exponent")
            c = ring.convert(c)
            if c:
                clean[e] = c
        self.terms = clean

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, vars: VarSpec, ring: Ring) -> MultiPoly:
        return cls(vars, ring, {}, _trusted=True)

    @classmethod
    def constant(cls, c, vars: VarSpec, ring: Ring) -> MultiPoly:
        return cls(vars, ring, {(0,) * vars.nvars: c})

    @classmethod
    def var(cls, index: int, vars: VarSpec, ring: Ring) -> MultiPoly:
        if not 0 <= index < vars.nvars:
            raise UnknownVariableError(f"variable index {index} out of range")
        e = [0] * vars.nvars
        e[index] = 1
        return cls(vars, ring, {tuple(e): 1}, _trusted=True)

    @classmethod
    def monomial(cls, e: Exponent, vars: VarSpec, ring: Ring, c=1) -> MultiPoly:
        return cls(vars, ring, {tuple(e): c})

    # basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def sorted_terms(self) -> list[tuple[Exponent, object]]:
        return sorted(self.terms.items(), key=lambda t: degrevlex_key(t[0]), reverse=True)

    def used_variables(self) -> set[int]:
        return {k for e in self.terms for k, v in enumerate(e) if v}

    # arithmetic ---------------------------------------------------------
    def _check(self, other: MultiPoly):
        if self.vars != other.vars or self.ring != other.ring:
            raise PolyError(f"incompatible operands: {self.vars}/{self.ring} vs {other.vars}/{other.ring}")

    def _lift(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(other, self.vars, self.ring)

    def _norm(self, c):
        p = self.ring.p
        if p is not None:
            return c % p
        if isinstance(c, Fraction) and c.denominator == 1:
            return c.numerator
        return c

    def __add__(self, other) -> MultiPoly:
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = self._norm(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly(self.vars, self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.vars, self.ring, {e: self._norm(-c) for e, c in self.terms.items()},
                         _trusted=True)

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> MultiPoly:
        return self._lift(other) - self

    def scale(self, c) -> MultiPoly:
        c = self.ring.convert(c)
        if not c:
            return MultiPoly.zero(self.vars, self.ring)
        return MultiPoly(self.vars, self.ring, {e: self._norm(v * c) for e, v in self.terms.items()},
                         _trusted=True)

    def __mul__(self, other) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        out: dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        clean = {}
        for e, c in out.items():
            c = self._norm(c)
            if c:
                if max(e) > MAX_EXP:
                    raise ExponentOverflowError(f"product exponent {max(e)} exceeds {MAX_EXP}")
                clean[e] = c
        return MultiPoly(self.vars, self.ring, clean, _trusted=True)

    def __rmul__(self, other) -> MultiPoly:
        return self.scale(other)

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise PolyError("negative exponent")
        if k > MAX_EXP:
            raise ExponentOverflowError(f"exponent {k} exceeds {MAX_EXP}")
        result = MultiPoly.constant(1, self.vars, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            if self.is_constant():
                c = self.terms.get((0,) * self.vars.nvars, 0)
                try:
                    return c == self.ring.convert(other)
                except (TypeError, ValueError):
                    return False
            return NotImplemented
        return self.vars == other.vars and self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.vars, self.ring, frozenset(self.terms.items())))

    def map_coefficients(self, ring: Ring) -> MultiPoly:
        return MultiPoly(self.vars, ring, self.terms)

    def embed(self, vars: VarSpec) -> MultiPoly:
        """Re-home into a larger VarSpec, keeping x-, y- and aux-indices per block."""
        old = self.vars
        if vars.x_count < old.x_count or vars.y_count < old.y_count or vars.aux_count < old.aux_count:
            raise PolyError(f"cannot embed {old} into {vars}")
        out = {}
        for e, c in self.terms.items():
            ex = e[:old.x_count] + (0,) * (vars.x_count - old.x_count)
            ey = e[old.x_count:old.x_count + old.y_count] + (0,) * (vars.y_count - old.y_count)
            ea = e[old.x_count + old.y_count:] + (0,) * (vars.aux_count - old.aux_count)
            out[ex + ey + ea] = c
        return MultiPoly(vars, self.ring, out, _trusted=True)

    def content(self):
        """Gcd of integer coefficients (QQ only; used to print primitive forms)."""
        from math import gcd
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(c)) if not isinstance(c, Fraction) else 1
        return g or 1

    # printing -----------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.vars.names()
        parts = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(names[k] if v == 1 else f"{names[k]}^{v}" for k, v in enumerate(e) if v)
            neg = self.ring.p is None and c < 0
            a = -c if neg else c
            if isinstance(a, Fraction):
                coef = f"{a.numerator}/{a.denominator}"
            else:
                coef = str(a)
            if mono:
                body = mono if a == 1 else f"{coef}*{mono}"
            else:
                body = coef
            if idx == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self}, {self.ring})"


# ---------------------------------------------------------------------------
# calculus and degrees

def partial_derivative(p: MultiPoly, var_index: int) -> MultiPoly:
    if not 0 <= var_index < p.vars.nvars:
        raise UnknownVariableError(f"variable index {var_index} out of range")
    out = {}
    for e, c in p.terms.items():
        k = e[var_index]
        if k:
            d = list(e)
            d[var_index] = k - 1
            v = p._norm(c * k)
            if v:
                out[tuple(d)] = v
    return MultiPoly(p.vars, p.ring, out, _trusted=True)


def _block_degrees(p: MultiPoly, e: Exponent) -> tuple[int, int]:
    nx, ny = p.vars.x_count, p.vars.y_count
    return sum(e[:nx]), sum(e[nx:nx + ny])


def bidegree_of(p: MultiPoly) -> BiDegree:
    """Bidegree (x-degree, y-degree) shared by all terms.

    Raises ``ValueError`` for the zero polynomial and
    ``NotBihomogeneousError`` when the terms disagree.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no bidegree")
    degs = {_block_degrees(p, e) for e in p.terms}
    if len(degs) != 1:
        raise NotBihomogeneousError(f"{p} is not bihomogeneous: bidegrees {sorted(degs)}")
    a, b = degs.pop()
    return BiDegree(a, b)


def is_homogeneous(p: MultiPoly) -> bool:
    return len({sum(e) for e in p.terms}) <= 1


def monomials_of_degree(nvars: int, deg: int) -> Iterator[Exponent]:
    """All exponent tuples in ``nvars`` variables of total degree ``deg``."""
    for combo in itertools.combinations_with_replacement(range(nvars), deg):
        e = [0] * nvars
        for k in combo:
            e[k] += 1
        yield tuple(e)


def bimonomials(vars: VarSpec, deg: BiDegree) -> list[Exponent]:
    """Exponents of bidegree ``deg`` (no auxiliary variables involved)."""
    out = []
    for ex in monomials_of_degree(vars.x_count, deg.a):
        for ey in monomials_of_degree(vars.y_count, deg.b) if vars.y_count else ([()] if deg.b == 0 else []):
            out.append(ex + ey + (0,) * vars.aux_count)
    return out


def random_form(deg: BiDegree, vars: VarSpec, seed: int, ring: Ring) -> MultiPoly:
    """Dense form of the given bidegree with uniform random coefficients mod p.

    Deterministic in (deg, vars, seed, p).  Bidegree (0, 0) gives a nonzero
    constant.
    """
    if ring.p is None:
        raise PolyError("random_form needs a prime field")
    rng = np.random.default_rng([seed, deg.a, deg.b, vars.x_count, vars.y_count, ring.p])
    monos = bimonomials(vars, deg)
    if deg == BiDegree(0, 0):
        return MultiPoly.constant(int(rng.integers(1, ring.p)), vars, ring)
    coeffs = rng.integers(0, ring.p, size=len(monos))
    return MultiPoly(vars, ring, {e: int(c) for e, c in zip(monos, coeffs)})


def reduce_mod_p(p: MultiPoly, prime: int) -> MultiPoly:
    """Coefficientwise image of a rational polynomial in GF(prime)."""
    if p.ring.p is not None:
        if p.ring.p == prime:
            return p
        raise PolyError("reduce_mod_p expects a rational polynomial")
    return MultiPoly(p.vars, GF(prime), p.terms)


def compose(p: MultiPoly, images: Sequence[MultiPoly]) -> MultiPoly:
    """Substitute ``images[k]`` for variable k (all images share one VarSpec)."""
    if len(images) != p.vars.nvars:
        raise PolyError("need one image per variable")
    target = images[0]
    powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.constant(1, target.vars, target.ring), 1: img}
                                          for img in images]

    def power(k: int, m: int) -> MultiPoly:
        cache = powers[k]
        if m not in cache:
            cache[m] = power(k, m - 1) * images[k]
        return cache[m]

    acc: dict[Exponent, object] = {}
    for e, c in p.terms.items():
        term = MultiPoly.constant(c, target.vars, target.ring)
        for k, m in enumerate(e):
            if m:
                term = term * power(k, m)
        for te, tc in term.terms.items():
            acc[te] = acc.get(te, 0) + tc
    return MultiPoly(target.vars, target.ring, acc)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])(\d+)|(.))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(1) if m.group(1) else (m.start(2) if m.group(2) else m.start(4))
        if m.group(1):
            out.append(("int", int(m.group(1)), start))
        elif m.group(2):
            out.append(("var", (m.group(2), int(m.group(3))), start))
        elif m.group(4):
            ch = m.group(4)
            if ch not in "+-*/^()":
                raise PolySyntaxError(f"unexpected character {ch!r}", start)
            out.append((ch, ch, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, vars: VarSpec, ring: Ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = vars
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> MultiPoly:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> MultiPoly:
        acc = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            f = self.factor()
            if op == "*":
                acc = acc * f
            else:
                if not f.is_constant() or f.is_zero():
                    raise PolySyntaxError("division only by a nonzero constant", pos)
                c = f.terms[(0,) * self.vars.nvars]
                inv = pow(c, -1, self.ring.p) if self.ring.p else Fraction(1) / c
                acc = acc.scale(inv)
        return acc

    def factor(self) -> MultiPoly:
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            _, k, pos = self.take("int")
            if k > MAX_EXP:
                raise ExponentOverflowError(f"exponent {k} exceeds {MAX_EXP} at position {pos}")
            base = base ** k
        return base

    def base(self) -> MultiPoly:
        kind, val, pos = self.take()
        if kind == "int":
            return MultiPoly.constant(val, self.vars, self.ring)
        if kind == "var":
            block, idx = val
            if block == "x":
                if idx >= self.vars.x_count:
                    raise UnknownVariableError(f"unknown variable x{idx} at position {pos}")
                return MultiPoly.var(idx, self.vars, self.ring)
            if idx >= self.vars.y_count:
                raise UnknownVariableError(f"unknown variable y{idx} at position {pos}")
            return MultiPoly.var(self.vars.x_count + idx, self.vars, self.ring)
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise PolySyntaxError(f"unexpected token {kind!r}", pos)


def parse_poly(text: str, vars: VarSpec, ring: Ring = QQ) -> MultiPoly:
    """Parse a polynomial written with x<i>, y<j>, integers, + - * / ^ and parentheses."""
    parser = _Parser(text, vars, ring)
    if parser.peek()[0] == "end":
        raise PolySyntaxError("empty expression", 0)
    result = parser.expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise PolySyntaxError(f"trailing input {tok[0]!r}", tok[2])
    return result


def linear_combination(coeffs: Iterable, polys: Sequence[MultiPoly]) -> MultiPoly:
    polys = list(polys)
    acc: dict[Exponent, object] = {}
    ring = polys[0].ring
    for c, f in zip(coeffs, polys):
        if not c:
            continue
        for e, v in f.terms.items():
            acc[e] = acc.get(e, 0) + c * v
    return MultiPoly(polys[0].vars, ring, acc)
