"""Truncated Chow rings of P^n, P^n x P^r and split projective bundles.

A :class:`ChowClass` is an integer polynomial ``sum c[i, j] H^i h^j`` with
``H^(n+1) = h^(r+1) = 0``.  ``r = -1`` encodes the single space P^n, where
only ``j = 0`` occurs.  Codimension of ``H^i h^j`` is ``i + j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .poly import QQ, VarSpec, parse_poly


class AmbientMismatchError(ValueError):
    pass


class NotInvertibleError(ArithmeticError):
    pass


class ChowClass:
    __slots__ = ("n", "r", "terms")

    def __init__(self, n: int, r: int = -1, terms: Mapping[tuple[int, int], int] | None = None):
        if n < 0 or r < -1:
            raise ValueError(f"invalid ambient ({n}, {r})")
        self.n = n
        self.r = r
        jmax = max(r, 0)
        clean = {}
        for (i, j), c in (terms or {}).items():
            if c and 0 <= i <= n and 0 <= j <= jmax:
                clean[(i, j)] = c
            elif i < 0 or j < 0:
                raise ValueError(f"negative exponent in term {(i, j)}")
        self.terms = clean

    # constructors ---------------------------------------------------------
    @classmethod
    def one(cls, n: int, r: int = -1) -> ChowClass:
        return cls(n, r, {(0, 0): 1})

    @classmethod
    def zero(cls, n: int, r: int = -1) -> ChowClass:
        return cls(n, r)

    @classmethod
    def linear(cls, a: int, b: int, n: int, r: int = -1) -> ChowClass:
        """The codimension-one class a*H + b*h."""
        if b and r < 0:
            raise ValueError("h needs a second factor")
        return cls(n, r, {(1, 0): a, (0, 1): b})

    @classmethod
    def parse(cls, text: str, n: int, r: int = -1) -> ChowClass:
        """Read a class written in H and h, e.g. ``"H^2 + 3*H^2*h"``."""
        f = parse_poly(text.replace("H", "x0").replace("h", "y0"), VarSpec(1, 1), QQ)
        terms = {}
        for (i, j), c in f.terms.items():
            if isinstance(c, Fraction):
                raise ValueError("class coefficients must be integers")
            terms[(i, j)] = c
        return cls(n, r, terms)

    # queries --------------------------------------------------------------
    @property
    def ambient(self) -> tuple[int, int]:
        return (self.n, self.r)

    @property
    def dim(self) -> int:
        return self.n + max(self.r, 0)

    def coeff(self, i: int, j: int = 0) -> int:
        return self.terms.get((i, j), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def codim_part(self, c: int) -> ChowClass:
        return ChowClass(self.n, self.r, {k: v for k, v in self.terms.items() if sum(k) == c})

    def degree(self) -> int:
        """Coefficient of the point class H^n h^r."""
        return self.coeff(self.n, max(self.r, 0))

    def same_ambient(self, other: ChowClass):
        if self.ambient != other.ambient:
            raise AmbientMismatchError(f"ambients {self.ambient} and {other.ambient} differ")

    # arithmetic -----------------------------------------------------------
    def _lift(self, other) -> ChowClass:
        if isinstance(other, ChowClass):
            self.same_ambient(other)
            return other
        return ChowClass(self.n, self.r, {(0, 0): other})

    def __add__(self, other) -> ChowClass:
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return ChowClass(self.n, self.r, out)

    __radd__ = __add__

    def __neg__(self) -> ChowClass:
        return ChowClass(self.n, self.r, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> ChowClass:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> ChowClass:
        return self._lift(other) - self

    def __mul__(self, other) -> ChowClass:
        if not isinstance(other, ChowClass):
            return ChowClass(self.n, self.r, {k: v * other for k, v in self.terms.items()})
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ChowClass:
        if k < 0:
            return inverse_unit(self) ** (-k)
        result = ChowClass.one(self.n, self.r)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, ChowClass):
            return self.ambient == other.ambient and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == ({(0, 0): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, self.r, frozenset(self.terms.items())))

    # rendering ------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, ((i, j), c) in enumerate(sorted(self.terms.items(), key=lambda t: (t[0][1], t[0][0]))):
            mono = "*".join(s for s in (_power("H", i), _power("h", j)) if s)
            body = (mono if abs(c) == 1 else f"{abs(c)}*{mono}") if mono else str(abs(c))
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"ChowClass({self}; n={self.n}, r={self.r})"

    def to_json_terms(self) -> list[list]:
        return [[i, j, str(c)] for (i, j), c in sorted(self.terms.items(), key=lambda t: (t[0][1], t[0][0]))]

    def coefficient_list(self) -> list[str]:
        """Coefficients of H^0..H^n as strings (single-space classes)."""
        return [str(self.coeff(i, 0)) for i in range(self.n + 1)]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "r": self.r, "terms": self.to_json_terms()})


def _power(sym: str, k: int) -> str:
    if k == 0:
        return ""
    return sym if k == 1 else f"{sym}^{k}"


@dataclass(frozen=True)
class LineBundleClass:
    """A line bundle on P^n x P^r recorded by c1 = a*H + b*h."""

    a: int
    b: int = 0

    def c1(self, n: int, r: int = -1) -> ChowClass:
        return ChowClass.linear(self.a, self.b, n, r)

    def total(self, n: int, r: int = -1) -> ChowClass:
        return 1 + self.c1(n, r)

    def __mul__(self, other: LineBundleClass) -> LineBundleClass:  # tensor product
        return LineBundleClass(self.a + other.a, self.b + other.b)

    def dual(self) -> LineBundleClass:
        return LineBundleClass(-self.a, -self.b)


def mul(alpha: ChowClass, beta: ChowClass) -> ChowClass:
    alpha.same_ambient(beta)
    n, jmax = alpha.n, max(alpha.r, 0)
    out: dict[tuple[int, int], int] = {}
    for (i1, j1), c1 in alpha.terms.items():
        for (i2, j2), c2 in beta.terms.items():
            i, j = i1 + i2, j1 + j2
            if i <= n and j <= jmax:
                out[(i, j)] = out.get((i, j), 0) + c1 * c2
    return ChowClass(alpha.n, alpha.r, out)


def inverse_unit(alpha: ChowClass) -> ChowClass:
    """Inverse of a class with constant term +-1 (a unit in the truncated ring)."""
    c0 = alpha.coeff(0, 0)
    if c0 not in (1, -1):
        raise NotInvertibleError(f"constant term {c0} is not a unit")
    nil = alpha * c0 - 1  # alpha = c0 * (1 + nil)
    result = ChowClass.one(alpha.n, alpha.r)
    power = ChowClass.one(alpha.n, alpha.r)
    for _ in range(alpha.dim):
        power = power * (-nil)
        if power.is_zero():
            break
        result = result + power
    return result * c0


def tensor_line_bundle(alpha: ChowClass, L: LineBundleClass) -> ChowClass:
    """Divide the codimension-c part of alpha by (1 + c1(L))^c, for every c."""
    n, r = alpha.ambient
    inv = inverse_unit(L.total(n, r))
    result = ChowClass.zero(n, r)
    power = ChowClass.one(n, r)
    for c in range(alpha.dim + 1):
        part = alpha.codim_part(c)
        if not part.is_zero():
            result = result + part * power
        power = power * inv
    return result


def dual(alpha: ChowClass) -> ChowClass:
    """Flip the sign of odd-codimension parts."""
    return ChowClass(alpha.n, alpha.r, {k: (-v if sum(k) % 2 else v) for k, v in alpha.terms.items()})


def pushforward_h(alpha: ChowClass) -> ChowClass:
    """Push forward along P^n x P^r -> P^n: the coefficient of h^r."""
    if alpha.r < 0:
        raise ValueError("pushforward_h needs a product ambient")
    return ChowClass(alpha.n, -1, {(i, 0): c for (i, j), c in alpha.terms.items() if j == alpha.r})


def chern_tangent(n: int, r: int = -1) -> ChowClass:
    """(1+H)^(n+1) (1+h)^(r+1), truncated; just (1+H)^(n+1) when r = -1."""
    terms = {}
    for i in range(n + 1):
        for j in range(max(r, 0) + 1):
            terms[(i, j)] = comb(n + 1, i) * (comb(r + 1, j) if r >= 0 else 1)
    return ChowClass(n, r, terms)


def complete_intersection_segre(bidegrees: Iterable[tuple[int, int]], n: int, r: int = -1) -> ChowClass:
    """prod_t D_t / (1 + D_t) for divisors D_t = a_t H + b_t h."""
    result = ChowClass.one(n, r)
    for a, b in bidegrees:
        D = ChowClass(n, r, {(1, 0): a, (0, 1): b})
        result = result * D * inverse_unit(1 + D)
    return result


# ---------------------------------------------------------------------------
# split projective bundles P(E^vee) over P^n, E = O(d_0) + ... + O(d_r)

class SplitBundleRing:
    """A(P(E^vee)) = Z[H, xi] / (H^(n+1), prod_i (xi - d_i H)).

    ``xi`` is c1(O(1)).  Elements are dicts {(i, k): c} for H^i xi^k, kept
    in normal form with k <= r.
    """

    def __init__(self, n: int, twists: Sequence[int]):
        if not twists:
            raise ValueError("need at least one twist")
        self.n = n
        self.twists = tuple(twists)
        self.r = len(twists) - 1
        # prod (xi - d_i H) = sum_m (-1)^m e_m(d) H^m xi^(r+1-m)
        e = [1]
        for d in self.twists:
            e = [a + d * b for a, b in zip(e + [0], [0] + e)]
        self._relation = [((-1) ** m) * e[m] for m in range(len(e))]

    @property
    def dim(self) -> int:
        return self.n + self.r

    def element(self, terms: Mapping[tuple[int, int], int]) -> SplitBundleElement:
        return SplitBundleElement(self, self.reduce(terms))

    def one(self) -> SplitBundleElement:
        return self.element({(0, 0): 1})

    def H(self) -> SplitBundleElement:
        return self.element({(1, 0): 1})

    def xi(self) -> SplitBundleElement:
        return self.element({(0, 1): 1})

    def reduce(self, terms: Mapping[tuple[int, int], int], order: Sequence[tuple[int, int]] | None = None
               ) -> dict[tuple[int, int], int]:
        """Normal form modulo H^(n+1) and the Grothendieck relation.

        ``order`` optionally fixes which reducible monomials are rewritten
        first; the result does not depend on it.
        """
        work = {k: v for k, v in terms.items() if v and k[0] <= self.n}
        r = self.r
        while True:
            reducible = [k for k, v in work.items() if v and k[1] > r]
            if not reducible:
                break
            if order is not None:
                rank = {k: idx for idx, k in enumerate(order)}
                reducible.sort(key=lambda k: rank.get(k, len(rank)))
            else:
                reducible.sort(key=lambda k: -k[1])
            i, k = reducible[0]
            c = work.pop((i, k))
            # xi^k = xi^(k-r-1) * xi^(r+1), and xi^(r+1) = -sum_{m>=1} rel_m H^m xi^(r+1-m)
            for m in range(1, r + 2):
                coef = self._relation[m]
                if not coef:
                    continue
                key = (i + m, k - m)
                if key[0] > self.n:
                    continue
                work[key] = work.get(key, 0) - c * coef
        return {k: v for k, v in work.items() if v}


class SplitBundleElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: SplitBundleRing, terms: dict[tuple[int, int], int]):
        self.ring = ring
        self.terms = terms

    def __add__(self, other) -> SplitBundleElement:
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return self.ring.element(out)

    __radd__ = __add__

    def __neg__(self) -> SplitBundleElement:
        return SplitBundleElement(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> SplitBundleElement:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> SplitBundleElement:
        return self._lift(other) - self

    def _lift(self, other) -> SplitBundleElement:
        if isinstance(other, SplitBundleElement):
            return other
        return self.ring.element({(0, 0): other})

    def __mul__(self, other) -> SplitBundleElement:
        if not isinstance(other, SplitBundleElement):
            return SplitBundleElement(self.ring, {k: v * other for k, v in self.terms.items() if v * other})
        out: dict[tuple[int, int], int] = {}
        for (i1, k1), c1 in self.terms.items():
            for (i2, k2), c2 in other.terms.items():
                key = (i1 + i2, k1 + k2)
                if key[0] <= self.ring.n:
                    out[key] = out.get(key, 0) + c1 * c2
        return self.ring.element(out)

    __rmul__ = __mul__

    def inverse_unit(self) -> SplitBundleElement:
        c0 = self.terms.get((0, 0), 0)
        if c0 not in (1, -1):
            raise NotInvertibleError(f"constant term {c0} is not a unit")
        nil = self * c0 - 1
        result = self.ring.one()
        power = self.ring.one()
        for _ in range(self.ring.dim):
            power = power * (-nil)
            result = result + power
        return result * c0

    def __eq__(self, other) -> bool:
        if isinstance(other, SplitBundleElement):
            return self.ring is other.ring and self.terms == other.terms
        return NotImplemented

    def __repr__(self) -> str:
        return f"SplitBundleElement({self.terms})"


def pb_pushforward(e: SplitBundleElement) -> ChowClass:
    """Push forward to P^n: the coefficient of xi^r in normal form."""
    r = e.ring.r
    return ChowClass(e.ring.n, -1, {(i, 0): c for (i, k), c in e.terms.items() if k == r})


def split_chern_class(n: int, twists: Sequence[int]) -> ChowClass:
    result = ChowClass.one(n)
    for d in twists:
        result = result * (1 + ChowClass.linear(d, 0, n))
    return result


def split_top_chern_class(n: int, twists: Sequence[int]) -> ChowClass:
    c = 1
    for d in twists:
        c *= d
    return ChowClass(n, -1, {(len(twists), 0): c})


def bundle_pushforward_sides(n: int, twists: Sequence[int]) -> tuple[ChowClass, ChowClass]:
    """Both sides of pi_*(c(pi^*E^vee (x) O(1)) / c(O(1))) = 1 - c_top(E)/c(E)."""
    ring = SplitBundleRing(n, twists)
    H, xi = ring.H(), ring.xi()
    num = ring.one()
    for d in twists:
        num = num * (1 + xi - H * d)
    lhs = pb_pushforward(num * (1 + xi).inverse_unit())
    rhs = 1 - split_top_chern_class(n, twists) * inverse_unit(split_chern_class(n, twists))
    return lhs, rhs


def bundle_pushforward_check(n: int, twists: Sequence[int]) -> bool:
    lhs, rhs = bundle_pushforward_sides(n, twists)
    return lhs == rhs
