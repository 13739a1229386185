"""Buchberger's algorithm over GF(p), saturation and zero-dimensional counting.

Internally a monomial is one integer whose fixed-width fields hold, from the
most significant end, for each block of the order: the block degree followed
by ``MAX_EXP - e_v`` for the block's variables, last variable first.  With
that packing

* integer comparison is the monomial order (degrevlex per block, blocks
  compared lexicographically),
* multiplying monomials is integer addition minus a constant,
* divisibility is a guard-bit subtraction test.

For degrevlex with few enough variables the fields are narrowed so keys fit
in int64 and the merge loops run compiled; a degree outgrowing the narrow
fields restarts the computation with 16-bit fields and Python ints.

Pair handling follows Gebauer-Moeller (coprime and chain criteria) with the
normal selection strategy refined by sugar.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .poly import MAX_EXP, Exponent, MultiPoly, PolyError, Ring, VarSpec


class NotZeroDimensionalError(ArithmeticError):
    """The quotient ring is not a finite-dimensional vector space."""


@dataclass(frozen=True)
class MonomialOrder:
    """``degrevlex``, or a two-block elimination order.

    For ``kind == "block"`` the variables listed in ``first_block`` are
    ranked above all others; each block is ordered by degrevlex.
    """

    kind: str = "degrevlex"
    first_block: tuple[int, ...] = ()

    @classmethod
    def block_elimination(cls, first_block_size: int) -> MonomialOrder:
        return cls("block", tuple(range(first_block_size)))

    @classmethod
    def eliminating(cls, indices: Sequence[int]) -> MonomialOrder:
        return cls("block", tuple(indices))

    def blocks(self, nvars: int) -> list[list[int]]:
        if self.kind == "degrevlex":
            return [list(range(nvars))]
        if self.kind != "block":
            raise ValueError(f"unknown order {self.kind!r}")
        first = list(self.first_block)
        rest = [v for v in range(nvars) if v not in set(first)]
        return [b for b in (first, rest) if b]


DEGREVLEX = MonomialOrder()


_WIDE = 16
# products of two residues must fit in int64
_FAST_PRIME_LIMIT = 2 ** 31


class _Overflow(Exception):
    """A degree left the range of the packed int64 layout."""


def _fast_width(nvars: int, order: MonomialOrder, p: int | None) -> int:
    """Field width for the int64 layout, or 0 when it would be too narrow."""
    if order.kind != "degrevlex" or p is None or p >= _FAST_PRIME_LIMIT:
        return 0
    w = min(_WIDE, 63 // (nvars + 1))
    return w if w >= 5 else 0


class _Layout:
    """Packing of exponent vectors for a fixed order, variable count and field width."""

    def __init__(self, nvars: int, order: MonomialOrder, width: int = _WIDE):
        self.nvars = nvars
        self.width = width
        self.mask = (1 << width) - 1
        self.max_exp = MAX_EXP if width == _WIDE else (1 << (width - 1)) - 1
        self.var_shift = [0] * nvars
        self.deg_shift = []
        self.blocks = order.blocks(nvars)
        pos = 0
        for block in reversed(self.blocks):
            for v in block:
                self.var_shift[v] = pos * width
                pos += 1
            self.deg_shift.append(pos * width)
            pos += 1
        self.deg_shift.reverse()
        self.const = sum(self.max_exp << s for s in self.var_shift)
        self.guard = sum((self.max_exp + 1) << s for s in self.var_shift)
        self.digits = self.const

    def encode(self, e: Exponent) -> int:
        key = self.const
        top = self.max_exp
        for v, x in enumerate(e):
            if x:
                if x > top:
                    if top < MAX_EXP:
                        raise _Overflow(x)
                    raise PolyError(f"exponent {x} exceeds {MAX_EXP}")
                key -= x << self.var_shift[v]
        for block, s in zip(self.blocks, self.deg_shift):
            key += sum(e[v] for v in block) << s
        return key

    def decode(self, key) -> Exponent:
        key = int(key)
        return tuple(self.max_exp - ((key >> s) & self.mask) for s in self.var_shift)

    def degree(self, key) -> int:
        key = int(key)
        return sum((key >> s) & self.mask for s in self.deg_shift)


@dataclass
class _Poly:
    keys: list
    coeffs: list
    sugar: int
    lexp: Exponent = field(default=())

    @property
    def lead(self) -> int:
        return int(self.keys[0])


class _Engine:
    """One Buchberger run.  With ``width`` set, terms live in int64 arrays and
    the merges run compiled; otherwise keys are unbounded Python ints."""

    def __init__(self, vars: VarSpec, ring: Ring, order: MonomialOrder, width: int = 0):
        if ring.p is None:
            raise PolyError("Groebner computations run over a prime field; reduce mod p first")
        self.vars = vars
        self.ring = ring
        self.p = ring.p
        self.order = order
        self.fast = width > 0
        self.layout = _Layout(vars.nvars, order, width if self.fast else _WIDE)
        self._packed_for = None
        self._packed = None

    # conversion -----------------------------------------------------------
    def to_internal(self, f: MultiPoly) -> _Poly:
        if f.vars != self.vars or f.ring != self.ring:
            raise PolyError("polynomial does not match the engine's ring")
        enc = self.layout.encode
        sugar = f.total_degree()
        if self.fast and sugar > self.layout.max_exp:
            raise _Overflow(sugar)
        items = sorted(((enc(e), c) for e, c in f.terms.items()), reverse=True)
        keys = [k for k, _ in items]
        coeffs = [c for _, c in items]
        if self.fast:
            keys = np.array(keys, dtype=np.int64)
            coeffs = np.array(coeffs, dtype=np.int64)
        return _Poly(keys, coeffs, sugar, self.layout.decode(keys[0]) if len(keys) else ())

    def to_poly(self, g: _Poly) -> MultiPoly:
        dec = self.layout.decode
        return MultiPoly(self.vars, self.ring,
                         {dec(k): int(c) for k, c in zip(g.keys, g.coeffs)}, _trusted=True)

    def monic(self, g: _Poly) -> _Poly:
        p = self.p
        inv = pow(int(g.coeffs[0]), -1, p)
        if inv != 1:
            if self.fast:
                g.coeffs = _kernels.scale(g.coeffs, inv, p)
            else:
                g.coeffs = [c * inv % p for c in g.coeffs]
        g.lexp = self.layout.decode(g.keys[0])
        return g

    # reduction ------------------------------------------------------------
    def _reduce_dict(self, acc: dict, basis: list[_Poly], guarded: list[int]) -> tuple[list, list]:
        """Full normal form of the term dict ``acc`` (values unreduced mod p)."""
        p = self.p
        digits = self.layout.digits
        guard = self.layout.guard
        heap = [-k for k in acc]
        heapq.heapify(heap)
        out_k: list = []
        out_c: list = []
        pop = heapq.heappop
        push = heapq.heappush
        while heap:
            k = -pop(heap)
            c = acc.pop(k, 0) % p
            if not c:
                continue
            kd = k & digits
            g = None
            for gl, gp in zip(guarded, basis):
                if (gl - kd) & guard == guard:
                    g = gp
                    break
            if g is None:
                out_k.append(k)
                out_c.append(c)
                continue
            shift = k - g.keys[0]
            gk = g.keys
            gc = g.coeffs
            get = acc.get
            for idx in range(1, len(gk)):
                nk = gk[idx] + shift
                v = get(nk)
                if v is None:
                    acc[nk] = -c * gc[idx]
                    push(heap, -nk)
                else:
                    acc[nk] = v - c * gc[idx]
        return out_k, out_c

    def guard_of(self, g: _Poly) -> int:
        return (int(g.keys[0]) & self.layout.digits) | self.layout.guard

    def _pack(self, basis: list[_Poly]):
        ident = tuple(id(b) for b in basis)
        if ident != self._packed_for:
            # shortest reducers first: cheaper merges
            ordered = sorted(basis, key=lambda b: len(b.keys))
            sizes = [len(b.keys) for b in ordered]
            off = np.zeros(len(ordered) + 1, dtype=np.int64)
            np.cumsum(sizes, out=off[1:])
            if ordered:
                bk = np.concatenate([b.keys for b in ordered])
                bc = np.concatenate([b.coeffs for b in ordered])
            else:
                bk = np.zeros(0, dtype=np.int64)
                bc = np.zeros(0, dtype=np.int64)
            guards = np.array([self.guard_of(b) for b in ordered], dtype=np.int64)
            self._packed = (bk, bc, off, guards)
            self._packed_for = ident
        return self._packed

    def reduce(self, keys, coeffs, basis: list[_Poly]):
        """Full normal form of a sorted term list modulo ``basis``."""
        if self.fast:
            bk, bc, off, guards = self._pack(basis)
            return _kernels.reduce_full(keys, coeffs, bk, bc, off, guards, self.p,
                                        self.layout.digits, self.layout.guard)
        return self._reduce_dict(dict(zip(keys, coeffs)), basis, [self.guard_of(b) for b in basis])

    def normal_form(self, g: _Poly, basis: list[_Poly]) -> _Poly:
        keys, coeffs = self.reduce(g.keys, g.coeffs, basis)
        return _Poly(keys, coeffs, g.sugar)

    def spoly_tail(self, fi: _Poly, fj: _Poly, lk: int):
        si = lk - fi.lead
        sj = lk - fj.lead
        if self.fast:
            return _kernels.combine(fi.keys, fi.coeffs, 1, si, fj.keys, fj.coeffs, 1, sj, 1, self.p)
        acc: dict[int, int] = {}
        for k, c in zip(fi.keys[1:], fi.coeffs[1:]):
            acc[k + si] = c
        for k, c in zip(fj.keys[1:], fj.coeffs[1:]):
            nk = k + sj
            acc[nk] = acc.get(nk, 0) - c
        items = sorted(acc.items(), reverse=True)
        return [k for k, _ in items], [c for _, c in items]

    # Buchberger -----------------------------------------------------------
    def _unit(self) -> list[_Poly]:
        zero = (0,) * self.vars.nvars
        k = self.layout.encode(zero)
        if self.fast:
            return [_Poly(np.array([k], dtype=np.int64), np.array([1], dtype=np.int64), 0, zero)]
        return [_Poly([k], [1], 0, zero)]

    def groebner(self, gens: Sequence[MultiPoly]) -> list[_Poly]:
        enc = self.layout.encode
        top = self.layout.max_exp
        nv = self.vars.nvars
        polys: list[_Poly] = []
        leads = np.zeros((8, nv), dtype=np.int64)
        active = np.zeros(0, dtype=np.int64)
        # pair store: lcm rows, endpoints and a liveness flag, indexed by heap entries
        pl = np.zeros((64, nv), dtype=np.int64)
        pa = np.zeros(64, dtype=np.int64)
        pb = np.zeros(64, dtype=np.int64)
        alive = np.zeros(64, dtype=np.bool_)
        npairs = 0
        heap: list = []

        def update(h: int):
            nonlocal active, pl, pa, pb, alive, npairs
            hl = leads[h]
            L, keep = _kernels.new_pairs(leads[active], hl)
            _kernels.drop_old_pairs(pl, pa, pb, alive, npairs, leads, hl)
            fresh = np.flatnonzero(keep)
            if npairs + len(fresh) > len(alive):
                cap = 2 * (npairs + len(fresh))
                pl = np.resize(pl, (cap, nv))
                pa, pb, alive = np.resize(pa, cap), np.resize(pb, cap), np.resize(alive, cap)
            fh = polys[h]
            for idx in fresh:
                g = int(active[idx])
                l = tuple(int(x) for x in L[idx])
                dl = sum(l)
                if self.fast and dl > top:
                    raise _Overflow(dl)
                fg = polys[g]
                s = max(fg.sugar + dl - sum(fg.lexp), fh.sugar + dl - sum(fh.lexp))
                q = npairs
                npairs += 1
                pl[q] = L[idx]
                pa[q], pb[q], alive[q] = g, h, True
                heapq.heappush(heap, (s, enc(l), q))
            active = np.append(active[~_kernels.divisible_mask(leads[active], hl)], h)

        def add(g: _Poly):
            nonlocal leads
            polys.append(self.monic(g))
            h = len(polys) - 1
            if h >= len(leads):
                leads = np.resize(leads, (2 * h, nv))
            leads[h] = g.lexp
            update(h)

        inputs = [self.to_internal(f) for f in gens if not f.is_zero()]
        inputs.sort(key=lambda g: g.lead)
        for g in inputs:
            r = self.normal_form(g, [polys[i] for i in active])
            if len(r.keys):
                if sum(self.layout.decode(r.keys[0])) == 0:
                    return self._unit()
                add(r)

        while heap:
            s, lk, q = heapq.heappop(heap)
            if not alive[q]:
                continue
            alive[q] = False
            keys, coeffs = self.spoly_tail(polys[pa[q]], polys[pb[q]], lk)
            if len(keys):
                keys, coeffs = self.reduce(keys, coeffs, [polys[a] for a in active])
            if not len(keys):
                continue
            if sum(self.layout.decode(keys[0])) == 0:
                return self._unit()
            add(_Poly(keys, coeffs, s))
        return self.interreduce([polys[a] for a in active])

    def interreduce(self, basis: list[_Poly]) -> list[_Poly]:
        basis = sorted(basis, key=lambda g: g.lead)
        out = []
        for idx, g in enumerate(basis):
            others = basis[:idx] + basis[idx + 1:]
            keys, coeffs = self.reduce(g.keys[1:], g.coeffs[1:], others)
            if self.fast:
                keys = np.concatenate([g.keys[:1], keys])
                coeffs = np.concatenate([g.coeffs[:1], coeffs])
            else:
                keys = [g.keys[0]] + keys
                coeffs = [g.coeffs[0]] + coeffs
            out.append(self.monic(_Poly(keys, coeffs, g.sugar, g.lexp)))
        return out


def _run(gens: Sequence[MultiPoly], order: MonomialOrder) -> tuple[_Engine, list[_Poly]]:
    vars, ring = gens[0].vars, gens[0].ring
    width = _fast_width(vars.nvars, order, ring.p)
    if width:
        eng = _Engine(vars, ring, order, width)
        try:
            return eng, eng.groebner(gens)
        except _Overflow:
            pass
    eng = _Engine(vars, ring, order)
    return eng, eng.groebner(gens)


@dataclass(frozen=True)
class GroebnerBasis:
    polys: tuple[MultiPoly, ...]
    order: MonomialOrder
    reduced: bool = True

    def __iter__(self):
        return iter(self.polys)

    def __len__(self) -> int:
        return len(self.polys)

    @property
    def vars(self) -> VarSpec:
        return self.polys[0].vars

    @property
    def ring(self) -> Ring:
        return self.polys[0].ring

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant() and not self.polys[0].is_zero()

    def leading_exponents(self) -> list[Exponent]:
        layout = _Layout(self.vars.nvars, self.order)
        return [layout.decode(max(layout.encode(e) for e in f.terms)) for f in self.polys]


def buchberger(gens: Sequence[MultiPoly], order: MonomialOrder = DEGREVLEX) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    The zero ideal is returned as a basis holding the zero polynomial.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    eng, result = _run(gens, order)
    if not result:
        return GroebnerBasis((MultiPoly.zero(eng.vars, eng.ring),), order)
    result.sort(key=lambda g: g.lead)
    return GroebnerBasis(tuple(eng.to_poly(g) for g in result), order)


def normal_form(p: MultiPoly, basis: GroebnerBasis) -> MultiPoly:
    polys = [f for f in basis.polys if not f.is_zero()]
    if p.is_zero() or not polys:
        return p
    eng = _Engine(p.vars, p.ring, basis.order)
    internal = [eng.monic(eng.to_internal(f)) for f in polys]
    return eng.to_poly(eng.normal_form(eng.to_internal(p), internal))


def contains(basis: GroebnerBasis, p: MultiPoly) -> bool:
    return normal_form(p, basis).is_zero()


def saturate(gens: Sequence[MultiPoly], f: MultiPoly) -> list[MultiPoly]:
    """Generators of (I : f^inf) via T*f - 1 and elimination of T."""
    if f.is_zero():
        raise ValueError("cannot saturate by zero")
    gens = [g for g in gens if not g.is_zero()]
    vars = f.vars
    big = vars.with_aux(vars.aux_count + 1)
    t_index = big.nvars - 1
    lifted = [g.embed(big) for g in gens]
    t = MultiPoly.var(t_index, big, f.ring)
    lifted.append(t * f.embed(big) - 1)
    gb = buchberger(lifted, MonomialOrder.eliminating([t_index]))
    out = []
    for g in gb.polys:
        if any(e[t_index] for e in g.terms):
            continue
        out.append(MultiPoly(vars, f.ring, {e[:-1]: c for e, c in g.terms.items()}, _trusted=True))
    return out or [MultiPoly.zero(vars, f.ring)]


def _has_pure_powers(leads: list[Exponent], nvars: int) -> bool:
    seen = set()
    for e in leads:
        support = [v for v, x in enumerate(e) if x]
        if len(support) == 1:
            seen.add(support[0])
    return len(seen) == nvars


def standard_monomial_count(leads: list[Exponent], nvars: int) -> int:
    """Number of monomials outside the monomial ideal spanned by ``leads``."""
    if any(not any(e) for e in leads):
        return 0
    layout = _Layout(nvars, DEGREVLEX)
    guards = [(layout.encode(e) & layout.digits) | layout.guard for e in leads]
    guard = layout.guard
    unit = [0] * nvars
    current = {tuple(unit)}
    count = 1
    while current:
        nxt = set()
        for m in current:
            for v in range(nvars):
                m2 = list(m)
                m2[v] += 1
                m2 = tuple(m2)
                if m2 in nxt:
                    continue
                kd = layout.encode(m2) & layout.digits
                if not any((g - kd) & guard == guard for g in guards):
                    nxt.add(m2)
        count += len(nxt)
        current = nxt
    return count


def quotient_dimension(gens: Sequence[MultiPoly]) -> int:
    """dim_k k[vars]/I, raising NotZeroDimensionalError when infinite."""
    gb = buchberger(gens)
    nvars = gb.vars.nvars
    if gb.is_unit():
        return 0
    leads = gb.leading_exponents()
    if not _has_pure_powers(leads, nvars):
        raise NotZeroDimensionalError(f"ideal has positive dimension ({len(leads)} generators)")
    return standard_monomial_count(leads, nvars)


def krull_dimension(gens: Sequence[MultiPoly]) -> int:
    """Dimension of k[vars]/I; -1 for the unit ideal."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("zero ideal: pass the ambient VarSpec explicitly")
    gb = buchberger(gens)
    nvars = gb.vars.nvars
    if gb.is_unit():
        return -1
    supports = [frozenset(v for v, x in enumerate(e) if x) for e in gb.leading_exponents()]
    for size in range(nvars, -1, -1):
        for subset in itertools.combinations(range(nvars), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0
