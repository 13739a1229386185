"""CSM, Milnor and virtual classes of projective schemes X = V(F_0..F_r) in P^n.

The main route goes through the auxiliary scheme Y in P^n x P^r cut out by
the F_j and the n+1 forms ``sum_j y_j dF_j/dx_i``:

    csm(X) = pi_*( (1+H)^(n+1) (1+h)^(r+1) / (1+dH+h)
                   * (s(Y)^vee (x) O(dH+h)) ),

valid once all F_j have the common degree d and r >= n.  Two independent
routes are provided as oracles: inclusion-exclusion over hypersurfaces, and
the hypersurface ``sum_j y_j F_j`` in P^n x P^r pushed down to P^n.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

from .chow import (ChowClass, LineBundleClass, tensor_line_bundle, chern_tangent, dual, inverse_unit,
                   pushforward_h)
from .gb import krull_dimension
from .poly import (DEFAULT_PRIME, MultiPoly, VarSpec, is_homogeneous,
                   linear_combination, monomials_of_degree, partial_derivative, reduce_mod_p)
from .segre import SegreResult, segre_class

INCLUSION_EXCLUSION_WARN = 6


class InputError(ValueError):
    """Generators that do not describe a projective scheme the formulas accept."""


class NotCompleteIntersectionError(InputError):
    pass


@dataclass(frozen=True)
class InputSystem:
    """Generators of equal degree d for a subscheme of P^n; zeros pad r up.

    ``original`` keeps the generators as given, before raising and padding.
    """

    n: int
    F: tuple[MultiPoly, ...]
    d: int
    original: tuple[MultiPoly, ...] = ()
    normalized: bool = True

    @property
    def r(self) -> int:
        return len(self.F) - 1

    @property
    def vars(self) -> VarSpec:
        return VarSpec(self.n + 1)

    def nonzero(self) -> list[MultiPoly]:
        return [f for f in self.F if not f.is_zero()]


@dataclass(frozen=True)
class BiIdeal:
    """Generators in the x/y variables of P^n x P^r."""

    gens: tuple[MultiPoly, ...]
    n: int
    r: int

    @property
    def vars(self) -> VarSpec:
        return VarSpec(self.n + 1, self.r + 1)

    def __iter__(self):
        return iter(self.gens)

    def __len__(self) -> int:
        return len(self.gens)


@dataclass
class CharClassReport:
    csm: ChowClass
    method: str
    cvir: ChowClass | None = None
    milnor: ChowClass | None = None
    segre: SegreResult | None = None
    integrand: ChowClass | None = None
    meta: dict = field(default_factory=dict)

    @property
    def euler(self) -> int:
        return self.csm.coeff(self.csm.n)

    def to_dict(self) -> dict:
        d: dict = {
            "ambient": {"n": self.csm.n, "r": self.meta.get("r")},
            "csm": _coefficients(self.csm),
            "euler": str(self.euler),
            "meta": {k: v for k, v in self.meta.items() if k != "r"} | {"method": self.method},
        }
        if self.segre is not None:
            d["segre"] = self.segre.cls.to_json_terms()
        if self.milnor is not None:
            d["milnor"] = _coefficients(self.milnor)
        if self.cvir is not None:
            d["cvir"] = _coefficients(self.cvir)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _coefficients(c: ChowClass) -> list[str]:
    return [str(c.coeff(i)) for i in range(c.n + 1)]


# ---------------------------------------------------------------------------
# input handling

def _check_generators(F: Sequence[MultiPoly], n: int) -> list[MultiPoly]:
    F = list(F)
    if not F:
        raise InputError("empty generator list")
    vars = VarSpec(n + 1)
    for f in F:
        if f.vars != vars:
            raise InputError(f"generator {f} does not live in the coordinates of P^{n}")
        if not f.is_zero() and not is_homogeneous(f):
            raise InputError(f"generator {f} is not homogeneous")
    return F


def raise_to_degree(F: Sequence[MultiPoly], d: int) -> list[MultiPoly]:
    """Replace each lower-degree nonzero generator by its products with all
    monomials of the complementary degree; zeros pass through."""
    out = []
    for f in F:
        if f.is_zero() or f.total_degree() == d:
            out.append(f)
            continue
        for e in monomials_of_degree(f.vars.nvars, d - f.total_degree()):
            out.append(f * MultiPoly.monomial(e, f.vars, f.ring))
    return out


def normalize_input(F: Sequence[MultiPoly], n: int, target_count: int | None = None,
                    combos: int | None = None, seed: int = 0) -> InputSystem:
    """Bring generators to one degree and pad with zeros to ``target_count``.

    ``combos`` (experimental) replaces the raised generators by that many
    random integer combinations of them.  Such combinations cut out X for
    general choices, but nothing guarantees it for a specific draw.
    """
    F = _check_generators(F, n)
    nonzero = [f for f in F if not f.is_zero()]
    d = max((f.total_degree() for f in nonzero), default=1)
    G = raise_to_degree(F, d)
    if combos is not None:
        if combos < n + 1:
            raise InputError(f"--combos needs at least n+1 = {n + 1} combinations")
        base = [g for g in G if not g.is_zero()]
        if base:
            rng = np.random.default_rng([seed, 0xC0])
            G = [linear_combination([int(c) for c in rng.integers(-50, 51, size=len(base))], base)
                 for _ in range(combos)]
    count = max(n + 1, len(G)) if target_count is None else target_count
    if count < len(G):
        raise InputError(f"target count {count} is below the {len(G)} generators of degree {d}")
    zero = MultiPoly.zero(VarSpec(n + 1), F[0].ring)
    G = G + [zero] * (count - len(G))
    return InputSystem(n, tuple(G), d, tuple(F))


def build_Y_ideal(sys: InputSystem) -> BiIdeal:
    """(F_0..F_r) + (sum_j y_j dF_j/dx_i, i = 0..n) in P^n x P^r."""
    n, r = sys.n, sys.r
    big = VarSpec(n + 1, r + 1)
    F = [f.embed(big) for f in sys.F]
    gens = [f for f in F if not f.is_zero()]
    ys = [MultiPoly.var(n + 1 + j, big, sys.F[0].ring) for j in range(r + 1)]
    for i in range(n + 1):
        form = MultiPoly.zero(big, sys.F[0].ring)
        for y, f in zip(ys, F):
            if not f.is_zero():
                form = form + y * partial_derivative(f, i)
        if not form.is_zero():
            gens.append(form)
    if not gens:
        gens = [MultiPoly.zero(big, sys.F[0].ring)]
    return BiIdeal(tuple(gens), n, r)


# ---------------------------------------------------------------------------
# main formulas

def _segre_kwargs(p: int, seed: int, trials: int) -> dict:
    return {"p": p, "seed": seed, "trials": trials}


def main_integrand(s: ChowClass, d: int) -> ChowClass:
    """c(T) / (1+dH+h) * (s^vee (x) O(dH+h)) on P^n x P^r, before pushing forward."""
    n, r = s.ambient
    L = LineBundleClass(d, 1)
    return chern_tangent(n, r) * inverse_unit(L.total(n, r)) * tensor_line_bundle(dual(s), L)


def csm_main(sys: InputSystem, p: int = DEFAULT_PRIME, seed: int = 0, trials: int = 2) -> CharClassReport:
    """CSM class of X through the Segre class of Y; needs r >= n."""
    if sys.r < sys.n:
        raise InputError(f"the main formula needs r >= n; got r = {sys.r}, n = {sys.n}")
    Y = build_Y_ideal(sys)
    seg = segre_class(list(Y.gens), sys.n, sys.r, **_segre_kwargs(p, seed, trials))
    integrand = main_integrand(seg.cls, sys.d)
    meta = {"r": sys.r, "prime": seg.meta.get("prime", p), "seed": seed, "trials": trials}
    return CharClassReport(pushforward_h(integrand), "main", segre=seg, integrand=integrand, meta=meta)


def c_vir(n: int, degrees: Sequence[int]) -> ChowClass:
    """(1+H)^(n+1) prod_t d_t H / (1 + d_t H): the virtual class of a complete intersection."""
    out = chern_tangent(n)
    for dt in degrees:
        D = ChowClass.linear(dt, 0, n)
        out = out * D * inverse_unit(1 + D)
    return out


def c_vir_ci(n: int, d: int, r: int) -> ChowClass:
    """c_vir for r+1 hypersurfaces of degree d in P^n."""
    if r + 1 > n:
        raise InputError(f"{r + 1} hypersurfaces cannot meet properly in a positive-dimensional set in P^{n}")
    return c_vir(n, [d] * (r + 1))


def projective_dimension(F: Sequence[MultiPoly], n: int, p: int = DEFAULT_PRIME) -> int:
    """dim V(F) in P^n (-1 for the empty set), from a Groebner basis mod p."""
    gens = [reduce_mod_p(f, p) if f.ring.p is None else f for f in F]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return n
    return max(krull_dimension(gens) - 1, -1)


def milnor_ci(sys: InputSystem, p: int = DEFAULT_PRIME, seed: int = 0, trials: int = 2) -> CharClassReport:
    """Milnor class of a complete intersection, with c_vir and csm.

    Equal degrees use the Y-scheme of the generators themselves:
    milnor = (-1)^(dim X + 1) pi_*(...).  Unequal degrees fall back to the
    defining difference milnor = (-1)^dim X (c_vir - csm), with csm from
    inclusion-exclusion over the generators.  Padding them to a common degree
    would put the main route in a much larger product space.
    """
    F = [f for f in sys.original if not f.is_zero()]
    if len(F) != len(sys.original) or not F:
        raise NotCompleteIntersectionError("zero generators are not part of a complete intersection")
    n, c = sys.n, len(F)
    dim = projective_dimension(F, n, p)
    if dim < 0 or n - dim != c:
        raise NotCompleteIntersectionError(
            f"V(F) has codimension {n - dim if dim >= 0 else 'n+1'} but {c} generators were given")
    degrees = [f.total_degree() for f in F]
    cv = c_vir(n, degrees)
    meta = {"prime": p, "seed": seed, "trials": trials, "dim": dim}
    if len(set(degrees)) == 1:
        base = InputSystem(n, tuple(F), degrees[0], tuple(F))
        Y = build_Y_ideal(base)
        seg = segre_class(list(Y.gens), n, base.r, **_segre_kwargs(p, seed, trials))
        integrand = main_integrand(seg.cls, base.d)
        milnor = pushforward_h(integrand) * (-1) ** (dim + 1)
        csm = cv - milnor * (-1) ** dim
        meta.update(r=base.r, prime=seg.meta.get("prime", p))
        return CharClassReport(csm, "main", cvir=cv, milnor=milnor, segre=seg, integrand=integrand,
                               meta=meta)
    csm = csm_inclusion_exclusion(F, n, p, seed, trials)
    milnor = (cv - csm) * (-1) ** dim
    meta.update(mixed_degrees=degrees)
    return CharClassReport(csm, "inclusion-exclusion", cvir=cv, milnor=milnor, meta=meta)


# ---------------------------------------------------------------------------
# oracles

def csm_hypersurface(F: MultiPoly, n: int, p: int = DEFAULT_PRIME, seed: int = 0,
                     trials: int = 2) -> ChowClass:
    """(1+H)^(n+1) [dH/(1+dH) + (s(JX)^vee (x) O(dH)) / (1+dH)] with JX = (F, dF/dx_i)."""
    if F.is_zero():
        raise InputError("the hypersurface formula needs a nonzero polynomial")
    d = F.total_degree()
    if d == 0:
        return ChowClass.zero(n)
    J = [F] + [partial_derivative(F, i) for i in range(n + 1)]
    s = segre_class(J, n, -1, p=p, seed=seed, trials=trials).cls
    X = ChowClass.linear(d, 0, n)
    inv = inverse_unit(1 + X)
    return chern_tangent(n) * (X * inv + inv * tensor_line_bundle(dual(s), LineBundleClass(d, 0)))


def csm_inclusion_exclusion(F: Sequence[MultiPoly], n: int, p: int = DEFAULT_PRIME, seed: int = 0,
                            trials: int = 2) -> ChowClass:
    """sum over nonempty S of (-1)^(|S|+1) csm(V(prod_{i in S} F_i))."""
    F = [f for f in _check_generators(F, n) if not f.is_zero()]
    if not F:
        return chern_tangent(n)
    if len(F) > INCLUSION_EXCLUSION_WARN:
        warnings.warn(f"inclusion-exclusion over {len(F)} generators needs {2 ** len(F) - 1} hypersurfaces",
                      RuntimeWarning, stacklevel=2)
    total = ChowClass.zero(n)
    for size in range(1, len(F) + 1):
        for subset in itertools.combinations(range(len(F)), size):
            g = prod((F[i] for i in subset[1:]), start=F[subset[0]])
            total = total + csm_hypersurface(g, n, p, seed, trials) * (-1) ** (size + 1)
    return total


def csm_via_calX(sys: InputSystem, p: int = DEFAULT_PRIME, seed: int = 0, trials: int = 2) -> ChowClass:
    """csm(X) = pi_* csm(sum_j y_j F_j) - r (1+H)^(n+1)."""
    n, r, d = sys.n, sys.r, sys.d
    big = VarSpec(n + 1, r + 1)
    ring = sys.F[0].ring
    ys = [MultiPoly.var(n + 1 + j, big, ring) for j in range(r + 1)]
    F = [f.embed(big) for f in sys.F]
    calX = MultiPoly.zero(big, ring)
    for y, f in zip(ys, F):
        calX = calX + y * f
    if calX.is_zero():
        return chern_tangent(n)
    J = [calX] + [partial_derivative(calX, i) for i in range(n + 1)] + [f for f in F if not f.is_zero()]
    s = segre_class(J, n, r, p=p, seed=seed, trials=trials).cls
    X = ChowClass.linear(d, 1, n, r)
    inv = inverse_unit(1 + X)
    csm_calX = chern_tangent(n, r) * (X * inv + inv * tensor_line_bundle(dual(s), LineBundleClass(d, 1)))
    return pushforward_h(csm_calX) - chern_tangent(n) * r


# ---------------------------------------------------------------------------
# smoothness

def _determinant(M: list[list[MultiPoly]]) -> MultiPoly:
    if len(M) == 1:
        return M[0][0]
    total = MultiPoly.zero(M[0][0].vars, M[0][0].ring)
    for col in range(len(M)):
        if M[0][col].is_zero():
            continue
        minor = [row[:col] + row[col + 1:] for row in M[1:]]
        term = M[0][col] * _determinant(minor)
        total = total + term if col % 2 == 0 else total - term
    return total


def is_smooth_complete_intersection(F: Sequence[MultiPoly], n: int, p: int = DEFAULT_PRIME) -> bool:
    """V(F) has codimension len(F) and the Jacobian has full rank along it."""
    F = [f for f in _check_generators(F, n) if not f.is_zero()]
    c = len(F)
    if projective_dimension(F, n, p) != n - c:
        return False
    jac = [[partial_derivative(f, i) for i in range(n + 1)] for f in F]
    minors = [_determinant([[row[i] for i in cols] for row in jac])
              for cols in itertools.combinations(range(n + 1), c)]
    return projective_dimension(F + [m for m in minors if not m.is_zero()], n, p) < 0


__all__ = [
    "BiIdeal", "CharClassReport", "InputError", "InputSystem", "NotCompleteIntersectionError",
    "build_Y_ideal", "c_vir", "c_vir_ci", "csm_hypersurface", "csm_inclusion_exclusion", "csm_main",
    "csm_via_calX", "is_smooth_complete_intersection", "milnor_ci", "normalize_input",
    "main_integrand", "projective_dimension", "raise_to_degree",
]
