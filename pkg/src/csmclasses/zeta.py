"""Segre zeta numerators and CSM classes of X_N in every P^N.

Regard the generators of Y as forms on P^(n+1) x P^(r+1).  With S the Segre
class there,

    P(t, u) = S * (1 + d t)^(r+1) * (1 + (d-1) t + u)^(n+1)

read in H = t, h = u and truncated at t^(n+2), u^(r+2).  The substitution

    Q(t, u) = (1 + dt + u)^(n+r+2) * P(-t/(1+dt+u), -u/(1+dt+u))

is an involution; the coefficient gamma(t) of u^(r+1) in Q gives
csm(X_N) = (1+H)^(N-n) gamma(H) for the cone X_N over X in P^N, N >= n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

from .chow import ChowClass
from .charcls import InputError, InputSystem, build_Y_ideal
from .poly import DEFAULT_PRIME, VarSpec
from .segre import SegreResult, segre_class

Coeffs = dict  # {(a, b): int} for t^a u^b


def _trim(c: Mapping[tuple[int, int], int]) -> Coeffs:
    return {k: v for k, v in sorted(c.items()) if v}


def format_tu(c: Mapping[tuple[int, int], int]) -> str:
    """Print a {(a, b): coeff} polynomial in t and u, grouped by powers of u."""
    parts = []
    for (a, b), v in sorted(c.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if not v:
            continue
        mono = "*".join(s for s in (_pw("t", a), _pw("u", b)) if s)
        sign = "-" if v < 0 else "+"
        mag = abs(v)
        body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else str(mag))
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def _pw(sym: str, k: int) -> str:
    if k == 0:
        return ""
    return sym if k == 1 else f"{sym}^{k}"


@dataclass(frozen=True)
class ZetaNumerator:
    """Coefficients p[a, b] of P(t, u) for a <= n+1, b <= r+1."""

    coeffs: Coeffs
    d: int
    n: int
    r: int
    segre: SegreResult | None = field(default=None, compare=False)

    def __getitem__(self, ab: tuple[int, int]) -> int:
        return self.coeffs.get(ab, 0)

    def __str__(self) -> str:
        return format_tu(self.coeffs)

    def to_json_terms(self) -> list[list]:
        return [[a, b, str(v)] for (a, b), v in sorted(self.coeffs.items())]


@dataclass(frozen=True)
class GammaPolynomial:
    """gamma(t) = sum coeffs[a] t^a, of degree at most n+1."""

    coeffs: tuple[int, ...]
    d: int
    n: int
    r: int

    def __str__(self) -> str:
        return format_tu({(a, 0): c for a, c in enumerate(self.coeffs)})

    def __call__(self, N: int) -> ChowClass:
        return ChowClass(N, -1, {(a, 0): c for a, c in enumerate(self.coeffs)})


# ---------------------------------------------------------------------------

def numerator_from_segre(S: ChowClass, d: int, n: int, r: int) -> ZetaNumerator:
    """Multiply a Segre class on P^(n+1) x P^(r+1) by the zeta denominator."""
    if S.ambient != (n + 1, r + 1):
        raise ValueError(f"Segre class lives on {S.ambient}, expected {(n + 1, r + 1)}")
    dt = ChowClass(n + 1, r + 1, {(0, 0): 1, (1, 0): d})
    lin = ChowClass(n + 1, r + 1, {(0, 0): 1, (1, 0): d - 1, (0, 1): 1})
    P = S * dt ** (r + 1) * lin ** (n + 1)
    return ZetaNumerator(_trim(P.terms), d, n, r)


def zeta_numerator(sys: InputSystem, p: int = DEFAULT_PRIME, seed: int = 0, trials: int = 2) -> ZetaNumerator:
    """P(t, u) from the Segre class of Y regarded in P^(n+1) x P^(r+1)."""
    n, r = sys.n, sys.r
    if not sys.nonzero():
        raise InputError("the zeta route needs at least one nonzero generator")
    big = VarSpec(n + 2, r + 2)
    gens = [g.embed(big) for g in build_Y_ideal(sys).gens]
    seg = segre_class(gens, n + 1, r + 1, p=p, seed=seed, trials=trials)
    P = numerator_from_segre(seg.cls, sys.d, n, r)
    return ZetaNumerator(P.coeffs, P.d, n, r, seg)


def involution_Q(P: ZetaNumerator | Mapping[tuple[int, int], int], d: int | None = None,
                 n: int | None = None, r: int | None = None, truncate: bool = True) -> Coeffs:
    """(1+dt+u)^(n+r+2) P(-t/(1+dt+u), -u/(1+dt+u)).

    Truncated at t^(n+2), u^(r+2) by default; with ``truncate=False`` the
    whole polynomial is returned (it has degree at most n+r+2 when P is
    supported in a <= n+1, b <= r+1).
    """
    if isinstance(P, ZetaNumerator):
        d, n, r, coeffs = P.d, P.n, P.r, P.coeffs
    else:
        coeffs = dict(P)
    K = n + r + 2
    out: dict[tuple[int, int], int] = {}
    for (a, b), c in coeffs.items():
        m = K - a - b
        if m < 0:
            raise ValueError(f"term t^{a} u^{b} lies outside the involution's range")
        sign = -1 if (a + b) % 2 else 1
        # (1 + dt + u)^m = sum m!/(i! j! (m-i-j)!) d^i t^i u^j
        for i in range(m + 1):
            if truncate and a + i > n + 1:
                break
            ci = comb(m, i) * d ** i
            for j in range(m - i + 1):
                if truncate and b + j > r + 1:
                    break
                key = (a + i, b + j)
                out[key] = out.get(key, 0) + sign * c * ci * comb(m - i, j)
    return _trim(out)


def gamma_closed_form(P: ZetaNumerator) -> tuple[int, ...]:
    """sum (-1)^(a+b) p[a,b] C(n+r+2-a-b, r+1-b) t^a (1+dt)^(n+1-a)."""
    n, r, d = P.n, P.r, P.d
    K = n + r + 2
    g = [0] * (n + 2)
    for (a, b), c in P.coeffs.items():
        if a > n + 1 or b > r + 1:
            continue
        w = (-1) ** (a + b) * c * comb(K - a - b, r + 1 - b)
        if not w:
            continue
        for k in range(n + 2 - a):
            g[a + k] += w * comb(n + 1 - a, k) * d ** k
    return tuple(g)


def gamma_from_Q(Q: Mapping[tuple[int, int], int], n: int, r: int) -> tuple[int, ...]:
    """The coefficient of u^(r+1) in Q, as a polynomial in t of degree <= n+1."""
    return tuple(Q.get((a, r + 1), 0) for a in range(n + 2))


def gamma_from_numerator(P: ZetaNumerator, verify: bool = True) -> GammaPolynomial:
    """gamma(t) by the closed form; ``verify`` also expands Q and compares."""
    g = gamma_closed_form(P)
    if verify:
        direct = gamma_from_Q(involution_Q(P), P.n, P.r)
        if direct != g:
            raise ArithmeticError(f"closed form {g} disagrees with the expansion of Q {direct}")
    return GammaPolynomial(g, P.d, P.n, P.r)


def _neg_binom(m: int, k: int) -> int:
    """C(-m, k) for m >= 0."""
    if m == 0:
        return 1 if k == 0 else 0
    return (-1) ** k * comb(m + k - 1, k)


def gamma_by_series(coeffs: Mapping[tuple[int, int], int], d: int, n: int) -> tuple[int, ...]:
    """Coefficient of v^(n+1) in P(-tv/(1+v+dtv), -1/(1+v+dtv)).

    Every u-power of P matters here, so the result only agrees with the
    closed form when ``coeffs`` holds P completely in u.
    """
    g = [0] * (n + 2)
    for (a, b), c in coeffs.items():
        if a > n + 1:
            continue
        k = n + 1 - a
        w = (-1) ** (a + b) * c * _neg_binom(a + b, k)
        if not w:
            continue
        # (1 + dt)^k t^a
        for i in range(k + 1):
            g[a + i] += w * comb(k, i) * d ** i
    return tuple(g)


def csm_all_N(gamma: GammaPolynomial, N: int) -> ChowClass:
    """(1+H)^(N-n) gamma(H) on P^N."""
    if N < gamma.n:
        raise InputError(f"N = {N} is below the source dimension n = {gamma.n}")
    base = ChowClass(N, -1, {(0, 0): 1, (1, 0): 1}) ** (N - gamma.n)
    return base * gamma(N)


# ---------------------------------------------------------------------------
# stabilization of (1+h)^R S(h)

def _times_power(S: Sequence[int], R: int, length: int) -> list[int]:
    """(1+h)^R * S(h) truncated to ``length`` coefficients."""
    out = [0] * length
    for i, s in enumerate(S[:length]):
        if s:
            for k in range(min(R, length - 1 - i) + 1):
                out[i + k] += s * comb(R, k)
    return out


def stable_leading_coefficient(S: Sequence[int], window: Sequence[int]) -> int | None:
    """The common value of [h^R] (1+h)^R S(h) over R in ``window``, if constant and nonzero."""
    values = {_times_power(S, R, R + 1)[R] for R in window}
    if len(values) != 1:
        return None
    C = values.pop()
    return C or None


def stabilization_holds(S: Sequence[int], N: int, window: Sequence[int]) -> bool:
    """If [h^R](1+h)^R S is a nonzero constant C for R in the window (all >= N),
    then (1+h)^N S is a polynomial of degree N with leading coefficient C,
    checked up to the series precision of S."""
    if min(window) < N or max(window) >= len(S):
        raise ValueError("window must lie in [N, len(S))")
    C = stable_leading_coefficient(S, window)
    if C is None:
        return True
    T = _times_power(S, N, len(S))
    return T[N] == C and not any(T[N + 1:])


def to_json(P: ZetaNumerator, gamma: GammaPolynomial, Ns: Sequence[int]) -> str:
    Q = involution_Q(P)
    return json.dumps({
        "P": P.to_json_terms(),
        "Q": [[a, b, str(v)] for (a, b), v in sorted(Q.items())],
        "gamma": [str(c) for c in gamma.coeffs],
        "csm": {str(N): [str(csm_all_N(gamma, N).coeff(i)) for i in range(N + 1)] for N in Ns},
    }, sort_keys=True)
