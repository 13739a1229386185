"""Segre classes in P^n and P^n x P^r from projective degrees.

The generators are first brought to one bidegree D = (a, b).  Cell (i, j)
counts the points of the graph of the rational map they define, cut by
i + j general members of the linear system, n - i general x-hyperplanes and
r - j general y-hyperplanes, away from the base locus.  With
G = sum g[i, j] H^i h^j the Segre class is

    s = 1 - c(O(D))^-1 (G (x) O(D)) = 1 - sum g[i, j] H^i h^j / (1 + D)^(i+j+1).

Each cell is an affine zero-dimensional count: the hyperplanes and one
random chart per factor are absorbed by parametrizing a random affine
subspace, and the base locus is removed with an extra variable T and the
relation T*g - 1 for a random member g of the linear system.
"""

from __future__ import annotations

import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .chow import ChowClass, LineBundleClass, tensor_line_bundle, inverse_unit
from .gb import NotZeroDimensionalError, quotient_dimension
from .poly import (DEFAULT_PRIME, BadPrimeError, BiDegree, MultiPoly, VarSpec, bidegree_of,
                   bimonomials, compose, linear_combination, reduce_mod_p)

log = logging.getLogger(__name__)

RETRY_CAP = 4
MAX_ESCALATIONS = 3


class SegreError(RuntimeError):
    pass


class DegenerateRandomnessError(SegreError):
    """A cell stayed positive-dimensional through every retry."""


class UnstableResultError(SegreError):
    """Independent runs never produced two agreeing degree tables."""


@dataclass(frozen=True)
class ProjectiveDegreeTable:
    n: int
    r: int
    table: dict
    bidegree: BiDegree
    prime: int
    seed: int

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.table[ij]

    def as_class(self) -> ChowClass:
        return ChowClass(self.n, self.r, self.table)

    def rows(self) -> list[list[int]]:
        return [[self.table.get((i, j), 0) for j in range(max(self.r, 0) + 1)] for i in range(self.n + 1)]


@dataclass(frozen=True)
class SegreResult:
    cls: ChowClass
    degrees: ProjectiveDegreeTable | None
    trials: int
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "ambient": {"n": self.cls.n, "r": self.cls.r},
            "segre": self.cls.to_json_terms(),
            "trials": self.trials,
        }
        if self.degrees is not None:
            d["projective_degrees"] = self.degrees.rows()
            d["bidegree"] = [self.degrees.bidegree.a, self.degrees.bidegree.b]
            d["prime"] = self.degrees.prime
            d["seed"] = self.degrees.seed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __str__(self) -> str:
        return str(self.cls)


# ---------------------------------------------------------------------------

def prepare_common_bidegree(gens: Sequence[MultiPoly]) -> list[MultiPoly]:
    """Raise every generator to the componentwise maximum bidegree.

    A generator of bidegree (a, b) is replaced by its products with all
    monomials of bidegree (A - a, B - b); the scheme is unchanged.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("empty generator list")
    degs = [bidegree_of(g) for g in gens]
    A = max(d.a for d in degs)
    B = max(d.b for d in degs)
    vars, ring = gens[0].vars, gens[0].ring
    out = []
    for g, d in zip(gens, degs):
        if (d.a, d.b) == (A, B):
            out.append(g)
            continue
        for e in bimonomials(vars, BiDegree(A - d.a, B - d.b)):
            out.append(g * MultiPoly.monomial(e, vars, ring))
    return out


def _affine_images(rng, count: int, dim: int, offset: int, target: VarSpec, ring) -> list[MultiPoly]:
    """``count`` coordinates of a random affine dim-plane, in target vars offset.."""
    p = ring.p
    A = rng.integers(0, p, size=(count, dim + 1))
    images = []
    for row in A:
        terms = {}
        zero = [0] * target.nvars
        terms[tuple(zero)] = int(row[0])
        for m in range(dim):
            e = list(zero)
            e[offset + m] = 1
            terms[tuple(e)] = int(row[m + 1])
        images.append(MultiPoly(target, ring, terms))
    return images


def cell_system(prepared: Sequence[MultiPoly], n: int, r: int, i: int, j: int,
                seed: int, attempt: int = 0) -> list[MultiPoly]:
    """The affine polynomial system whose solution count is g[i, j]."""
    ring = prepared[0].ring
    p = ring.p
    rng = np.random.default_rng([seed, i, j, attempt])
    k = i + j
    target = VarSpec(k + 1)
    images = _affine_images(rng, n + 1, i, 0, target, ring)
    if r >= 0:
        images += _affine_images(rng, r + 1, j, i, target, ring)
    members = []
    for _ in range(k + 1):
        coeffs = [int(c) for c in rng.integers(0, p, size=len(prepared))]
        members.append(linear_combination(coeffs, prepared))
    system = [compose(f, images) for f in members[:k]]
    g = compose(members[k], images)
    t = MultiPoly.var(k, target, ring)
    system.append(t * g - 1)
    return system


def projective_degree_cell(prepared: Sequence[MultiPoly], n: int, r: int, i: int, j: int,
                           seed: int, retry_cap: int = RETRY_CAP) -> int:
    """g[i, j]: points off the base locus, counted with multiplicity."""
    if not (0 <= i <= n and 0 <= j <= max(r, 0)):
        raise ValueError(f"cell {(i, j)} outside ambient ({n}, {r})")
    for attempt in range(retry_cap):
        system = cell_system(prepared, n, r, i, j, seed, attempt)
        try:
            return quotient_dimension(system)
        except NotZeroDimensionalError:
            log.info("cell %s attempt %d not zero-dimensional; retrying", (i, j), attempt)
    raise DegenerateRandomnessError(f"cell {(i, j)} degenerate after {retry_cap} attempts")


def _cell_job(args):
    prepared, n, r, i, j, seed = args
    return (i, j), projective_degree_cell(prepared, n, r, i, j, seed)


def projective_degrees(prepared: Sequence[MultiPoly], n: int, r: int, seed: int,
                       workers: int | None = None) -> dict:
    cells = [(i, j) for i in range(n + 1) for j in range(max(r, 0) + 1)]
    jobs = [(list(prepared), n, r, i, j, seed) for i, j in cells]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(_cell_job, jobs))
    else:
        results = dict(_cell_job(job) for job in jobs)
    return {c: v for c, v in results.items() if v}


def assemble(table: dict, n: int, r: int, bidegree: BiDegree) -> ChowClass:
    """s = 1 - c(O(D))^-1 (G (x) O(D)) with G the projective degree class."""
    G = ChowClass(n, r, table)
    D = LineBundleClass(bidegree.a, bidegree.b if r >= 0 else 0)
    return 1 - inverse_unit(D.total(n, r)) * tensor_line_bundle(G, D)


def _next_prime(rng: random.Random, lo: int = 20011, hi: int = 46000) -> int:
    while True:
        q = rng.randrange(lo, hi) | 1
        if all(q % f for f in range(3, int(q ** 0.5) + 1, 2)):
            return q


def _majority(runs: list[tuple[int, tuple]]):
    """(seed, table, votes) of a table backed by at least two runs and a strict plurality."""
    tallies: dict[tuple, list] = {}
    for run_seed, items in runs:
        tallies.setdefault(items, []).append(run_seed)
    ranked = sorted(tallies.items(), key=lambda kv: -len(kv[1]))
    items, seeds = ranked[0]
    if len(seeds) < 2 or (len(ranked) > 1 and len(ranked[1][1]) == len(seeds)):
        return None
    return seeds[0], items, len(seeds)


def _check_ambient(gens: Sequence[MultiPoly], n: int, r: int):
    vars = gens[0].vars
    if vars.x_count != n + 1 or vars.y_count != max(r + 1, 0) or vars.aux_count:
        raise ValueError(f"generators live over {vars}, ambient is ({n}, {r})")


def segre_class(gens: Sequence[MultiPoly], n: int, r: int = -1, p: int = DEFAULT_PRIME, seed: int = 0,
                trials: int = 2, workers: int | None = None) -> SegreResult:
    """Pushforward of s(Z, P^n [x P^r]) for Z cut out by ``gens``.

    Runs ``trials`` independent seeds and returns once at least two runs
    agree exactly and outnumber every other outcome.  Without such a
    majority one tie-breaking run is added; failing that, the whole
    computation moves to a fresh prime.
    """
    if trials < 2:
        raise ValueError("need at least two trials")
    gens = list(gens)
    if not gens:
        raise ValueError("empty generator list")
    _check_ambient(gens, n, r)
    nonzero = [g for g in gens if not g.is_zero()]
    if not nonzero:
        return SegreResult(ChowClass.one(n, r), None, 0, {"reason": "all generators vanish"})
    prime_rng = random.Random(f"prime:{seed}")
    prime = p
    total_runs = 0
    for escalation in range(MAX_ESCALATIONS + 1):
        try:
            modp = [reduce_mod_p(g, prime) if g.ring.p is None else g for g in nonzero]
            modp = [g for g in modp if not g.is_zero()]
            if not modp:
                raise BadPrimeError("all generators vanish mod p")
            prepared = prepare_common_bidegree(modp)
            bideg = bidegree_of(prepared[0])
            if r < 0:
                bideg = BiDegree(bideg.a, 0)
            runs: list[tuple[int, tuple]] = []

            def run(t: int):
                run_seed = int(np.random.SeedSequence([seed, escalation, t]).generate_state(1)[0])
                table = projective_degrees(prepared, n, r, run_seed, workers)
                runs.append((run_seed, tuple(sorted(table.items()))))

            for t in range(trials):
                run(t)
            winner = _majority(runs)
            if winner is None:
                # one tie-breaking run at the same prime before escalating
                log.warning("runs disagree at prime %d; running a tie-breaker", prime)
                run(trials)
                winner = _majority(runs)
        except (BadPrimeError, DegenerateRandomnessError) as exc:
            log.warning("escalating after prime %d: %s", prime, exc)
            prime = _next_prime(prime_rng)
            continue
        total_runs += len(runs)
        if winner is not None:
            seed0, items, votes = winner
            table = dict(items)
            degrees = ProjectiveDegreeTable(n, r, table, bideg, prime, seed0)
            cls = assemble(table, n, r, bideg)
            return SegreResult(cls, degrees, votes, {"runs": len(runs), "prime": prime})
        log.warning("no majority at prime %d; escalating", prime)
        prime = _next_prime(prime_rng)
    raise UnstableResultError(f"no agreeing majority after {total_runs} runs over {MAX_ESCALATIONS + 1} primes")
