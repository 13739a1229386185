"""Command-line front end.

    csmclasses csm    FILE [--method main|incl-excl|calx]
    csmclasses milnor FILE
    csmclasses segre  FILE
    csmclasses zeta   FILE [--N 6 --N 7]
    csmclasses euler  FILE
    csmclasses check  FILE

FILE holds a header ``n: <int>`` followed by one generator per line; blank
lines and ``#`` comments are ignored.  An optional ``r: <int>`` header lets
the ``segre`` command read generators in x and y variables on P^n x P^r.

Exit status: 0 on success, 1 for input errors, 2 when the Monte Carlo
Segre computation stays unstable, 3 when ``check`` finds disagreeing methods.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .charcls import (CharClassReport, InputError, csm_inclusion_exclusion, csm_main, csm_via_calX,
                      milnor_ci, normalize_input)
from .chow import ChowClass
from .poly import DEFAULT_PRIME, MultiPoly, PolyError, VarSpec, parse_poly
from .segre import SegreError, UnstableResultError, segre_class
from .zeta import csm_all_N, format_tu, gamma_from_numerator, involution_Q, zeta_numerator

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNSTABLE = 2
EXIT_MISMATCH = 3

METHODS = ("main", "incl-excl", "calx")
COMMANDS = ("csm", "milnor", "segre", "zeta", "euler", "check")
MAX_PRIME = 2 ** 31 - 1


@dataclass
class InputFile:
    n: int
    r: int
    gens: list[MultiPoly]


@dataclass
class RunConfig:
    command: str
    input: Path
    prime: int = DEFAULT_PRIME
    seed: int = 0
    trials: int = 2
    method: str = "main"
    N: list[int] = field(default_factory=list)
    json: bool = False
    combos: int | None = None
    target_count: int | None = None


_HEADER = re.compile(r"^\s*([nr])\s*:\s*(-?\d+)\s*$")


def read_input(path: Path) -> InputFile:
    """Parse the header and generator lines of an input file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    header: dict[str, int] = {}
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            if lines:
                raise InputError(f"line {lineno}: header after generators")
            if m.group(1) in header:
                raise InputError(f"line {lineno}: repeated header {m.group(1)!r}")
            header[m.group(1)] = int(m.group(2))
            continue
        lines.append((lineno, line))
    if "n" not in header:
        raise InputError(f"{path}: missing 'n: <int>' header")
    n, r = header["n"], header.get("r", -1)
    if n < 1:
        raise InputError(f"{path}: n must be positive")
    if r < -1:
        raise InputError(f"{path}: r must be nonnegative")
    if not lines:
        raise InputError(f"{path}: no generators")
    vars = VarSpec(n + 1, r + 1)
    gens = []
    for lineno, line in lines:
        try:
            gens.append(parse_poly(line, vars))
        except PolyError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
    return InputFile(n, r, gens)


def _is_prime(q: int) -> bool:
    if q < 2 or q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def _prime(text: str) -> int:
    q = int(text)
    if q < 10007 or q > MAX_PRIME or not _is_prime(q):
        raise argparse.ArgumentTypeError(f"{q} is not an odd prime in [10007, {MAX_PRIME}]")
    return q


def _trials(text: str) -> int:
    t = int(text)
    if t < 2:
        raise argparse.ArgumentTypeError("at least two trials are required")
    return t


def _positive(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return k


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # bad flags are input errors; status 2 is reserved for instability
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="csmclasses",
                 description="CSM, Milnor and Segre classes of subschemes of projective space.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("input", type=Path, help="file with an 'n: <int>' header and one generator per line")
    ap.add_argument("--prime", type=_prime, default=DEFAULT_PRIME)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=_trials, default=2)
    ap.add_argument("--method", choices=METHODS, default="main")
    ap.add_argument("--N", dest="N", type=int, action="append", default=[],
                    help="ambient dimension for the zeta command (repeatable)")
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--combos", type=_positive, default=None,
                    help="experimental: replace generators by this many random combinations")
    ap.add_argument("--target-count", type=_positive, default=None,
                    help="pad the generator list with zeros up to this many")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


# ---------------------------------------------------------------------------

def _coeffs(c: ChowClass) -> list[str]:
    return [str(c.coeff(i)) for i in range(c.n + 1)]


def _meta(cfg: RunConfig, prime: int, method: str) -> dict:
    return {"prime": prime, "seed": cfg.seed, "trials": cfg.trials, "method": method}


def _x_only(inp: InputFile) -> list[MultiPoly]:
    if inp.r >= 0:
        raise InputError("this command takes generators in x variables only; drop the 'r:' header")
    return inp.gens


def _system(cfg: RunConfig, inp: InputFile):
    return normalize_input(_x_only(inp), inp.n, cfg.target_count, cfg.combos, cfg.seed)


def _csm(cfg: RunConfig, inp: InputFile, method: str) -> tuple[ChowClass, dict, CharClassReport | None]:
    kw = {"p": cfg.prime, "seed": cfg.seed, "trials": cfg.trials}
    if method == "main":
        rep = csm_main(_system(cfg, inp), **kw)
        return rep.csm, {"r": rep.meta["r"], "prime": rep.meta["prime"]}, rep
    if method == "incl-excl":
        return csm_inclusion_exclusion(_x_only(inp), inp.n, **kw), {"r": None, "prime": cfg.prime}, None
    sys_ = _system(cfg, inp)
    return csm_via_calX(sys_, **kw), {"r": sys_.r, "prime": cfg.prime}, None


def cmd_csm(cfg: RunConfig, inp: InputFile, euler_only: bool = False) -> dict:
    csm, info, rep = _csm(cfg, inp, cfg.method)
    out = {
        "ambient": {"n": inp.n, "r": info["r"]},
        "csm": _coeffs(csm),
        "euler": str(csm.coeff(inp.n)),
        "meta": _meta(cfg, info["prime"], cfg.method),
    }
    if rep is not None and rep.segre is not None:
        out["segre"] = rep.segre.cls.to_json_terms()
    out["_text"] = [f"euler: {csm.coeff(inp.n)}"] if euler_only else [f"csm: {csm}", f"euler: {csm.coeff(inp.n)}"]
    return out


def cmd_milnor(cfg: RunConfig, inp: InputFile) -> dict:
    sys_ = normalize_input(_x_only(inp), inp.n)
    rep = milnor_ci(sys_, p=cfg.prime, seed=cfg.seed, trials=cfg.trials)
    out = {
        "ambient": {"n": inp.n, "r": rep.meta.get("r")},
        "csm": _coeffs(rep.csm),
        "milnor": _coeffs(rep.milnor),
        "cvir": _coeffs(rep.cvir),
        "euler": str(rep.euler),
        "meta": _meta(cfg, rep.meta["prime"], rep.method),
    }
    if rep.segre is not None:
        out["segre"] = rep.segre.cls.to_json_terms()
    out["_text"] = [f"milnor: {rep.milnor}", f"cvir: {rep.cvir}", f"csm: {rep.csm}", f"euler: {rep.euler}"]
    return out


def cmd_segre(cfg: RunConfig, inp: InputFile) -> dict:
    res = segre_class(inp.gens, inp.n, inp.r, p=cfg.prime, seed=cfg.seed, trials=cfg.trials)
    out = {
        "ambient": {"n": inp.n, "r": inp.r},
        "segre": res.cls.to_json_terms(),
        "meta": _meta(cfg, res.meta.get("prime", cfg.prime), "segre"),
    }
    lines = [f"segre: {res.cls}"]
    if res.degrees is not None:
        out["projective_degrees"] = res.degrees.rows()
        lines.append(f"projective degrees: {res.degrees.rows()}")
    out["_text"] = lines
    return out


def cmd_zeta(cfg: RunConfig, inp: InputFile) -> dict:
    Ns = sorted(set(cfg.N or [inp.n]))
    for N in Ns:
        if N < inp.n:
            raise InputError(f"--N {N} is below n = {inp.n}")
    sys_ = normalize_input(_x_only(inp), inp.n, cfg.target_count or len(inp.gens), cfg.combos, cfg.seed)
    P = zeta_numerator(sys_, p=cfg.prime, seed=cfg.seed, trials=cfg.trials)
    gamma = gamma_from_numerator(P)
    Q = involution_Q(P)
    classes = {N: csm_all_N(gamma, N) for N in Ns}
    out = {
        "ambient": {"n": inp.n, "r": sys_.r},
        "segre": P.segre.cls.to_json_terms() if P.segre is not None else [],
        "P": P.to_json_terms(),
        "Q": [[a, b, str(v)] for (a, b), v in sorted(Q.items())],
        "gamma": [str(c) for c in gamma.coeffs],
        "csm_N": {str(N): _coeffs(c) for N, c in classes.items()},
        "euler_N": {str(N): str(c.coeff(N)) for N, c in classes.items()},
        "meta": _meta(cfg, P.segre.meta.get("prime", cfg.prime) if P.segre else cfg.prime, "zeta"),
    }
    lines = [f"P: {P}", f"Q: {format_tu(Q)}", f"gamma: {gamma}"]
    for N, c in classes.items():
        lines.append(f"csm in P^{N}: {c}")
        lines.append(f"euler in P^{N}: {c.coeff(N)}")
    out["_text"] = lines
    return out


def cmd_check(cfg: RunConfig, inp: InputFile) -> dict:
    results = {}
    for method in METHODS:
        csm, _, _ = _csm(cfg, inp, method)
        results[method] = csm
    agree = len({tuple(_coeffs(c)) for c in results.values()}) == 1
    out = {
        "ambient": {"n": inp.n, "r": None},
        "csm": _coeffs(results["main"]),
        "euler": str(results["main"].coeff(inp.n)),
        "methods": {m: _coeffs(c) for m, c in results.items()},
        "agree": agree,
        "meta": _meta(cfg, cfg.prime, "check"),
    }
    lines = [f"{m}: {c}" for m, c in results.items()]
    lines.append("agree" if agree else "MISMATCH between methods")
    out["_text"] = lines
    return out


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        inp = read_input(cfg.input)
        if cfg.command in ("csm", "euler"):
            out = cmd_csm(cfg, inp, euler_only=cfg.command == "euler")
        elif cfg.command == "milnor":
            out = cmd_milnor(cfg, inp)
        elif cfg.command == "segre":
            out = cmd_segre(cfg, inp)
        elif cfg.command == "zeta":
            out = cmd_zeta(cfg, inp)
        else:
            out = cmd_check(cfg, inp)
    except (InputError, PolyError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except (UnstableResultError, SegreError) as exc:
        print(f"unstable: {exc}", file=stderr)
        return EXIT_UNSTABLE
    text = out.pop("_text")
    if cfg.json:
        print(json.dumps(out, sort_keys=True), file=stdout)
    else:
        print("\n".join(text), file=stdout)
    if cfg.command == "check" and not out["agree"]:
        return EXIT_MISMATCH
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(args.command, args.input, args.prime, args.seed, args.trials, args.method,
                    list(args.N), args.json, args.combos, args.target_count)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
