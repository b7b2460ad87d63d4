"""Command-line front end.

Problem files are JSON objects with exactly one of "A" or "B" (integer
matrices, one vector per row) and optional fields:

    partition     list of 1-based index lists
    P, Q          polynomials {"e1,...,en": "p/q"} in the variables x_1..x_n
    phi           {"numerator": {"e1,...,er": "p/q"}, "denominator": [e_1, ..., e_n]}
    z             list of numbers or [re, im] pairs
    chamber_hint  rational vector inside the wanted chamber
    xi            rational vector for flag queries
    degree_bound  rational slice bound for series
    seed          integer
    tolerances    {"verify": ..., "solver": ...}

Exit codes: 0 success, 1 invalid input, 2 computation error, 3 verification FAIL.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from . import cayley, chambers, critical, lattice, residues, series, toric
from .errors import ToricResidueError
from .poly import Poly

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE, EXIT_FAIL = 0, 1, 2, 3


class InputError(ValueError):
    """The problem file or the command line is malformed."""


# ------------------------------------------------ input parsing


def _exact(x, what: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"{what}: floats are not accepted, use a string 'p/q'")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{what}: cannot parse {x!r}") from exc
    raise InputError(f"{what}: unsupported value {x!r}")


def _integer(x, what: str) -> int:
    v = _exact(x, what)
    if v.denominator != 1:
        raise InputError(f"{what}: {x!r} is not an integer")
    return int(v)


def _matrix(rows, what: str) -> list[list[int]]:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{what} must be a nonempty list of vectors")
    return [[_integer(x, what) for x in row] for row in rows]


def _poly(data, nvars: int, what: str) -> Poly:
    if not isinstance(data, dict):
        raise InputError(f"{what} must be an object mapping exponent vectors to rationals")
    terms = {}
    for key, val in data.items():
        try:
            e = tuple(int(x) for x in str(key).split(","))
        except ValueError as exc:
            raise InputError(f"{what}: bad exponent key {key!r}") from exc
        if len(e) > nvars or any(x < 0 for x in e):
            raise InputError(f"{what}: exponent {key!r} does not fit {nvars} variables")
        e = e + (0,) * (nvars - len(e))
        terms[e] = terms.get(e, 0) + _exact(val, what)
    return Poly(nvars, terms)


def _complex_vector(data, n: int, what: str) -> np.ndarray:
    if not isinstance(data, list) or len(data) != n:
        raise InputError(f"{what} must have {n} entries")
    out = []
    for x in data:
        if isinstance(x, list) and len(x) == 2:
            out.append(complex(float(x[0]), float(x[1])))
        elif isinstance(x, (int, float, str)) and not isinstance(x, bool):
            out.append(complex(float(Fraction(x)) if isinstance(x, str) else x))
        else:
            raise InputError(f"{what}: bad entry {x!r}")
    return np.array(out, dtype=complex)


@dataclass
class ProblemFile:
    seq: lattice.ExactSequenceData
    partition: Optional[list[list[int]]] = None
    P: Optional[Poly] = None
    Q: Optional[Poly] = None
    phi: Optional[residues.RationalSection] = None
    z: Optional[np.ndarray] = None
    chamber_hint: Optional[list[Fraction]] = None
    xi: Optional[list[Fraction]] = None
    degree_bound: Fraction = Fraction(20)
    seed: int = 0
    tolerances: dict[str, float] = field(default_factory=dict)

    @classmethod
    def parse(cls, data: Any) -> "ProblemFile":
        if not isinstance(data, dict):
            raise InputError("the problem file must contain a JSON object")
        if ("A" in data) == ("B" in data):
            raise InputError("exactly one of 'A' and 'B' must be given")
        try:
            if "B" in data:
                seq = lattice.gale_dual(_matrix(data["B"], "B"))
            else:
                seq = lattice.sequence_from_A(_matrix(data["A"], "A"))
        except ToricResidueError as exc:
            raise InputError(f"{type(exc).__name__}: {exc}") from exc
        n, r = seq.n, seq.r
        pf = cls(seq)
        if "partition" in data:
            blocks = [[_integer(i, "partition") - 1 for i in block] for block in data["partition"]]
            try:
                cayley.validate_partition(n, blocks)
            except ToricResidueError as exc:
                raise InputError(f"{type(exc).__name__}: {exc}") from exc
            pf.partition = blocks
        if "P" in data:
            pf.P = _poly(data["P"], n, "P")
        if "Q" in data:
            pf.Q = _poly(data["Q"], n, "Q")
        if "phi" in data:
            phi = data["phi"]
            if not isinstance(phi, dict) or "denominator" not in phi:
                raise InputError("phi needs 'numerator' and 'denominator'")
            num = _poly(phi.get("numerator", {"0": "1"}), r, "phi.numerator")
            den = [_integer(e, "phi.denominator") for e in phi["denominator"]]
            if len(den) != n or any(e < 0 for e in den):
                raise InputError(f"phi.denominator must list {n} nonnegative exponents")
            pf.phi = residues.section(seq.A.vectors, num, den)
        if "z" in data:
            pf.z = _complex_vector(data["z"], n, "z")
        if "chamber_hint" in data:
            pf.chamber_hint = [_exact(x, "chamber_hint") for x in data["chamber_hint"]]
            if len(pf.chamber_hint) != r:
                raise InputError(f"chamber_hint must have {r} entries")
        if "xi" in data:
            pf.xi = [_exact(x, "xi") for x in data["xi"]]
            if len(pf.xi) != r:
                raise InputError(f"xi must have {r} entries")
        if "degree_bound" in data:
            pf.degree_bound = _exact(data["degree_bound"], "degree_bound")
        if "seed" in data:
            pf.seed = _integer(data["seed"], "seed")
        for key, val in (data.get("tolerances") or {}).items():
            try:
                pf.tolerances[key] = float(val)
            except (TypeError, ValueError) as exc:
                raise InputError(f"tolerance {key!r} is not a number") from exc
        return pf


# ------------------------------------------------ helpers


def _chamber(pf: ProblemFile, theta=None) -> chambers.Chamber:
    A = pf.seq.A.vectors
    if pf.chamber_hint is not None:
        c = chambers.chamber_containing(A, pf.chamber_hint)
        if c is None:
            raise InputError("chamber_hint is not a regular point of Cone(A)")
        return c
    targets = theta if theta is not None else [pf.seq.kappa]
    for c in chambers.enumerate_chambers(A):
        if all(c.closure_contains(t) for t in targets):
            return c
    raise InputError("no chamber contains the required vectors in its closure")


def _need(value, name: str):
    if value is None:
        raise InputError(f"this command needs '{name}' in the problem file")
    return value


def _problem(pf: ProblemFile, single: bool) -> cayley.MixedProblem:
    blocks = [list(range(pf.seq.n))] if single or pf.partition is None else pf.partition
    theta = cayley.block_sums(pf.seq.A.vectors, blocks)
    c = _chamber(pf, theta)
    return cayley.build_cayley(pf.seq, blocks, c)


def _cplx(x) -> list[float]:
    x = complex(x)
    return [x.real, x.imag]


# ------------------------------------------------ commands


def cmd_gale(pf: ProblemFile, args):
    report = pf.seq.to_json()
    report["kappa"] = [str(x) for x in pf.seq.kappa]
    report["projective"] = lattice.is_projective(pf.seq.A.vectors)
    text = "A=" + json.dumps([list(a) if len(a) > 1 else a[0] for a in pf.seq.A.vectors], separators=(",", ":"))
    text += "\nB=" + json.dumps([list(b) if len(b) > 1 else (b[0] if b else []) for b in pf.seq.B.vectors], separators=(",", ":"))
    return report, text, True


def cmd_chambers(pf: ProblemFile, args):
    chs = chambers.enumerate_chambers(pf.seq.A.vectors)
    report = {"chambers": [c.to_json() for c in chs], "count": len(chs)}
    lines = [f"{len(chs)} chambers"]
    for k, c in enumerate(chs):
        lines.append(f"[{k + 1}] interior point {[str(x) for x in c.interior_point]}, rays {[list(r) for r in c.rays]}")
    return report, "\n".join(lines), True


def cmd_flags(pf: ProblemFile, args):
    A = pf.seq.A.vectors
    if pf.xi is None:
        flags = chambers.enumerate_flags(A)
        report = {"flags": [F.to_json() for F in flags], "count": len(flags)}
        return report, "\n".join(json.dumps(F.to_json()["prefix_generators"]) for F in flags), True
    mode = args.mode
    data = chambers.flags_for_xi(A, pf.xi, mode)
    verdict = chambers.regularity(A, pf.xi, 0, mode)
    report = {"xi": [str(x) for x in pf.xi], "mode": mode, "flags": [d.to_json() for d in data], "regularity": verdict.to_json()}
    lines = [f"{len(data)} flags, regular={verdict.regular}, margin={verdict.margin_str()}"]
    lines += [json.dumps(d.flag.to_json()["prefix_generators"]) + f" nu={d.flag.nu}" for d in data]
    return report, "\n".join(lines), True


def cmd_jk(pf: ProblemFile, args):
    phi = _need(pf.phi, "phi")
    c = _chamber(pf)
    value = residues.jk_residue(phi, c, pf.seq.A.vectors, seed=pf.seed)
    return {"value": str(value), "chamber": c.to_json()}, str(value), True


def cmd_intersect(pf: ProblemFile, args):
    Q = _need(pf.Q if pf.Q is not None else pf.P, "Q")
    c = _chamber(pf)
    value = toric.intersection_number(pf.seq, c, Q)
    fan = toric.fan_of_chamber(pf.seq, c)
    return {"value": str(value), "fan": fan.to_json(), "chamber": c.to_json()}, str(value), True


def cmd_series(pf: ProblemFile, args):
    P = _need(pf.P, "P")
    problem = _problem(pf, single=False)
    c = problem.chamber
    D = Fraction(args.degree_bound) if args.degree_bound is not None else pf.degree_bound
    table = series.coefficient_table(pf.seq, c, problem.theta, P, D, threads=args.threads, seed=pf.seed)
    report = {"table": table.to_json(pf.z), "theta": [[str(x) for x in t] for t in problem.theta]}
    if pf.z is not None:
        report["partial_sum"] = _cplx(table.evaluate(pf.z))
    return report, table.to_text(pf.z), True


def cmd_solve(pf: ProblemFile, args):
    z = _need(pf.z, "z")
    tol = args.tol if args.tol is not None else pf.tolerances.get("solver", 1e-12)
    if pf.partition is not None:
        problem = _problem(pf, single=False)
        seq, zt, s = problem.augmented, problem.z_tilde(z), problem.cone.s
    else:
        seq, zt, s = pf.seq, z, 1
    crit = critical.solve_binomial(seq, zt, tol=tol, seed=pf.seed)
    report = {"critical_set": crit.to_json(), "count": len(crit)}
    lines = [f"{len(crit)} critical points"]
    if pf.P is not None:
        value = critical.local_toric_residue(seq, pf.P, zt, s=s, crit=crit, seed=pf.seed)
        report["local_toric_residue"] = _cplx(value)
        lines.append(f"local toric residue {value.real:.12g}{value.imag:+.3g}j")
    return report, "\n".join(lines), True


def cmd_check_genericity(pf: ProblemFile, args):
    z = _need(pf.z, "z")
    problem = _problem(pf, single=pf.partition is None)
    rep = critical.genericity_check(problem.cone, problem.z_tilde(z), seed=pf.seed)
    ok = all(v == "PASS" for v in rep["conditions"].values())
    lines = [f"{k}: {v}" for k, v in sorted(rep["conditions"].items())] + rep["failures"]
    return rep, "\n".join(lines), ok


def _verify(pf: ProblemFile, args, single: bool):
    P = _need(pf.P, "P")
    z = _need(pf.z, "z")
    problem = _problem(pf, single)
    D = Fraction(args.degree_bound) if args.degree_bound is not None else pf.degree_bound
    tol = args.tol if args.tol is not None else pf.tolerances.get("verify", 1e-8)
    rep = cayley.verify_mtrmc(problem, P, z, D=D, tol=tol, threads=args.threads, seed=pf.seed)
    sv, rv = rep["series_value"], rep["residue_value"]
    lines = [
        f"series  {sv[0]:.12g}{sv[1]:+.3g}j",
        f"residue {rv[0]:.12g}{rv[1]:+.3g}j",
        f"gap     {rep['abs_gap']:.3e}",
        f"verdict {rep['verdict']}",
    ] + rep["failures"]
    return rep, "\n".join(lines), rep["verdict"] == "PASS"


def cmd_verify_trmc(pf: ProblemFile, args):
    return _verify(pf, args, single=True)


def cmd_verify_mtrmc(pf: ProblemFile, args):
    _need(pf.partition, "partition")
    return _verify(pf, args, single=False)


COMMANDS = {
    "gale": cmd_gale,
    "chambers": cmd_chambers,
    "flags": cmd_flags,
    "jk": cmd_jk,
    "intersect": cmd_intersect,
    "series": cmd_series,
    "solve": cmd_solve,
    "check-genericity": cmd_check_genericity,
    "verify-trmc": cmd_verify_trmc,
    "verify-mtrmc": cmd_verify_mtrmc,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-residue", description="Toric residues, JK residues and mirror series.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--input", "-i", required=True, help="problem file (JSON), '-' for stdin")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--output", "-o", help="write the report here instead of stdout")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--degree-bound", dest="degree_bound", help="series slice bound D (rational)")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--mode", choices=(chambers.CLOSED, chambers.PLUS), default=chambers.CLOSED)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.input == "-":
            data = json.load(sys.stdin)
        else:
            with open(args.input) as fh:
                data = json.load(fh)
        pf = ProblemFile.parse(data)
        env_seed = os.environ.get("TORIC_RESIDUE_SEED")
        if env_seed is not None:
            pf.seed = int(env_seed)
        if args.threads < 1:
            raise InputError("--threads must be positive")
        if args.degree_bound is not None:
            _exact(args.degree_bound, "--degree-bound")
    except (OSError, json.JSONDecodeError, InputError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report, text, ok = COMMANDS[args.command](pf, args)
    except (InputError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ToricResidueError as exc:
        print(f"computation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    out = json.dumps(report, sort_keys=True, indent=2) if args.format == "json" else text
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
