"""Command-line interface: solve, verify, generate, enumerate, check, bench.

Exit codes: 0 success, 1 usage / parse / precondition error, 2 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import approx, detect, io, oracle
from .core import (
    SplitMix64,
    Tournament,
    cyclic_vertices,
    induced,
    paley_tournament,
    random_tournament,
    random_weights,
)

ALGORITHMS = ("seven-thirds", "three-approx", "exact", "layers-only", "cdz")
SEVEN_THIRDS = Fraction(7, 3)


class UsageError(Exception):
    pass


def _read(path) -> tuple[Tournament, tuple[Fraction, ...]]:
    if path == "-":
        text = sys.stdin.read()
        return io.tournament_from_json(text) if text.lstrip().startswith("{") else io.parse_tournament(text)
    return io.read_tournament_file(path)


def _emit(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def run_algorithm(name: str, t: Tournament, w, check: bool = True) -> approx.FvsResult:
    if name == "seven-thirds":
        return approx.seven_thirds_fvs(t, w)
    if name == "three-approx":
        return approx.three_approx(t, w)
    if name == "exact":
        cap = oracle.DEFAULT_CAP if check else max(oracle.DEFAULT_CAP, t.n)
        res = oracle.exact_min_fvs(t, w, cap=cap)
        return approx.FvsResult(res.witness, res.optimum, {v: approx.EXACT for v in res.witness}, "exact")
    if name == "cdz":
        return approx.cdz_t5free_fvs(t, w, check=check)
    if name == "layers-only":
        # vertices on no triangle never need deleting
        keep = cyclic_vertices(t)
        sub, old = induced(t, keep)
        inner, layers = approx.layers_fvs(sub, [w[v] for v in old], check=check)
        tags = {old[v]: tag for v, tag in inner.stage_tags.items()}
        fvs = tuple(sorted(tags))
        return approx.FvsResult(fvs, sum((w[v] for v in fvs), Fraction(0)), tags, "layers-only",
                                layers=layers.relabelled(old), stalls=inner.stalls)
    raise UsageError(f"unknown algorithm {name!r}")


def cmd_solve(args) -> int:
    t, w = _read(args.input)
    result = run_algorithm(args.algorithm, t, w, check=not args.check_skip)
    if not approx.verify_fvs(t, result.fvs):
        raise approx.InvariantViolation(f"{args.algorithm} returned a set that is not a feedback vertex set")
    opt = oracle.exact_min_fvs(t, w).optimum if args.audit else None
    doc = io.result_document(result, t, w, opt)
    _emit(io.format_document(doc, args.format), args.output)
    return 0


def cmd_verify(args) -> int:
    t, _ = _read(args.input)
    fvs = [int(x) for x in args.fvs.split(",") if x.strip()] if args.fvs else []
    ok = approx.verify_fvs(t, fvs)
    print("valid" if ok else "invalid")
    return 0 if ok else 1


def cmd_generate(args) -> int:
    if args.model == "paley":
        t = paley_tournament(args.n)
    else:
        t = random_tournament(args.n, args.seed)
    w = random_weights(t.n, args.seed ^ 0x5EED, args.max_weight) if args.weights == "random" else None
    text = io.tournament_to_json(t, w) + "\n" if args.format == "structured" else io.write_tournament(t, w)
    _emit(text, args.output)
    return 0


def cmd_enumerate(args) -> int:
    reps = detect.family_members(args.order, args.forbidden)
    print(len(reps))
    if args.emit:
        os.makedirs(args.emit, exist_ok=True)
        for i, rep in enumerate(reps):
            name = os.path.join(args.emit, f"order{args.order}_forbid{args.forbidden}_{i:03d}.txt")
            with open(name, "w", encoding="utf-8") as fh:
                fh.write(io.write_tournament(rep))
    return 0


def cmd_check(args) -> int:
    t, _ = _read(args.input)
    tri = detect.find_triangle(t)
    t5 = detect.find_t5_subtournament(t)
    t7 = detect.find_t7_subtournament(t)

    def line(name, witness):
        status = "yes" if witness is None else "no, witness " + " ".join(map(str, witness))
        return f"{name}: {status}"

    print(line("transitive", tri))
    print(line("t5-free", t5))
    print(line("t7-free", t7))
    return 0


def _bench_trial(job):
    trial, n, seed, weighted, cap = job
    t = random_tournament(n, seed)
    w = random_weights(n, seed ^ 0x5EED) if weighted else (Fraction(1),) * n
    opt = oracle.exact_min_fvs(t, w, cap=cap).optimum
    row = {"trial": trial, "n": n, "seed": seed, "optimum": opt}
    for name in ("seven-thirds", "three-approx"):
        res = run_algorithm(name, t, w)
        if not approx.verify_fvs(t, res.fvs):
            raise approx.InvariantViolation(f"{name} output is not a feedback vertex set (trial {trial})")
        try:
            row[name] = io.ratio(res.weight, opt)
        except ValueError as exc:
            raise approx.InvariantViolation(f"trial {trial}: {exc}") from exc
    return row


def bench_jobs(trials: int, n_min: int, n_max: int, seed: int, weighted: bool, cap: int):
    rng = SplitMix64(seed)
    jobs = []
    for trial in range(trials):
        s = rng.next()
        n = n_min + s % (n_max - n_min + 1)
        jobs.append((trial, n, s, weighted, cap))
    return jobs


def cmd_bench(args) -> int:
    n_min = args.n_min if args.n_min is not None else args.n
    n_max = args.n_max if args.n_max is not None else args.n
    if n_min is None or n_max is None or n_min > n_max:
        raise UsageError("give --n or a valid --n-min/--n-max range")
    if n_max > args.oracle_cap:
        raise UsageError(f"n up to {n_max} exceeds --oracle-cap {args.oracle_cap}")
    jobs = bench_jobs(args.trials, n_min, n_max, args.seed, args.weights == "random", args.oracle_cap)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_bench_trial, jobs))
    else:
        rows = [_bench_trial(j) for j in jobs]

    print("trial n seed optimum seven-thirds three-approx")
    for r in rows:
        print(r["trial"], r["n"], r["seed"], io.format_rational(r["optimum"]),
              io.format_rational(r["seven-thirds"]), io.format_rational(r["three-approx"]))
    failed = False
    for name, bound in (("seven-thirds", SEVEN_THIRDS), ("three-approx", Fraction(3))):
        ratios = [r[name] for r in rows]
        worst = max(ratios, default=Fraction(1))
        mean = sum(ratios, Fraction(0)) / len(ratios) if ratios else Fraction(1)
        print(f"{name}: max {io.format_rational(worst)} mean {float(mean):.4f} bound {io.format_rational(bound)}")
        failed |= worst > bound
    if failed:
        print("ratio bound violated", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tourfvs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a feedback vertex set")
    p.add_argument("-i", "--input", required=True, help="tournament file ('-' for stdin)")
    p.add_argument("-o", "--output", help="result document path (default stdout)")
    p.add_argument("-a", "--algorithm", choices=ALGORITHMS, default="seven-thirds")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--check-skip", action="store_true",
                   help="skip precondition checks (cdz, layers-only) and the exact solver's size cap")
    p.add_argument("--audit", action="store_true", help="also run the exact solver and report the ratio")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check that a vertex set is a feedback vertex set")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--fvs", default="", help="comma-separated vertex ids")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a tournament file")
    p.add_argument("--n", type=int, required=True, help="vertex count (the prime q for paley)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=("uniform", "paley"), default="uniform")
    p.add_argument("--weights", choices=("unit", "random"), default="unit")
    p.add_argument("--max-weight", type=int, default=10)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("enumerate", help="count isomorphism classes avoiding a transitive subtournament")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--forbidden", type=int, required=True, help="forbidden transitive order")
    p.add_argument("--emit", metavar="DIR", help="write each class representative as a tournament file")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check", help="report transitivity and family-freeness")
    p.add_argument("-i", "--input", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="approximation ratios against the exact solver")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--n", type=int)
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", choices=("unit", "random"), default="unit")
    p.add_argument("--oracle-cap", type=int, default=oracle.DEFAULT_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except approx.InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    except (UsageError, io.ParseError, approx.PreconditionError, oracle.SizeCapError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
