"""Command-line front end.

Exit codes: 0 stable, 10 unstable, 1 input error, 2 resource limit,
3 failed cross-check under ``--verify`` (or a corpus mismatch).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .formula import FormulaError, format_rational, parse
from .qe import eliminate_quantifiers
from .oracle import ResourceLimit, ladder_exists, verify_decomposition, verify_ladder
from .stability import LadderWitness, StabilityVerdict, analyze

EXIT_STABLE = 0
EXIT_INPUT = 1
EXIT_LIMIT = 2
EXIT_VERIFY = 3
EXIT_UNSTABLE = 10

SPOT_POINTS = 200
MANIFEST = "EXPECTED.json"


def corpus_dir() -> Path:
    return Path(str(resources.files("stabdec") / "corpus"))


def _witness_json(w: LadderWitness) -> dict:
    return {
        "k": w.k,
        "a": [[format_rational(c) for c in p] for p in w.a],
        "b": [[format_rational(c) for c in p] for p in w.b],
    }


def _spot_check(verdict: StabilityVerdict, seed: int) -> dict:
    """Compare membership in D and in the union of pieces at random points."""
    rng = random.Random(seed)
    union = verdict.union()
    vars = verdict.D.vars
    consts = sorted({abs(Fraction(r[-1])) for c in verdict.D.cells for _, r in c.cons} | {Fraction(1)})
    span = int(max(consts)) + 2
    bad = 0
    for _ in range(SPOT_POINTS):
        pt = {v: Fraction(rng.randint(-4 * span, 4 * span), rng.choice((1, 2, 4))) for v in vars}
        # snap some coordinates together so lower-dimensional strata get hit
        if len(vars) > 1 and rng.random() < 0.3:
            a, b = rng.sample(vars, 2)
            pt[a] = pt[b]
        if verdict.D.holds(pt) != union.holds(pt):
            bad += 1
    return {"points": SPOT_POINTS, "mismatches": bad}


def _verdict_checks(verdict: StabilityVerdict, seed: int) -> tuple[dict, bool]:
    if verdict.stable:
        rep = verify_decomposition(verdict.D, verdict.pieces, verdict.partition, verdict.theory)
        spot = _spot_check(verdict, seed)
        checks = {"equivalent": rep.equivalent, "well_formed": rep.well_formed, "inside": rep.inside,
                  "spot_check": spot}
        return checks, rep.ok and spot["mismatches"] == 0
    ok = verify_ladder(verdict.D, verdict.witness(5))
    return {"ladder_k5": ok}, ok


def _report(verdict: StabilityVerdict, with_pieces: bool) -> dict:
    out = {"verdict": verdict.tag}
    if verdict.stable:
        out["pieces"] = [p.as_json() for p in verdict.pieces] if with_pieces else len(verdict.pieces)
    else:
        out["culprit"] = str(verdict.culprit.hyperplane)
    return out


def _print_human(rep: dict) -> None:
    print(rep["verdict"])
    if isinstance(rep.get("pieces"), list):
        for i, p in enumerate(rep["pieces"], 1):
            print(f"piece {i}: Z={p['Z']} W={p['W']} X={p['X']} Y={p['Y']}")
    elif "pieces" in rep:
        print(f"pieces: {rep['pieces']}")
    if "culprit" in rep:
        print(f"non-splitting boundary: {rep['culprit']}")
    if "witness" in rep:
        w = rep["witness"]
        for i, p in enumerate(w["a"], 1):
            print(f"a{i} = ({', '.join(p)})")
        for j, p in enumerate(w["b"], 1):
            print(f"b{j} = ({', '.join(p)})")
    if "oracle" in rep:
        for k, found in rep["oracle"].items():
            print(f"k={k}: {'ladder' if found else 'none'}")
    if "checks" in rep:
        print("checks: " + json.dumps(rep["checks"]))


def _load(path: str):
    return parse(Path(path).read_text(encoding="utf-8"))


def _cmd_check(args, with_pieces: bool):
    verdict = analyze(_load(args.file))
    rep = _report(verdict, with_pieces)
    ok = True
    if args.verify:
        rep["checks"], ok = _verdict_checks(verdict, args.seed)
    code = EXIT_STABLE if verdict.stable else EXIT_UNSTABLE
    return rep, code if ok else EXIT_VERIFY


def _cmd_witness(args):
    if args.length < 1:
        raise FormulaError("--length must be positive")
    verdict = analyze(_load(args.file))
    rep = {"verdict": verdict.tag}
    if verdict.stable:
        return rep, EXIT_STABLE
    w = verdict.witness(args.length)
    rep["witness"] = _witness_json(w)
    ok = True
    if args.verify:
        ok = verify_ladder(verdict.D, w)
        rep["checks"] = {"ladder": ok}
    return rep, EXIT_UNSTABLE if ok else EXIT_VERIFY


def _cmd_oracle(args):
    if args.max_k < 1:
        raise FormulaError("--max-k must be positive")
    problem = _load(args.file)
    d = eliminate_quantifiers(problem)
    found = {}
    last = None
    for k in range(1, args.max_k + 1):
        w = ladder_exists(d, problem.partition, k, budget=args.budget)
        found[str(k)] = w is not None
        if w is None:
            break
        last = w
    for k in range(len(found) + 1, args.max_k + 1):
        found[str(k)] = False
    ladder = found[str(args.max_k)]
    rep = {"verdict": "ladder" if ladder else "no-ladder", "oracle": found}
    if last is not None:
        rep["witness"] = _witness_json(last)
    ok = True
    if args.verify and last is not None:
        ok = verify_ladder(d, last)
        rep["checks"] = {"ladder": ok}
    if not ok:
        return rep, EXIT_VERIFY
    return rep, EXIT_UNSTABLE if ladder else EXIT_STABLE


def _corpus_entry(path: str, verify: bool, seed: int) -> dict:
    verdict = analyze(_load(path))
    entry = {"name": Path(path).name, **_report(verdict, True)}
    if verify:
        entry["checks"], entry["ok"] = _verdict_checks(verdict, seed)
    return entry


def _cmd_corpus(args):
    root = Path(args.dir) if args.dir else corpus_dir()
    files = sorted(str(p) for p in root.glob("*.txt"))
    if not files:
        raise FormulaError(f"no fixtures in {root}")
    manifest = root / MANIFEST
    expected = json.loads(manifest.read_text()) if manifest.exists() else {}
    jobs = [(f, args.verify, args.seed) for f in files]
    if args.parallel:
        with ProcessPoolExecutor() as pool:
            entries = list(pool.map(_corpus_entry, *zip(*jobs)))
    else:
        entries = [_corpus_entry(*j) for j in jobs]
    entries.sort(key=lambda e: e["name"])
    ok = True
    for e in entries:
        want = expected.get(e["name"])
        if want is not None:
            e["expected"] = want
            ok &= want == e["verdict"]
        ok &= e.get("ok", True)
    return {"fixtures": entries}, EXIT_STABLE if ok else EXIT_VERIFY


def _print_corpus(rep: dict) -> None:
    for e in rep["fixtures"]:
        mark = ""
        if "expected" in e and e["expected"] != e["verdict"]:
            mark = f"  (expected {e['expected']})"
        if e.get("ok") is False:
            mark += "  (verify failed)"
        print(f"{e['name']}: {e['verdict']}{mark}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabdec", description="Decide stability of DLO/DOAG relations.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--verify", action="store_true", help="run oracle cross-checks")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized spot checks")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help in (("check", "print the verdict"), ("decompose", "print stable pieces")):
        p = sub.add_parser(name, parents=[common], help=help)
        p.add_argument("file")
    p = sub.add_parser("witness", parents=[common], help="build a half-graph witness")
    p.add_argument("file")
    p.add_argument("--length", type=int, required=True)
    p = sub.add_parser("oracle", parents=[common], help="brute-force ladder search")
    p.add_argument("file")
    p.add_argument("--max-k", type=int, required=True)
    p.add_argument("--budget", type=int, default=200_000)
    p = sub.add_parser("corpus", parents=[common], help="run every fixture in a directory")
    p.add_argument("dir", nargs="?")
    p.add_argument("--parallel", action="store_true")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            rep, code = _cmd_check(args, with_pieces=False)
        elif args.command == "decompose":
            rep, code = _cmd_check(args, with_pieces=True)
        elif args.command == "witness":
            rep, code = _cmd_witness(args)
        elif args.command == "oracle":
            rep, code = _cmd_oracle(args)
        else:
            rep, code = _cmd_corpus(args)
    except (FormulaError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    if args.json:
        print(json.dumps(rep, indent=2))
    elif args.command == "corpus":
        _print_corpus(rep)
    else:
        _print_human(rep)
    return code


def main() -> None:
    sys.exit(run())
