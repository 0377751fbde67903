"""Command line: ``impcalc taut|prove|check|tableau|corpus``.

Exit status is 0 on success, 1 on a logical failure such as a
non-tautology or an invalid proof, and 2 on unusable input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from pathlib import Path

from . import kernel
from .derivation import QContext
from .syntax import (ParseError, enumerate_formulas, falsifying_valuation,
                     is_tautology, parse, unparse)
from .synthesis import synthesize
from .tableau import expand, q_transform, render_text, tableau_to_dict

OK, FAILED, BAD_INPUT = 0, 1, 2


def _show_valuation(v: dict[str, bool]) -> str:
    return " ".join(f"{k}={'true' if b else 'false'}" for k, b in v.items())


def _formula_arg(text: str, what: str = "formula"):
    try:
        return parse(text)
    except ParseError as e:
        print(f"error: cannot parse {what} {text!r}: {e}", file=sys.stderr)
        raise SystemExit(BAD_INPUT)


def cmd_taut(args) -> int:
    f = _formula_arg(args.formula)
    bad = falsifying_valuation(f)
    if bad is None:
        print("tautology")
        return OK
    print(f"not a tautology: {_show_valuation(bad)}")
    return FAILED


def cmd_prove(args) -> int:
    z = _formula_arg(args.formula)
    q = _formula_arg(args.q, "--q formula") if args.q is not None else None
    start = time.perf_counter()
    bad = falsifying_valuation(z)
    if bad is not None:
        print(f"not a tautology: {_show_valuation(bad)}", file=sys.stderr)
        if args.stats:
            print(json.dumps({"formula": unparse(z), "tautology": False}), file=sys.stderr)
        return FAILED
    result = synthesize(z, q=q, final_step=args.final_step)
    proved = kernel.check(result.proof)
    expected = z if q is None else QContext(q).dneg(z)
    if proved is not expected:  # pragma: no cover - would be a synthesis bug
        print("internal error: synthesized proof has the wrong conclusion", file=sys.stderr)
        return FAILED
    text = kernel.dumps(result.proof)
    if args.emit:
        Path(args.emit).write_text(text, encoding="utf-8")
        report_stream = sys.stdout
    else:
        sys.stdout.write(text)
        report_stream = sys.stderr
    report = {"tautology": True, **result.report(),
              "wall_ms": round((time.perf_counter() - start) * 1000, 1)}
    if args.stats:
        print(json.dumps(report, ensure_ascii=False), file=report_stream)
    else:
        print(f"proved {report['conclusion']} in {report['proof_lines']} lines",
              file=report_stream)
    return OK


def cmd_check(args) -> int:
    try:
        text = Path(args.path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        print(f"error: cannot read {args.path}: {e}", file=sys.stderr)
        return BAD_INPUT
    if not text.strip():
        print(f"error: {args.path} is empty", file=sys.stderr)
        return BAD_INPUT
    try:
        proof = kernel.loads(text)
    except kernel.MalformedProof as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    try:
        conclusion = kernel.check(proof)
    except kernel.ProofError as e:
        print(f"invalid proof: {e}")
        return FAILED
    if proof.hypotheses:
        print(", ".join(unparse(h) for h in proof.hypotheses), "|-", unparse(conclusion))
    else:
        print(unparse(conclusion))
    return OK


def cmd_tableau(args) -> int:
    z = _formula_arg(args.formula)
    t = expand(z)
    if args.q is not None:
        q = _formula_arg(args.q, "--q formula")
        if not t.is_closed():
            print("error: the tableau has an open branch; only closed tableaux are transformed",
                  file=sys.stderr)
            return FAILED
        t = q_transform(t, QContext(q))
    if args.format == "json":
        print(json.dumps(tableau_to_dict(t), ensure_ascii=False, indent=1))
    else:
        print(render_text(t))
        print("closed" if t.is_closed() else "open")
    return OK


def cmd_corpus(args) -> int:
    if args.max_vars < 1:
        args.parser.error("--max-vars must be at least 1")
    if args.max_conn < 0:
        args.parser.error("--max-conn must be nonnegative")
    formulas = enumerate_formulas(args.max_vars, args.max_conn)
    counts: Counter = Counter()
    biggest = 0
    failures: list[str] = []
    start = time.perf_counter()
    for f in formulas:
        n = f.size
        counts["formulas", n] += 1
        taut = is_tautology(f)
        if expand(f).is_closed() != taut:
            failures.append(f"tableau/truth-table disagreement on {unparse(f)}")
            continue
        if not taut:
            continue
        counts["tautologies", n] += 1
        proof = synthesize(f).proof
        try:
            ok = kernel.check(proof) is f
        except kernel.ProofError as e:
            failures.append(f"{unparse(f)}: {e}")
            continue
        if not ok:
            failures.append(f"{unparse(f)}: proof concludes something else")
            continue
        counts["proved", n] += 1
        biggest = max(biggest, len(proof))
    print(f"{'arrows':>6} {'formulas':>9} {'tautologies':>12} {'proved':>7}")
    for n in range(args.max_conn + 1):
        print(f"{n:>6} {counts['formulas', n]:>9} {counts['tautologies', n]:>12} "
              f"{counts['proved', n]:>7}")
    total = lambda k: sum(v for (kind, _), v in counts.items() if kind == k)  # noqa: E731
    print(f"{'all':>6} {total('formulas'):>9} {total('tautologies'):>12} {total('proved'):>7}")
    print(f"largest proof: {biggest} lines; {len(failures)} failures; "
          f"{time.perf_counter() - start:.1f}s")
    for msg in failures:
        print("FAIL", msg)
    return FAILED if failures else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impcalc", description="Tableaux and Hilbert proofs for implicational logic.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("taut", help="decide tautology-hood by truth table")
    p.add_argument("formula")
    p.set_defaults(func=cmd_taut)

    p = sub.add_parser("prove", help="synthesize a checked Hilbert proof")
    p.add_argument("formula")
    p.add_argument("--emit", metavar="PATH", help="write the proof here instead of stdout")
    p.add_argument("--q", metavar="FORMULA",
                   help="prove QQ formula for this Q instead of the formula itself")
    p.add_argument("--final-step", choices=("id", "peirce"), default="id")
    p.add_argument("--stats", action="store_true", help="print a JSON report")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check", help="check a proof file")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("tableau", help="print the dual tableau")
    p.add_argument("formula")
    p.add_argument("--q", metavar="FORMULA", help="show the Q-transformed tableau")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_tableau)

    p = sub.add_parser("corpus", help="prove every tautology within size bounds")
    p.add_argument("--max-vars", type=int, default=2)
    p.add_argument("--max-conn", type=int, default=3)
    p.set_defaults(func=cmd_corpus, parser=p)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
