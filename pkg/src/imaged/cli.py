"""Command-line entry point: `imaged verify thm2`, `imaged lemma-sync ...`, etc.

Exit codes: 0 verified, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import __version__, data
from .imaged import Report, Stage, verify_thm2, verify_thm4
from .morphisms import Morphism, MorphismError, verify_transfer
from .oracle import FactorOracle, QueryTooLong
from .search import SearchConfig, thm3_search, thm5_search
from .words import enumerate_free, format_rational, parse_rational

OK, FAILED, USAGE = 0, 1, 2

BUILTIN = {"m37": data.M37, "m342": data.M342}


class UsageError(Exception):
    pass


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def load_morphism(source: str) -> Morphism:
    """A built-in name (m37, m342), a file path, or the compact form IMG0/IMG1."""
    if source in BUILTIN:
        return Morphism.from_images(BUILTIN[source][c] for c in sorted(BUILTIN[source]))
    path = Path(source)
    if path.is_file():
        return Morphism.parse(path.read_text())
    if "/" in source and not path.exists():
        return Morphism.parse(source)
    raise UsageError(f"no such morphism file: {source}")


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


# Output --------------------------------------------------------------------

def _emit(doc: dict, as_json: bool, lines: list[str]):
    doc.setdefault("version", __version__)
    if as_json:
        print(json.dumps(doc, indent=2, sort_keys=False))
    else:
        for line in lines:
            print(line)


def _report_lines(report: Report) -> list[str]:
    out = []
    for s in report.stages:
        tag = "PASS" if s.passed else "FAIL"
        counts = ", ".join(f"{k}={v}" for k, v in s.counts.items() if not isinstance(v, (list, dict)))
        out.append(f"[{tag}] {s.name}" + (f"  ({counts})" if counts else ""))
        if s.counterexample is not None:
            out.append(f"       counterexample: {json.dumps(s.counterexample)}")
    out.append(f"{report.theorem}: {'verified' if report.passed else 'FAILED'} in {report.elapsed_ms / 1000:.1f}s")
    return out


def _progress(tally, w):
    print(f"  nodes={tally.nodes} depth={len(w)} max_depth={tally.max_depth}", file=sys.stderr, flush=True)


# Commands ------------------------------------------------------------------

def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    manifest = {"command": f"verify {args.theorem}",
                "parameters": {"threads": args.threads}, "inputs": {}}
    extra = {}
    if args.theorem in ("thm2", "thm4"):
        name = args.morphism or ("m37" if args.theorem == "thm2" else "m342")
        m = load_morphism(name)
        manifest["inputs"]["morphism"] = _digest(m.dumps())
        if args.theorem == "thm2":
            report = verify_thm2(m, workers=args.threads, keep_going=args.keep_going)
        else:
            report = verify_thm4(m, workers=args.threads, keep_going=args.keep_going,
                                 witness_i=args.witness_i)
    else:
        cfg = SearchConfig(first_letter_fixed=not args.both_first_letters,
                           workers=args.threads)
        if args.depth_cap is not None:
            cfg.depth_cap = args.depth_cap
        if args.no_rule:
            cfg.rules = tuple(r for r in cfg.rules if r not in args.no_rule)
        progress = _progress if args.progress else None
        if args.theorem == "thm3":
            cfg.depth_cap = cfg.depth_cap or 1000
            rep = thm3_search(cfg=cfg, progress=progress)
            name = "search (L16, rules " + ",".join(cfg.rules) + ")"
        else:
            cfg.depth_cap = cfg.depth_cap or 200
            cfg.target = args.target
            rep = thm5_search(args.target, cfg=cfg, progress=progress)
            name = f"search (target {args.target})"
        manifest["parameters"].update(depth_cap=cfg.depth_cap, rules=list(cfg.rules),
                                      first_letter_fixed=cfg.first_letter_fixed)
        counts = rep.to_dict()
        counts.pop("elapsed_ms")
        cex = None if rep.tree_finite else {"error": "cap exceeded", "word": rep.deepest_word}
        report = Report(args.theorem, [Stage(name, rep.tree_finite, counts, cex, rep.elapsed_ms)])
        extra = {"nodesVisited": rep.nodes_visited, "maxDepth": rep.max_depth}
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    doc = report.to_dict()
    doc.update(extra)
    doc["manifest"] = manifest
    _emit(doc, args.json, _report_lines(report))
    return OK if report.passed else FAILED


def cmd_lemma_sync(args) -> int:
    t0 = time.perf_counter()
    m = load_morphism(args.morphism)
    rep = verify_transfer(m, args.alpha, args.beta, args.n, workers=args.threads,
                          require_sync=False)
    ok = rep.passed if args.premise_only else rep.lemma_applies
    d = rep.to_dict()
    cex = d.pop("counterexample", None)
    if cex is None and not ok:
        cex = {"error": "not synchronizing"}
    name = f"transfer ({format_rational(args.beta)}+, {args.n})"
    stage = Stage(name, ok, d, cex)
    report = Report("lemma-sync", [stage], (time.perf_counter() - t0) * 1000)
    stage.elapsed_ms = report.elapsed_ms
    doc = report.to_dict()
    doc["manifest"] = {"command": "lemma-sync",
                       "parameters": {"alpha": format_rational(args.alpha),
                                      "beta": format_rational(args.beta), "n": args.n,
                                      "premise_only": args.premise_only},
                       "inputs": {"morphism": _digest(m.dumps())}}
    lines = [
        f"bound: {d['bound']} (pre-images up to length {d['max_length']})",
        f"words checked: {d['words_checked']}",
        f"synchronizing: {'yes' if rep.synchronizing else 'no'}",
        f"premise: {'pass' if rep.passed else 'FAIL'}",
    ]
    if rep.counterexample is not None:
        lines.append(f"counterexample: {json.dumps(cex)}")
    lines.append("result: " + ("pass" if ok else "FAIL"))
    _emit(doc, args.json, lines)
    return OK if ok else FAILED


def cmd_oracle(args) -> int:
    m = load_morphism(args.morphism)
    o = FactorOracle.build(m, args.alpha, args.max_len)
    doc: dict = {"max_len": o.max_len, "window": o.window, "windows": len(o.windows)}
    if args.query is not None:
        if args.query.strip("01"):
            raise UsageError(f"query must be binary: {args.query!r}")
        found = o.is_factor(args.query)
        doc["query"] = args.query
        doc["answer"] = "present" if found else "absent"
        if found:
            y, off = o.witness(args.query)
            doc["witness"] = {"preimage": y, "offset": off}
        lines = [doc["answer"]]
    elif args.squares is not None:
        roots = o.square_roots(args.squares).all_roots()
        doc["squares"] = roots
        lines = roots
    else:
        facts = sorted(o.factors_of_length(args.factors))
        doc["factors"] = {"length": args.factors, "count": len(facts)}
        lines = [str(len(facts))] if args.count_only else facts
    _emit(doc, args.json, lines)
    return OK


def cmd_free(args) -> int:
    if not 1 <= args.alphabet <= 3:
        raise UsageError("alphabet size must be 1, 2 or 3")
    words = enumerate_free(args.alphabet, args.beta, args.length)
    doc = {"alphabet": args.alphabet, "beta": format_rational(args.beta),
           "length": args.length, "count": len(words)}
    if not args.count_only:
        doc["words"] = words
    _emit(doc, args.json, [str(len(words))] if args.count_only else words)
    return OK


def dump_data() -> str:
    """The bundled inputs as plain text, one section per item."""
    out = []
    for name, images in BUILTIN.items():
        m = load_morphism(name)
        out.append(f"# {name} (sha256 {_digest(m.dumps())})")
        out.append(m.dumps().rstrip("\n"))
        out.append("")
    sets = [("F7", data.F7), ("SF7", data.SF7), ("L16", data.L16), ("F342", data.F342),
            ("T342", data.T342), ("I342", data.I342)]
    for name, words in sets:
        out.append(f"# {name} ({len(words)} words)")
        out.append(" ".join(w if w else "ε" for w in words))
        out.append("")
    out.append("# SM7")
    out.append(data.SM7)
    out.append(f"# P342 (common prefix of the 342-uniform images)")
    out.append(data.P342)
    return "\n".join(out) + "\n"


# Parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="imaged", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--dump-data", action="store_true", help="print the bundled morphisms and word sets")
    sub = p.add_subparsers(dest="cmd")

    def common(sp):
        sp.add_argument("--json", action="store_true", help="print a JSON report")
        sp.add_argument("--threads", type=_positive, default=1, help="worker processes")

    v = sub.add_parser("verify", help="run a full verification pipeline")
    v.add_argument("theorem", choices=["thm2", "thm3", "thm4", "thm5"])
    common(v)
    v.add_argument("--morphism", help="override the built-in morphism (file, m37, m342 or IMG0/IMG1)")
    v.add_argument("--keep-going", action="store_true", help="run every stage even after a failure")
    v.add_argument("--witness-i", action="store_true", help="thm4: also find witnesses for every word of I")
    v.add_argument("--target", type=_positive, default=36, help="thm5: imaged-factor count to certify")
    v.add_argument("--depth-cap", type=_positive, help="search depth cap")
    v.add_argument("--no-rule", action="append", choices=["R1", "R2", "R3"], help="thm3: disable a rule")
    v.add_argument("--both-first-letters", action="store_true", help="do not fix the first letter to 0")
    v.add_argument("--progress", action="store_true", help="print search progress to stderr")
    v.set_defaults(fn=cmd_verify)

    ls = sub.add_parser("lemma-sync", help="check the finite premise of the transfer lemma")
    common(ls)
    ls.add_argument("--morphism", required=True)
    ls.add_argument("--alpha", type=_rational, required=True)
    ls.add_argument("--beta", type=_rational, required=True)
    ls.add_argument("--n", type=_positive, required=True)
    ls.add_argument("--premise-only", action="store_true",
                    help="pass on the finite check alone, without requiring synchronization")
    ls.set_defaults(fn=cmd_lemma_sync)

    o = sub.add_parser("oracle", help="query the factor language of the image of all alpha+-free words")
    common(o)
    o.add_argument("--morphism", required=True)
    o.add_argument("--alpha", type=_rational, required=True)
    o.add_argument("--max-len", type=_nonneg, required=True)
    what = o.add_mutually_exclusive_group(required=True)
    what.add_argument("--query")
    what.add_argument("--squares", type=_positive, metavar="P")
    what.add_argument("--factors", type=_nonneg, metavar="L")
    o.add_argument("--count-only", action="store_true")
    o.set_defaults(fn=cmd_oracle)

    f = sub.add_parser("free", help="list beta+-free words of a given length")
    common(f)
    f.add_argument("--alphabet", type=_positive, required=True)
    f.add_argument("--beta", type=_rational, required=True)
    f.add_argument("--length", type=_nonneg, required=True)
    f.add_argument("--count-only", action="store_true")
    f.set_defaults(fn=cmd_free)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits 2 on usage errors
    if args.dump_data:
        sys.stdout.write(dump_data())
        return OK
    if args.cmd is None:
        parser.print_usage(sys.stderr)
        return USAGE
    try:
        return args.fn(args)
    except (UsageError, MorphismError, QueryTooLong, ValueError) as exc:
        if getattr(args, "json", False):
            _emit({"error": str(exc), "stages": [], "elapsedMs": 0.0}, True, [])
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
