"""Deciding whether factors are imaged, and the two construction pipelines."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Optional

from . import data
from ._kernels import as_array, first_match, pattern
from .morphisms import Morphism, MorphismError, apply, uniform_width, verify_transfer
from .oracle import FactorOracle, SquareInventory
from .words import complement, contains_any, enumerate_avoiding

EMPTY_RULE = "empty-word-rule"
UNARY_RULE = "unary-rule"
MORPHIC = "morphic"


@dataclass(frozen=True)
class ImagedWitness:
    factor: str
    kind: str
    morphism: Optional[Morphism] = None
    start: Optional[int] = None  # position of m(f) in the examined word, when known

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"factor": self.factor, "kind": self.kind}
        if self.morphism is not None:
            d["morphism"] = self.morphism.compact()
            d["image"] = apply(self.morphism, self.factor)
        if self.start is not None:
            d["start"] = self.start
        return d


def _splits(f: str, length: int) -> Iterator[tuple[int, int]]:
    """Image lengths (a, b) >= 1 with |f|_0 * a + |f|_1 * b == length."""
    n0 = f.count("0")
    n1 = len(f) - n0
    for a in range(1, (length - n1) // n0 + 1):
        rest = length - n0 * a
        if rest % n1 == 0:
            yield a, rest // n1


def _offsets(f: str, a: int, b: int) -> tuple[int, int]:
    """Start of the image of the first 0 and of the first 1 inside m(f)."""
    # only 1s precede the first 0, only 0s precede the first 1
    return f.index("0") * b, f.index("1") * a


def image_of(f: str, x: str, y: str) -> str:
    """m(f) for the binary morphism 0 -> x, 1 -> y."""
    return f.replace("0", "a").replace("1", y).replace("a", x)


def matches_at(f: str, g: str, a: int, b: int) -> bool:
    """Whether g == m(f) for an admissible m with |m(0)| = a, |m(1)| = b.

    Assumes f has both letters and |f|_0 * a + |f|_1 * b == |g|.
    """
    off0 = f.index("0") * b
    off1 = f.index("1") * a
    x = g[off0:off0 + a]
    y = g[off1:off1 + b]
    if a == 1 and b == 1 and x == "0" and y == "1":
        return False
    return image_of(f, x, y) == g


def _require_biliteral(f: str):
    if "0" not in f or "1" not in f or f.strip("01"):
        raise ValueError(f"expected a binary word containing both letters, got {f!r}")


def parse_as_image(g: str, f: str) -> list[Morphism]:
    """All non-identity binary morphisms m with non-empty images and m(f) == g."""
    _require_biliteral(f)
    found = []
    for a, b in _splits(f, len(g)):
        off0, off1 = _offsets(f, a, b)
        m = Morphism((g[off0:off0 + a], g[off1:off1 + b]))
        if not m.is_identity and apply(m, f) == g:
            found.append(m)
    return found


def imaged_in_finite(f: str, w: str) -> Optional[ImagedWitness]:
    """A reason why f is imaged in every infinite binary word extending w.

    The empty word and one-letter-kind words are always imaged. Otherwise an
    admissible m with m(f) a factor of w is searched for, shortest image first,
    then leftmost occurrence.
    """
    if not f:
        return ImagedWitness(f, EMPTY_RULE)
    if "0" not in f or "1" not in f:
        return ImagedWitness(f, UNARY_RULE)
    start, a, b = first_match(*pattern(f), as_array(w), len(w))
    if start < 0:
        return None
    off0, off1 = _offsets(f, a, b)
    g = w[start:]
    return ImagedWitness(f, MORPHIC, Morphism((g[off0:off0 + a], g[off1:off1 + b])), start)


def imaged_in_finite_reference(f: str, w: str) -> Optional[ImagedWitness]:
    """Pure-Python imaged_in_finite, kept as an independent check of the compiled path."""
    if not f:
        return ImagedWitness(f, EMPTY_RULE)
    if "0" not in f or "1" not in f:
        return ImagedWitness(f, UNARY_RULE)
    for length in range(len(f), len(w) + 1):
        splits = list(_splits(f, length))
        for start in range(len(w) - length + 1):
            g = w[start:start + length]
            for a, b in splits:
                if matches_at(f, g, a, b):
                    off0, off1 = _offsets(f, a, b)
                    return ImagedWitness(f, MORPHIC, Morphism((g[off0:off0 + a], g[off1:off1 + b])), start)
    return None


def imaged_in_oracle(f: str, oracle: FactorOracle, inventory: SquareInventory,
                     exhaustive: bool = False) -> Optional[ImagedWitness]:
    """Look for admissible m with m(0), m(1) square roots and m(f) in the oracle language.

    Only sound when 00 and 11 are factors of f, which forces both images to
    be square roots. Candidates are pruned letter by letter along f unless
    `exhaustive` is set.
    """
    if "00" not in f or "11" not in f:
        raise ValueError(f"{f!r} must contain both 00 and 11")
    roots = inventory.all_roots()
    longest = max(len(u) for u in roots)
    worst = len(f) * longest
    if worst > oracle.max_len:
        raise ValueError(f"oracle max_len {oracle.max_len} is below the longest candidate image ({worst})")
    if exhaustive:
        for x, y in itertools.product(roots, roots):
            m = Morphism((x, y))
            if not m.is_identity and oracle.is_factor(apply(m, f)):
                return ImagedWitness(f, MORPHIC, m)
        return None
    # Anchor on the longest run c^r of f: every occurrence of m(f) contains
    # m(c)^r at a fixed offset once |m(other)| is known, and the first other
    # letter of f then pins m(other) down as a substring of the text.
    runs = {c: max(len(run) for run in f.replace(o, " ").split()) for c, o in (("0", "1"), ("1", "0"))}
    c = max("01", key=lambda ch: runs[ch])
    other = "1" if c == "0" else "0"
    r = runs[c]
    at = f.index(c * r)
    before_c, before_o = f[:at].count(c), f[:at].count(other)
    lead = f.index(other)  # f starts with c^lead
    text = oracle.text
    xs = [x for x in roots if oracle.is_factor(x * r)]
    ys = {}
    for y in roots:
        if oracle.is_factor(y * runs[other]):
            ys.setdefault(len(y), set()).add(y)
    for x in xs:
        anchor = x * r
        j = text.find(anchor)
        while j >= 0:
            for size, pool in ys.items():
                start = j - before_c * len(x) - before_o * size
                if start < 0:
                    continue
                pos = start + lead * len(x)
                y = text[pos:pos + size]
                if y not in pool:
                    continue
                m = Morphism((x, y) if c == "0" else (y, x))
                if m.is_identity:
                    continue
                if text.startswith(apply(m, f), start):
                    return ImagedWitness(f, MORPHIC, m)
            j = text.find(anchor, j + 1)
    return None


def morphic_witness_in_oracle(f: str, oracle: FactorOracle, max_image: int) -> Optional[ImagedWitness]:
    """Admissible m with |m(0)|, |m(1)| <= max_image and m(f) in the language, or None."""
    if not f:
        return ImagedWitness(f, EMPTY_RULE)
    if "0" not in f or "1" not in f:
        return ImagedWitness(f, UNARY_RULE)
    pool = [
        "".join(bits)
        for k in range(1, max_image + 1)
        for bits in itertools.product("01", repeat=k)
    ]
    for x in pool:
        for y in pool:
            m = Morphism((x, y))
            if m.is_identity:
                continue
            img = apply(m, f)
            if len(img) <= oracle.max_len and oracle.is_factor(img):
                return ImagedWitness(f, MORPHIC, m)
    return None


def derive_sf(oracle: FactorOracle, length: int = 7) -> list[str]:
    """Length-7 factors with both 00 and 11 and neither 0101 nor 1010."""
    return sorted(
        f for f in oracle.factors_of_length(length)
        if "00" in f and "11" in f and "0101" not in f and "1010" not in f
    )


def parse_morphism_list(text: str) -> list[Morphism]:
    return [Morphism.parse(tok) for tok in text.replace("\n", ",").split(",") if tok.strip()]


# Reports -------------------------------------------------------------------

@dataclass
class Stage:
    name: str
    passed: bool
    counts: dict[str, Any] = field(default_factory=dict)
    counterexample: Any = None
    elapsed_ms: float = 0.0

    def to_dict(self) -> dict:
        d = {"name": self.name, "pass": self.passed, "counts": self.counts,
             "elapsedMs": round(self.elapsed_ms, 1)}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d


@dataclass
class Report:
    theorem: str
    stages: list[Stage] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.stages) and all(s.passed for s in self.stages)

    def stage(self, name: str) -> Stage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "pass": self.passed,
            "stages": [s.to_dict() for s in self.stages],
            "elapsedMs": round(self.elapsed_ms, 1),
        }


class _Runner:
    """Runs named stages in order, stopping at the first failure unless keep_going."""

    def __init__(self, report: Report, keep_going: bool):
        self.report = report
        self.keep_going = keep_going
        self.stopped = False

    def run(self, name: str, fn) -> Optional[Stage]:
        if self.stopped:
            return None
        t0 = time.perf_counter()
        try:
            passed, counts, cex = fn()
        except (MorphismError, ValueError) as exc:
            passed, counts, cex = False, {}, {"error": str(exc)}
        stage = Stage(name, passed, counts, cex, (time.perf_counter() - t0) * 1000)
        self.report.stages.append(stage)
        if not passed and not self.keep_going:
            self.stopped = True
        return stage


def _transfer_stage(m: Morphism, alpha: str, beta: str, n: int, workers: int):
    rep = verify_transfer(m, alpha, beta, n, workers=workers, require_sync=False)
    counts = {k: v for k, v in rep.to_dict().items() if k not in ("counterexample", "by_length")}
    cex = rep.to_dict().get("counterexample")
    if not rep.synchronizing and cex is None:
        cex = {"error": "not synchronizing"}
    return rep.lemma_applies, counts, cex


def verify_thm2(m37: Morphism, workers: int = 1, keep_going: bool = False,
                oracle_len: int = 300) -> Report:
    """Check that images under m37 avoid imaged factors of length 7."""
    t0 = time.perf_counter()
    report = Report("thm2")
    r = _Runner(report, keep_going)
    state: dict[str, Any] = {}

    def width():
        q = uniform_width(m37)
        return q is not None, {"width": q}, None if q else {"error": "not uniform"}

    def build():
        state["oracle"] = FactorOracle.build(m37, "7/4", oracle_len)
        o = state["oracle"]
        return True, {"max_len": o.max_len, "window": o.window, "windows": len(o.windows)}, None

    def avoid_f():
        bad = state["oracle"].check_avoids(data.F7)
        return bad is None, {"forbidden": len(data.F7)}, bad

    def transfer():
        return _transfer_stage(m37, "7/4", "289/148", 3, workers)

    def squares():
        roots = state["oracle"].square_roots(2).all_roots()
        return roots == ["0", "1", "01", "10"], {"roots": roots}, None if roots == ["0", "1", "01", "10"] else roots

    def complements():
        pair = state["oracle"].check_no_complement_pairs(7)
        return pair is None, {"factors_7": len(state["oracle"].factors_of_length(7))}, pair

    def cover():
        bad = state["oracle"].check_length_cover(7, [["0101"], ["1010"], ["00", "11"]])
        return bad is None, {}, bad

    def sf():
        got = derive_sf(state["oracle"])
        state["sf"] = got
        ok = got == sorted(data.SF7)
        return ok, {"size": len(got)}, None if ok else {"derived": got}

    def sm():
        ms = parse_morphism_list(data.SM7)
        state["sm"] = ms
        ok = len(ms) == 10 and len(set(ms)) == 10 and all(m.neat for m in ms)
        return ok, {"size": len(ms)}, None if ok else [str(m) for m in ms]

    def grid():
        done = 0
        for m in state["sm"]:
            for f in state["sf"]:
                if contains_any(apply(m, f), data.F7) is None:
                    return False, {"checked": done}, {"morphism": str(m), "factor": f, "image": apply(m, f)}
                done += 1
        return True, {"checked": done}, None

    r.run("uniform", width)
    r.run("oracle", build)
    r.run("avoids F", avoid_f)
    r.run("transfer (289/148+, 3)", transfer)
    r.run("squares", squares)
    r.run("no complement pairs", complements)
    r.run("length-7 cover", cover)
    r.run("S_f", sf)
    r.run("S_m", sm)
    r.run("images hit F", grid)
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report


def verify_thm4(m342: Morphism, workers: int = 1, keep_going: bool = False,
                oracle_len: int = 1952, square_bound: int = 244,
                witness_i: bool = False, witness_image_len: int = 4) -> Report:
    """Check that images under m342 have at most 36 imaged factors."""
    t0 = time.perf_counter()
    report = Report("thm4")
    r = _Runner(report, keep_going)
    state: dict[str, Any] = {}

    def width():
        q = uniform_width(m342)
        return q == 342, {"width": q}, None if q == 342 else {"width": q}

    def build():
        state["oracle"] = FactorOracle.build(m342, "7/4", oracle_len)
        o = state["oracle"]
        return True, {"max_len": o.max_len, "window": o.window, "windows": len(o.windows)}, None

    def avoid_f():
        bad = state["oracle"].check_avoids(data.F342)
        return bad is None, {"forbidden": len(data.F342)}, bad

    def transfer():
        return _transfer_stage(m342, "7/4", "1321/684", 245, workers)

    def squares():
        inv = state["oracle"].square_roots(square_bound)
        state["inventory"] = inv
        return bool(inv.roots), {"roots": len(inv), "max_period": inv.max_period}, None

    def t_check():
        hits = {}
        for t in data.T342:
            wit = imaged_in_oracle(t, state["oracle"], state["inventory"])
            if wit is not None:
                hits[t] = wit.to_dict()
        return not hits, {"checked": len(data.T342)}, hits or None

    def i_set():
        t_prime = sorted(set(data.F342) | set(data.T342))
        got = enumerate_avoiding(t_prime, cap=max(len(t) for t in t_prime) + 8)
        state["I"] = got
        ok = len(t_prime) == 12 and got == sorted(data.I342)
        return ok, {"T_prime": len(t_prime), "I": len(got)}, None if ok else {"derived": got}

    def i_witness():
        missing = []
        kinds: dict[str, int] = {}
        for f in state["I"]:
            if "00" in f and "11" in f:
                # both images are square roots, possibly long ones
                wit = imaged_in_oracle(f, state["oracle"], state["inventory"])
            else:
                wit = morphic_witness_in_oracle(f, state["oracle"], witness_image_len)
            if wit is None:
                missing.append(f)
            else:
                kinds[wit.kind] = kinds.get(wit.kind, 0) + 1
        return not missing, kinds, missing or None

    r.run("uniform", width)
    r.run("oracle", build)
    r.run("avoids F", avoid_f)
    r.run("transfer (1321/684+, 245)", transfer)
    r.run("squares", squares)
    r.run("T not imaged", t_check)
    r.run("I set", i_set)
    if witness_i:
        r.run("I witnesses", i_witness)
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report
