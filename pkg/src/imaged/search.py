"""Exhaustive backtracking over binary words.

Three searches share one depth-first driver:

* the length-6 search, which prunes a word when it ends with 0000/1111,
  contains the complement of its length-6 suffix, or ends with an image
  m(f) of a listed word f that it contains (up to complement);
* the imaged-count search, which prunes a word once it certifiably has
  `target` imaged factors in every infinite extension;
* the big-square search, which prunes words containing a square of period
  at least a given bound.

A finite tree (every branch pruned before the depth cap) proves the claim.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional

from . import data
from ._kernels import as_array, first_match, pattern, suffix_match
from .imaged import _offsets, _splits, imaged_in_finite, matches_at
from .morphisms import Morphism, apply
from .words import complement

TREE_FINITE = "tree-finite"
CAP_EXCEEDED = "depth-cap-exceeded"
PROGRESS_EVERY = 1 << 16


@dataclass
class SearchConfig:
    first_letter_fixed: bool = True
    depth_cap: Optional[int] = None
    rules: tuple[str, ...] = ("R1", "R2", "R3")
    target: int = 36
    stop_at_cap: bool = True
    workers: int = 1
    split_depth: int = 10

    def __post_init__(self):
        if self.depth_cap is not None and self.depth_cap < 1:
            raise ValueError("depth_cap must be at least 1")


@dataclass
class SearchReport:
    outcome: str
    nodes_visited: int
    max_depth: int
    deepest_word: str
    rule_fires: dict[str, int] = field(default_factory=dict)
    elapsed_ms: float = 0.0
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def tree_finite(self) -> bool:
        return self.outcome == TREE_FINITE

    def to_dict(self) -> dict:
        d = {
            "outcome": self.outcome,
            "nodes_visited": self.nodes_visited,
            "max_depth": self.max_depth,
            "deepest_word": self.deepest_word,
            "rule_fires": dict(sorted(self.rule_fires.items())),
            "elapsed_ms": round(self.elapsed_ms, 1),
        }
        d.update(self.extra)
        return d

    def same_tree(self, other: "SearchReport") -> bool:
        """Equality of everything except timing."""
        a, b = self.to_dict(), other.to_dict()
        a.pop("elapsed_ms")
        b.pop("elapsed_ms")
        return a == b


# Problems ------------------------------------------------------------------
#
# A problem supplies root(), prune(state) -> rule name or None, child(state, c)
# and word(state). States must be picklable for the process pool.

class Thm3Problem:
    """Backtracking for the unavoidability of imaged factors of length 6."""

    def __init__(self, listed=data.L16, rules=("R1", "R2", "R3")):
        self.rules = frozenset(rules)
        self.listed = tuple(listed)
        self._plans = [(f, complement(f)) for f in self.listed]

    def root(self):
        return ""

    def word(self, state):
        return state

    def child(self, state, c):
        return state + c

    def prune(self, w: str) -> Optional[str]:
        if "R1" in self.rules and (w.endswith("0000") or w.endswith("1111")):
            return "R1"
        if "R2" in self.rules and len(w) >= 6 and complement(w[-6:]) in w:
            return "R2"
        if "R3" in self.rules:
            arr = None
            for f, fbar in self._plans:
                if f in w or fbar in w:
                    if arr is None:
                        arr = as_array(w)
                    if suffix_match(*pattern(f), arr, len(arr), 3):
                        return "R3"
        return None


def suffix_image(w: str, f: str, min_sum: int = 3) -> Optional[Morphism]:
    """A morphism m with |m(0)| + |m(1)| >= min_sum whose m(f) is a suffix of w."""
    n = len(w)
    for length in range(len(f), n + 1):
        for a, b in _splits(f, length):
            if a + b < min_sum:
                continue
            g = w[n - length:]
            if matches_at(f, g, a, b):
                off0, off1 = _offsets(f, a, b)
                return Morphism((g[off0:off0 + a], g[off1:off1 + b]))
    return None


@dataclass
class CountState:
    word: str
    certified: frozenset
    failed: frozenset  # uncertified factors whose two maximal proper factors are certified


class Thm5Problem:
    """Prune once the current word certifiably has `target` imaged factors.

    The certified set of w holds the empty word, the unary factors of w, and
    every factor f of w with an admissible m such that m(f) is a factor of w.
    It is closed under taking factors and grows along every branch, so it is
    maintained incrementally from the parent's set.
    """

    def __init__(self, target: int = 36):
        if target < 1:
            raise ValueError("target must be at least 1")
        self.target = target

    def root(self):
        return CountState("", frozenset({""}), frozenset())

    def word(self, state):
        return state.word

    def prune(self, state: CountState) -> Optional[str]:
        return "count" if len(state.certified) >= self.target else None

    def child(self, state: CountState, c: str) -> CountState:
        w = state.word + c
        arr = as_array(w)
        n = len(w)
        target = self.target
        certified = set(state.certified)
        failed = set()
        work = []
        # a failing frontier word can only gain a witness that ends with the new letter
        for f in state.failed:
            if suffix_match(*pattern(f), arr, n, 2):
                certified.add(f)
                work.append(f)
            else:
                failed.add(f)
        if len(certified) >= target:
            # pruned anyway; the rest of the closure is never needed
            return CountState(w, frozenset(certified), frozenset())
        # new suffixes whose maximal proper factors are certified
        for k in range(1, n + 1):
            s = w[-k:]
            if s[1:] not in certified:
                break
            work.append(s[:-1])  # extensions of s[:-1] include s itself
        seen = set()
        while work:
            base = work.pop()
            for cand in (base + "0", base + "1", "0" + base, "1" + base):
                if cand in certified or cand in failed or cand in seen:
                    continue
                if cand[1:] not in certified or cand[:-1] not in certified or cand not in w:
                    continue
                seen.add(cand)
                if "0" not in cand or "1" not in cand or first_match(*pattern(cand), arr, n)[0] >= 0:
                    certified.add(cand)
                    if len(certified) >= target:
                        return CountState(w, frozenset(certified), frozenset())
                    work.append(cand)
                else:
                    failed.add(cand)
        return CountState(w, frozenset(certified), frozenset(failed))


def certified_factors(w: str) -> set[str]:
    """Non-incremental reference for Thm5Problem: every factor with a witness in w."""
    facts = {w[i:j] for i in range(len(w) + 1) for j in range(i, len(w) + 1)}
    return {f for f in facts if imaged_in_finite(f, w) is not None}


class BigSquareProblem:
    """Binary words with no square uu, |u| >= min_period."""

    def __init__(self, min_period: int = 2):
        if min_period < 1:
            raise ValueError("min_period must be at least 1")
        self.min_period = min_period

    def root(self):
        return ""

    def word(self, state):
        return state

    def child(self, state, c):
        return state + c

    def prune(self, w: str) -> Optional[str]:
        n = len(w)
        for p in range(self.min_period, n // 2 + 1):
            if w[n - p:] == w[n - 2 * p:n - p]:
                return "square"
        return None


# Driver --------------------------------------------------------------------

@dataclass
class _Tally:
    nodes: int = 0
    max_depth: int = -1
    deepest: str = ""
    fires: dict = field(default_factory=dict)
    capped: bool = False
    leaves: list = field(default_factory=list)  # (depth, word) of unpruned words at the cap

    def visit(self, w: str):
        self.nodes += 1
        if len(w) > self.max_depth:
            self.max_depth = len(w)
            self.deepest = w

    def snapshot(self) -> "_Tally":
        return _Tally(self.nodes, self.max_depth, self.deepest, dict(self.fires), self.capped)

    def absorb(self, other: "_Tally"):
        self.nodes += other.nodes
        if other.max_depth > self.max_depth:
            self.max_depth = other.max_depth
            self.deepest = other.deepest
        for k, v in other.fires.items():
            self.fires[k] = self.fires.get(k, 0) + v
        self.capped = self.capped or other.capped


def _letters(problem, w: str, cfg: SearchConfig) -> str:
    return "0" if cfg.first_letter_fixed and w == "" else "01"


def _dfs(problem, start, cfg: SearchConfig, split_at: Optional[int] = None, progress=None):
    """Depth-first walk from start; returns the tally and, with split_at, unvisited frontier states.

    With split_at, states of that depth are handed back (with a snapshot of
    the tally taken just before them) instead of being visited. progress, if
    given, is called as progress(tally, word) every PROGRESS_EVERY nodes.
    """
    tally = _Tally()
    frontier = []
    stack = [start]
    while stack:
        state = stack.pop()
        w = problem.word(state)
        if split_at is not None and len(w) == split_at:
            frontier.append((state, tally.snapshot()))
            continue
        tally.visit(w)
        if progress is not None and tally.nodes % PROGRESS_EVERY == 0:
            progress(tally, w)
        rule = problem.prune(state)
        if rule is not None:
            tally.fires[rule] = tally.fires.get(rule, 0) + 1
            continue
        if cfg.depth_cap is not None and len(w) >= cfg.depth_cap:
            tally.capped = True
            if cfg.stop_at_cap:
                break
            continue
        for c in reversed(_letters(problem, w, cfg)):
            stack.append(problem.child(state, c))
    return tally, frontier


def _run_subtree(problem, state, cfg):
    return _dfs(problem, state, cfg)[0]


def run_search(problem, cfg: SearchConfig, progress=None) -> SearchReport:
    """Run the search, optionally farming out subtrees below cfg.split_depth.

    Reports are identical whatever the worker count: subtrees are merged in
    depth-first order, and with stop_at_cap everything after the first capped
    subtree is discarded, as a sequential walk would never reach it.
    """
    t0 = time.perf_counter()
    if cfg.workers <= 1:
        tally, _ = _dfs(problem, problem.root(), cfg, progress=progress)
    else:
        split = cfg.split_depth
        if cfg.depth_cap is not None:
            split = min(split, cfg.depth_cap)
        top, frontier = _dfs(problem, problem.root(), cfg, split_at=split, progress=progress)
        if top.capped or not frontier:
            tally = top
        else:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                results = list(pool.map(_run_subtree, [problem] * len(frontier),
                                        [s for s, _ in frontier], [cfg] * len(frontier),
                                        chunksize=max(1, len(frontier) // (8 * cfg.workers))))
            tally = top
            for i, sub in enumerate(results):
                if cfg.stop_at_cap and sub.capped:
                    # a sequential walk stops here: earlier subtrees plus the top-level
                    # nodes visited before this frontier state
                    tally = frontier[i][1]
                    for prev in results[:i + 1]:
                        tally.absorb(prev)
                    break
            else:
                for sub in results:
                    tally.absorb(sub)
    outcome = CAP_EXCEEDED if tally.capped else TREE_FINITE
    return SearchReport(
        outcome=outcome,
        nodes_visited=tally.nodes,
        max_depth=max(tally.max_depth, 0),
        deepest_word=tally.deepest,
        rule_fires=tally.fires,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


def thm3_search(listed=data.L16, cfg: Optional[SearchConfig] = None, progress=None) -> SearchReport:
    cfg = cfg or SearchConfig(depth_cap=1000)
    report = run_search(Thm3Problem(listed, cfg.rules), cfg, progress)
    report.extra["rules"] = list(cfg.rules)
    return report


def thm5_search(target: int = 36, cfg: Optional[SearchConfig] = None, progress=None) -> SearchReport:
    cfg = cfg or SearchConfig(depth_cap=200)
    report = run_search(Thm5Problem(target), cfg, progress)
    report.extra["target"] = target
    return report


def max_word_without_big_squares(min_period: int = 2) -> tuple[int, list[str]]:
    """Longest binary words avoiding squares of period >= min_period, with all such words.

    Raises if the language looks infinite (no finite maximum below 64 letters).
    """
    problem = BigSquareProblem(min_period)
    best, words = 0, [""]
    stack = [""]
    while stack:
        w = stack.pop()
        if problem.prune(w) is not None:
            continue
        if len(w) > best:
            best, words = len(w), [w]
        elif len(w) == best and w:
            words.append(w)
        if len(w) >= 64:
            raise ValueError(f"squares of period >= {min_period} are avoidable beyond 64 letters")
        stack.extend((w + "1", w + "0"))
    return best, sorted(words)
