"""Morphisms between small alphabets and the freeness transfer check for uniform ones."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .words import (
    RepetitionWitness,
    alphabet,
    check_word,
    format_rational,
    parse_rational,
    suffix_repetition,
)


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    """A morphism given by one image word per source symbol (images[i] is the image of str(i))."""

    images: tuple[str, ...]
    target_size: int = 2

    def __post_init__(self):
        alphabet(len(self.images))
        for img in self.images:
            check_word(img, self.target_size)

    @classmethod
    def from_images(cls, images: Iterable[str], target_size: Optional[int] = None) -> "Morphism":
        images = tuple(images)
        if target_size is None:
            used = "".join(images)
            target_size = max(2, int(max(used)) + 1) if used else 2
        return cls(images, target_size)

    @classmethod
    def parse(cls, text: str) -> "Morphism":
        """Parse either the compact binary form "IMG0/IMG1" or "SYMBOL -> IMAGE" lines."""
        s = text.strip()
        if "->" not in s:
            parts = s.split("/")
            if len(parts) != 2:
                raise MorphismError(f"expected IMAGE0/IMAGE1, got {text!r}")
            return cls.from_images(p.strip() for p in parts)
        rules: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            lhs, sep, rhs = line.partition("->")
            lhs, rhs = lhs.strip(), rhs.strip()
            if not sep or len(lhs) != 1 or not lhs.isdigit():
                raise MorphismError(f"line {lineno}: expected 'SYMBOL -> IMAGE'")
            if lhs in rules:
                raise MorphismError(f"line {lineno}: symbol {lhs} defined twice")
            rules[lhs] = rhs
        if sorted(rules) != list(alphabet(len(rules))):
            raise MorphismError(f"source symbols must be 0..k-1, got {sorted(rules)}")
        return cls.from_images(rules[c] for c in sorted(rules))

    def dumps(self) -> str:
        return "".join(f"{i} -> {img}\n" for i, img in enumerate(self.images))

    def compact(self) -> str:
        return "/".join(self.images)

    def __str__(self) -> str:
        return self.compact()

    def __call__(self, w: str) -> str:
        return apply(self, w)

    @property
    def source_size(self) -> int:
        return len(self.images)

    @property
    def non_erasing(self) -> bool:
        return all(self.images)

    @property
    def is_identity(self) -> bool:
        return all(img == str(i) for i, img in enumerate(self.images))

    @property
    def is_complementary(self) -> bool:
        return self.images == ("1", "0")

    @property
    def admissible(self) -> bool:
        return self.non_erasing and not self.is_identity

    @property
    def neat(self) -> bool:
        return self.admissible and not self.is_complementary

    def swapped(self) -> "Morphism":
        """For binary sources, the morphism with the two images exchanged."""
        if self.source_size != 2:
            raise MorphismError("swapped() needs a binary source alphabet")
        return Morphism(self.images[::-1], self.target_size)


def apply(m: Morphism, w: str) -> str:
    imgs = m.images
    try:
        return "".join([imgs[int(c)] for c in w])
    except (IndexError, ValueError):
        raise MorphismError(f"{w!r} is not over the {m.source_size}-letter source alphabet") from None


def classify(m: Morphism) -> set[str]:
    flags = set()
    if not m.non_erasing:
        flags.add("erasing")
    if m.is_identity:
        flags.add("identity")
    if m.is_complementary:
        flags.add("complementary")
    if m.admissible:
        flags.add("admissible")
    if m.neat:
        flags.add("neat")
    return flags


def uniform_width(m: Morphism) -> Optional[int]:
    widths = {len(img) for img in m.images}
    if len(widths) == 1:
        q = widths.pop()
        return q if q > 0 else None
    return None


def is_synchronizing(m: Morphism) -> bool:
    if not m.non_erasing:
        raise MorphismError("synchronization is only defined here for non-erasing morphisms")
    k = m.source_size
    for a in range(k):
        for b in range(k):
            block = m.images[a] + m.images[b]
            for c in range(k):
                img = m.images[c]
                i = block.find(img)
                while i != -1:
                    flush_left = i == 0 and a == c
                    flush_right = i + len(img) == len(block) and b == c
                    if not (flush_left or flush_right):
                        return False
                    i = block.find(img, i + 1)
    return True


def sync_bound(alpha, beta, q: int) -> Fraction:
    """max(2b/(b-a), 2(q-1)(2b-1)/(q(b-1))): pre-images shorter than this must be checked."""
    alpha, beta = parse_rational(alpha), parse_rational(beta)
    if not 1 < alpha < beta < 2:
        raise MorphismError(f"need 1 < alpha < beta < 2, got {alpha}, {beta}")
    if q < 1:
        raise MorphismError("width must be positive")
    first = 2 * beta / (beta - alpha)
    second = Fraction(2 * (q - 1) * (2 * beta - 1), q) / (beta - 1)
    return max(first, second)


def longest_below(bound: Fraction) -> int:
    """Largest integer strictly less than bound."""
    return math.ceil(bound) - 1


@dataclass
class TransferReport:
    passed: bool
    bound: Fraction
    words_checked: int
    max_length: int
    counterexample: Optional[tuple[str, RepetitionWitness]] = None
    by_length: dict[int, int] = field(default_factory=dict)
    synchronizing: bool = True

    @property
    def lemma_applies(self) -> bool:
        """True when the premise holds and the morphism meets the lemma's hypotheses."""
        return self.passed and self.synchronizing

    def to_dict(self) -> dict:
        d = {
            "pass": self.passed,
            "bound": format_rational(self.bound),
            "words_checked": self.words_checked,
            "max_length": self.max_length,
            "by_length": {str(k): v for k, v in sorted(self.by_length.items())},
            "synchronizing": self.synchronizing,
            "lemma_applies": self.lemma_applies,
        }
        if self.counterexample is not None:
            pre, wit = self.counterexample
            d["counterexample"] = {
                "preimage": pre,
                "start": wit.start,
                "period": wit.period,
                "length": wit.length,
                "exponent": format_rational(wit.exponent),
            }
        return d


class _BlockScanner:
    """Appends image blocks of a q-uniform morphism and reports new (beta+, n)-repetitions.

    For every period p the scanner carries `carry[p]`, the number of trailing
    positions j with w[j] == w[j - p]; a repetition of period p ending at j
    has length run + p. When a block h(a) is appended at s = d*q, for p <= s
    the compared window w[s-p : s-p+q] is (h(b) h(c))[r : r+q] with
    r = (s-p) mod q, so the first and last mismatch rows and the longest run
    after a mismatch come from a table indexed by (a, b, c, r). Periods
    p > s are compared directly.
    """

    def __init__(self, images: Sequence[str], beta: Fraction, min_period: int, max_blocks: int):
        self.q = q = len(images[0])
        self.k = k = len(images)
        self.num = beta.numerator
        self.den = beta.denominator
        self.n = min_period
        self.blocks = np.array([[int(c) for c in img] for img in images], dtype=np.int8)
        self.buf = np.zeros(q * max(max_blocks, 1), dtype=np.int8)
        self.pre = np.zeros(max(max_blocks, 1), dtype=np.intp)
        rows = np.arange(q)
        shape = (k, k, k, q)
        self.first = np.empty(shape, dtype=np.int64)
        self.last = np.empty(shape, dtype=np.int64)
        self.gap = np.empty(shape, dtype=np.int64)
        self.gap_end = np.empty(shape, dtype=np.int64)
        for b in range(k):
            for c in range(k):
                pair = np.concatenate((self.blocks[b], self.blocks[c]))
                windows = np.lib.stride_tricks.sliding_window_view(pair, q)[:q]  # [r, row]
                for a in range(k):
                    miss = windows != self.blocks[a][None, :]
                    any_miss = miss.any(axis=1)
                    self.first[a, b, c] = np.where(any_miss, miss.argmax(axis=1), q)
                    self.last[a, b, c] = np.where(any_miss, q - 1 - miss[:, ::-1].argmax(axis=1), -1)
                    last_miss = np.maximum.accumulate(np.where(miss, rows[None, :], -1), axis=1)
                    runs = np.where(last_miss >= 0, rows[None, :] - last_miss, 0)
                    self.gap[a, b, c] = runs.max(axis=1)
                    self.gap_end[a, b, c] = runs.argmax(axis=1)

    def _bad(self, runs: np.ndarray, periods: np.ndarray) -> np.ndarray:
        return (runs + periods) * self.den > self.num * periods

    def push(self, d: int, a: int, carry: np.ndarray):
        """Append h(a) as block d; return (new carry, first violating witness or None)."""
        q = self.q
        s = d * q
        self.pre[d] = a
        self.buf[s:s + q] = self.blocks[a]
        new_carry = carry.copy()
        found = []

        lo = self.n
        if lo <= s:
            periods = np.arange(lo, s + 1)
            back = s - periods
            e = back // q
            r = back - e * q
            b = self.pre[e]
            c = self.pre[np.minimum(e + 1, d)]
            first = self.first[a, b, c, r]
            last = self.last[a, b, c, r]
            gap = self.gap[a, b, c, r]
            old = carry[periods]
            head = old + first  # run ending just before the first mismatch (or at block end)
            new_carry[periods] = np.where(last >= 0, q - 1 - last, old + q)
            bad_head = self._bad(head, periods) & (head > 0)
            bad_gap = self._bad(gap, periods) & (gap > 0)
            for mask, kind in ((bad_head, "head"), (bad_gap, "gap")):
                idx = np.flatnonzero(mask)
                if len(idx):
                    i = idx[0]
                    p = int(periods[i])
                    if kind == "head":
                        run, end = int(head[i]), s + int(first[i]) - 1
                    else:
                        run, end = int(gap[i]), s + int(self.gap_end[a, b[i], c[i], r[i]])
                    found.append(RepetitionWitness(end + 1 - run - p, p, run + p))

        hi = s + q  # periods must stay below the image length
        plo = max(lo, s + 1)
        if plo < hi:
            periods = np.arange(plo, hi)
            rows = np.arange(q)[:, None]
            back = s + rows - periods[None, :]
            eq = (back >= 0) & (self.buf[np.maximum(back, 0)] == self.blocks[a][:, None])
            last_miss = np.maximum.accumulate(np.where(eq, -1, rows), axis=0)
            run = np.where(last_miss >= 0, rows - last_miss, rows + 1)
            new_carry[periods] = run[-1]
            bad = self._bad(run, periods[None, :])
            if bad.any():
                j, k = np.argwhere(bad.T)[0]
                p = int(periods[j])
                length = int(run[k, j]) + p
                found.append(RepetitionWitness(s + int(k) + 1 - length, p, length))

        if found:
            return new_carry, min(found, key=lambda w: (w.period, w.start))
        return new_carry, None


def _scan_subtree(m: Morphism, alpha: Fraction, beta: Fraction, min_period: int,
                  max_len: int, prefix: str):
    """Walk the alpha+-free words of length <= max_len that extend prefix."""
    q = uniform_width(m)
    scanner = _BlockScanner(m.images, beta, min_period, max_len)
    letters = alphabet(m.source_size)
    by_length: dict[int, int] = {}
    carry = np.zeros(q * max(max_len, 1) + 1, dtype=np.int64)
    for d, c in enumerate(prefix[:-1]):
        carry, _ = scanner.push(d, int(c), carry)
    stack = [(prefix, carry)]
    while stack:
        w, carry = stack.pop()
        by_length[len(w)] = by_length.get(len(w), 0) + 1
        if w:
            carry, wit = scanner.push(len(w) - 1, int(w[-1]), carry)
            if wit is not None:
                return by_length, (w, wit)
        if len(w) == max_len:
            continue
        for c in reversed(letters):
            v = w + c
            if suffix_repetition(v, alpha) is None:
                stack.append((v, carry))
    return by_length, None


def verify_transfer(m: Morphism, alpha, beta, min_period: int, workers: int = 1,
                    require_sync: bool = True) -> TransferReport:
    """Check the image of every alpha+-free word shorter than the sync bound for (beta+, n)-freeness.

    Passing licenses freeness of the image of every alpha+-free word, finite
    or infinite, provided m is uniform and synchronizing; both are checked here.
    With require_sync=False a non-synchronizing morphism is not rejected: the
    finite premise is still checked and the report's `synchronizing` flag is
    False, so `lemma_applies` stays False.
    """
    alpha, beta = parse_rational(alpha), parse_rational(beta)
    q = uniform_width(m)
    if q is None:
        raise MorphismError("not uniform")
    synchronizing = is_synchronizing(m)
    if require_sync and not synchronizing:
        raise MorphismError("not synchronizing")
    if min_period < 1:
        raise MorphismError("min period must be positive")
    bound = sync_bound(alpha, beta, q)
    max_len = longest_below(bound)
    prefixes = [""] if workers <= 1 else list(alphabet(m.source_size))
    jobs = [(m, alpha, beta, min_period, max_len, p) for p in prefixes]
    if workers <= 1:
        results = [_scan_subtree(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_subtree, *zip(*jobs)))
    by_length: dict[int, int] = {}
    counterexample = None
    if workers > 1:
        by_length[0] = 1
    for counts, cex in results:
        for k, v in counts.items():
            by_length[k] = by_length.get(k, 0) + v
        if cex is not None and counterexample is None:
            counterexample = cex
    return TransferReport(
        passed=counterexample is None,
        bound=bound,
        words_checked=sum(by_length.values()),
        max_length=max_len,
        counterexample=counterexample,
        by_length=by_length,
        synchronizing=synchronizing,
    )
