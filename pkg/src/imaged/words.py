"""Finite words over small alphabets, exact exponents and repetition detection.

Words are plain strings of ASCII digits ("0110", "" for the empty word). The
alphabet of size k is {"0", ..., str(k - 1)}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

DIGITS = "012"
_SWAP = str.maketrans("01", "10")


class NotFiniteError(ValueError):
    """Raised when an avoidance language has a member at the length cap."""


def alphabet(size: int) -> str:
    if not 1 <= size <= 3:
        raise ValueError(f"alphabet size must be 1, 2 or 3, got {size}")
    return DIGITS[:size]


def check_word(w: str, size: int) -> str:
    letters = alphabet(size)
    for c in w:
        if c not in letters:
            raise ValueError(f"symbol {c!r} outside the {size}-letter alphabet")
    return w


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse "p/q" or an integer; decimals are refused to keep comparisons exact."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"rational must be written p/q or as an integer: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def complement(w: str) -> str:
    if w.strip("01"):
        raise ValueError(f"complement needs a binary word, got {w!r}")
    return w.translate(_SWAP)


def factor_set(w: str, length: int) -> set[str]:
    if length < 0:
        raise ValueError("factor length must be non-negative")
    return {w[i:i + length] for i in range(len(w) - length + 1)}


def all_factors(w: str) -> set[str]:
    return {w[i:j] for i in range(len(w) + 1) for j in range(i, len(w) + 1)}


def words_of_length(size: int, length: int) -> Iterator[str]:
    """All words of the given length in lexicographic order."""
    letters = alphabet(size)
    if length == 0:
        yield ""
        return
    for head in words_of_length(size, length - 1):
        for c in letters:
            yield head + c


@dataclass(frozen=True)
class RepetitionWitness:
    start: int
    period: int
    length: int

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.length, self.period)

    def factor(self, w: str) -> str:
        return w[self.start:self.start + self.length]


def _exceeds(length: int, period: int, beta: Fraction) -> bool:
    return length * beta.denominator > beta.numerator * period


def find_repetition(w: str, beta: Fraction, min_period: int = 1) -> Optional[RepetitionWitness]:
    """Return a maximal repetition of period >= min_period and exponent > beta.

    Periods are tried in increasing order and, within a period, maximal runs
    from left to right. None means w is (beta+, min_period)-free.
    """
    beta = parse_rational(beta)
    if beta <= 1:
        raise ValueError("beta must exceed 1")
    if min_period < 1:
        raise ValueError("min_period must be at least 1")
    n = len(w)
    # exponent > beta > 1 forces length > period, so period < n
    for p in range(min_period, n):
        if not _exceeds(n, p, beta):
            break
        run = 0
        for i in range(n - p):
            if w[i] == w[i + p]:
                run += 1
                continue
            if run and _exceeds(run + p, p, beta):
                return RepetitionWitness(i - run, p, run + p)
            run = 0
        if run and _exceeds(run + p, p, beta):
            return RepetitionWitness(n - p - run, p, run + p)
    return None


def is_free(w: str, beta: Fraction, min_period: int = 1) -> bool:
    return find_repetition(w, beta, min_period) is None


def suffix_repetition(w: str, beta: Fraction, min_period: int = 1) -> Optional[RepetitionWitness]:
    """Like find_repetition, restricted to repetitions that are suffixes of w.

    If every proper prefix of w is free, w is free iff this returns None.
    """
    n = len(w)
    for p in range(min_period, n):
        if not _exceeds(n, p, beta):
            break
        length = p
        while length < n and w[n - 1 - length + p] == w[n - 1 - length]:
            length += 1
        # w[n-length:] has period p; the loop stops at the first mismatch
        if _exceeds(length, p, beta):
            return RepetitionWitness(n - length, p, length)
    return None


def extend_free(size: int, beta: Fraction, max_length: int) -> Iterator[str]:
    """Depth-first, lexicographic walk of all beta+-free words of length <= max_length.

    Every word is yielded once, prefixes before extensions.
    """
    beta = parse_rational(beta)
    if beta <= 1:
        raise ValueError("beta must exceed 1")
    letters = alphabet(size)
    stack = [""]
    while stack:
        w = stack.pop()
        yield w
        if len(w) == max_length:
            continue
        for c in reversed(letters):
            v = w + c
            if suffix_repetition(v, beta) is None:
                stack.append(v)


def enumerate_free(size: int, beta: Fraction, length: int) -> list[str]:
    """All beta+-free words of exactly the given length, sorted."""
    if length < 0:
        raise ValueError("length must be non-negative")
    return sorted(w for w in extend_free(size, beta, length) if len(w) == length)


def contains_any(w: str, patterns: Iterable[str]) -> Optional[str]:
    for f in patterns:
        if f in w:
            return f
    return None


def enumerate_avoiding(forbidden: Iterable[str], cap: int) -> list[str]:
    """All binary words (with the empty word) having no factor in `forbidden`.

    The extension tree is explored breadth first. NotFiniteError is raised if
    some avoiding word reaches length `cap`.
    """
    forbidden = sorted(set(forbidden))
    if not forbidden:
        raise ValueError("forbidden set must be non-empty")
    if cap < max(len(f) for f in forbidden):
        raise ValueError("cap must be at least the longest forbidden word")
    found = []
    level = [""]
    while level:
        found.extend(level)
        nxt = []
        for w in level:
            for c in "01":
                v = w + c
                # w already avoids F, so only suffixes of v can be new occurrences
                if not any(v.endswith(f) for f in forbidden):
                    nxt.append(v)
        if nxt and len(nxt[0]) >= cap:
            raise NotFiniteError(f"{nxt[0]!r} of length {cap} avoids the set; not finite within cap")
        level = nxt
    return sorted(found)
