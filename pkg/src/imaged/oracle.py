"""Factor membership for images of all alpha+-free words under a uniform morphism.

A factor of length at most L of such an image lies inside the image of a
pre-image factor of ceil(L/q) + 1 letters, so images of every alpha+-free
window of that length cover the whole factor language up to L.
"""

from __future__ import annotations

import bisect
import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .morphisms import Morphism, MorphismError, apply, uniform_width
from .words import complement, enumerate_free, format_rational, parse_rational

SEP = "|"


class QueryTooLong(ValueError):
    pass


def window_length(max_len: int, q: int) -> int:
    return math.ceil(max_len / q) + 1


def _digest(m: Morphism) -> str:
    return hashlib.sha256(m.dumps().encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SquareInventory:
    roots: dict[int, frozenset[str]]

    @property
    def max_period(self) -> int:
        return max(self.roots, default=0)

    def all_roots(self) -> list[str]:
        return sorted((u for us in self.roots.values() for u in us), key=lambda u: (len(u), u))

    def __len__(self) -> int:
        return sum(len(us) for us in self.roots.values())

    def __contains__(self, u: str) -> bool:
        return u in self.roots.get(len(u), ())


class FactorOracle:
    """Exact factor membership, up to max_len, for the union image language."""

    def __init__(self, morphism: Morphism, alpha: Fraction, max_len: int,
                 windows: Sequence[str]):
        self.morphism = morphism
        self.alpha = alpha
        self.max_len = max_len
        self.windows = list(windows)
        self.images = [apply(morphism, y) for y in self.windows]
        self.text = SEP.join(self.images)
        self._offsets = []
        pos = 0
        for img in self.images:
            self._offsets.append(pos)
            pos += len(img) + 1

    @classmethod
    def build(cls, m: Morphism, alpha, max_len: int,
              cache_dir: Optional[str | Path] = None) -> "FactorOracle":
        alpha = parse_rational(alpha)
        q = uniform_width(m)
        if q is None:
            raise MorphismError("not uniform")
        if not 1 < alpha < 2:
            raise ValueError("alpha must lie strictly between 1 and 2")
        if max_len < 0:
            raise ValueError("max_len must be non-negative")
        if max_len == 0:
            return cls(m, alpha, 0, [])
        size = window_length(max_len, q)
        windows = None
        cache = None
        if cache_dir is not None:
            cache = Path(cache_dir) / f"{_digest(m)}_{alpha.numerator}-{alpha.denominator}_{size}.txt"
            if cache.exists():
                windows = cache.read_text().split()
        if windows is None:
            windows = enumerate_free(m.source_size, alpha, size)
            if cache is not None:
                cache.parent.mkdir(parents=True, exist_ok=True)
                cache.write_text("".join(y + "\n" for y in windows))
        if not windows:
            raise ValueError(f"no {format_rational(alpha)}+-free pre-image of length {size}")
        return cls(m, alpha, max_len, windows)

    @property
    def window(self) -> int:
        return len(self.windows[0]) if self.windows else 0

    def _check(self, v: str):
        if len(v) > self.max_len:
            raise QueryTooLong(f"query of length {len(v)} exceeds oracle max_len {self.max_len}")

    def is_factor(self, v: str) -> bool:
        self._check(v)
        if not v:
            return True
        return v in self.text

    __contains__ = is_factor

    def occurrences(self, v: str, limit: Optional[int] = None) -> list[int]:
        """Start positions of v in the concatenated window images (overlapping), up to limit."""
        self._check(v)
        out = []
        i = self.text.find(v)
        while i >= 0 and (limit is None or len(out) < limit):
            out.append(i)
            i = self.text.find(v, i + 1)
        return out

    def witness(self, v: str) -> Optional[tuple[str, int]]:
        """A pre-image window y and offset i with apply(m, y)[i:i+len(v)] == v."""
        self._check(v)
        if not self.images:
            return ("", 0) if not v else None
        pos = self.text.find(v)
        if pos < 0:
            return None
        k = bisect.bisect_right(self._offsets, pos) - 1
        return self.windows[k], pos - self._offsets[k]

    def factors_of_length(self, length: int) -> set[str]:
        self._check("x" * length)
        if length == 0:
            return {""}
        out = set()
        for img in self.images:
            out.update(img[i:i + length] for i in range(len(img) - length + 1))
        return out

    def square_roots(self, max_period: int) -> SquareInventory:
        """Every u with 1 <= |u| <= max_period and uu in the language."""
        if 2 * max_period > self.max_len:
            raise QueryTooLong(f"squares of period {max_period} need max_len >= {2 * max_period}")
        roots: dict[int, set[str]] = {p: set() for p in range(1, max_period + 1)}
        for img in self.images:
            a = np.frombuffer(img.encode(), dtype=np.uint8)
            n = len(a)
            for p in range(1, min(max_period, n // 2) + 1):
                eq = np.concatenate(([0], np.cumsum(a[:-p] == a[p:])))
                # uu at i iff a[j] == a[j + p] for all j in [i, i + p)
                starts = np.flatnonzero(eq[p:n - p + 1] - eq[:n - 2 * p + 1] == p)
                roots[p].update(img[i:i + p] for i in starts.tolist())
        return SquareInventory({p: frozenset(us) for p, us in roots.items() if us})

    def check_avoids(self, forbidden: Iterable[str]) -> Optional[str]:
        """None if no forbidden word is a factor, else the first offender in sorted order."""
        for f in sorted(forbidden, key=lambda x: (len(x), x)):
            if self.is_factor(f):
                return f
        return None

    def check_no_complement_pairs(self, length: int) -> Optional[tuple[str, str]]:
        facts = self.factors_of_length(length)
        for f in sorted(facts):
            g = complement(f)
            if g in facts:
                return f, g
        return None

    def check_length_cover(self, length: int, requirement: Iterable[Iterable[str]]) -> Optional[str]:
        """Every length-`length` factor must contain all words of at least one clause."""
        clauses = [tuple(c) for c in requirement]
        for f in sorted(self.factors_of_length(length)):
            if not any(all(u in f for u in clause) for clause in clauses):
                return f
        return None
