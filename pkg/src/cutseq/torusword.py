"""Finite windows of torus cutting sequences over the letters H and V.

A window records a stretch of a biinfinite sequence; ``origin_index`` says
where ``letters[0]`` sits in the ambient indexing.  Everything here is stated
relative to the window: finite data can refute a property of the infinite
sequence but never certify one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .algebra import Number, QuadNum
from .errors import NotIsolatedError, SequenceFormatError, SlopeError, UnbalancedError

SymmetryKind = Literal["odd", "even", "almost", "none"]


@dataclass(frozen=True)
class EWord:
    letters: str
    origin_index: int = 0

    def __post_init__(self) -> None:
        if not self.letters:
            raise SequenceFormatError("an H/V word must be nonempty")
        bad = set(self.letters) - {"H", "V"}
        if bad:
            raise SequenceFormatError(f"unexpected letters {sorted(bad)} in H/V word")

    @classmethod
    def parse(cls, text: str) -> EWord:
        """Read ``HVHH|VH`` style text, ``|`` marking ambient index 0."""
        text = "".join(text.split())
        if text.count("|") > 1:
            raise SequenceFormatError("at most one '|' origin marker is allowed")
        if "|" in text:
            head, tail = text.split("|")
            return cls(head + tail, -len(head))
        return cls(text)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if self.origin_index == 0:
            return self.letters
        cut = -self.origin_index
        if 0 < cut <= len(self.letters):
            return self.letters[:cut] + "|" + self.letters[cut:]
        return self.letters


def _as_word(w: EWord | str) -> EWord:
    return w if isinstance(w, EWord) else EWord.parse(w)


# balance and complexity -----------------------------------------------------

def balance_defect(w: EWord | str) -> tuple[int, int] | None:
    """Return ``(length, spread)`` for the shortest unbalanced factor length, or None."""
    letters = _as_word(w).letters
    ones = np.frombuffer(letters.encode(), dtype=np.uint8) == ord("H")
    prefix = np.concatenate(([0], np.cumsum(ones, dtype=np.int64)))
    n = len(letters)
    for length in range(1, n + 1):
        counts = prefix[length:] - prefix[:-length]
        spread = int(counts.max() - counts.min())
        if spread > 1:
            return length, spread
    return None


def check_balanced(w: EWord | str) -> bool:
    """True iff equal-length factors differ by at most one in their H count."""
    return balance_defect(w) is None


def complexity(w: EWord | str, n: int) -> int:
    letters = _as_word(w).letters
    if n < 1 or n > len(letters):
        raise ValueError(f"factor length must lie in 1..{len(letters)}")
    return len({letters[i:i + n] for i in range(len(letters) - n + 1)})


# derivation -----------------------------------------------------------------

def isolated_letters(w: EWord | str) -> set[str]:
    letters = _as_word(w).letters
    return {c for c in "HV" if c + c not in letters}


def _blocks_between(letters: str, sep: str) -> tuple[list[int], int, int]:
    """Sizes of the runs of non-``sep`` letters strictly between consecutive ``sep``s.

    Also returns the positions of the first and last separator.
    """
    pos = [i for i, c in enumerate(letters) if c == sep]
    return [b - a - 1 for a, b in zip(pos, pos[1:])], pos[0] if pos else -1, pos[-1] if pos else -1


def _delete_per_block(letters: str, sep: str, count: int) -> tuple[str, int]:
    """Drop boundary runs of the other letter, then ``count`` letters from each run."""
    sizes, first, last = _blocks_between(letters, sep)
    if first < 0:
        raise NotIsolatedError(f"no {sep} in window; nothing separates the blocks")
    other = "H" if sep == "V" else "V"
    out = [sep]
    for size in sizes:
        out.append(other * (size - count))
        out.append(sep)
    return "".join(out), first


def derive_once(w: EWord | str) -> EWord:
    """Delete one letter from every complete block of the non-isolated letter."""
    word = _as_word(w)
    iso = isolated_letters(word)
    if len(iso) != 1:
        if not iso:
            raise NotIsolatedError(f"both HH and VV occur in {word.letters!r}")
        raise NotIsolatedError(f"both letters are isolated in {word.letters!r}")
    sep = iso.pop()
    if sep not in word.letters:
        raise NotIsolatedError(f"{word.letters!r} has a single letter type and no complete block")
    letters, first = _delete_per_block(word.letters, sep, 1)
    return EWord(letters, word.origin_index + first)


def recover_cf(w: EWord | str, k: int = 64) -> list[int]:
    """Certified leading partial quotients of ``1/m`` for a slope-``m`` window.

    At step ``i`` the runs of one letter between consecutive copies of the
    other are measured (H runs first).  A quotient ``a`` is certified only
    when run sizes ``a`` and ``a + 1`` both appear among complete runs.  At
    most ``k`` quotients are returned.
    """
    word = _as_word(w)
    if not check_balanced(word):
        raise UnbalancedError(f"{word.letters!r} is not balanced")
    letters = word.letters
    quotients: list[int] = []
    counted, sep = "H", "V"
    while len(quotients) < k:
        if "HH" not in letters and "VV" not in letters:
            if "H" in letters and "V" in letters:
                quotients.append(1)
            break
        sizes, _, _ = _blocks_between(letters, sep)
        if not sizes:
            break
        lo, hi = min(sizes), max(sizes)
        if hi - lo > 1:
            raise UnbalancedError(f"{counted}-runs of sizes {lo} and {hi} between {sep}'s")
        if hi == lo:
            break
        quotients.append(lo)
        letters, _ = _delete_per_block(letters, sep, lo)
        counted, sep = sep, counted
    return quotients


# slope parameters -----------------------------------------------------------

@dataclass(frozen=True)
class SlopeParams:
    m: QuadNum
    M_raw: int
    theta: QuadNum
    M_mod: int
    D: int

    @property
    def inv_m(self) -> QuadNum:
        return self.theta + self.M_raw

    @property
    def is_rational(self) -> bool:
        return self.m.is_rational


def slope_params(m: Number, D: int = 1) -> SlopeParams:
    """Split ``1/m`` into its integer part and the rotation parameter theta."""
    m = QuadNum.coerce(m)
    if m.sign() <= 0:
        raise SlopeError(f"slope must be positive, got {m}")
    if D < 1:
        raise SlopeError(f"D must be positive, got {D}")
    inv = m.reciprocal()
    M_raw = math.floor(inv)
    return SlopeParams(m, M_raw, inv - M_raw, M_raw % D, D)


# symmetry -------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetryVerdict:
    kind: SymmetryKind
    center: int | None = None

    def __bool__(self) -> bool:
        return self.kind != "none"


def symmetric_about(letters: str, kind: SymmetryKind, N: int) -> bool:
    """Check the mirror relation of ``kind`` at window index ``N`` on every in-window pair."""
    n = len(letters)
    if kind == "odd":
        pairs = ((N + j, N - j) for j in range(1, n))
    elif kind == "even":
        pairs = ((N + j, N - j - 1) for j in range(n))
    elif kind == "almost":
        if not (1 <= N < n) or letters[N] == letters[N - 1]:
            return False
        pairs = ((N + j, N - j - 1) for j in range(1, n))
    else:
        raise ValueError(f"unknown symmetry kind {kind!r}")
    for a, b in pairs:
        if a >= n or b < 0:
            break
        if letters[a] != letters[b]:
            return False
    return True


_ORDER = {"odd": 0, "even": 1, "almost": 2}


def classify_symmetry(w: EWord | str) -> SymmetryVerdict:
    """Find a center whose mirror relation covers the whole window.

    "Covers" means at most one letter of the window is left without a
    mirror partner.  Among several admissible answers the one leaving the
    fewest letters unmatched wins, then odd before even before almost.
    The reported center is a window index.
    """
    letters = _as_word(w).letters
    n = len(letters)
    found: list[tuple[int, int, str, int]] = []
    for N in range(n):
        if abs(n - 1 - 2 * N) <= 1 and symmetric_about(letters, "odd", N):
            found.append((abs(n - 1 - 2 * N), _ORDER["odd"], "odd", N))
    for N in range(n + 1):
        left = abs(n - 2 * N)
        if left > 1:
            continue
        if N >= 1 and symmetric_about(letters, "even", N):
            found.append((left, _ORDER["even"], "even", N))
        if symmetric_about(letters, "almost", N):
            found.append((left, _ORDER["almost"], "almost", N))
    if not found:
        return SymmetryVerdict("none")
    _, _, kind, N = min(found)
    return SymmetryVerdict(kind, N)  # type: ignore[arg-type]


def is_periodic_window(w: EWord | str, min_periods: int = 2) -> int | None:
    """Smallest period ``p`` such that the window shows at least ``min_periods`` copies."""
    letters = _as_word(w).letters
    n = len(letters)
    for p in range(1, n // min_periods + 1):
        if all(letters[i] == letters[i - p] for i in range(p, n)):
            return p
    return None
