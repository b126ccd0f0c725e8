"""Square-tiled surfaces given by a pair of gluing permutations.

Square ``lam`` has its right edge glued to the left edge of ``h(lam)`` and its
top edge glued to the bottom edge of ``v(lam)``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Literal, NamedTuple

from .algebra import Permutation, cycle_lcm, perm_from_cycles
from .errors import (
    CycleNotationError,
    DisconnectedSurfaceError,
    SequenceFormatError,
    SurfaceFormatError,
)

Quadrant = Literal["NE", "NW", "SE", "SW"]


class EdgeLetter(str, Enum):
    H = "H"
    V = "V"

    def __str__(self) -> str:
        return self.value


H = EdgeLetter.H
V = EdgeLetter.V


class CutSym(NamedTuple):
    """One crossing: the square entered and the kind of edge crossed."""

    square: int
    edge: EdgeLetter

    def __str__(self) -> str:
        return f"{self.square}{self.edge.value}"


@dataclass(frozen=True)
class Surface:
    h: Permutation
    v: Permutation
    bad: frozenset[int] = field(init=False)
    D: int = field(init=False)

    def __post_init__(self) -> None:
        if self.h.degree != self.v.degree:
            raise SurfaceFormatError("h and v must act on the same number of squares")
        h, v = self.h, self.v
        bad = frozenset(lam for lam in range(1, h.degree + 1) if v(h(lam)) != h(v(lam)))
        object.__setattr__(self, "bad", bad)
        object.__setattr__(self, "D", cycle_lcm(h))

    @property
    def d(self) -> int:
        return self.h.degree

    @property
    def labels(self) -> range:
        return range(1, self.d + 1)

    @cached_property
    def good(self) -> frozenset[int]:
        return frozenset(self.labels) - self.bad

    @cached_property
    def vh(self) -> Permutation:
        return self.v * self.h

    @cached_property
    def hv(self) -> Permutation:
        return self.h * self.v

    def vh_power(self, k: int) -> Permutation:
        """The map ``lam -> v(h^k(lam))``; ``k`` only matters modulo ``D``."""
        k %= self.D
        cache = self.__dict__.setdefault("_vh_powers", {})
        if k not in cache:
            cache[k] = self.v * self.h ** k
        return cache[k]

    def act(self, e: EdgeLetter | str, lam: int) -> int:
        return act(e, lam, self)

    def __str__(self) -> str:
        return f"d = {self.d}\nh = {self.h}\nv = {self.v}"


def _orbit(h: Permutation, v: Permutation, start: int = 1) -> set[int]:
    gens = (h, v, h.inverse(), v.inverse())
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g(x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def is_transitive(h: Permutation, v: Permutation) -> bool:
    return len(_orbit(h, v)) == h.degree


def build_surface(h: Permutation, v: Permutation) -> Surface:
    """Validate connectivity and return the surface with ``D`` and ``bad`` filled in."""
    if h.degree != v.degree:
        raise SurfaceFormatError(f"h has degree {h.degree} but v has degree {v.degree}")
    orbit = _orbit(h, v)
    if len(orbit) != h.degree:
        missing = sorted(set(range(1, h.degree + 1)) - orbit)
        raise DisconnectedSurfaceError(
            f"<h, v> is not transitive: squares {missing} unreachable from square 1")
    return Surface(h, v)


def surface_from_cycles(h: str, v: str, d: int | None = None) -> Surface:
    if d is None:
        labels = [int(t) for t in re.findall(r"\d+", h + " " + v)]
        d = max(labels, default=1)
    return build_surface(perm_from_cycles(h, d), perm_from_cycles(v, d))


def classify_squares(s: Surface) -> tuple[frozenset[int], frozenset[int]]:
    return s.good, s.bad


def act(e: EdgeLetter | str, lam: int, s: Surface) -> int:
    e = EdgeLetter(e)
    return s.h(lam) if e is EdgeLetter.H else s.v(lam)


def quadrant_transform(s: Surface, quadrant: Quadrant | str) -> Surface:
    """Reflect the surface so that flow in ``quadrant`` becomes north-east flow."""
    q = quadrant.upper()
    if q == "NE":
        return s
    if q == "NW":
        return Surface(s.h.inverse(), s.v)
    if q == "SE":
        return Surface(s.h, s.v.inverse())
    if q == "SW":
        return Surface(s.h.inverse(), s.v.inverse())
    raise ValueError(f"unknown quadrant {quadrant!r}")


# named fixtures used across tests and the CLI

def torus() -> Surface:
    return surface_from_cycles("(1)", "(1)", 1)


def l_surface() -> Surface:
    """Three squares in an L; every corner is the cone point."""
    return surface_from_cycles("(1)(2 3)", "(1 2)(3)", 3)


def six_square_example() -> Surface:
    return surface_from_cycles("(1)(2 3 4)(5 6)", "(1 2)(3 5)(4 6)", 6)


# text format --------------------------------------------------------------

_LINE_RE = re.compile(r"^\s*([dhv])\s*=\s*(.*?)\s*$")


def parse_surface(text: str) -> Surface:
    """Read ``d = ..``, ``h = ..`` and ``v = ..`` lines; ``#`` starts a comment."""
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise SurfaceFormatError(f"line {lineno}: expected 'd =', 'h =' or 'v =', got {raw!r}")
        key, value = m.groups()
        if key in fields:
            raise SurfaceFormatError(f"line {lineno}: duplicate {key!r}")
        fields[key] = value
    if "h" not in fields or "v" not in fields:
        raise SurfaceFormatError("surface file needs both 'h =' and 'v =' lines")
    d: int | None = None
    if "d" in fields:
        try:
            d = int(fields["d"])
        except ValueError as exc:
            raise SurfaceFormatError(f"invalid square count {fields['d']!r}") from exc
        if d < 1:
            raise SurfaceFormatError("square count must be positive")
    try:
        return surface_from_cycles(fields["h"], fields["v"], d)
    except CycleNotationError as exc:
        raise SurfaceFormatError(str(exc)) from exc


def load_surface(path: str | Path) -> Surface:
    return parse_surface(Path(path).read_text())


def format_surface(s: Surface) -> str:
    return f"d = {s.d}\nh = {s.h}\nv = {s.v}\n"


# labeled windows ------------------------------------------------------------

_TOKEN_RE = re.compile(r"^(\d+)([HV])$")


@dataclass(frozen=True)
class LabeledSeq:
    """A finite window of ``(square, edge)`` crossings."""

    symbols: tuple[CutSym, ...]
    origin_index: int = 0

    def __post_init__(self) -> None:
        if not self.symbols:
            raise SequenceFormatError("a labeled sequence must be nonempty")
        object.__setattr__(self, "symbols", tuple(
            s if isinstance(s, CutSym) else CutSym(int(s[0]), EdgeLetter(s[1]))
            for s in self.symbols))

    @classmethod
    def parse(cls, text: str) -> LabeledSeq:
        """Read whitespace-separated tokens like ``2V 3H | 2H``."""
        symbols: list[CutSym] = []
        origin = None
        for tok in text.replace("|", " | ").split():
            if tok == "|":
                if origin is not None:
                    raise SequenceFormatError("at most one '|' origin marker is allowed")
                origin = len(symbols)
                continue
            m = _TOKEN_RE.match(tok.upper())
            if m is None:
                raise SequenceFormatError(f"malformed token {tok!r}; expected e.g. '3H'")
            symbols.append(CutSym(int(m.group(1)), EdgeLetter(m.group(2))))
        if not symbols:
            raise SequenceFormatError("no symbols found")
        return cls(tuple(symbols), -(origin or 0))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    @property
    def eps(self) -> str:
        return "".join(s.edge.value for s in self.symbols)

    @property
    def squares(self) -> list[int]:
        return [s.square for s in self.symbols]

    def check_labels(self, d: int) -> None:
        for i, sym in enumerate(self.symbols):
            if not 1 <= sym.square <= d:
                raise SequenceFormatError(f"symbol {i} uses square {sym.square} outside 1..{d}")

    def __str__(self) -> str:
        return " ".join(map(str, self.symbols))
