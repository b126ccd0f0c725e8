"""Exact straight-line tracer on square-tiled surfaces.

The tracer is square-local.  Inside the current square it only tracks the
height ``r`` at which the line would meet the right edge.  ``r < 1`` means
the right edge comes first, ``r > 1`` the top edge, and ``r == 1`` the
upper-right corner.  Crossing right adds ``m`` to ``r``; crossing up
subtracts 1.  That is the whole geometry for north-east flow, and it
keeps every number in one lattice fixed by the start point and the slope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .algebra import Number, QuadNum
from .errors import TraceError
from .iet import SkewState
from .surface import CutSym, EdgeLetter, LabeledSeq, Surface, quadrant_transform

H, V = EdgeLetter.H, EdgeLetter.V
Convention = Literal["HV", "VH"]
Terminal = Literal["ran_to_length", "singularity_hit"]

_ONE = QuadNum(1)
_ZERO = QuadNum(0)


@dataclass(frozen=True)
class GeoState:
    square: int
    x: QuadNum
    y: QuadNum
    slope: QuadNum

    def __post_init__(self) -> None:
        for name in ("x", "y", "slope"):
            object.__setattr__(self, name, QuadNum.coerce(getattr(self, name)))
        if not (_ZERO <= self.x <= _ONE and _ZERO <= self.y <= _ONE):
            raise TraceError(f"start ({self.x}, {self.y}) lies outside the unit square")
        if self.slope.sign() <= 0:
            raise TraceError("slope must be positive; reflect other directions first")


@dataclass(frozen=True)
class Segment:
    square: int
    x0: QuadNum
    y0: QuadNum
    x1: QuadNum
    y1: QuadNum


@dataclass
class TraceResult:
    symbols: list[CutSym]
    terminal: Terminal
    hit_square: int | None = None
    corners: list[tuple[int, int]] = field(default_factory=list)
    """``(index, square)`` for every good corner passed; ``index`` is the
    position of the first of its two symbols."""
    initial: int = 0
    """How many leading symbols record the start point itself."""
    segments: list[Segment] | None = None
    entry_square: int | None = None
    """The square the line occupies before its first recorded crossing."""

    @property
    def eps(self) -> str:
        return "".join(s.edge.value for s in self.symbols)

    def as_seq(self) -> LabeledSeq:
        return LabeledSeq(tuple(self.symbols))


def _corner_pair(s: Surface, lam: int, convention: Convention) -> tuple[CutSym, CutSym]:
    if convention == "HV":
        return CutSym(s.h(lam), H), CutSym(s.vh(lam), V)
    return CutSym(s.v(lam), V), CutSym(s.hv(lam), H)


def trace(s: Surface, start: GeoState, n_symbols: int, corner_convention: Convention = "HV",
          *, stop_at_corner: bool = False, emit_segments: bool = False) -> TraceResult:
    """Follow the north-east line through ``start`` for ``n_symbols`` crossings.

    A start on the left or bottom edge records that crossing first; a start
    at the lower-left vertex records the pair of symbols that ends there.
    Passing a bad upper-right corner ends the trace.
    """
    if corner_convention not in ("HV", "VH"):
        raise TraceError(f"corner convention must be HV or VH, got {corner_convention!r}")
    if not 1 <= start.square <= s.d:
        raise TraceError(f"square {start.square} is not in 1..{s.d}")
    m = start.slope
    lam, x, y = start.square, start.x, start.y
    out: list[CutSym] = []
    corners: list[tuple[int, int]] = []
    segs: list[Segment] | None = [] if emit_segments else None
    entry = lam

    def done(terminal: Terminal, hit: int | None = None, initial: int = 0) -> TraceResult:
        return TraceResult(out[:n_symbols], terminal, hit, corners, min(initial, n_symbols),
                           segs, entry)

    if x == _ONE and y == _ONE:
        r = _ONE  # on the upper-right corner of lam: handled by the main loop
        at_corner = True
    else:
        at_corner = False
        if x == _ONE:
            lam, x = s.h(lam), _ZERO
        if y == _ONE:
            lam, y = s.v(lam), _ZERO
        if x == _ZERO and y == _ZERO:
            entry = s.h.inverse()(s.v.inverse()(lam))
            if entry in s.bad:
                return done("singularity_hit", entry)
            out.extend(_corner_pair(s, entry, corner_convention))
            corners.append((0, entry))
        elif y == _ZERO:
            entry = s.v.inverse()(lam)
            out.append(CutSym(lam, V))
        elif x == _ZERO:
            entry = s.h.inverse()(lam)
            out.append(CutSym(lam, H))
        else:
            entry = lam
        r = y + m * (_ONE - x)
    initial = 2 if at_corner else len(out)
    if stop_at_corner and corners:
        return done("ran_to_length", initial=initial)

    while len(out) < n_symbols:
        c = r._cmp(_ONE)
        if c < 0:
            if segs is not None:
                segs.append(Segment(lam, x, y, _ONE, r))
                x, y = _ZERO, r
            lam = s.h(lam)
            out.append(CutSym(lam, H))
            r = r + m
        elif c > 0:
            if segs is not None:
                x1 = x + (_ONE - y) / m
                segs.append(Segment(lam, x, y, x1, _ONE))
                x, y = x1, _ZERO
            lam = s.v(lam)
            out.append(CutSym(lam, V))
            r = r - 1
        else:
            if segs is not None:
                segs.append(Segment(lam, x, y, _ONE, _ONE))
                x, y = _ZERO, _ZERO
            if lam in s.bad:
                return done("singularity_hit", lam, initial)
            corners.append((len(out), lam))
            out.extend(_corner_pair(s, lam, corner_convention))
            lam = s.vh(lam)
            r = m
            if stop_at_corner and len(out) > initial:
                break
    return done("ran_to_length", initial=initial)


def trace_from(s: Surface, square: int, x: Number, y: Number, m: Number, n: int,
               corner_convention: Convention = "HV", **kw) -> TraceResult:
    return trace(s, GeoState(square, QuadNum.coerce(x), QuadNum.coerce(y), QuadNum.coerce(m)),
                 n, corner_convention, **kw)


def trace_backward(s: Surface, start: GeoState, n_symbols: int,
                   corner_convention: Convention = "HV") -> TraceResult:
    """Symbols crossed before reaching ``start``, in forward-time order.

    This flows forward on the half-turn rotated surface and undoes the
    rotation: each crossing is relabeled with the square it enters in
    forward time, and the list is reversed.  Crossings at the start point
    itself belong to the forward trace and are dropped here.
    """
    flip: Convention = "VH" if corner_convention == "HV" else "HV"
    rotated = quadrant_transform(s, "SW")
    st = GeoState(start.square, _ONE - start.x, _ONE - start.y, start.slope)
    res = trace(rotated, st, n_symbols + 2, flip)
    k0 = res.initial
    visited = [res.entry_square] + [sym.square for sym in res.symbols]
    records = [CutSym(visited[i], sym.edge) for i, sym in enumerate(res.symbols)]
    records = records[k0:k0 + n_symbols]
    size = len(records)
    # a rotated upper-right corner of sq is the original corner above-right of below_left(sq)
    h_inv, v_inv = s.h.inverse(), s.v.inverse()

    def below_left(sq: int) -> int:
        return h_inv(v_inv(sq))

    corners = sorted((size - 2 - (i - k0), below_left(sq)) for i, sq in res.corners
                     if i >= k0 and i - k0 + 1 < size)
    singular = res.terminal == "singularity_hit" and len(res.symbols) - k0 < n_symbols
    records.reverse()
    hit = below_left(res.hit_square) if singular and res.hit_square is not None else None
    return TraceResult(records, "singularity_hit" if singular else "ran_to_length", hit, corners)


def bidirectional_window(s: Surface, start: GeoState, n_back: int, n_fwd: int,
                         corner_convention: Convention = "HV") -> tuple[LabeledSeq, int]:
    """Window of crossings on both sides of ``start``; also the index of the first forward one."""
    back = trace_backward(s, start, n_back, corner_convention)
    fwd = trace(s, start, n_fwd, corner_convention)
    symbols = list(back.symbols) + list(fwd.symbols)
    return LabeledSeq(tuple(symbols), -len(back.symbols)), len(back.symbols)


def first_return_oracle(s: Surface, m: Number, x0: Number, lam0: int) -> SkewState | None:
    """Flow up from ``(x0, 0)`` in square ``lam0`` until the next bottom edge.

    Returns None when the line runs into a cone point first.
    """
    m = QuadNum.coerce(m)
    x0 = QuadNum.coerce(x0)
    if not (_ZERO <= x0 < _ONE):
        raise TraceError(f"x0 = {x0} is not in [0, 1)")
    lam = lam0
    r = m * (_ONE - x0)
    while True:
        c = r._cmp(_ONE)
        if c < 0:
            lam = s.h(lam)
            r = r + m
        elif c > 0:
            return SkewState(_ONE - (r - 1) / m, s.v(lam))
        else:
            if lam in s.bad:
                return None
            return SkewState(_ZERO, s.vh(lam))
