"""Interval exchange transformations with exact endpoints.

Besides generic IETs this builds the first-return map of north-east flow
to the bottom edges of a square-tiled surface, both as a skew product over
a circle rotation and as an honest IET on ``[0, d)``.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass
from typing import Hashable, Iterable, Literal, Mapping, Sequence

from .algebra import Number, QuadNum, parse_number
from .errors import DegenerateLengthError, IETError
from .surface import Surface
from .torusword import SlopeParams

Label = Hashable
Direction = Literal["fwd", "inv"]

_ZERO = QuadNum(0)
_ONE = QuadNum(1)


@dataclass(frozen=True, eq=False)
class IETSpec:
    alphabet: tuple[Label, ...]
    pi0: Mapping[Label, int]
    pi1: Mapping[Label, int]
    lengths: Mapping[Label, QuadNum]
    delta0: Mapping[Label, QuadNum]
    delta1: Mapping[Label, QuadNum]
    total: QuadNum
    _order0: tuple[Label, ...]
    _starts0: tuple[QuadNum, ...]
    _order1: tuple[Label, ...]
    _starts1: tuple[QuadNum, ...]

    @property
    def k(self) -> int:
        return len(self.alphabet)

    def interval0(self, a: Label) -> tuple[QuadNum, QuadNum]:
        return self.delta0[a], self.delta0[a] + self.lengths[a]

    def interval1(self, a: Label) -> tuple[QuadNum, QuadNum]:
        return self.delta1[a], self.delta1[a] + self.lengths[a]

    def label_at(self, x: QuadNum) -> Label:
        """The label ``a`` with ``x`` in the top interval ``I0_a``."""
        self._check_range(x)
        return self._order0[bisect_right(self._starts0, x) - 1]

    def label_at_image(self, x: QuadNum) -> Label:
        self._check_range(x)
        return self._order1[bisect_right(self._starts1, x) - 1]

    def _check_range(self, x: QuadNum) -> None:
        if x < _ZERO or x >= self.total:
            raise IETError(f"point {x} outside [0, {self.total})")


def _bijection(name: str, pi: Mapping[Label, int], alphabet: Sequence[Label]) -> None:
    if set(pi) != set(alphabet):
        raise IETError(f"{name} is defined on {sorted(map(str, pi))}, expected the alphabet")
    if sorted(pi.values()) != list(range(1, len(alphabet) + 1)):
        raise IETError(f"{name} is not a bijection onto 1..{len(alphabet)}")


def build_iet(pi0: Mapping[Label, int], pi1: Mapping[Label, int],
              lengths: Mapping[Label, Number]) -> IETSpec:
    alphabet = tuple(sorted(pi0, key=lambda a: pi0[a]))
    _bijection("pi0", pi0, alphabet)
    _bijection("pi1", pi1, alphabet)
    if set(lengths) != set(alphabet):
        raise IETError("lengths must be given for exactly the alphabet")
    lens = {a: QuadNum.coerce(lengths[a]) for a in alphabet}
    for a, ell in lens.items():
        if ell.sign() <= 0:
            raise IETError(f"length of {a!r} must be positive, got {ell}")

    def starts(pi: Mapping[Label, int]) -> tuple[tuple[Label, ...], tuple[QuadNum, ...], dict]:
        order = tuple(sorted(alphabet, key=lambda a: pi[a]))
        acc, out, delta = _ZERO, [], {}
        for a in order:
            out.append(acc)
            delta[a] = acc
            acc = acc + lens[a]
        return order, tuple(out), delta

    order0, starts0, delta0 = starts(pi0)
    order1, starts1, delta1 = starts(pi1)
    total = sum(lens.values(), _ZERO)
    return IETSpec(alphabet, dict(pi0), dict(pi1), lens, delta0, delta1, total,
                   order0, starts0, order1, starts1)


def rotation_iet(theta: Number) -> IETSpec:
    """Circle rotation by ``theta`` as a two-interval exchange on ``[0, 1)``."""
    theta = QuadNum.coerce(theta)
    return build_iet({"L": 1, "R": 2}, {"L": 2, "R": 1}, {"L": _ONE - theta, "R": theta})


def iet_apply(spec: IETSpec, x: Number, direction: Direction = "fwd") -> QuadNum:
    x = QuadNum.coerce(x)
    if direction == "fwd":
        a = spec.label_at(x)
        return x - spec.delta0[a] + spec.delta1[a]
    if direction == "inv":
        a = spec.label_at_image(x)
        return x - spec.delta1[a] + spec.delta0[a]
    raise ValueError(f"direction must be 'fwd' or 'inv', got {direction!r}")


def symbolic_trajectory(spec: IETSpec, x0: Number, n: int) -> list[Label]:
    x = QuadNum.coerce(x0)
    out = []
    for _ in range(n):
        a = spec.label_at(x)
        out.append(a)
        x = x - spec.delta0[a] + spec.delta1[a]
    return out


def orbit(spec: IETSpec, x0: Number, n: int) -> list[QuadNum]:
    x = QuadNum.coerce(x0)
    pts = [x]
    for _ in range(n - 1):
        x = iet_apply(spec, x)
        pts.append(x)
    return pts


def idoc_check(spec: IETSpec, n_max: int = 1000) -> bool:
    """Bounded check that no discontinuity orbit lands on an interior discontinuity.

    Every ``delta0_a`` is iterated ``n_max`` times and compared exactly with
    the set of ``delta0_b`` for ``pi0(b) > 1``.  Passing certifies only the
    first ``n_max`` steps.
    """
    targets = {spec.delta0[b] for b in spec.alphabet if spec.pi0[b] > 1}
    if not targets:
        return True
    for a in spec.alphabet:
        x = spec.delta0[a]
        for _ in range(n_max):
            x = iet_apply(spec, x)
            if x in targets:
                return False
    return True


def irreducibility_check(pi0: Mapping[Label, int], pi1: Mapping[Label, int]) -> bool:
    k = len(pi0)
    inv0 = sorted(pi0, key=lambda a: pi0[a])
    inv1 = sorted(pi1, key=lambda a: pi1[a])
    seen0: set = set()
    seen1: set = set()
    for j in range(k - 1):
        seen0.add(inv0[j])
        seen1.add(inv1[j])
        if seen0 == seen1:
            return False
    return True


def cylinder_interval(spec: IETSpec, w: Sequence[Label]) -> tuple[QuadNum, QuadNum] | None:
    """The image ``T^(n-1)(I0_w)``, an interval of the same length, or None if empty.

    Points starting in ``I0_w`` move together under one translation per
    step, so carrying the surviving piece forward and cutting it with each
    next top interval gives the cylinder's length without pulling back.
    """
    if not w:
        return _ZERO, spec.total
    lo, hi = spec.interval0(w[0])
    prev = w[0]
    for a in w[1:]:
        shift = spec.delta1[prev] - spec.delta0[prev]
        lo, hi = lo + shift, hi + shift
        a_lo, a_hi = spec.interval0(a)
        lo, hi = max(lo, a_lo), min(hi, a_hi)
        if hi <= lo:
            return None
        prev = a
    return lo, hi


def cylinder_start(spec: IETSpec, w: Sequence[Label]) -> tuple[QuadNum, QuadNum] | None:
    """``I0_w`` itself, recovered by undoing the translations of ``cylinder_interval``."""
    got = cylinder_interval(spec, w)
    if got is None or not w:
        return got
    lo, hi = got
    shift = sum((spec.delta1[a] - spec.delta0[a] for a in w[:-1]), _ZERO)
    return lo - shift, hi - shift


def cylinder_length(spec: IETSpec, w: Sequence[Label]) -> QuadNum:
    got = cylinder_interval(spec, w)
    return _ZERO if got is None else got[1] - got[0]


# first-return map of the flow ---------------------------------------------

@dataclass(frozen=True)
class SkewState:
    x: QuadNum
    square: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", QuadNum.coerce(self.x))
        if not (_ZERO <= self.x < _ONE):
            raise IETError(f"x = {self.x} is not in [0, 1)")


def skew_step(s: Surface, p: SlopeParams, st: SkewState) -> SkewState:
    """One return to the bottom edges: rotate ``x`` and move the square."""
    if p.D != s.D:
        raise IETError(f"slope parameters were reduced mod {p.D}, surface has D = {s.D}")
    cut = _ONE - p.theta
    if st.x < cut:
        return SkewState(st.x + p.theta, s.vh_power(p.M_mod)(st.square))
    return SkewState(st.x - cut, s.vh_power(p.M_mod + 1)(st.square))


def phi(st: SkewState) -> QuadNum:
    """Unroll ``[0, 1) x {1..d}`` onto ``[0, d)``."""
    return st.x + (st.square - 1)


def phi_inverse(x: Number) -> SkewState:
    x = QuadNum.coerce(x)
    k = x.floor()
    return SkewState(x - k, k + 1)


def conjugated_iet(s: Surface, p: SlopeParams) -> IETSpec:
    """The skew product written as an exchange of ``2d`` intervals on ``[0, d)``.

    Labels are ``(square, "L")`` and ``(square, "R")``.
    """
    if p.theta.sign() == 0:
        raise DegenerateLengthError(
            "1/m is an integer, so the right pieces have length zero; use the periodic path")
    if p.D != s.D:
        raise IETError(f"slope parameters were reduced mod {p.D}, surface has D = {s.D}")
    step_l, step_r = s.vh_power(p.M_mod), s.vh_power(p.M_mod + 1)
    pi0: dict[Label, int] = {}
    pi1: dict[Label, int] = {}
    lengths: dict[Label, QuadNum] = {}
    for lam in s.labels:
        pi0[(lam, "L")] = 2 * lam - 1
        pi0[(lam, "R")] = 2 * lam
        pi1[(lam, "L")] = 2 * step_l(lam)
        pi1[(lam, "R")] = 2 * step_r(lam) - 1
        lengths[(lam, "L")] = _ONE - p.theta
        lengths[(lam, "R")] = p.theta
    return build_iet(pi0, pi1, lengths)


# text form ----------------------------------------------------------------

_PAIR_RE = re.compile(r"^(\d+)([LR])$")


def format_label(a: Label) -> str:
    if isinstance(a, tuple) and len(a) == 2:
        return f"{a[0]}{a[1]}"
    return str(a)


def parse_label(text: str) -> Label:
    m = _PAIR_RE.match(text)
    return (int(m.group(1)), m.group(2)) if m else text


def format_iet(spec: IETSpec) -> str:
    labels = spec.alphabet
    return "\n".join([
        "alphabet: " + " ".join(format_label(a) for a in labels),
        "pi0: " + " ".join(str(spec.pi0[a]) for a in labels),
        "pi1: " + " ".join(str(spec.pi1[a]) for a in labels),
        "lengths: " + " ".join(spec.lengths[a].to_literal() for a in labels),
    ]) + "\n"


def parse_iet(text: str) -> IETSpec:
    rows: dict[str, list[str]] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep or key.strip() not in ("alphabet", "pi0", "pi1", "lengths"):
            raise IETError(f"unexpected line {raw!r}")
        rows[key.strip()] = rest.split()
    missing = {"alphabet", "pi0", "pi1", "lengths"} - set(rows)
    if missing:
        raise IETError(f"missing lines: {sorted(missing)}")
    labels = [parse_label(t) for t in rows["alphabet"]]
    if any(len(rows[k]) != len(labels) for k in ("pi0", "pi1", "lengths")):
        raise IETError("every line must have one entry per letter")
    try:
        pi0 = {a: int(t) for a, t in zip(labels, rows["pi0"])}
        pi1 = {a: int(t) for a, t in zip(labels, rows["pi1"])}
    except ValueError as exc:
        raise IETError("permutation entries must be integers") from exc
    lengths = {a: parse_number(t) for a, t in zip(labels, rows["lengths"])}
    return build_iet(pi0, pi1, lengths)


def trajectory_word(labels: Iterable[Label]) -> str:
    return " ".join(format_label(a) for a in labels)
