"""Exact arithmetic in a real quadratic field and permutations of square labels.

Coordinates and slopes throughout the package are :class:`QuadNum` values
``a + b*sqrt(n)`` with rational ``a`` and ``b``.
Pure rationals use radicand ``0`` so a single numeric type covers both
rational and quadratic slopes.  Ordering is decided with integer arithmetic
only; floats never enter a decision.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Union

from .errors import CycleNotationError, LiteralError, RadicandMismatchError

Number = Union[int, Fraction, "QuadNum"]


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``n == s*s*r`` and ``r`` squarefree."""
    s, r = 1, n
    f = 2
    while f * f <= r:
        while r % (f * f) == 0:
            r //= f * f
            s *= f
        f += 1 if f == 2 else 2
    return s, r


def _sign(p: int, q: int, n: int) -> int:
    # sign of p + q*sqrt(n), n squarefree and not a square whenever q != 0
    if q == 0:
        return (p > 0) - (p < 0)
    if p >= 0 and q > 0:
        return 1
    if p <= 0 and q < 0:
        return -1
    diff = p * p - q * q * n
    return diff // abs(diff) if p > 0 else -diff // abs(diff)


class QuadNum:
    """Immutable exact number ``(p + q*sqrt(n)) / c`` held in lowest terms."""

    __slots__ = ("_p", "_q", "_c", "_n", "_hash")

    def __init__(self, rat: int | Fraction | str = 0, surd: int | Fraction | str = 0,
                 radicand: int = 0) -> None:
        rat = Fraction(rat)
        surd = Fraction(surd)
        if radicand < 0:
            raise LiteralError(f"radicand must be non-negative, got {radicand}")
        if radicand == 0 or surd == 0:
            radicand, surd = 0, Fraction(0)
        else:
            s, radicand = _squarefree_split(radicand)
            surd *= s
            if radicand == 1:
                rat, surd, radicand = rat + surd, Fraction(0), 0
        c = rat.denominator * surd.denominator // math.gcd(rat.denominator, surd.denominator)
        self._set(rat.numerator * (c // rat.denominator),
                  surd.numerator * (c // surd.denominator), c, radicand)

    def _set(self, p: int, q: int, c: int, n: int) -> None:
        g = math.gcd(math.gcd(p, q), c)
        if g != 1:
            p //= g
            q //= g
            c //= g
        self._p, self._q, self._c = p, q, c
        self._n = n if q else 0
        self._hash = None

    @classmethod
    def _raw(cls, p: int, q: int, c: int, n: int) -> QuadNum:
        obj = object.__new__(cls)
        if c < 0:
            p, q, c = -p, -q, -c
        obj._set(p, q, c, n)
        return obj

    # accessors -----------------------------------------------------------
    @property
    def rat(self) -> Fraction:
        return Fraction(self._p, self._c)

    @property
    def surd(self) -> Fraction:
        return Fraction(self._q, self._c)

    @property
    def radicand(self) -> int:
        return self._n

    @property
    def is_rational(self) -> bool:
        return self._q == 0

    def as_fraction(self) -> Fraction:
        if self._q:
            raise ValueError(f"{self} is irrational")
        return Fraction(self._p, self._c)

    # coercion ------------------------------------------------------------
    @staticmethod
    def coerce(x: Number) -> QuadNum:
        if isinstance(x, QuadNum):
            return x
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return QuadNum._raw(x.numerator, 0, x.denominator, 0)
        raise TypeError(f"cannot convert {type(x).__name__} to QuadNum")

    def _common_radicand(self, other: QuadNum) -> int:
        if not other._q:
            return self._n
        if not self._q:
            return other._n
        if self._n != other._n:
            raise RadicandMismatchError(
                f"cannot combine sqrt({self._n}) with sqrt({other._n})")
        return self._n

    # arithmetic ----------------------------------------------------------
    def __add__(self, other: Number) -> QuadNum:
        try:
            o = QuadNum.coerce(other)
        except TypeError:
            return NotImplemented
        n = self._common_radicand(o)
        c1, c2 = self._c, o._c
        if c1 == c2:
            return QuadNum._raw(self._p + o._p, self._q + o._q, c1, n)
        return QuadNum._raw(self._p * c2 + o._p * c1, self._q * c2 + o._q * c1, c1 * c2, n)

    __radd__ = __add__

    def __neg__(self) -> QuadNum:
        return QuadNum._raw(-self._p, -self._q, self._c, self._n)

    def __sub__(self, other: Number) -> QuadNum:
        try:
            o = QuadNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Number) -> QuadNum:
        return QuadNum.coerce(other) - self

    def __mul__(self, other: Number) -> QuadNum:
        try:
            o = QuadNum.coerce(other)
        except TypeError:
            return NotImplemented
        n = self._common_radicand(o)
        p1, q1, p2, q2 = self._p, self._q, o._p, o._q
        return QuadNum._raw(p1 * p2 + q1 * q2 * n, p1 * q2 + p2 * q1, self._c * o._c, n)

    __rmul__ = __mul__

    def reciprocal(self) -> QuadNum:
        p, q, c, n = self._p, self._q, self._c, self._n
        norm = p * p - q * q * n
        if norm == 0:
            raise ZeroDivisionError("QuadNum division by zero")
        return QuadNum._raw(c * p, -c * q, norm, n)

    def __truediv__(self, other: Number) -> QuadNum:
        try:
            o = QuadNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other: Number) -> QuadNum:
        return QuadNum.coerce(other) * self.reciprocal()

    # ordering ------------------------------------------------------------
    def sign(self) -> int:
        return _sign(self._p, self._q, self._n)

    def _cmp(self, other: Number) -> int:
        o = QuadNum.coerce(other)
        self._common_radicand(o)
        return (self - o).sign()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._q == 0 and self._p * Fraction(other).denominator == \
                Fraction(other).numerator * self._c
        if not isinstance(other, QuadNum):
            return NotImplemented
        return (self._p, self._q, self._c, self._n) == (other._p, other._q, other._c, other._n)

    def __lt__(self, other: Number) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Number) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        if self._hash is None:
            if self._q == 0:
                self._hash = hash(Fraction(self._p, self._c))
            else:
                self._hash = hash((self._p, self._q, self._c, self._n))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._p or self._q)

    # rounding ------------------------------------------------------------
    def __floor__(self) -> int:
        p, q, c, n = self._p, self._q, self._c, self._n
        if q == 0:
            return p // c
        root = math.isqrt(q * q * n)  # sqrt(q^2 n) is never an integer here
        t = root if q > 0 else -root - 1
        return (p + t) // c

    def floor(self) -> int:
        return math.floor(self)

    def frac(self) -> QuadNum:
        return self - math.floor(self)

    def is_integer(self) -> bool:
        return self._q == 0 and self._c == 1

    def __float__(self) -> float:
        return (self._p + self._q * math.sqrt(self._n)) / self._c

    # text ----------------------------------------------------------------
    def __repr__(self) -> str:
        return f"QuadNum({self.to_literal()!r})"

    def __str__(self) -> str:
        if self._q == 0:
            return str(Fraction(self._p, self._c))
        rat, surd = self.rat, self.surd
        tail = f"{abs(surd)}*sqrt({self._n})"
        if not rat:
            return tail if surd > 0 else f"-{tail}"
        return f"{rat} {'+' if surd > 0 else '-'} {tail}"

    def to_literal(self) -> str:
        """Render in the ``rat:p/q`` / ``quad:a0/a1,b0/b1,n`` literal grammar."""
        if self._q == 0:
            r = Fraction(self._p, self._c)
            return f"rat:{r.numerator}/{r.denominator}"
        a, b = self.rat, self.surd
        return f"quad:{a.numerator}/{a.denominator},{b.numerator}/{b.denominator},{self._n}"


_QUAD_RE = re.compile(r"^quad:\s*([^,]+),([^,]+),\s*(\d+)\s*$")


def parse_number(text: str) -> QuadNum:
    """Parse ``rat:p/q``, ``quad:a0/a1,b0/b1,n`` or a bare fraction such as ``3/7``."""
    text = text.strip()
    try:
        if text.startswith("rat:"):
            return QuadNum(Fraction(text[4:].strip()))
        if text.startswith("quad:"):
            m = _QUAD_RE.match(text)
            if m is None:
                raise LiteralError(f"malformed quadratic literal {text!r}")
            return QuadNum(Fraction(m.group(1).strip()), Fraction(m.group(2).strip()),
                           int(m.group(3)))
        return QuadNum(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, LiteralError):
            raise
        raise LiteralError(f"malformed number literal {text!r}") from exc


def parse_point(text: str) -> tuple[QuadNum, QuadNum]:
    """Parse ``x,y`` where each coordinate uses the number literal grammar."""
    parts = [p.strip() for p in text.split(",")]
    values: list[QuadNum] = []
    i = 0
    while i < len(parts):
        if parts[i].startswith("quad:"):
            values.append(parse_number(",".join(parts[i:i + 3])))
            i += 3
        else:
            values.append(parse_number(parts[i]))
            i += 1
    if len(values) != 2:
        raise LiteralError(f"expected two coordinates in {text!r}")
    return values[0], values[1]


def quad_compare(x: QuadNum, y: QuadNum) -> int:
    """Sign of ``x - y`` as an integer.

    Raises :class:`RadicandMismatchError` when both arguments carry a
    non-zero surd over different radicands.
    """
    return QuadNum.coerce(x)._cmp(y)


def golden_conjugate() -> QuadNum:
    """The number (sqrt(5) - 1) / 2, which shows up in most examples."""
    return QuadNum(Fraction(-1, 2), Fraction(1, 2), 5)


# ---------------------------------------------------------------------------
# permutations


class Permutation:
    """A bijection of ``{1, ..., d}``.

    ``p * q`` is the composition "apply ``q``, then ``p``", so the surface
    word ``vh`` is written ``v * h``.
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]) -> None:
        imgs = tuple(images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise CycleNotationError(f"{list(imgs)} is not a permutation of 1..{len(imgs)}")
        self.images = imgs
        self._hash = hash(imgs)

    @classmethod
    def identity(cls, d: int) -> Permutation:
        return cls(range(1, d + 1))

    @classmethod
    def from_cycles(cls, text: str, d: int | None = None) -> Permutation:
        return perm_from_cycles(text, d)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise ValueError("cannot compose permutations of different degree")
        mine = self.images
        return Permutation(mine[y - 1] for y in other.images)

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, y in enumerate(self.images, start=1):
            inv[y - 1] = i
        return Permutation(inv)

    def __pow__(self, k: int) -> Permutation:
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Permutation.identity(self.degree)
        while k:
            if k & 1:
                result = base * result
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == y for i, y in enumerate(self.images, start=1))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * (self.degree + 1)
        out = []
        for start in range(1, self.degree + 1):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self(x)
            out.append(tuple(cyc))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __iter__(self) -> Iterator[int]:
        return iter(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def perm_from_cycles(text: str, d: int | None = None) -> Permutation:
    """Build a permutation from cycle notation such as ``"(1)(2 3 4)(5 6)"``.

    Fixed points may be omitted.  When ``d`` is None the degree is the largest
    label mentioned.
    """
    stripped = text.strip()
    cycles: list[list[int]] = []
    pos = 0
    for m in _CYCLE_RE.finditer(stripped):
        if stripped[pos:m.start()].strip():
            raise CycleNotationError(f"unexpected text {stripped[pos:m.start()]!r} in {text!r}")
        body = m.group(1).replace(",", " ").split()
        if not body:
            raise CycleNotationError(f"empty cycle in {text!r}")
        try:
            cycles.append([int(tok) for tok in body])
        except ValueError as exc:
            raise CycleNotationError(f"non-integer label in {text!r}") from exc
        pos = m.end()
    if stripped[pos:].strip():
        raise CycleNotationError(f"malformed parentheses in {text!r}")
    labels = [x for c in cycles for x in c]
    if len(set(labels)) != len(labels):
        raise CycleNotationError(f"repeated label in {text!r}")
    if d is None:
        d = max(labels, default=0)
    if any(x < 1 or x > d for x in labels):
        raise CycleNotationError(f"label out of range 1..{d} in {text!r}")
    images = list(range(1, d + 1))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a - 1] = b
    return Permutation(images)


def cycle_lcm(p: Permutation) -> int:
    """Least common multiple of the cycle lengths, i.e. the order of ``p``."""
    return reduce(lambda a, b: a * b // math.gcd(a, b), (len(c) for c in p.cycles()), 1)


def compose(*perms: Permutation) -> Permutation:
    """``compose(a, b, c) == a * b * c``: the rightmost factor acts first."""
    return reduce(lambda a, b: a * b, perms)


def random_permutation(d: int, rng) -> Permutation:
    images = list(range(1, d + 1))
    rng.shuffle(images)
    return Permutation(images)
