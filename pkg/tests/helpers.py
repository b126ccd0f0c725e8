"""Independent reference computations and fixtures shared by the tests.

Nothing here calls the code paths it is used to check: the plane tracer
merges crossing times instead of stepping square by square, and cylinder
lengths are pulled back through the inverse map instead of carried forward.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from cutseq.algebra import Permutation, QuadNum, golden_conjugate
from cutseq.characterize import contract
from cutseq.iet import IETSpec
from cutseq.oracle import trace_from
from cutseq.surface import Surface, build_surface, is_transitive

GOLDEN = golden_conjugate()
SQRT2 = QuadNum(0, 1, 2)
SQRT3 = QuadNum(0, 1, 3)


def golden_type(M: int) -> QuadNum:
    """A slope whose reciprocal is ``M + (sqrt5 - 1)/2``: floor ``M``, theta golden."""
    return (GOLDEN + M).reciprocal()


QUADRATIC_SLOPES = [
    GOLDEN,
    SQRT2 - 1,
    (SQRT3 - 1) / 2,
    (QuadNum(0, 1, 7) - 2) / 3,
    golden_type(3),
]


def random_surface(rng: random.Random, d: int) -> Surface:
    while True:
        h = list(range(1, d + 1))
        v = list(range(1, d + 1))
        rng.shuffle(h)
        rng.shuffle(v)
        ph, pv = Permutation(h), Permutation(v)
        if is_transitive(ph, pv):
            return build_surface(ph, pv)


def random_unit_point(rng: random.Random, radicand: int = 0) -> QuadNum:
    """A random exact number in ``[0, 1)``, irrational when ``radicand`` is given."""
    x = QuadNum(Fraction(rng.randrange(1, 10**6), 10**6))
    if radicand:
        x = x + QuadNum(0, Fraction(rng.randrange(1, 1000), 997), radicand)
    return x.frac()


def plane_tokens(x0, y0, m, n: int) -> list[str]:
    """Grid crossings of a line in the plane, by merging crossing times.

    Vertical lines ``x = k`` are met at ``t = k - x0`` and horizontal lines
    ``y = j`` at ``t = (j - y0)/m``.  A simultaneous crossing is the token HV.
    """
    x0, y0, m = map(QuadNum.coerce, (x0, y0, m))
    k, j = 1, 1
    out: list[str] = []
    while len(out) < n:
        tv = QuadNum(k) - x0
        th = (QuadNum(j) - y0) / m
        if tv < th:
            out.append("H")
            k += 1
        elif th < tv:
            out.append("V")
            j += 1
        else:
            out.append("HV")
            k += 1
            j += 1
    return out


def plane_edge_word(x0, y0, m, n: int) -> str:
    return "".join(plane_tokens(x0, y0, m, n))[:n]


def squares_from_edges(s: Surface, lam0: int, edges: str) -> list[int]:
    out, lam = [], lam0
    for e in edges:
        lam = s.h(lam) if e == "H" else s.v(lam)
        out.append(lam)
    return out


def pullback_cylinder(spec: IETSpec, w) -> QuadNum:
    """Length of the cylinder of ``w`` by pulling the last interval back step by step."""
    if not w:
        return spec.total
    lo, hi = spec.interval0(w[-1])
    for a in reversed(w[:-1]):
        b_lo, b_hi = spec.interval1(a)
        lo, hi = max(lo, b_lo), min(hi, b_hi)
        if hi <= lo:
            return QuadNum(0)
        shift = spec.delta0[a] - spec.delta1[a]
        lo, hi = lo + shift, hi + shift
    return hi - lo


def oracle_walk(s: Surface, m: QuadNum, n_walk: int, x0=Fraction(1, 3), lam0: int = 1):
    """A walk of at least ``n_walk`` steps read off an exact trace."""
    inv = float(m.reciprocal())
    n_sym = int((n_walk + 3) * (math.floor(inv) + 2)) + 10
    res = trace_from(s, lam0, x0, 0, m, n_sym)
    assert res.terminal == "ran_to_length"
    walk = contract(res.as_seq(), s)
    assert len(walk) >= n_walk
    return walk, res
