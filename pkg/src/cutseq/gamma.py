"""Transition graphs between bottom edges and window tests for IET languages.

The graph for exponent ``M`` has one vertex per square and two outgoing
edges per vertex: ``lam -L-> v(h^M(lam))`` and ``lam -R-> v(h^(M+1)(lam))``.
A walk on it records which bottom edges a line crosses, and with which half
of the base it leaves.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Literal, Mapping, Sequence

from .algebra import Permutation
from .errors import EmptyOccurrenceError, GraphError
from .surface import Surface

Letter = Literal["L", "R"]
Edge = tuple[int, str]
Label = Hashable


@dataclass(frozen=True)
class GammaGraph:
    d: int
    L_map: Permutation
    R_map: Permutation
    bad_edges: frozenset[Edge] = frozenset()
    M: int | None = None
    letters: tuple[str, str] = ("L", "R")

    def step(self, lam: int, letter: str) -> int:
        if letter == self.letters[0]:
            return self.L_map(lam)
        if letter == self.letters[1]:
            return self.R_map(lam)
        raise GraphError(f"unknown edge letter {letter!r}")

    def edge_map(self, letter: str) -> Permutation:
        return self.L_map if letter == self.letters[0] else self.R_map

    def edges(self) -> list[tuple[int, str, int]]:
        return [(lam, e, self.step(lam, e))
                for lam in range(1, self.d + 1) for e in self.letters]

    def edge_set(self) -> set[tuple[int, str, int]]:
        return set(self.edges())


def build_gamma(s: Surface, M: int) -> GammaGraph:
    """Both edges out of ``lam`` are bad exactly when ``h^M(lam)`` is a bad square."""
    if not 0 <= M < s.D:
        raise GraphError(f"M must lie in 0..{s.D - 1}, got {M}")
    hM = s.h ** M
    bad = frozenset((lam, e) for lam in s.labels if hM(lam) in s.bad for e in "LR")
    return GammaGraph(s.d, s.vh_power(M), s.vh_power(M + 1), bad, M)


def _reach(d: int, maps: Sequence[Permutation], start: int = 1) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for p in maps:
            y = p(x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def is_strongly_connected(g: GammaGraph) -> bool:
    fwd = (g.L_map, g.R_map)
    back = (g.L_map.inverse(), g.R_map.inverse())
    return len(_reach(g.d, fwd)) == g.d and len(_reach(g.d, back)) == g.d


def derive_graph(g: GammaGraph, avoided: Edge, block_type: str,
                 block_M: int | None = None) -> GammaGraph:
    """Accelerate the graph along blocks ending in the avoided edge's letter.

    With ``sigma`` the avoided letter and ``tau`` the other, ``block_type``
    ``"sigma_isolated"`` uses blocks ``tau^M sigma`` and ``tau^(M+1) sigma``
    (``M = block_M``), while ``"tau_isolated"`` uses ``sigma`` and
    ``tau sigma``.  A block is read as a walk, so ``tau sigma`` sends
    ``lam`` to ``sigma(tau(lam))``.
    """
    lam, sigma = avoided
    if sigma not in g.letters or not 1 <= lam <= g.d:
        raise GraphError(f"{avoided!r} is not an edge of the graph")
    tau = g.letters[1] if sigma == g.letters[0] else g.letters[0]
    s_map, t_map = g.edge_map(sigma), g.edge_map(tau)
    if block_type == "tau_isolated":
        new_l, new_r = s_map, s_map * t_map
    elif block_type == "sigma_isolated":
        if block_M is None or block_M < 0:
            raise GraphError("sigma_isolated blocks need a non-negative block_M")
        t_pow = t_map ** block_M
        new_l, new_r = s_map * t_pow, s_map * t_map * t_pow
    else:
        raise GraphError(f"unknown block type {block_type!r}")
    return GammaGraph(g.d, new_l, new_r, frozenset(), None, ("L", "R"))


def is_two_oriented(g: GammaGraph) -> bool:
    indeg = [0] * (g.d + 1)
    for _, _, tgt in g.edges():
        indeg[tgt] += 1
    return all(x == 2 for x in indeg[1:])


# export ---------------------------------------------------------------------

def format_edges(g: GammaGraph) -> str:
    lines = []
    for lam, e, tgt in g.edges():
        mark = "!" if (lam, e) in g.bad_edges else ""
        lines.append(f"{lam} {e}→ {tgt}{mark}")
    return "\n".join(lines) + "\n"


def gamma_record(g: GammaGraph) -> dict:
    return {
        "d": g.d,
        "M": g.M,
        "edges": [{"source": lam, "letter": e, "target": tgt, "bad": (lam, e) in g.bad_edges}
                  for lam, e, tgt in g.edges()],
        "strongly_connected": is_strongly_connected(g),
    }


def gamma_json(g: GammaGraph) -> str:
    return json.dumps(gamma_record(g), sort_keys=True)


# language of a window ---------------------------------------------------------

def prefix_suffix_sets(window: Sequence[Label], w: Sequence[Label]) -> tuple[set, set]:
    """Letters seen just before and just after occurrences of ``w``, overlaps included."""
    window = list(window)
    w = list(w)
    n, k = len(window), len(w)
    if k == 0:
        raise EmptyOccurrenceError("the empty word has no occurrences to extend")
    before, after = set(), set()
    found = False
    for i in range(n - k + 1):
        if window[i:i + k] == w:
            found = True
            if i > 0:
                before.add(window[i - 1])
            if i + k < n:
                after.add(window[i + k])
    if not found:
        raise EmptyOccurrenceError("word does not occur in the window")
    return before, after


@dataclass
class FZReport:
    verdict: Literal["pass", "fail"]
    failed_condition: int | None = None
    witness: dict | None = None
    proxies: str = ("conditions 1 and 2 are window proxies: bounded-gap recurrence of short "
                    "factors and full alphabet coverage")
    checked_words: int = 0
    recurrence_vacuous: bool = False

    def __bool__(self) -> bool:
        return self.verdict == "pass"


def _is_interval(values: Iterable[int]) -> bool:
    vals = sorted(values)
    return not vals or vals[-1] - vals[0] == len(vals) - 1


def recurrence_failure(window: Sequence[Hashable], cap: int, gap_bound: int
                       ) -> tuple[tuple, int] | None:
    """First factor of length ``<= cap`` with a gap longer than ``gap_bound``.

    Gaps include the stretch before the first and after the last
    occurrence, so a factor seen once in a long window fails.  Returns the
    factor and its offending gap, or None.
    """
    n = len(window)
    seq = list(window)
    for length in range(1, cap + 1):
        last: dict[tuple, int] = {}
        for i in range(n - length + 1):
            key = tuple(seq[i:i + length])
            prev = last.get(key, -1)
            if i - prev > gap_bound:
                return key, i - prev
            last[key] = i
        for key, pos in last.items():
            if (n - length + 1) - pos > gap_bound:
                return key, (n - length + 1) - pos
    return None


def fz_check(window: Sequence[Label], pi0: Mapping[Label, int], pi1: Mapping[Label, int],
             cap: int = 8, *, rec_cap: int = 3, gap_bound: int | None = None,
             definite_only: bool = False, check_coverage: bool = True) -> FZReport:
    """Look for a violation of the six language conditions inside a finite window.

    Conditions 3 to 6 are checked for every factor ``w`` of length up to
    ``cap`` using the occurrences of ``w`` that have a neighbor on both
    sides, so every observed prefix and suffix comes from a genuine
    two-sided extension.  Prefix letters are compared with ``pi1`` and
    suffix letters with ``pi0``.  Condition 5 compares ``a`` strictly
    ``pi1``-below ``b``.  A window can only show a subset of the true
    extension sets, so condition 6 reports an empty intersection only when
    ``definite_only`` is False; two or more shared suffixes are always a
    violation.
    """
    symbols = list(getattr(window, "symbols", window))
    n = len(symbols)
    report = FZReport("pass")
    if n == 0:
        report.recurrence_vacuous = True
        return report

    missing = [a for a in pi0 if a not in set(symbols)]
    unknown = [a for a in set(symbols) if a not in pi0 or a not in pi1]
    if unknown:
        return FZReport("fail", 2, {"letters": sorted(map(str, unknown)),
                                    "note": "letters outside the alphabet"})
    if missing and check_coverage:
        return FZReport("fail", 2, {"letters": sorted(map(str, missing)),
                                    "note": "alphabet letters never seen"})

    bound = gap_bound if gap_bound is not None else max(n // 4, 1)
    if n <= bound:
        report.recurrence_vacuous = True
    else:
        bad = recurrence_failure(symbols, rec_cap, bound)
        if bad is not None:
            return FZReport("fail", 1, {"word": list(bad[0]), "gap": bad[1]})

    checked = 0
    for length in range(1, cap + 1):
        ext: dict[tuple, set[tuple]] = {}
        for i in range(1, n - length):
            key = tuple(symbols[i:i + length])
            ext.setdefault(key, set()).add((symbols[i - 1], symbols[i + length]))
        for w, pairs in ext.items():
            checked += 1
            A = {p for p, _ in pairs}
            D = {q for _, q in pairs}
            if not _is_interval(pi1[a] for a in A):
                return FZReport("fail", 3, {"word": list(w), "prefixes": sorted(A, key=pi1.get)},
                                checked_words=checked)
            if not _is_interval(pi0[b] for b in D):
                return FZReport("fail", 4, {"word": list(w), "suffixes": sorted(D, key=pi0.get)},
                                checked_words=checked)
            if len(A) < 2:
                continue
            Dx = {a: {q for p, q in pairs if p == a} for a in A}
            for a, b in combinations(sorted(A, key=pi1.get), 2):
                # a is pi1-below b
                if max(pi0[y] for y in Dx[a]) > min(pi0[z] for z in Dx[b]):
                    return FZReport("fail", 5, {"word": list(w), "prefixes": [a, b],
                                                "suffixes_a": sorted(Dx[a], key=pi0.get),
                                                "suffixes_b": sorted(Dx[b], key=pi0.get)},
                                    checked_words=checked)
                common = Dx[a] & Dx[b]
                if len(common) >= 2 or (not common and not definite_only):
                    return FZReport("fail", 6, {"word": list(w), "prefixes": [a, b],
                                                "common_suffixes": sorted(common, key=pi0.get)},
                                    checked_words=checked)
    report.checked_words = checked
    return report


def walk_labels(symbols: Iterable[tuple[int, str]]) -> list[tuple[int, str]]:
    return [(int(mu), str(sig)) for mu, sig in symbols]
