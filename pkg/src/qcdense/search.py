"""Exhaustive search for the smallest qc-dense subsets of a finite group."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .finite import FiniteAbelianGroup
from .qc import polar_table

EXHAUSTIVE_MAX_ORDER = 20


class SearchTooLarge(RuntimeError):
    pass


@dataclass
class MinDenseResult:
    group: str
    size: int
    subsets: list
    representatives: list = field(default_factory=list)
    heuristic: bool = False


def search_min_dense(G: FiniteAbelianGroup, heuristic: bool = False, max_order: int = EXHAUSTIVE_MAX_ORDER) -> MinDenseResult:
    """All minimum-cardinality qc-dense subsets of G, in lexicographic order.

    Zero never shrinks a polar, so candidates are drawn from the nonzero
    elements. ``representatives`` keeps one subset per pair {S, -S}. Beyond
    ``max_order`` the exhaustive search is refused unless ``heuristic`` is set,
    in which case a single greedily built qc-dense subset is returned.
    """
    if G.order > max_order:
        if not heuristic:
            raise SearchTooLarge(
                "order %d exceeds the exhaustive limit %d; pass heuristic=True" % (G.order, max_order)
            )
        return _greedy(G)
    tab = polar_table(G)
    nonzero = list(range(1, len(tab.elements)))
    for r in range(len(nonzero) + 1):
        found = []
        for combo in itertools.combinations(nonzero, r):
            pol = tab.full
            for i in combo:
                pol &= tab.cols[i]
            if pol == 1:
                found.append(tuple(tab.elements[i] for i in combo))
        if found:
            return MinDenseResult(str(G), r, found, _up_to_negation(G, found))
    raise AssertionError("G itself is qc-dense, the search cannot come back empty")


def _up_to_negation(G, subsets):
    seen = set()
    reps = []
    for S in subsets:
        key = frozenset(S)
        if key in seen:
            continue
        seen.add(key)
        seen.add(frozenset(G.neg(x) for x in S))
        reps.append(S)
    return reps


def _greedy(G: FiniteAbelianGroup) -> MinDenseResult:
    tab = polar_table(G)
    pol = tab.full
    chosen = []
    while pol != 1:
        best = min(
            range(1, len(tab.elements)),
            key=lambda i: (bin(pol & tab.cols[i]).count("1"), i),
        )
        pol &= tab.cols[best]
        chosen.append(best)
    S = tuple(sorted(tab.elements[i] for i in chosen))
    return MinDenseResult(str(G), len(S), [S], [S], heuristic=True)
