"""Cycle matroids, matroid isomorphism and Whitney 2-isomorphism experiments."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import chain, combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .forest import enumerate_spanning_forests
from .graph import (
    Cleave,
    FeynGraph,
    Identify,
    InvalidMove,
    Twist,
    WhitneyMove,
    apply_whitney_move,
    cleave_classes,
    connected_components,
    find_graph_isomorphism,
    separation_classes,
    strip_isolated_vertices,
)
from .poly import ONE, ZERO, Poly, find_variable_isomorphism

__all__ = [
    "CycleMatroid",
    "cycle_matroid",
    "independent_sets",
    "base_exchange_holds",
    "matroid_isomorphic",
    "u_from_bases",
    "WhitneyReport",
    "whitney_equivalence_check",
    "enumerate_whitney_moves",
    "single_move_search",
]


@dataclass(frozen=True)
class CycleMatroid:
    """Ground set of edge ids with the spanning-tree (or maximal-forest) bases.

    ``labels`` maps each edge id to its Feynman index; ``connected`` is False
    when the source graph was disconnected and bases are maximal forests.
    """

    ground: tuple[str, ...]
    bases: frozenset[frozenset[str]]
    labels: Mapping[str, int]
    connected: bool = True

    @property
    def rank(self) -> int:
        return len(next(iter(self.bases))) if self.bases else 0

    def __hash__(self) -> int:
        return hash((self.ground, self.bases))


def cycle_matroid(g: FeynGraph) -> CycleMatroid:
    h = strip_isolated_vertices(g.without_legs())
    c = len(connected_components(h))
    bases = frozenset(f.edges for f in enumerate_spanning_forests(h, max(c, 1)))
    if not h.vertices:
        bases = frozenset({frozenset()})
    return CycleMatroid(
        ground=tuple(h.edge_ids()),
        bases=bases,
        labels={e.id: e.var for e in h.edges},
        connected=c <= 1,
    )


def independent_sets(m: CycleMatroid) -> set[frozenset[str]]:
    out: set[frozenset[str]] = set()
    for b in m.bases:
        members = sorted(b)
        for k in range(len(members) + 1):
            out.update(frozenset(s) for s in combinations(members, k))
    return out


def base_exchange_holds(m: CycleMatroid) -> bool:
    """Exhaustive check of the base-exchange axiom."""
    bases = m.bases
    if len({len(b) for b in bases}) > 1:
        return False
    for b1 in bases:
        for b2 in bases:
            for e in b1 - b2:
                if not any((b1 - {e}) | {f} in bases for f in b2 - b1):
                    return False
    return True


def _restricted_counts(bases: Iterable[frozenset[str]], mapping: Mapping[str, str]) -> Counter:
    return Counter(frozenset(mapping[x] for x in b if x in mapping) for b in bases)


def matroid_isomorphic(m1: CycleMatroid, m2: CycleMatroid) -> dict[str, str] | None:
    """Ground-set bijection carrying the bases of m1 onto those of m2, or None.

    Elements are paired only with elements of equal occurrence count across
    bases, and each partial map must preserve the restricted base multiset.
    """
    if len(m1.ground) != len(m2.ground) or len(m1.bases) != len(m2.bases):
        return None
    if m1.rank != m2.rank:
        return None
    occ1 = Counter(chain.from_iterable(m1.bases))
    occ2 = Counter(chain.from_iterable(m2.bases))
    sig1 = {e: occ1[e] for e in m1.ground}
    sig2 = {e: occ2[e] for e in m2.ground}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return None
    order = sorted(m1.ground, key=lambda e: (sum(sig2[f] == sig1[e] for f in m2.ground), m1.ground.index(e)))
    identity2 = {e: e for e in m2.ground}
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        e = order[pos]
        for f in m2.ground:
            if f in used or sig2[f] != sig1[e]:
                continue
            mapping[e] = f
            used.add(f)
            target = {k: v for k, v in identity2.items() if k in used}
            if _restricted_counts(m1.bases, mapping) == _restricted_counts(m2.bases, target):
                if search(pos + 1):
                    return True
            del mapping[e]
            used.discard(f)
        return False

    if not search(0):
        return None
    result = {e: mapping[e] for e in m1.ground}
    assert frozenset(frozenset(result[x] for x in b) for b in m1.bases) == m2.bases
    return result


def u_from_bases(m: CycleMatroid) -> Poly:
    """Sum over bases of the product of their Feynman parameters."""
    out = ZERO
    for b in m.bases:
        term = ONE
        for e in b:
            term = term * Poly.atom((0, m.labels[e], 0))
        out = out + term
    return out


@dataclass(frozen=True)
class WhitneyReport:
    moved: FeynGraph
    matroid_bijection: dict[str, str] | None
    u_bijection: dict[int, int] | None

    @property
    def matroids_isomorphic(self) -> bool:
        return self.matroid_bijection is not None

    @property
    def u_isomorphic(self) -> bool:
        return self.u_bijection is not None

    @property
    def ok(self) -> bool:
        return self.matroids_isomorphic and self.u_isomorphic


def _u_any(g: FeynGraph) -> Poly:
    # basis generating polynomial; for a disconnected graph this is the
    # product of the components' spanning-tree polynomials
    return u_from_bases(cycle_matroid(g))


def whitney_equivalence_check(g: FeynGraph, moves: Sequence[WhitneyMove]) -> WhitneyReport:
    """Apply the moves, then compare cycle matroids and U polynomials.

    Legs are ignored: both sides are compared as leg-free skeletons.
    """
    h = g
    for mv in moves:
        h = apply_whitney_move(h, mv)
    return WhitneyReport(
        moved=h,
        matroid_bijection=matroid_isomorphic(cycle_matroid(g), cycle_matroid(h)),
        u_bijection=find_variable_isomorphism(_u_any(g), _u_any(h)),
    )


def _proper_unions(classes: list[frozenset[str]]) -> Iterator[frozenset[str]]:
    # each unordered split once: the first class always stays on the complement
    rest = classes[1:]
    for k in range(1, len(rest) + 1):
        for combo in combinations(rest, k):
            yield frozenset().union(*combo)


def enumerate_whitney_moves(g: FeynGraph) -> list[WhitneyMove]:
    """Every valid single move of ``g`` (one representative per twist side pair)."""
    moves: list[WhitneyMove] = []
    comps = connected_components(g)
    for a, b in combinations(range(len(comps)), 2):
        for u in comps[a]:
            for v in comps[b]:
                moves.append(Identify(u, v))
    for w in g.vertices:
        classes = cleave_classes(g, w)
        if len(classes) < 2:
            continue
        for part in _proper_unions(sorted(classes, key=sorted)):
            moves.append(Cleave(w, part))
    for u, v in combinations(g.vertices, 2):
        classes = separation_classes(g, u, v)
        if len(classes) < 2:
            continue
        for side in _proper_unions(sorted(classes, key=sorted)):
            moves.append(Twist(u, v, side))
    valid = []
    for mv in moves:
        try:
            apply_whitney_move(g, mv)
        except InvalidMove:
            continue
        valid.append(mv)
    return valid


def single_move_search(g: FeynGraph, h: FeynGraph) -> WhitneyMove | None:
    """Bounded search: a single Whitney move taking g to h up to vertex names."""
    for mv in enumerate_whitney_moves(g):
        if find_graph_isomorphism(apply_whitney_move(g, mv), h) is not None:
            return mv
    return None

