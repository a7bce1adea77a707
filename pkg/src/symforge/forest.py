"""Spanning forests and the forest construction of the Symanzik polynomials.

Tree-side forms (``U``, ``F0``) multiply the variables of the edges *in* a
forest; the usual Symanzik polynomials (``calU``, ``calF0``) multiply the
variables of the edges *removed*.  The two are related by the reciprocal
transform over all edge variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import kinematics
from .graph import (
    FeynGraph,
    GraphError,
    connected_components,
    contract_edge,
    delete_edge,
    is_regular_edge,
)
from .poly import ZERO, Monomial, Poly, msq, reciprocal_transform

__all__ = [
    "Disconnected",
    "NotRegularEdge",
    "SpanningForest",
    "enumerate_spanning_forests",
    "kinematic_invariant",
    "first_symanzik_u",
    "first_symanzik_calu",
    "second_symanzik_f0",
    "second_symanzik_calf0",
    "full_f",
    "delta1",
    "deletion_contraction_check",
]


class Disconnected(GraphError):
    pass


class NotRegularEdge(GraphError):
    pass


@dataclass(frozen=True)
class SpanningForest:
    edges: frozenset[str]
    components: tuple[frozenset[str], ...]

    @property
    def k(self) -> int:
        return len(self.components)

    def component_of(self, v: str) -> frozenset[str]:
        for c in self.components:
            if v in c:
                return c
        raise KeyError(v)


def _acyclic_components(vertices, edges) -> list[list[str]] | None:
    parent = {v: v for v in vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in edges:
        a, b = find(e.ends[0]), find(e.ends[1])
        if a == b:
            return None
        parent[b] = a
    groups: dict[str, list[str]] = {}
    for v in vertices:
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def enumerate_spanning_forests(g: FeynGraph, k: int) -> list[SpanningForest]:
    """All spanning forests of ``g`` with exactly ``k`` components.

    Brute force over edge subsets of size ``r - k``; order follows
    ``itertools.combinations`` over the graph's edge order.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    size = g.n_vertices - k
    if size < 0:
        return []
    candidates = [e for e in g.edges if not e.is_self_loop]
    out = []
    for subset in combinations(candidates, size):
        comps = _acyclic_components(g.vertices, subset)
        if comps is None:
            continue
        out.append(
            SpanningForest(
                frozenset(e.id for e in subset),
                tuple(frozenset(c) for c in comps),
            )
        )
    return out


def _product(g: FeynGraph, edge_ids, inside: bool) -> Poly:
    chosen = [e for e in g.edges if (e.id in edge_ids) == inside]
    mono: Monomial = tuple(sorted((e.atom, 1) for e in chosen))
    return Poly({mono: 1})


def _require_connected(g: FeynGraph) -> None:
    if len(connected_components(g)) > 1:
        raise Disconnected(f"graph {g.name or '<unnamed>'} is not connected")


def kinematic_invariant(g: FeynGraph, f: SpanningForest) -> Poly:
    """``s`` of a spanning 2-forest: the squared momentum entering one tree.

    The tree containing the first vertex of ``g`` is used; by momentum
    conservation the other tree gives the same value.
    """
    if f.k != 2:
        raise ValueError("kinematic invariants are defined for 2-forests")
    side = f.component_of(g.vertices[0])
    return side_invariant(g, side)


def side_invariant(g: FeynGraph, side: frozenset[str]) -> Poly:
    incoming = [leg.momentum for leg in g.legs if leg.vertex in side]
    return kinematics.square(incoming, g.momenta())


def first_symanzik_u(g: FeynGraph) -> Poly:
    """Tree-side U: sum over spanning trees of the product of tree edges."""
    if len(connected_components(g)) > 1:
        return ZERO
    out = ZERO
    for t in enumerate_spanning_forests(g, 1):
        out = out + _product(g, t.edges, inside=True)
    return out


def first_symanzik_calu(g: FeynGraph, *, allow_disconnected: bool = False) -> Poly:
    """The first Symanzik polynomial: products over edges *not* in a spanning tree.

    With ``allow_disconnected`` a disconnected graph yields 0 instead of
    raising; Dodgson-type identities need that convention for their minors.
    """
    if len(connected_components(g)) > 1:
        if allow_disconnected:
            return ZERO
        raise Disconnected(f"graph {g.name or '<unnamed>'} is not connected")
    out = ZERO
    for t in enumerate_spanning_forests(g, 1):
        out = out + _product(g, t.edges, inside=False)
    return out


def _f0(g: FeynGraph, inside: bool) -> Poly:
    if not g.legs:
        return ZERO
    out = ZERO
    for f in enumerate_spanning_forests(g, 2):
        s = side_invariant(g, f.components[0])
        if s:
            out = out - _product(g, f.edges, inside) * s
    return out


def second_symanzik_f0(g: FeynGraph, *, allow_disconnected: bool = False) -> Poly:
    """Tree-side F0 = sum over 2-forests of (in-forest product) * (-s)."""
    if not allow_disconnected:
        _require_connected(g)
    return _f0(g, inside=True)


def second_symanzik_calf0(g: FeynGraph, *, allow_disconnected: bool = False) -> Poly:
    """calF0 = sum over 2-forests of (removed-edge product) * (-s)."""
    if not allow_disconnected:
        _require_connected(g)
    return _f0(g, inside=False)


def full_f(g: FeynGraph) -> Poly:
    """calF = calF0 + calU * sum_i x_i m_i^2 over edges that carry a mass."""
    _require_connected(g)
    mass_term = ZERO
    for e in g.edges:
        if e.id in g.masses:
            mass_term = mass_term + e.poly * msq(g.masses[e.id])
    out = second_symanzik_calf0(g)
    if mass_term:
        out = out + first_symanzik_calu(g) * mass_term
    return out


def delta1(g: FeynGraph, vi: str, vj: str, vk: str) -> Poly:
    """Sum over 2-forests with vi, vj in one tree and vk in the other of the removed-edge product."""
    if len({vi, vj, vk}) != 3 or not {vi, vj, vk} <= set(g.vertices):
        raise ValueError("delta1 needs three distinct vertices of the graph")
    _require_connected(g)
    out = ZERO
    for f in enumerate_spanning_forests(g, 2):
        side = f.component_of(vi)
        if vj in side and vk not in side:
            out = out + _product(g, f.edges, inside=False)
    return out


@dataclass(frozen=True)
class DeletionContraction:
    edge: str
    u_holds: bool
    f0_holds: bool

    @property
    def holds(self) -> bool:
        return self.u_holds and self.f0_holds


def deletion_contraction_report(g: FeynGraph, eid: str) -> DeletionContraction:
    if not is_regular_edge(g, eid):
        raise NotRegularEdge(f"edge {eid!r} is a self-loop or a bridge")
    xe = g.edge(eid).poly
    gc, gd = contract_edge(g, eid), delete_edge(g, eid)
    u_ok = first_symanzik_calu(g) == first_symanzik_calu(gc) + xe * first_symanzik_calu(gd)
    f_ok = second_symanzik_calf0(g) == second_symanzik_calf0(gc) + xe * second_symanzik_calf0(gd)
    return DeletionContraction(eid, u_ok, f_ok)


def deletion_contraction_check(g: FeynGraph, eid: str) -> bool:
    """Both recursions calU(G) = calU(G/e) + x_e calU(G-e) and likewise for calF0."""
    return deletion_contraction_report(g, eid).holds


def calu_from_u(g: FeynGraph, u: Poly) -> Poly:
    return reciprocal_transform(u, g.feyn_vars())


def tree_count(g: FeynGraph) -> int:
    return len(enumerate_spanning_forests(g, 1)) if g.is_connected() else 0

