"""Seeded random Feynman graphs for property sweeps."""

from __future__ import annotations

import random

from .graph import Edge, FeynGraph, Leg, disjoint_union

__all__ = ["random_graph", "random_corpus", "random_whitney_instance"]


def random_graph(
    rng: random.Random,
    *,
    max_edges: int = 7,
    max_vertices: int = 6,
    max_legs: int = 4,
    loops: bool = True,
    masses: bool = True,
    name: str = "",
) -> FeynGraph:
    """A connected multigraph: random spanning tree plus random extra edges.

    Extra edges may be parallel edges or self-loops.  Feynman indices are a
    random permutation of 1..n so variable order is decoupled from edge order.
    """
    r = rng.randint(1, min(max_vertices, max_edges + 1))
    vertices = [f"v{i + 1}" for i in range(r)]
    ends: list[tuple[str, str]] = []
    for i in range(1, r):
        ends.append((vertices[rng.randrange(i)], vertices[i]))
    n = rng.randint(max(len(ends), 1), max_edges)
    while len(ends) < n:
        a, b = rng.choice(vertices), rng.choice(vertices)
        if a == b and not loops:
            continue
        ends.append((a, b))
    rng.shuffle(ends)
    var = list(range(1, n + 1))
    rng.shuffle(var)
    edges = tuple(Edge(f"e{k + 1}", e, var[k]) for k, e in enumerate(ends))
    m = rng.randint(0, max_legs)
    legs = tuple(Leg(j + 1, rng.choice(vertices)) for j in range(m))
    mass = {}
    if masses:
        for e in edges:
            if rng.random() < 0.3:
                mass[e.id] = e.var
    return FeynGraph(tuple(vertices), edges, legs, mass, name=name)


def random_corpus(seed: int, count: int = 200) -> list[FeynGraph]:
    rng = random.Random(seed)
    return [random_graph(rng, name=f"random-{seed}-{k}") for k in range(count)]


def random_whitney_instance(rng: random.Random, max_edges: int = 8) -> FeynGraph:
    """A leg-free graph likely to admit Whitney moves.

    Either two disjoint random pieces (identify/cleave available) or a single
    piece; twists need a 2-separation, which small multigraphs often have.
    """
    half = max_edges // 2
    g = random_graph(rng, max_edges=half, max_vertices=4, max_legs=0, masses=False)
    if rng.random() < 0.5:
        h = random_graph(rng, max_edges=half, max_vertices=4, max_legs=0, masses=False)
        shift = g.n_edges
        h = FeynGraph(
            h.vertices,
            tuple(Edge(f"f{e.id[1:]}", e.ends, e.var + shift) for e in h.edges),
        )
        g = disjoint_union(g, h)
    return g
