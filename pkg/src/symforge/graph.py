"""Labelled multigraphs for Feynman graphs: minors, extension, Whitney moves."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Union

from .poly import FEYN, LEG, Atom, Poly

__all__ = [
    "Edge",
    "Leg",
    "FeynGraph",
    "Identify",
    "Cleave",
    "Twist",
    "WhitneyMove",
    "GraphError",
    "UnknownEdge",
    "SelfLoopContraction",
    "InvalidMove",
    "GraphFormatError",
    "delete_edge",
    "contract_edge",
    "is_bridge",
    "is_regular_edge",
    "connected_components",
    "loop_number",
    "extend_with_external_vertices",
    "apply_whitney_move",
    "strip_isolated_vertices",
    "disjoint_union",
    "find_graph_isomorphism",
    "parse_graph",
    "dump_graph",
    "load_graph",
]


class GraphError(ValueError):
    pass


class UnknownEdge(GraphError, KeyError):
    def __str__(self) -> str:
        return f"unknown edge {self.args[0]!r}"


class SelfLoopContraction(GraphError):
    pass


class InvalidMove(GraphError):
    pass


class GraphFormatError(GraphError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]
    var: int
    kind: int = FEYN  # LEG for the promoted legs of an extended graph

    @property
    def atom(self) -> Atom:
        return (self.kind, self.var, 0)

    @property
    def poly(self) -> Poly:
        return Poly.atom(self.atom)

    @property
    def is_self_loop(self) -> bool:
        return self.ends[0] == self.ends[1]

    def other(self, v: str) -> str:
        a, b = self.ends
        return b if v == a else a


@dataclass(frozen=True)
class Leg:
    momentum: int
    vertex: str


@dataclass(frozen=True)
class FeynGraph:
    """A Feynman graph: vertices, internal edges, legs and optional masses.

    ``masses`` maps an edge id to the index ``i`` of its ``m_i^2`` atom.
    ``n_external`` counts trailing vertices that were added as caps for legs.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    legs: tuple[Leg, ...] = ()
    masses: Mapping[str, int] = field(default_factory=dict)
    name: str = ""
    n_external: int = 0

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex identifiers")
        ids: set[str] = set()
        vars_: set[tuple[int, int]] = set()
        for e in self.edges:
            if e.id in ids:
                raise GraphError(f"duplicate edge id {e.id!r}")
            ids.add(e.id)
            if (e.kind, e.var) in vars_:
                raise GraphError(f"variable index {e.var} used twice")
            vars_.add((e.kind, e.var))
            for v in e.ends:
                if v not in vs:
                    raise GraphError(f"edge {e.id!r} references unknown vertex {v!r}")
        moms = [leg.momentum for leg in self.legs]
        if len(set(moms)) != len(moms):
            raise GraphError("duplicate momentum index on legs")
        for leg in self.legs:
            if leg.vertex not in vs:
                raise GraphError(f"leg p{leg.momentum} attached to unknown vertex {leg.vertex!r}")
        for eid in self.masses:
            if eid not in ids:
                raise GraphError(f"mass given for unknown edge {eid!r}")
        if not isinstance(self.masses, dict):
            object.__setattr__(self, "masses", dict(self.masses))

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges, self.legs, tuple(sorted(self.masses.items()))))

    # -- convenience --------------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise UnknownEdge(eid)

    def edge_ids(self) -> list[str]:
        return [e.id for e in self.edges]

    def feyn_vars(self) -> list[int]:
        return [e.var for e in self.edges if e.kind == FEYN]

    def momenta(self) -> list[int]:
        return sorted(leg.momentum for leg in self.legs)

    def incident(self, v: str) -> list[Edge]:
        return [e for e in self.edges if v in e.ends]

    def legs_at(self, v: str) -> list[Leg]:
        return [leg for leg in self.legs if leg.vertex == v]

    def is_connected(self) -> bool:
        return len(connected_components(self)) <= 1

    def without_legs(self) -> FeynGraph:
        return replace(self, legs=())


# -- components -------------------------------------------------------------


def _components(vertices: Iterable[str], edges: Iterable[Edge]) -> list[list[str]]:
    parent: dict[str, str] = {v: v for v in vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in edges:
        a, b = find(e.ends[0]), find(e.ends[1])
        if a != b:
            parent[b] = a
    groups: dict[str, list[str]] = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def connected_components(g: FeynGraph) -> list[list[str]]:
    """Vertex partition into components, each in vertex order, ordered by first vertex."""
    return _components(g.vertices, g.edges)


def loop_number(g: FeynGraph) -> int:
    return g.n_edges - g.n_vertices + len(connected_components(g))


def is_bridge(g: FeynGraph, eid: str) -> bool:
    e = g.edge(eid)
    if e.is_self_loop:
        return False
    rest = [f for f in g.edges if f.id != eid]
    return len(_components(g.vertices, rest)) > len(connected_components(g))


def is_regular_edge(g: FeynGraph, eid: str) -> bool:
    """Neither a self-loop nor a bridge."""
    e = g.edge(eid)
    return not e.is_self_loop and not is_bridge(g, eid)


# -- minors -----------------------------------------------------------------


def delete_edge(g: FeynGraph, eid: str) -> FeynGraph:
    g.edge(eid)
    masses = {k: v for k, v in g.masses.items() if k != eid}
    return replace(g, edges=tuple(e for e in g.edges if e.id != eid), masses=masses)


def _merge_vertices(g: FeynGraph, keep: str, drop: str, edges: Iterable[Edge]) -> FeynGraph:
    def mv(v: str) -> str:
        return keep if v == drop else v

    new_edges = tuple(replace(e, ends=(mv(e.ends[0]), mv(e.ends[1]))) for e in edges)
    legs = tuple(Leg(leg.momentum, mv(leg.vertex)) for leg in g.legs)
    kept_ids = {e.id for e in new_edges}
    masses = {k: v for k, v in g.masses.items() if k in kept_ids}
    return replace(
        g,
        vertices=tuple(v for v in g.vertices if v != drop),
        edges=new_edges,
        legs=legs,
        masses=masses,
    )


def contract_edge(g: FeynGraph, eid: str) -> FeynGraph:
    """Contract ``eid``; the merged vertex keeps the name of the endpoint listed first."""
    e = g.edge(eid)
    if e.is_self_loop:
        raise SelfLoopContraction(f"cannot contract self-loop {eid!r}")
    a, b = e.ends
    if g.vertices.index(a) > g.vertices.index(b):
        a, b = b, a
    return _merge_vertices(g, a, b, (f for f in g.edges if f.id != eid))


def extend_with_external_vertices(g: FeynGraph) -> FeynGraph:
    """Cap each leg with a new vertex; the leg becomes an edge carrying ``z_j``."""
    if not g.legs:
        return g
    taken = set(g.vertices) | set(g.edge_ids())
    new_vertices: list[str] = []
    new_edges: list[Edge] = []
    for leg in sorted(g.legs, key=lambda leg: leg.momentum):
        vname = f"ext{leg.momentum}"
        ename = f"leg{leg.momentum}"
        while vname in taken:
            vname += "'"
        while ename in taken:
            ename += "'"
        taken.update((vname, ename))
        new_vertices.append(vname)
        new_edges.append(Edge(ename, (leg.vertex, vname), leg.momentum, LEG))
    return replace(
        g,
        vertices=g.vertices + tuple(new_vertices),
        edges=g.edges + tuple(new_edges),
        legs=(),
        n_external=g.n_external + len(new_vertices),
    )


def strip_isolated_vertices(g: FeynGraph) -> FeynGraph:
    touched = {v for e in g.edges for v in e.ends} | {leg.vertex for leg in g.legs}
    return replace(g, vertices=tuple(v for v in g.vertices if v in touched))


def disjoint_union(g: FeynGraph, h: FeynGraph, suffix: str = "'") -> FeynGraph:
    """Place ``h`` beside ``g``; clashing vertex/edge names of h get ``suffix``.

    If the variable (or momentum) indices overlap, those of h are shifted
    past the largest index used by g.
    """
    vmap = {}
    for v in h.vertices:
        name = v
        while name in g.vertices or name in vmap.values():
            name += suffix
        vmap[v] = name
    emap = {}
    gids = set(g.edge_ids())
    for e in h.edges:
        name = e.id
        while name in gids or name in emap.values():
            name += suffix
        emap[e.id] = name
    gvars = {(e.kind, e.var) for e in g.edges}
    vshift = 0
    if gvars & {(e.kind, e.var) for e in h.edges}:
        vshift = max(v for _, v in gvars)
    gmoms = set(g.momenta())
    mshift = max(gmoms) if gmoms & set(h.momenta()) else 0
    edges = g.edges + tuple(
        Edge(emap[e.id], (vmap[e.ends[0]], vmap[e.ends[1]]), e.var + vshift, e.kind) for e in h.edges
    )
    legs = g.legs + tuple(Leg(leg.momentum + mshift, vmap[leg.vertex]) for leg in h.legs)
    masses = dict(g.masses)
    masses.update({emap[k]: v + vshift for k, v in h.masses.items()})
    return FeynGraph(
        vertices=g.vertices + tuple(vmap[v] for v in h.vertices),
        edges=edges,
        legs=legs,
        masses=masses,
        name=g.name,
    )


# -- Whitney moves ----------------------------------------------------------


@dataclass(frozen=True)
class Identify:
    u: str
    v: str


@dataclass(frozen=True)
class Cleave:
    w: str
    part: frozenset[str]

    def __init__(self, w: str, part: Iterable[str]):
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "part", frozenset(part))


@dataclass(frozen=True)
class Twist:
    u: str
    v: str
    side: frozenset[str]

    def __init__(self, u: str, v: str, side: Iterable[str]):
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "side", frozenset(side))


WhitneyMove = Union[Identify, Cleave, Twist]


def _require_vertex(g: FeynGraph, v: str) -> None:
    if v not in g.vertices:
        raise InvalidMove(f"unknown vertex {v!r}")


def _require_edges(g: FeynGraph, ids: Iterable[str]) -> None:
    known = set(g.edge_ids())
    for eid in ids:
        if eid not in known:
            raise InvalidMove(f"unknown edge {eid!r}")


def cleave_classes(g: FeynGraph, w: str) -> list[frozenset[str]]:
    """Edges at ``w`` grouped by the component of ``g - w`` they lead into.

    Self-loops at ``w`` form classes of their own.
    """
    others = [v for v in g.vertices if v != w]
    rest = [e for e in g.edges if w not in e.ends]
    comp_of = {}
    for i, comp in enumerate(_components(others, rest)):
        for v in comp:
            comp_of[v] = i
    classes: dict[object, set[str]] = {}
    for e in g.incident(w):
        key = ("loop", e.id) if e.is_self_loop else comp_of[e.other(w)]
        classes.setdefault(key, set()).add(e.id)
    return [frozenset(c) for c in classes.values()]


def separation_classes(g: FeynGraph, u: str, v: str) -> list[frozenset[str]]:
    """Edge classes of ``g`` relative to the vertex pair {u, v}.

    Two edges are in one class when they are linked through vertices other
    than u and v.  Any union of classes meets its complement only in {u, v}.
    """
    inner = list(g.edges)
    parent: dict[str, str] = {e.id: e.id for e in inner}

    def find(a: str) -> str:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    by_vertex: dict[str, str] = {}
    for e in inner:
        for x_ in e.ends:
            if x_ in (u, v):
                continue
            if x_ in by_vertex:
                parent[find(e.id)] = find(by_vertex[x_])
            else:
                by_vertex[x_] = e.id
    classes: dict[str, set[str]] = {}
    for e in inner:
        classes.setdefault(find(e.id), set()).add(e.id)
    return [frozenset(c) for c in classes.values()]


def _touched(g: FeynGraph, ids: Iterable[str]) -> set[str]:
    ids = set(ids)
    return {v for e in g.edges if e.id in ids for v in e.ends}


def apply_whitney_move(g: FeynGraph, move: WhitneyMove) -> FeynGraph:
    """Apply vertex identification, vertex cleaving or a twist.

    Edge ids and variables are preserved.  Moves that would have to decide
    where a leg goes (cleaving a vertex with legs, twisting about a vertex
    with legs) are rejected.
    """
    if isinstance(move, Identify):
        _require_vertex(g, move.u)
        _require_vertex(g, move.v)
        comps = connected_components(g)
        if any(move.u in c and move.v in c for c in comps):
            raise InvalidMove(f"{move.u!r} and {move.v!r} lie in the same component")
        return _merge_vertices(g, move.u, move.v, g.edges)

    if isinstance(move, Cleave):
        w = move.w
        _require_vertex(g, w)
        _require_edges(g, move.part)
        incident = {e.id for e in g.incident(w)}
        if not move.part <= incident:
            raise InvalidMove(f"part contains edges not incident to {w!r}")
        if not move.part or move.part == incident:
            raise InvalidMove(f"part must be a nonempty proper subset of the edges at {w!r}")
        for cls in cleave_classes(g, w):
            if cls & move.part and cls - move.part:
                raise InvalidMove(f"{w!r} is not a cut vertex for this edge partition")
        if g.legs_at(w):
            raise InvalidMove(f"ambiguous leg: {w!r} carries a leg")
        new = w + "'"
        while new in g.vertices:
            new += "'"

        def mv(e: Edge) -> Edge:
            if e.id not in move.part:
                return e
            return replace(e, ends=tuple(new if x_ == w else x_ for x_ in e.ends))

        idx = g.vertices.index(w)
        return replace(
            g,
            vertices=g.vertices[: idx + 1] + (new,) + g.vertices[idx + 1 :],
            edges=tuple(mv(e) for e in g.edges),
        )

    if isinstance(move, Twist):
        u, v = move.u, move.v
        _require_vertex(g, u)
        _require_vertex(g, v)
        _require_edges(g, move.side)
        if u == v:
            raise InvalidMove("twist needs two distinct vertices")
        rest = set(g.edge_ids()) - move.side
        if not move.side or not rest:
            raise InvalidMove("twist side must be a nonempty proper subset of the edges")
        vs, vr = _touched(g, move.side), _touched(g, rest)
        if not (vs & vr) <= {u, v} or not {u, v} <= vs or not {u, v} <= vr:
            raise InvalidMove(f"{{{u!r}, {v!r}}} is not a 2-separation for this side")
        if g.legs_at(u) or g.legs_at(v):
            raise InvalidMove("ambiguous leg: a twist vertex carries a leg")
        swap = {u: v, v: u}

        def tw(e: Edge) -> Edge:
            if e.id not in move.side:
                return e
            return replace(e, ends=tuple(swap.get(x_, x_) for x_ in e.ends))

        return replace(g, edges=tuple(tw(e) for e in g.edges))

    raise TypeError(f"not a Whitney move: {move!r}")


# -- labelled isomorphism -----------------------------------------------------


def find_graph_isomorphism(g: FeynGraph, h: FeynGraph) -> dict[str, str] | None:
    """Vertex bijection carrying every edge of g onto the same-id edge of h.

    Legs must be carried along as well.  Returns None if no such map exists.
    """
    if g.n_vertices != h.n_vertices or sorted(g.edge_ids()) != sorted(h.edge_ids()):
        return None
    if sorted(l.momentum for l in g.legs) != sorted(l.momentum for l in h.legs):
        return None
    hedge = {e.id: e for e in h.edges}
    for e in g.edges:
        if hedge[e.id].var != e.var or hedge[e.id].kind != e.kind:
            return None
        if e.is_self_loop != hedge[e.id].is_self_loop:
            return None

    def degree(graph: FeynGraph, v: str) -> tuple[int, int]:
        return (sum(x_ == v for e in graph.edges for x_ in e.ends), len(graph.legs_at(v)))

    hdeg = {v: degree(h, v) for v in h.vertices}
    gdeg = {v: degree(g, v) for v in g.vertices}
    if sorted(hdeg.values()) != sorted(gdeg.values()):
        return None
    hleg = {l.momentum: l.vertex for l in h.legs}
    gv = list(g.vertices)
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(v: str) -> bool:
        for e in g.incident(v):
            a, b = e.ends
            if a in mapping and b in mapping:
                if {mapping[a], mapping[b]} != set(hedge[e.id].ends):
                    return False
            else:
                if mapping[v] not in hedge[e.id].ends:
                    return False
        return all(hleg[l.momentum] == mapping[v] for l in g.legs_at(v))

    def search(pos: int) -> bool:
        if pos == len(gv):
            return True
        v = gv[pos]
        for w in h.vertices:
            if w in used or hdeg[w] != gdeg[v]:
                continue
            mapping[v] = w
            used.add(w)
            if consistent(v) and search(pos + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if search(0) else None


# -- file format ----------------------------------------------------------------

_TOP_FIELDS = {"name", "vertices", "edges", "legs", "masses"}
_EDGE_FIELDS = {"id", "ends", "var"}
_LEG_FIELDS = {"momentum", "vertex"}


def _fail(msg: str, source: str) -> GraphFormatError:
    return GraphFormatError(f"{source}: {msg}")


def parse_graph(text: str, source: str = "<graph>") -> FeynGraph:
    """Parse the JSON graph format; unknown fields are rejected."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _fail(f"line {exc.lineno} column {exc.colno}: {exc.msg}", source) from None
    if not isinstance(data, dict):
        raise _fail("top level must be an object", source)
    unknown = set(data) - _TOP_FIELDS
    if unknown:
        raise _fail(f"unknown field(s) {sorted(unknown)}", source)
    for req in ("vertices", "edges"):
        if req not in data:
            raise _fail(f"missing field {req!r}", source)
    name = data.get("name", "")
    if not isinstance(name, str):
        raise _fail("'name' must be a string", source)
    vertices = data["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise _fail("'vertices' must be a list of strings", source)
    edges = []
    if not isinstance(data["edges"], list):
        raise _fail("'edges' must be a list", source)
    for k, item in enumerate(data["edges"]):
        where = f"edges[{k}]"
        if not isinstance(item, dict):
            raise _fail(f"{where} must be an object", source)
        if set(item) != _EDGE_FIELDS:
            raise _fail(f"{where} must have exactly the fields {sorted(_EDGE_FIELDS)}", source)
        ends = item["ends"]
        if (
            not isinstance(item["id"], str)
            or not isinstance(ends, list)
            or len(ends) != 2
            or not all(isinstance(v, str) for v in ends)
        ):
            raise _fail(f"{where} has a malformed 'id' or 'ends'", source)
        var = item["var"]
        if not isinstance(var, int) or isinstance(var, bool) or var < 1:
            raise _fail(f"{where}.var must be a positive integer", source)
        edges.append(Edge(item["id"], (ends[0], ends[1]), var))
    legs = []
    raw_legs = data.get("legs", [])
    if not isinstance(raw_legs, list):
        raise _fail("'legs' must be a list", source)
    for k, item in enumerate(raw_legs):
        where = f"legs[{k}]"
        if not isinstance(item, dict) or set(item) != _LEG_FIELDS:
            raise _fail(f"{where} must have exactly the fields {sorted(_LEG_FIELDS)}", source)
        mom = item["momentum"]
        if not isinstance(mom, int) or isinstance(mom, bool) or mom < 1:
            raise _fail(f"{where}.momentum must be a positive integer", source)
        if not isinstance(item["vertex"], str):
            raise _fail(f"{where}.vertex must be a string", source)
        legs.append(Leg(mom, item["vertex"]))
    masses = data.get("masses", {})
    if not isinstance(masses, dict) or not all(
        isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in masses.values()
    ):
        raise _fail("'masses' must map edge ids to positive integers", source)
    try:
        return FeynGraph(
            vertices=tuple(vertices),
            edges=tuple(edges),
            legs=tuple(legs),
            masses=dict(masses),
            name=name,
        )
    except GraphError as exc:
        raise _fail(str(exc), source) from None


def dump_graph(g: FeynGraph) -> str:
    if g.n_external:
        raise GraphError("extended graphs have no file representation")
    data: dict[str, object] = {
        "name": g.name,
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "ends": list(e.ends), "var": e.var} for e in g.edges],
        "legs": [{"momentum": l.momentum, "vertex": l.vertex} for l in g.legs],
    }
    if g.masses:
        data["masses"] = {e.id: g.masses[e.id] for e in g.edges if e.id in g.masses}
    return _compact_dump(data) + "\n"


def _compact_dump(data: dict) -> str:
    # one edge/leg per line keeps fixtures readable and diffable
    lines = ["{"]
    keys = list(data)
    for n, key in enumerate(keys):
        value = data[key]
        comma = "," if n < len(keys) - 1 else ""
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"  {json.dumps(key)}: [")
            for m, item in enumerate(value):
                sep = "," if m < len(value) - 1 else ""
                lines.append(f"    {json.dumps(item)}{sep}")
            lines.append(f"  ]{comma}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value)}{comma}")
    lines.append("}")
    return "\n".join(lines)


def load_graph(path: str | Path) -> FeynGraph:
    p = Path(path)
    return parse_graph(p.read_text(encoding="utf-8"), source=str(p))


def relabel_vertices(g: FeynGraph, names: Mapping[str, str]) -> FeynGraph:
    def mv(v: str) -> str:
        return names.get(v, v)

    return replace(
        g,
        vertices=tuple(mv(v) for v in g.vertices),
        edges=tuple(replace(e, ends=(mv(e.ends[0]), mv(e.ends[1]))) for e in g.edges),
        legs=tuple(Leg(l.momentum, mv(l.vertex)) for l in g.legs),
    )
