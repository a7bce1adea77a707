"""Dodgson's determinant relation and the graph-polynomial identities it implies.

For two regular edges ``ea = (vi, vk)`` and ``eb = (vj, vk)`` sharing ``vk``::

    calU(G/ea-eb) calU(G/eb-ea) - calU(G-ea-eb) calU(G/ea/eb) = (Delta1 / (xa xb))^2

and at the next order in the external momenta::

    calU(G/ea-eb) calF0(G/eb-ea) - calU(G-ea-eb) calF0(G/ea/eb)
  + calF0(G/ea-eb) calU(G/eb-ea) - calF0(G-ea-eb) calU(G/ea/eb)
        = 2 (Delta1 / (xa xb)) (Delta2 / (xa xb))

Delta2 is obtained by exact division.  Minor graphs that are disconnected
contribute ``calU = 0`` and their two-tree ``calF0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .forest import (
    delta1,
    first_symanzik_calu,
    second_symanzik_calf0,
)
from .graph import FeynGraph, GraphError, contract_edge, delete_edge, is_regular_edge
from .laplacian import det, submatrix
from .poly import ZERO, NotDivisible, Poly, exact_div, is_multilinear

__all__ = [
    "InvalidSetup",
    "DegenerateDelta1",
    "DodgsonSetup",
    "dodgson_determinant_check",
    "valid_setups",
    "UIdentity",
    "MixedIdentity",
    "dodgson_u_identity",
    "dodgson_mixed_identity",
]


class InvalidSetup(GraphError):
    pass


class DegenerateDelta1(ArithmeticError):
    pass


def dodgson_determinant_check(A: Sequence[Sequence[Poly]], i: int, j: int) -> bool:
    """det(A) det(A[i,j]) == det(A[i]) det(A[j]) - det(A[i;j]) det(A[j;i]) (0-based i, j)."""
    n = len(A)
    if n < 2:
        raise IndexError("matrix must be at least 2x2")
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"need distinct indices in range(0, {n}), got {i}, {j}")
    lhs = det(A) * det(submatrix(A, [i, j], [i, j]))
    rhs = det(submatrix(A, [i], [i])) * det(submatrix(A, [j], [j])) - det(
        submatrix(A, [i], [j])
    ) * det(submatrix(A, [j], [i]))
    return lhs == rhs


@dataclass(frozen=True)
class DodgsonSetup:
    graph: FeynGraph
    ea: str
    eb: str
    vi: str
    vj: str
    vk: str

    @classmethod
    def from_edges(cls, g: FeynGraph, ea: str, eb: str) -> DodgsonSetup:
        """Read the vertex roles off two edges that share exactly one vertex."""
        a, b = g.edge(ea), g.edge(eb)
        if ea == eb:
            raise InvalidSetup("ea and eb must be different edges")
        for eid in (ea, eb):
            if not is_regular_edge(g, eid):
                raise InvalidSetup(f"edge {eid!r} is not regular")
        shared = set(a.ends) & set(b.ends)
        if len(shared) != 1:
            raise InvalidSetup(f"edges {ea!r} and {eb!r} must share exactly one vertex")
        (vk,) = shared
        return cls(g, ea, eb, a.other(vk), b.other(vk), vk)

    def __post_init__(self) -> None:
        g = self.graph
        try:
            a, b = g.edge(self.ea), g.edge(self.eb)
        except KeyError as exc:
            raise InvalidSetup(str(exc)) from None
        if set(a.ends) != {self.vi, self.vk} or set(b.ends) != {self.vj, self.vk}:
            raise InvalidSetup("ea must join vi-vk and eb must join vj-vk")
        if len({self.vi, self.vj, self.vk}) != 3:
            raise InvalidSetup("vi, vj, vk must be distinct")
        for eid in (self.ea, self.eb):
            if not is_regular_edge(g, eid):
                raise InvalidSetup(f"edge {eid!r} is not regular")

    @property
    def xa_xb(self) -> Poly:
        return self.graph.edge(self.ea).poly * self.graph.edge(self.eb).poly

    def minors(self) -> dict[str, FeynGraph]:
        g, ea, eb = self.graph, self.ea, self.eb
        return {
            "G/ea-eb": delete_edge(contract_edge(g, ea), eb),
            "G/eb-ea": delete_edge(contract_edge(g, eb), ea),
            "G-ea-eb": delete_edge(delete_edge(g, ea), eb),
            "G/ea/eb": contract_edge(contract_edge(g, ea), eb),
        }


def valid_setups(g: FeynGraph) -> list[DodgsonSetup]:
    """Every unordered pair of regular edges sharing exactly one vertex."""
    regular = [e for e in g.edges if is_regular_edge(g, e.id)]
    out = []
    for n, a in enumerate(regular):
        for b in regular[n + 1 :]:
            if len(set(a.ends) & set(b.ends)) == 1:
                out.append(DodgsonSetup.from_edges(g, a.id, b.id))
    return out


def _degenerate(minors: dict[str, FeynGraph]) -> tuple[str, ...]:
    return tuple(name for name, h in minors.items() if not h.is_connected())


@dataclass(frozen=True)
class UIdentity:
    lhs: Poly
    delta1_quotient: Poly
    holds: bool
    degenerate_minors: tuple[str, ...] = ()


def _delta1_quotient(s: DodgsonSetup) -> Poly:
    return exact_div(delta1(s.graph, s.vi, s.vj, s.vk), s.xa_xb)


def dodgson_u_identity(s: DodgsonSetup) -> UIdentity:
    minors = s.minors()
    u = {k: first_symanzik_calu(h, allow_disconnected=True) for k, h in minors.items()}
    lhs = u["G/ea-eb"] * u["G/eb-ea"] - u["G-ea-eb"] * u["G/ea/eb"]
    q = _delta1_quotient(s)
    return UIdentity(lhs, q, lhs == q * q, _degenerate(minors))


@dataclass(frozen=True)
class MixedIdentity:
    lhs: Poly
    delta2_quotient: Poly
    holds: bool
    degenerate_minors: tuple[str, ...] = ()


def dodgson_mixed_identity(s: DodgsonSetup) -> MixedIdentity:
    """Check the mixed calU/calF0 identity and extract Delta2/(xa xb).

    ``holds`` requires the division by ``2 Delta1/(xa xb)`` to be exact and
    the quotient to be linear in every Feynman parameter.
    """
    minors = s.minors()
    degenerate = _degenerate(minors)
    if not s.graph.legs:
        return MixedIdentity(ZERO, ZERO, True, degenerate)
    u = {k: first_symanzik_calu(h, allow_disconnected=True) for k, h in minors.items()}
    f = {k: second_symanzik_calf0(h, allow_disconnected=True) for k, h in minors.items()}
    lhs = (
        u["G/ea-eb"] * f["G/eb-ea"]
        - u["G-ea-eb"] * f["G/ea/eb"]
        + f["G/ea-eb"] * u["G/eb-ea"]
        - f["G-ea-eb"] * u["G/ea/eb"]
    )
    q1 = _delta1_quotient(s)
    if not q1:
        raise DegenerateDelta1("Delta1 vanishes; the identity reads 0 = 0")
    try:
        q2 = exact_div(lhs, q1 * 2)
    except NotDivisible:
        return MixedIdentity(lhs, ZERO, False, degenerate)
    return MixedIdentity(lhs, q2, is_multilinear(q2 * s.xa_xb), degenerate)

