"""Laplacian matrices over the polynomial ring and their minor determinants.

Indices are 0-based and follow the graph's vertex order.  For an extended
graph the external vertices are the trailing ``n_external`` indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

from . import kinematics
from .forest import Disconnected, first_symanzik_u, second_symanzik_f0
from .graph import FeynGraph, GraphError, connected_components, extend_with_external_vertices
from .poly import LEG, ONE, ZERO, Poly, exact_div, grade_by_leg_degree, monomial_poly

__all__ = [
    "NoLegs",
    "LaplacianMatrix",
    "build_laplacian",
    "det",
    "det_cofactor",
    "submatrix",
    "minor_det",
    "matrix_tree_check",
    "w_polynomial",
    "substitute_leg_products",
    "WExpansion",
    "w_expansion_check",
    "principal_minor_dets",
    "f0_from_w",
    "u_from_laplacian",
]

Matrix = Sequence[Sequence[Poly]]


class NoLegs(GraphError):
    pass


@dataclass(frozen=True)
class LaplacianMatrix:
    entries: tuple[tuple[Poly, ...], ...]
    vertex_order: tuple[str, ...]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i][j]

    def index(self, v: str) -> int:
        return self.vertex_order.index(v)


def build_laplacian(g: FeynGraph, variable_source: str = "edge") -> LaplacianMatrix:
    """Weighted Laplacian of ``g``; self-loops never contribute.

    ``variable_source="extended"`` builds the Laplacian of the extended graph,
    whose leg edges carry the ``z_j`` variables.
    """
    if variable_source == "extended":
        g = extend_with_external_vertices(g)
    elif variable_source != "edge":
        raise ValueError(f"unknown variable source {variable_source!r}")
    pos = {v: i for i, v in enumerate(g.vertices)}
    n = len(pos)
    rows = [[ZERO] * n for _ in range(n)]
    for e in g.edges:
        if e.is_self_loop:
            continue
        a, b = pos[e.ends[0]], pos[e.ends[1]]
        w = e.poly
        rows[a][a] = rows[a][a] + w
        rows[b][b] = rows[b][b] + w
        rows[a][b] = rows[a][b] - w
        rows[b][a] = rows[b][a] - w
    return LaplacianMatrix(tuple(tuple(r) for r in rows), tuple(g.vertices))


def submatrix(A: Matrix, removed_rows: Iterable[int], removed_cols: Iterable[int]) -> list[list[Poly]]:
    n = len(A)
    rr, rc = set(removed_rows), set(removed_cols)
    for k in rr | rc:
        if not 0 <= k < n:
            raise IndexError(f"index {k} out of range for dimension {n}")
    return [[A[i][j] for j in range(n) if j not in rc] for i in range(n) if i not in rr]


def det(A: Matrix) -> Poly:
    """Fraction-free (Bareiss) elimination; every division is exact."""
    n = len(A)
    if n == 0:
        return ONE
    if any(len(row) != n for row in A):
        raise ValueError("matrix is not square")
    M = [[v if isinstance(v, Poly) else Poly.const(v) for v in row] for row in A]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return ZERO
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * pivot - M[i][k] * M[k][j]
                M[i][j] = exact_div(num, prev) if prev != ONE else num
            M[i][k] = ZERO
        prev = pivot
    result = M[n - 1][n - 1]
    return -result if sign < 0 else result


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det_cofactor(A: Matrix) -> Poly:
    """Leibniz expansion; an independent check for small matrices."""
    n = len(A)
    out = ZERO
    for p in permutations(range(n)):
        term = Poly.const(_perm_sign(p))
        for i in range(n):
            term = term * A[i][p[i]]
            if not term:
                break
        out = out + term
    return out


def minor_det(L: LaplacianMatrix | Matrix, removed_rows: Iterable[int], removed_cols: Iterable[int]) -> Poly:
    A = L.entries if isinstance(L, LaplacianMatrix) else L
    return det(submatrix(A, removed_rows, removed_cols))


def principal_minor_dets(g: FeynGraph) -> list[Poly]:
    L = build_laplacian(g)
    return [minor_det(L, [i], [i]) for i in range(L.dim)]


def matrix_tree_check(g: FeynGraph) -> bool:
    """det L[i] equals the spanning-tree polynomial U for every vertex i."""
    if len(connected_components(g)) > 1:
        raise Disconnected(f"graph {g.name or '<unnamed>'} is not connected")
    u = first_symanzik_u(g)
    return all(d == u for d in principal_minor_dets(g))


def w_polynomial(g: FeynGraph) -> Poly:
    """det of the extended Laplacian with all external rows/columns removed."""
    if len(connected_components(g)) > 1:
        raise Disconnected(f"graph {g.name or '<unnamed>'} is not connected")
    if not g.legs:
        raise NoLegs("the W polynomial needs at least one leg")
    return _w_raw(g)


def _w_raw(g: FeynGraph) -> Poly:
    ext = extend_with_external_vertices(g)
    L = build_laplacian(ext)
    r = ext.n_vertices - ext.n_external
    removed = range(r, ext.n_vertices)
    return minor_det(L, removed, removed)


def substitute_leg_products(w2: Poly, momenta: Iterable[int]) -> Poly:
    """Replace each ``z_i z_j`` (and ``z_i^2``) by the reduced ``p_i . p_j``."""
    moms = list(momenta)
    out = ZERO
    for m, c in w2.terms.items():
        legs: list[int] = []
        rest = []
        for a, e in m:
            if a[0] == LEG:
                legs.extend([a[1]] * e)
            else:
                rest.append((a, e))
        if len(legs) != 2:
            raise ValueError("expected a polynomial homogeneous of degree 2 in the leg variables")
        i, j = legs
        out = out + monomial_poly(tuple(rest), c) * kinematics.dot({i: 1}, {j: 1}, moms)
    return out


@dataclass(frozen=True)
class WExpansion:
    w0_zero: bool
    w1_matches: bool
    w2_matches_f0: bool

    @property
    def ok(self) -> bool:
        return self.w0_zero and self.w1_matches and self.w2_matches_f0


def w_expansion_check(g: FeynGraph) -> WExpansion:
    """Grade W by leg degree and compare with U and the forest-built F0."""
    w = w_polynomial(g)
    grades = grade_by_leg_degree(w) + [ZERO, ZERO, ZERO]
    zsum = sum((Poly.atom((LEG, leg.momentum, 0)) for leg in g.legs), ZERO)
    u = first_symanzik_u(g)
    f0 = second_symanzik_f0(g)
    return WExpansion(
        w0_zero=grades[0].is_zero(),
        w1_matches=grades[1] == u * zsum,
        w2_matches_f0=substitute_leg_products(grades[2], g.momenta()) == f0,
    )


def f0_from_w(g: FeynGraph) -> Poly:
    """Tree-side F0 read off the degree-2 part of W."""
    grades = grade_by_leg_degree(w_polynomial(g)) + [ZERO, ZERO, ZERO]
    return substitute_leg_products(grades[2], g.momenta())


def u_from_laplacian(g: FeynGraph, vertex: int = -1) -> Poly:
    """det L[i] for the given vertex index (default: last); 0 if disconnected."""
    L = build_laplacian(g)
    if L.dim == 0:
        return ZERO
    i = vertex % L.dim
    return minor_det(L, [i], [i])
