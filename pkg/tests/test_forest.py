import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symforge.corpus import random_graph
from symforge.fixtures import load_fixture
from symforge.forest import (
    Disconnected,
    NotRegularEdge,
    calu_from_u,
    deletion_contraction_check,
    delta1,
    enumerate_spanning_forests,
    first_symanzik_calu,
    first_symanzik_u,
    full_f,
    kinematic_invariant,
    second_symanzik_calf0,
    second_symanzik_f0,
    side_invariant,
    tree_count,
)
from symforge.graph import Edge, FeynGraph, Leg, delete_edge, is_regular_edge, loop_number
from symforge.poly import Poly, is_homogeneous, is_multilinear, reciprocal_transform

from .oracles import forests_by_removal, kirchhoff_tree_count, symanzik_oracle, to_sympy

P = Poly.parse

FIG1_U = "x1*x2*(x3+x4) + (x1+x2)*x3*x4 + (x1*x2+x1*x3+x2*x4+x3*x4)*x5"


def corpus_slice(seed, count):
    rng = random.Random(seed)
    return [random_graph(rng, name=f"s{seed}-{k}") for k in range(count)]


class TestEnumeration:
    def test_fig1_has_eight_trees(self, fig1):
        trees = enumerate_spanning_forests(fig1, 1)
        assert len(trees) == 8
        # each tree is obtained by removing l = 2 edges
        assert {frozenset(fig1.edge_ids()) - t.edges for t in trees} == {
            r for r, _ in forests_by_removal(fig1, 1)
        }

    def test_k_must_be_positive(self, fig1):
        with pytest.raises(ValueError):
            enumerate_spanning_forests(fig1, 0)

    def test_self_loops_never_in_forest(self, bubble):
        g = FeynGraph(bubble.vertices, bubble.edges + (Edge("e3", ("v1", "v1"), 3),))
        for k in (1, 2):
            assert all("e3" not in f.edges for f in enumerate_spanning_forests(g, k))

    @pytest.mark.parametrize("g", corpus_slice(1, 60), ids=lambda g: g.name)
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_matches_removal_oracle(self, g, k):
        ours = {f.edges for f in enumerate_spanning_forests(g, k)}
        all_ids = frozenset(g.edge_ids())
        theirs = {all_ids - removed for removed, _ in forests_by_removal(g, k)}
        assert ours == theirs

    @pytest.mark.parametrize("g", corpus_slice(2, 40), ids=lambda g: g.name)
    def test_tree_count_matches_kirchhoff(self, g):
        assert tree_count(g) == kirchhoff_tree_count(g)


class TestFirstSymanzik:
    def test_fig1_u(self, fig1):
        assert first_symanzik_u(fig1) == P(FIG1_U)

    def test_fig1_calu_is_reciprocal(self, fig1):
        calu = first_symanzik_calu(fig1)
        assert calu == reciprocal_transform(P(FIG1_U), [1, 2, 3, 4, 5])
        assert calu == P("x1*x2 + x1*x3 + x1*x5 + x2*x4 + x2*x5 + x3*x4 + x3*x5 + x4*x5")
        assert calu_from_u(fig1, first_symanzik_u(fig1)) == calu

    def test_bubble(self, bubble):
        assert first_symanzik_u(bubble) == P("x1 + x2")
        assert first_symanzik_calu(bubble) == P("x1 + x2")

    def test_tree_graph(self):
        g = load_fixture("path3")
        assert first_symanzik_u(g) == P("x1*x2*x3")
        assert first_symanzik_calu(g) == Poly.const(1)

    def test_disconnected(self):
        g = load_fixture("two-triangles")
        assert first_symanzik_u(g).is_zero()
        with pytest.raises(Disconnected):
            first_symanzik_calu(g)
        assert first_symanzik_calu(g, allow_disconnected=True).is_zero()

    def test_self_loop_variable_in_every_calu_term(self, bubble):
        g = FeynGraph(bubble.vertices, bubble.edges + (Edge("e3", ("v1", "v1"), 3),))
        assert first_symanzik_calu(g) == P("x1*x3 + x2*x3")
        assert first_symanzik_u(g) == P("x1 + x2")


class TestSecondSymanzik:
    def test_bubble(self, bubble):
        assert second_symanzik_f0(bubble) == P("-sp(1,1)")
        assert second_symanzik_calf0(bubble) == P("-x1*x2*sp(1,1)")

    def test_massive_bubble(self):
        g = load_fixture("bubble-massive")
        expected = P("x1^2*msq1 - x1*x2*sp(1,1) + x1*x2*msq1 + x1*x2*msq2 + x2^2*msq2")
        assert full_f(g) == expected

    def test_massive_tree_edge(self):
        g = FeynGraph(("a", "b"), (Edge("e1", ("a", "b"), 1),), masses={"e1": 1})
        assert full_f(g) == P("x1*msq1")

    def test_massless_full_f_is_calf0(self, fig1):
        assert full_f(fig1) == second_symanzik_calf0(fig1)

    def test_box_forest_cutting_e1_e3(self):
        box = load_fixture("box")
        f0 = second_symanzik_calf0(box)
        coeff = {m: c for m, c in f0.terms.items()}
        target = P("-x1*x3*sp(1,1) - 2*x1*x3*sp(1,2) - x1*x3*sp(2,2)")
        for m, c in target.terms.items():
            assert coeff[m] == c

    def test_no_legs_gives_zero(self, triangle):
        assert second_symanzik_calf0(triangle.without_legs()).is_zero()

    def test_single_leg_gives_zero(self):
        g = FeynGraph(("a", "b"), (Edge("e1", ("a", "b"), 1), Edge("e2", ("a", "b"), 2)), (Leg(1, "a"),))
        assert second_symanzik_f0(g).is_zero()

    def test_disconnected_requires_opt_in(self):
        g = load_fixture("two-triangles")
        with pytest.raises(Disconnected):
            second_symanzik_calf0(g)

    @pytest.mark.parametrize("g", corpus_slice(3, 50), ids=lambda g: g.name)
    def test_side_independence(self, g):
        for f in enumerate_spanning_forests(g, 2):
            a, b = f.components
            assert side_invariant(g, a) == side_invariant(g, b)
            assert kinematic_invariant(g, f) == side_invariant(g, a)


class TestAgainstOracle:
    @pytest.mark.parametrize("g", corpus_slice(4, 50), ids=lambda g: g.name)
    def test_all_four_polynomials(self, g):
        ref = symanzik_oracle(g)
        assert to_sympy(first_symanzik_u(g)) == ref["U"]
        assert to_sympy(first_symanzik_calu(g)) == ref["calU"]
        assert to_sympy(second_symanzik_f0(g)) == ref["F0"]
        assert to_sympy(second_symanzik_calf0(g)) == ref["calF0"]


class TestStructure:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 100_000))
    def test_homogeneity_and_multilinearity(self, seed):
        g = random_graph(random.Random(seed))
        l, r = loop_number(g), g.n_vertices
        vars_ = g.feyn_vars()
        calu, calf0 = first_symanzik_calu(g), second_symanzik_calf0(g)
        u, f0 = first_symanzik_u(g), second_symanzik_f0(g)
        assert is_homogeneous(calu, vars_, l) and is_multilinear(calu, vars_)
        assert is_homogeneous(calf0, vars_, l + 1) and is_multilinear(calf0, vars_)
        assert is_homogeneous(u, vars_, r - 1) and is_multilinear(u, vars_)
        assert is_homogeneous(f0, vars_, r - 2) and is_multilinear(f0, vars_)
        assert all(c == 1 for c in calu.terms.values())
        assert reciprocal_transform(u, vars_) == calu
        assert reciprocal_transform(f0, vars_) == calf0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 100_000))
    def test_tree_count_is_calu_at_one(self, seed):
        g = random_graph(random.Random(seed))
        ones = {(0, v, 0): 1 for v in g.feyn_vars()}
        assert first_symanzik_calu(g).evaluate(ones) == tree_count(g)


class TestDeletionContraction:
    def test_fig1_every_edge(self, fig1):
        assert all(deletion_contraction_check(fig1, e) for e in fig1.edge_ids())

    def test_bridge_rejected(self):
        with pytest.raises(NotRegularEdge):
            deletion_contraction_check(load_fixture("path3"), "e1")

    @pytest.mark.parametrize("g", corpus_slice(5, 50), ids=lambda g: g.name)
    def test_random(self, g):
        for e in g.edge_ids():
            if is_regular_edge(g, e):
                assert deletion_contraction_check(g, e)


class TestDelta1:
    def test_triangle(self, triangle):
        # only the forest {e1} = {ab} keeps a, b together and c apart
        assert delta1(triangle, "a", "b", "c") == P("x2*x3")

    def test_fig1(self, fig1):
        d = delta1(fig1, "v1", "v3", "v4")
        assert is_homogeneous(d, fig1.feyn_vars(), 3)
        assert all(c == 1 for c in d.terms.values())

    def test_needs_distinct_vertices(self, triangle):
        with pytest.raises(ValueError):
            delta1(triangle, "a", "a", "c")

    def test_cut_vertex_gives_zero(self):
        g = FeynGraph(
            ("k", "i", "j", "m"),
            (
                Edge("e1", ("i", "k"), 1),
                Edge("e2", ("i", "j"), 2),
                Edge("e3", ("j", "k"), 3),
                Edge("e4", ("k", "m"), 4),
                Edge("e5", ("k", "m"), 5),
            ),
        )
        # i and m separated by k: no 2-forest has i, m together without k
        assert delta1(g, "i", "m", "k").is_zero()

    def test_removal_oracle(self, fig1):
        expected = Poly.const(0)
        var_of = {e.id: e.var for e in fig1.edges}
        for removed, comps in forests_by_removal(fig1, 2):
            side = next(c for c in comps if "v1" in c)
            if "v2" in side and "v3" not in side:
                term = Poly.const(1)
                for eid in removed:
                    term = term * P(f"x{var_of[eid]}")
                expected = expected + term
        assert delta1(fig1, "v1", "v2", "v3") == expected

    def test_deleting_changes(self, triangle):
        assert delta1(delete_edge(triangle, "e1"), "a", "b", "c").is_zero()
