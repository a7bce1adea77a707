import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symforge.poly import (
    LEG,
    ZERO,
    NotDivisible,
    NotMultilinear,
    Poly,
    exact_div,
    find_variable_isomorphism,
    grade_by_leg_degree,
    is_homogeneous,
    is_multilinear,
    msq,
    reciprocal_transform,
    rename_feyn,
    sp,
    x,
    z,
)

from .conftest import polys

P = Poly.parse


class TestArithmetic:
    def test_add_disjoint(self):
        assert x(1) + x(2) == P("x1 + x2")

    def test_add_cancels_to_zero(self):
        r = x(1) + (-x(1))
        assert r == ZERO and r.is_zero() and str(r) == "0"

    def test_add_merges_like_terms(self):
        assert 2 * x(1) * x(2) + 3 * x(1) * x(2) == 5 * x(1) * x(2)

    def test_mul_distributes(self):
        assert (x(1) + x(2)) * x(3) == P("x1*x3 + x2*x3")

    def test_mul_by_zero(self):
        assert (x(1) + 7) * ZERO == ZERO

    def test_binomial(self):
        assert (x(1) + x(2)) ** 2 == P("x1^2 + 2*x1*x2 + x2^2")

    def test_zero_coefficients_never_stored(self):
        p = Poly({((( 0, 1, 0), 1),): 0})
        assert len(p) == 0

    def test_dot_atom_is_symmetric(self):
        assert sp(2, 1) == sp(1, 2)
        assert str(sp(3, 1)) == "sp(1,3)"


class TestRendering:
    def test_canonical_text(self):
        p = P("x2 + 3*x1^2 - sp(1,2)*x1 + msq4 - 1 + z2*x1")
        assert str(p) == "3*x1^2 + x1*z2 - x1*sp(1,2) + x2 + msq4 - 1"

    def test_leading_negative(self):
        assert str(-x(1) * x(2) * sp(1, 1)) == "-x1*x2*sp(1,1)"

    def test_atom_order_feyn_leg_dot_mass(self):
        assert str(msq(1) * sp(1, 1) * z(1) * x(9)) == "x9*z1*sp(1,1)*msq1"

    @given(polys())
    def test_parse_roundtrip(self, p):
        assert P(str(p)) == p

    def test_parse_parentheses(self):
        assert P("(x1+x2)*(x1-x2)") == x(1) ** 2 - x(2) ** 2

    def test_parse_error_has_column(self):
        with pytest.raises(ValueError, match="column"):
            P("x1 + $")


class TestRingAxioms:
    @given(polys(), polys(), polys())
    def test_associativity(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)

    @given(polys(), polys())
    def test_commutativity(self, a, b):
        assert a + b == b + a
        assert a * b == b * a

    @given(polys(), polys(), polys())
    def test_distributivity(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(polys())
    def test_cancellation(self, a):
        assert (a - a).is_zero()

    @given(polys())
    def test_hash_consistent_with_eq(self, a):
        assert hash(a) == hash(P(str(a)))


class TestExactDiv:
    def test_monomial_factor(self):
        assert exact_div(P("x1*x2 + x1*x3"), x(1)) == P("x2 + x3")

    def test_difference_of_squares(self):
        assert exact_div(P("x1^2 - x2^2"), P("x1 - x2")) == P("x1 + x2")

    def test_not_divisible(self):
        with pytest.raises(NotDivisible):
            exact_div(P("x1 + x2"), x(3))

    def test_integer_content_must_divide(self):
        with pytest.raises(NotDivisible):
            exact_div(P("3*x1"), Poly.const(2))

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            exact_div(x(1), ZERO)

    @settings(max_examples=150)
    @given(polys(), polys())
    def test_mul_then_div(self, a, b):
        if b.is_zero():
            return
        assert exact_div(a * b, b) == a


class TestGrading:
    def test_direct(self):
        w = P("x1*z1 + x2*z1*z2")
        assert grade_by_leg_degree(w) == [ZERO, P("x1*z1"), P("x2*z1*z2")]

    def test_no_legs(self):
        assert grade_by_leg_degree(P("x1 + x2")) == [P("x1 + x2")]

    def test_zero(self):
        assert grade_by_leg_degree(ZERO) == [ZERO]

    @given(polys())
    def test_components_sum_and_homogeneous(self, w):
        parts = grade_by_leg_degree(w)
        assert sum(parts, ZERO) == w
        for k, part in enumerate(parts):
            assert is_homogeneous(part, None, k, kind=LEG)


class TestPredicates:
    @pytest.mark.parametrize(
        "text, expected", [("x1*x2 + x3", True), ("x1^2", False), ("0", True)]
    )
    def test_multilinear(self, text, expected):
        assert is_multilinear(P(text), [1, 2, 3]) is expected

    def test_multilinear_ignores_unlisted(self):
        assert is_multilinear(P("x1^2*x2"), [2])

    @pytest.mark.parametrize(
        "text, degree, expected",
        [("x1*x2 + x3*x4", 2, True), ("x1 + x2*x3", 1, False), ("0", 5, True)],
    )
    def test_homogeneous(self, text, degree, expected):
        assert is_homogeneous(P(text), [1, 2, 3, 4], degree) is expected

    def test_homogeneous_only_counts_listed_atoms(self):
        assert is_homogeneous(P("x1*sp(1,1) + x2*msq3*msq2"), [1, 2], 1)


class TestReciprocal:
    def test_bubble_is_self_dual(self):
        assert reciprocal_transform(P("x1 + x2"), [1, 2]) == P("x2 + x1")

    def test_complement(self):
        assert reciprocal_transform(P("x1*x2"), [1, 2, 3]) == x(3)

    def test_carries_kinematics(self):
        assert reciprocal_transform(P("-sp(1,1)"), [1, 2]) == P("-x1*x2*sp(1,1)")

    def test_rejects_squares(self):
        with pytest.raises(NotMultilinear):
            reciprocal_transform(P("x1^2"), [1, 2])

    def test_rejects_foreign_variable(self):
        with pytest.raises(NotMultilinear):
            reciprocal_transform(P("x4"), [1, 2])

    @given(st.sets(st.frozensets(st.integers(1, 4)), max_size=8), st.lists(st.integers(-3, 3), min_size=8, max_size=8))
    def test_involution(self, supports, coeffs):
        p = ZERO
        for s, c in zip(sorted(supports, key=sorted), coeffs):
            term = Poly.const(c)
            for i in s:
                term = term * x(i)
            p = p + term
        vars_ = [1, 2, 3, 4]
        assert reciprocal_transform(reciprocal_transform(p, vars_), vars_) == p


class TestVariableIsomorphism:
    def test_hand_example(self):
        p, q = P("x1 + x2*x3"), P("x3 + x1*x2")
        sigma = find_variable_isomorphism(p, q)
        assert sigma is not None
        assert rename_feyn(p, sigma) == q
        assert sorted(sigma) == [1, 2, 3] and sorted(sigma.values()) == [1, 2, 3]

    def test_identity(self):
        p = P("x1*x2 + x2*x3 + x1*x3")
        sigma = find_variable_isomorphism(p, p)
        assert rename_feyn(p, sigma) == p

    def test_degree_mismatch(self):
        assert find_variable_isomorphism(P("x1 + x2"), P("x1*x2")) is None

    def test_kinematics_must_match(self):
        assert find_variable_isomorphism(P("x1*sp(1,1)"), P("x1*sp(1,2)")) is None

    @settings(max_examples=60)
    @given(polys(atoms=[x(1), x(2), x(3), x(4), x(5), sp(1, 1)]), st.permutations([1, 2, 3, 4, 5]))
    def test_finds_random_relabelling(self, p, perm):
        sigma = dict(zip([1, 2, 3, 4, 5], perm))
        q = rename_feyn(p, sigma)
        found = find_variable_isomorphism(p, q)
        assert found is not None
        assert rename_feyn(p, found) == q


def test_evaluate_and_substitute():
    p = P("x1*x2 + 2*z1 - sp(1,1)")
    assert p.substitute({(LEG, 1, 0): 0}) == P("x1*x2 - sp(1,1)")
    vals = {a: 2 for a in p.atoms()}
    assert p.evaluate(vals) == 4 + 4 - 2


def test_isomorphism_search_is_exhaustive_on_small_case():
    # brute-force oracle over all bijections
    p = P("x1*x2 + x2*x3 + 2*x3")
    q = P("x2*x3 + x3*x1 + 2*x1")
    brute = [
        dict(zip([1, 2, 3], perm))
        for perm in itertools.permutations([1, 2, 3])
        if rename_feyn(p, dict(zip([1, 2, 3], perm))) == q
    ]
    assert brute
    assert find_variable_isomorphism(p, q) in brute
