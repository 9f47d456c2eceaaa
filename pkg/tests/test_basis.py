import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvesing import (
    DEGREVLEX,
    LEX,
    NEGDEGLEX,
    NEGDEGREVLEX,
    INFINITE,
    Poly,
    StepBudgetExceeded,
    groebner_basis,
    parse_poly,
    standard_basis,
)
from curvesing.basis import _Budget, _Elt, _divides, _reduce_full, _reduce_scaled, _spoly, _lcm
from strategies import polys

R2 = ("x", "y")
R3 = ("x", "y", "z")


def P(s, ring=R3):
    return parse_poly(s, ring)


def gb_strings(gens, order=DEGREVLEX, ring=R3):
    return sorted(str(g) for g in groebner_basis([P(g, ring) for g in gens], order, ring))


# --- global bases ------------------------------------------------------------


def test_small_reduced_basis():
    assert gb_strings(["x^2 - 1", "x*y - 1"], ring=R2) == ["x - y", "y^2 - 1"]


def test_lex_basis_triangularizes():
    b = groebner_basis([P("x^2 + y^2 - 1", R2), P("x - y", R2)], LEX, R2)
    assert sorted(str(g) for g in b) == ["x - y", "y^2 - 1/2"]


def test_unit_and_zero_ideals():
    assert groebner_basis([P("x"), P("x + 1")], DEGREVLEX, R3).is_unit()
    b = groebner_basis([P("x*y"), P("0")], DEGREVLEX, R3)
    assert [str(g) for g in b] == ["x*y"]


@pytest.mark.parametrize("perm", list(itertools.permutations(range(3))))
def test_reduced_basis_is_canonical(perm):
    gens = ["x^2*y - z^2", "x^3 - y*z", "y^2 - x*z"]
    assert gb_strings([gens[i] for i in perm]) == gb_strings(gens)


def _is_groebner(basis, order):
    key = order.key
    elts = [_Elt(dict(g.terms), key) for g in basis]
    budget = _Budget(None)
    for f, g in itertools.combinations(elts, 2):
        s = _spoly(f, g, _lcm(f.lm, g.lm))
        if _reduce_full(s, elts, key, budget):
            return False
    return True


small = polys(R2, max_terms=3, max_deg=2)


@given(st.lists(small, min_size=1, max_size=3))
def test_buchberger_criterion_holds(gens):
    gens = [g for g in gens if g]
    if not gens:
        return
    b = groebner_basis(gens, DEGREVLEX, R2)
    assert _is_groebner(list(b), DEGREVLEX)
    for g in gens:
        assert b.contains(g)


@given(st.lists(small, min_size=1, max_size=3), small)
def test_normal_form_is_fully_reduced(gens, p):
    gens = [g for g in gens if g]
    if not gens:
        return
    b = groebner_basis(gens, DEGREVLEX, R2)
    r = b.normal_form(p)
    lms = b.leading_monomials()
    assert not any(_divides(l, m) for l in lms for m in r.terms)
    assert b.contains(p - r)


@given(st.lists(small, min_size=1, max_size=3), small)
def test_fraction_free_reduction_is_proportional(gens, p):
    gens = [g for g in gens if g]
    if not gens or not p:
        return
    b = groebner_basis(gens, DEGREVLEX, R2)
    key = DEGREVLEX.key
    exact = _reduce_full(p.terms, b._elts, key, _Budget(None))
    scaled = _reduce_scaled(p.terms, b._elts, key, _Budget(None))
    assert set(exact) == set(scaled)
    if exact:
        m = next(iter(exact))
        ratio = exact[m] / scaled[m]
        assert all(exact[t] == ratio * scaled[t] for t in exact)


def test_step_budget_is_enforced():
    gens = [P("x^2*y - z^2"), P("x^3 - y*z"), P("y^2 - x*z")]
    # two S-polynomials survive the pair criteria, one division step each
    groebner_basis(gens, DEGREVLEX, R3, step_budget=2)
    with pytest.raises(StepBudgetExceeded):
        groebner_basis(gens, DEGREVLEX, R3, step_budget=1)


def test_global_order_required():
    with pytest.raises(ValueError):
        groebner_basis([P("x")], NEGDEGREVLEX, R3)
    with pytest.raises(ValueError):
        standard_basis([P("x")], DEGREVLEX, R3)


# --- local bases -------------------------------------------------------------


def test_local_basis_sees_only_the_origin():
    # x + x^2 = x(1 + x) and 1 + x is a unit at 0
    b = standard_basis([P("x + x^2", R2), P("y", R2)], NEGDEGREVLEX, R2)
    assert b.staircase_count() == 1
    g = groebner_basis([P("x + x^2", R2), P("y", R2)], DEGREVLEX, R2)
    assert g.staircase_count() == 2


def test_local_standard_basis_three_lines_jacobian():
    b = standard_basis([P(s) for s in ["x*y", "y*z", "x*z", "x^2 + y^2 + z^2"]], NEGDEGREVLEX, R3)
    assert b.staircase_count() == 6
    assert b.cutoff == 3


def test_local_membership_of_unit_multiples():
    b = standard_basis([P("x*y", R2), P("y^2 - x^3", R2)], NEGDEGREVLEX, R2)
    assert b.contains(P("(1 + x)*x*y", R2))
    assert not b.contains(P("x", R2))


@pytest.mark.parametrize(
    "gens, expected",
    [
        (["x*y", "y*z", "x*z", "x^2 + y^2 + z^2"], 6),
        (["x^2*y - z^2", "x^3 - y*z", "y^2 - x*z", "x + y + z"], 3),
        (["x^2 - x^3", "y", "z"], 2),
        (["x*y", "y*z", "x*z"], INFINITE),
    ],
)
def test_local_colength_independent_of_local_order(gens, expected):
    a = standard_basis([P(g) for g in gens], NEGDEGREVLEX, R3).staircase_count()
    b = standard_basis([P(g) for g in gens], NEGDEGLEX, R3).staircase_count()
    assert a == b == expected


def test_degree_cap_adds_the_power_of_the_maximal_ideal():
    b = standard_basis([P("y", R2)], NEGDEGREVLEX, R2, degree_cap=3)
    assert b.staircase_count() == 3
    b = standard_basis([P("y - x^5", R2)], NEGDEGREVLEX, R2, degree_cap=4)
    assert b.staircase_count() == 4


def test_standard_monomials_and_dimension():
    b = groebner_basis([P("x^2", R2), P("y^2", R2), P("x*y", R2)], DEGREVLEX, R2)
    assert set(b.standard_monomials()) == {(0, 0), (1, 0), (0, 1)}
    assert b.dimension() == 0
    assert groebner_basis([P("x*y")], DEGREVLEX, R3).dimension() == 2
    assert groebner_basis([P("1")], DEGREVLEX, R3).dimension() == -1
    assert groebner_basis([P("x*y")], DEGREVLEX, R3).standard_monomials() is None
