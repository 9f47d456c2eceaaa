import pytest

from curvesing import (
    ConstMatrix,
    CurveGerm,
    DegenerateInputError,
    FamilyGerm,
    GenericityError,
    Ideal,
    ModulePresentation,
    RunConfig,
    br_multiplicity,
    ci_discrepancy,
    family_profile,
    generic_ci,
    hs_mult_jacobian,
    jacobian_ideal,
    milnor_number,
    multiplicity,
    parse_poly,
    residual_link,
    whitney_check,
)
from curvesing.invariants import _agreeing_value
from curvesing.poly import random_matrix
from corpus import GERMS, expected, germ

R3 = ("x", "y", "z")
R2 = ("x", "y")
# rows pick out f1 + f2 and f1 + f3
SUM_A = ConstMatrix([[1, 1, 0], [1, 0, 1]])
ROW_DELETION_A = ConstMatrix([[1, 0, 0], [0, 0, 1]])


def I(*gens, ring=R3):
    return Ideal.parse(ring, gens)


@pytest.fixture(scope="module")
def axes():
    return germ("three_axes")


@pytest.fixture(scope="module")
def c345():
    # f1, f2, f3 in this order: the fixed matrices below act on it
    eqs = ("x^2*y - z^2", "x^3 - y*z", "y^2 - x*z")
    return CurveGerm(R3, tuple(parse_poly(f, R3) for f in eqs))


# --- single invariants -------------------------------------------------------------


@pytest.mark.parametrize("name, m", [("three_axes", 3), ("c345", 3), ("line", 1), ("cusp", 2)])
def test_multiplicity(name, m):
    assert multiplicity(germ(name)) == m


def test_jacobian_ideal(axes):
    J = jacobian_ideal(axes)
    for v in ["x^2", "y^2", "z^2"]:
        assert J.contains(parse_poly(v, R3))
    cusp = germ("cusp")
    assert jacobian_ideal(cusp) == I("y^2 - x^3", "x^2", "y", ring=R2)
    assert jacobian_ideal(germ("line")).is_unit()


@pytest.mark.parametrize("name, e", [("three_axes", 6), ("c345", 8), ("cusp", 3), ("line", 0)])
def test_hs_mult_jacobian(name, e):
    assert hs_mult_jacobian(germ(name)) == e


def test_generic_ci_with_fixed_matrix(axes, c345):
    Z, A = generic_ci(axes, A=SUM_A)
    assert A is SUM_A and Z == I("x*y + y*z", "x*y + x*z")
    Z, _ = generic_ci(c345, A=SUM_A)
    assert Z == I("x^2*y - z^2 + x^3 - y*z", "x^2*y - z^2 + y^2 - x*z")


def test_generic_ci_on_complete_intersection():
    node = germ("node")
    Z, _ = generic_ci(node, A=ConstMatrix([[3]]))
    assert Z == node.ideal
    assert residual_link(Z, node).ideal.is_unit()


def test_generic_ci_rejects_bad_matrices(axes):
    with pytest.raises(GenericityError, match="dimension|rank"):
        generic_ci(axes, A=ConstMatrix([[1, 1, 0], [1, 1, 0]]))
    with pytest.raises(GenericityError, match="2x3"):
        generic_ci(axes, A=ConstMatrix([[1, 1, 0]]))


def test_generic_ci_random_draw_is_seeded():
    c345 = germ("c345")
    Z1, A1 = generic_ci(c345, seed=4)
    Z2, A2 = generic_ci(c345, seed=4)
    assert A1 == A2 and Z1 == Z2
    assert Z1.issubset(c345.ideal)


def test_residual_link_and_discrepancy(axes, c345):
    link = residual_link(I("x*y + y*z", "x*y + x*z"), axes)
    assert link.ideal == I("x - y", "y + z") and link.quotient_is_saturated
    assert ci_discrepancy(axes, link.ideal) == 2
    link = residual_link(generic_ci(c345, A=SUM_A)[0], c345)
    assert link.ideal == I("x + y + z", "y + z + x^2") and link.rounds == 1
    assert ci_discrepancy(c345, link.ideal) == 2
    special = residual_link(I("x^2*y - z^2", "y^2 - x*z"), c345)
    assert special.ideal == I("y", "z")
    assert ci_discrepancy(c345, special.ideal) == 3
    assert ci_discrepancy(c345, Ideal.unit(R3)) == 0
    with pytest.raises(DegenerateInputError):
        residual_link(I("x"), c345)


# --- Milnor number -----------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(GERMS))
def test_milnor_on_corpus(name):
    r = milnor_number(germ(name))
    m, mu = expected(name)
    assert (r.m, r.mu) == (m, mu)
    assert r.mu == r.e_jac - r.i0 - r.m + 1
    assert r.polar_degree == r.mu + r.m - 1
    assert r.agreement and len(r.trials) == 2
    if len(germ(name).equations) == len(germ(name).ring) - 1:
        assert r.i0 == 0
    if r.oracle is not None:
        assert r.oracle["agrees"] and r.oracle["mu"] == mu


def test_milnor_worked_examples(axes, c345):
    r = milnor_number(axes)
    assert (r.m, r.e_jac, r.i0, r.mu) == (3, 6, 2, 2)
    r = milnor_number(c345, RunConfig(matrix=SUM_A))
    assert (r.m, r.e_jac, r.i0, r.mu) == (3, 8, 2, 4)
    assert r.ci_matrix == SUM_A
    assert r.oracle is None
    r = milnor_number(germ("c345"))
    assert r.oracle == {"semigroup": [3, 4, 5], "delta": 2, "gaps": [1, 2], "mu": 4, "agrees": True}


@pytest.mark.parametrize("seed", [0, 10, 123])
def test_milnor_independent_of_seed(c345, seed):
    r = milnor_number(c345, RunConfig(seed=seed))
    assert (r.m, r.e_jac, r.i0, r.mu) == (3, 8, 2, 4)
    assert [t.seed for t in r.trials] == [seed, seed + 1]


def test_report_dict_shape(axes):
    d = milnor_number(axes).as_dict()
    assert set(d) >= {"m", "e_jac", "i0", "mu", "polar_degree", "w0_generators", "trials", "agreement"}
    assert d["smoothability_assumed"] is True


# --- trial protocol ------------------------------------------------------------------


def test_majority_after_disagreement():
    votes = {0: 5, 1: 7, 2: 7}
    value, results, agreed = _agreeing_value(lambda s: votes[s], 0, RunConfig(), "x")
    assert value == 7 and not agreed and len(results) == 3


def test_no_majority_raises():
    with pytest.raises(GenericityError, match="no majority"):
        _agreeing_value(lambda s: s, 0, RunConfig(max_retries=3), "x")


# --- Buchsbaum-Rim multiplicity --------------------------------------------------------


def test_br_multiplicity(c345):
    P = ModulePresentation.jacobian(c345)
    B = random_matrix(3, 2, 0, 7)
    assert br_multiplicity(P, SUM_A, B, c345) == 8
    assert br_multiplicity(P, ROW_DELETION_A, B, c345) == 9


def test_difference_independent_of_matrix(c345):
    # e_A - I0_A for the generic matrix and for the row-deletion one
    P = ModulePresentation.jacobian(c345)
    B = random_matrix(3, 2, 0, 7)
    generic = br_multiplicity(P, SUM_A, B, c345) - ci_discrepancy(
        c345, residual_link(generic_ci(c345, A=SUM_A)[0], c345).ideal
    )
    special = br_multiplicity(P, ROW_DELETION_A, B, c345) - ci_discrepancy(
        c345, residual_link(generic_ci(c345, A=ROW_DELETION_A)[0], c345).ideal
    )
    assert generic == special == 6


def test_br_free_presentation_and_errors(c345):
    from curvesing.poly import PolyMatrix

    one, zero = parse_poly("1", R3), parse_poly("0", R3)
    P = ModulePresentation(PolyMatrix([[one, zero], [zero, one]], R3), 2)
    Id = ConstMatrix([[1, 0], [0, 1]])
    assert br_multiplicity(P, Id, Id, c345) == 0
    with pytest.raises(DegenerateInputError):
        br_multiplicity(P, ConstMatrix([[1, 0], [1, 0]]), Id, c345)
    with pytest.raises(ValueError):
        ModulePresentation(PolyMatrix([[one, zero]], R3), 2)


# --- families -------------------------------------------------------------------------


def _family(eqs, ring=R3, samples=()):
    total = ring + ("t",)
    return FamilyGerm(ring, "t", tuple(parse_poly(e, total) for e in eqs), samples=samples)


def test_three_lines_family_profile():
    F = _family(["x*y + t*x + t^2", "y*z + t*y + t^2", "z*x + t*z + t^2"])
    prof = family_profile(F, [1, 2], A=SUM_A)
    assert [r.global_intersection for r in prof.rows] == [2, 2]
    assert [r.point_count for r in prof.rows] == [2, 2]
    assert all(r.transversal for r in prof.rows) and prof.constant


def test_c345_smoothing_profiles():
    F = _family(["(x^2 - t)*y - z^2", "x^3 - t*x - y*z", "y^2 - x*z"])
    prime = family_profile(F, [1], A=ROW_DELETION_A)
    assert prime.rows[0].global_intersection == 3 and prime.rows[0].point_count == 3
    double = family_profile(F, [1], A=ConstMatrix([[1, 0, 0], [0, 1, 0]]))
    row = double.rows[0]
    assert row.global_intersection == 4 and row.point_count == 2 and not row.transversal
    assert Ideal(R3, row.w_generators) == I("z", "x^2 - 1")


def test_family_profile_needs_equations():
    F = FamilyGerm(R2, "t", parametrization=(parse_poly("u^2", ("u", "t")), parse_poly("u^3 + t*u", ("u", "t"))))
    with pytest.raises(DegenerateInputError):
        family_profile(F, [1])


def test_whitney_cusp_to_node_not_constant():
    F = _family(["y^2 - x^3 - t*x^2"], ring=R2)
    v = whitney_check(F, [0, 1])
    rows = [(r.m, r.e_jac, r.i0, r.mu) for r in v.rows]
    assert rows == [(2, 3, 0, 2), (2, 2, 0, 1)]
    assert v.verdict == "NOT CONSTANT"
    assert "difference" not in v.as_dict()


def test_whitney_product_family_constant():
    F = _family(["x*y", "y*z", "x*z"])
    v = whitney_check(F, [0, 1])
    assert v.rows[0].as_dict() | {"t": "1"} == v.rows[1].as_dict()
    assert v.verdict == "CONSTANT" and v.as_dict()["difference"] == 4


def test_family_fiber_validation():
    with pytest.raises(ValueError):
        FamilyGerm(R2, "x", (parse_poly("x", R2),))
    with pytest.raises(DegenerateInputError):
        FamilyGerm(R2, "t")
    F = _family(["y - t"], ring=R2)
    with pytest.raises(DegenerateInputError):
        F.fiber(1)


def test_curve_germ_validation():
    with pytest.raises(DegenerateInputError):
        CurveGerm(("x",), (parse_poly("x", ("x",)),))
    with pytest.raises(DegenerateInputError):
        CurveGerm(R3, (parse_poly("x", R3),))
    with pytest.raises(DegenerateInputError):
        CurveGerm(R2, (parse_poly("y + 1", R2),))
