import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvesing import (
    INFINITE,
    NEGDEGLEX,
    NEGDEGREVLEX,
    ColengthMode,
    DegenerateInputError,
    Ideal,
    colength,
    eliminate,
    implicitize,
    intersect,
    parse_poly,
    point_count,
    quotient,
    saturate,
    specialize,
    standard_basis,
)
from corpus import GERMS, germ
from strategies import polys

R3 = ("x", "y", "z")
R2 = ("x", "y")
AT0 = ColengthMode.AT_ORIGIN
GLOBAL = ColengthMode.GLOBAL


def I(*gens, ring=R3):
    return Ideal.parse(ring, gens)


AXES = I("x*y", "y*z", "x*z")
C345 = I("x^2*y - z^2", "x^3 - y*z", "y^2 - x*z")


# --- quotient ------------------------------------------------------------------


def test_quotient_examples():
    assert quotient(I("x*y"), I("x")) == I("y")
    assert quotient(Ideal(R3, []), I("x")).is_zero()
    assert quotient(I("x*y + y*z", "x*y + x*z"), AXES) == I("x - y", "y + z")


def test_quotient_by_unit_and_by_subideal():
    J = I("x^2", "y")
    assert quotient(J, Ideal.unit(R3)) == J
    assert quotient(J, I("x^2")).is_unit()


@pytest.mark.parametrize("name", ["three_axes", "c345", "cusp", "d4"])
def test_quotient_contains_and_multiplies_into(name):
    X = germ(name).ideal
    J = Ideal.parse(X.ring, X.ring)
    Q = quotient(X, J)
    assert X.issubset(Q)
    for q in Q.groebner():
        for g in J.gens:
            assert X.contains(q * g)


def test_intersection():
    K = intersect(I("x"), I("y"))
    assert K == I("x*y")
    assert intersect(I("x^2", "y"), I("x", "y^2")) == I("x^2", "x*y", "y^2")


# --- saturation ----------------------------------------------------------------


def test_saturate_examples():
    S, k = saturate(I("x^2*y"), I("y"))
    assert S == I("x^2") and k == 1
    S, k = saturate(I("x*y + y*z", "x*y + x*z"), AXES)
    assert S == I("x - y", "y + z") and k == 1
    # one extra quotient confirms the chain has stopped
    assert quotient(S, AXES) == S
    S, k = saturate(C345, Ideal.unit(R3))
    assert S == C345 and k == 0


def test_saturate_needs_several_steps():
    S, k = saturate(I("x^3*y"), I("x"))
    assert S == I("y") and k == 3


@pytest.mark.parametrize(
    "gens, by",
    [
        (["x*y + y*z", "x*y + x*z"], ["x*y", "y*z", "x*z"]),
        (["x^2*y", "x*z^2"], ["x"]),
        (["x^2*y - z^2", "x^3 - y*z"], ["x^2*y - z^2", "x^3 - y*z", "y^2 - x*z"]),
    ],
)
def test_saturate_idempotent(gens, by):
    Iz, J = I(*gens), I(*by)
    S, _ = saturate(Iz, J)
    S2, k2 = saturate(S, J)
    assert S2 == S and k2 == 0


# --- elimination and implicitization ----------------------------------------------


def test_eliminate_examples():
    assert eliminate(I("u - x", ring=("u", "x")), ["u"]).is_zero()
    cusp = eliminate(I("x - u^2", "y - u^3", ring=("u", "x", "y")), ["u"])
    assert cusp == I("y^2 - x^3", ring=R2)
    two = eliminate(I("x - t*y", "t^2 - 1", ring=("t", "x", "y")), ["t"])
    assert two == I("x^2 - y^2", ring=R2)
    with pytest.raises(ValueError):
        eliminate(AXES, ["x", "y", "z"])


def _param(*texts):
    return [parse_poly(t, ("u",)) for t in texts]


def test_implicitize_examples():
    assert implicitize(_param("u^2", "u^3"), R2) == I("y^2 - x^3", ring=R2)
    assert implicitize(_param("u^3", "u^4", "u^5"), R3) == C345
    assert implicitize(_param("u", "u"), R2) == I("x - y", ring=R2)
    with pytest.raises(DegenerateInputError):
        implicitize(_param("0", "0"), R2)


@pytest.mark.parametrize("name", [n for n, g in GERMS.items() if g[2] is not None])
def test_implicitize_vanishes_on_parametrization(name):
    ring, _, param, _ = GERMS[name]
    ps = _param(*param)
    X = implicitize(ps, ring)
    sub = {v: p for v, p in zip(ring, ps)}
    for g in X.groebner():
        assert not g.compose(sub, ("u",))


# --- specialization ---------------------------------------------------------------


def test_specialize_examples():
    F = I("x*y + t*x + t^2", ring=("x", "y", "t"))
    assert specialize(F, "t", 0) == I("x*y", ring=R2)
    assert specialize(F, "t", 1) == I("x*y + x + 1", ring=R2)
    G = I("x*y", "y^2", ring=("x", "y", "t"))
    assert [str(g) for g in specialize(G, "t", 5).gens] == ["x*y", "y^2"]
    with pytest.raises(ValueError):
        specialize(F, "w", 0)


# --- colength ---------------------------------------------------------------------


def test_colength_examples():
    assert colength(AXES + I("x - y", "y + z"), AT0) == 2
    assert colength(C345 + I("x + y + z", "y + z + x^2"), AT0) == 2
    far = I("z", "y^2", "x^2 - 1")
    assert colength(far, GLOBAL) == 4
    assert colength(far, AT0) == 0
    assert point_count(far) == 2
    assert colength(AXES, AT0) == INFINITE
    assert colength(AXES, GLOBAL) == INFINITE
    assert colength(Ideal.unit(R3), GLOBAL) == 0


def test_capped_local_colength_matches_mora():
    # the shortcut stops at a capped basis; compare with a full local basis
    cases = [
        AXES + I("x - y", "y + z"),
        C345 + I("x + y + z", "y + z + x^2"),
        I("y^2 - x^7", "z - x^3"),
        I("x^2 - x^3", "y^5", "z - y^2"),
    ]
    for J in cases:
        full = standard_basis(J.nonzero_gens(), NEGDEGREVLEX, J.ring).staircase_count()
        assert colength(J, AT0) == full


@pytest.mark.parametrize("name", sorted(GERMS))
def test_local_order_independence_on_corpus(name):
    X = germ(name).ideal
    ell = " + ".join(f"{i + 1}*{v}" for i, v in enumerate(X.ring))
    J = X + Ideal.parse(X.ring, [ell])
    a = standard_basis(J.nonzero_gens(), NEGDEGREVLEX, J.ring).staircase_count()
    b = standard_basis(J.nonzero_gens(), NEGDEGLEX, J.ring).staircase_count()
    assert a == b


@settings(max_examples=30)
@given(st.lists(polys(R2, max_terms=3, max_deg=3, vanish_at_origin=True), min_size=2, max_size=3))
def test_global_colength_bounds_local(gens):
    J = Ideal(R2, gens)
    loc = colength(J, AT0)
    glob = colength(J, GLOBAL)
    assert glob >= loc


def test_point_count():
    assert point_count(I("x^2 - 1", "y", "z")) == 2
    assert point_count(I("x^2", "y", "z")) == 1
    assert point_count(I("x^3 - x", "y^2 - 1", "z")) == 6
    assert point_count(AXES) == INFINITE
    assert point_count(Ideal.unit(R3)) == 0
