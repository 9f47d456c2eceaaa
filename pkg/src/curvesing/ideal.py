"""Ideal-level algebra: sums, intersections, quotients, saturation,
elimination, implicitization, specialization and colengths."""

from __future__ import annotations

import enum
import logging

from .basis import INFINITE, Basis, groebner_basis, standard_basis
from .errors import DegenerateInputError, StepBudgetExceeded
from .poly import (
    DEGREVLEX,
    NEGDEGREVLEX,
    MonomialOrder,
    Poly,
    elimination_order,
    parse_poly,
    random_matrix,
)
from .rational import ONE, ZERO

__all__ = [
    "ColengthMode",
    "Ideal",
    "quotient",
    "saturate",
    "eliminate",
    "intersect",
    "implicitize",
    "specialize",
    "colength",
    "point_count",
    "PARAM_VAR",
]

log = logging.getLogger(__name__)

PARAM_VAR = "u"


class ColengthMode(enum.Enum):
    AT_ORIGIN = "at_origin"
    GLOBAL = "global"


def _fresh(ring, stem):
    name = stem
    i = 0
    while name in ring:
        i += 1
        name = f"{stem}{i}"
    return name


class Ideal:
    """Ideal of Q[ring] given by generators; bases are cached per order."""

    def __init__(self, ring, gens, step_budget=None):
        self.ring = tuple(ring)
        gens = [g.embed(self.ring) if g.ring != self.ring else g for g in gens]
        gens = [g for g in gens if g]
        self.gens = gens or [Poly.constant(self.ring, 0)]
        self.step_budget = step_budget
        self._cache: dict[MonomialOrder, Basis] = {}

    @classmethod
    def parse(cls, ring, texts, step_budget=None) -> Ideal:
        return cls(ring, [parse_poly(t, ring) for t in texts], step_budget)

    @classmethod
    def unit(cls, ring) -> Ideal:
        return cls(ring, [Poly.constant(ring, 1)])

    def nonzero_gens(self):
        return [g for g in self.gens if g]

    def is_zero(self) -> bool:
        return not self.nonzero_gens()

    def basis(self, order: MonomialOrder = DEGREVLEX) -> Basis:
        b = self._cache.get(order)
        if b is None:
            if order.is_local:
                b = standard_basis(self.nonzero_gens(), order, self.ring, self.step_budget)
            else:
                b = groebner_basis(self.nonzero_gens(), order, self.ring, self.step_budget)
            self._cache[order] = b
        return b

    def groebner(self) -> list[Poly]:
        return list(self.basis(DEGREVLEX).generators)

    def contains(self, f: Poly) -> bool:
        return self.basis(DEGREVLEX).contains(f.embed(self.ring))

    def contains_locally(self, f: Poly) -> bool:
        """Membership in the localization at the origin."""
        return self.basis(NEGDEGREVLEX).contains(f.embed(self.ring))

    def issubset(self, other: Ideal) -> bool:
        return all(other.contains(g) for g in self.nonzero_gens())

    def is_unit(self) -> bool:
        return self.basis(DEGREVLEX).is_unit()

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.groebner() == other.groebner()

    def __hash__(self):
        return hash((self.ring, tuple(self.groebner())))

    def __add__(self, other: Ideal) -> Ideal:
        if isinstance(other, Poly):
            other = Ideal(self.ring, [other])
        if other.ring != self.ring:
            raise ValueError("ring mismatch")
        return Ideal(self.ring, self.nonzero_gens() + other.nonzero_gens(), self.step_budget)

    def __mul__(self, other: Ideal) -> Ideal:
        gens = [f * g for f in self.nonzero_gens() for g in other.nonzero_gens()]
        return Ideal(self.ring, gens, self.step_budget)

    def with_budget(self, step_budget) -> Ideal:
        return Ideal(self.ring, self.gens, step_budget)

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.gens]}, ring={self.ring})"

    def __str__(self):
        return "(" + ", ".join(map(str, self.gens)) + ")"


def eliminate(I: Ideal, drop) -> Ideal:
    """I intersected with the subring without the variables in ``drop``."""
    drop = list(drop)
    if any(v not in I.ring for v in drop):
        raise ValueError(f"cannot drop {drop}: not all in ring {I.ring}")
    keep = [v for v in I.ring if v not in drop]
    if not keep:
        raise ValueError("must keep at least one variable")
    if not drop:
        return I
    big = tuple(drop) + tuple(keep)
    gens = [g.embed(big) for g in I.nonzero_gens()]
    b = groebner_basis(gens, elimination_order(len(drop)), big, I.step_budget)
    k = len(drop)
    out = [g for g in b.generators if not any(any(m[:k]) for m in g.terms)]
    return Ideal(keep, [g.embed(keep) for g in out], I.step_budget)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J via elimination of s from s*I + (1 - s)*J."""
    if I.ring != J.ring:
        raise ValueError("ring mismatch")
    if I.is_zero() or J.is_zero():
        return Ideal(I.ring, [], I.step_budget)
    s = _fresh(I.ring, "s")
    big = (s,) + I.ring
    sv = Poly.var(big, s)
    gens = [sv * g.embed(big) for g in I.nonzero_gens()]
    gens += [(1 - sv) * g.embed(big) for g in J.nonzero_gens()]
    return eliminate(Ideal(big, gens, I.step_budget), [s])


def _exact_divide(f: Poly, g: Poly) -> Poly:
    """f / g, which must divide exactly."""
    q_terms = {}
    rem = f
    lm, lc = g.leading_term(DEGREVLEX)
    while rem:
        m, c = rem.leading_term(DEGREVLEX)
        if any(a < b_ for a, b_ in zip(m, lm)):
            raise ArithmeticError(f"{g} does not divide {f}")
        q = tuple(a - b_ for a, b_ in zip(m, lm))
        coeff = c / lc
        q_terms[q] = coeff
        rem = rem - g.mul_term(q, coeff)
    return Poly(f.ring, q_terms)


def _quotient_principal(I: Ideal, g: Poly) -> Ideal:
    if not g:
        return Ideal.unit(I.ring)
    if g.is_constant():
        return I
    inter = intersect(I, Ideal(I.ring, [g], I.step_budget))
    return Ideal(I.ring, [_exact_divide(h, g) for h in inter.nonzero_gens()], I.step_budget)


def quotient(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) = ∩_j (I : g_j), each principal quotient as (I ∩ (g)) / g."""
    if I.ring != J.ring:
        raise ValueError("ring mismatch")
    gens = J.nonzero_gens()
    if not gens:
        return Ideal.unit(I.ring)
    if J.is_unit():
        return I
    # generators already in I contribute the unit ideal
    gb = I.basis(DEGREVLEX)
    gens = [g for g in gens if not gb.contains(g)]
    if not gens:
        return Ideal.unit(I.ring)
    # Each partial intersection contains I : J; it equals I : J as soon as
    # it multiplies every generator of J into I, which often happens early.
    gens.sort(key=lambda g: (len(g.terms), g.total_degree()))
    result = None
    for k, g in enumerate(gens):
        q = _quotient_principal(I, g)
        result = q if result is None else intersect(result, q)
        if all(gb.contains(f) for f in result.groebner()):
            return I
        if k + 1 < len(gens) and _multiplies_into(result, gens[k + 1:], gb):
            break
    return Ideal(I.ring, result.groebner(), I.step_budget)


def _multiplies_into(Q: Ideal, gens, gb) -> bool:
    return all(gb.contains(q * g) for q in Q.groebner() for g in gens)


def saturate(I: Ideal, J: Ideal, max_rounds: int = 64):
    """(I : J^∞) by iterated quotients; returns ``(ideal, rounds)``.

    ``rounds`` is the first k with (I : J^k) = (I : J^(k+1)).

    Round k first tries I : h^k for one generator h of J, which reuses the
    basis of I instead of that of the previous quotient.  I : h^k contains
    I : J^k, and the two are equal when it multiplies J into I : J^(k-1);
    otherwise the round falls back to a full quotient.
    """
    if J.is_zero():
        return Ideal.unit(I.ring), 0 if I.is_unit() else 1
    if J.is_unit():
        return I, 0
    gens = J.nonzero_gens()
    gb = I.basis(DEGREVLEX)
    outside = [g for g in gens if not gb.contains(g)]
    h = min(outside or gens, key=lambda g: (len(g.terms), g.total_degree()))
    current = I
    power = Poly.constant(I.ring, 1)
    for k in range(1, max_rounds + 1):
        power = power * h
        cgb = current.basis(DEGREVLEX)
        candidate = _quotient_principal(I, power)
        if all(cgb.contains(f) for f in candidate.groebner()):
            # I : J^k lies between current and candidate
            return current, k - 1
        if not _multiplies_into(candidate, gens, cgb):
            candidate = quotient(current, J)
            if candidate == current:
                return current, k - 1
        current = Ideal(I.ring, candidate.groebner(), I.step_budget)
    raise StepBudgetExceeded(f"saturation did not stabilize within {max_rounds} quotients")


def implicitize(param, target_vars, ring=None) -> Ideal:
    """Ideal of the closure of the image of u -> (param_1(u), ..., param_n(u)).

    ``param`` holds polynomials over a ring containing ``PARAM_VAR``
    (and no other variable).
    """
    param = list(param)
    target_vars = tuple(target_vars)
    if len(param) != len(target_vars):
        raise ValueError("need one parametrization entry per target variable")
    if all(not p for p in param):
        raise DegenerateInputError("degenerate parametrization: every coordinate is zero")
    u = PARAM_VAR
    if u in target_vars:
        raise ValueError(f"parameter name {u!r} clashes with a target variable")
    for p in param:
        extra = p.variables() - {u}
        if extra:
            raise ValueError(f"parametrization mentions {sorted(extra)} besides {u!r}")
    big = (u,) + target_vars
    gens = [Poly.var(big, v) - p.embed(big) for v, p in zip(target_vars, param)]
    return eliminate(Ideal(big, gens), [u])


def specialize(I: Ideal, param: str, value) -> Ideal:
    """Substitute ``value`` for ``param``; the result lives in the smaller ring."""
    if param not in I.ring:
        raise ValueError(f"{param!r} is not a variable of {I.ring}")
    gens = [g.specialize(param, value) for g in I.gens]
    ring = tuple(v for v in I.ring if v != param)
    return Ideal(ring, gens, I.step_budget)


_CAPS = (4, 8, 16)


def _local_colength(I: Ideal):
    """Colength at the origin.

    Truncated bases of I + m^D and I + m^(D+1) are cheap; equal colengths
    mean m^D lies in I + m^(D+1), hence in I locally (Nakayama), and the
    common value is the answer.  Mora's algorithm is the fallback.
    """
    if NEGDEGREVLEX not in I._cache:
        gens = I.nonzero_gens()
        for D in _CAPS:
            if any(g.order_at_origin() == 0 for g in gens):
                break
            a = standard_basis(gens, NEGDEGREVLEX, I.ring, I.step_budget, degree_cap=D)
            b = standard_basis(gens, NEGDEGREVLEX, I.ring, I.step_budget, degree_cap=D + 1)
            if a.staircase_count() == b.staircase_count():
                return a.staircase_count()
    return I.basis(NEGDEGREVLEX).staircase_count()


def colength(I: Ideal, mode: ColengthMode = ColengthMode.AT_ORIGIN):
    """dim_Q of the quotient: local ring at 0 (AT_ORIGIN) or Q[x] (GLOBAL)."""
    if mode is ColengthMode.AT_ORIGIN:
        return _local_colength(I)
    return I.basis(DEGREVLEX).staircase_count()



# ---------------------------------------------------------------------------
# counting distinct points of a zero-dimensional ideal


def _charpoly(A):
    """Characteristic polynomial coefficients, highest degree first (Faddeev-LeVerrier)."""
    n = len(A)
    coeffs = [ONE]
    M = [[ZERO] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[-1]
        # M <- A*M + c_prev*Id
        AM = [[sum((A[i][l] * M[l][j] for l in range(n) if A[i][l] and M[l][j]), ZERO) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] += c_prev
        M = AM
        tr = sum((A[i][l] * M[l][i] for i in range(n) for l in range(n) if A[i][l] and M[l][i]), ZERO)
        coeffs.append(-tr / k)
    return coeffs


def _trim(p):
    i = 0
    while i < len(p) and not p[i]:
        i += 1
    return p[i:]


def _poly_rem(a, b):
    a = list(a)
    while len(a) >= len(b) and a:
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a = _trim(a[1:] if not a[0] else a)
    return a


def _poly_gcd_degree(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _poly_rem(a, b)
    return len(a) - 1


def point_count(I: Ideal, seed: int = 0, trials: int = 2, bound: int = 7):
    """Number of distinct points of V(I) over the algebraic closure.

    The squarefree part of the characteristic polynomial of multiplication
    by a random linear form has one root per point the form separates; the
    maximum over ``trials`` forms is returned.  No radical is computed.
    """
    b = I.basis(DEGREVLEX)
    stairs = b.standard_monomials()
    if stairs is None:
        return INFINITE
    if not stairs:
        return 0
    n = len(I.ring)
    idx = {m: i for i, m in enumerate(stairs)}
    N = len(stairs)
    best = 0
    for s in range(trials):
        coeffs = random_matrix(1, n, seed + s, bound).entries[0]
        ell = Poly(I.ring, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})
        A = [[ZERO] * N for _ in range(N)]
        for j, m in enumerate(stairs):
            nf = b.normal_form(ell.mul_term(m, ONE))
            for t, c in nf.terms.items():
                A[idx[t]][j] = c
        chi = _charpoly(A)
        dchi = [c * (N - i) for i, c in enumerate(chi[:-1])]
        best = max(best, N - _poly_gcd_degree(chi, dchi))
    return best
