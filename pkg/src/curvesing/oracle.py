"""Independent checks: semigroup delta invariants, the Buchweitz-Greuel
relation mu = 2*delta - r + 1, and colengths by plain linear algebra on a
truncated Macaulay matrix (no monomial orders, no bases)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from math import gcd

from .basis import INFINITE
from .errors import DegenerateInputError
from .ideal import Ideal

__all__ = [
    "SemigroupSpec",
    "semigroup_delta",
    "milnor_from_delta",
    "truncated_colength",
    "stabilized_colength",
]


@dataclass(frozen=True)
class SemigroupSpec:
    """Exponents (a_1, ..., a_n) of a monomial parametrization t -> (t^a_i)."""

    generators: tuple[int, ...]

    def __post_init__(self):
        gens = tuple(int(a) for a in self.generators)
        if not gens or any(a <= 0 for a in gens):
            raise ValueError("semigroup generators must be positive integers")
        if reduce(gcd, gens) != 1:
            raise DegenerateInputError(
                f"gcd of {gens} is not 1: the parametrization is not birational onto its image"
            )
        object.__setattr__(self, "generators", gens)


def semigroup_delta(S) -> tuple[int, list[int]]:
    """Number of gaps of the numerical semigroup and the gaps in ascending order.

    Scanning stops after max(generators) consecutive representable integers:
    from there on every integer is representable.
    """
    if not isinstance(S, SemigroupSpec):
        S = SemigroupSpec(tuple(S))
    gens = sorted(set(S.generators))
    run_needed = gens[-1]
    representable = [True]
    gaps = []
    run = 1
    k = 0
    while run < run_needed:
        k += 1
        ok = any(k >= a and representable[k - a] for a in gens)
        representable.append(ok)
        if ok:
            run += 1
        else:
            gaps.append(k)
            run = 0
    return len(gaps), gaps


def milnor_from_delta(delta: int, branches: int) -> int:
    if branches < 1:
        raise ValueError("a curve germ has at least one branch")
    return 2 * delta - branches + 1


def _monomials_below(n, D):
    """Exponent tuples of total degree < D, ordered by degree."""
    out = []
    for d in range(D):
        for c in itertools.combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in c:
                e[i] += 1
            out.append(tuple(e))
    return out


def _integer_row(terms):
    den = reduce(lambda a, b: a * b // gcd(a, b), (int(c.denominator) for c in terms.values()), 1)
    row = {j: int(c.numerator) * (den // int(c.denominator)) for j, c in terms.items()}
    return _primitive(row)


def _primitive(row):
    g = reduce(gcd, row.values(), 0)
    if g > 1:
        row = {j: v // g for j, v in row.items()}
    return row


def _macaulay_rank(rows):
    """Rank of sparse integer rows by fraction-free elimination."""
    pivots = {}
    for row in rows:
        while row:
            col = min(row)
            prow = pivots.get(col)
            if prow is None:
                pivots[col] = row
                break
            a, b = prow[col], row[col]
            new = {j: a * v for j, v in row.items()}
            for j, v in prow.items():
                w = new.get(j, 0) - b * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            row = _primitive(new)
    return len(pivots)


def _quotient_dim(I: Ideal, D: int) -> int:
    n = len(I.ring)
    monos = _monomials_below(n, D)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for g in I.nonzero_gens():
        low = g.order_at_origin()
        for m in monos:
            if sum(m) + low >= D:
                continue
            terms = {}
            for t, c in g.terms.items():
                e = tuple(a + b for a, b in zip(m, t))
                if sum(e) < D:
                    terms[index[e]] = c
            if terms:
                rows.append(_integer_row(terms))
    return len(monos) - _macaulay_rank(rows)


def truncated_colength(I: Ideal, D: int) -> tuple[int, bool]:
    """dim_Q Q[x]/(I + m^D) and whether it already equals the value at D - 1.

    A stable value equals the colength of I in the local ring at the origin.
    """
    if D < 1:
        raise ValueError("degree cap must be >= 1")
    value = _quotient_dim(I, D)
    previous = _quotient_dim(I, D - 1)
    return value, value == previous


def stabilized_colength(I: Ideal, max_degree: int = 40):
    """Raise the cap until two consecutive values agree; INFINITE if never."""
    previous = 0
    for D in range(1, max_degree + 1):
        value = _quotient_dim(I, D)
        if value == previous:
            return value
        previous = value
    return INFINITE
