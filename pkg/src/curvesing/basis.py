"""Groebner bases (Buchberger) and local standard bases (Mora).

Polynomials are handled internally as plain ``{exponent: coefficient}``
dicts; ``Poly`` objects are only built at the boundary.
"""

from __future__ import annotations

import heapq
import itertools
import math
from functools import lru_cache

from .errors import StepBudgetExceeded
from .poly import DEGREVLEX, NEGDEGREVLEX, MonomialOrder, Poly
from .rational import ONE, QQ, ZERO, ZZ, zgcd

__all__ = [
    "INFINITE",
    "DEFAULT_STEP_BUDGET",
    "Basis",
    "groebner_basis",
    "standard_basis",
    "normal_form",
    "staircase_count",
]

INFINITE = math.inf
DEFAULT_STEP_BUDGET = 1_000_000


class _Budget:
    __slots__ = ("limit", "steps")

    def __init__(self, limit):
        self.limit = DEFAULT_STEP_BUDGET if limit is None else limit
        self.steps = 0

    def tick(self, n=1):
        self.steps += n
        if self.steps > self.limit:
            raise StepBudgetExceeded(f"reduction step budget of {self.limit} exceeded")


class _Elt:
    """Basis element: monic term dict plus cached leading data."""

    __slots__ = ("lm", "terms", "deg", "ecart", "sugar", "packed", "integer")

    def __init__(self, terms, key, sugar=None):
        lm = max(terms, key=key)
        lc = terms[lm]
        if lc != ONE:
            inv = ONE / lc
            terms = {m: c * inv for m, c in terms.items()}
        self.lm = lm
        self.terms = terms
        self.deg = max(map(sum, terms))
        self.ecart = self.deg - sum(lm)
        self.sugar = self.deg if sugar is None else max(sugar, self.deg)
        self.packed = None
        self.integer = None


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _truncate(terms, cutoff):
    if cutoff is None:
        return terms
    return {m: c for m, c in terms.items() if sum(m) < cutoff}


# ---------------------------------------------------------------------------
# reduction kernels


class _Packer:
    """Integer encodings of exponent vectors for one order and ring size.

    Every supported order key is linear in the exponents, so it packs into
    one integer (balanced digits keep lexicographic comparison) that is
    additive under multiplication.  A second integer holds the exponents in
    fixed-width fields plus the total degree, with guard bits for a
    branch-free divisibility test.
    """

    KEY_BITS = 48
    EXP_BITS = 20

    def __init__(self, key, n):
        self.n = n
        rows = len(key((0,) * n))
        self.kunit = []
        for i in range(n):
            col = key(tuple(int(i == j) for j in range(n)))
            self.kunit.append(sum(v << (self.KEY_BITS * (rows - 1 - r)) for r, v in enumerate(col)))
        B = self.EXP_BITS
        self.dshift = B * n
        self.punit = [(1 << (B * i)) + (1 << self.dshift) for i in range(n)]
        self.guard = sum(1 << (B * i + B - 1) for i in range(n + 1))
        self.mask = (1 << B) - 1
        self.limit = 1 << (B - 2)

    def pack(self, m):
        if sum(m) >= self.limit:
            raise OverflowError("exponent too large for the packed representation")
        k = 0
        p = 0
        for a, ku, pu in zip(m, self.kunit, self.punit):
            if a:
                k += a * ku
                p += a * pu
        return k, p

    def unpack(self, p):
        B, mask = self.EXP_BITS, self.mask
        return tuple((p >> (B * i)) & mask for i in range(self.n))


@lru_cache(maxsize=64)
def _packer(key, n):
    return _Packer(key, n)


def _packed_elt(e, pk):
    data = e.packed
    if data is None or data[0] is not pk:
        lk, lp = pk.pack(e.lm)
        tail = []
        for m, c in e.terms.items():
            if m != e.lm:
                k, p = pk.pack(m)
                tail.append((k, p, c))
        data = (pk, lp, lk, tail)
        e.packed = data
    return data


def _reduce_full(p, elts, key, budget, cutoff=None):
    """Full division of ``p`` by monic ``elts``; terms are visited largest first.

    Terminates for global orders, and for local orders when ``cutoff`` is set
    (only finitely many monomials of degree < cutoff exist).
    """
    if not p:
        return {}
    n = len(next(iter(p)))
    pk = _packer(key, n)
    divisors = [_packed_elt(e, pk)[1:] for e in elts]
    guard = pk.guard
    dshift = pk.dshift
    coef = {}
    packed = {}
    for m, c in p.items():
        k, e = pk.pack(m)
        coef[k] = c
        packed[k] = e
    heap = [-k for k in coef]
    heapq.heapify(heap)
    rem = {}
    while heap:
        k = -heapq.heappop(heap)
        c = coef.pop(k, None)
        if c is None:
            continue
        e = packed.pop(k)
        eg = e | guard
        for lp, lk, tail in divisors:
            if (eg - lp) & guard == guard:
                break
        else:
            rem[pk.unpack(e)] = c
            continue
        budget.tick()
        dk = k - lk
        de = e - lp
        for tk, tp, gc in tail:
            t = dk + tk
            if cutoff is not None and (de + tp) >> dshift >= cutoff:
                continue
            v = coef.get(t)
            if v is None:
                coef[t] = -c * gc
                packed[t] = de + tp
                heapq.heappush(heap, -t)
            else:
                v = v - c * gc
                if v:
                    coef[t] = v
                else:
                    del coef[t]
                    del packed[t]
    return rem


def _integer_terms(terms):
    """Primitive integer multiple of a rational term dict."""
    den = ZZ(1)
    for c in terms.values():
        d = ZZ(c.denominator)
        den = den * d // zgcd(den, d)
    out = {m: ZZ(c.numerator) * (den // ZZ(c.denominator)) for m, c in terms.items()}
    g = ZZ(0)
    for v in out.values():
        g = zgcd(g, v)
        if g == 1:
            return out
    return {m: v // g for m, v in out.items()}


def _integer_elt(e, pk):
    data = e.integer
    if data is None or data[0] is not pk:
        it = _integer_terms(e.terms)
        tail = []
        for m, c in it.items():
            if m != e.lm:
                k, p = pk.pack(m)
                tail.append((k, p, c))
        _, lp, lk, _ = _packed_elt(e, pk)
        data = (pk, lp, lk, it[e.lm], tail)
        e.integer = data
    return data


def _reduce_scaled(p, elts, key, budget):
    """Full division like ``_reduce_full`` for a global order, but exact only
    up to a nonzero scalar: coefficients stay integers (fraction-free), which
    is much cheaper than rational arithmetic when bases have large
    denominators.  Good enough wherever the result is made monic anyway.
    """
    if not p:
        return {}
    n = len(next(iter(p)))
    pk = _packer(key, n)
    divisors = [_integer_elt(e, pk)[1:] for e in elts]
    guard = pk.guard
    coef = {}
    packed = {}
    for m, c in _integer_terms(p).items():
        k, e = pk.pack(m)
        coef[k] = c
        packed[k] = e
    heap = [-k for k in coef]
    heapq.heapify(heap)
    rem = {}
    while heap:
        k = -heapq.heappop(heap)
        c = coef.pop(k, None)
        if c is None:
            continue
        e = packed.pop(k)
        eg = e | guard
        for lp, lk, lc, tail in divisors:
            if (eg - lp) & guard == guard:
                break
        else:
            rem[e] = c
            continue
        budget.tick()
        d = zgcd(c, lc)
        a = lc // d
        b = c // d
        if a != 1:
            for t in coef:
                coef[t] *= a
            for t in rem:
                rem[t] *= a
        dk = k - lk
        de = e - lp
        for tk, tp, gc in tail:
            t = dk + tk
            v = coef.get(t)
            if v is None:
                coef[t] = -b * gc
                packed[t] = de + tp
                heapq.heappush(heap, -t)
            else:
                v = v - b * gc
                if v:
                    coef[t] = v
                else:
                    del coef[t]
                    del packed[t]
    if not rem:
        return {}
    g = ZZ(0)
    for v in rem.values():
        g = zgcd(g, v)
    return {pk.unpack(e): QQ(v // g) for e, v in rem.items()}


def _reduce_mora(p, elts, key, budget):
    """Mora's weak normal form: result has a leading monomial outside L(elts).

    Reducer choice: minimal ecart, ties to the oldest element.
    """
    h = dict(p)
    T = list(elts)
    while h:
        lm = max(h, key=key)
        ecart_h = max(map(sum, h)) - sum(lm)
        best = None
        for t in T:
            if (best is None or t.ecart < best.ecart) and _divides(t.lm, lm):
                best = t
                if t.ecart == 0:
                    break
        if best is None:
            break
        budget.tick()
        if best.ecart > ecart_h:
            T.append(_Elt(h, key))
        c = h[lm] / best.terms[best.lm]
        q = tuple(a - b for a, b in zip(lm, best.lm))
        for gm, gc in best.terms.items():
            t = tuple(a + b for a, b in zip(gm, q))
            v = h.get(t, ZERO) - c * gc
            if v:
                h[t] = v
            else:
                h.pop(t, None)
    return h


# ---------------------------------------------------------------------------
# pair handling (Gebauer-Moeller)


def _update(basis, pairs, elts, h, key, cap=None):
    """Insert element index ``h``; returns the new live basis index list."""
    lm_h = elts[h].lm
    new = [(g, _lcm(elts[g].lm, lm_h)) for g in basis]
    kept = []
    while new:
        g, l = new.pop(0)
        if _coprime(elts[g].lm, lm_h) or not any(
            _divides(l2, l) for _, l2 in itertools.chain(new, kept)
        ):
            kept.append((g, l))
    survivors = {}
    for (i, j), (l, s) in pairs.items():
        if (
            _divides(lm_h, l)
            and _lcm(elts[i].lm, lm_h) != l
            and _lcm(elts[j].lm, lm_h) != l
        ):
            continue
        survivors[(i, j)] = (l, s)
    for g, l in kept:
        if _coprime(elts[g].lm, lm_h) or (cap is not None and sum(l) >= cap):
            continue
        eg, eh = elts[g], elts[h]
        dl = sum(l)
        sugar = max(eg.sugar + dl - sum(eg.lm), eh.sugar + dl - sum(eh.lm))
        survivors[(g, h)] = (l, sugar)
    pairs.clear()
    pairs.update(survivors)
    return [g for g in basis if not _divides(lm_h, elts[g].lm)] + [h]


def _spoly(f, g, l):
    qf = tuple(a - b for a, b in zip(l, f.lm))
    qg = tuple(a - b for a, b in zip(l, g.lm))
    out = {}
    for m, c in f.terms.items():
        out[tuple(a + b for a, b in zip(m, qf))] = c
    for m, c in g.terms.items():
        t = tuple(a + b for a, b in zip(m, qg))
        v = out.get(t, ZERO) - c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def _pick(pairs, key):
    return min(pairs, key=lambda ij: (pairs[ij][1], key(pairs[ij][0]), ij))


# ---------------------------------------------------------------------------
# staircase helpers


def _corner_cutoff(lms, n):
    """Smallest D with every monomial of degree >= D in the monomial ideal, or None."""
    if not lms:
        return None
    if any(not any(m) for m in lms):
        return 0
    stairs = _standard_monomials(tuple(sorted(set(lms))), n)
    if stairs is None:
        return None
    return max(map(sum, stairs)) + 1


def _pure_power_bounds(lms, n):
    bounds = [None] * n
    for m in lms:
        support = [i for i, a in enumerate(m) if a]
        if len(support) == 1:
            i = support[0]
            if bounds[i] is None or m[i] < bounds[i]:
                bounds[i] = m[i]
        elif not support:
            return [0] * n
    return bounds


def _standard_monomials(lms, n):
    """All monomials outside the ideal spanned by ``lms``; None when infinite."""
    bounds = _pure_power_bounds(lms, n)
    if any(b is None for b in bounds):
        return None
    if any(b == 0 for b in bounds):
        return []
    out = []

    def rec(prefix, i, gens):
        if i == n:
            out.append(tuple(prefix))
            return
        for v in range(bounds[i]):
            # generators still able to divide a monomial with x_i-exponent v
            sub = [g for g in gens if g[i] <= v]
            if any(all(g[j] == 0 for j in range(i + 1, n)) for g in sub):
                break
            prefix.append(v)
            rec(prefix, i + 1, sub)
            prefix.pop()

    rec([], 0, list(lms))
    return out


@lru_cache(maxsize=4096)
def _count_standard(lms, n):
    if n == 0:
        return 0 if lms else 1
    bounds = _pure_power_bounds(lms, n)
    if bounds[0] is None:
        return INFINITE
    total = 0
    for v in range(bounds[0]):
        sub = tuple(sorted({g[1:] for g in lms if g[0] <= v}))
        # drop non-minimal generators to keep the cache small
        sub = tuple(g for g in sub if not any(h != g and _divides(h, g) for h in sub))
        c = _count_standard(sub, n - 1)
        if c == INFINITE:
            return INFINITE
        total += c
    return total


def _monomial_dimension(lms, n):
    """Krull dimension of Q[x]/(lms): largest variable set avoiding every support."""
    supports = [frozenset(i for i, a in enumerate(m) if a) for m in lms]
    if any(not s for s in supports):
        return -1
    for size in range(n, -1, -1):
        for U in itertools.combinations(range(n), size):
            U = frozenset(U)
            if not any(s <= U for s in supports):
                return size
    return 0


# ---------------------------------------------------------------------------
# public API


class Basis:
    """A Groebner basis (global order) or standard basis (local order).

    ``cutoff`` is set for zero-dimensional local bases: every monomial of
    degree >= cutoff lies in the ideal, and generators are stored modulo
    those monomials.
    """

    def __init__(self, ring, generators, order: MonomialOrder, reduced: bool, cutoff=None):
        self.ring = tuple(ring)
        self.order = order
        self.reduced = reduced
        self.cutoff = cutoff
        key = order.key
        self._elts = [_Elt(dict(g.terms), key) for g in generators if g]
        self._elts.sort(key=lambda e: key(e.lm))
        self.generators = [Poly._raw(self.ring, e.terms) for e in self._elts]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __eq__(self, other):
        return (
            isinstance(other, Basis)
            and self.order == other.order
            and self.generators == other.generators
        )

    def leading_monomials(self):
        return [e.lm for e in self._elts]

    def is_unit(self) -> bool:
        return any(not any(e.lm) for e in self._elts)

    def normal_form(self, p: Poly, budget=None) -> Poly:
        return normal_form(p, self, budget)

    def contains(self, p: Poly) -> bool:
        return normal_form(p, self).is_zero()

    def staircase_count(self):
        return staircase_count(self)

    def standard_monomials(self):
        stairs = _standard_monomials(tuple(self.leading_monomials()), len(self.ring))
        if stairs is None:
            return None
        return sorted(stairs, key=self.order.key, reverse=True)

    def dimension(self) -> int:
        """Dimension of the leading ideal (-1 for the unit ideal)."""
        return _monomial_dimension(self.leading_monomials(), len(self.ring))

    def __repr__(self):
        gens = ", ".join(map(str, self.generators))
        return f"Basis([{gens}], order={self.order!r})"


def _prepare(gens, order):
    gens = [g for g in gens if g]
    ring = gens[0].ring if gens else None
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators live in different rings")
    return ring, gens


def groebner_basis(gens, order: MonomialOrder = DEGREVLEX, ring=None, step_budget=None) -> Basis:
    """Reduced Groebner basis by Buchberger's algorithm (sugar strategy, Gebauer-Moeller)."""
    if order.is_local:
        raise ValueError("groebner_basis needs a global order; use standard_basis")
    gens = list(gens)
    r, gens = _prepare(gens, order)
    ring = ring if r is None else r
    if ring is None:
        raise ValueError("cannot infer the ring of an empty generator list")
    budget = _Budget(step_budget)
    key = order.key
    elts = []
    basis = []
    pairs = {}
    # ascending by leading monomial so small generators reduce the rest
    start = sorted((_Elt(dict(g.terms), key) for g in gens), key=lambda e: key(e.lm))
    for e in start:
        live = [elts[i] for i in basis]
        red = _reduce_scaled(e.terms, live, key, budget)
        if not red:
            continue
        elts.append(_Elt(red, key, e.sugar))
        basis = _update(basis, pairs, elts, len(elts) - 1, key)
    while pairs:
        ij = _pick(pairs, key)
        l, sugar = pairs.pop(ij)
        s = _spoly(elts[ij[0]], elts[ij[1]], l)
        if not s:
            continue
        live = [elts[i] for i in basis]
        red = _reduce_scaled(s, live, key, budget)
        if red:
            elts.append(_Elt(red, key, sugar))
            basis = _update(basis, pairs, elts, len(elts) - 1, key)
    # minimal, then interreduced
    minimal = [elts[i] for i in basis]
    minimal = [
        e for e in minimal if not any(f is not e and _divides(f.lm, e.lm) for f in minimal)
    ]
    reduced = []
    for e in minimal:
        others = [f for f in minimal if f is not e]
        tail = {m: c for m, c in e.terms.items() if m != e.lm}
        red = _reduce_full(tail, others, key, budget)
        red[e.lm] = ONE
        reduced.append(Poly._raw(ring, red))
    return Basis(ring, reduced, order, reduced=True)


def standard_basis(
    gens, order: MonomialOrder = NEGDEGREVLEX, ring=None, step_budget=None, degree_cap=None
) -> Basis:
    """Standard basis for a local order via Mora's tangent cone algorithm.

    Once the leading ideal contains every monomial of some degree D, the
    ideal contains them too (locally), so the rest of the computation runs
    modulo the D-th power of the maximal ideal.

    With ``degree_cap`` the basis is that of the ideal plus all monomials of
    that degree, which makes the whole computation a truncated one.
    """
    if not order.is_local:
        raise ValueError("standard_basis needs a local order; use groebner_basis")
    gens = list(gens)
    r, gens = _prepare(gens, order)
    ring = ring if r is None else r
    if ring is None:
        raise ValueError("cannot infer the ring of an empty generator list")
    n = len(ring)
    budget = _Budget(step_budget)
    key = order.key
    elts = []
    basis = []
    pairs = {}
    cutoff = degree_cap

    def insert(terms, sugar, truncate=True):
        nonlocal cutoff, basis
        if truncate:
            terms = _truncate(terms, cutoff)
        if not terms:
            return
        elts.append(_Elt(terms, key, sugar))
        basis = _update(basis, pairs, elts, len(elts) - 1, key, cutoff)
        if cutoff is None:
            d = _corner_cutoff([elts[i].lm for i in basis], n)
            if d is not None:
                cutoff = d
                for i in basis:
                    e = elts[i]
                    # an element of degree >= cutoff is a multiple of monomials in the ideal
                    t = _truncate(e.terms, cutoff) or {e.lm: ONE}
                    if len(t) != len(e.terms):
                        elts[i] = _Elt(t, key, e.sugar)
                for ij in [ij for ij, (l, _) in pairs.items() if sum(l) >= cutoff]:
                    del pairs[ij]

    def reduce(terms):
        live = [elts[i] for i in basis]
        if cutoff is not None:
            return _reduce_full(_truncate(terms, cutoff), live, key, budget, cutoff)
        return _reduce_mora(terms, live, key, budget)

    if degree_cap is not None:
        for c in itertools.combinations_with_replacement(range(n), degree_cap):
            m = [0] * n
            for i in c:
                m[i] += 1
            insert({tuple(m): ONE}, degree_cap, truncate=False)
    for g in sorted(gens, key=lambda g: (g.total_degree(), len(g))):
        terms = reduce(dict(g.terms)) if basis else dict(g.terms)
        if terms:
            insert(terms, max(map(sum, g.terms)))
    while pairs:
        ij = _pick(pairs, key)
        l, sugar = pairs.pop(ij)
        if cutoff is not None and sum(l) >= cutoff:
            continue
        s = _spoly(elts[ij[0]], elts[ij[1]], l)
        if s:
            red = reduce(s)
            if red:
                insert(red, sugar)
    final = [elts[i] for i in basis]
    final = [e for e in final if not any(f is not e and _divides(f.lm, e.lm) for f in final)]
    return Basis(ring, [Poly._raw(ring, e.terms) for e in final], order, reduced=False, cutoff=cutoff)


def normal_form(p: Poly, b: Basis, budget=None) -> Poly:
    """Remainder of ``p`` modulo the basis.

    Global bases and zero-dimensional local bases give a full remainder with
    no term in the leading ideal.  Other local bases give Mora's weak normal
    form: only the leading monomial is guaranteed outside the leading ideal,
    and the result is zero exactly when ``p`` lies in the localized ideal.
    """
    if p.ring != b.ring:
        raise ValueError(f"ring mismatch: {p.ring} vs {b.ring}")
    budget = budget if isinstance(budget, _Budget) else _Budget(budget)
    key = b.order.key
    if b.order.is_global:
        return Poly._raw(b.ring, _reduce_full(p.terms, b._elts, key, budget))
    if b.cutoff is not None:
        t = _truncate(p.terms, b.cutoff)
        return Poly._raw(b.ring, _reduce_full(t, b._elts, key, budget, b.cutoff))
    return Poly._raw(b.ring, _reduce_mora(p.terms, b._elts, key, budget))


def staircase_count(b: Basis):
    """Number of monomials outside the leading ideal, or ``INFINITE``."""
    lms = tuple(sorted(set(b.leading_monomials())))
    if not lms:
        return INFINITE if b.ring else 1
    return _count_standard(lms, len(b.ring))
