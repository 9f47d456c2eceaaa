"""Singularity invariants of reduced curve germs at the origin.

The Milnor number comes from

    mu = e(Jac) - I0 - m + 1

where m is the multiplicity, e(Jac) the Hilbert-Samuel multiplicity of the
Jacobian ideal, and I0 the intersection multiplicity at 0 of the curve with
the residual curve W of a generic complete intersection Z containing it.
Every "generic" choice is a seeded random draw; results are accepted only
when independent draws agree.
"""

from __future__ import annotations

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional

from .basis import DEFAULT_STEP_BUDGET, INFINITE
from .errors import DegenerateInputError, GenericityError
from .ideal import (
    PARAM_VAR,
    ColengthMode,
    Ideal,
    colength,
    implicitize,
    point_count,
    saturate,
)
from .oracle import milnor_from_delta, semigroup_delta
from .poly import (
    NEGDEGREVLEX,
    ConstMatrix,
    Poly,
    PolyMatrix,
    jacobian_matrix,
    minors_of_size,
    random_matrix,
)
from .rational import format_rational, to_rational

__all__ = [
    "RunConfig",
    "CurveGerm",
    "FamilyGerm",
    "ModulePresentation",
    "TrialResult",
    "InvariantReport",
    "ResidualLink",
    "multiplicity",
    "jacobian_ideal",
    "hs_mult_jacobian",
    "generic_ci",
    "residual_link",
    "ci_discrepancy",
    "milnor_number",
    "br_multiplicity",
    "family_profile",
    "whitney_check",
    "monomial_semigroup",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Trial configuration shared by the library entry points and the CLI."""

    seed: int = 0
    trials: int = 2
    max_retries: int = 5
    step_budget: Optional[int] = DEFAULT_STEP_BUDGET
    bound: int = 7
    form_bound: int = 1000
    matrix: Optional[ConstMatrix] = None

    def __post_init__(self):
        if self.trials < 2:
            raise ValueError("trials must be >= 2 so agreement can be checked")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


def derive_seed(seed: int, label: str, attempt: int = 0) -> int:
    digest = hashlib.sha256(f"{seed}/{label}/{attempt}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


# ---------------------------------------------------------------------------
# germs


@dataclass(frozen=True)
class CurveGerm:
    """A curve germ (X, 0) in affine n-space, given by polynomial equations.

    ``parametrization`` (optional) holds polynomials in the single variable
    ``u`` whose image is the curve.
    """

    ring: tuple
    equations: tuple
    parametrization: Optional[tuple] = None
    step_budget: Optional[int] = DEFAULT_STEP_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "ring", tuple(self.ring))
        eqs = tuple(f.embed(self.ring) for f in self.equations if f)
        object.__setattr__(self, "equations", eqs)
        if self.parametrization is not None:
            object.__setattr__(self, "parametrization", tuple(self.parametrization))
        n, p = len(self.ring), len(eqs)
        if n < 2:
            raise DegenerateInputError("a curve germ needs at least two ambient variables")
        if p < n - 1:
            raise DegenerateInputError(
                f"{p} equation(s) in {n} variables cannot cut out a curve (need >= {n - 1})"
            )
        for f in eqs:
            if f.constant_term():
                raise DegenerateInputError(f"equation {f} does not vanish at the origin")

    @classmethod
    def from_parametrization(cls, param, ring, step_budget=DEFAULT_STEP_BUDGET) -> CurveGerm:
        for p in param:
            if p.constant_term():
                raise DegenerateInputError(f"parametrization entry {p} does not vanish at u = 0")
        I = implicitize(param, ring)
        return cls(tuple(ring), tuple(I.nonzero_gens()), tuple(param), step_budget)

    @property
    def n(self) -> int:
        return len(self.ring)

    @property
    def p(self) -> int:
        return len(self.equations)

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.ring, list(self.equations), self.step_budget)


@dataclass(frozen=True)
class FamilyGerm:
    """One-parameter family: equations (or a parametrization) involving ``param``."""

    ring: tuple
    param: str
    equations: Optional[tuple] = None
    parametrization: Optional[tuple] = None
    samples: tuple = ()
    step_budget: Optional[int] = DEFAULT_STEP_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "ring", tuple(self.ring))
        object.__setattr__(self, "samples", tuple(to_rational(s) for s in self.samples))
        if self.equations is None and self.parametrization is None:
            raise DegenerateInputError("a family needs equations or a parametrization")
        if self.param in self.ring:
            raise ValueError(f"deformation parameter {self.param!r} must not be a ring variable")

    @property
    def total_ring(self) -> tuple:
        return self.ring + (self.param,)

    def fiber_ideal(self, value) -> Ideal:
        """Ideal of the whole fiber at t = ``value``; it need not pass through 0."""
        if self.equations is not None:
            eqs = [f.embed(self.total_ring).specialize(self.param, value) for f in self.equations]
            return Ideal(self.ring, eqs, self.step_budget)
        uring = (PARAM_VAR, self.param)
        param = [f.embed(uring).specialize(self.param, value) for f in self.parametrization]
        return implicitize(param, self.ring).with_budget(self.step_budget)

    def fiber(self, value) -> CurveGerm:
        """The germ X_t at t = ``value`` (parametric families are implicitized after specializing)."""
        if self.equations is not None:
            eqs = [f.embed(self.total_ring).specialize(self.param, value) for f in self.equations]
            return CurveGerm(self.ring, tuple(eqs), step_budget=self.step_budget)
        uring = (PARAM_VAR, self.param)
        param = [f.embed(uring).specialize(self.param, value) for f in self.parametrization]
        return CurveGerm.from_parametrization(param, self.ring, self.step_budget)


@dataclass(frozen=True)
class ModulePresentation:
    """Presentation matrix [M] (p x c) of O^p / M, with generic rank e."""

    matrix: PolyMatrix
    rank: int

    def __post_init__(self):
        if not 1 <= self.rank <= min(self.matrix.rows, self.matrix.cols):
            raise ValueError("generic rank must satisfy 1 <= e <= min(p, c)")

    @classmethod
    def jacobian(cls, X: CurveGerm) -> ModulePresentation:
        return cls(jacobian_matrix(X.equations, X.ring), X.n - 1)


# ---------------------------------------------------------------------------
# trial protocol


def _agreeing_value(fn: Callable, seed: int, cfg: RunConfig, label: str):
    """Run ``fn`` on ``cfg.trials`` seeds; on disagreement draw more until a
    value holds a strict majority with at least ``cfg.trials`` votes."""
    results = []
    s = seed
    for _ in range(cfg.trials):
        results.append((s, fn(s)))
        s += 1
    agreed = len({v for _, v in results}) == 1
    extra = 0
    while True:
        counts = Counter(v for _, v in results)
        value, votes = counts.most_common(1)[0]
        if votes >= cfg.trials and votes * 2 > len(results):
            return value, results, agreed
        if extra >= cfg.max_retries:
            raise GenericityError(
                f"{label}: no majority after {len(results)} trials: "
                + ", ".join(f"seed {k} -> {v}" for k, v in results)
            )
        log.info("%s: trials disagree (%s); drawing seed %d", label, dict(counts), s)
        results.append((s, fn(s)))
        s += 1
        extra += 1


def _linear_form(ring, seed, bound) -> Poly:
    coeffs = random_matrix(1, len(ring), seed, bound).entries[0]
    n = len(ring)
    return Poly(ring, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})


def _combination(polys, seed, bound) -> Poly:
    coeffs = random_matrix(1, len(polys), seed, bound)
    return coeffs.apply(polys)[0]


def _finite(value, what):
    if value == INFINITE:
        raise DegenerateInputError(f"{what} has infinite colength at the origin")
    return int(value)


# ---------------------------------------------------------------------------
# single-seed invariants


def _multiplicity_at(X: CurveGerm, seed: int, bound: int) -> int:
    ell = _linear_form(X.ring, derive_seed(seed, "linear"), bound)
    return _finite(colength(X.ideal + ell, ColengthMode.AT_ORIGIN), "I_X + (generic linear form)")


def multiplicity(X: CurveGerm, seed: int = 0, config: RunConfig = RunConfig()) -> int:
    """Colength of I_X plus a generic linear form."""
    value, _, _ = _agreeing_value(
        lambda s: _multiplicity_at(X, s, config.form_bound), seed, config, "multiplicity"
    )
    return value


def jacobian_minors(X: CurveGerm) -> list[Poly]:
    return minors_of_size(jacobian_matrix(X.equations, X.ring), X.n - 1)


def jacobian_ideal(X: CurveGerm) -> Ideal:
    """I_X + ((n-1)-minors of the Jacobian matrix): Jac(X) pulled back to the ambient ring."""
    return X.ideal + Ideal(X.ring, jacobian_minors(X))


def _hs_jacobian_at(X: CurveGerm, seed: int, bound: int, minors=None) -> int:
    minors = jacobian_minors(X) if minors is None else minors
    g = _combination(minors, derive_seed(seed, "jacobian"), bound)
    return _finite(colength(X.ideal + g, ColengthMode.AT_ORIGIN), "I_X + (generic Jacobian minor combination)")


def hs_mult_jacobian(X: CurveGerm, seed: int = 0, config: RunConfig = RunConfig()) -> int:
    """Colength of I_X plus a generic combination of the (n-1)-minors."""
    minors = jacobian_minors(X)
    value, _, _ = _agreeing_value(
        lambda s: _hs_jacobian_at(X, s, config.form_bound, minors), seed, config, "e(Jac)"
    )
    return value


def _ci_ideal(X: CurveGerm, A: ConstMatrix) -> Ideal:
    return Ideal(X.ring, A.apply(X.equations), X.step_budget)


def _ci_admissible(X: CurveGerm, A: ConstMatrix, Z: Ideal) -> Optional[str]:
    if (A.rows, A.cols) != (X.n - 1, X.p):
        return f"matrix must be {X.n - 1}x{X.p}, got {A.rows}x{A.cols}"
    if A.rank() < X.n - 1:
        return f"matrix has rank {A.rank()} < {X.n - 1}"
    # Z contains I_X, so its local dimension is at least 1; it is exactly 1
    # when a generic hyperplane section has finite colength.
    ell = _linear_form(X.ring, derive_seed(0, "ci-dim", A.rows), 7)
    if colength(Z + ell, ColengthMode.AT_ORIGIN) == INFINITE:
        return "V(Z) has dimension > 1 at the origin"
    return None


def generic_ci(X: CurveGerm, seed: int = 0, config: RunConfig = RunConfig(), A=None):
    """A complete intersection Z = V(A f) containing X; returns ``(Z, A)``.

    A fixed ``A`` (argument or ``config.matrix``) is validated once; random
    draws are retried up to ``config.max_retries`` times.
    """
    A = A if A is not None else config.matrix
    if A is not None:
        if (A.rows, A.cols) != (X.n - 1, X.p):
            raise GenericityError(f"matrix must be {X.n - 1}x{X.p}, got {A.rows}x{A.cols}")
        Z = _ci_ideal(X, A)
        why = _ci_admissible(X, A, Z)
        if why:
            raise GenericityError(f"supplied complete-intersection matrix rejected: {why}")
        return Z, A
    for attempt in range(config.max_retries + 1):
        A = random_matrix(X.n - 1, X.p, derive_seed(seed, "ci", attempt), config.bound)
        Z = _ci_ideal(X, A)
        why = _ci_admissible(X, A, Z)
        if why is None:
            return Z, A
        log.info("complete intersection draw %d rejected: %s", attempt, why)
    raise GenericityError(f"no admissible complete intersection after {config.max_retries + 1} draws")


@dataclass(frozen=True)
class ResidualLink:
    """W = (I_Z : I_X^∞) with the number of quotients needed to stabilize."""

    ideal: Ideal
    rounds: int

    @property
    def quotient_is_saturated(self) -> bool:
        # rounds <= 1: (I_Z : I_X) already equals the saturation
        return self.rounds <= 1


def residual_link(Z: Ideal, X: CurveGerm) -> ResidualLink:
    IX = X.ideal
    if not Z.issubset(IX):
        raise DegenerateInputError("I_Z is not contained in I_X")
    W, rounds = saturate(Z, IX)
    return ResidualLink(W, rounds)


def ci_discrepancy(X: CurveGerm, W: Ideal):
    """I0(X, W) = colength of I_X + I_W at the origin (0 when W is the unit ideal)."""
    if W.is_unit():
        return 0
    value = colength(X.ideal + W, ColengthMode.AT_ORIGIN)
    if value == INFINITE:
        raise GenericityError("I_X + I_W has infinite colength: the complete intersection is not generic")
    return int(value)


@dataclass
class _LinkTrial:
    A: ConstMatrix
    W: ResidualLink
    i0: int


def _link_at(X: CurveGerm, seed: int, cfg: RunConfig) -> _LinkTrial:
    if X.p == X.n - 1 and cfg.matrix is None:
        # complete intersection input: any invertible A gives Z = X and W = (1)
        A = ConstMatrix([[int(i == j) for j in range(X.p)] for i in range(X.p)])
        return _LinkTrial(A, ResidualLink(Ideal.unit(X.ring), 0), 0)
    fixed = cfg.matrix is not None
    attempts = 1 if fixed else cfg.max_retries + 1
    last = None
    for attempt in range(attempts):
        sub = RunConfig(
            seed=cfg.seed, trials=cfg.trials, max_retries=0, step_budget=cfg.step_budget,
            bound=cfg.bound, form_bound=cfg.form_bound, matrix=cfg.matrix,
        )
        try:
            Z, A = generic_ci(X, derive_seed(seed, "link", attempt), sub)
            link = residual_link(Z, X)
            return _LinkTrial(A, link, ci_discrepancy(X, link.ideal))
        except GenericityError as exc:
            last = exc
            log.info("link attempt %d failed: %s", attempt, exc)
    raise GenericityError(f"complete intersection discrepancy: {last}")


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class TrialResult:
    seed: int
    m: int
    e_jac: int
    i0: int

    def as_dict(self):
        return {"seed": self.seed, "m": self.m, "e_jac": self.e_jac, "i0": self.i0}


@dataclass
class InvariantReport:
    m: int
    e_jac: int
    i0: int
    mu: int
    polar_degree: int
    w0_generators: list
    ci_matrix: ConstMatrix
    trials: list
    agreement: bool
    saturation_rounds: int
    quotient_is_saturated: bool
    smoothability_assumed: bool = True
    oracle: Optional[dict] = None
    notes: list = field(default_factory=list)

    def __post_init__(self):
        assert self.mu == self.e_jac - self.i0 - self.m + 1
        assert self.polar_degree == self.mu + self.m - 1

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "e_jac": self.e_jac,
            "i0": self.i0,
            "mu": self.mu,
            "polar_degree": self.polar_degree,
            "w0_generators": [str(g) for g in self.w0_generators],
            "ci_matrix": self.ci_matrix.tolist(),
            "trials": [t.as_dict() for t in self.trials],
            "agreement": self.agreement,
            "saturation_rounds": self.saturation_rounds,
            "quotient_is_saturated": self.quotient_is_saturated,
            "smoothability_assumed": self.smoothability_assumed,
            "oracle": self.oracle,
            "notes": list(self.notes),
        }


def monomial_semigroup(param) -> Optional[tuple]:
    """Exponents when every parametrization entry is a single monomial c*u^a."""
    if not param:
        return None
    exps = []
    for p in param:
        if len(p.terms) != 1:
            return None
        (m,) = p.terms
        if sum(m) == 0:
            return None
        exps.append(sum(m))
    return tuple(exps)


def milnor_number(X: CurveGerm, config: RunConfig = RunConfig()) -> InvariantReport:
    """m, e(Jac), I0 under the trial protocol, and mu = e(Jac) - I0 - m + 1."""
    minors = jacobian_minors(X)
    links = {}

    def trial(s):
        m = _multiplicity_at(X, s, config.form_bound)
        e = _hs_jacobian_at(X, s, config.form_bound, minors)
        link = _link_at(X, s, config)
        links[s] = link
        return (m, e, link.i0)

    (m, e, i0), results, agreed = _agreeing_value(trial, config.seed, config, "invariants")
    chosen = next(s for s, v in results if v == (m, e, i0))
    link = links[chosen]
    mu = e - i0 - m + 1
    if mu < 0:
        raise DegenerateInputError(
            f"e(Jac) - I0 - m + 1 = {mu} < 0: input is not a reduced smoothable curve germ"
        )
    notes = ["smoothability is assumed, not verified", "reducedness is checked only partially"]
    if not link.W.quotient_is_saturated:
        notes.append(f"(I_Z : I_X) needed {link.W.rounds} quotients to saturate")
    oracle = None
    exps = monomial_semigroup(X.parametrization) if X.parametrization else None
    if exps is not None:
        delta, gaps = semigroup_delta(exps)
        mu_oracle = milnor_from_delta(delta, 1)
        oracle = {"semigroup": list(exps), "delta": delta, "gaps": gaps, "mu": mu_oracle, "agrees": mu_oracle == mu}
        if mu_oracle != mu:
            notes.append(f"semigroup oracle gives mu = {mu_oracle}")
    return InvariantReport(
        m=m,
        e_jac=e,
        i0=i0,
        mu=mu,
        polar_degree=mu + m - 1,
        w0_generators=link.W.ideal.groebner() if not link.W.ideal.is_unit() else [Poly.constant(X.ring, 1)],
        ci_matrix=link.A,
        trials=[TrialResult(s, *v) for s, v in results],
        agreement=agreed,
        saturation_rounds=link.W.rounds,
        quotient_is_saturated=link.W.quotient_is_saturated,
        oracle=oracle,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Buchsbaum-Rim multiplicity of a reduction


def br_multiplicity(P: ModulePresentation, A: ConstMatrix, B: ConstMatrix, ambient: CurveGerm) -> int:
    """Colength in O_X of det(A [M] B), A e x p, B c x e."""
    M = P.matrix
    e = P.rank
    if (A.rows, A.cols) != (e, M.rows) or (B.rows, B.cols) != (M.cols, e):
        raise ValueError(f"need A {e}x{M.rows} and B {M.cols}x{e}")
    d = M.left_mul(A).right_mul(B).det()
    IX = ambient.ideal
    if not d or IX.contains_locally(d):
        raise DegenerateInputError("det(A [M] B) vanishes in O_X: A or B is not generic")
    return _finite(colength(IX + d, ColengthMode.AT_ORIGIN), "I_X + (det(A [M] B))")


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class ProfileRow:
    t: object
    global_intersection: object
    point_count: Optional[object]
    transversal: Optional[bool]
    w_generators: list

    def as_dict(self):
        def num(v):
            return None if v is None else ("INFINITE" if v == INFINITE else int(v))

        return {
            "t": format_rational(self.t),
            "global_intersection": num(self.global_intersection),
            "point_count": num(self.point_count),
            "transversal": self.transversal,
            "w_generators": [str(g) for g in self.w_generators],
        }


@dataclass
class FamilyProfile:
    ci_matrix: ConstMatrix
    rows: list

    @property
    def constant(self) -> bool:
        vals = {r.global_intersection for r in self.rows if r.t != 0}
        return len(vals) <= 1

    def as_dict(self):
        return {
            "ci_matrix": self.ci_matrix.tolist(),
            "rows": [r.as_dict() for r in self.rows],
            "constant_for_nonzero_t": self.constant,
        }


def family_profile(F: FamilyGerm, samples=None, config: RunConfig = RunConfig(), A=None) -> FamilyProfile:
    """Global intersection number of X_t and W_t for each sample t, one A for all t."""
    if F.equations is None:
        raise DegenerateInputError("family_profile needs family equations (one A for all t)")
    samples = tuple(to_rational(s) for s in (samples if samples is not None else F.samples))
    if not samples:
        raise ValueError("no samples given")
    ring = F.total_ring
    eqs = [f.embed(ring) for f in F.equations]
    X0 = F.fiber(0)
    A = A if A is not None else config.matrix
    if A is None:
        _, A = generic_ci(X0, config.seed, config)
    else:
        generic_ci(X0, config.seed, config, A=A)
    Zfam = A.apply(eqs)
    rows = []
    for t in samples:
        It = F.fiber_ideal(t)
        Zt = Ideal(F.ring, [z.specialize(F.param, t) for z in Zfam], F.step_budget)
        Wt, _ = saturate(Zt, It)
        S = It + Wt
        glob = colength(S, ColengthMode.GLOBAL)
        pts = trans = None
        if t != 0:
            pts = point_count(S, derive_seed(config.seed, "points"), config.trials, config.form_bound)
            trans = pts == glob
        rows.append(ProfileRow(t, glob, pts, trans, Wt.groebner()))
    return FamilyProfile(A, rows)


@dataclass(frozen=True)
class WhitneyRow:
    t: object
    m: int
    e_jac: int
    i0: int
    mu: int

    @property
    def difference(self) -> int:
        return self.e_jac - self.i0

    def as_dict(self):
        return {
            "t": format_rational(self.t),
            "m": self.m,
            "e_jac": self.e_jac,
            "i0": self.i0,
            "difference": self.difference,
            "mu": self.mu,
        }


@dataclass
class WhitneyVerdict:
    rows: list

    @property
    def constant(self) -> bool:
        return len({r.difference for r in self.rows}) == 1

    @property
    def verdict(self) -> str:
        return "CONSTANT" if self.constant else "NOT CONSTANT"

    def as_dict(self):
        out = {"verdict": self.verdict, "rows": [r.as_dict() for r in self.rows]}
        if self.constant:
            out["difference"] = self.rows[0].difference
        return out


def whitney_check(F: FamilyGerm, samples=None, config: RunConfig = RunConfig()) -> WhitneyVerdict:
    """e(Jac(X_t, 0)) - I0(X_t, W_t) per sample; CONSTANT iff all equal."""
    samples = tuple(to_rational(s) for s in (samples if samples is not None else F.samples))
    if not samples:
        raise ValueError("no samples given")
    rows = []
    for t in samples:
        report = milnor_number(F.fiber(t), config)
        rows.append(WhitneyRow(t, report.m, report.e_jac, report.i0, report.mu))
    return WhitneyVerdict(rows)

