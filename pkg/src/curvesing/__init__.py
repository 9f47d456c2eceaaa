"""Singularity invariants of space curve germs.

Milnor numbers from the Jacobian multiplicity, the multiplicity and the
intersection number with a residual link, plus independent oracles and
family audits.  All arithmetic is exact over the rationals.
"""

from .basis import INFINITE, Basis, groebner_basis, standard_basis
from .errors import (
    CurveSingError,
    DegenerateInputError,
    GenericityError,
    ParseError,
    StepBudgetExceeded,
)
from .ideal import (
    ColengthMode,
    Ideal,
    colength,
    eliminate,
    implicitize,
    intersect,
    point_count,
    quotient,
    saturate,
    specialize,
)
from .invariants import (
    CurveGerm,
    FamilyGerm,
    InvariantReport,
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
    residual_link,
    whitney_check,
)
from .oracle import (
    SemigroupSpec,
    milnor_from_delta,
    semigroup_delta,
    stabilized_colength,
    truncated_colength,
)
from .poly import (
    DEGREVLEX,
    LEX,
    NEGDEGLEX,
    NEGDEGREVLEX,
    ConstMatrix,
    MonomialOrder,
    Poly,
    PolyMatrix,
    parse_poly,
    print_poly,
)
from .rational import BACKEND, QQ

__version__ = "0.1.0"
