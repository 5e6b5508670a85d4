"""Exact P-coherence for polynomial gambles on the probability simplex.

Gambles are :class:`Polynomial` objects with rational coefficients.  A
polynomial counts as nonnegative when it has a Krivine-Vasilescu (on the
simplex: Bernstein) certificate of a given degree, which turns consistency
checking and lower previsions into exact linear programs.
"""

from .coherence import (
    AssessmentSet,
    CoherenceVerdict,
    PrevisionResult,
    check_consistency,
    hierarchy,
    hierarchy_csv,
    lower_prevision,
    subset_sum_partitions,
    updated_lower_prevision,
    upper_prevision,
)
from .cone import (
    Certificate,
    SemiAlgebraicDomain,
    cone_membership,
    kv_generators,
    normalize_domain,
    pullup_epsilon,
    simplex_generators,
    simplex_membership,
)
from .errors import (
    DegreeError,
    DimensionError,
    InfeasibleProgramError,
    InvalidStateError,
    UnboundedProgramError,
    ZeroLikelihoodError,
)
from .moments import (
    DiracMixture,
    MomentState,
    assessments_from_state,
    conditional_value,
    credal_membership,
    expectation,
    is_valid_state,
    marginal_moments,
    mixture_moments,
)
from .oracle import classical_oracle_prevision
from .polynomial import (
    BernsteinForm,
    Polynomial,
    bernstein_generator,
    poly_add,
    poly_eval,
    poly_mul,
    to_bernstein_form,
)

__version__ = "0.1.0"
