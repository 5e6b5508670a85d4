"""Consistency, lower previsions, the degree hierarchy and updating.

Every question is one cone program (see :func:`pcoherence.cone.solve_cone_program`):

* consistency:        is ``-1 - sum l_i g_i`` in the cone for some ``l >= 0``?
* lower prevision:    ``sup l_0`` with ``q - l_0 - sum l_i g_i`` in the cone
* updated prevision:  ``sup l_0`` with ``(q - l_0) pi - sum l_j g_j`` in the cone

The default cone is the equal-degree Bernstein cone on the simplex; pass a
:class:`~pcoherence.cone.SemiAlgebraicDomain` to use general
Krivine-Vasilescu generators instead.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lp
from .cone import Certificate, SemiAlgebraicDomain, cone_membership, simplex_membership, solve_cone_program
from .errors import DegreeError, DimensionError, UnboundedProgramError
from .polynomial import Polynomial


@dataclass(frozen=True)
class AssessmentSet:
    """A finite set of gambles judged desirable, with the degree they live in."""

    n_vars: int
    gambles: tuple[Polynomial, ...] = ()
    base_degree: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "gambles", tuple(self.gambles))
        for g in self.gambles:
            if g.n_vars != self.n_vars:
                raise DimensionError(f"gamble in {g.n_vars} variables, set has {self.n_vars}")
        top = max([0] + [g.total_degree for g in self.gambles])
        if self.base_degree is None:
            object.__setattr__(self, "base_degree", top)
        elif self.base_degree < top:
            raise DegreeError(f"base degree {self.base_degree} below gamble degree {top}")

    def __len__(self):
        return len(self.gambles)

    def __iter__(self):
        return iter(self.gambles)

    def with_gambles(self, extra: Sequence[Polynomial]) -> "AssessmentSet":
        return AssessmentSet(self.n_vars, self.gambles + tuple(extra))

    def to_dict(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "base_degree": self.base_degree,
            "gambles": [g.to_dict() for g in self.gambles],
        }

    @classmethod
    def from_dict(cls, data) -> "AssessmentSet":
        if isinstance(data, list):
            gambles = [Polynomial.from_dict(g) for g in data]
            if not gambles:
                raise ValueError("an empty gamble list does not say how many variables there are")
            return cls(gambles[0].n_vars, tuple(gambles))
        gambles = tuple(Polynomial.from_dict(g) for g in data.get("gambles", []))
        return cls(int(data["n_vars"]), gambles, data.get("base_degree"))


@dataclass(frozen=True)
class PrevisionResult:
    """Optimum of a prevision program and its witness.

    For ``sense == "lower"`` the witness satisfies, as polynomials,

        (q - value) * pi - sum lambda_i g_i == certificate.expand()

    with ``pi = 1`` when no likelihood is involved.  For ``sense ==
    "upper"`` the left side is ``(value - q) * pi - sum lambda_i g_i``.
    A vacuous update carries ``value=None`` and ``vacuous=True``.
    """

    value: Fraction | None
    lambda_weights: tuple[Fraction, ...]
    certificate: Certificate | None
    degree_used: int
    sense: str = "lower"
    vacuous: bool = False
    pi: Polynomial | None = None

    def residual(self, q: Polynomial, G: AssessmentSet,
                 domain: SemiAlgebraicDomain | None = None) -> Polynomial:
        """Left side minus right side of the witness identity; zero when the witness is valid."""
        if self.vacuous:
            raise ValueError("a vacuous result has no witness")
        pi = self.pi if self.pi is not None else Polynomial.constant(1, q.n_vars)
        lhs = (q - self.value) * pi if self.sense == "lower" else (self.value - q) * pi
        for lam, g in zip(self.lambda_weights, G.gambles):
            lhs = lhs - lam * g
        return lhs - self.certificate.expand(domain, n_vars=q.n_vars)

    def to_dict(self) -> dict:
        def frac(v):
            return None if v is None else str(v)

        return {
            "value": frac(self.value),
            "value_float": None if self.value is None else float(self.value),
            "sense": self.sense,
            "vacuous": self.vacuous,
            "degree_used": self.degree_used,
            "lambda_weights": [str(v) for v in self.lambda_weights],
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


@dataclass(frozen=True)
class CoherenceVerdict:
    consistent: bool
    lambda_weights: tuple[Fraction, ...] | None = None
    certificate: Certificate | None = None
    degree: int = 0

    def __post_init__(self):
        if self.consistent != (self.certificate is None):
            raise ValueError("a witness is present exactly when the set is inconsistent")

    @property
    def witness(self):
        return None if self.consistent else (self.lambda_weights, self.certificate)

    def derived(self, G: AssessmentSet, domain: SemiAlgebraicDomain | None = None) -> Polynomial:
        """``sum lambda_i g_i + certificate``: equals the constant -1 for a valid witness."""
        out = self.certificate.expand(domain, n_vars=G.n_vars)
        for lam, g in zip(self.lambda_weights, G.gambles):
            out = out + lam * g
        return out

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "degree": self.degree,
            "lambda_weights": None if self.consistent else [str(v) for v in self.lambda_weights],
            "certificate": None if self.consistent else self.certificate.to_dict(),
        }


def _check_degree(d: int, G: AssessmentSet, *polys: Polynomial, domain=None):
    if d < 0:
        raise DegreeError("degree must be nonnegative")
    if domain is not None:
        return  # the general program checks reachable generator degree itself
    top = max([G.base_degree] + [p.total_degree for p in polys])
    if top > d:
        raise DegreeError(f"degree {d} is too low; need at least {top}")


def check_consistency(G: AssessmentSet, d: int, *,
                      domain: SemiAlgebraicDomain | None = None) -> CoherenceVerdict:
    """Decide whether ``-1`` is derivable from ``G`` and the degree-``d`` cone."""
    _check_degree(d, G, domain=domain)
    minus_one = Polynomial.constant(-1, G.n_vars)
    res = solve_cone_program(minus_one, [-g for g in G.gambles], d, domain=domain)
    if res.status == lp.INFEASIBLE:
        return CoherenceVerdict(True, degree=d)
    return CoherenceVerdict(False, tuple(res.y), res.certificate, d)


def lower_prevision(q: Polynomial, G: AssessmentSet, d: int, *,
                    domain: SemiAlgebraicDomain | None = None) -> PrevisionResult:
    """``sup l_0`` such that ``q - l_0 - sum l_i g_i`` is in the degree-``d`` cone.

    Raises :class:`UnboundedProgramError` when every price is acceptable,
    which happens exactly when ``G`` is inconsistent at this degree.
    """
    _check_degree(d, G, q, domain=domain)
    one = Polynomial.constant(1, q.n_vars)
    columns = [-one] + [-g for g in G.gambles]
    objective = [1] + [0] * len(G)
    res = solve_cone_program(q, columns, d, objective=objective, free=[0], domain=domain)
    if res.status == lp.UNBOUNDED:
        raise UnboundedProgramError("lower prevision is +infinity: the assessments are inconsistent")
    if res.status == lp.INFEASIBLE:
        raise DegreeError(f"no price makes the gamble derivable at degree {d}")
    return PrevisionResult(res.y[0], tuple(res.y[1:]), res.certificate, d)


def upper_prevision(q: Polynomial, G: AssessmentSet, d: int, *,
                    domain: SemiAlgebraicDomain | None = None) -> PrevisionResult:
    low = lower_prevision(-q, G, d, domain=domain)
    return PrevisionResult(-low.value, low.lambda_weights, low.certificate, d, sense="upper")


def hierarchy(q: Polynomial, G: AssessmentSet, d_min: int, d_max: int, *,
              domain: SemiAlgebraicDomain | None = None) -> list[tuple[int, Fraction]]:
    """Lower previsions at each degree ``d_min..d_max``; nondecreasing in ``d``."""
    if d_min < max(q.total_degree, G.base_degree):
        raise DegreeError("d_min is below the degree of the gamble or the assessments")
    if d_max < d_min:
        raise ValueError("empty degree range")
    return [(d, lower_prevision(q, G, d, domain=domain).value) for d in range(d_min, d_max + 1)]


def hierarchy_csv(rows: Sequence[tuple[int, Fraction]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "value_num", "value_den", "value_float"])
    for d, v in rows:
        w.writerow([d, v.numerator, v.denominator, repr(float(v))])
    return buf.getvalue()


def subset_sum_partitions(n: int) -> list[Polynomial]:
    """Sums over every nonempty proper subset of ``{theta_1, ..., theta_n, 1 - sum theta}``.

    Ordered by subset size, then lexicographically by member positions.
    """
    if n < 1:
        raise ValueError("n must be positive")
    parts = list(Polynomial.variables(n)) + [Polynomial.slack(n)]
    out = []
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n + 1), size):
            out.append(sum((parts[i] for i in combo), Polynomial.zero(n)))
    return out


def updated_lower_prevision(q: Polynomial, pi: Polynomial, G: AssessmentSet, d: int, *,
                            arbitrary_likelihood: bool = False,
                            domain: SemiAlgebraicDomain | None = None) -> PrevisionResult:
    """``sup l_0`` such that ``(q - l_0) pi - sum l_j g_j`` is in the cone.

    ``pi`` must be a subset sum of the degree-one partition of unity unless
    ``arbitrary_likelihood`` is set, in which case it must instead carry a
    simplex certificate.  On a general ``domain`` it must carry a
    certificate for that domain.  The working degree is raised to
    ``deg(q * pi)`` and the assessment degree when needed.
    """
    if pi.n_vars != q.n_vars or G.n_vars != q.n_vars:
        raise DimensionError("q, pi and G must share n_vars")
    qpi = q * pi
    d_used = max(d, qpi.total_degree, pi.total_degree, G.base_degree)
    if domain is not None:
        if cone_membership(pi, domain, d_used) is None:
            raise ValueError("likelihood is not certified nonnegative on the domain")
    elif arbitrary_likelihood:
        if simplex_membership(pi, d_used) is None:
            raise ValueError("likelihood is not certified nonnegative on the simplex")
    elif pi not in subset_sum_partitions(q.n_vars):
        raise ValueError("pi is not a subset sum of the partition of unity")
    columns = [-pi] + [-g for g in G.gambles]
    objective = [1] + [0] * len(G)
    res = solve_cone_program(qpi, columns, d_used, objective=objective, free=[0], domain=domain)
    if res.status == lp.UNBOUNDED:
        raise UnboundedProgramError("updated lower prevision is +infinity")
    if res.status == lp.INFEASIBLE:
        return PrevisionResult(None, (), None, d_used, vacuous=True, pi=pi)
    return PrevisionResult(res.y[0], tuple(res.y[1:]), res.certificate, d_used, pi=pi)
