"""Krivine-Vasilescu certificates of nonnegativity.

A compact domain ``{x : c_j(x) >= 0}`` is described by constraints whose
suprema are known.  After rescaling each constraint into ``[0, 1]`` the
degree-``d`` cone is spanned by the products

    c_1^a_1 ... c_m^a_m (1 - c_1)^b_1 ... (1 - c_m)^b_m,   |a| + |b| <= d

with nonnegative weights.  On the probability simplex the equal-degree
Bernstein products form a basis, so membership there is a sign check on
:func:`~pcoherence.polynomial.to_bernstein_form` rather than an LP.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import lp
from .errors import DegreeError, DimensionError
from .polynomial import (
    Polynomial,
    bernstein_generator,
    compositions,
    multinomial,
    simplex_indices,
    to_bernstein_form,
    to_fraction,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SemiAlgebraicDomain:
    """Normalised constraints ``c_hat_j`` together with the suprema used to build them."""

    n_vars: int
    constraints: tuple[Polynomial, ...]
    sup_values: tuple[Fraction, ...]
    raw: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        if not self.constraints:
            raise ValueError("a domain needs at least one constraint")
        for c in self.constraints:
            if c.n_vars != self.n_vars:
                raise DimensionError("constraint has the wrong number of variables")

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def max_constraint_degree(self) -> int:
        return max(max(c.total_degree, 0) for c in self.constraints)

    def contains(self, point) -> bool:
        return all(c(point) >= 0 for c in (self.raw or self.constraints))

    @classmethod
    def simplex(cls, n_vars: int) -> "SemiAlgebraicDomain":
        raw = Polynomial.variables(n_vars) + (Polynomial.slack(n_vars),)
        return normalize_domain(raw, [1] * len(raw))

    def to_dict(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "constraints": [
                dict(c.to_dict(), sup=str(s)) for c, s in zip(self.raw or self.constraints, self.sup_values)
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SemiAlgebraicDomain":
        raw = [Polynomial.from_dict(c) for c in data["constraints"]]
        sups = [Fraction(c["sup"]) for c in data["constraints"]]
        return normalize_domain(raw, sups)


def normalize_domain(raw: Sequence[Polynomial], sups: Sequence) -> SemiAlgebraicDomain:
    """Divide each constraint by its supremum over the domain (left alone when the supremum is 0)."""
    if len(raw) != len(sups):
        raise ValueError("one supremum per constraint")
    if not raw:
        raise ValueError("a domain needs at least one constraint")
    sups = tuple(to_fraction(s) for s in sups)
    if any(s < 0 for s in sups):
        raise ValueError("suprema of constraints must be nonnegative")
    hats = tuple(c / s if s > 0 else c for c, s in zip(raw, sups))
    return SemiAlgebraicDomain(raw[0].n_vars, hats, sups, tuple(raw))


def estimate_sup(constraint: Polynomial, domain_constraints: Sequence[Polynomial], box=None,
                 step=Fraction(1, 64), claimed=None) -> Fraction:
    """Grid maximum of ``constraint`` over the points of ``box`` satisfying every domain constraint.

    ``box`` is a list of ``(low, high)`` pairs, default the unit cube.  When
    ``claimed`` is given and smaller than the grid maximum a warning is logged.
    """
    n = constraint.n_vars
    box = box or [(0, 1)] * n
    step = to_fraction(step)
    axes = []
    for lo, hi in box:
        lo, hi = to_fraction(lo), to_fraction(hi)
        k = int((hi - lo) / step)
        axes.append([lo + i * step for i in range(k + 1)])
    best = None

    def walk(prefix):
        nonlocal best
        if len(prefix) == n:
            if all(c(prefix) >= 0 for c in domain_constraints):
                v = constraint(prefix)
                if best is None or v > best:
                    best = v
            return
        for v in axes[len(prefix)]:
            walk(prefix + [v])

    walk([])
    if best is None:
        raise ValueError("no grid point satisfies the domain constraints")
    if claimed is not None and to_fraction(claimed) < best:
        log.warning("claimed supremum %s is below the grid estimate %s", claimed, best)
    return best


# generators ------------------------------------------------------------------


def kv_indices(m: int, d: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ``(alpha, beta)`` with ``|alpha| + |beta| <= d``, ordered lexicographically on ``alpha + beta``."""
    out = []
    for k in range(d + 1):
        for ab in compositions(k, 2 * m):
            out.append(ab)
    out.sort()
    return [(ab[:m], ab[m:]) for ab in out]


def kv_generators(domain: SemiAlgebraicDomain, d: int) -> list[tuple[tuple, Polynomial]]:
    if d < 0:
        raise ValueError("degree must be nonnegative")
    n = domain.n_vars
    hats = domain.constraints
    comps = [1 - c for c in hats]
    cache: dict = {}

    def power(base, i, k):
        key = (base, i, k)
        if key not in cache:
            cache[key] = (hats if base == 0 else comps)[i] ** k
        return cache[key]

    out = []
    for alpha, beta in kv_indices(domain.m, d):
        g = Polynomial.constant(1, n)
        for i, k in enumerate(alpha):
            if k:
                g = g * power(0, i, k)
        for i, k in enumerate(beta):
            if k:
                g = g * power(1, i, k)
        out.append(((alpha, beta), g))
    return out


def simplex_generators(n_vars: int, d: int) -> list[tuple[tuple[int, ...], Polynomial]]:
    """The equal-degree Bernstein products of degree ``d``."""
    return [(a, bernstein_generator(a, n_vars)) for a in simplex_indices(n_vars, d)]


# certificates ----------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Positive weights on cone generators.

    ``index`` keys are ``alpha`` tuples of length ``n + 1`` for the simplex
    cone, or ``(alpha, beta)`` pairs for a general domain.
    """

    degree: int
    weights: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k in sorted(self.weights):
            w = to_fraction(self.weights[k])
            if w < 0:
                raise ValueError(f"negative certificate weight {w} at {k}")
            if w:
                clean[k] = w
        object.__setattr__(self, "weights", clean)

    def expand(self, domain: SemiAlgebraicDomain | None = None, n_vars: int | None = None) -> Polynomial:
        """Re-expand ``sum u * generator`` (simplex products when ``domain`` is None)."""
        if domain is None:
            if n_vars is None:
                if not self.weights:
                    raise ValueError("n_vars is needed to expand an empty simplex certificate")
                n_vars = len(next(iter(self.weights))) - 1
            out = Polynomial.zero(n_vars)
            for a, u in self.weights.items():
                out = out + u * bernstein_generator(a, n_vars)
            return out
        gens = dict(kv_generators(domain, self.degree))
        out = Polynomial.zero(domain.n_vars)
        for k, u in self.weights.items():
            out = out + u * gens[k]
        return out

    def __add__(self, other: "Certificate") -> "Certificate":
        if self.degree != other.degree:
            raise DegreeError("certificates of different degree")
        w = dict(self.weights)
        for k, v in other.weights.items():
            w[k] = w.get(k, 0) + v
        return Certificate(self.degree, w)

    def scaled(self, factor) -> "Certificate":
        factor = to_fraction(factor)
        return Certificate(self.degree, {k: factor * v for k, v in self.weights.items()})

    def to_dict(self) -> dict:
        def flat(k):
            if k and isinstance(k[0], tuple):
                return list(k[0]) + list(k[1])
            return list(k)

        return {
            "degree": self.degree,
            "weights": [
                {"index": flat(k), "num": str(u.numerator), "den": str(u.denominator)}
                for k, u in self.weights.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping, m: int | None = None) -> "Certificate":
        """``m`` (number of domain constraints) splits flat general-domain indices."""
        w = {}
        for entry in data["weights"]:
            idx = tuple(entry["index"])
            if m is not None:
                idx = (idx[:m], idx[m:])
            w[idx] = Fraction(int(entry["num"]), int(entry.get("den", "1")))
        return cls(int(data["degree"]), w)


# the shared cone program -----------------------------------------------------


@dataclass(frozen=True)
class ConeProgramResult:
    status: str
    y: tuple[Fraction, ...] | None = None
    certificate: Certificate | None = None
    objective: Fraction | None = None
    ray: tuple[Fraction, ...] | None = None


def solve_cone_program(base: Polynomial, columns: Sequence[Polynomial], d: int, *,
                       objective: Sequence | None = None, free: Sequence[int] = (),
                       domain: SemiAlgebraicDomain | None = None) -> ConeProgramResult:
    """Maximise ``objective . y`` subject to ``base + sum_k y_k columns[k]`` lying in the degree-``d`` cone.

    ``y_k >= 0`` unless ``k`` is listed in ``free``.  With ``domain=None`` the
    cone is the equal-degree simplex cone and the slack of each basis
    coefficient is the certificate weight; otherwise generator weights are
    LP variables matched coefficient by coefficient.
    """
    k = len(columns)
    objective = [Fraction(0)] * k if objective is None else [to_fraction(v) for v in objective]
    for p in columns:
        if p.n_vars != base.n_vars:
            raise DimensionError("cone program polynomials disagree on n_vars")
    if domain is None:
        return _simplex_program(base, columns, d, objective, free)
    return _kv_program(base, columns, d, objective, free, domain)


def _simplex_program(base, columns, d, objective, free):
    top = max([base.total_degree] + [p.total_degree for p in columns])
    if top > d:
        raise DegreeError(f"degree {d} is too low for polynomials of degree {top}")
    b0 = to_bernstein_form(base, d).coeffs
    bcols = [to_bernstein_form(p, d).coeffs for p in columns]
    idx = list(b0)
    # -sum_k y_k B(P_k)_a <= B(base)_a
    A = [[-bc[a] for bc in bcols] for a in idx]
    b = [b0[a] for a in idx]
    if not columns:
        ok = all(v >= 0 for v in b)
        if not ok:
            return ConeProgramResult(lp.INFEASIBLE)
        return ConeProgramResult(lp.OPTIMAL, (), Certificate(d, dict(zip(idx, b))), Fraction(0))
    res = lp.maximize(objective, A_ub=A, b_ub=b, free=free)
    if res.status == lp.INFEASIBLE:
        return ConeProgramResult(lp.INFEASIBLE)
    if res.status == lp.UNBOUNDED:
        return ConeProgramResult(lp.UNBOUNDED, res.x, ray=res.ray)
    y = res.x
    weights = {a: b0[a] + sum((yk * bc[a] for yk, bc in zip(y, bcols)), Fraction(0)) for a in idx}
    return ConeProgramResult(lp.OPTIMAL, y, Certificate(d, weights), res.objective)


def _kv_program(base, columns, d, objective, free, domain):
    gens = kv_generators(domain, d)
    top_gen = max(g.total_degree for _, g in gens)
    top = max([base.total_degree] + [p.total_degree for p in columns])
    if top > top_gen:
        raise DegreeError(f"cone degree {d} reaches polynomial degree {top_gen} < {top}")
    monos = set(base.terms)
    for p in columns:
        monos.update(p.terms)
    for _, g in gens:
        monos.update(g.terms)
    monos = sorted(monos)
    k = len(columns)
    # variables: y (k of them) then u (one per generator)
    A, b = [], []
    for mono in monos:
        row = [p.coefficient(mono) for p in columns] + [-g.coefficient(mono) for _, g in gens]
        A.append(row)
        b.append(-base.coefficient(mono))
    c = list(objective) + [Fraction(0)] * len(gens)
    res = lp.maximize(c, A_eq=A, b_eq=b, free=free)
    if res.status == lp.INFEASIBLE:
        return ConeProgramResult(lp.INFEASIBLE)
    if res.status == lp.UNBOUNDED:
        return ConeProgramResult(lp.UNBOUNDED, res.x[:k], ray=res.ray[:k])
    y, u = res.x[:k], res.x[k:]
    cert = Certificate(d, {key: w for (key, _), w in zip(gens, u)})
    return ConeProgramResult(lp.OPTIMAL, y, cert, res.objective)


# membership ------------------------------------------------------------------


def cone_membership(g: Polynomial, domain: SemiAlgebraicDomain, d: int) -> Certificate | None:
    """A Krivine-Vasilescu certificate of degree ``d`` for ``g``, or None.

    None means only that no certificate exists at this degree.
    """
    res = solve_cone_program(g, [], d, domain=domain)
    return res.certificate if res.status == lp.OPTIMAL else None


def simplex_membership(g: Polynomial, d: int) -> Certificate | None:
    """Certificate over the equal-degree simplex generators, or None if some basis coefficient is negative."""
    form = to_bernstein_form(g, d)
    if not form.is_nonnegative():
        return None
    return Certificate(d, form.coeffs)


def pullup_epsilon(f: Polynomial, d: int) -> Fraction:
    """Least ``eps >= 0`` such that ``f + eps`` is in the degree-``d`` simplex cone.

    Adding ``eps`` adds ``eps * multinomial(d; alpha)`` to each basis
    coefficient, because the scaled products sum to one.
    """
    form = to_bernstein_form(f, d)
    worst = Fraction(0)
    for a, b in form.coeffs.items():
        need = -b / multinomial(d, a)
        if need > worst:
            worst = need
    return worst


def kv_pullup_epsilon(f: Polynomial, domain: SemiAlgebraicDomain, d: int) -> Fraction | None:
    """Least ``eps >= 0`` with ``f + eps`` in the general degree-``d`` cone, or None if no shift works."""
    one = Polynomial.constant(1, f.n_vars)
    # maximise -eps  s.t.  f + eps*1 in cone
    res = solve_cone_program(f, [one], d, objective=[-1], domain=domain)
    if res.status != lp.OPTIMAL:
        return None
    return res.y[0]


def check_pullup(domain: SemiAlgebraicDomain, d: int, degree: int | None = None) -> dict:
    """Empirical pullup check: for each monomial ``b`` up to ``degree``, the shift needed by ``+b`` and ``-b``.

    A value of None in the result marks a basis element that cannot be
    pulled up at this cone degree.
    """
    from .polynomial import exponents_up_to

    degree = domain.max_constraint_degree * d if degree is None else degree
    out = {}
    for exp in exponents_up_to(degree, domain.n_vars):
        b = Polynomial(domain.n_vars, {exp: 1})
        out[(exp, 1)] = kv_pullup_epsilon(b, domain, d)
        out[(exp, -1)] = kv_pullup_epsilon(-b, domain, d)
    return out
