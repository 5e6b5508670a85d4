"""Moment states: linear functionals on polynomials given by their moments.

A state of degree ``d`` stores ``z_g = L(theta^g)`` for every ``|g| <= d``
with ``z_0 = 1``.  It is valid when it is nonnegative on every Bernstein
product of degree at most ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import lp
from .coherence import AssessmentSet
from .errors import DegreeError, DimensionError, InvalidStateError, ZeroLikelihoodError
from .polynomial import (
    Polynomial,
    bernstein_generator,
    exponents_up_to,
    simplex_indices,
    to_bernstein_form,
    to_fraction,
)


@dataclass(frozen=True)
class MomentState:
    n_vars: int
    degree: int
    moments: Mapping[tuple[int, ...], Fraction]

    def __post_init__(self):
        clean = {}
        for g, z in self.moments.items():
            g = tuple(int(x) for x in g)
            if len(g) != self.n_vars:
                raise DimensionError(f"moment index {g} for {self.n_vars} variables")
            if sum(g) > self.degree:
                raise DegreeError(f"moment index {g} exceeds degree {self.degree}")
            clean[g] = to_fraction(z)
        missing = [g for g in exponents_up_to(self.degree, self.n_vars) if g not in clean]
        if missing:
            raise ValueError(f"moment state is missing {missing}")
        if clean[(0,) * self.n_vars] != 1:
            raise InvalidStateError("L(1) must equal 1")
        object.__setattr__(self, "moments", {g: clean[g] for g in sorted(clean)})

    def __getitem__(self, g) -> Fraction:
        return self.moments[tuple(g)]

    def __call__(self, p: Polynomial) -> Fraction:
        return expectation(self, p)

    def to_dict(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "degree": self.degree,
            "moments": [
                {"exp": list(g), "num": str(z.numerator), "den": str(z.denominator)}
                for g, z in self.moments.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MomentState":
        moments = {
            tuple(m["exp"]): Fraction(int(m["num"]), int(m.get("den", "1"))) for m in data["moments"]
        }
        return cls(int(data["n_vars"]), int(data["degree"]), moments)


def expectation(L: MomentState, p: Polynomial) -> Fraction:
    if p.n_vars != L.n_vars:
        raise DimensionError(f"polynomial in {p.n_vars} variables, state in {L.n_vars}")
    if p.total_degree > L.degree:
        raise DegreeError(f"polynomial of degree {p.total_degree} beyond state degree {L.degree}")
    return sum((c * L.moments[g] for g, c in p.items()), Fraction(0))


@dataclass(frozen=True)
class StateCheck:
    valid: bool
    violations: tuple[tuple[int, ...], ...] = ()
    values: Mapping = field(default_factory=dict)

    def __bool__(self):
        return self.valid


def is_valid_state(L: MomentState, *, strict: bool = False) -> StateCheck:
    """Check ``L(1) = 1`` and ``L(generator) >= 0`` for all products with ``|alpha| <= d``.

    ``violations`` lists every offending ``alpha`` (length ``n + 1``).  In
    ``strict`` mode the state must also pass :func:`extends_to_degree` for
    ``d + 1`` and ``d + 2``.
    """
    values, bad = {}, []
    for k in range(L.degree + 1):
        for a in simplex_indices(L.n_vars, k):
            v = expectation(L, bernstein_generator(a, L.n_vars))
            values[a] = v
            if v < 0:
                bad.append(a)
    ok = not bad and L.moments[(0,) * L.n_vars] == 1
    if ok and strict:
        ok = all(extends_to_degree(L, L.degree + j) for j in (1, 2))
    return StateCheck(ok, tuple(bad), values)


def extends_to_degree(L: MomentState, d_prime: int) -> bool:
    """Is ``L`` nonnegative on every element of the degree-``d_prime`` cone that has degree <= ``L.degree``?

    Decided by an LP: minimise ``L(p)`` over ``p = sum u_a generator_a``
    (``|a| = d_prime``, ``sum u = 1``) with every coefficient of degree
    above ``L.degree`` forced to zero.
    """
    if d_prime < L.degree:
        raise DegreeError("d_prime must be at least the state degree")
    n = L.n_vars
    idx = simplex_indices(n, d_prime)
    gens = [bernstein_generator(a, n) for a in idx]
    high = sorted({e for g in gens for e in g.terms if sum(e) > L.degree})
    A_eq = [[g.coefficient(e) for g in gens] for e in high]
    b_eq = [0] * len(high)
    A_eq.append([1] * len(gens))
    b_eq.append(1)
    cost = []
    for g in gens:
        low = Polynomial(n, {e: c for e, c in g.items() if sum(e) <= L.degree})
        cost.append(-expectation(L, low))
    res = lp.maximize(cost, A_eq=A_eq, b_eq=b_eq)
    if res.status == lp.INFEASIBLE:
        return True
    return -res.objective >= 0


def credal_membership(L: MomentState, G: AssessmentSet) -> bool:
    """``L(g) >= 0`` for every assessed gamble."""
    if not is_valid_state(L):
        raise InvalidStateError("not a valid state")
    return all(expectation(L, g) >= 0 for g in G.gambles)


def conditional_value(L: MomentState, q: Polynomial, pi: Polynomial) -> Fraction:
    """The ``l0`` solving ``L((q - l0) * pi) = 0``."""
    denom = expectation(L, pi)
    if denom == 0:
        raise ZeroLikelihoodError("the likelihood has zero prevision under this state")
    return expectation(L, q * pi) / denom


@dataclass(frozen=True)
class DiracMixture:
    """A finite probability mixture of point masses on the simplex."""

    atoms: tuple[tuple[Fraction, tuple[Fraction, ...]], ...]

    def __post_init__(self):
        atoms = tuple((to_fraction(w), tuple(to_fraction(x) for x in t)) for w, t in self.atoms)
        if not atoms:
            raise ValueError("a mixture needs at least one atom")
        n = len(atoms[0][1])
        for w, t in atoms:
            if w < 0:
                raise ValueError("negative mixture weight")
            if len(t) != n:
                raise DimensionError("atoms of different dimension")
            if any(x < 0 for x in t) or sum(t) > 1:
                raise ValueError(f"atom {t} is outside the simplex")
        if sum(w for w, _ in atoms) != 1:
            raise ValueError("mixture weights must sum to 1")
        object.__setattr__(self, "atoms", atoms)

    @property
    def n_vars(self) -> int:
        return len(self.atoms[0][1])


def mixture_moments(M: DiracMixture, d: int) -> MomentState:
    if d < 0:
        raise DegreeError("degree must be nonnegative")
    moments = {}
    for g in exponents_up_to(d, M.n_vars):
        z = Fraction(0)
        for w, t in M.atoms:
            term = w
            for x, k in zip(t, g):
                if k:
                    term *= x**k
            z += term
        moments[g] = z
    return MomentState(M.n_vars, d, moments)


def point_state(point: Sequence, d: int) -> MomentState:
    return mixture_moments(DiracMixture(((1, tuple(point)),)), d)


def marginal_moments(L: MomentState) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """``(L(H_r), L(H_l), L(H_r^2), L(H_l^2))`` for two coins.

    The coordinates are the joint outcome probabilities (HH, TH, HT), so
    right-coin Heads is ``theta_1 + theta_2`` and left-coin Heads is
    ``theta_1 + theta_3``.
    """
    if L.n_vars != 3:
        raise DimensionError("marginals are defined for the two-coin simplex (n = 3)")
    if L.degree < 2:
        raise DegreeError("marginal second moments need a degree-2 state")
    t1, t2, t3 = Polynomial.variables(3)
    heads_r, heads_l = t1 + t2, t1 + t3
    return (
        expectation(L, heads_r),
        expectation(L, heads_l),
        expectation(L, heads_r**2),
        expectation(L, heads_l**2),
    )


def assessments_from_state(L: MomentState) -> AssessmentSet:
    """Encode a precise state as desirable gambles ``b - L(b)`` and ``L(b) - b`` for each monomial ``b``.

    The constant monomial contributes nothing and is skipped.
    """
    n = L.n_vars
    gambles = []
    for g, z in L.moments.items():
        if sum(g) == 0:
            continue
        b = Polynomial(n, {g: 1})
        gambles.append(b - z)
        gambles.append(z - b)
    return AssessmentSet(n, tuple(gambles), L.degree)


def state_from_bernstein_values(n_vars: int, d: int, values: Mapping) -> MomentState:
    """Recover moments from the values of ``L`` on the degree-``d`` equal-degree products.

    Every monomial of degree <= ``d`` is a fixed combination of those
    products, so the values determine ``L`` completely.
    """
    moments = {}
    for g in exponents_up_to(d, n_vars):
        form = to_bernstein_form(Polynomial(n_vars, {g: 1}), d)
        moments[g] = sum((c * to_fraction(values[a]) for a, c in form.coeffs.items() if c), Fraction(0))
    return MomentState(n_vars, d, moments)
