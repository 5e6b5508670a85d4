"""The two-coin experiment: a Bell-type violation and perfectly matched coins.

Coordinates on the 3-simplex are the joint probabilities of
(Heads_l Heads_r, Tails_l Heads_r, Heads_l Tails_r); the fourth outcome
takes the remaining mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, getcontext
from fractions import Fraction

from .coherence import AssessmentSet, check_consistency, updated_lower_prevision
from .moments import (
    DiracMixture,
    MomentState,
    assessments_from_state,
    conditional_value,
    expectation,
    is_valid_state,
    marginal_moments,
    mixture_moments,
)
from .oracle import classical_oracle_prevision, grid_extrema
from .polynomial import Polynomial, to_fraction

DEFAULT_EPSILON = Fraction(1, 100)


def bell_state() -> MomentState:
    """Degree-2 state whose coins are uniform yet always agree."""
    z = {
        (0, 0, 0): 1,
        (1, 0, 0): Fraction(1, 3),
        (0, 1, 0): Fraction(1, 6),
        (0, 0, 1): Fraction(1, 6),
        (2, 0, 0): Fraction(1, 3),
        (0, 2, 0): 0,
        (0, 0, 2): 0,
        (1, 1, 0): 0,
        (1, 0, 1): 0,
        (0, 1, 1): Fraction(1, 6),
    }
    return MomentState(3, 2, z)


def check_epsilon(epsilon) -> Fraction:
    eps = to_fraction(epsilon)
    if not 0 < eps < Fraction(1, 6):
        raise ValueError(f"epsilon must lie in (0, 1/6), got {eps}")
    return eps


def bell_gamble(epsilon=DEFAULT_EPSILON) -> Polynomial:
    """``-(t1 + t2)^2 - (t1 + t3)(1 - 2 t1 - 2 t2) - eps``; at most ``-eps`` on the simplex."""
    eps = to_fraction(epsilon)
    t1, t2, t3 = Polynomial.variables(3)
    return -(t1 + t2) ** 2 - (t1 + t3) * (1 - 2 * t1 - 2 * t2) - eps


def heads_right() -> Polynomial:
    t1, t2, _ = Polynomial.variables(3)
    return t1 + t2


def heads_left() -> Polynomial:
    t1, _, t3 = Polynomial.variables(3)
    return t1 + t3


def matching_cases() -> list[tuple[str, Polynomial, str, Polynomial]]:
    """(label of q, q, label of pi, pi): Bob's coin given Alice's toss."""
    hr, hl = heads_right(), heads_left()
    return [
        ("H_r", hr, "H_l", hl),
        ("T_r", 1 - hr, "H_l", hl),
        ("H_r", hr, "T_l", 1 - hl),
        ("T_r", 1 - hr, "T_l", 1 - hl),
    ]


def common_cause_mixture(denominator: int = 10**6) -> DiracMixture:
    """Two equally weighted atoms at ``theta_1 = (3 -/+ sqrt 3)/6``, rounded to ``denominator``.

    Both atoms put no mass on the discordant outcomes.  The two first
    coordinates are rounded as ``a`` and ``1 - a`` so the first marginals
    stay exactly 1/2.
    """
    getcontext().prec = 60
    a = int((Decimal(denominator) * (3 - Decimal(3).sqrt()) / 6).to_integral_value())
    lo = Fraction(a, denominator)
    hi = 1 - lo
    half = Fraction(1, 2)
    return DiracMixture(((half, (lo, Fraction(0), Fraction(0))), (half, (hi, Fraction(0), Fraction(0)))))


@dataclass
class BellReport:
    epsilon: Fraction
    grid_step: Fraction
    grid_max: Fraction
    grid_argmax: tuple
    state_valid: bool
    state_value: Fraction
    oracle_value: Fraction
    consistent_d2: bool

    @property
    def violated(self) -> bool:
        return (self.grid_max <= -self.epsilon and self.oracle_value <= -self.epsilon
                and self.state_valid and self.state_value > 0)

    def lines(self) -> list[str]:
        e = self.epsilon
        return [
            f"epsilon = {e}",
            f"(a) max of q_bell on simplex grid step {self.grid_step}: {self.grid_max} <= -epsilon: "
            f"{self.grid_max <= -e}",
            f"(b) Bell state valid at degree 2: {self.state_valid}",
            f"(c) L(q_bell) = {self.state_value} (= 1/6 - epsilon: {self.state_value == Fraction(1, 6) - e})",
            f"(d) classical grid prevision of q_bell: {self.oracle_value} <= -epsilon: "
            f"{self.oracle_value <= -e}",
            f"{{q_bell}} consistent at degree 2: {self.consistent_d2}",
            f"violation: {self.violated}",
        ]


def demo_bell(epsilon=DEFAULT_EPSILON, grid_step=Fraction(1, 50)) -> BellReport:
    eps = check_epsilon(epsilon)
    q = bell_gamble(eps)
    _, (gmax, argmax) = grid_extrema(q, grid_step)
    L = bell_state()
    oracle = classical_oracle_prevision(q, AssessmentSet(3), grid_step)
    verdict = check_consistency(AssessmentSet(3, (q,)), 2)
    return BellReport(eps, to_fraction(grid_step), gmax, argmax, bool(is_valid_state(L)),
                      expectation(L, q), oracle.value, verdict.consistent)


@dataclass
class SocksReport:
    epsilon: Fraction
    cases: list  # (q label, pi label, dual value, primal value)
    bell_value: Fraction
    marginals: tuple
    mixture_marginals: tuple
    state_z011: Fraction
    mixture_z011: Fraction

    def lines(self) -> list[str]:
        out = ["updated previsions of Bob's coin after Alice's toss:"]
        for ql, pl, dual, primal in self.cases:
            out.append(f"  E({ql} | {pl}) = {dual}   (primal LP: {primal})")
        out.append(f"Bell value L(q_bell) = {self.bell_value} = 1/6 - {self.epsilon}")
        names = ("L(H_r)", "L(H_l)", "L(H_r^2)", "L(H_l^2)")
        out.append("marginals:   " + ", ".join(f"{k} = {v}" for k, v in zip(names, self.marginals)))
        out.append("two-atom mixture marginals: " + ", ".join(
            f"{k} ~ {float(v):.6f}" for k, v in zip(names, self.mixture_marginals)))
        out.append(f"z_011: state {self.state_z011}, any such mixture {self.mixture_z011}")
        return out


def demo_socks(epsilon=DEFAULT_EPSILON) -> SocksReport:
    eps = check_epsilon(epsilon)
    L = bell_state()
    G = assessments_from_state(L)
    cases = []
    for ql, q, pl, pi in matching_cases():
        dual = conditional_value(L, q, pi)
        primal = updated_lower_prevision(q, pi, G, 2).value
        cases.append((ql, pl, dual, primal))
    mix = mixture_moments(common_cause_mixture(), 2)
    return SocksReport(eps, cases, expectation(L, bell_gamble(eps)), marginal_moments(L),
                       marginal_moments(mix), L[(0, 1, 1)], mix[(0, 1, 1)])
