"""Brute-force classical lower previsions on a simplex grid.

The classical lower prevision restricted to probability models supported
on the grid ``{theta : k * theta integer}`` is the LP

    min  sum_t w_t q(t)   s.t.  w >= 0, sum w = 1, sum_t w_t g_i(t) >= 0.

It is solved through its dual, ``max t0`` with ``t0 + sum l_i g_i(t) <= q(t)``
at every grid point, adding violated grid points one at a time.  This code
never touches the Bernstein cone, so it serves as an independent check on
:mod:`pcoherence.coherence`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import lp
from .coherence import AssessmentSet
from .errors import DimensionError, InfeasibleProgramError
from .polynomial import Polynomial, compositions, simplex_grid, to_fraction


@dataclass(frozen=True)
class OracleResult:
    value: Fraction
    point: tuple[Fraction, ...]
    grid_step: Fraction
    active_points: int = 1

    def __iter__(self):
        return iter((self.value, self.point))


def grid_steps(grid_step) -> int:
    step = to_fraction(grid_step)
    if step <= 0 or step.numerator != 1 or step.denominator < 2:
        raise ValueError(f"grid step must be 1/k with k >= 2, got {step}")
    return step.denominator


def _grid_scale(p: Polynomial, k: int) -> int:
    den = math.lcm(*(c.denominator for _, c in p.items())) if not p.is_zero() else 1
    return den * k ** max(p.total_degree, 0)


def _scaled_grid_values(p: Polynomial, k: int):
    """Yield ``(_grid_scale(p, k) * p(t), k * t)`` over the grid in ``simplex_grid`` order, all integers."""
    scale = _grid_scale(p, k)
    terms = [(e, int(c * scale / k ** sum(e))) for e, c in p.items()]
    for comp in compositions(k, p.n_vars + 1):
        x = comp[:-1]
        v = 0
        for e, c in terms:
            for xi, ei in zip(x, e):
                if ei:
                    c *= xi**ei
            v += c
        yield v, x


def grid_extrema(p: Polynomial, grid_step) -> tuple[tuple[Fraction, tuple], tuple[Fraction, tuple]]:
    """((min, argmin), (max, argmax)) of ``p`` over the simplex grid; first hit wins ties."""
    k = grid_steps(grid_step)
    lo = hi = None
    for v, x in _scaled_grid_values(p, k):
        if lo is None or v < lo[0]:
            lo = (v, x)
        if hi is None or v > hi[0]:
            hi = (v, x)
    scale = _grid_scale(p, k)
    return tuple((Fraction(v, scale), tuple(Fraction(c, k) for c in x)) for v, x in (lo, hi))


def classical_oracle_prevision(q: Polynomial, G: AssessmentSet, grid_step) -> OracleResult:
    if G.n_vars != q.n_vars:
        raise DimensionError("q and G disagree on n_vars")
    k = grid_steps(grid_step)
    if not G.gambles:
        (v, t), _ = grid_extrema(q, grid_step)
        return OracleResult(v, t, Fraction(1, k))

    points = list(simplex_grid(q.n_vars, k))
    qv = [q(t) for t in points]
    gv = [[g(t) for g in G.gambles] for t in points]
    m = len(G)
    # start from the simplex vertices
    active = [i for i, t in enumerate(points) if all(x in (0, 1) for x in t)]
    c = [1] + [0] * m
    while True:
        A = [[1] + list(gv[i]) for i in active]
        b = [qv[i] for i in active]
        res = lp.maximize(c, A_ub=A, b_ub=b, free=[0])
        if res.status == lp.UNBOUNDED:
            dt, dl = res.ray[0], res.ray[1:]
            # a grid point cuts the ray if dt + sum dl_i g_i(t) > 0
            score = [dt + sum(a * x for a, x in zip(dl, gv[i])) for i in range(len(points))]
            worst = max(range(len(points)), key=lambda i: (score[i], -i))
            if score[worst] <= 0:
                raise InfeasibleProgramError("no probability model on the grid satisfies the assessments")
            active.append(worst)
            continue
        t0, lam = res.x[0], res.x[1:]
        slack = [qv[i] - t0 - sum(a * x for a, x in zip(lam, gv[i])) for i in range(len(points))]
        worst = min(range(len(points)), key=lambda i: (slack[i], i))
        if slack[worst] >= 0:
            tight = min((i for i in active if slack[i] == 0), key=lambda i: (qv[i], i))
            return OracleResult(t0, points[tight], Fraction(1, k), len(active))
        active.append(worst)
