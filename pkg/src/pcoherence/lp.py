"""Exact rational linear programming.

A dense two-phase primal simplex method over :class:`fractions.Fraction`
with Bland's smallest-index rule, so it always terminates and, given the
same input, always pivots the same way.  Problem sizes in this package are
a few hundred rows and columns at most.

Only :func:`maximize` is public::

    maximize  c . x
    s.t.      A_ub x <= b_ub
              A_eq x == b_eq
              x_j >= 0  unless j in free
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None
    # for UNBOUNDED: a feasible direction along which the objective grows
    ray: tuple[Fraction, ...] | None = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows  # list of dict col -> Fraction (sparse)
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, col: int, obj: dict, obj_rhs: list):
        row = self.rows[r]
        p = row[col]
        if p != 1:
            inv = 1 / p
            for k in row:
                row[k] *= inv
            self.rhs[r] *= inv
        items = list(row.items())
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(col)
            if not f:
                continue
            for k, v in items:
                nv = other.get(k, 0) - f * v
                if nv:
                    other[k] = nv
                else:
                    other.pop(k, None)
            self.rhs[i] -= f * self.rhs[r]
        f = obj.get(col)
        if f:
            for k, v in items:
                nv = obj.get(k, 0) - f * v
                if nv:
                    obj[k] = nv
                else:
                    obj.pop(k, None)
            obj_rhs[0] -= f * self.rhs[r]
        self.basis[r] = col
        self.pivots += 1

    def reduced_costs(self, cost: dict) -> tuple[dict, list]:
        obj = {k: v for k, v in cost.items() if v}
        obj_rhs = [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = cost.get(b, 0)
            if not cb:
                continue
            for k, v in self.rows[i].items():
                nv = obj.get(k, 0) - cb * v
                if nv:
                    obj[k] = nv
                else:
                    obj.pop(k, None)
            obj_rhs[0] -= cb * self.rhs[i]
        return obj, obj_rhs

    def run(self, cost: dict, allowed) -> tuple[str, int | None]:
        """Maximise ``cost`` from the current basis.  Returns (status, entering column if unbounded)."""
        obj, obj_rhs = self.reduced_costs(cost)
        while True:
            entering = None
            for k in sorted(obj):
                if obj[k] > 0 and allowed(k):
                    entering = k
                    break
            if entering is None:
                return OPTIMAL, None
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is not None and a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED, entering
            self.pivot(best[1], entering, obj, obj_rhs)


def maximize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: Sequence[int] = (),
) -> LPResult:
    n = len(c)
    c = [Fraction(v) for v in c]
    free = set(free)
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint matrix and right-hand side lengths differ")

    # column layout: structural x_j (x_j^+), then x_j^- for free j, then slacks, then artificials
    neg_col = {}
    ncols = n
    for j in sorted(free):
        neg_col[j] = ncols
        ncols += 1

    def structural(row) -> dict:
        if len(row) != n:
            raise ValueError(f"constraint row of length {len(row)}, expected {n}")
        out = {}
        for j, v in enumerate(row):
            if v:
                v = Fraction(v)
                out[j] = v
                if j in neg_col:
                    out[neg_col[j]] = -v
        return out

    rows, rhs, basis = [], [], []
    needs_art = []
    for row, b in zip(A_ub, b_ub):
        r = structural(row)
        r[ncols] = Fraction(1)
        b = Fraction(b)
        if b < 0:
            r = {k: -v for k, v in r.items()}
            b = -b
            needs_art.append(len(rows))
        basis.append(ncols)
        ncols += 1
        rows.append(r)
        rhs.append(b)
    for row, b in zip(A_eq, b_eq):
        r = structural(row)
        b = Fraction(b)
        if b < 0:
            r = {k: -v for k, v in r.items()}
            b = -b
        needs_art.append(len(rows))
        basis.append(None)
        rows.append(r)
        rhs.append(b)
    first_art = ncols
    for i in needs_art:
        rows[i][ncols] = Fraction(1)
        basis[i] = ncols
        ncols += 1

    tab = _Tableau(rows, rhs, basis)

    if ncols > first_art:
        status, _ = tab.run({k: Fraction(-1) for k in range(first_art, ncols)}, lambda k: True)
        assert status == OPTIMAL
        if any(b >= first_art and tab.rhs[i] != 0 for i, b in enumerate(tab.basis)):
            return LPResult(INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= first_art:
                col = next((k for k in sorted(tab.rows[i]) if k < first_art), None)
                if col is None:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                    continue
                tab.pivot(i, col, {}, [Fraction(0)])
            i += 1
        for row in tab.rows:
            for k in [k for k in row if k >= first_art]:
                del row[k]

    cost = {}
    for j, v in enumerate(c):
        if v:
            cost[j] = v
            if j in neg_col:
                cost[neg_col[j]] = -v
    status, entering = tab.run(cost, lambda k: k < first_art)

    def collapse(values: dict) -> tuple[Fraction, ...]:
        x = [values.get(j, Fraction(0)) for j in range(n)]
        for j, k in neg_col.items():
            x[j] -= values.get(k, 0)
        return tuple(x)

    point = collapse({b: tab.rhs[i] for i, b in enumerate(tab.basis)})
    if status == UNBOUNDED:
        direction = {entering: Fraction(1)}
        for i, b in enumerate(tab.basis):
            a = tab.rows[i].get(entering)
            if a:
                direction[b] = -a
        return LPResult(UNBOUNDED, x=point, ray=collapse(direction), pivots=tab.pivots)
    value = sum((cj * xj for cj, xj in zip(c, point)), Fraction(0))
    return LPResult(OPTIMAL, x=point, objective=value, pivots=tab.pivots)
